#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "frf/connections_1d.hpp"
#include "frf/errors.hpp"
#include "frf/geodesics_1d.hpp"
#include "frf/presets.hpp"
#include "frf/torus_nd.hpp"
#include "frf/validation.hpp"

namespace frf::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

const std::vector<std::string> kCommands = {"divergence", "geodesic",
                                            "validate", "fisher-rao"};

// Numeric output: one header row, 17 significant digits, '\n' line ends.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) s += ',';
    s += t.columns[i];
  }
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += fmt17(row[i]);
    }
    s += '\n';
  }
  return s;
}

ojson table_json(const Table& t) {
  ojson rows = ojson::array();
  for (const auto& row : t.rows) rows.push_back(row);
  return ojson{{"columns", t.columns}, {"rows", std::move(rows)}};
}

// What a command produced: the bulk table plus the metadata sidecar.
struct Artifact {
  Table table;
  ojson sidecar;
  // Overrides the default CSV rendering of `table` (validate prints names).
  std::string csv_override;
  int exit_code = kExitOk;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("out: cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

void emit(const RunConfig& cfg, Artifact& art, std::ostream& out) {
  if (cfg.format == "json") {
    ojson doc = art.sidecar;
    doc["data"] = table_json(art.table);
    const std::string text = doc.dump(2) + "\n";
    if (cfg.out.empty()) {
      out << text;
    } else {
      write_file(cfg.out, text);
    }
    return;
  }
  const std::string csv =
      art.csv_override.empty() ? render_csv(art.table) : art.csv_override;
  if (cfg.out.empty()) {
    out << csv;
  } else {
    write_file(cfg.out, csv);
    write_file(cfg.out + ".json", art.sidecar.dump(2) + "\n");
  }
}

ojson header(const RunConfig& cfg) {
  return ojson{{"schema", kSchemaVersion},
               {"command", cfg.command},
               {"config", config_to_json(cfg)}};
}

// ---------------------------------------------------------------- config

template <typename T>
T take(const nlohmann::json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(key + ": value has the wrong type");
  }
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

// Runs `f`, turning library precondition failures into config errors.
template <typename F>
auto checked(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  } catch (const std::domain_error& e) {
    fail(field, e.what());
  }
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::size_t family_dimension(const std::string& family) {
  if (family == "cosine") return 1;
  if (family == "two-mode") return 2;
  fail("family", "unknown family '" + family + "' (expected cosine or two-mode)");
}

ParametricFamily make_family(const std::string& name, const PeriodicGrid& g) {
  ParametricFamily fam;
  fam.dimension = family_dimension(name);
  if (name == "cosine") {
    fam.density = [g](std::span<const double> th) {
      const double t = th[0];
      return Density(PeriodicField::sample(
          g, [t](double x) { return 1.0 + t * std::cos(kTwoPi * x); }));
    };
  } else {
    fam.density = [g](std::span<const double> th) {
      const double t1 = th[0], t2 = th[1];
      return Density(PeriodicField::sample(g, [t1, t2](double x) {
        return 1.0 + t1 * std::cos(kTwoPi * x) + t2 * std::sin(2.0 * kTwoPi * x);
      }));
    };
  }
  return fam;
}

TorusScalarField check_mean_zero(TorusScalarField f, const std::string& field) {
  if (std::abs(integrate(f)) > 1e-12 * std::max(1.0, f.max_abs())) {
    fail(field, "torus data must have zero mean");
  }
  return f;
}

// ------------------------------------------------------------- commands

Artifact cmd_divergence(const RunConfig& cfg) {
  const PeriodicGrid g(cfg.n);
  const Density r1 = parse_density_spec(cfg.rho1, g);
  const Density r2 = parse_density_spec(cfg.rho2, g);
  Artifact art;
  art.table.columns = {"alpha", "divergence"};
  ojson values = ojson::array();
  for (double a : cfg.alpha) {
    const double d = alpha_divergence(r1, r2, AlphaParam(a));
    art.table.rows.push_back({a, d});
    values.push_back({{"alpha", a}, {"divergence", d}});
  }
  art.sidecar = header(cfg);
  art.sidecar["divergences"] = std::move(values);
  art.sidecar["hellinger_distance"] = hellinger_distance(r1, r2);
  return art;
}

Artifact cmd_fisher_rao(const RunConfig& cfg) {
  const PeriodicGrid g(cfg.n);
  const ParametricFamily fam = make_family(cfg.family, g);
  const Eigen::MatrixXd fisher = fisher_rao_matrix(fam, cfg.theta);
  const CircleDiffeo eta = CircleDiffeo::from_density(fam.density(cfg.theta));

  // Tangents of the lifted curves: antiderivatives of the density variations.
  std::vector<PeriodicField> tangents;
  for (std::size_t i = 0; i < fam.dimension; ++i) {
    std::vector<double> up = cfg.theta, down = cfg.theta;
    up[i] += fam.step;
    down[i] -= fam.step;
    const PeriodicField drho =
        (fam.density(up).field() - fam.density(down).field()) *
        (0.5 / fam.step);
    tangents.push_back(antiderivative(drho));
  }
  Artifact art;
  art.table.columns = {"alpha", "i", "j", "fisher", "lifted", "ratio"};
  ojson lifted_json = ojson::array();
  for (double a : cfg.alpha) {
    const DivergenceFn D = alpha_divergence_fn(AlphaParam(a));
    for (std::size_t i = 0; i < fam.dimension; ++i) {
      for (std::size_t j = 0; j < fam.dimension; ++j) {
        const double lifted =
            metric_from_divergence(D, eta, tangents[i], tangents[j]);
        const double f = fisher(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j));
        art.table.rows.push_back({a, static_cast<double>(i),
                                  static_cast<double>(j), f, lifted,
                                  lifted / f});
        lifted_json.push_back(
            {{"alpha", a}, {"i", i}, {"j", j}, {"lifted", lifted}});
      }
    }
  }
  ojson fisher_json = ojson::array();
  for (Eigen::Index i = 0; i < fisher.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < fisher.cols(); ++j) row.push_back(fisher(i, j));
    fisher_json.push_back(row);
  }
  art.sidecar = header(cfg);
  art.sidecar["fisher"] = std::move(fisher_json);
  art.sidecar["lifted"] = std::move(lifted_json);
  return art;
}

void append_1d(Table& t, double time, const PeriodicField& u) {
  const PeriodicField ux = derivative(u);
  for (std::size_t j = 0; j < u.size(); ++j) {
    t.rows.push_back({time, u.grid().point(j), u[j], ux[j]});
  }
}

ojson breakdown_json(const std::optional<Breakdown>& b) {
  if (!b) return nullptr;
  return ojson{{"time", b->time}, {"reason", b->reason}};
}

std::vector<double> record_times(const RunConfig& cfg) {
  const std::size_t steps = step_count(cfg.t_final, cfg.dt);
  std::vector<double> times;
  for (std::size_t s = 0; s <= steps; s += cfg.record_every) {
    times.push_back(static_cast<double>(s) * cfg.dt);
  }
  if ((steps % cfg.record_every) != 0) times.push_back(cfg.t_final);
  return times;
}

struct Alpha1Data {
  PeriodicField a, b;
};

Alpha1Data alpha1_data(const RunConfig& cfg, const PeriodicGrid& g) {
  return {project_mean_zero(parse_field_spec(cfg.a, g)),
          project_mean_zero(parse_field_spec(cfg.b, g))};
}

PeriodicField initial_velocity_1d(const RunConfig& cfg, const PeriodicGrid& g) {
  if (cfg.u0 == "chart") {
    const Alpha1Data d = alpha1_data(cfg, g);
    return alpha1_solution(d.a, d.b, 0.0).u;
  }
  return pin_at_origin(parse_field_spec(cfg.u0, g));
}

Artifact geodesic_1d_pde(const RunConfig& cfg) {
  const PeriodicGrid g(cfg.n);
  const AlphaParam alpha(cfg.alpha.front());
  const PeriodicField u0 = initial_velocity_1d(cfg, g);
  PjOptions opts;
  opts.record_every = cfg.record_every;
  const VelocityTrajectory traj =
      integrate_pj(u0, alpha, cfg.t_final, cfg.dt, opts);

  Artifact art;
  art.table.columns = {"t", "x", "u", "div_u"};
  ojson conserved = ojson::array();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    append_1d(art.table, traj.times[k], traj.fields[k]);
    conserved.push_back(
        {{"t", traj.times[k]}, {"C", conserved_C(traj.fields[k], alpha)}});
  }
  art.sidecar = header(cfg);
  art.sidecar["columns"] = art.table.columns;
  art.sidecar["conserved_C"] = std::move(conserved);
  art.sidecar["min_jacobian"] = traj.min_jacobian;
  art.sidecar["breakdown"] = breakdown_json(traj.breakdown);

  // Closed-form comparison where one exists for this initial data.
  if (alpha.is_upper_endpoint() && cfg.u0 == "chart") {
    const Alpha1Data d = alpha1_data(cfg, g);
    double err = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      err = std::max(err, max_abs_diff(traj.fields[k],
                                       alpha1_solution(d.a, d.b, traj.times[k]).u));
    }
    art.sidecar["closed_form_max_abs_du"] = err;
  } else if (alpha.is_lower_endpoint()) {
    // Eulerian agreement degrades as slopes steepen; compare up to 0.8 t*.
    const double window = 0.8 * burgers_breakdown_time(u0);
    double err = 0.0;
    for (std::size_t k = 0; k < traj.times.size() && traj.times[k] <= window;
         ++k) {
      err = std::max(err, max_abs_diff(traj.fields[k],
                                       alpham1_solution(u0, traj.times[k]).u));
    }
    art.sidecar["closed_form_max_abs_du"] = err;
    art.sidecar["closed_form_window"] =
        std::isfinite(window) ? ojson(window) : ojson(nullptr);
    const double t_star = burgers_breakdown_time(u0);
    art.sidecar["predicted_breakdown"] =
        std::isfinite(t_star) ? ojson(t_star) : ojson(nullptr);
  }
  return art;
}

Artifact geodesic_1d_closed(const RunConfig& cfg) {
  const PeriodicGrid g(cfg.n);
  const AlphaParam alpha(cfg.alpha.front());
  Artifact art;
  art.sidecar = header(cfg);
  const std::vector<double> times = record_times(cfg);

  if (alpha.is_upper_endpoint() || alpha.is_lower_endpoint()) {
    art.table.columns = {"t", "x", "u", "div_u"};
    art.sidecar["columns"] = art.table.columns;
    ojson conserved = ojson::array();
    std::optional<Breakdown> breakdown;
    const Alpha1Data d = alpha1_data(cfg, g);
    const PeriodicField u0 = initial_velocity_1d(cfg, g);
    for (double t : times) {
      PeriodicField u = PeriodicField::zeros(g);
      if (alpha.is_upper_endpoint()) {
        u = alpha1_solution(d.a, d.b, t).u;
      } else {
        try {
          u = alpham1_solution(u0, t).u;
        } catch (const BreakdownError& e) {
          breakdown = Breakdown{e.time(), "closed-form breakdown time reached"};
          break;
        }
      }
      append_1d(art.table, t, u);
      conserved.push_back({{"t", t}, {"C", conserved_C(u, alpha)}});
    }
    art.sidecar["conserved_C"] = std::move(conserved);
    art.sidecar["breakdown"] = breakdown_json(breakdown);
    return art;
  }

  // alpha = 0: great circle between the two densities, t in [0, 1].
  const Density r1 = parse_density_spec(cfg.rho1, g);
  const Density r2 = parse_density_spec(cfg.rho2, g);
  art.table.columns = {"t", "x", "rho"};
  for (double t : times) {
    const Density rho = alpha0_density_geodesic(r1, r2, t);
    for (std::size_t j = 0; j < g.size(); ++j) {
      art.table.rows.push_back({t, g.point(j), rho[j]});
    }
  }
  art.sidecar["columns"] = art.table.columns;
  art.sidecar["hellinger_distance"] = hellinger_distance(r1, r2);
  art.sidecar["breakdown"] = nullptr;
  return art;
}

std::vector<std::string> axis_columns(std::size_t dim, const char* prefix) {
  std::vector<std::string> c;
  for (std::size_t a = 1; a <= dim; ++a) c.push_back(prefix + std::to_string(a));
  return c;
}

void append_coordinates(std::vector<double>& row, const TorusGrid& G,
                        std::size_t i) {
  for (std::size_t a = 0; a < G.dim(); ++a) row.push_back(G.coordinate(i, a));
}

Artifact geodesic_nd_pde(const RunConfig& cfg) {
  const TorusGrid G(cfg.dim, cfg.n);
  const AlphaParam alpha(cfg.alpha.front());
  const TorusScalarField phi0 = parse_torus_spec(cfg.u0, G);
  const TorusVectorField u0 = gradient(inv_laplace_mean_zero(phi0)) * -1.0;
  NdOptions opts;
  opts.record_every = cfg.record_every;
  const TorusTrajectory traj = integrate_nd(u0, alpha, cfg.t_final, cfg.dt, opts);

  Artifact art;
  art.table.columns = {"t"};
  for (const auto& c : axis_columns(cfg.dim, "x")) art.table.columns.push_back(c);
  for (const auto& c : axis_columns(cfg.dim, "u")) art.table.columns.push_back(c);
  art.table.columns.push_back("div_u");
  ojson conserved = ojson::array();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& u = traj.velocities[k];
    const auto& phi = traj.divergences[k];
    for (std::size_t i = 0; i < G.size(); ++i) {
      std::vector<double> row{traj.times[k]};
      append_coordinates(row, G, i);
      for (std::size_t a = 0; a < G.dim(); ++a) row.push_back(u[a][i]);
      row.push_back(phi[i]);
      art.table.rows.push_back(std::move(row));
    }
    conserved.push_back(
        {{"t", traj.times[k]},
         {"C", -0.5 * (1.0 + alpha.value()) * integrate(phi * phi)}});
  }
  art.sidecar = header(cfg);
  art.sidecar["columns"] = art.table.columns;
  art.sidecar["conserved_C"] = std::move(conserved);
  art.sidecar["breakdown"] =
      traj.breakdown_time
          ? ojson{{"time", *traj.breakdown_time},
                  {"reason", traj.breakdown_reason}}
          : ojson(nullptr);
  return art;
}

Artifact geodesic_nd_closed(const RunConfig& cfg) {
  const TorusGrid G(cfg.dim, cfg.n);
  const TorusScalarField a = parse_torus_spec(cfg.a, G);
  const TorusScalarField b = parse_torus_spec(cfg.b, G);
  Artifact art;
  art.table.columns = {"t"};
  for (const auto& c : axis_columns(cfg.dim, "x")) art.table.columns.push_back(c);
  art.table.columns.push_back("jacobian");
  art.table.columns.push_back("phi");
  for (double t : record_times(cfg)) {
    const Alpha1NdPoint p = alpha1_solution_nd(a, b, t);
    for (std::size_t i = 0; i < G.size(); ++i) {
      std::vector<double> row{t};
      append_coordinates(row, G, i);
      row.push_back(p.jacobian.field()[i]);
      row.push_back(p.phi_labels[i]);
      art.table.rows.push_back(std::move(row));
    }
  }
  art.sidecar = header(cfg);
  art.sidecar["columns"] = art.table.columns;
  art.sidecar["coordinates"] = "lagrangian";
  art.sidecar["breakdown"] = nullptr;
  return art;
}

Artifact cmd_geodesic(const RunConfig& cfg) {
  const bool closed = cfg.method == "closed-form";
  if (cfg.dim == 1) return closed ? geodesic_1d_closed(cfg) : geodesic_1d_pde(cfg);
  return closed ? geodesic_nd_closed(cfg) : geodesic_nd_pde(cfg);
}

std::size_t worker_threads() {
  const std::size_t hw =
      std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const char* env = std::getenv("FRF_NUM_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) {
    throw ConfigError(std::string("FRF_NUM_THREADS: expected a positive "
                                  "integer, got '") + env + "'");
  }
  return std::min<std::size_t>(hw, static_cast<std::size_t>(v));
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

Artifact cmd_validate(const RunConfig& cfg, std::size_t threads) {
  SuiteOptions opts;
  opts.n = cfg.n;
  opts.seed = cfg.seed;
  opts.threads = threads;
  const std::vector<Check> checks = run_suite(cfg.suite, opts);

  Artifact art;
  art.table.columns = {"measured", "tolerance", "passed"};
  std::string csv = "suite,check,measured,relation,bound,passed\n";
  ojson list = ojson::array();
  bool all = true;
  for (const Check& c : checks) {
    all = all && c.passed;
    art.table.rows.push_back({c.measured, c.tolerance, c.passed ? 1.0 : 0.0});
    csv += c.suite + "," + csv_quote(c.name) + "," + fmt17(c.measured) + "," +
           (c.at_least ? ">=" : "<=") + "," + fmt17(c.tolerance) + "," +
           (c.passed ? "true" : "false") + "\n";
    list.push_back({{"suite", c.suite},
                    {"check", c.name},
                    {"measured", c.measured},
                    {"relation", c.at_least ? ">=" : "<="},
                    {"bound", c.tolerance},
                    {"passed", c.passed}});
  }
  art.csv_override = std::move(csv);
  art.sidecar = header(cfg);
  art.sidecar["checks"] = std::move(list);
  art.sidecar["passed"] = all;
  art.exit_code = all ? kExitOk : kExitFailure;
  return art;
}

}  // namespace

// ------------------------------------------------------------ config I/O

ojson config_to_json(const RunConfig& c) {
  return ojson{{"command", c.command},
               {"n", c.n},
               {"dim", c.dim},
               {"alpha", c.alpha},
               {"t_final", c.t_final},
               {"dt", c.dt},
               {"method", c.method},
               {"u0", c.u0},
               {"a", c.a},
               {"b", c.b},
               {"rho1", c.rho1},
               {"rho2", c.rho2},
               {"family", c.family},
               {"theta", c.theta},
               {"record_every", c.record_every},
               {"suite", c.suite},
               {"seed", c.seed},
               {"out", c.out},
               {"format", c.format}};
}

RunConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  const nlohmann::json& obj = doc.contains("config") ? doc.at("config") : doc;
  if (!obj.is_object()) throw ConfigError("config: expected a JSON object");
  if (doc.contains("schema") &&
      take<int>(doc.at("schema"), "schema") != kSchemaVersion) {
    throw ConfigError("schema: unsupported version");
  }
  RunConfig c;
  using Setter = std::function<void(const nlohmann::json&)>;
  const std::vector<std::pair<std::string, Setter>> setters = {
      {"command", [&](const auto& v) { c.command = take<std::string>(v, "command"); }},
      {"n", [&](const auto& v) { c.n = take<std::size_t>(v, "n"); }},
      {"dim", [&](const auto& v) { c.dim = take<std::size_t>(v, "dim"); }},
      {"alpha", [&](const auto& v) { c.alpha = take<std::vector<double>>(v, "alpha"); }},
      {"t_final", [&](const auto& v) { c.t_final = take<double>(v, "t_final"); }},
      {"dt", [&](const auto& v) { c.dt = take<double>(v, "dt"); }},
      {"method", [&](const auto& v) { c.method = take<std::string>(v, "method"); }},
      {"u0", [&](const auto& v) { c.u0 = take<std::string>(v, "u0"); }},
      {"a", [&](const auto& v) { c.a = take<std::string>(v, "a"); }},
      {"b", [&](const auto& v) { c.b = take<std::string>(v, "b"); }},
      {"rho1", [&](const auto& v) { c.rho1 = take<std::string>(v, "rho1"); }},
      {"rho2", [&](const auto& v) { c.rho2 = take<std::string>(v, "rho2"); }},
      {"family", [&](const auto& v) { c.family = take<std::string>(v, "family"); }},
      {"theta", [&](const auto& v) { c.theta = take<std::vector<double>>(v, "theta"); }},
      {"record_every", [&](const auto& v) { c.record_every = take<std::size_t>(v, "record_every"); }},
      {"suite", [&](const auto& v) { c.suite = take<std::string>(v, "suite"); }},
      {"seed", [&](const auto& v) { c.seed = take<std::uint64_t>(v, "seed"); }},
      {"out", [&](const auto& v) { c.out = take<std::string>(v, "out"); }},
      {"format", [&](const auto& v) { c.format = take<std::string>(v, "format"); }},
  };
  for (const auto& [key, value] : obj.items()) {
    auto it = std::find_if(setters.begin(), setters.end(),
                           [&](const auto& s) { return s.first == key; });
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(value);
  }
  return c;
}

RunConfig resolve(RunConfig c) {
  if (!contains(kCommands, c.command)) {
    fail("command", "unknown command '" + c.command + "'");
  }
  if (c.format != "csv" && c.format != "json") {
    fail("format", "expected csv or json, got '" + c.format + "'");
  }
  if (c.method != "pde" && c.method != "closed-form") {
    fail("method", "expected pde or closed-form, got '" + c.method + "'");
  }
  if (c.dim < 1 || c.dim > 3) fail("dim", "expected 1, 2 or 3");
  if (c.command != "geodesic" && c.dim != 1) {
    fail("dim", "only the geodesic command runs on higher-dimensional tori");
  }
  if (c.n == 0) c.n = c.dim == 1 ? PeriodicGrid::kDefaultSize : 64;
  if (c.dim == 1) {
    checked("n", [&] { return PeriodicGrid(c.n); });
  } else {
    checked("n", [&] { return TorusGrid(c.dim, c.n); });
  }

  if (c.alpha.empty()) {
    if (c.command == "divergence") c.alpha = {-1.0, 0.0, 1.0};
    if (c.command == "fisher-rao" || c.command == "geodesic") c.alpha = {0.0};
  }
  for (double a : c.alpha) checked("alpha", [&] { return AlphaParam(a); });

  if (c.command == "divergence") {
    if (c.rho1.empty()) fail("rho1", "a density spec is required");
    if (c.rho2.empty()) fail("rho2", "a density spec is required");
    const PeriodicGrid g(c.n);
    checked("rho1", [&] { return parse_density_spec(c.rho1, g); });
    checked("rho2", [&] { return parse_density_spec(c.rho2, g); });
  }

  if (c.command == "fisher-rao") {
    const std::size_t dimension = family_dimension(c.family);
    if (c.theta.empty()) c.theta.assign(dimension, 0.0);
    if (c.theta.size() != dimension) {
      fail("theta", "family '" + c.family + "' takes " +
                        std::to_string(dimension) + " parameter(s)");
    }
    const PeriodicGrid g(c.n);
    checked("theta", [&] {
      const ParametricFamily fam = make_family(c.family, g);
      std::vector<double> th = c.theta;
      for (std::size_t i = 0; i < dimension; ++i) {
        for (double s : {-fam.step, fam.step}) {
          th[i] = c.theta[i] + s;
          fam.density(th);
        }
        th[i] = c.theta[i];
      }
      return fam.density(th);
    });
  }

  if (c.command == "validate") {
    if (!is_known_suite(c.suite)) {
      fail("suite", "unknown suite '" + c.suite +
                        "' (expected calculus, group, divergence, duality, "
                        "geodesic-1d, torus-nd or all)");
    }
  }

  if (c.command == "geodesic") {
    if (c.alpha.size() != 1) fail("alpha", "geodesic takes a single value");
    const AlphaParam alpha(c.alpha.front());
    if (!(c.dt > 0.0) || c.dt > 1e-2) fail("dt", "must lie in (0, 1e-2]");
    if (!(c.t_final > 0.0) || !std::isfinite(c.t_final)) {
      fail("t_final", "must be positive");
    }
    checked("t_final", [&] { return step_count(c.t_final, c.dt); });
    if (c.record_every == 0) fail("record_every", "must be positive");
    const bool closed = c.method == "closed-form";
    const bool flat = alpha.is_upper_endpoint() || alpha.is_lower_endpoint();

    if (c.dim == 1) {
      const PeriodicGrid g(c.n);
      if (closed && !flat && alpha.value() != 0.0) {
        fail("alpha", "closed forms exist only for alpha in {-1, 0, 1}");
      }
      if (c.a.empty()) c.a = "alpha1-a";
      if (c.b.empty()) c.b = "alpha1-b";
      checked("a", [&] { return parse_field_spec(c.a, g); });
      checked("b", [&] { return parse_field_spec(c.b, g); });
      if (c.u0.empty()) c.u0 = alpha.is_upper_endpoint() ? "chart" : "sine";
      if (c.u0 != "chart") checked("u0", [&] { return parse_field_spec(c.u0, g); });
      if (closed && alpha.is_upper_endpoint() && c.u0 != "chart") {
        fail("u0", "the alpha = 1 closed form is parametrized by a and b; "
                   "use u0 = chart");
      }
      if (closed && alpha.value() == 0.0) {
        if (c.t_final > 1.0) fail("t_final", "the great circle is traced for t in [0, 1]");
        if (c.rho1.empty()) c.rho1 = "uniform";
        if (c.rho2.empty()) c.rho2 = "bump";
        const Density r1 = checked("rho1", [&] { return parse_density_spec(c.rho1, g); });
        const Density r2 = checked("rho2", [&] { return parse_density_spec(c.rho2, g); });
        checked("rho2", [&] { return alpha0_density_geodesic(r1, r2, 0.0); });
      }
    } else {
      const TorusGrid G(c.dim, c.n);
      if (closed && !alpha.is_upper_endpoint()) {
        fail("alpha", "the torus closed form exists only for alpha = 1");
      }
      if (c.u0.empty()) c.u0 = "mixed";
      if (c.a.empty()) c.a = "mixed";
      if (c.b.empty()) c.b = "zero";
      checked("u0", [&] { return parse_torus_spec(c.u0, G); });
      checked("a", [&] { return check_mean_zero(parse_torus_spec(c.a, G), "a"); });
      checked("b", [&] { return check_mean_zero(parse_torus_spec(c.b, G), "b"); });
    }
  }
  return c;
}

// ------------------------------------------------------------ entry point

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "Divergences, alpha-connections and geodesics on the diffeomorphism "
      "group of the circle and the flat torus."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  RunConfig flags;
  std::string config_path;
  struct Override {
    CLI::Option* option;
    std::function<void(RunConfig&)> apply;
  };
  std::vector<std::pair<CLI::App*, std::vector<Override>>> subs;

  auto add = [&](CLI::App* sub, std::vector<Override>& list, auto member,
                 const std::string& name, const std::string& help) {
    CLI::Option* opt = sub->add_option(name, flags.*member, help);
    list.push_back({opt, [&flags, member](RunConfig& c) {
                      c.*member = flags.*member;
                    }});
    return opt;
  };

  for (const std::string& name : kCommands) {
    CLI::App* sub = nullptr;
    if (name == "divergence") {
      sub = app.add_subcommand(name, "alpha-divergences between two densities");
    } else if (name == "geodesic") {
      sub = app.add_subcommand(name, "geodesic of an alpha-connection");
    } else if (name == "validate") {
      sub = app.add_subcommand(name, "run invariant suites");
    } else {
      sub = app.add_subcommand(name, "Fisher-Rao metric against the lifted metric");
    }
    std::vector<Override> list;
    sub->add_option("--config", config_path,
                    "Load settings from a config or sidecar JSON file");
    add(sub, list, &RunConfig::n, "--n", "Samples (per axis on the torus)");
    add(sub, list, &RunConfig::out, "--out", "Output path (stdout when omitted)");
    add(sub, list, &RunConfig::format, "--format", "csv or json");
    if (name == "divergence" || name == "fisher-rao" || name == "geodesic") {
      add(sub, list, &RunConfig::alpha, "--alpha", "alpha value(s), comma separated")
          ->delimiter(',');
    }
    if (name == "divergence" || name == "geodesic") {
      add(sub, list, &RunConfig::rho1, "--rho1", "First density spec");
      add(sub, list, &RunConfig::rho2, "--rho2", "Second density spec");
    }
    if (name == "geodesic") {
      add(sub, list, &RunConfig::dim, "--dim", "Torus dimension (1 = circle)");
      add(sub, list, &RunConfig::t_final, "--t-final", "Time horizon");
      add(sub, list, &RunConfig::dt, "--dt", "Time step");
      add(sub, list, &RunConfig::method, "--method", "pde or closed-form");
      add(sub, list, &RunConfig::u0, "--u0", "Initial velocity spec");
      add(sub, list, &RunConfig::a, "--a", "Chart slope spec (alpha = 1)");
      add(sub, list, &RunConfig::b, "--b", "Chart offset spec (alpha = 1)");
      add(sub, list, &RunConfig::record_every, "--record-every",
          "Record every k-th step");
    }
    if (name == "fisher-rao") {
      add(sub, list, &RunConfig::family, "--family", "cosine or two-mode");
      add(sub, list, &RunConfig::theta, "--theta", "Parameter point, comma separated")
          ->delimiter(',');
    }
    if (name == "validate") {
      add(sub, list, &RunConfig::suite, "--suite",
          "calculus, group, divergence, duality, geodesic-1d, torus-nd or all");
      add(sub, list, &RunConfig::seed, "--seed", "Seed for random test data");
    }
    subs.emplace_back(sub, std::move(list));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig cfg;
    for (auto& [sub, list] : subs) {
      if (!sub->parsed()) continue;
      if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw ConfigError("config: cannot read '" + config_path + "'");
        nlohmann::json doc;
        try {
          doc = nlohmann::json::parse(f);
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError("config: " + std::string(e.what()));
        }
        cfg = config_from_json(doc);
        if (!cfg.command.empty() && cfg.command != sub->get_name()) {
          throw ConfigError("config: file is for command '" + cfg.command + "'");
        }
      }
      cfg.command = sub->get_name();
      for (const Override& o : list) {
        if (o.option->count() > 0) o.apply(cfg);
      }
    }
    cfg = resolve(std::move(cfg));
    const std::size_t threads = worker_threads();

    Artifact art;
    try {
      if (cfg.command == "divergence") {
        art = cmd_divergence(cfg);
      } else if (cfg.command == "geodesic") {
        art = cmd_geodesic(cfg);
      } else if (cfg.command == "validate") {
        art = cmd_validate(cfg, threads);
      } else {
        art = cmd_fisher_rao(cfg);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitFailure;
    }
    emit(cfg, art, out);
    if (cfg.command == "validate" && art.exit_code != kExitOk) {
      err << "validate: some checks failed\n";
    }
    return art.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace frf::cli
