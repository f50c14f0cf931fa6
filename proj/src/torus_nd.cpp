#include "frf/torus_nd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "frf/circle_calculus.hpp"
#include "frf/errors.hpp"

namespace frf {

using detail::Complex;

namespace {

std::vector<Complex> forward(const TorusScalarField& f) {
  const auto shape = f.grid().shape();
  return detail::rfft(f.values(), shape);
}

TorusScalarField backward(const TorusGrid& grid, std::vector<Complex> spec) {
  const auto shape = grid.shape();
  return TorusScalarField(grid, detail::irfft(std::move(spec), shape));
}

// Signed wavevector of every half-spectrum entry, flattened.
struct ModeTable {
  std::size_t dim;
  std::vector<long> k;  // dim entries per mode
  std::size_t count() const { return k.size() / dim; }
  const long* at(std::size_t mode) const { return &k[mode * dim]; }
};

ModeTable modes(const TorusGrid& grid) {
  const std::size_t d = grid.dim(), m = grid.m(), half = m / 2 + 1;
  std::size_t count = half;
  for (std::size_t a = 0; a + 1 < d; ++a) count *= m;
  ModeTable table{d, std::vector<long>(count * d)};
  for (std::size_t f = 0; f < count; ++f) {
    std::size_t rest = f / half;
    table.k[f * d + d - 1] = static_cast<long>(f % half);
    for (std::size_t a = d - 1; a-- > 0;) {
      table.k[f * d + a] = detail::wavenumber(rest % m, m);
      rest /= m;
    }
  }
  return table;
}

bool is_nyquist(long k, std::size_t m) {
  return static_cast<std::size_t>(std::labs(k)) == m / 2;
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b,
                       const char* context) {
  if (!(a == b)) {
    throw InvalidInput(std::string(context) + ": torus grid mismatch");
  }
}

TorusScalarField dot(const TorusVectorField& a, const TorusVectorField& b) {
  TorusScalarField acc = TorusScalarField::zeros(a.grid());
  for (std::size_t i = 0; i < a.dim(); ++i) acc += a[i] * b[i];
  return acc;
}

TorusScalarField dealiased_dot(const TorusVectorField& a,
                               const TorusVectorField& b) {
  return dealias(dot(a, b));
}

TorusScalarField remove_mean(const TorusScalarField& f) {
  return f - TorusScalarField(f.grid(),
                              std::vector<double>(f.size(), integrate(f)));
}

// Per-axis phase factors e^{2 pi i k x_a} (cos for the Nyquist index).
struct Phases {
  std::vector<std::vector<Complex>> axis;
};

Phases phases(const TorusGrid& grid, const TorusPoint& x) {
  const std::size_t d = grid.dim(), m = grid.m();
  Phases p;
  for (std::size_t a = 0; a < d; ++a) {
    const std::size_t len = (a + 1 == d) ? m / 2 + 1 : m;
    std::vector<Complex> e(len);
    for (std::size_t i = 0; i < len; ++i) {
      const long k = (a + 1 == d) ? static_cast<long>(i)
                                  : detail::wavenumber(i, m);
      e[i] = is_nyquist(k, m)
                 ? Complex(std::cos(0.5 * kTwoPi * static_cast<double>(m) * x[a]), 0)
                 : std::polar(1.0, kTwoPi * static_cast<double>(k) * x[a]);
    }
    p.axis.push_back(std::move(e));
  }
  return p;
}

double evaluate_spectrum(const TorusGrid& grid, const std::vector<Complex>& c,
                         const Phases& p) {
  const std::size_t d = grid.dim(), m = grid.m(), half = m / 2 + 1;
  Complex acc = 0.0;
  for (std::size_t f = 0; f < c.size(); ++f) {
    const std::size_t il = f % half;
    Complex term = c[f] * p.axis[d - 1][il];
    if (il != 0 && il != m / 2) term *= 2.0;
    std::size_t rest = f / half;
    for (std::size_t a = d - 1; a-- > 0;) {
      term *= p.axis[a][rest % m];
      rest /= m;
    }
    acc += term;
  }
  return acc.real() / static_cast<double>(grid.size());
}

}  // namespace

TorusGrid::TorusGrid(std::size_t dim, std::size_t m) : dim_(dim), m_(m) {
  if (dim < 1 || dim > 3) {
    std::ostringstream msg;
    msg << "TorusGrid: dimension must be 1, 2 or 3, got " << dim;
    throw InvalidInput(msg.str());
  }
  if (m < 16 || (m & (m - 1)) != 0) {
    std::ostringstream msg;
    msg << "TorusGrid: samples per axis must be a power of two >= 16, got "
        << m;
    throw InvalidInput(msg.str());
  }
}

std::size_t TorusGrid::size() const {
  std::size_t s = 1;
  for (std::size_t a = 0; a < dim_; ++a) s *= m_;
  return s;
}

double TorusGrid::coordinate(std::size_t index, std::size_t axis) const {
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < dim_; ++a) stride *= m_;
  return static_cast<double>((index / stride) % m_) / static_cast<double>(m_);
}

TorusScalarField::TorusScalarField(TorusGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidInput("TorusScalarField: sample count does not match grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw InvalidInput("TorusScalarField: non-finite sample");
    }
  }
}

TorusScalarField TorusScalarField::zeros(const TorusGrid& grid) {
  return TorusScalarField(grid, std::vector<double>(grid.size(), 0.0));
}

TorusScalarField TorusScalarField::sample(
    const TorusGrid& grid, const std::function<double(const TorusPoint&)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    TorusPoint x{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(i, a);
    v[i] = f(x);
  }
  return TorusScalarField(grid, std::move(v));
}

double TorusScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

TorusScalarField& TorusScalarField::operator+=(const TorusScalarField& o) {
  require_same_grid(grid_, o.grid_, "TorusScalarField::operator+");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

TorusScalarField& TorusScalarField::operator-=(const TorusScalarField& o) {
  require_same_grid(grid_, o.grid_, "TorusScalarField::operator-");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

TorusScalarField& TorusScalarField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

TorusScalarField operator*(const TorusScalarField& a,
                           const TorusScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "TorusScalarField::operator*");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  return TorusScalarField(a.grid(), std::move(v));
}

TorusVectorField::TorusVectorField(std::vector<TorusScalarField> components)
    : components_(std::move(components)) {
  if (components_.empty() ||
      components_.size() != components_.front().grid().dim()) {
    throw InvalidInput("TorusVectorField: need one component per dimension");
  }
  for (const auto& c : components_) {
    require_same_grid(c.grid(), components_.front().grid(),
                      "TorusVectorField");
  }
}

TorusVectorField TorusVectorField::zeros(const TorusGrid& grid) {
  return TorusVectorField(std::vector<TorusScalarField>(
      grid.dim(), TorusScalarField::zeros(grid)));
}

double TorusVectorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.max_abs());
  return m;
}

TorusVectorField& TorusVectorField::operator+=(const TorusVectorField& o) {
  for (std::size_t i = 0; i < dim(); ++i) components_[i] += o[i];
  return *this;
}

TorusVectorField& TorusVectorField::operator-=(const TorusVectorField& o) {
  for (std::size_t i = 0; i < dim(); ++i) components_[i] -= o[i];
  return *this;
}

TorusVectorField& TorusVectorField::operator*=(double c) {
  for (auto& comp : components_) comp *= c;
  return *this;
}

TorusDensity::TorusDensity(TorusScalarField values)
    : values_(std::move(values)) {
  const auto& v = values_.values();
  const double lo = *std::min_element(v.begin(), v.end());
  if (!(lo > 0.0)) {
    throw InvalidInput("TorusDensity: values must be strictly positive");
  }
  const double mass = integrate(values_);
  if (std::abs(mass - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "TorusDensity: total mass must be 1, got " << mass;
    throw InvalidInput(msg.str());
  }
}

double integrate(const TorusScalarField& f) {
  double sum = 0.0, comp = 0.0;
  for (double v : f.values()) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(f.size());
}

TorusScalarField partial(const TorusScalarField& f, std::size_t axis) {
  const TorusGrid& grid = f.grid();
  if (axis >= grid.dim()) throw InvalidInput("partial: axis out of range");
  auto spec = forward(f);
  const ModeTable table = modes(grid);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const long k = table.at(i)[axis];
    spec[i] *= is_nyquist(k, grid.m())
                   ? Complex(0.0, 0.0)
                   : Complex(0.0, kTwoPi * static_cast<double>(k));
  }
  return backward(grid, std::move(spec));
}

TorusVectorField gradient(const TorusScalarField& f) {
  std::vector<TorusScalarField> comps;
  for (std::size_t a = 0; a < f.grid().dim(); ++a) comps.push_back(partial(f, a));
  return TorusVectorField(std::move(comps));
}

TorusScalarField div(const TorusVectorField& u) {
  TorusScalarField acc = partial(u[0], 0);
  for (std::size_t a = 1; a < u.dim(); ++a) acc += partial(u[a], a);
  return acc;
}

TorusScalarField laplace_de_rham(const TorusScalarField& f) {
  auto spec = forward(f);
  const ModeTable table = modes(f.grid());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    double k2 = 0.0;
    for (std::size_t a = 0; a < table.dim; ++a) {
      const double k = kTwoPi * static_cast<double>(table.at(i)[a]);
      k2 += k * k;
    }
    spec[i] *= k2;
  }
  return backward(f.grid(), std::move(spec));
}

TorusScalarField inv_laplace_mean_zero(const TorusScalarField& f) {
  auto spec = forward(f);
  const ModeTable table = modes(f.grid());
  spec[0] = 0.0;
  for (std::size_t i = 1; i < spec.size(); ++i) {
    double k2 = 0.0;
    for (std::size_t a = 0; a < table.dim; ++a) {
      const double k = kTwoPi * static_cast<double>(table.at(i)[a]);
      k2 += k * k;
    }
    spec[i] /= k2;
  }
  return backward(f.grid(), std::move(spec));
}

TorusScalarField dealias(const TorusScalarField& f) {
  const std::size_t m = f.grid().m();
  auto spec = forward(f);
  const ModeTable table = modes(f.grid());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    for (std::size_t a = 0; a < table.dim; ++a) {
      if (3 * static_cast<std::size_t>(std::labs(table.at(i)[a])) >= m) {
        spec[i] = 0.0;
        break;
      }
    }
  }
  return backward(f.grid(), std::move(spec));
}

std::vector<TorusScalarField> curl_components(const TorusVectorField& u) {
  std::vector<TorusScalarField> out;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    for (std::size_t j = i + 1; j < u.dim(); ++j) {
      out.push_back(partial(u[j], i) - partial(u[i], j));
    }
  }
  return out;
}

TorusVectorField divergence_free_part(const TorusVectorField& u) {
  const TorusVectorField grad_part =
      gradient(inv_laplace_mean_zero(div(u))) * -1.0;
  return u - grad_part;
}

double evaluate(const TorusScalarField& f, const TorusPoint& x) {
  return evaluate_spectrum(f.grid(), forward(f), phases(f.grid(), x));
}

double h1_inner_nd(const TorusVectorField& v, const TorusVectorField& w) {
  require_same_grid(v.grid(), w.grid(), "h1_inner_nd");
  return 0.25 * integrate(div(v) * div(w));
}

TorusVectorField nabla_alpha_identity(const TorusVectorField& v,
                                      const TorusVectorField& w,
                                      AlphaParam alpha) {
  require_same_grid(v.grid(), w.grid(), "nabla_alpha_identity");
  const TorusScalarField div_w = div(w);
  const TorusScalarField f =
      dot(gradient(div_w), v) + div_w * div(v) * (0.5 * (1.0 - alpha.value()));
  return gradient(inv_laplace_mean_zero(f)) * -1.0;
}

TorusVectorField geodesic_rhs_nd(const TorusVectorField& u, AlphaParam alpha) {
  const TorusScalarField phi = div(u);
  const TorusScalarField f =
      dealiased_dot(gradient(phi), u) +
      dealias(phi * phi) * (0.5 * (1.0 - alpha.value()));
  return gradient(inv_laplace_mean_zero(f));
}

TorusTrajectory integrate_nd(const TorusVectorField& u0, AlphaParam alpha,
                             double T, double dt, const NdOptions& options) {
  if (!(dt > 0.0) || dt > 1e-2) {
    std::ostringstream msg;
    msg << "integrate_nd: dt must lie in (0, 1e-2], got " << dt;
    throw InvalidInput(msg.str());
  }
  if (options.record_every == 0) {
    throw InvalidInput("integrate_nd: record_every must be positive");
  }
  const std::size_t steps = step_count(T, dt);
  std::vector<TorusScalarField> comps;
  for (const auto& c : u0.components()) comps.push_back(dealias(c));
  TorusVectorField u(std::move(comps));

  TorusTrajectory traj;
  traj.alpha = alpha;
  traj.times.push_back(0.0);
  traj.velocities.push_back(u);
  traj.divergences.push_back(div(u));

  for (std::size_t s = 0; s < steps; ++s) {
    const double t_next = static_cast<double>(s + 1) * dt;
    std::optional<std::string> failure;
    try {
      const TorusVectorField k1 = geodesic_rhs_nd(u, alpha);
      const TorusVectorField k2 = geodesic_rhs_nd(u + k1 * (0.5 * dt), alpha);
      const TorusVectorField k3 = geodesic_rhs_nd(u + k2 * (0.5 * dt), alpha);
      const TorusVectorField k4 = geodesic_rhs_nd(u + k3 * dt, alpha);
      TorusVectorField next = u + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
      if (next.max_abs() > options.blowup_cap) {
        failure = "|u| exceeded cap";
      } else if (div(next).max_abs() > options.blowup_cap) {
        failure = "|div u| exceeded cap";
      } else {
        u = std::move(next);
      }
    } catch (const InvalidInput&) {
      failure = "non-finite state";
    }
    if (failure) {
      traj.breakdown_time = t_next;
      traj.breakdown_reason = *failure;
      break;
    }
    if ((s + 1) % options.record_every == 0 || s + 1 == steps) {
      traj.times.push_back(t_next);
      traj.velocities.push_back(u);
      traj.divergences.push_back(div(u));
    }
  }
  return traj;
}

std::vector<double> pjn_residual(const TorusTrajectory& trajectory,
                                 AlphaParam alpha) {
  const std::size_t K = trajectory.times.size();
  if (K < 3) throw InvalidInput("pjn_residual: need >= 3 time samples");
  const double c = 0.5 * (1.0 - alpha.value());
  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < K; ++k) {
    const double span = trajectory.times[k + 1] - trajectory.times[k - 1];
    const auto& phi = trajectory.divergences[k];
    const TorusScalarField s =
        (trajectory.divergences[k + 1] - trajectory.divergences[k - 1]) *
            (1.0 / span) +
        dot(gradient(phi), trajectory.velocities[k]) + phi * phi * c;
    out.push_back(gradient(s).max_abs());
  }
  return out;
}

std::vector<double> pjn_residual_lagrangian(
    const std::vector<double>& times,
    const std::vector<TorusScalarField>& phi_labels, AlphaParam alpha) {
  const std::size_t K = times.size();
  if (K < 3 || phi_labels.size() != K) {
    throw InvalidInput(
        "pjn_residual_lagrangian: need >= 3 matching time samples");
  }
  const double c = 0.5 * (1.0 - alpha.value());
  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < K; ++k) {
    const double span = times[k + 1] - times[k - 1];
    const TorusScalarField s =
        (phi_labels[k + 1] - phi_labels[k - 1]) * (1.0 / span) +
        phi_labels[k] * phi_labels[k] * c;
    out.push_back(gradient(s).max_abs());
  }
  return out;
}

Alpha1NdPoint alpha1_solution_nd(const TorusScalarField& a,
                                 const TorusScalarField& b, double t) {
  require_same_grid(a.grid(), b.grid(), "alpha1_solution_nd");
  for (const TorusScalarField* f : {&a, &b}) {
    if (std::abs(integrate(*f)) > 1e-10 * std::max(1.0, f->max_abs())) {
      throw DomainError("alpha1_solution_nd: a and b must have zero mean");
    }
  }
  std::vector<double> e(a.size()), ae(a.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = std::exp(a[i] * t + b[i]);
    ae[i] = a[i] * e[i];
  }
  const TorusScalarField E(a.grid(), std::move(e));
  const double mass = integrate(E);
  const double mass_a = integrate(TorusScalarField(a.grid(), std::move(ae)));
  TorusScalarField jac = E * (1.0 / mass);
  std::vector<double> shift(a.size(), mass_a / mass);
  TorusScalarField phi = a - TorusScalarField(a.grid(), std::move(shift));
  std::vector<double> logs(a.size());
  for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = std::log(jac[i]);
  TorusScalarField chart =
      remove_mean(TorusScalarField(a.grid(), std::move(logs)));
  return {TorusDensity(std::move(jac)), std::move(phi), std::move(chart)};
}

std::vector<std::vector<TorusPoint>> flow_tracers(
    const std::vector<double>& times,
    const std::vector<TorusVectorField>& velocities,
    const std::vector<TorusPoint>& labels) {
  if (times.empty() || times.size() != velocities.size()) {
    throw InvalidInput("flow_tracers: need matching time samples");
  }
  const TorusGrid& grid = velocities.front().grid();
  const std::size_t d = grid.dim();
  auto spectra = [&](const TorusVectorField& u) {
    std::vector<std::vector<Complex>> s;
    for (const auto& c : u.components()) s.push_back(forward(c));
    return s;
  };
  auto velocity = [&](const std::vector<std::vector<Complex>>& spec,
                      const TorusPoint& x) {
    const Phases p = phases(grid, x);
    TorusPoint v{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < d; ++a) v[a] = evaluate_spectrum(grid, spec[a], p);
    return v;
  };
  auto shifted = [d](const TorusPoint& x, double h, const TorusPoint& k) {
    TorusPoint y = x;
    for (std::size_t a = 0; a < d; ++a) y[a] += h * k[a];
    return y;
  };

  std::vector<std::vector<TorusPoint>> out{labels};
  std::vector<TorusPoint> pos = labels;
  auto spec_lo = spectra(velocities.front());
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double h = times[k + 1] - times[k];
    const auto spec_hi = spectra(velocities[k + 1]);
    const auto spec_mid = spectra((velocities[k] + velocities[k + 1]) * 0.5);
    for (auto& x : pos) {
      const TorusPoint k1 = velocity(spec_lo, x);
      const TorusPoint k2 = velocity(spec_mid, shifted(x, 0.5 * h, k1));
      const TorusPoint k3 = velocity(spec_mid, shifted(x, 0.5 * h, k2));
      const TorusPoint k4 = velocity(spec_hi, shifted(x, h, k3));
      for (std::size_t a = 0; a < d; ++a) {
        x[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
      }
    }
    out.push_back(pos);
    spec_lo = spec_hi;
  }
  return out;
}

}  // namespace frf
