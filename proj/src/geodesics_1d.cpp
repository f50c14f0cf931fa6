#include "frf/geodesics_1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frf/errors.hpp"

namespace frf {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Integrator state: Eulerian velocity samples plus per-label slope and
// Jacobian, all stored as raw vectors so that non-finite intermediates can be
// detected instead of throwing from PeriodicField.
struct PjState {
  std::vector<double> u, m, jac;
};

PjState axpy(const PjState& x, double a, const PjState& k) {
  PjState out = x;
  for (std::size_t j = 0; j < x.u.size(); ++j) {
    out.u[j] += a * k.u[j];
    out.m[j] += a * k.m[j];
    out.jac[j] += a * k.jac[j];
  }
  return out;
}

bool finite(const PjState& s) {
  return all_finite(s.u) && all_finite(s.m) && all_finite(s.jac);
}

}  // namespace

VelocityFunction VelocityTrajectory::as_function() const {
  return linear_in_time(times, fields);
}

PeriodicField pj_rhs(const PeriodicField& u, AlphaParam alpha) {
  const PeriodicField ux = derivative(u);
  PeriodicField rhs = dealiased_product(u, ux) * -1.0;
  const double factor = 0.5 * (1.0 + alpha.value());
  if (factor != 0.0) {
    rhs -= inverse_A_dx(dealiased_product(ux, ux)) * factor;
  }
  return rhs;
}

double conserved_C(const PeriodicField& u, AlphaParam alpha) {
  const PeriodicField ux = derivative(u);
  return -0.5 * (1.0 + alpha.value()) * integrate(ux * ux);
}

VelocityTrajectory integrate_pj(const PeriodicField& u0, AlphaParam alpha,
                                double T, double dt,
                                const PjOptions& options) {
  if (!(dt > 0.0) || dt > 1e-2) {
    std::ostringstream msg;
    msg << "integrate_pj: dt must lie in (0, 1e-2], got " << dt;
    throw InvalidInput(msg.str());
  }
  if (std::abs(u0[0]) > 1e-10) {
    std::ostringstream msg;
    msg << "integrate_pj: u0 must vanish at x = 0, got " << u0[0];
    throw InvalidInput(msg.str());
  }
  if (options.record_every == 0) {
    throw InvalidInput("integrate_pj: record_every must be positive");
  }
  const std::size_t steps = step_count(T, dt);
  const PeriodicGrid grid = u0.grid();
  const std::size_t n = grid.size();
  const double a = alpha.value();

  auto rhs = [&](const PjState& s) {
    PjState k;
    const PeriodicField u(grid, s.u);
    k.u = pj_rhs(u, alpha).values();
    const double C = conserved_C(u, alpha);
    k.m.resize(n);
    k.jac.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      k.m[j] = C - 0.5 * (1.0 - a) * s.m[j] * s.m[j];
      k.jac[j] = s.m[j] * s.jac[j];
    }
    return k;
  };

  PjState state;
  state.u = dealias(u0).values();
  state.m = derivative(PeriodicField(grid, state.u)).values();
  state.jac.assign(n, 1.0);

  VelocityTrajectory traj;
  traj.alpha = alpha;
  traj.times.push_back(0.0);
  traj.fields.emplace_back(grid, state.u);
  traj.min_jacobian.push_back(1.0);

  auto check = [&](const PjState& s) -> std::optional<std::string> {
    if (!finite(s)) return "non-finite state";
    if (max_abs(s.u) > options.blowup_cap) return "|u| exceeded cap";
    if (max_abs(s.m) > options.blowup_cap) return "|u_x| exceeded cap";
    const double ux = derivative(PeriodicField(grid, s.u)).max_abs();
    if (ux > options.blowup_cap) return "|u_x| exceeded cap";
    const double jmin = *std::min_element(s.jac.begin(), s.jac.end());
    if (!(jmin > options.jacobian_floor)) return "Jacobian collapse";
    return std::nullopt;
  };

  for (std::size_t s = 0; s < steps; ++s) {
    const double t_next = static_cast<double>(s + 1) * dt;
    std::optional<std::string> failure;
    PjState next;
    // A blowing-up stage may already hold non-finite values; PeriodicField
    // rejects those, which is itself a breakdown signal.
    try {
      const PjState k1 = rhs(state);
      const PjState k2 = rhs(axpy(state, 0.5 * dt, k1));
      const PjState k3 = rhs(axpy(state, 0.5 * dt, k2));
      const PjState k4 = rhs(axpy(state, dt, k3));
      next = state;
      for (std::size_t j = 0; j < n; ++j) {
        next.u[j] += dt / 6.0 * (k1.u[j] + 2 * k2.u[j] + 2 * k3.u[j] + k4.u[j]);
        next.m[j] += dt / 6.0 * (k1.m[j] + 2 * k2.m[j] + 2 * k3.m[j] + k4.m[j]);
        next.jac[j] +=
            dt / 6.0 * (k1.jac[j] + 2 * k2.jac[j] + 2 * k3.jac[j] + k4.jac[j]);
      }
      failure = check(next);
    } catch (const InvalidInput&) {
      failure = "non-finite state";
    }
    if (failure) {
      traj.breakdown = Breakdown{t_next, *failure};
      break;
    }
    state = std::move(next);
    if ((s + 1) % options.record_every == 0 || s + 1 == steps) {
      traj.times.push_back(t_next);
      traj.fields.emplace_back(grid, state.u);
      traj.min_jacobian.push_back(
          *std::min_element(state.jac.begin(), state.jac.end()));
    }
  }
  return traj;
}

PeriodicField affine_chart_phi(const CircleDiffeo& eta) {
  return project_mean_zero(
      eta.derivative().map([](double v) { return std::log(v); }));
}

CircleDiffeo inverse_phi(const PeriodicField& f) {
  const double mean = integrate(f);
  if (std::abs(mean) > 1e-10 * std::max(1.0, f.max_abs())) {
    std::ostringstream msg;
    msg << "inverse_phi: chart values must have zero mean, got " << mean;
    throw DomainError(msg.str());
  }
  return CircleDiffeo::from_density(
      Density::normalized(f.map([](double v) { return std::exp(v); })));
}

GeodesicPoint alpha1_solution(const PeriodicField& a, const PeriodicField& b,
                              double t) {
  require_same_grid(a, b, "alpha1_solution");
  for (const PeriodicField* f : {&a, &b}) {
    if (std::abs(integrate(*f)) > 1e-10 * std::max(1.0, f->max_abs())) {
      throw DomainError("alpha1_solution: a and b must have zero mean");
    }
  }
  const PeriodicGrid& grid = a.grid();
  const std::size_t n = grid.size();
  std::vector<double> e(n), ae(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = std::exp(a[j] * t + b[j]);
    ae[j] = a[j] * e[j];
  }
  const PeriodicField E(grid, std::move(e));
  const PeriodicField AE(grid, std::move(ae));
  const double mass = integrate(E);
  const double mass_a = integrate(AE);
  // int_0^x E = mass x + P(x), int_0^x AE = mass_a x + Q(x); the linear parts
  // cancel in both eta - x and eta_t.
  const PeriodicField P = antiderivative(E);
  const PeriodicField Q = antiderivative(AE);
  CircleDiffeo eta = CircleDiffeo::from_displacement(P * (1.0 / mass));
  const PeriodicField eta_t = (Q * mass - P * mass_a) * (1.0 / (mass * mass));
  PeriodicField u = pushforward_velocity(eta_t, eta);
  return {std::move(eta), std::move(u)};
}

double burgers_breakdown_time(const PeriodicField& u0) {
  const PeriodicField du = derivative(u0);
  const double lo = *std::min_element(du.values().begin(), du.values().end());
  return lo < 0.0 ? -1.0 / lo : std::numeric_limits<double>::infinity();
}

GeodesicPoint alpham1_solution(const PeriodicField& u0, double t) {
  if (std::abs(u0[0]) > 1e-10) {
    throw InvalidInput("alpham1_solution: u0 must vanish at x = 0");
  }
  const double t_star = burgers_breakdown_time(u0);
  if (t >= t_star) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "alpham1_solution: t = " << t << " is past breakdown time "
        << t_star;
    throw BreakdownError(msg.str(), t_star);
  }
  CircleDiffeo eta = CircleDiffeo::from_displacement(u0 * t, 0.0);
  PeriodicField u = pushforward_velocity(u0, eta);
  return {std::move(eta), std::move(u)};
}

Density alpha0_density_geodesic(const Density& rho0, const Density& rho1,
                                double t) {
  require_same_grid(rho0.field(), rho1.field(), "alpha0_density_geodesic");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidInput("alpha0_density_geodesic: t must lie in [0, 1]");
  }
  const double theta = hellinger_distance(rho0, rho1);
  if (std::cos(theta) <= 1e-9) {
    throw DomainError("alpha0_density_geodesic: antipodal densities");
  }
  if (theta == 0.0) return rho0;
  const double w0 = std::sin((1.0 - t) * theta) / std::sin(theta);
  const double w1 = std::sin(t * theta) / std::sin(theta);
  std::vector<double> v(rho0.grid().size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double r = w0 * std::sqrt(rho0[j]) + w1 * std::sqrt(rho1[j]);
    v[j] = r * r;
  }
  return Density::normalized(PeriodicField(rho0.grid(), std::move(v)));
}

}  // namespace frf
