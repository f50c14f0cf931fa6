#include "frf/diffeo_group.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frf/errors.hpp"

namespace frf {

namespace {

double min_value(const PeriodicField& f) {
  return *std::min_element(f.values().begin(), f.values().end());
}

// Solves eta(y) = x for x in [0, 1]; eta is increasing with eta(0) = 0,
// eta(1) = 1, so the root lies in [0, 1].
double solve_monotone(const CircleDiffeo& eta, double x, std::size_t n) {
  double lo = 0.0, hi = 1.0;
  const double seed_width = 0.25 / static_cast<double>(n);
  while (hi - lo > seed_width) {
    const double mid = 0.5 * (lo + hi);
    if (eta(mid) < x) lo = mid; else hi = mid;
  }
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const auto [val, der] = eta.value_and_derivative(y);
    const double r = val - x;
    if (r < 0) lo = std::max(lo, y); else hi = std::min(hi, y);
    if (std::abs(r) <= 1e-15) return y;
    double next = y - r / der;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 1e-16) return next;
    y = next;
  }
  if (std::abs(eta(y) - x) <= 1e-12) return y;
  // Newton stalled: finish by bisection.
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (eta(mid) < x) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Density::Density(PeriodicField values) : values_(std::move(values)) {
  const double lo = min_value(values_);
  if (!(lo > 0.0)) {
    std::ostringstream msg;
    msg << "Density: values must be strictly positive, min is " << lo;
    throw InvalidInput(msg.str());
  }
  const double mass = integrate(values_);
  if (std::abs(mass - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Density: total mass must be 1, got " << mass;
    throw InvalidInput(msg.str());
  }
}

Density Density::normalized(const PeriodicField& values) {
  const double lo = min_value(values);
  if (!(lo > 0.0)) {
    std::ostringstream msg;
    msg << "Density: values must be strictly positive, min is " << lo;
    throw InvalidInput(msg.str());
  }
  return Density(values * (1.0 / integrate(values)));
}

Density Density::uniform(const PeriodicGrid& grid) {
  return Density(PeriodicField::constant(grid, 1.0));
}

CircleDiffeo::CircleDiffeo(PeriodicField d, PeriodicField jac)
    : d_(std::move(d)), jac_(std::move(jac)), interp_(d_) {}

CircleDiffeo CircleDiffeo::identity(const PeriodicGrid& grid) {
  return CircleDiffeo(PeriodicField::zeros(grid),
                      PeriodicField::constant(grid, 1.0));
}

CircleDiffeo CircleDiffeo::from_displacement(const PeriodicField& d,
                                             double jacobian_floor) {
  PeriodicField pinned = d - PeriodicField::constant(d.grid(), d[0]);
  PeriodicField jac =
      frf::derivative(pinned) + PeriodicField::constant(d.grid(), 1.0);
  const double lo = min_value(jac);
  if (!(lo > jacobian_floor)) {
    std::ostringstream msg;
    msg << "CircleDiffeo: Jacobian " << lo << " at or below floor "
        << jacobian_floor;
    throw DegenerateDiffeo(msg.str(), lo);
  }
  return CircleDiffeo(std::move(pinned), std::move(jac));
}

CircleDiffeo CircleDiffeo::from_density(const Density& rho) {
  return from_displacement(antiderivative(rho.field()));
}

std::pair<double, double> CircleDiffeo::value_and_derivative(double x) const {
  const auto [d, dd] = interp_.value_and_derivative(x);
  return {x + d, 1.0 + dd};
}

std::vector<double> CircleDiffeo::node_values() const {
  std::vector<double> v(d_.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = grid().point(j) + d_[j];
  return v;
}

CircleDiffeo compose(const CircleDiffeo& eta, const CircleDiffeo& xi) {
  require_same_grid(eta.displacement(), xi.displacement(), "compose");
  return CircleDiffeo::from_displacement(
      xi.displacement() + compose_field(eta.displacement(), xi));
}

CircleDiffeo invert(const CircleDiffeo& eta) {
  const PeriodicGrid& grid = eta.grid();
  const std::size_t n = grid.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    const double x = grid.point(j);
    d[j] = solve_monotone(eta, x, n) - x;
  }
  return CircleDiffeo::from_displacement(PeriodicField(grid, std::move(d)));
}

Density jacobian(const CircleDiffeo& eta) {
  return Density(eta.derivative());
}

PeriodicField sqrt_jac_embed(const CircleDiffeo& eta) {
  return eta.derivative().map([](double v) { return std::sqrt(v); });
}

PeriodicField compose_field(const PeriodicField& V, const CircleDiffeo& xi) {
  require_same_grid(V, xi.displacement(), "compose_field");
  const BandLimitedInterpolant interp(V);
  const auto at = xi.node_values();
  return PeriodicField(V.grid(), interp.evaluate(at));
}

PeriodicField pushforward_velocity(const PeriodicField& V,
                                   const CircleDiffeo& eta) {
  return compose_field(V, invert(eta));
}

VelocityFunction linear_in_time(std::vector<double> times,
                                std::vector<PeriodicField> fields) {
  if (times.empty() || times.size() != fields.size()) {
    throw InvalidInput("linear_in_time: need matching, non-empty samples");
  }
  return [times = std::move(times),
          fields = std::move(fields)](double t) -> PeriodicField {
    const double slack = 1e-12 * std::max(1.0, std::abs(times.back()));
    if (t < times.front() - slack || t > times.back() + slack) {
      std::ostringstream msg;
      msg << "linear_in_time: t = " << t << " outside sampled range";
      throw InvalidInput(msg.str());
    }
    if (times.size() == 1) return fields.front();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - times.begin());
    hi = std::clamp<std::size_t>(hi, 1, times.size() - 1);
    const std::size_t lo = hi - 1;
    const double w = std::clamp((t - times[lo]) / (times[hi] - times[lo]),
                                0.0, 1.0);
    return fields[lo] * (1.0 - w) + fields[hi] * w;
  };
}

std::size_t step_count(double T, double dt) {
  if (!(dt > 0.0) || !(T > 0.0) || !std::isfinite(T) || !std::isfinite(dt)) {
    throw InvalidInput("step_count: T and dt must be positive and finite");
  }
  const double steps = T / dt;
  const double rounded = std::round(steps);
  if (rounded < 1.0 || std::abs(steps - rounded) > 1e-9 * rounded) {
    std::ostringstream msg;
    msg << "step_count: T / dt = " << steps << " is not an integer";
    throw InvalidInput(msg.str());
  }
  return static_cast<std::size_t>(rounded);
}

DiffeoTrajectory flow(const VelocityFunction& u, const PeriodicGrid& grid,
                      double T, double dt) {
  const std::size_t steps = step_count(T, dt);
  const std::size_t n = grid.size();
  const auto labels = grid.points();
  std::vector<double> pos = labels;

  auto velocity_at = [&](double t, const std::vector<double>& at) {
    const PeriodicField field = u(t);
    require_same_grid(field, PeriodicField::zeros(grid), "flow");
    return BandLimitedInterpolant(field).evaluate(at);
  };
  auto axpy = [n](const std::vector<double>& x, double a,
                  const std::vector<double>& k) {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = x[j] + a * k[j];
    return out;
  };

  DiffeoTrajectory traj;
  traj.times.push_back(0.0);
  traj.diffeos.push_back(CircleDiffeo::identity(grid));
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    const auto k1 = velocity_at(t, pos);
    const auto k2 = velocity_at(t + 0.5 * dt, axpy(pos, 0.5 * dt, k1));
    const auto k3 = velocity_at(t + 0.5 * dt, axpy(pos, 0.5 * dt, k2));
    const auto k4 = velocity_at(t + dt, axpy(pos, dt, k3));
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) {
      pos[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      d[j] = pos[j] - labels[j];
    }
    const double t_next = static_cast<double>(s + 1) * dt;
    try {
      traj.diffeos.push_back(
          CircleDiffeo::from_displacement(PeriodicField(grid, std::move(d))));
    } catch (const DegenerateDiffeo& e) {
      std::ostringstream msg;
      msg << "flow: Jacobian collapse at t = " << t_next << " ("
          << e.min_jacobian() << ")";
      throw BreakdownError(msg.str(), t_next);
    } catch (const InvalidInput&) {
      throw BreakdownError("flow: non-finite positions", t_next);
    }
    traj.times.push_back(t_next);
    const auto& pinned = traj.diffeos.back().displacement();
    for (std::size_t j = 0; j < n; ++j) pos[j] = labels[j] + pinned[j];
  }
  return traj;
}

}  // namespace frf
