#include "frf/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <thread>

#include "frf/connections_1d.hpp"
#include "frf/errors.hpp"
#include "frf/geodesics_1d.hpp"
#include "frf/torus_nd.hpp"

namespace frf {

namespace {

using Rng = std::mt19937_64;

class Recorder {
 public:
  explicit Recorder(std::string suite) : suite_(std::move(suite)) {}

  void at_most(const std::string& name, double measured, double tolerance) {
    checks_.push_back({suite_, name, measured, tolerance, false,
                       std::isfinite(measured) && measured <= tolerance});
  }
  void at_least(const std::string& name, double measured, double bound) {
    checks_.push_back({suite_, name, measured, bound, true,
                       std::isfinite(measured) && measured >= bound});
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  std::string suite_;
  std::vector<Check> checks_;
};

struct TrigPoly {
  std::vector<double> c, s;  // coefficients of cos/sin(2 pi k x), k = 1..K

  double operator()(double x) const {
    double v = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double w = kTwoPi * static_cast<double>(k + 1) * x;
      v += c[k] * std::cos(w) + s[k] * std::sin(w);
    }
    return v;
  }
};

TrigPoly random_poly(Rng& rng, std::size_t modes, double amplitude) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  TrigPoly p;
  for (std::size_t k = 1; k <= modes; ++k) {
    p.c.push_back(amplitude * U(rng) / static_cast<double>(k));
    p.s.push_back(amplitude * U(rng) / static_cast<double>(k));
  }
  return p;
}

PeriodicField random_field(const PeriodicGrid& g, Rng& rng, std::size_t modes,
                           double amplitude) {
  const TrigPoly p = random_poly(rng, modes, amplitude);
  return PeriodicField::sample(g, p);
}

PeriodicField random_tangent(const PeriodicGrid& g, Rng& rng,
                             std::size_t modes, double amplitude) {
  const PeriodicField f = random_field(g, rng, modes, amplitude);
  return f - PeriodicField::constant(g, f[0]);
}

// Displacement amplitudes keep eta' within [0.6, 1.4].
CircleDiffeo random_diffeo(const PeriodicGrid& g, Rng& rng) {
  return CircleDiffeo::from_displacement(random_tangent(g, rng, 3, 0.01));
}

Density random_density(const PeriodicGrid& g, Rng& rng) {
  return Density::normalized(
      random_field(g, rng, 4, 0.6).map([](double v) { return std::exp(v); }));
}

double rel_diff(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

Rng suite_rng(const SuiteOptions& o, std::uint64_t salt) {
  return Rng(o.seed * 0x9E3779B97F4A7C15ULL + salt);
}

// ---------------------------------------------------------------- calculus

// (A^{-1} u)(x) = -int_0^x (x - y) u(y) dy + x int_0^1 (1 - y) u(y) dy, by
// composite 5-point Gauss-Legendre.
double inverse_A_quadrature(const TrigPoly& u, double x) {
  static const std::array<double, 5> node = {
      0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
      0.9061798459386640};
  static const std::array<double, 5> weight = {
      0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
      0.2369268850561891, 0.2369268850561891};
  auto integral = [&](double lo, double hi, const auto& f) {
    const int panels = 64;
    const double w = (hi - lo) / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * w;
      for (std::size_t i = 0; i < node.size(); ++i) {
        acc += weight[i] * f(mid + 0.5 * w * node[i]);
      }
    }
    return 0.5 * w * acc;
  };
  const double local =
      x > 0.0 ? integral(0.0, x, [&](double y) { return (x - y) * u(y); })
              : 0.0;
  const double whole =
      integral(0.0, 1.0, [&](double y) { return (1.0 - y) * u(y); });
  return -local + x * whole;
}

std::vector<Check> suite_calculus(const SuiteOptions& o) {
  Recorder r("calculus");
  Rng rng = suite_rng(o, 1);
  const PeriodicGrid g(o.n);

  double roundtrip = 0.0, pinned = 0.0, mean_derivative = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    const PeriodicField u = random_field(g, rng, 8, 1.0);
    const PeriodicField h = inverse_A(u);
    const PeriodicField back = derivative(derivative(h)) * -1.0;
    roundtrip = std::max(roundtrip, max_abs_diff(back, u) / u.max_abs());
    pinned = std::max(pinned, std::abs(h[0]));
    const PeriodicField f = random_field(g, rng, 16, 1.0);
    mean_derivative =
        std::max(mean_derivative, std::abs(integrate(derivative(f))));
  }
  r.at_most("inverse_A then -d2/dx2 recovers u (relative)", roundtrip, 1e-9);
  r.at_most("inverse_A vanishes at x = 0", pinned, 0.0);
  r.at_most("integral of a derivative vanishes", mean_derivative, 1e-13);

  const PeriodicGrid g512(512);
  double quad = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const TrigPoly p = random_poly(rng, 8, 1.0);
    const PeriodicField h = inverse_A(PeriodicField::sample(g512, p));
    for (std::size_t j = 0; j < g512.size(); ++j) {
      quad = std::max(quad,
                      std::abs(h[j] - inverse_A_quadrature(p, g512.point(j))));
    }
  }
  r.at_most("inverse_A matches quadrature at n = 512", quad, 1e-8);
  return r.take();
}

// ------------------------------------------------------------------- group

std::vector<Check> suite_group(const SuiteOptions& o) {
  Recorder r("group");
  Rng rng = suite_rng(o, 2);
  const PeriodicGrid g(o.n);
  const CircleDiffeo id = CircleDiffeo::identity(g);

  double assoc = 0.0, neutral = 0.0, inverse = 0.0, chain = 0.0,
         hellinger = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const CircleDiffeo a = random_diffeo(g, rng);
    const CircleDiffeo b = random_diffeo(g, rng);
    const CircleDiffeo c = random_diffeo(g, rng);
    assoc = std::max(assoc, max_abs_diff(compose(compose(a, b), c).displacement(),
                                         compose(a, compose(b, c)).displacement()));
    neutral = std::max({neutral,
                        max_abs_diff(compose(id, a).displacement(), a.displacement()),
                        max_abs_diff(compose(a, id).displacement(), a.displacement())});
    const CircleDiffeo a_inv = invert(a);
    inverse = std::max({inverse, compose(a, a_inv).displacement().max_abs(),
                        compose(a_inv, a).displacement().max_abs()});
    const PeriodicField lhs = jacobian(compose(a, b)).field();
    const PeriodicField rhs = compose_field(a.derivative(), b) * b.derivative();
    chain = std::max(chain, max_abs_diff(lhs, rhs));
    const PeriodicField ea = sqrt_jac_embed(a), eb = sqrt_jac_embed(b);
    const double angle = std::acos(std::clamp(integrate(ea * eb), -1.0, 1.0));
    hellinger = std::max(
        hellinger, std::abs(angle - hellinger_distance(jacobian(a), jacobian(b))));
  }
  r.at_most("compose is associative", assoc, 1e-8);
  r.at_most("identity is neutral", neutral, 1e-8);
  r.at_most("invert is a two-sided inverse", inverse, 1e-8);
  r.at_most("jacobian obeys the chain rule", chain, 1e-7);
  r.at_most("sqrt-Jacobian angle equals hellinger_distance", hellinger, 1e-12);

  // d/dt Jac(eta) = (u' o eta) Jac(eta) along a steady flow.
  const PeriodicField u = random_tangent(g, rng, 3, 0.05);
  const double dt = 1e-3;
  const DiffeoTrajectory traj =
      flow([&](double) { return u; }, g, 0.2, dt);
  const PeriodicField du = derivative(u);
  double jac_rate = 0.0;
  for (std::size_t k : {50u, 100u, 150u}) {
    const PeriodicField rate =
        (traj.diffeos[k + 1].derivative() - traj.diffeos[k - 1].derivative()) *
        (0.5 / dt);
    const PeriodicField expected =
        compose_field(du, traj.diffeos[k]) * traj.diffeos[k].derivative();
    jac_rate = std::max(jac_rate, max_abs_diff(rate, expected));
  }
  r.at_most("Jacobian evolves by the divergence along a flow", jac_rate, 1e-5);
  return r.take();
}

// -------------------------------------------------------------- divergence

const std::array<double, 5> kAlphaGrid = {-1.0, -0.5, 0.0, 0.5, 1.0};

std::vector<Check> suite_divergence(const SuiteOptions& o) {
  Recorder r("divergence");
  Rng rng = suite_rng(o, 3);
  const PeriodicGrid g(o.n);

  double negative = 0.0, self = 0.0, endpoint = 0.0, hellinger = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Density p = random_density(g, rng);
    const Density q = random_density(g, rng);
    for (double a : kAlphaGrid) {
      negative = std::max(negative, -alpha_divergence(p, q, AlphaParam(a)));
      if (trial < 50) {
        self = std::max(self, std::abs(alpha_divergence(p, p, AlphaParam(a))));
      }
    }
    if (trial < 50) {
      const double eps = 1e-6;
      endpoint = std::max(
          {endpoint,
           std::abs(alpha_divergence(p, q, AlphaParam(1.0 - eps)) -
                    alpha_divergence(p, q, AlphaParam(1.0))),
           std::abs(alpha_divergence(p, q, AlphaParam(-1.0 + eps)) -
                    alpha_divergence(p, q, AlphaParam(-1.0)))});
      hellinger = std::max(hellinger,
                           std::abs(alpha_divergence(p, q, AlphaParam(0.0)) -
                                    (1.0 - std::cos(hellinger_distance(p, q)))));
    }
  }
  r.at_most("divergences are non-negative (max of -D)", std::max(negative, 0.0),
            1e-12);
  r.at_most("divergence of a density with itself vanishes", self, 1e-12);
  r.at_most("interior formula approaches the endpoint forms", endpoint, 1e-4);
  r.at_most("alpha = 0 divergence equals 1 - cos(hellinger)", hellinger, 1e-12);

  double metric = 0.0, connection = 0.0, flat_end = 0.0;
  for (double a : kAlphaGrid) {
    const AlphaParam alpha(a);
    const DivergenceFn D = alpha_divergence_fn(alpha);
    for (int trial = 0; trial < 20; ++trial) {
      const CircleDiffeo eta = random_diffeo(g, rng);
      const PeriodicField V = random_tangent(g, rng, 4, 0.5);
      const PeriodicField W = random_tangent(g, rng, 4, 0.5);
      const PeriodicField Z = random_tangent(g, rng, 4, 0.5);
      metric = std::max(metric, rel_diff(metric_from_divergence(D, eta, V, W),
                                         h1_inner(V, W, eta)));
      if (trial >= 5) continue;
      const double third = christoffel_from_divergence(D, eta, V, W, Z);
      const double expected = -h1_inner(christoffel(alpha, eta, W, V), Z, eta);
      if (alpha.is_lower_endpoint()) {
        // Scale: the alpha = 1 value of the same contraction.
        const double scale = std::abs(
            h1_inner(christoffel(AlphaParam(1.0), eta, W, V), Z, eta));
        flat_end = std::max(flat_end, std::abs(third) / scale);
      } else {
        connection = std::max(connection, rel_diff(third, expected));
      }
    }
  }
  r.at_most("second difference of D recovers the metric (relative)", metric,
            1e-4);
  r.at_most("third difference of D recovers the connection (relative)",
            connection, 1e-3);
  r.at_most("third difference of D vanishes at alpha = -1 (relative)",
            flat_end, 1e-3);

  // rho_t = 1 + t cos(2 pi x) lifted through eta_t = x + t sin(2 pi x)/(2 pi).
  const PeriodicField V = PeriodicField::sample(
      g, [](double x) { return std::sin(kTwoPi * x) / kTwoPi; });
  ParametricFamily family;
  family.density = [&g](std::span<const double> theta) {
    const double t = theta[0];
    return Density(PeriodicField::sample(
        g, [t](double x) { return 1.0 + t * std::cos(kTwoPi * x); }));
  };
  const std::array<double, 1> origin = {0.0};
  const double g11 = fisher_rao_matrix(family, origin)(0, 0);
  double lifted_err = 0.0, ratio_err = 0.0;
  for (double a : kAlphaGrid) {
    const double lifted = metric_from_divergence(
        alpha_divergence_fn(AlphaParam(a)), CircleDiffeo::identity(g), V, V);
    lifted_err = std::max(lifted_err, rel_diff(lifted, 0.125));
    ratio_err = std::max(ratio_err, rel_diff(lifted / g11, 0.25));
  }
  r.at_most("lifted metric on the cosine family equals 1/8 (relative)",
            lifted_err, 1e-6);
  r.at_most("lifted metric over Fisher-Rao equals 1/4 (relative)", ratio_err,
            1e-6);
  return r.take();
}

// ---------------------------------------------------------------- duality

std::vector<Check> suite_duality(const SuiteOptions& o) {
  Recorder r("duality");
  Rng rng = suite_rng(o, 4);
  const PeriodicGrid g(o.n);

  double dual = 0.0, compat = 0.0;
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    for (int trial = 0; trial < 2; ++trial) {
      const CircleDiffeo eta = random_diffeo(g, rng);
      const PeriodicField V = random_tangent(g, rng, 4, 0.3);
      const PeriodicField W = random_tangent(g, rng, 4, 0.3);
      const PeriodicField Z = random_tangent(g, rng, 4, 0.3);
      dual = std::max({dual, duality_residual(AlphaParam(a), eta, V, W, Z),
                       duality_residual(AlphaParam(-a), eta, V, W, Z)});
    }
  }
  for (int trial = 0; trial < 3; ++trial) {
    const CircleDiffeo eta = random_diffeo(g, rng);
    const PeriodicField V = random_tangent(g, rng, 4, 0.3);
    const PeriodicField W = random_tangent(g, rng, 4, 0.3);
    const PeriodicField Z = random_tangent(g, rng, 4, 0.3);
    compat = std::max({compat, duality_residual(AlphaParam(0.0), eta, V, W, Z),
                       duality_residual(AlphaParam(0.0), eta, V, Z, W)});
  }
  r.at_most("duality residual for pairs (a, -a)", dual, 1e-6);
  r.at_most("alpha = 0 metric compatibility residual", compat, 1e-6);

  double symmetry = 0.0, interpolation = 0.0, bilinear = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const CircleDiffeo eta = random_diffeo(g, rng);
    const PeriodicField V = random_tangent(g, rng, 4, 0.5);
    const PeriodicField W = random_tangent(g, rng, 4, 0.5);
    const PeriodicField X = random_tangent(g, rng, 4, 0.5);
    const PeriodicField g1 = christoffel(AlphaParam(1.0), eta, W, V);
    const double scale = std::max(1.0, g1.max_abs());
    symmetry = std::max(
        symmetry,
        max_abs_diff(g1, christoffel(AlphaParam(1.0), eta, V, W)) / scale);
    for (double a : {-1.0, -0.3, 0.0, 0.6}) {
      interpolation = std::max(
          interpolation,
          max_abs_diff(christoffel(AlphaParam(a), eta, W, V),
                       g1 * (0.5 * (1.0 + a))) /
              scale);
    }
    const PeriodicField combo =
        christoffel(AlphaParam(0.2), eta, W, V * 2.0 - X * 0.5);
    const PeriodicField split = christoffel(AlphaParam(0.2), eta, W, V) * 2.0 -
                                christoffel(AlphaParam(0.2), eta, W, X) * 0.5;
    bilinear = std::max(bilinear, max_abs_diff(combo, split) / scale);
  }
  r.at_most("Christoffel symbols are symmetric", symmetry, 1e-12);
  r.at_most("Christoffel symbols are linear in alpha", interpolation, 1e-12);
  r.at_most("Christoffel symbols are bilinear", bilinear, 1e-12);

  double flat = 0.0;
  for (double a : {-1.0, 1.0}) {
    for (int trial = 0; trial < 2; ++trial) {
      const CircleDiffeo eta = random_diffeo(g, rng);
      const PeriodicField X = random_tangent(g, rng, 3, 0.3);
      const PeriodicField Y = random_tangent(g, rng, 3, 0.3);
      const PeriodicField Z = random_tangent(g, rng, 3, 0.3);
      flat = std::max(
          flat, curvature_eval(AlphaParam(a), eta, X, Y, Z).commutator.max_abs());
    }
  }
  r.at_most("curvature vanishes at alpha = +-1", flat, 1e-4);
  return r.take();
}

// ------------------------------------------------------------ geodesic-1d

struct Alpha1Setup {
  PeriodicField a, b;
};

Alpha1Setup alpha1_setup(const PeriodicGrid& g) {
  return {PeriodicField::sample(
              g, [](double x) { return 0.3 * std::sin(kTwoPi * x); }),
          project_mean_zero(PeriodicField::sample(
              g, [](double x) { return 0.2 * std::cos(kTwoPi * x); }))};
}

double alpha1_error(const Alpha1Setup& s, double T, double dt,
                    std::size_t stride) {
  const PeriodicField u0 = alpha1_solution(s.a, s.b, 0.0).u;
  const VelocityTrajectory traj = integrate_pj(u0, AlphaParam(1.0), T, dt);
  double err = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); k += stride) {
    err = std::max(err, max_abs_diff(traj.fields[k],
                                     alpha1_solution(s.a, s.b, traj.times[k]).u));
  }
  return std::max(err, max_abs_diff(traj.fields.back(),
                                    alpha1_solution(s.a, s.b, T).u));
}

std::vector<Check> suite_geodesic(const SuiteOptions& o) {
  Recorder r("geodesic-1d");
  const PeriodicGrid g(o.n);
  const Alpha1Setup s = alpha1_setup(g);

  r.at_most("alpha = 1 solver matches the closed form on [0, 0.5]",
            alpha1_error(s, 0.5, 1e-3, 10), 1e-5);
  const double coarse = alpha1_error(s, 0.5, 1e-2, 1);
  const double fine = alpha1_error(s, 0.5, 5e-3, 2);
  r.at_least("halving dt shrinks the alpha = 1 error by", coarse / fine, 8.0);

  {
    // Burgers data with t* = 1; the minimum slope sits on a grid node.
    const PeriodicField u0 = PeriodicField::sample(
        g, [](double x) { return std::sin(kTwoPi * x) / kTwoPi; });
    const double dt = 1e-3;
    const double t_star = burgers_breakdown_time(u0);
    const VelocityTrajectory traj =
        integrate_pj(u0, AlphaParam(-1.0), 1.5, dt);
    double err = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); k += 10) {
      if (traj.times[k] > 0.8 * t_star) break;
      err = std::max(err, max_abs_diff(traj.fields[k],
                                       alpham1_solution(u0, traj.times[k]).u));
    }
    r.at_most("alpha = -1 solver matches the flat geodesic up to 0.8 t*", err,
              1e-5);
    const double observed = traj.breakdown
                                ? traj.breakdown->time
                                : std::numeric_limits<double>::infinity();
    r.at_most("observed breakdown time minus t*", std::abs(observed - t_star),
              2.0 * dt);
  }

  {
    const PeriodicField u0 = PeriodicField::sample(g, [](double x) {
      return (0.5 * std::sin(kTwoPi * x) + 0.1 * std::sin(2 * kTwoPi * x)) /
             kTwoPi;
    });
    const VelocityTrajectory traj = integrate_pj(u0, AlphaParam(0.0), 0.5, 1e-3);
    auto energy = [](const PeriodicField& u) {
      const PeriodicField ux = derivative(u);
      return integrate(ux * ux);
    };
    const double e0 = energy(traj.fields.front());
    double drift = 0.0;
    for (const auto& u : traj.fields) {
      drift = std::max(drift, std::abs(energy(u) - e0) / e0);
    }
    r.at_most("alpha = 0 flow conserves the Hunter-Saxton energy (relative)",
              drift, 1e-8);

    // Density path against the great circle, reparametrized by arc length.
    const DiffeoTrajectory path =
        flow(traj.as_function(), g, 0.5, 1e-3);
    const Density rho0 = Density::uniform(g);
    const Density rho_end = jacobian(path.diffeos.back());
    const double total = hellinger_distance(rho0, rho_end);
    double sphere = 0.0;
    for (std::size_t k = 0; k < path.times.size(); k += 10) {
      const Density rho = jacobian(path.diffeos[k]);
      const double frac = hellinger_distance(rho0, rho) / total;
      sphere = std::max(
          sphere,
          max_abs_diff(alpha0_density_geodesic(rho0, rho_end,
                                               std::min(frac, 1.0))
                           .field(),
                       rho.field()));
    }
    r.at_most("alpha = 0 density path follows the great circle", sphere, 1e-4);
  }

  {
    const double h = 0.05;
    double straight = 0.0;
    for (double t = h; t < 1.0; t += 0.25) {
      const PeriodicField prev =
          affine_chart_phi(alpha1_solution(s.a, s.b, t - h).eta);
      const PeriodicField mid = affine_chart_phi(alpha1_solution(s.a, s.b, t).eta);
      const PeriodicField next =
          affine_chart_phi(alpha1_solution(s.a, s.b, t + h).eta);
      straight = std::max(straight,
                          ((next - mid * 2.0 + prev) * (1.0 / (h * h))).max_abs());
    }
    r.at_most("alpha = 1 geodesics are straight in the affine chart", straight,
              1e-8);
  }
  return r.take();
}

// --------------------------------------------------------------- torus-nd

std::vector<Check> suite_torus(const SuiteOptions& o) {
  Recorder r("torus-nd");
  Rng rng = suite_rng(o, 6);
  const TorusGrid G(2, 64);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto random_scalar = [&](double amplitude) {
    std::vector<std::array<double, 4>> modes;
    for (int i = 0; i < 4; ++i) {
      modes.push_back({std::round(3.0 * U(rng)), std::round(3.0 * U(rng)),
                       amplitude * U(rng), amplitude * U(rng)});
    }
    return TorusScalarField::sample(G, [&](const TorusPoint& x) {
      double v = 0.0;
      for (const auto& m : modes) {
        const double w = kTwoPi * (m[0] * x[0] + m[1] * x[1]);
        v += m[2] * std::cos(w) + m[3] * std::sin(w);
      }
      return v;
    });
  };

  double curl = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const TorusVectorField u({random_scalar(0.3), random_scalar(0.3)});
    for (const auto& c : curl_components(geodesic_rhs_nd(u, AlphaParam(0.4)))) {
      curl = std::max(curl, c.max_abs());
    }
  }
  r.at_most("geodesic right-hand side is curl-free", curl, 1e-10);

  const TorusScalarField a = TorusScalarField::sample(G, [](const TorusPoint& x) {
    return 0.4 * std::sin(kTwoPi * x[0]) +
           0.3 * std::cos(kTwoPi * (x[0] + x[1])) +
           0.2 * std::sin(2.0 * kTwoPi * x[1]);
  });
  const TorusScalarField b = TorusScalarField::zeros(G);
  {
    const double h = 1e-3;
    std::vector<double> times;
    std::vector<TorusScalarField> phi;
    for (int k = 0; k <= 100; ++k) {
      times.push_back(k * 5 * h);
      phi.push_back(alpha1_solution_nd(a, b, times.back()).phi_labels);
    }
    const auto res = pjn_residual_lagrangian(times, phi, AlphaParam(1.0));
    r.at_most("alpha = 1 closed form solves the torus equation",
              *std::max_element(res.begin(), res.end()), 1e-6);
  }
  {
    const TorusVectorField swirl(
        {TorusScalarField::sample(
             G, [](const TorusPoint& x) { return 0.05 * std::sin(kTwoPi * x[1]); }),
         TorusScalarField::sample(G, [](const TorusPoint& x) {
           return 0.05 * std::cos(kTwoPi * x[0]);
         })});
    const TorusVectorField u0 = gradient(inv_laplace_mean_zero(a)) * -1.0 + swirl;
    NdOptions opts;
    opts.record_every = 10;
    const TorusTrajectory traj = integrate_nd(u0, AlphaParam(1.0), 0.5, 1e-3, opts);
    std::vector<TorusPoint> labels;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        labels.push_back({0.1 + 0.25 * i, 0.05 + 0.25 * j, 0.0});
      }
    }
    const auto positions = flow_tracers(traj.times, traj.velocities, labels);
    double phi_err = 0.0, helmholtz = 0.0;
    const TorusVectorField solenoidal0 = divergence_free_part(traj.velocities[0]);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      helmholtz = std::max(
          helmholtz,
          (divergence_free_part(traj.velocities[k]) - solenoidal0).max_abs());
      if (k % 5 != 0) continue;
      const Alpha1NdPoint exact = alpha1_solution_nd(a, b, traj.times[k]);
      for (std::size_t l = 0; l < labels.size(); ++l) {
        phi_err = std::max(phi_err,
                           std::abs(evaluate(traj.divergences[k], positions[k][l]) -
                                    evaluate(exact.phi_labels, labels[l])));
      }
    }
    r.at_most("torus solver follows the alpha = 1 closed form along particles",
              phi_err, 1e-4);
    r.at_most("divergence-free part of u is constant in time", helmholtz, 1e-8);
  }

  {
    const PeriodicGrid g(64);
    const TorusGrid line(1, 64);
    const PeriodicField u0 = PeriodicField::sample(g, [](double x) {
      return 0.3 * std::sin(kTwoPi * x) / kTwoPi +
             0.1 * std::cos(2.0 * kTwoPi * x) - 0.1;
    });
    double reduction = 0.0;
    for (double alpha : {0.0, 0.5}) {
      const double dt = 1e-3;
      const VelocityTrajectory one = integrate_pj(u0, AlphaParam(alpha), 0.3, dt);
      const TorusTrajectory nd = integrate_nd(
          TorusVectorField({TorusScalarField(line, u0.values())}),
          AlphaParam(alpha), 0.3, dt);
      // The torus flow carries a spatially constant velocity offset relative
      // to the pinned 1-D flow, so its slopes are those of the 1-D solution
      // translated by s(t) = int_0^t (mean u(0) - mean u(tau)) dtau.
      const double mean0 = integrate(u0);
      double shift = 0.0;
      for (std::size_t k = 0; k < one.times.size(); ++k) {
        if (k > 0) {
          shift += 0.5 * dt *
                   (2.0 * mean0 - integrate(one.fields[k - 1]) -
                    integrate(one.fields[k]));
        }
        const BandLimitedInterpolant slope(derivative(one.fields[k]));
        for (std::size_t j = 0; j < g.size(); ++j) {
          reduction = std::max(
              reduction, std::abs(slope(g.point(j) - shift) - nd.divergences[k][j]));
        }
      }
    }
    r.at_most("one-dimensional torus run reproduces the circle solver",
              reduction, 1e-5);

    double identity = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const PeriodicField v = random_tangent(g, rng, 4, 0.5);
      const PeriodicField w = random_tangent(g, rng, 4, 0.5);
      const AlphaParam alpha(0.3 * trial - 0.2);
      const PeriodicField expected =
          derivative(w) * v -
          christoffel(alpha, CircleDiffeo::identity(g), w, v);
      const TorusVectorField got = nabla_alpha_identity(
          TorusVectorField({TorusScalarField(line, v.values())}),
          TorusVectorField({TorusScalarField(line, w.values())}), alpha);
      const PeriodicField got1(g, got[0].values());
      identity = std::max(identity, max_abs_diff(project_mean_zero(got1),
                                                 project_mean_zero(expected)));
    }
    r.at_most("torus covariant derivative reduces to the circle one", identity,
              1e-10);
  }
  return r.take();
}

using SuiteFn = std::vector<Check> (*)(const SuiteOptions&);

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> suites = {
      {"calculus", &suite_calculus},   {"group", &suite_group},
      {"divergence", &suite_divergence}, {"duality", &suite_duality},
      {"geodesic-1d", &suite_geodesic}, {"torus-nd", &suite_torus},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "calculus", "group", "divergence", "duality", "geodesic-1d", "torus-nd"};
  return names;
}

bool is_known_suite(const std::string& name) {
  return name == "all" || registry().count(name) > 0;
}

std::vector<Check> run_suite(const std::string& name,
                             const SuiteOptions& options) {
  if (!is_known_suite(name)) {
    throw InvalidInput("unknown suite '" + name +
                       "' (expected calculus, group, divergence, duality, "
                       "geodesic-1d, torus-nd or all)");
  }
  if (name != "all") return registry().at(name)(options);

  const auto& names = suite_names();
  std::vector<std::vector<Check>> results(names.size());
  const std::size_t workers =
      std::clamp<std::size_t>(options.threads, 1, names.size());
  std::vector<std::exception_ptr> errors(names.size());
  auto run_slot = [&](std::size_t i) {
    try {
      results[i] = registry().at(names[i])(options);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (workers == 1) {
    for (std::size_t i = 0; i < names.size(); ++i) run_slot(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < names.size(); i += workers) run_slot(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<Check> all;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    all.insert(all.end(), results[i].begin(), results[i].end());
  }
  return all;
}

}  // namespace frf
