#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "doctest.h"
#include "frf/errors.hpp"
#include "frf/geodesics_1d.hpp"
#include "support/generators.hpp"

using namespace frf;
using frf::testing::Gen;

namespace {

double quad(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15,
                                                                       1e-15);
}

double solve(const std::function<double(double)>& f, double lo, double hi) {
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (a + b);
}

double sine_u0(double x) { return 0.5 * std::sin(kTwoPi * x) / kTwoPi; }

}  // namespace

TEST_CASE("pj_rhs and conserved_C on the zero field") {
  const PeriodicGrid g(32);
  CHECK(pj_rhs(PeriodicField::zeros(g), AlphaParam(0.3)).max_abs() == 0.0);
  CHECK(conserved_C(PeriodicField::zeros(g), AlphaParam(0.3)) == 0.0);
  const VelocityTrajectory traj =
      integrate_pj(PeriodicField::zeros(g), AlphaParam(0.5), 0.1, 1e-3);
  CHECK(traj.fields.back().max_abs() == 0.0);
  CHECK_FALSE(traj.breakdown);
}

TEST_CASE("integrate_pj validates its arguments and records on request") {
  const PeriodicGrid g(32);
  const PeriodicField u0 = PeriodicField::sample(g, sine_u0);
  CHECK_THROWS_AS(integrate_pj(u0, AlphaParam(0.0), 0.1, 0.0), InvalidInput);
  CHECK_THROWS_AS(integrate_pj(u0, AlphaParam(0.0), 0.1, 0.05), InvalidInput);
  PjOptions opt;
  opt.record_every = 10;
  const VelocityTrajectory traj = integrate_pj(u0, AlphaParam(0.0), 0.1, 1e-3, opt);
  CHECK(traj.times.size() == 11);
  CHECK(traj.min_jacobian.size() == traj.times.size());
  CHECK(traj.times.back() == doctest::Approx(0.1));
}

TEST_CASE("alpha = -1 closed form matches characteristics solved by root finding") {
  const PeriodicGrid g(128);
  const PeriodicField u0 = PeriodicField::sample(g, sine_u0);
  const double t = 1.2;  // breakdown at t = 2
  const GeodesicPoint p = alpham1_solution(u0, t);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); j += 7) {
    const double y = g.point(j);
    const double x = solve([&](double s) { return s + t * sine_u0(s) - y; }, y - 0.5,
                           y + 0.5);
    err = std::max(err, std::abs(p.u[j] - sine_u0(x)));
  }
  CHECK(err < 1e-11);
  CHECK(burgers_breakdown_time(u0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(alpham1_solution(u0, 2.001), BreakdownError);
  CHECK_THROWS_AS(alpham1_solution(u0 + PeriodicField::constant(g, 0.1), 0.5),
                  InvalidInput);
}

TEST_CASE("alpha = 1 closed form matches quadrature of the exponential chart") {
  const PeriodicGrid g(128);
  auto a = [](double x) { return 0.3 * std::sin(kTwoPi * x); };
  auto b = [](double x) { return 0.2 * std::cos(kTwoPi * x); };
  const double t = 0.7;
  auto E = [&](double x) { return std::exp(a(x) * t + b(x)); };
  auto AE = [&](double x) { return a(x) * E(x); };
  const double M = quad(E, 0.0, 1.0), Ma = quad(AE, 0.0, 1.0);
  const GeodesicPoint p =
      alpha1_solution(PeriodicField::sample(g, a), PeriodicField::sample(g, b), t);
  const PeriodicField eta_t = compose_field(p.u, p.eta);
  double err_eta = 0.0, err_u = 0.0;
  for (std::size_t j = 0; j < g.size(); j += 5) {
    const double x = g.point(j);
    const double P = quad(E, 0.0, x), Q = quad(AE, 0.0, x);
    err_eta = std::max(err_eta, std::abs(p.eta.displacement()[j] - (P / M - x)));
    err_u = std::max(err_u, std::abs(eta_t[j] - (Q * M - P * Ma) / (M * M)));
  }
  CHECK(err_eta < 1e-13);
  CHECK(err_u < 1e-12);
  CHECK_THROWS_AS(alpha1_solution(PeriodicField::constant(g, 0.1),
                                  PeriodicField::zeros(g), 0.0),
                  DomainError);
}

TEST_CASE("PDE integration reproduces the alpha = 1 closed form") {
  const PeriodicGrid g(256);
  const PeriodicField a =
      PeriodicField::sample(g, [](double x) { return 0.3 * std::sin(kTwoPi * x); });
  const PeriodicField b =
      PeriodicField::sample(g, [](double x) { return 0.2 * std::cos(kTwoPi * x); });
  const PeriodicField u0 = alpha1_solution(a, b, 0.0).u;
  PjOptions opt;
  opt.record_every = 100;
  const VelocityTrajectory traj = integrate_pj(u0, AlphaParam(1.0), 0.5, 1e-3, opt);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    CHECK(max_abs_diff(traj.fields[k], alpha1_solution(a, b, traj.times[k]).u) < 1e-10);
  }
}

TEST_CASE("PDE integration reproduces the alpha = -1 closed form before breakdown") {
  const PeriodicGrid g(256);
  const PeriodicField u0 = PeriodicField::sample(g, sine_u0);
  PjOptions opt;
  opt.record_every = 200;
  const VelocityTrajectory traj = integrate_pj(u0, AlphaParam(-1.0), 1.0, 1e-3, opt);
  CHECK(max_abs_diff(traj.fields.back(), alpham1_solution(u0, 1.0).u) < 1e-8);
}

TEST_CASE("Burgers data breaks down at the predicted time") {
  const PeriodicGrid g(256);
  const PeriodicField u0 = PeriodicField::sample(
      g, [](double x) { return std::sin(kTwoPi * x) / kTwoPi; });
  const VelocityTrajectory traj = integrate_pj(u0, AlphaParam(-1.0), 1.5, 1e-3);
  REQUIRE(traj.breakdown);
  CHECK(traj.breakdown->time == doctest::Approx(1.0).epsilon(0.01));
  CHECK_FALSE(traj.breakdown->reason.empty());
}

TEST_CASE("the Hdot1 energy is conserved at alpha = 0") {
  const PeriodicGrid g(256);
  Gen gen(51);
  const PeriodicField u0 = gen.tangent(g, 4, 0.2);
  PjOptions opt;
  opt.record_every = 50;
  const VelocityTrajectory traj = integrate_pj(u0, AlphaParam(0.0), 0.5, 1e-3, opt);
  const double C0 = conserved_C(traj.fields.front(), AlphaParam(0.0));
  for (const auto& u : traj.fields) {
    CHECK(conserved_C(u, AlphaParam(0.0)) == doctest::Approx(C0).epsilon(1e-9));
  }
}

TEST_CASE("alpha = 0 density geodesic has constant Hellinger speed") {
  Gen gen(52);
  const PeriodicGrid g(128);
  const Density r0 = gen.density(g), r1 = gen.density(g);
  const double theta = hellinger_distance(r0, r1);
  REQUIRE(theta > 0.0);
  for (double t : {0.0, 0.1, 0.35, 0.5, 0.8, 1.0}) {
    const Density rt = alpha0_density_geodesic(r0, r1, t);
    CHECK(std::abs(hellinger_distance(r0, rt) - t * theta) < 1e-10);
    CHECK(std::abs(hellinger_distance(rt, r1) - (1 - t) * theta) < 1e-10);
  }
  CHECK_THROWS_AS(alpha0_density_geodesic(r0, r1, 1.5), InvalidInput);
}

TEST_CASE("alpha = 0 density geodesic rejects antipodal endpoints") {
  const PeriodicGrid g(256);
  const Density plus = Density::normalized(
      PeriodicField::sample(g, [](double x) { return std::exp(50 * std::cos(kTwoPi * x)); }));
  const Density minus = Density::normalized(
      PeriodicField::sample(g, [](double x) { return std::exp(-50 * std::cos(kTwoPi * x)); }));
  CHECK_THROWS_AS(alpha0_density_geodesic(plus, minus, 0.5), DomainError);
}

TEST_CASE("affine chart round trip") {
  Gen gen(53);
  const PeriodicGrid g(128);
  const CircleDiffeo eta = gen.diffeo(g);
  const CircleDiffeo back = inverse_phi(affine_chart_phi(eta));
  CHECK(max_abs_diff(back.displacement(), eta.displacement()) < 1e-13);
  CHECK(std::abs(integrate(affine_chart_phi(eta))) < 1e-15);
  CHECK_THROWS_AS(inverse_phi(PeriodicField::constant(g, 0.2)), DomainError);
}

TEST_CASE("as_function interpolates the recorded velocities") {
  const PeriodicGrid g(32);
  const PeriodicField u0 = PeriodicField::sample(g, sine_u0);
  const VelocityTrajectory traj = integrate_pj(u0, AlphaParam(0.0), 0.01, 1e-3);
  const VelocityFunction f = traj.as_function();
  CHECK(max_abs_diff(f(0.0), traj.fields.front()) < 1e-15);
  CHECK(max_abs_diff(f(0.01), traj.fields.back()) < 1e-15);
}
