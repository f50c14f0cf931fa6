#include <cmath>

#include "doctest.h"
#include "frf/errors.hpp"
#include "frf/torus_nd.hpp"

using namespace frf;

namespace {

double s(double x) { return std::sin(kTwoPi * x); }
double c(double x) { return std::cos(kTwoPi * x); }

TorusScalarField mixed(const TorusGrid& g) {
  return TorusScalarField::sample(g, [](const TorusPoint& x) {
    return 0.4 * s(x[0]) + 0.3 * c(x[0] + x[1]) + 0.2 * s(2 * x[1]);
  });
}

// Gradient of -(-Delta)^{-1} f: a potential field with divergence f.
TorusVectorField potential_flow(const TorusScalarField& f) {
  return gradient(inv_laplace_mean_zero(f)) * -1.0;
}

}  // namespace

TEST_CASE("torus grid validation and indexing") {
  CHECK_THROWS_AS(TorusGrid(0, 16), InvalidInput);
  CHECK_THROWS_AS(TorusGrid(4, 16), InvalidInput);
  CHECK_THROWS_AS(TorusGrid(2, 8), InvalidInput);
  CHECK_THROWS_AS(TorusGrid(2, 48), InvalidInput);
  const TorusGrid g(2, 16);
  CHECK(g.size() == 256);
  CHECK(g.coordinate(17, 0) == doctest::Approx(1.0 / 16));
  CHECK(g.coordinate(17, 1) == doctest::Approx(1.0 / 16));
  CHECK(g.coordinate(3, 0) == 0.0);
  CHECK_THROWS_AS(TorusScalarField(g, std::vector<double>(10, 0.0)), InvalidInput);
  CHECK_THROWS_AS(TorusDensity(TorusScalarField::zeros(g)), InvalidInput);
}

TEST_CASE("partial derivatives and Laplacian of trigonometric data") {
  const TorusGrid g(3, 16);
  const TorusScalarField f = TorusScalarField::sample(
      g, [](const TorusPoint& x) { return s(x[0]) * c(2 * x[1]) + s(x[2]); });
  const TorusScalarField fx = TorusScalarField::sample(
      g, [](const TorusPoint& x) { return kTwoPi * c(x[0]) * c(2 * x[1]); });
  const TorusScalarField fy = TorusScalarField::sample(
      g, [](const TorusPoint& x) { return -2 * kTwoPi * s(x[0]) * s(2 * x[1]); });
  CHECK((partial(f, 0) - fx).max_abs() < 1e-12);
  CHECK((partial(f, 1) - fy).max_abs() < 1e-12);
  CHECK_THROWS_AS(partial(f, 3), InvalidInput);
  const double k2 = kTwoPi * kTwoPi;
  const TorusScalarField lap = TorusScalarField::sample(g, [k2](const TorusPoint& x) {
    return 5 * k2 * s(x[0]) * c(2 * x[1]) + k2 * s(x[2]);
  });
  CHECK((laplace_de_rham(f) - lap).max_abs() < 1e-10);
  CHECK((laplace_de_rham(inv_laplace_mean_zero(f)) - f).max_abs() < 1e-13);
  CHECK((div(gradient(f)) + lap).max_abs() < 1e-10);
}

TEST_CASE("integrate over the torus") {
  const TorusGrid g(2, 32);
  const TorusScalarField f = TorusScalarField::sample(
      g, [](const TorusPoint& x) { return 2.0 + s(x[0]) * s(x[1]); });
  CHECK(integrate(f) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("torus dealias truncates per axis") {
  const TorusGrid g(2, 32);
  auto mode = [&](int k1, int k2) {
    return TorusScalarField::sample(
        g, [=](const TorusPoint& x) { return c(k1 * x[0] + k2 * x[1]); });
  };
  CHECK((dealias(mode(10, 10)) - mode(10, 10)).max_abs() < 1e-13);
  CHECK(dealias(mode(11, 0)).max_abs() < 1e-13);
  CHECK(dealias(mode(3, -11)).max_abs() < 1e-13);
}

TEST_CASE("off-grid evaluation is exact for band-limited data") {
  const TorusGrid g(2, 16);
  const TorusScalarField f = mixed(g);
  for (const TorusPoint& x :
       {TorusPoint{0.123, 0.456, 0.0}, TorusPoint{0.9, 0.01, 0.0},
        TorusPoint{-0.2, 1.3, 0.0}}) {
    const double exact = 0.4 * s(x[0]) + 0.3 * c(x[0] + x[1]) + 0.2 * s(2 * x[1]);
    CHECK(evaluate(f, x) == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("h1_inner_nd sees only the divergence") {
  const TorusGrid g(2, 32);
  const TorusVectorField v = potential_flow(mixed(g));
  // A quarter of int (div v)^2, with int (div v)^2 = (0.16 + 0.09 + 0.04)/2.
  CHECK(h1_inner_nd(v, v) == doctest::Approx(0.145 / 4.0).epsilon(1e-13));
  const TorusScalarField psi = TorusScalarField::sample(
      g, [](const TorusPoint& x) { return s(x[0]) * s(x[1]); });
  const TorusVectorField rot({partial(psi, 1), partial(psi, 0) * -1.0});
  CHECK(std::abs(h1_inner_nd(rot, v)) < 1e-13);
  CHECK(div(rot).max_abs() < 1e-12);
  CHECK((divergence_free_part(rot + v) - rot).max_abs() < 1e-12);
}

TEST_CASE("nabla_alpha_identity is blind to divergence-free directions") {
  const TorusGrid g(2, 32);
  const TorusScalarField psi = TorusScalarField::sample(
      g, [](const TorusPoint& x) { return c(x[0]) * s(2 * x[1]); });
  const TorusVectorField rot({partial(psi, 1), partial(psi, 0) * -1.0});
  const TorusVectorField v = potential_flow(mixed(g));
  CHECK(nabla_alpha_identity(v, rot, AlphaParam(0.3)).max_abs() < 1e-12);
  const TorusVectorField n = nabla_alpha_identity(v, v, AlphaParam(0.3));
  CHECK(n.max_abs() > 1e-3);
  for (const auto& w : curl_components(n)) CHECK(w.max_abs() < 1e-11);
}

TEST_CASE("geodesic right-hand side is a gradient") {
  const TorusGrid g(3, 16);
  const TorusScalarField f = TorusScalarField::sample(g, [](const TorusPoint& x) {
    return 0.3 * s(x[0] + x[2]) + 0.2 * c(x[1]);
  });
  const TorusVectorField rhs = geodesic_rhs_nd(potential_flow(f), AlphaParam(-0.4));
  CHECK(curl_components(rhs).size() == 3);
  for (const auto& w : curl_components(rhs)) CHECK(w.max_abs() < 1e-11);
}

TEST_CASE("integrate_nd keeps zero data at rest and validates dt") {
  const TorusGrid g(2, 16);
  const TorusVectorField zero = TorusVectorField::zeros(g);
  const TorusTrajectory traj = integrate_nd(zero, AlphaParam(0.0), 0.05, 1e-2);
  CHECK(traj.times.size() == 6);
  CHECK(traj.velocities.back().max_abs() == 0.0);
  CHECK_FALSE(traj.breakdown_time);
  CHECK_THROWS_AS(integrate_nd(zero, AlphaParam(0.0), 0.05, 0.02), InvalidInput);
  NdOptions opt;
  opt.record_every = 0;
  CHECK_THROWS_AS(integrate_nd(zero, AlphaParam(0.0), 0.05, 1e-2, opt), InvalidInput);
}

TEST_CASE("integrate_nd solution satisfies the Eulerian equation") {
  const TorusGrid g(2, 64);
  const TorusTrajectory traj =
      integrate_nd(potential_flow(mixed(g)), AlphaParam(0.5), 0.1, 1e-3);
  double worst = 0.0;
  for (double r : pjn_residual(traj, AlphaParam(0.5))) worst = std::max(worst, r);
  CHECK(worst < 1e-4);
  // The conserved quantity C = -((1 + a)/2) int (div u)^2 for a = 0.
  const TorusTrajectory hs =
      integrate_nd(potential_flow(mixed(g)), AlphaParam(0.0), 0.1, 1e-3);
  const double e0 = integrate(hs.divergences.front() * hs.divergences.front());
  const double e1 = integrate(hs.divergences.back() * hs.divergences.back());
  CHECK(e1 == doctest::Approx(e0).epsilon(1e-8));
}

TEST_CASE("alpha = 1 closed form on the torus") {
  const TorusGrid g(2, 32);
  const TorusScalarField a = mixed(g);
  const TorusScalarField b = TorusScalarField::sample(
      g, [](const TorusPoint& x) { return 0.1 * c(x[1]); });
  const Alpha1NdPoint p0 = alpha1_solution_nd(a, b, 0.0);
  CHECK(integrate(p0.jacobian.field()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((p0.chart - b).max_abs() < 1e-13);
  const Alpha1NdPoint p = alpha1_solution_nd(a, b, 0.6);
  CHECK((p.chart - (a * 0.6 + b)).max_abs() < 1e-13);
  // phi o eta has zero mean against the Jacobian (Eulerian mean zero).
  CHECK(std::abs(integrate(p.phi_labels * p.jacobian.field())) < 1e-14);

  std::vector<double> times;
  std::vector<TorusScalarField> phis;
  for (int k = 0; k <= 10; ++k) {
    times.push_back(0.05 * k);
    phis.push_back(alpha1_solution_nd(a, b, times.back()).phi_labels);
  }
  double worst = 0.0;
  for (double r : pjn_residual_lagrangian(times, phis, AlphaParam(1.0))) {
    worst = std::max(worst, r);
  }
  CHECK(worst < 1e-10);
  CHECK_THROWS_AS(alpha1_solution_nd(a + TorusScalarField::sample(
                                             g, [](const TorusPoint&) { return 0.1; }),
                                     b, 0.0),
                  DomainError);
}

TEST_CASE("tracers advect exactly under a constant velocity") {
  const TorusGrid g(2, 16);
  std::vector<double> v0(g.size(), 0.3), v1(g.size(), -0.1);
  const TorusVectorField u(
      {TorusScalarField(g, v0), TorusScalarField(g, v1)});
  const std::vector<double> times = {0.0, 0.5, 1.0};
  const auto paths = flow_tracers(times, {u, u, u},
                                  {TorusPoint{0.1, 0.2, 0.0}, TorusPoint{0.7, 0.9, 0.0}});
  REQUIRE(paths.size() == 3);
  CHECK(paths[2][0][0] == doctest::Approx(0.4));
  CHECK(paths[2][0][1] == doctest::Approx(0.1));
  CHECK(paths[1][1][0] == doctest::Approx(0.85));
  CHECK_THROWS_AS(flow_tracers(times, {u}, {}), InvalidInput);
}
