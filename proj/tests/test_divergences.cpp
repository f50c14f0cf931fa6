#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "doctest.h"
#include "frf/connections_1d.hpp"
#include "frf/divergences.hpp"
#include "frf/errors.hpp"
#include "support/generators.hpp"

using namespace frf;
using boost::math::cyl_bessel_i;
using frf::testing::Gen;

namespace {

// von Mises density exp(k cos 2 pi x) / I_0(k); its moments are Bessel ratios.
Density von_mises(const PeriodicGrid& g, double k) {
  return Density::normalized(PeriodicField::sample(
      g, [k](double x) { return std::exp(k * std::cos(kTwoPi * x)); }));
}

}  // namespace

TEST_CASE("AlphaParam range") {
  CHECK_THROWS_AS(AlphaParam(1.5), InvalidInput);
  CHECK_THROWS_AS(AlphaParam(-1.0000001), InvalidInput);
  CHECK_THROWS_AS(AlphaParam(std::nan("")), InvalidInput);
  CHECK(AlphaParam(1.0).is_upper_endpoint());
  CHECK(AlphaParam(-1.0).is_lower_endpoint());
  CHECK_FALSE(AlphaParam(0.999).is_upper_endpoint());
  CHECK(AlphaParam(0.3).dual().value() == -0.3);
  try {
    AlphaParam bad(2.0);
    FAIL("expected InvalidInput");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("[-1, 1]") != std::string::npos);
  }
}

TEST_CASE("alpha-divergences between von Mises densities match Bessel closed forms") {
  const PeriodicGrid g(128);
  const double k1 = 0.8, k2 = -0.5;
  const Density r1 = von_mises(g, k1), r2 = von_mises(g, k2);
  const double i1 = cyl_bessel_i(0, k1), i2 = cyl_bessel_i(0, k2);
  for (double a : {-0.7, -0.2, 0.0, 0.4, 0.9}) {
    const double p = 0.5 * (1 - a), q = 0.5 * (1 + a);
    const double overlap =
        cyl_bessel_i(0, p * k1 + q * k2) / (std::pow(i1, p) * std::pow(i2, q));
    CHECK(alpha_divergence(r1, r2, AlphaParam(a)) ==
          doctest::Approx((1 - overlap) / (1 - a * a)).epsilon(1e-12));
  }
  // Endpoints: one quarter of the Kullback-Leibler divergence.
  auto kl = [](double ka, double kb) {
    return (ka - kb) * cyl_bessel_i(1, ka) / cyl_bessel_i(0, ka) -
           std::log(cyl_bessel_i(0, ka)) + std::log(cyl_bessel_i(0, kb));
  };
  CHECK(alpha_divergence(r1, r2, AlphaParam(-1.0)) ==
        doctest::Approx(0.25 * kl(k1, k2)).epsilon(1e-12));
  CHECK(alpha_divergence(r1, r2, AlphaParam(1.0)) ==
        doctest::Approx(0.25 * kl(k2, k1)).epsilon(1e-12));
  const double bc = cyl_bessel_i(0, 0.5 * (k1 + k2)) / std::sqrt(i1 * i2);
  CHECK(hellinger_distance(r1, r2) == doctest::Approx(std::acos(bc)).epsilon(1e-12));
}

TEST_CASE("alpha-divergence duality swaps the arguments") {
  Gen gen(31);
  const PeriodicGrid g(64);
  const Density p = gen.density(g), q = gen.density(g);
  for (double a : {-1.0, -0.4, 0.0, 0.6, 1.0}) {
    CHECK(alpha_divergence(p, q, AlphaParam(a)) ==
          doctest::Approx(alpha_divergence(q, p, AlphaParam(-a))).epsilon(1e-12));
  }
}

TEST_CASE("metric_from_divergence input checks") {
  const PeriodicGrid g(32);
  const CircleDiffeo id = CircleDiffeo::identity(g);
  const PeriodicField V =
      PeriodicField::sample(g, [](double x) { return std::sin(kTwoPi * x); });
  const DivergenceFn D = alpha_divergence_fn(AlphaParam(0.0));
  CHECK_THROWS_AS(metric_from_divergence(D, id, V, V, 0.5), InvalidInput);
  CHECK_THROWS_AS(metric_from_divergence(D, id, V + PeriodicField::constant(g, 1.0), V),
                  InvalidInput);
  CHECK_THROWS_AS(christoffel_from_divergence(D, id, V, V, V, 0.0), InvalidInput);
}

TEST_CASE("metric from divergence at the identity equals the analytic Hdot1 product") {
  const PeriodicGrid g(64);
  const CircleDiffeo id = CircleDiffeo::identity(g);
  // V' = cos(2 pi x), W' = cos(2 pi x) + sin(4 pi x): (1/4) int V'W' = 1/8.
  const PeriodicField V = PeriodicField::sample(
      g, [](double x) { return std::sin(kTwoPi * x) / kTwoPi; });
  const PeriodicField W = PeriodicField::sample(g, [](double x) {
    return std::sin(kTwoPi * x) / kTwoPi + (1.0 - std::cos(2 * kTwoPi * x)) / (2 * kTwoPi);
  });
  for (double a : {-1.0, 0.0, 1.0}) {
    CHECK(metric_from_divergence(alpha_divergence_fn(AlphaParam(a)), id, V, W) ==
          doctest::Approx(0.125).epsilon(1e-8));
  }
}

TEST_CASE("third difference of the divergence gives the analytic cubic form") {
  // At eta = id, -d^3 D = -((1 + a)/8) int V'W'Z'. Here V' = W' = cos(2 pi x)/2
  // and Z' = cos(4 pi x)/2, so int V'W'Z' = 1/32.
  const PeriodicGrid g(64);
  const CircleDiffeo id = CircleDiffeo::identity(g);
  const PeriodicField V = PeriodicField::sample(
      g, [](double x) { return 0.5 * std::sin(kTwoPi * x) / kTwoPi; });
  const PeriodicField Z = PeriodicField::sample(
      g, [](double x) { return 0.5 * std::sin(2 * kTwoPi * x) / (2 * kTwoPi); });
  for (double a : {-0.5, 0.0, 0.5, 1.0}) {
    const double expected = -(1 + a) / 8.0 / 32.0;
    CHECK(christoffel_from_divergence(alpha_divergence_fn(AlphaParam(a)), id, V, V, Z) ==
          doctest::Approx(expected).epsilon(1e-6));
  }
  CHECK(std::abs(christoffel_from_divergence(alpha_divergence_fn(AlphaParam(-1.0)),
                                             id, V, V, Z)) < 1e-9);
}

TEST_CASE("Fisher-Rao information of the von Mises family") {
  const PeriodicGrid g(128);
  ParametricFamily fam;
  fam.density = [&g](std::span<const double> th) { return von_mises(g, th[0]); };
  const double k = 0.7;
  const std::array<double, 1> theta = {k};
  const double r1 = cyl_bessel_i(1, k) / cyl_bessel_i(0, k);
  const double second = 0.5 * (1.0 + cyl_bessel_i(2, k) / cyl_bessel_i(0, k));
  CHECK(fisher_rao_matrix(fam, theta)(0, 0) ==
        doctest::Approx(second - r1 * r1).epsilon(1e-7));
}

TEST_CASE("Fisher-Rao matrix of a two-parameter family is symmetric") {
  const PeriodicGrid g(64);
  ParametricFamily fam;
  fam.dimension = 2;
  fam.density = [&g](std::span<const double> th) {
    const double a = th[0], b = th[1];
    return Density(PeriodicField::sample(g, [a, b](double x) {
      return 1.0 + a * std::cos(kTwoPi * x) + b * std::sin(kTwoPi * x);
    }));
  };
  const std::array<double, 2> theta = {0.2, -0.3};
  const Eigen::MatrixXd M = fisher_rao_matrix(fam, theta);
  CHECK(M(0, 1) == M(1, 0));
  CHECK(M(0, 0) > 0.0);
  CHECK(M.determinant() > 0.0);
}
