#ifndef FRF_TESTS_GENERATORS_HPP_
#define FRF_TESTS_GENERATORS_HPP_

// Seeded random generators for property tests. Every generator draws
// band-limited trigonometric data whose exact derivative and antiderivative
// are known, so the same objects double as analytic oracles.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "frf/diffeo_group.hpp"

namespace frf::testing {

struct TrigPoly {
  std::vector<double> c, s;  // cos / sin coefficients for k = 1..K

  double operator()(double x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double w = kTwoPi * static_cast<double>(i + 1);
      v += c[i] * std::cos(w * x) + s[i] * std::sin(w * x);
    }
    return v;
  }
  double derivative(double x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double w = kTwoPi * static_cast<double>(i + 1);
      v += w * (-c[i] * std::sin(w * x) + s[i] * std::cos(w * x));
    }
    return v;
  }
  // Antiderivative vanishing at 0.
  double antiderivative(double x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double w = kTwoPi * static_cast<double>(i + 1);
      v += (c[i] * std::sin(w * x) - s[i] * (std::cos(w * x) - 1.0)) / w;
    }
    return v;
  }
  PeriodicField on(const PeriodicGrid& g) const {
    return PeriodicField::sample(g, *this);
  }
};

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  TrigPoly poly(std::size_t modes, double amplitude) {
    TrigPoly p;
    for (std::size_t k = 1; k <= modes; ++k) {
      p.c.push_back(amplitude * uniform(-1, 1) / static_cast<double>(k));
      p.s.push_back(amplitude * uniform(-1, 1) / static_cast<double>(k));
    }
    return p;
  }

  // Tangent vectors vanish at the base point x = 0.
  PeriodicField tangent(const PeriodicGrid& g, std::size_t modes = 4,
                        double amplitude = 0.5) {
    const PeriodicField f = poly(modes, amplitude).on(g);
    return f - PeriodicField::constant(g, f[0]);
  }

  CircleDiffeo diffeo(const PeriodicGrid& g, double amplitude = 0.01) {
    return CircleDiffeo::from_displacement(tangent(g, 3, amplitude));
  }

  Density density(const PeriodicGrid& g, double amplitude = 0.6) {
    return Density::normalized(
        poly(4, amplitude).on(g).map([](double v) { return std::exp(v); }));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace frf::testing

#endif  // FRF_TESTS_GENERATORS_HPP_
