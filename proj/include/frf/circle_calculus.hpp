#ifndef FRF_CIRCLE_CALCULUS_HPP_
#define FRF_CIRCLE_CALCULUS_HPP_

// Spectral calculus on the circle S^1 = R/Z sampled on a uniform grid.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace frf {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform grid x_j = j/n on [0,1). n is a power of two, at least 16.
class PeriodicGrid {
 public:
  static constexpr std::size_t kDefaultSize = 256;

  explicit PeriodicGrid(std::size_t n = kDefaultSize);

  std::size_t size() const { return n_; }
  double spacing() const { return 1.0 / static_cast<double>(n_); }
  double point(std::size_t j) const {
    return static_cast<double>(j) / static_cast<double>(n_);
  }
  std::vector<double> points() const;

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  std::size_t n_;
};

// Samples of a smooth 1-periodic function. All values are finite.
class PeriodicField {
 public:
  PeriodicField(PeriodicGrid grid, std::vector<double> values);

  static PeriodicField zeros(const PeriodicGrid& grid);
  static PeriodicField constant(const PeriodicGrid& grid, double c);
  static PeriodicField sample(const PeriodicGrid& grid,
                              const std::function<double(double)>& f);

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }

  double max_abs() const;

  PeriodicField& operator+=(const PeriodicField& other);
  PeriodicField& operator-=(const PeriodicField& other);
  PeriodicField& operator*=(double c);

  friend PeriodicField operator+(PeriodicField a, const PeriodicField& b) {
    return a += b;
  }
  friend PeriodicField operator-(PeriodicField a, const PeriodicField& b) {
    return a -= b;
  }
  friend PeriodicField operator*(PeriodicField a, double c) { return a *= c; }
  friend PeriodicField operator*(double c, PeriodicField a) { return a *= c; }
  // Pointwise product (no dealiasing; see dealiased_product).
  friend PeriodicField operator*(const PeriodicField& a, const PeriodicField& b);

  // Applies f to every sample.
  PeriodicField map(const std::function<double(double)>& f) const;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

// Throws InvalidInput unless a and b live on the same grid.
void require_same_grid(const PeriodicField& a, const PeriodicField& b,
                       const char* context);

// L-infinity distance.
double max_abs_diff(const PeriodicField& a, const PeriodicField& b);

// Spectral derivative. Exact on trigonometric polynomials of degree < n/2;
// the Nyquist mode is dropped.
PeriodicField derivative(const PeriodicField& f);

// (1/n) sum f(x_j); exact for trigonometric polynomials of degree < n.
double integrate(const PeriodicField& f);

// Solves -h'' = u for mean-zero u with h periodic and h(0) = 0.
// Throws DomainError if |mean(u)| exceeds 1e-12 * max(1, |u|_inf).
PeriodicField inverse_A(const PeriodicField& u);

// The composite A^{-1} d/dx, defined for every periodic u; output vanishes at 0.
PeriodicField inverse_A_dx(const PeriodicField& u);

// F with F' = f - mean(f) and F(0) = 0.
PeriodicField antiderivative(const PeriodicField& f);

// Removes the mean.
PeriodicField project_mean_zero(const PeriodicField& f);

// Two-thirds rule: zeroes every mode with 3|k| >= n.
PeriodicField dealias(const PeriodicField& f);

// dealias(a * b).
PeriodicField dealiased_product(const PeriodicField& a, const PeriodicField& b);

// Trigonometric interpolant of a field, evaluable anywhere on R.
class BandLimitedInterpolant {
 public:
  explicit BandLimitedInterpolant(const PeriodicField& f);

  double operator()(double x) const;
  // Value and first derivative at x.
  std::pair<double, double> value_and_derivative(double x) const;

  std::vector<double> evaluate(std::span<const double> xs) const;

 private:
  // f(x) = Re sum_k weight_k c_k e^{2 pi i k x}, k = 0..n/2.
  std::vector<std::complex<double>> coeffs_;
};

// Band-limited resampling onto another grid (zero-padding or truncation).
PeriodicField resample(const PeriodicField& f, const PeriodicGrid& target);

}  // namespace frf

#endif  // FRF_CIRCLE_CALCULUS_HPP_
