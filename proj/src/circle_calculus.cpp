#include "frf/circle_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "frf/errors.hpp"

namespace frf {

using detail::Complex;

namespace {

std::vector<Complex> forward(const PeriodicField& f) {
  const std::size_t shape[] = {f.size()};
  return detail::rfft(f.values(), shape);
}

PeriodicField backward(const PeriodicGrid& grid, std::vector<Complex> spec) {
  const std::size_t shape[] = {grid.size()};
  return PeriodicField(grid, detail::irfft(std::move(spec), shape));
}

PeriodicField shift_to_vanish_at_zero(PeriodicField f) {
  return f - PeriodicField::constant(f.grid(), f[0]);
}

}  // namespace

PeriodicGrid::PeriodicGrid(std::size_t n) : n_(n) {
  if (n < 16 || (n & (n - 1)) != 0) {
    std::ostringstream msg;
    msg << "PeriodicGrid: size must be a power of two >= 16, got " << n;
    throw InvalidInput(msg.str());
  }
}

std::vector<double> PeriodicGrid::points() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = point(j);
  return xs;
}

PeriodicField::PeriodicField(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidInput("PeriodicField: sample count does not match grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw InvalidInput("PeriodicField: non-finite sample");
    }
  }
}

PeriodicField PeriodicField::zeros(const PeriodicGrid& grid) {
  return constant(grid, 0.0);
}

PeriodicField PeriodicField::constant(const PeriodicGrid& grid, double c) {
  return PeriodicField(grid, std::vector<double>(grid.size(), c));
}

PeriodicField PeriodicField::sample(const PeriodicGrid& grid,
                                    const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.point(j));
  return PeriodicField(grid, std::move(v));
}

double PeriodicField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

PeriodicField& PeriodicField::operator+=(const PeriodicField& other) {
  require_same_grid(*this, other, "operator+");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other[j];
  return *this;
}

PeriodicField& PeriodicField::operator-=(const PeriodicField& other) {
  require_same_grid(*this, other, "operator-");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other[j];
  return *this;
}

PeriodicField& PeriodicField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

PeriodicField operator*(const PeriodicField& a, const PeriodicField& b) {
  require_same_grid(a, b, "operator*");
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] * b[j];
  return PeriodicField(a.grid(), std::move(v));
}

PeriodicField PeriodicField::map(const std::function<double(double)>& f) const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), f);
  return PeriodicField(grid_, std::move(v));
}

void require_same_grid(const PeriodicField& a, const PeriodicField& b,
                       const char* context) {
  if (!(a.grid() == b.grid())) {
    std::ostringstream msg;
    msg << context << ": grid mismatch (" << a.size() << " vs " << b.size()
        << ")";
    throw InvalidInput(msg.str());
  }
}

double max_abs_diff(const PeriodicField& a, const PeriodicField& b) {
  return (a - b).max_abs();
}

PeriodicField derivative(const PeriodicField& f) {
  const std::size_t n = f.size();
  auto spec = forward(f);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    spec[k] *= Complex(0.0, kTwoPi * static_cast<double>(k));
  }
  spec[n / 2] = 0.0;
  return backward(f.grid(), std::move(spec));
}

double integrate(const PeriodicField& f) {
  // Compensated sum.
  double sum = 0.0, comp = 0.0;
  for (double v : f.values()) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(f.size());
}

PeriodicField inverse_A(const PeriodicField& u) {
  const double mean = integrate(u);
  if (std::abs(mean) > 1e-12 * std::max(1.0, u.max_abs())) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "inverse_A: input must have zero mean, got mean " << mean;
    throw DomainError(msg.str());
  }
  auto spec = forward(u);
  spec[0] = 0.0;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    const double w = kTwoPi * static_cast<double>(k);
    spec[k] /= w * w;
  }
  return shift_to_vanish_at_zero(backward(u.grid(), std::move(spec)));
}

PeriodicField inverse_A_dx(const PeriodicField& u) {
  const std::size_t n = u.size();
  auto spec = forward(u);
  spec[0] = 0.0;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    // (2 pi i k) / (2 pi k)^2
    spec[k] *= Complex(0.0, 1.0 / (kTwoPi * static_cast<double>(k)));
  }
  spec[n / 2] = 0.0;
  return shift_to_vanish_at_zero(backward(u.grid(), std::move(spec)));
}

PeriodicField antiderivative(const PeriodicField& f) {
  const std::size_t n = f.size();
  auto spec = forward(f);
  spec[0] = 0.0;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    spec[k] /= Complex(0.0, kTwoPi * static_cast<double>(k));
  }
  spec[n / 2] = 0.0;
  return shift_to_vanish_at_zero(backward(f.grid(), std::move(spec)));
}

PeriodicField project_mean_zero(const PeriodicField& f) {
  return f - PeriodicField::constant(f.grid(), integrate(f));
}

PeriodicField dealias(const PeriodicField& f) {
  const std::size_t n = f.size();
  auto spec = forward(f);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (3 * k >= n) spec[k] = 0.0;
  }
  return backward(f.grid(), std::move(spec));
}

PeriodicField dealiased_product(const PeriodicField& a, const PeriodicField& b) {
  return dealias(a * b);
}

BandLimitedInterpolant::BandLimitedInterpolant(const PeriodicField& f) {
  const std::size_t n = f.size();
  coeffs_ = forward(f);
  const double inv_n = 1.0 / static_cast<double>(n);
  coeffs_[0] *= inv_n;
  for (std::size_t k = 1; k < n / 2; ++k) coeffs_[k] *= 2.0 * inv_n;
  coeffs_[n / 2] = Complex(coeffs_[n / 2].real() * inv_n, 0.0);
}

double BandLimitedInterpolant::operator()(double x) const {
  const Complex z = std::polar(1.0, kTwoPi * x);
  Complex acc = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * z + coeffs_[k];
  return acc.real();
}

std::pair<double, double> BandLimitedInterpolant::value_and_derivative(
    double x) const {
  const Complex z = std::polar(1.0, kTwoPi * x);
  Complex val = 0.0, der = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    val = val * z + coeffs_[k];
    der = der * z + coeffs_[k] * static_cast<double>(k);
  }
  return {val.real(), (der * Complex(0.0, kTwoPi)).real()};
}

std::vector<double> BandLimitedInterpolant::evaluate(
    std::span<const double> xs) const {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (*this)(xs[i]);
  return out;
}

PeriodicField resample(const PeriodicField& f, const PeriodicGrid& target) {
  const std::size_t n = f.size();
  const std::size_t m = target.size();
  if (n == m) return f;
  auto src = forward(f);
  std::vector<Complex> dst(m / 2 + 1, 0.0);
  const double scale = static_cast<double>(m) / static_cast<double>(n);
  if (m > n) {
    for (std::size_t k = 0; k < n / 2; ++k) dst[k] = src[k] * scale;
    dst[n / 2] = 0.5 * src[n / 2].real() * scale;
  } else {
    for (std::size_t k = 0; k < m / 2; ++k) dst[k] = src[k] * scale;
    dst[m / 2] = 2.0 * src[m / 2].real() * scale;
  }
  return backward(target, std::move(dst));
}

}  // namespace frf
