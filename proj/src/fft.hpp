#ifndef FRF_SRC_FFT_HPP_
#define FRF_SRC_FFT_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace frf::detail {

using Complex = std::complex<double>;

// Real-to-complex transform of row-major samples; the last axis is halved to
// shape.back()/2 + 1 entries. Unnormalized.
std::vector<Complex> rfft(std::span<const double> samples,
                          std::span<const std::size_t> shape);

// Inverse of rfft, normalized so that irfft(rfft(x)) == x.
std::vector<double> irfft(std::vector<Complex> spectrum,
                          std::span<const std::size_t> shape);

// Signed wavenumber of index i on an axis with m samples (i <= m/2 maps to i).
inline long wavenumber(std::size_t i, std::size_t m) {
  return i <= m / 2 ? static_cast<long>(i)
                    : static_cast<long>(i) - static_cast<long>(m);
}

}  // namespace frf::detail

#endif  // FRF_SRC_FFT_HPP_
