#ifndef FRF_DIVERGENCES_HPP_
#define FRF_DIVERGENCES_HPP_

// Amari-Chentsov alpha-divergences between densities (and between diffeos via
// their Jacobians), the spherical Hellinger distance, the Fisher-Rao matrix of
// a parametric family, and finite-difference recovery of the metric and the
// connection induced by a divergence.

#include <Eigen/Dense>
#include <functional>
#include <span>

#include "frf/diffeo_group.hpp"

namespace frf {

// alpha in [-1, 1]. Values within kEndpointBand of +-1 use the logarithmic
// endpoint forms.
class AlphaParam {
 public:
  static constexpr double kEndpointBand = 1e-9;

  explicit AlphaParam(double alpha);

  double value() const { return alpha_; }
  bool is_lower_endpoint() const { return alpha_ <= -1.0 + kEndpointBand; }
  bool is_upper_endpoint() const { return alpha_ >= 1.0 - kEndpointBand; }
  AlphaParam dual() const { return AlphaParam(-alpha_); }

 private:
  double alpha_;
};

// D^(alpha)(rho1 || rho2):
//   |alpha| < 1:  (1 - int rho1^{(1-a)/2} rho2^{(1+a)/2}) / (1 - a^2)
//   alpha = -1:   (1/4) int (log rho1 - log rho2) rho1
//   alpha = +1:   D^(-1)(rho2 || rho1)
double alpha_divergence(const Density& rho1, const Density& rho2,
                        AlphaParam alpha);

double alpha_divergence_diffeo(const CircleDiffeo& xi, const CircleDiffeo& eta,
                               AlphaParam alpha);

// arccos(int sqrt(rho1 rho2)), in [0, pi].
double hellinger_distance(const Density& rho1, const Density& rho2);

using DivergenceFn =
    std::function<double(const CircleDiffeo&, const CircleDiffeo&)>;

DivergenceFn alpha_divergence_fn(AlphaParam alpha);

// -d_s d_t D(eta + sV || eta + tW) at 0 by a central mixed difference with
// one Richardson level (steps h, h/2). V and W are displacement tangents with
// V(0) = W(0) = 0. A degenerate perturbation shrinks h once, then throws.
double metric_from_divergence(const DivergenceFn& D, const CircleDiffeo& eta,
                              const PeriodicField& V, const PeriodicField& W,
                              double h = 1e-3);

// -d_s d_t d_r D(eta + sV + tW || eta + rZ) at 0, same stencil policy.
// With W extended as a constant displacement field this equals
// <nabla_V W, Z> = -<Gamma(W, V), Z> in the H1-dot metric.
double christoffel_from_divergence(const DivergenceFn& D,
                                   const CircleDiffeo& eta,
                                   const PeriodicField& V,
                                   const PeriodicField& W,
                                   const PeriodicField& Z, double h = 1e-3);

struct ParametricFamily {
  std::size_t dimension = 1;
  std::function<Density(std::span<const double>)> density;
  double step = 1e-4;
};

// g_ij = int d_i log rho d_j log rho rho, central differences in theta,
// symmetrized.
Eigen::MatrixXd fisher_rao_matrix(const ParametricFamily& family,
                                  std::span<const double> theta);

}  // namespace frf

#endif  // FRF_DIVERGENCES_HPP_
