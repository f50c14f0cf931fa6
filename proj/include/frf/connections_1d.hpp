#ifndef FRF_CONNECTIONS_1D_HPP_
#define FRF_CONNECTIONS_1D_HPP_

// The right-invariant H1-dot metric on D(S^1)/Rot(S^1) and its family of
// alpha-connections, written in the displacement chart eta = id + d:
//
//   (nabla_V W)_eta = DW.V - Gamma_eta(W, V),
//   Gamma_eta(W, V) = -(1+a)/2 * { A^{-1} d/dx [ (V o eta^-1)' (W o eta^-1)' ] } o eta.

#include <vector>

#include "frf/diffeo_group.hpp"
#include "frf/divergences.hpp"

namespace frf {

// A displacement tangent at `base`; vector(0) = 0 to 1e-12.
struct TangentAtDiffeo {
  TangentAtDiffeo(CircleDiffeo base, PeriodicField vector);

  CircleDiffeo base;
  PeriodicField vector;
};

// (1/4) int V' W' / eta'.
double h1_inner(const PeriodicField& V, const PeriodicField& W,
                const CircleDiffeo& eta);

PeriodicField christoffel(AlphaParam alpha, const CircleDiffeo& eta,
                          const PeriodicField& W, const PeriodicField& V);

struct FieldSeries {
  std::vector<double> times;
  std::vector<PeriodicField> values;
};

// W'(t) - Gamma_{gamma(t)}(W(t), gamma'(t)) at interior samples, using
// centered differences in t for both W' and gamma'. Needs >= 3 samples.
FieldSeries covariant_derivative(AlphaParam alpha,
                                 const std::vector<double>& times,
                                 const std::vector<CircleDiffeo>& curve,
                                 const std::vector<PeriodicField>& field);

// |X<Y,Z> - <nabla^(a)_X Y, Z> - <Y, nabla^(-a)_X Z>| at eta for X = V and the
// right-invariant extensions of Y = W, Z. Directional derivatives are centered
// differences along eta + sV (Richardson, steps h and h/2).
double duality_residual(AlphaParam alpha, const CircleDiffeo& eta,
                        const PeriodicField& V, const PeriodicField& W,
                        const PeriodicField& Z, double h = 1e-3);

struct CurvatureEvaluation {
  // R(X,Y)Z from the commutator definition on chart-constant fields.
  PeriodicField commutator;
  // (1 - a^2) (X<Y,Z> + Y<X,Z>), a scalar, for comparison only.
  double product_formula;
};

CurvatureEvaluation curvature_eval(AlphaParam alpha, const CircleDiffeo& eta,
                                   const PeriodicField& X,
                                   const PeriodicField& Y,
                                   const PeriodicField& Z, double h = 1e-3);

}  // namespace frf

#endif  // FRF_CONNECTIONS_1D_HPP_
