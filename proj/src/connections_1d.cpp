#include "frf/connections_1d.hpp"

#include <cmath>
#include <sstream>

#include "frf/errors.hpp"

namespace frf {

namespace {

void require_tangent(const PeriodicField& V, const CircleDiffeo& eta,
                     const char* context) {
  require_same_grid(V, eta.displacement(), context);
  if (std::abs(V[0]) > 1e-12) {
    std::ostringstream msg;
    msg << context << ": tangent vector must vanish at 0, got " << V[0];
    throw InvalidInput(msg.str());
  }
}

CircleDiffeo perturb(const CircleDiffeo& eta, const PeriodicField& dir,
                     double s) {
  return CircleDiffeo::from_displacement(eta.displacement() + dir * s);
}

// d/ds f(s) at s = 0: centered differences at h and h/2, Richardson-combined.
template <typename F>
auto directional(const F& f, double h) {
  auto centered = [&](double step) {
    return (f(step) - f(-step)) * (0.5 / step);
  };
  auto coarse = centered(h);
  auto fine = centered(0.5 * h);
  return (fine * 4.0 - coarse) * (1.0 / 3.0);
}

// Gamma with eta^{-1} supplied by the caller.
PeriodicField christoffel_with_inverse(AlphaParam alpha,
                                       const CircleDiffeo& eta,
                                       const CircleDiffeo& eta_inv,
                                       const PeriodicField& W,
                                       const PeriodicField& V) {
  const double factor = -0.5 * (1.0 + alpha.value());
  if (factor == 0.0) return PeriodicField::zeros(eta.grid());
  const PeriodicField v = compose_field(V, eta_inv);
  const PeriodicField w = compose_field(W, eta_inv);
  const PeriodicField g = inverse_A_dx(derivative(v) * derivative(w));
  PeriodicField gamma = compose_field(g, eta) * factor;
  // Keep the output in the tangent space of the coset fixing 0.
  return gamma - PeriodicField::constant(gamma.grid(), gamma[0]);
}

}  // namespace

TangentAtDiffeo::TangentAtDiffeo(CircleDiffeo base_, PeriodicField vector_)
    : base(std::move(base_)), vector(std::move(vector_)) {
  require_tangent(vector, base, "TangentAtDiffeo");
}

double h1_inner(const PeriodicField& V, const PeriodicField& W,
                const CircleDiffeo& eta) {
  require_same_grid(V, W, "h1_inner");
  require_same_grid(V, eta.displacement(), "h1_inner");
  const PeriodicField dV = derivative(V);
  const PeriodicField dW = derivative(W);
  const PeriodicField& jac = eta.derivative();
  double acc = 0.0;
  for (std::size_t j = 0; j < V.size(); ++j) acc += dV[j] * dW[j] / jac[j];
  return 0.25 * acc / static_cast<double>(V.size());
}

PeriodicField christoffel(AlphaParam alpha, const CircleDiffeo& eta,
                          const PeriodicField& W, const PeriodicField& V) {
  require_tangent(W, eta, "christoffel");
  require_tangent(V, eta, "christoffel");
  if (alpha.is_lower_endpoint()) return PeriodicField::zeros(eta.grid());
  return christoffel_with_inverse(alpha, eta, invert(eta), W, V);
}

FieldSeries covariant_derivative(AlphaParam alpha,
                                 const std::vector<double>& times,
                                 const std::vector<CircleDiffeo>& curve,
                                 const std::vector<PeriodicField>& field) {
  const std::size_t K = times.size();
  if (K < 3 || curve.size() != K || field.size() != K) {
    throw InvalidInput(
        "covariant_derivative: need >= 3 matching time samples");
  }
  FieldSeries out;
  for (std::size_t k = 1; k + 1 < K; ++k) {
    const double span = times[k + 1] - times[k - 1];
    if (!(span > 0.0)) {
      throw InvalidInput("covariant_derivative: times must increase");
    }
    const PeriodicField dW = (field[k + 1] - field[k - 1]) * (1.0 / span);
    const PeriodicField velocity =
        (curve[k + 1].displacement() - curve[k - 1].displacement()) *
        (1.0 / span);
    out.times.push_back(times[k]);
    out.values.push_back(dW - christoffel(alpha, curve[k], field[k], velocity));
  }
  return out;
}

double duality_residual(AlphaParam alpha, const CircleDiffeo& eta,
                        const PeriodicField& V, const PeriodicField& W,
                        const PeriodicField& Z, double h) {
  require_tangent(V, eta, "duality_residual");
  require_tangent(W, eta, "duality_residual");
  require_tangent(Z, eta, "duality_residual");
  const CircleDiffeo eta_inv = invert(eta);
  // Right-invariant extensions Y_xi = y o xi, Z_xi = z o xi.
  const PeriodicField y = compose_field(W, eta_inv);
  const PeriodicField z = compose_field(Z, eta_inv);
  auto extend = [](const PeriodicField& f, const CircleDiffeo& xi) {
    PeriodicField out = compose_field(f, xi);
    return out - PeriodicField::constant(out.grid(), out[0]);
  };

  const double metric_derivative = directional(
      [&](double s) {
        const CircleDiffeo xi = perturb(eta, V, s);
        return h1_inner(extend(y, xi), extend(z, xi), xi);
      },
      h);
  const PeriodicField Y = extend(y, eta);
  const PeriodicField Zf = extend(z, eta);
  const PeriodicField dY =
      directional([&](double s) { return extend(y, perturb(eta, V, s)); }, h);
  const PeriodicField dZ =
      directional([&](double s) { return extend(z, perturb(eta, V, s)); }, h);
  const PeriodicField nabla_Y =
      dY - christoffel_with_inverse(alpha, eta, eta_inv, Y, V);
  const PeriodicField nabla_dual_Z =
      dZ - christoffel_with_inverse(alpha.dual(), eta, eta_inv, Zf, V);
  return std::abs(metric_derivative - h1_inner(nabla_Y, Zf, eta) -
                  h1_inner(Y, nabla_dual_Z, eta));
}

CurvatureEvaluation curvature_eval(AlphaParam alpha, const CircleDiffeo& eta,
                                   const PeriodicField& X,
                                   const PeriodicField& Y,
                                   const PeriodicField& Z, double h) {
  require_tangent(X, eta, "curvature_eval");
  require_tangent(Y, eta, "curvature_eval");
  require_tangent(Z, eta, "curvature_eval");
  // In the displacement chart nabla_A B = DB.A + G(A, B) with G(A, B) =
  // -Gamma(B, A). For chart-constant A, B, C ([A, B] = 0):
  //   R(A,B)C = (DG.A)(B,C) - (DG.B)(A,C) + G(A, G(B,C)) - G(B, G(A,C)).
  auto G = [&](const CircleDiffeo& at, const PeriodicField& a,
               const PeriodicField& b) {
    return christoffel(alpha, at, b, a) * -1.0;
  };
  const PeriodicField dG_X = directional(
      [&](double s) { return G(perturb(eta, X, s), Y, Z); }, h);
  const PeriodicField dG_Y = directional(
      [&](double s) { return G(perturb(eta, Y, s), X, Z); }, h);
  const PeriodicField commutator = dG_X - dG_Y + G(eta, X, G(eta, Y, Z)) -
                                   G(eta, Y, G(eta, X, Z));

  const double a = alpha.value();
  auto metric_along = [&](const PeriodicField& dir, const PeriodicField& p,
                          const PeriodicField& q) {
    return directional(
        [&](double s) { return h1_inner(p, q, perturb(eta, dir, s)); }, h);
  };
  const double rhs =
      (1.0 - a * a) * (metric_along(X, Y, Z) + metric_along(Y, X, Z));
  return {commutator, rhs};
}

}  // namespace frf
