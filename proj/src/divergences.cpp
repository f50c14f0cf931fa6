#include "frf/divergences.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "frf/errors.hpp"

namespace frf {

namespace {

double log_divergence(const Density& rho1, const Density& rho2) {
  std::vector<double> v(rho1.grid().size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = (std::log(rho1[j]) - std::log(rho2[j])) * rho1[j];
  }
  return 0.25 * integrate(PeriodicField(rho1.grid(), std::move(v)));
}

void require_tangent(const PeriodicField& V, const CircleDiffeo& eta,
                     const char* context) {
  require_same_grid(V, eta.displacement(), context);
  if (std::abs(V[0]) > 1e-12) {
    std::ostringstream msg;
    msg << context << ": tangent vector must vanish at 0, got " << V[0];
    throw InvalidInput(msg.str());
  }
}

CircleDiffeo perturb(const CircleDiffeo& eta, const PeriodicField& dir) {
  return CircleDiffeo::from_displacement(eta.displacement() + dir);
}

// Runs `stencil(h)` and `stencil(h/2)` and Richardson-combines them (error
// O(h^2) -> O(h^4)). Retries once with h/10 on a degenerate perturbation.
template <typename Stencil>
double richardson(const Stencil& stencil, double h, const char* context) {
  if (!(h > 0.0 && h <= 0.1)) {
    std::ostringstream msg;
    msg << context << ": step h must lie in (0, 0.1], got " << h;
    throw InvalidInput(msg.str());
  }
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      const double coarse = stencil(h);
      const double fine = stencil(0.5 * h);
      return (4.0 * fine - coarse) / 3.0;
    } catch (const DegenerateDiffeo&) {
      if (attempt == 1) throw;
      h *= 0.1;
    }
  }
  return 0.0;  // unreachable
}

}  // namespace

AlphaParam::AlphaParam(double alpha) : alpha_(alpha) {
  if (!std::isfinite(alpha) || alpha < -1.0 || alpha > 1.0) {
    std::ostringstream msg;
    msg << "alpha must lie in [-1, 1], got " << alpha;
    throw InvalidInput(msg.str());
  }
}

double alpha_divergence(const Density& rho1, const Density& rho2,
                        AlphaParam alpha) {
  require_same_grid(rho1.field(), rho2.field(), "alpha_divergence");
  if (alpha.is_lower_endpoint()) return log_divergence(rho1, rho2);
  if (alpha.is_upper_endpoint()) return log_divergence(rho2, rho1);
  const double a = alpha.value();
  const double p = 0.5 * (1.0 - a);
  const double q = 0.5 * (1.0 + a);
  std::vector<double> v(rho1.grid().size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = std::pow(rho1[j], p) * std::pow(rho2[j], q);
  }
  const double overlap = integrate(PeriodicField(rho1.grid(), std::move(v)));
  return (1.0 - overlap) / (1.0 - a * a);
}

double alpha_divergence_diffeo(const CircleDiffeo& xi, const CircleDiffeo& eta,
                               AlphaParam alpha) {
  return alpha_divergence(jacobian(xi), jacobian(eta), alpha);
}

double hellinger_distance(const Density& rho1, const Density& rho2) {
  require_same_grid(rho1.field(), rho2.field(), "hellinger_distance");
  std::vector<double> v(rho1.grid().size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = std::sqrt(rho1[j] * rho2[j]);
  }
  const double c = integrate(PeriodicField(rho1.grid(), std::move(v)));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

DivergenceFn alpha_divergence_fn(AlphaParam alpha) {
  return [alpha](const CircleDiffeo& xi, const CircleDiffeo& eta) {
    return alpha_divergence_diffeo(xi, eta, alpha);
  };
}

double metric_from_divergence(const DivergenceFn& D, const CircleDiffeo& eta,
                              const PeriodicField& V, const PeriodicField& W,
                              double h) {
  require_tangent(V, eta, "metric_from_divergence");
  require_tangent(W, eta, "metric_from_divergence");
  auto stencil = [&](double step) {
    double acc = 0.0;
    for (int si : {1, -1}) {
      const CircleDiffeo left = perturb(eta, V * (si * step));
      for (int ti : {1, -1}) {
        const CircleDiffeo right = perturb(eta, W * (ti * step));
        acc += si * ti * D(left, right);
      }
    }
    return -acc / (4.0 * step * step);
  };
  return richardson(stencil, h, "metric_from_divergence");
}

double christoffel_from_divergence(const DivergenceFn& D,
                                   const CircleDiffeo& eta,
                                   const PeriodicField& V,
                                   const PeriodicField& W,
                                   const PeriodicField& Z, double h) {
  require_tangent(V, eta, "christoffel_from_divergence");
  require_tangent(W, eta, "christoffel_from_divergence");
  require_tangent(Z, eta, "christoffel_from_divergence");
  auto stencil = [&](double step) {
    std::array<CircleDiffeo, 2> right = {perturb(eta, Z * step),
                                         perturb(eta, Z * (-step))};
    double acc = 0.0;
    for (int si : {1, -1}) {
      for (int ti : {1, -1}) {
        const CircleDiffeo left =
            perturb(eta, V * (si * step) + W * (ti * step));
        acc += si * ti * (D(left, right[0]) - D(left, right[1]));
      }
    }
    return -acc / (8.0 * step * step * step);
  };
  return richardson(stencil, h, "christoffel_from_divergence");
}

Eigen::MatrixXd fisher_rao_matrix(const ParametricFamily& family,
                                  std::span<const double> theta) {
  const std::size_t m = family.dimension;
  if (theta.size() != m || m == 0) {
    throw InvalidInput("fisher_rao_matrix: parameter dimension mismatch");
  }
  if (!(family.step > 0.0)) {
    throw InvalidInput("fisher_rao_matrix: step must be positive");
  }
  auto probe = [&](std::span<const double> at) {
    try {
      return family.density(at);
    } catch (const InvalidInput& e) {
      throw InvalidInput(std::string("fisher_rao_matrix: invalid density at "
                                     "probe point: ") + e.what());
    }
  };
  const Density center = probe(theta);
  std::vector<PeriodicField> scores;
  std::vector<double> shifted(theta.begin(), theta.end());
  for (std::size_t i = 0; i < m; ++i) {
    shifted[i] = theta[i] + family.step;
    const Density plus = probe(shifted);
    shifted[i] = theta[i] - family.step;
    const Density minus = probe(shifted);
    shifted[i] = theta[i];
    std::vector<double> s(center.grid().size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      s[j] = (std::log(plus[j]) - std::log(minus[j])) / (2.0 * family.step);
    }
    scores.emplace_back(center.grid(), std::move(s));
  }
  Eigen::MatrixXd g(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = i; k < m; ++k) {
      const double gik = integrate(scores[i] * scores[k] * center.field());
      g(i, k) = gik;
      g(k, i) = gik;
    }
  }
  return g;
}

}  // namespace frf
