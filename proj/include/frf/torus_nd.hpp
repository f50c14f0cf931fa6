#ifndef FRF_TORUS_ND_HPP_
#define FRF_TORUS_ND_HPP_

// alpha-connections and their geodesic equations on D(T^n)/D_mu(T^n) for the
// flat torus T^n = R^n / Z^n, evaluated at the identity coset.
//
// Sign convention: the Laplace-de Rham operator on functions is
//   Delta_dR f = -sum_i d_i^2 f,
// so that div(-(Delta_dR^{-1} df)^#) = f - int f.

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frf/divergences.hpp"

namespace frf {

// m^dim uniform samples, row-major, dim in {1, 2, 3}, m a power of two >= 16.
class TorusGrid {
 public:
  TorusGrid(std::size_t dim, std::size_t m);

  std::size_t dim() const { return dim_; }
  std::size_t m() const { return m_; }
  std::size_t size() const;
  std::vector<std::size_t> shape() const {
    return std::vector<std::size_t>(dim_, m_);
  }
  // Coordinate of flat sample `index` along `axis`.
  double coordinate(std::size_t index, std::size_t axis) const;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  std::size_t dim_;
  std::size_t m_;
};

using TorusPoint = std::array<double, 3>;

class TorusScalarField {
 public:
  TorusScalarField(TorusGrid grid, std::vector<double> values);

  static TorusScalarField zeros(const TorusGrid& grid);
  static TorusScalarField sample(
      const TorusGrid& grid,
      const std::function<double(const TorusPoint&)>& f);

  const TorusGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double max_abs() const;

  TorusScalarField& operator+=(const TorusScalarField& o);
  TorusScalarField& operator-=(const TorusScalarField& o);
  TorusScalarField& operator*=(double c);
  friend TorusScalarField operator+(TorusScalarField a,
                                    const TorusScalarField& b) {
    return a += b;
  }
  friend TorusScalarField operator-(TorusScalarField a,
                                    const TorusScalarField& b) {
    return a -= b;
  }
  friend TorusScalarField operator*(TorusScalarField a, double c) {
    return a *= c;
  }
  friend TorusScalarField operator*(const TorusScalarField& a,
                                    const TorusScalarField& b);

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

// Contravariant components; the flat metric makes # and b the identity.
class TorusVectorField {
 public:
  explicit TorusVectorField(std::vector<TorusScalarField> components);
  static TorusVectorField zeros(const TorusGrid& grid);

  const TorusGrid& grid() const { return components_.front().grid(); }
  std::size_t dim() const { return components_.size(); }
  const TorusScalarField& operator[](std::size_t i) const {
    return components_[i];
  }
  const std::vector<TorusScalarField>& components() const {
    return components_;
  }
  double max_abs() const;

  TorusVectorField& operator+=(const TorusVectorField& o);
  TorusVectorField& operator-=(const TorusVectorField& o);
  TorusVectorField& operator*=(double c);
  friend TorusVectorField operator+(TorusVectorField a,
                                    const TorusVectorField& b) {
    return a += b;
  }
  friend TorusVectorField operator-(TorusVectorField a,
                                    const TorusVectorField& b) {
    return a -= b;
  }
  friend TorusVectorField operator*(TorusVectorField a, double c) {
    return a *= c;
  }

 private:
  std::vector<TorusScalarField> components_;
};

class TorusDensity {
 public:
  // Validates positivity and |mass - 1| <= 1e-10.
  explicit TorusDensity(TorusScalarField values);
  const TorusScalarField& field() const { return values_; }

 private:
  TorusScalarField values_;
};

double integrate(const TorusScalarField& f);
TorusScalarField partial(const TorusScalarField& f, std::size_t axis);
TorusVectorField gradient(const TorusScalarField& f);
TorusScalarField div(const TorusVectorField& u);
TorusScalarField laplace_de_rham(const TorusScalarField& f);
// Delta_dR^{-1}(f - int f), zero mode removed.
TorusScalarField inv_laplace_mean_zero(const TorusScalarField& f);
// Zeroes every mode with 3|k_i| >= m on some axis.
TorusScalarField dealias(const TorusScalarField& f);
// d_i u_j - d_j u_i for i < j, in lexicographic pair order.
std::vector<TorusScalarField> curl_components(const TorusVectorField& u);
// u minus its gradient part -grad Delta_dR^{-1} div u.
TorusVectorField divergence_free_part(const TorusVectorField& u);
// Band-limited evaluation at an arbitrary point.
double evaluate(const TorusScalarField& f, const TorusPoint& x);

// (1/4) int div v div w.
double h1_inner_nd(const TorusVectorField& v, const TorusVectorField& w);

// (nabla^(a)_v w)_e for right-invariant w:
//   -grad Delta_dR^{-1} [ grad(div w).v + (1-a)/2 div w div v ].
TorusVectorField nabla_alpha_identity(const TorusVectorField& v,
                                      const TorusVectorField& w,
                                      AlphaParam alpha);

// u_t = grad Delta_dR^{-1} [ grad(div u).u + (1-a)/2 (div u)^2 ], dealiased.
TorusVectorField geodesic_rhs_nd(const TorusVectorField& u, AlphaParam alpha);

struct TorusTrajectory {
  std::vector<double> times;
  std::vector<TorusVectorField> velocities;
  std::vector<TorusScalarField> divergences;
  AlphaParam alpha{0.0};
  std::optional<double> breakdown_time;
  std::string breakdown_reason;
};

struct NdOptions {
  std::size_t record_every = 1;
  double blowup_cap = 1e6;
};

// RK4 on geodesic_rhs_nd from the dealiased u0.
TorusTrajectory integrate_nd(const TorusVectorField& u0, AlphaParam alpha,
                             double T, double dt,
                             const NdOptions& options = {});

// L-inf of the 1-form d phi_t + d i_u d phi + (1-a) phi d phi at interior
// samples, with phi_t by centered differences.
std::vector<double> pjn_residual(const TorusTrajectory& trajectory,
                                 AlphaParam alpha);

// The same residual for a trajectory given in Lagrangian labels, psi = phi o
// eta: since (phi_t + u.grad phi) o eta = psi_t, the 1-form vanishes iff the
// label gradient of psi_t + (1-a)/2 psi^2 does.
std::vector<double> pjn_residual_lagrangian(
    const std::vector<double>& times,
    const std::vector<TorusScalarField>& phi_labels, AlphaParam alpha);

struct Alpha1NdPoint {
  TorusDensity jacobian;        // e^{at+b} / int e^{at+b}, in labels
  TorusScalarField phi_labels;  // (phi o eta)(t, x)
  TorusScalarField chart;       // log Jac - int log Jac = a t + b
};

Alpha1NdPoint alpha1_solution_nd(const TorusScalarField& a,
                                 const TorusScalarField& b, double t);

// Forward RK4 advection of tracer labels through recorded velocities, using
// linear interpolation between consecutive records. Returns positions at
// every recorded time.
std::vector<std::vector<TorusPoint>> flow_tracers(
    const std::vector<double>& times,
    const std::vector<TorusVectorField>& velocities,
    const std::vector<TorusPoint>& labels);

}  // namespace frf

#endif  // FRF_TORUS_ND_HPP_
