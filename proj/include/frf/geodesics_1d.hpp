#ifndef FRF_GEODESICS_1D_HPP_
#define FRF_GEODESICS_1D_HPP_

// Geodesics of the alpha-connections on D(S^1)/Rot(S^1). In Eulerian form the
// geodesic equation is the generalized Proudman-Johnson equation
//
//   u_t + u u_x = -(1+a)/2 A^{-1} d/dx (u_x^2),
//
// integrated pseudospectrally with RK4. The cases a = 1, -1 (flat) and 0
// (sphere isometry) also have closed forms, exposed here as oracles.

#include <optional>
#include <string>
#include <vector>

#include "frf/diffeo_group.hpp"
#include "frf/divergences.hpp"

namespace frf {

struct Breakdown {
  double time = 0.0;
  std::string reason;
};

struct VelocityTrajectory {
  std::vector<double> times;
  std::vector<PeriodicField> fields;
  AlphaParam alpha{0.0};
  // Set when the classical solution was lost; no fields past this time.
  std::optional<Breakdown> breakdown;
  // min over particles of the Lagrangian Jacobian eta_x, per recorded time.
  std::vector<double> min_jacobian;

  VelocityFunction as_function() const;
};

// -dealias(u u') - (1+a)/2 A^{-1} d/dx dealias(u'^2).
PeriodicField pj_rhs(const PeriodicField& u, AlphaParam alpha);

struct PjOptions {
  // Record every k-th step (the final step is always recorded).
  std::size_t record_every = 1;
  double blowup_cap = 1e6;
  double jacobian_floor = kJacobianFloor;
};

// RK4 on pj_rhs from u0 (u0(0) = 0, dt <= 1e-2). Alongside u the integrator
// carries, per grid label x_j, the Lagrangian slope m = u_x o eta and Jacobian
// J = eta_x through
//   dm/dt = C(t) - (1-a)/2 m^2,   dJ/dt = m J,   C(t) = conserved_C(u(t), a),
// and halts with a recorded breakdown when |u|, |u_x| or |m| exceed the cap,
// anything turns non-finite, or J falls to the Jacobian floor.
VelocityTrajectory integrate_pj(const PeriodicField& u0, AlphaParam alpha,
                                double T, double dt,
                                const PjOptions& options = {});

// -(1+a)/2 int u_x^2.
double conserved_C(const PeriodicField& u, AlphaParam alpha);

// log eta' - int log eta': affine coordinates of the alpha = 1 connection.
PeriodicField affine_chart_phi(const CircleDiffeo& eta);

// eta(x) = int_0^x e^f / int_0^1 e^f for mean-zero f.
CircleDiffeo inverse_phi(const PeriodicField& f);

struct GeodesicPoint {
  CircleDiffeo eta;
  PeriodicField u;
};

// The alpha = 1 geodesic through the chart line a t + b:
//   eta(t, x) = int_0^x e^{a t + b} / int_0^1 e^{a t + b},  u = eta_t o eta^{-1}.
GeodesicPoint alpha1_solution(const PeriodicField& a, const PeriodicField& b,
                              double t);

// t* = -1 / min u0' (infinity when u0' >= 0 on the grid).
double burgers_breakdown_time(const PeriodicField& u0);

// The alpha = -1 geodesic: eta(t) = id + t u0, u(t) = u0 o eta(t)^{-1}.
// Throws BreakdownError for t >= t*.
GeodesicPoint alpham1_solution(const PeriodicField& u0, double t);

// Great-circle interpolation of sqrt(rho) on the unit L^2 sphere, t in [0, 1].
Density alpha0_density_geodesic(const Density& rho0, const Density& rho1,
                                double t);

}  // namespace frf

#endif  // FRF_GEODESICS_1D_HPP_
