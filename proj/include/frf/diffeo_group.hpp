#ifndef FRF_DIFFEO_GROUP_HPP_
#define FRF_DIFFEO_GROUP_HPP_

// Circle diffeomorphisms fixing 0, i.e. cosets of D(S^1)/Rot(S^1), stored as
// identity plus a periodic displacement.

#include <functional>
#include <vector>

#include "frf/circle_calculus.hpp"

namespace frf {

inline constexpr double kJacobianFloor = 1e-8;

// Smooth positive density with unit total mass.
class Density {
 public:
  // Validates positivity and |mass - 1| <= 1e-10.
  explicit Density(PeriodicField values);
  // Validates positivity, then divides by the mass.
  static Density normalized(const PeriodicField& values);
  static Density uniform(const PeriodicGrid& grid);

  const PeriodicField& field() const { return values_; }
  const PeriodicGrid& grid() const { return values_.grid(); }
  double operator[](std::size_t j) const { return values_[j]; }

 private:
  PeriodicField values_;
};

// eta(x) = x + d(x), d periodic with d(0) = 0 and eta' > kJacobianFloor.
class CircleDiffeo {
 public:
  static CircleDiffeo identity(const PeriodicGrid& grid);
  // Subtracts d(0) to land on the coset representative fixing 0.
  // Throws DegenerateDiffeo if 1 + d' <= jacobian_floor anywhere.
  static CircleDiffeo from_displacement(const PeriodicField& d,
                                        double jacobian_floor = kJacobianFloor);
  // eta(x) = int_0^x rho.
  static CircleDiffeo from_density(const Density& rho);

  const PeriodicGrid& grid() const { return d_.grid(); }
  const PeriodicField& displacement() const { return d_; }
  // 1 + d' sampled on the grid.
  const PeriodicField& derivative() const { return jac_; }

  // eta(x) for arbitrary real x (band-limited evaluation of d).
  double operator()(double x) const { return x + interp_(x); }
  std::pair<double, double> value_and_derivative(double x) const;
  // eta(x_j).
  std::vector<double> node_values() const;

 private:
  CircleDiffeo(PeriodicField d, PeriodicField jac);

  PeriodicField d_;
  PeriodicField jac_;
  BandLimitedInterpolant interp_;
};

CircleDiffeo compose(const CircleDiffeo& eta, const CircleDiffeo& xi);

// Per-node monotone root solve of eta(y) = x_j: bisection seed, Newton polish.
CircleDiffeo invert(const CircleDiffeo& eta);

// eta' as a density.
Density jacobian(const CircleDiffeo& eta);

// sqrt(eta'), a point of the unit sphere in L^2.
PeriodicField sqrt_jac_embed(const CircleDiffeo& eta);

// V o xi, evaluated by band-limited interpolation of V.
PeriodicField compose_field(const PeriodicField& V, const CircleDiffeo& xi);

// V o eta^{-1}: the Eulerian velocity of a Lagrangian vector V at eta.
PeriodicField pushforward_velocity(const PeriodicField& V,
                                   const CircleDiffeo& eta);

using VelocityFunction = std::function<PeriodicField(double)>;

// Piecewise-linear interpolation in t of sampled velocity fields.
VelocityFunction linear_in_time(std::vector<double> times,
                                std::vector<PeriodicField> fields);

struct DiffeoTrajectory {
  std::vector<double> times;
  std::vector<CircleDiffeo> diffeos;
};

// Solves d eta/dt = u(t) o eta, eta(0) = id, with classical RK4 on the
// Lagrangian node positions. T / dt must be (close to) an integer.
// Throws BreakdownError carrying the first time the Jacobian collapses.
DiffeoTrajectory flow(const VelocityFunction& u, const PeriodicGrid& grid,
                      double T, double dt);

// Number of fixed steps covering [0, T]; throws InvalidInput unless T/dt is
// an integer to 1e-9 relative.
std::size_t step_count(double T, double dt);

}  // namespace frf

#endif  // FRF_DIFFEO_GROUP_HPP_
