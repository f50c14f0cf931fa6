#ifndef FRF_PRESETS_HPP_
#define FRF_PRESETS_HPP_

// Named initial-data families and a small spec-string grammar, so that every
// run can be reproduced from the command line alone.
//
// 1-D field specs
//   zero | sine | two-mode | burgers | alpha1-a | alpha1-b
//   trig:c1,s1,c2,s2,...   sum_k c_k cos(2 pi k x) + s_k sin(2 pi k x)
// 1-D density specs (always normalized to unit mass)
//   uniform | bump | tilt | skew
//   trig:c1,s1,...         exp of the trig polynomial above
// Torus scalar specs (dim components of k, then cos and sin amplitudes)
//   zero | mixed | single
//   modes:k1,k2,c,s;k1,k2,c,s;...

#include <string>
#include <vector>

#include "frf/circle_calculus.hpp"
#include "frf/diffeo_group.hpp"
#include "frf/torus_nd.hpp"

namespace frf {

struct PresetInfo {
  std::string name;
  std::string formula;
};

// Throws InvalidInput naming the offending spec.
PeriodicField parse_field_spec(const std::string& spec,
                               const PeriodicGrid& grid);
Density parse_density_spec(const std::string& spec, const PeriodicGrid& grid);
TorusScalarField parse_torus_spec(const std::string& spec,
                                  const TorusGrid& grid);

// Shifts f by a constant so that f(0) = 0.
PeriodicField pin_at_origin(const PeriodicField& f);

const std::vector<PresetInfo>& field_presets();
const std::vector<PresetInfo>& density_presets();
const std::vector<PresetInfo>& torus_presets();

}  // namespace frf

#endif  // FRF_PRESETS_HPP_
