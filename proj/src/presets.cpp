#include "frf/presets.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "frf/errors.hpp"

namespace frf {

namespace {

const std::string kTrig = "trig:";
const std::string kModes = "modes:";

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

std::vector<double> parse_numbers(const std::string& text,
                                  const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const char* first = item.data();
    const char* last = item.data() + item.size();
    while (first < last && *first == ' ') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw InvalidInput("bad number '" + item + "' in spec '" + spec + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw InvalidInput("empty coefficient list in '" + spec + "'");
  return out;
}

double trig_sum(const std::vector<double>& coeffs, double x) {
  double v = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); i += 2) {
    const double k = static_cast<double>(i / 2 + 1);
    v += coeffs[i] * std::cos(kTwoPi * k * x);
    if (i + 1 < coeffs.size()) v += coeffs[i + 1] * std::sin(kTwoPi * k * x);
  }
  return v;
}

std::vector<double> trig_coefficients(const std::string& spec,
                                      const PeriodicGrid& grid) {
  auto coeffs = parse_numbers(spec.substr(kTrig.size()), spec);
  if (3 * ((coeffs.size() + 1) / 2) >= grid.size()) {
    throw InvalidInput("spec '" + spec + "' has more modes than the grid resolves");
  }
  return coeffs;
}

std::vector<double> named_field(const std::string& name) {
  const double inv = 1.0 / kTwoPi;
  if (name == "zero") return {0.0};
  if (name == "sine") return {0.0, 0.5 * inv};
  if (name == "two-mode") return {0.0, 0.5 * inv, 0.0, 0.2 * inv};
  if (name == "burgers") return {0.0, inv};
  if (name == "alpha1-a") return {0.0, 0.3};
  if (name == "alpha1-b") return {0.2};
  return {};
}

std::vector<double> named_log_density(const std::string& name) {
  if (name == "uniform") return {0.0};
  if (name == "bump") return {0.5};
  if (name == "tilt") return {0.0, 0.3};
  if (name == "skew") return {0.4, 0.0, 0.0, 0.2};
  return {};
}

}  // namespace

const std::vector<PresetInfo>& field_presets() {
  static const std::vector<PresetInfo> presets = {
      {"zero", "0"},
      {"sine", "0.5 sin(2 pi x) / (2 pi)"},
      {"two-mode", "(0.5 sin(2 pi x) + 0.2 sin(4 pi x)) / (2 pi)"},
      {"burgers", "sin(2 pi x) / (2 pi), breakdown at t* = 1 for a = -1"},
      {"alpha1-a", "0.3 sin(2 pi x)"},
      {"alpha1-b", "0.2 cos(2 pi x)"},
  };
  return presets;
}

const std::vector<PresetInfo>& density_presets() {
  static const std::vector<PresetInfo> presets = {
      {"uniform", "1"},
      {"bump", "exp(0.5 cos(2 pi x)), normalized"},
      {"tilt", "exp(0.3 sin(2 pi x)), normalized"},
      {"skew", "exp(0.4 cos(2 pi x) + 0.2 sin(4 pi x)), normalized"},
  };
  return presets;
}

const std::vector<PresetInfo>& torus_presets() {
  static const std::vector<PresetInfo> presets = {
      {"zero", "0"},
      {"single", "0.4 sin(2 pi x1)"},
      {"mixed",
       "0.4 sin(2 pi x1) + 0.3 cos(2 pi (x1 + x2)) + 0.2 sin(4 pi x2)"},
  };
  return presets;
}

PeriodicField pin_at_origin(const PeriodicField& f) {
  return f - PeriodicField::constant(f.grid(), f[0]);
}

PeriodicField parse_field_spec(const std::string& spec,
                               const PeriodicGrid& grid) {
  std::vector<double> coeffs = starts_with(spec, kTrig)
                                   ? trig_coefficients(spec, grid)
                                   : named_field(spec);
  if (coeffs.empty()) throw InvalidInput("unknown field spec '" + spec + "'");
  return PeriodicField::sample(grid,
                               [&](double x) { return trig_sum(coeffs, x); });
}

Density parse_density_spec(const std::string& spec, const PeriodicGrid& grid) {
  std::vector<double> coeffs = starts_with(spec, kTrig)
                                   ? trig_coefficients(spec, grid)
                                   : named_log_density(spec);
  if (coeffs.empty()) {
    throw InvalidInput("unknown density spec '" + spec + "'");
  }
  return Density::normalized(PeriodicField::sample(
      grid, [&](double x) { return std::exp(trig_sum(coeffs, x)); }));
}

TorusScalarField parse_torus_spec(const std::string& spec,
                                  const TorusGrid& grid) {
  struct Mode {
    std::array<double, 3> k{0.0, 0.0, 0.0};
    double c = 0.0;
    double s = 0.0;
  };
  std::vector<Mode> modes;
  const std::size_t d = grid.dim();
  if (starts_with(spec, kModes)) {
    std::stringstream ss(spec.substr(kModes.size()));
    std::string group;
    while (std::getline(ss, group, ';')) {
      const auto nums = parse_numbers(group, spec);
      if (nums.size() != d + 2) {
        std::ostringstream msg;
        msg << "each mode in '" << spec << "' needs " << d + 2
            << " numbers (wavevector, cos, sin)";
        throw InvalidInput(msg.str());
      }
      Mode m;
      for (std::size_t a = 0; a < d; ++a) {
        if (nums[a] != std::round(nums[a]) ||
            3.0 * std::abs(nums[a]) >= static_cast<double>(grid.m())) {
          throw InvalidInput("wavevector in '" + spec +
                             "' must be integers resolved by the grid");
        }
        m.k[a] = nums[a];
      }
      m.c = nums[d];
      m.s = nums[d + 1];
      modes.push_back(m);
    }
  } else if (spec == "zero") {
  } else if (spec == "single") {
    modes.push_back({{1.0, 0.0, 0.0}, 0.0, 0.4});
  } else if (spec == "mixed") {
    modes.push_back({{1.0, 0.0, 0.0}, 0.0, 0.4});
    if (d >= 2) {
      modes.push_back({{1.0, 1.0, 0.0}, 0.3, 0.0});
      modes.push_back({{0.0, 2.0, 0.0}, 0.0, 0.2});
    } else {
      modes.push_back({{2.0, 0.0, 0.0}, 0.3, 0.0});
    }
  } else {
    throw InvalidInput("unknown torus spec '" + spec + "'");
  }
  return TorusScalarField::sample(grid, [&](const TorusPoint& x) {
    double v = 0.0;
    for (const Mode& m : modes) {
      double phase = 0.0;
      for (std::size_t a = 0; a < d; ++a) phase += m.k[a] * x[a];
      v += m.c * std::cos(kTwoPi * phase) + m.s * std::sin(kTwoPi * phase);
    }
    return v;
  });
}

}  // namespace frf
