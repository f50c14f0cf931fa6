#ifndef FRF_VALIDATION_HPP_
#define FRF_VALIDATION_HPP_

// Invariant suites over the library, shared by the CLI `validate` command and
// the test programs. Every check reports the measured residual next to its
// tolerance; results depend only on the options, never on wall-clock time.

#include <cstdint>
#include <string>
#include <vector>

namespace frf {

struct Check {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  // A few checks bound the measurement from below (convergence ratios).
  bool at_least = false;
  bool passed = false;
};

struct SuiteOptions {
  std::size_t n = 256;
  std::uint64_t seed = 20240601;
  // Worker threads used by "all"; each suite runs on a single thread.
  std::size_t threads = 1;
};

// The concrete suites, in report order (excludes "all").
const std::vector<std::string>& suite_names();
bool is_known_suite(const std::string& name);

// Runs one suite, or every suite for "all". Throws InvalidInput for an unknown
// name.
std::vector<Check> run_suite(const std::string& name,
                             const SuiteOptions& options = {});

}  // namespace frf

#endif  // FRF_VALIDATION_HPP_
