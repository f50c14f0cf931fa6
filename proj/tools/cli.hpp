#ifndef FRF_TOOLS_CLI_HPP_
#define FRF_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace frf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

// Raised for problems the user can fix in the flags or the config file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every knob of a run. A value of 0 / "" for n, u0, a, b and the list fields
// means "pick the default for this command". resolve() replaces them before
// the run starts, so the echoed config always holds concrete values.
struct RunConfig {
  std::string command;
  std::size_t n = 0;
  std::size_t dim = 1;
  std::vector<double> alpha;
  double t_final = 0.5;
  double dt = 1e-3;
  std::string method = "pde";
  std::string u0;
  std::string a;
  std::string b;
  std::string rho1;
  std::string rho2;
  std::string family = "cosine";
  std::vector<double> theta;
  std::size_t record_every = 10;
  std::string suite = "all";
  std::uint64_t seed = 20240601;
  std::string out;
  std::string format = "csv";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::ordered_json config_to_json(const RunConfig& config);

// Accepts a bare config object or a report/sidecar carrying one under
// "config". Unknown keys and ill-typed values raise ConfigError.
RunConfig config_from_json(const nlohmann::json& doc);

// Fills defaults and checks every field against the library preconditions.
RunConfig resolve(RunConfig config);

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace frf::cli

#endif  // FRF_TOOLS_CLI_HPP_
