#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mplcp/geom.hpp"
#include "mplcp/sampler.hpp"

namespace mplcp {

struct RunConfig {
  std::string command;  // "validate" or "curve"
  Palm mode = Palm::kNone;
  double lambda_l = 0;
  double lambda_c = 0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::size_t grid_size = 200;
  std::string out_path;
  std::string format = "csv";  // "csv" or "json"
  std::string preset;          // dl-dp | dl-sp | sl-dp | sl-sp (optional)
  std::string regime_label;
};

// Densities of a named regime; they differ between the two reference points.
std::optional<ModelParams> preset_params(const std::string& preset, Palm mode);

inline constexpr int kExitPass = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfigError = 2;

// Runs one command given argv-style arguments (without the program name).
int run_cli(const std::vector<std::string>& args);

}  // namespace mplcp
