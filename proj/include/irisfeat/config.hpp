#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "irisfeat/model.hpp"
#include "irisfeat/sweep.hpp"
#include "irisfeat/synthgen.hpp"

namespace irisfeat {

// One JSON document drives every subcommand. `seed` is the only entropy
// source: synthgen, weight init and the sweep all derive from it.
struct RunConfig {
  std::filesystem::path manifest;
  std::string preset = "mini";
  std::filesystem::path weights;  // empty: build weights from `init`
  WeightInit init = WeightInit::HeNormal;
  std::optional<std::vector<int>> taps;  // nullopt: every tap
  double split_fraction = 0.7;
  std::uint64_t seed = 42;
  std::string label;  // defaults to the preset
  SweepConfig sweep;  // sweep.seed mirrors `seed`
  std::filesystem::path out = "out";
  SynthConfig synth;  // synth.seed mirrors `seed`

  bool operator==(const RunConfig&) const;
};

/// Unknown keys and ill-typed values raise ConfigError. Relative paths are
/// resolved against base_dir.
RunConfig config_from_json_text(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig read_config(const std::filesystem::path& path);
std::string config_to_json_text(const RunConfig& config);

/// "all", or a comma list of indices and ranges such as "1,4,10-12".
std::optional<std::vector<int>> parse_taps(std::string_view text);

/// The configured taps checked against the model (TapError when out of range).
std::set<int> resolve_taps(const RunConfig& config, const ModelSpec& model);

/// Range checks on every numeric field, then path existence for the ones
/// a run needs.
void validate(const RunConfig& config, bool needs_manifest);

/// Copies `seed` into the nested configs.
void sync_seeds(RunConfig& config);

}  // namespace irisfeat
