#pragma once

#include <filesystem>
#include <string>

#include "irisfeat/container.hpp"
#include "irisfeat/model.hpp"

namespace irisfeat {

// Parameter naming inside LPWT weight files:
//   <conv>.weight  [out, in, kh, kw]   (OIHW)
//   <conv>.bias    [out]               optional
//   <bn>.gamma / .beta / .mean / .variance  [channels]
//   <bn>.epsilon   scalar
// with <conv>/<bn> the layer names from ModelSpec (e.g. conv3_block2_2_conv / _bn).

Container model_to_container(const ModelSpec& model);

/// Fills the preset from `container`. Missing or unexpected entries raise
/// CompletenessError listing every offending name; a dims mismatch raises
/// ShapeError naming the entry.
ModelSpec model_from_container(const Container& container, const std::string& preset);

ModelSpec load_weights(const std::filesystem::path& path, const std::string& preset);
void save_weights(const std::filesystem::path& path, const ModelSpec& model);

}  // namespace irisfeat
