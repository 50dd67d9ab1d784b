#pragma once

#include <filesystem>
#include <vector>

#include "bayesr/vb_solver.hpp"

namespace bayesr {

// Writes one PFM per field and channel plus manifest.txt listing field,
// channel, height, width, role and file. PFM stores float32, so a state
// round-trips exactly once it has passed through quantize_to_float.
void dump_state(const std::vector<VariationalState>& channels,
                const std::filesystem::path& dir);
std::vector<VariationalState> load_state(const std::filesystem::path& dir);

// Rounds every field to the nearest float32.
void quantize_to_float(VariationalState& state);

}  // namespace bayesr
