#pragma once

#include <cstdint>
#include <string>

#include "taskplan/core/io.hpp"
#include "taskplan/nn/nn.hpp"

namespace taskplan::nn {

// Checkpoint payload: one F32 blob per parameter, keyed by parameter name.
// Blob order follows the param list, so save/load round-trips byte-stably.
io::Container params_container(const std::string& header_json,
                               const ParamList<float>& ps);

// Fills weights in place; throws on a missing name or a size mismatch.
void load_params(const io::Container& c, const ParamList<float>& ps);

// FNV-1a over parameter names and raw weight bytes in list order. Stable
// identity for "trained against this exact pretrain checkpoint" checks.
uint64_t params_fingerprint(const ParamList<float>& ps);

}  // namespace taskplan::nn
