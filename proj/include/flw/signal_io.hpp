#pragma once

#include <string>

#include "flw/grid.hpp"
#include "json.hpp"

namespace flw {

nlohmann::json signal_to_json(const Signal& f);
Signal signal_from_json(const nlohmann::json& j);

// Binary layout: "FLW1", u32 d, u32 n (little-endian), then interleaved
// float64 re/im pairs in row-major sample order.
std::string signal_to_binary(const Signal& f);
Signal signal_from_binary(const std::string& bytes);

// Picks the format from the leading bytes.
Signal load_signal(const std::string& path);
void save_signal(const Signal& f, const std::string& path, bool binary = false);

}  // namespace flw
