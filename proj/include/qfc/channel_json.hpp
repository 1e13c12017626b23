#pragma once

// Channel file format:
//   {"name": str, "d_in": int, "d_out": int,
//    "kraus": [ matrix, ... ]}
// where each matrix is a row-major array of rows and each entry a
// [real, imaginary] pair.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qfc/channels.hpp"

namespace qfc {

// Trace-preservation tolerance accepted from files.
inline constexpr double kChannelFileTolerance = 1e-8;

QuantumChannel channel_from_json(const nlohmann::json& doc);
QuantumChannel parse_channel(const std::string& text);
QuantumChannel load_channel(const std::filesystem::path& path);

nlohmann::json channel_to_json(const QuantumChannel& channel);

}  // namespace qfc
