#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace spbw {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

uint64_t fnv1a(const std::string& s);

// skeleton document; results are attached by the caller, wall_time_ms is
// excluded from the determinism contract and added at emission time
nlohmann::json make_report(const std::string& command, const std::string& input,
                           uint64_t seed, const std::string& mode);

std::string render_report(const nlohmann::json& doc);  // canonical: sorted keys, indent 2
void emit_report(const nlohmann::json& doc, const std::string& path);

}  // namespace spbw
