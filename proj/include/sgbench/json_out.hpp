#pragma once

#include <string>

#include "json.hpp"

namespace sgbench {

using ordered_json = nlohmann::ordered_json;

// Serialize with insertion-ordered keys and every double printed through
// the project's 17-significant-digit formatter, so emitted JSON is
// byte-identical across runs and re-parses to the exact same values.
// (nlohmann's own dump() chooses shortest-round-trip forms that differ in
// byte layout between number classes; reading still uses nlohmann::parse.)
std::string dump_json(const ordered_json& value, int indent = 2);

void write_json(const std::string& path, const ordered_json& value);

ordered_json read_json(const std::string& path);

}  // namespace sgbench
