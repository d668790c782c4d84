#pragma once

#include <string>

#include "json.hpp"

namespace chipvec {

// Deterministic JSON serialization for bundle files: object keys sorted
// (nlohmann default), floating-point numbers at 17 significant digits,
// 1-space-per-level indentation. Non-finite numbers are rejected.
std::string json_text(const nlohmann::json& j);

nlohmann::json parse_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// 64-bit FNV-1a over the byte string, lowercase hex.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace chipvec
