#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "cctv/errors.hpp"

namespace cctv::json_util {

using Json = nlohmann::ordered_json;

/// Parses `text`, rethrowing syntax errors as InputError with line/column.
Json parse(std::string_view text);

/// Typed member access; errors name the JSON path `where`.
double require_number(const Json& obj, const char* key, const std::string& where);
std::string require_string(const Json& obj, const char* key, const std::string& where);
const Json& require_member(const Json& obj, const char* key, const std::string& where);

std::string read_file(const std::string& path);
/// Writes via a temporary sibling file then renames over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace cctv::json_util
