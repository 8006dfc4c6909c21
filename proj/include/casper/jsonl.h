#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace casper {

using Json = nlohmann::json;

/// Reads every line of a text file. Throws InvalidArgument if the file
/// cannot be opened.
std::vector<std::string> read_lines(const std::filesystem::path& path);

Json read_json_file(const std::filesystem::path& path);

/// Writes `doc` as two-space indented JSON with a trailing newline. Object
/// keys are emitted sorted, so equal documents produce identical bytes.
void write_json_file(const std::filesystem::path& path, const Json& doc);

/// Writes one compact JSON record per line.
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows);

} // namespace casper
