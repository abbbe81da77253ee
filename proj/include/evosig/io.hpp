#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace evosig {

/// Throws std::runtime_error when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);

struct Provenance {
    std::string run_id;
    std::string config_hash;
};

/// Finds the first "run_id=<id> config_hash=<hash>" pair in `text`.
std::optional<Provenance> find_provenance(std::string_view text);

} // namespace evosig
