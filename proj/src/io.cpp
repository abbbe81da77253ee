#include "evosig/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evosig {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::optional<Provenance> find_provenance(std::string_view text) {
    // Values end at whitespace or a closing quote.
    auto value_after = [&](std::string_view key, std::size_t from, std::size_t& end) -> std::optional<std::string> {
        const std::size_t at = text.find(key, from);
        if (at == std::string_view::npos)
            return std::nullopt;
        end = at + key.size();
        while (end < text.size() && text[end] != '"' && !std::isspace(static_cast<unsigned char>(text[end])))
            ++end;
        return std::string(text.substr(at + key.size(), end - at - key.size()));
    };
    std::size_t end = 0;
    auto id = value_after("run_id=", 0, end);
    if (!id)
        return std::nullopt;
    auto hash = value_after("config_hash=", end, end);
    if (!hash)
        return std::nullopt;
    return Provenance{*id, *hash};
}

} // namespace evosig
