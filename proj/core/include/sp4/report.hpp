#pragma once

#include <map>
#include <string>
#include <vector>

namespace sp4 {

// One manifest per CLI run. Exact-arithmetic outputs are byte-identical
// across reruns with the same flags and a warm cache; the manifest itself
// carries the wall clock and is not part of that guarantee.
struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> parameters;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> budgets;
    std::string output_dir;
    std::string cache_dir;
    double wall_seconds = 0.0;
    bool pass = false;
    int schema_version = 1;

    std::string to_json() const;
};

bool write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
bool ensure_directory(const std::string& path);

}  // namespace sp4
