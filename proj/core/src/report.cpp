#include "sp4/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sp4 {

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = schema_version;
    j["subcommand"] = subcommand;
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["budgets"] = budgets;
    j["output_dir"] = output_dir;
    j["cache_dir"] = cache_dir;
    j["wall_seconds"] = wall_seconds;
    j["pass"] = pass;
    return j.dump(2) + "\n";
}

bool write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) return false;
    os << content;
    return bool(os);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

bool ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    return !ec;
}

}  // namespace sp4
