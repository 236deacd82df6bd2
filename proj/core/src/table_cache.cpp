#include "sp4/table_cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

namespace sp4 {

namespace {

constexpr char kMagic[8] = {'S', 'P', '4', 'T', 'B', 'L', '0', '1'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a(const void* data, size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < n; ++i) {
        h ^= b[i];
        h *= 1099511628211ull;
    }
    return h;
}

struct Header {
    char magic[8];
    std::uint32_t version;
    std::uint32_t pad;
    std::uint64_t p;
    std::int32_t r;
    std::int32_t label_a;  // -1,-1 for a full table
    std::int32_t label_b;
    std::int32_t pad2;
    std::uint64_t count;
    std::uint64_t checksum;
};

struct FileLock {
    int fd = -1;
    explicit FileLock(const std::string& path) {
        fd = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd >= 0) ::flock(fd, LOCK_EX);
    }
    ~FileLock() {
        if (fd >= 0) {
            ::flock(fd, LOCK_UN);
            ::close(fd);
        }
    }
};

}  // namespace

std::string table_cache_path(const std::string& dir, i64 p, int r) {
    return dir + "/tbl_p" + std::to_string(p) + "_r" + std::to_string(r) + "_v" +
           std::to_string(kVersion) + ".bin";
}

bool save_coset_table(const std::string& dir, const CosetTable& table) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::string path = table_cache_path(dir, table.p, table.r);
    FileLock lock(path + ".lock");

    std::vector<std::int32_t> payload;
    payload.reserve(table.reps.size() * 16);
    for (const auto& m : table.reps)
        for (i64 v : m.a) {
            if (v > INT32_MAX || v < INT32_MIN) return false;
            payload.push_back((std::int32_t)v);
        }

    Header h{};
    std::memcpy(h.magic, kMagic, 8);
    h.version = kVersion;
    h.p = (std::uint64_t)table.p;
    h.r = table.r;
    h.label_a = table.label ? table.label->first : -1;
    h.label_b = table.label ? table.label->second : -1;
    h.count = table.reps.size();
    h.checksum = fnv1a(payload.data(), payload.size() * sizeof(std::int32_t));

    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) return false;
        os.write(reinterpret_cast<const char*>(&h), sizeof(h));
        os.write(reinterpret_cast<const char*>(payload.data()),
                 (std::streamsize)(payload.size() * sizeof(std::int32_t)));
        if (!os) return false;
    }
    std::filesystem::rename(tmp, path, ec);
    return !ec;
}

std::optional<CosetTable> load_coset_table(const std::string& dir, i64 p, int r) {
    std::string path = table_cache_path(dir, p, r);
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    Header h{};
    is.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!is || std::memcmp(h.magic, kMagic, 8) != 0 || h.version != kVersion ||
        h.p != (std::uint64_t)p || h.r != r)
        return std::nullopt;
    std::vector<std::int32_t> payload(h.count * 16);
    is.read(reinterpret_cast<char*>(payload.data()),
            (std::streamsize)(payload.size() * sizeof(std::int32_t)));
    if (!is) return std::nullopt;
    if (fnv1a(payload.data(), payload.size() * sizeof(std::int32_t)) != h.checksum)
        return std::nullopt;  // corrupted cache is regenerated, never reused
    CosetTable t;
    t.p = p;
    t.r = r;
    if (h.label_a >= 0) t.label = std::make_pair((int)h.label_a, (int)h.label_b);
    t.reps.resize(h.count);
    for (size_t i = 0; i < h.count; ++i)
        for (int k = 0; k < 16; ++k) t.reps[i].a[k] = payload[16 * i + k];
    return t;
}

std::string default_cache_dir() {
    if (const char* env = std::getenv("SP4_CACHE_DIR")) return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME")) return std::string(xdg) + "/sp4verify";
    if (const char* home = std::getenv("HOME")) return std::string(home) + "/.cache/sp4verify";
    return ".sp4cache";
}

}  // namespace sp4
