#pragma once

#include <optional>
#include <string>

#include "sp4/hecke.hpp"

namespace sp4 {

// Binary table cache, one file per (p, r, schema version), atomic writes
// under an advisory lock. A checksum mismatch (or any header mismatch)
// makes load return empty so the caller regenerates.
std::string table_cache_path(const std::string& dir, i64 p, int r);
bool save_coset_table(const std::string& dir, const CosetTable& table);
std::optional<CosetTable> load_coset_table(const std::string& dir, i64 p, int r);

// Resolution order: explicit flag, SP4_CACHE_DIR, XDG_CACHE_HOME, ~/.cache.
std::string default_cache_dir();

}  // namespace sp4
