#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "heckeraise/modsym.hpp"

namespace heckeraise {

// Cache directory resolved from HECKE_RAISE_CACHE: "off" disables caching,
// unset falls back to $XDG_CACHE_HOME/hecke-raise or ~/.cache/hecke-raise.
std::optional<std::filesystem::path> cache_dir();

// ModSymSpace(level, sign) through the on-disk cache.  Entries are checksummed;
// a corrupt or stale file warns on stderr and is recomputed and rewritten.
std::shared_ptr<const ModSymSpace> cached_space(long level, Sign sign);

} // namespace heckeraise
