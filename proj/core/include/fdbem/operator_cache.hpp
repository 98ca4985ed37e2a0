#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "fdbem/translation.hpp"

namespace fdbem {

// Identity of a cached operator set. Any mismatch invalidates the file.
struct CacheKey {
  std::uint64_t mesh_hash = 0;
  double k = 0.0;
  double epsilon = 0.0;
  int p0 = 0;
  int max_leaf = 0;
  bool operator==(const CacheKey&) const = default;
};

inline constexpr std::uint32_t kCacheVersion = 2;

// Binary layout: magic "FDBEMOPS", version, key, then per level its clouds,
// bases and tables as raw little-endian 64-bit values.
void save_operator_cache(const std::filesystem::path& path, const CacheKey& key,
                         const TranslationOperators& ops);

// Returns nullopt when the file is missing, has another version or another key.
// Throws Error on a truncated or corrupt file.
std::optional<TranslationOperators> load_operator_cache(const std::filesystem::path& path,
                                                        const CacheKey& key);

}  // namespace fdbem
