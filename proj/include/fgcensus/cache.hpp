#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace fgc {

/// Bumped whenever any counting engine changes its output in any way.
/// Cache entries written under other versions are ignored, never deleted.
inline constexpr int kEngineVersion = 1;

struct CacheKey {
  int k = 2;
  int m = 1;
  std::string engine = "dp";
  int version = kEngineVersion;

  std::string filename() const {
    std::ostringstream os;
    os << "count_k" << k << "_m" << m << "_" << engine << "_v" << version << ".json";
    return os.str();
  }
};

inline std::optional<std::string> cache_load(const std::filesystem::path& dir,
                                             const CacheKey& key) {
  std::filesystem::path p = dir / key.filename();
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Atomic store: write to a temp file in the same directory, then rename.
inline void cache_store(const std::filesystem::path& dir, const CacheKey& key,
                        const std::string& bytes) {
  std::filesystem::create_directories(dir);
  std::filesystem::path final_path = dir / key.filename();
  std::filesystem::path tmp = final_path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out) throw std::runtime_error("failed to write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, final_path);
}

}  // namespace fgc
