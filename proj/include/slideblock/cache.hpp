#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slideblock/distribution.hpp"

namespace slideblock {

// Directory of exact distributions keyed by a hash of their parameters.
// Each file carries its parameter header and a checksum of the mass lines;
// entries that fail either check are treated as absent.
class DistributionCache {
 public:
  explicit DistributionCache(std::filesystem::path dir);

  // --cache-dir, else $SLIDEBLOCK_CACHE_DIR, else ./.slideblock-cache
  static std::filesystem::path resolve_dir(const std::optional<std::string>& flag);

  static std::string cache_id(const std::vector<Pattern>& patterns, std::size_t n, const IidModel& model,
                              Counting counting);

  std::optional<CountDistribution> load(const std::vector<Pattern>& patterns, std::size_t n, const IidModel& model,
                                        Counting counting) const;
  // Returns the cache id.
  std::string store(const CountDistribution& d) const;

  template <typename Compute>
  CountDistribution get_or_compute(const std::vector<Pattern>& patterns, std::size_t n, const IidModel& model,
                                   Counting counting, Compute&& compute, bool* hit = nullptr) const {
    if (auto cached = load(patterns, n, model, counting)) {
      if (hit) *hit = true;
      return *std::move(cached);
    }
    if (hit) *hit = false;
    CountDistribution d = compute();
    store(d);
    return d;
  }

  struct Entry {
    std::string id;
    std::filesystem::path path;
    bool valid;
    std::string summary;  // patterns / n / counting, or the failure reason
  };
  std::vector<Entry> list() const;
  std::size_t clear() const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& id) const;
  std::filesystem::path dir_;
};

}  // namespace slideblock
