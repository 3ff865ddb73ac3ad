#include "slideblock/cache.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "slideblock/errors.hpp"

namespace slideblock {

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

constexpr const char* kExtension = ".dist";

struct ParsedFile {
  std::string header;  // parameter header lines, verbatim
  std::string body;    // mass lines
  std::string checksum;
};

std::optional<ParsedFile> split_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  ParsedFile f;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# checksum=", 0) == 0)
      f.checksum = line.substr(11);
    else if (!line.empty() && line[0] == '#')
      f.header += line + '\n';
    else if (!line.empty())
      f.body += line + '\n';
  }
  return f;
}

}  // namespace

DistributionCache::DistributionCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path DistributionCache::resolve_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("SLIDEBLOCK_CACHE_DIR"); env && *env) return env;
  return ".slideblock-cache";
}

std::string DistributionCache::cache_id(const std::vector<Pattern>& patterns, std::size_t n, const IidModel& model,
                                        Counting counting) {
  return hex64(fnv1a(distribution_header(patterns, n, model, counting)));
}

std::filesystem::path DistributionCache::path_for(const std::string& id) const { return dir_ / (id + kExtension); }

std::optional<CountDistribution> DistributionCache::load(const std::vector<Pattern>& patterns, std::size_t n,
                                                         const IidModel& model, Counting counting) const {
  const std::string header = distribution_header(patterns, n, model, counting);
  auto file = split_file(path_for(hex64(fnv1a(header))));
  if (!file) return std::nullopt;
  if (file->header != header) return std::nullopt;  // hash collision or edited parameters
  if (file->checksum != hex64(fnv1a(file->body))) return std::nullopt;
  try {
    std::istringstream in(header + file->body);
    CountDistribution d = read_distribution(in);
    if (d.total() != Rational(1)) return std::nullopt;
    return d;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string DistributionCache::store(const CountDistribution& d) const {
  std::filesystem::create_directories(dir_);
  const std::string header = distribution_header(d.patterns(), d.n(), d.model(), d.counting());
  std::ostringstream body;
  for (const auto& [k, p] : d.pmf()) body << format_exponents(k) << ':' << p.str() << '\n';
  const std::string id = hex64(fnv1a(header));
  auto target = path_for(id);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + tmp.string());
    out << header << "# checksum=" << hex64(fnv1a(body.str())) << '\n' << body.str();
  }
  std::filesystem::rename(tmp, target);
  return id;
}

std::vector<DistributionCache::Entry> DistributionCache::list() const {
  std::vector<Entry> out;
  if (!std::filesystem::is_directory(dir_)) return out;
  for (const auto& item : std::filesystem::directory_iterator(dir_)) {
    if (item.path().extension() != kExtension) continue;
    Entry e{item.path().stem().string(), item.path(), false, {}};
    auto file = split_file(item.path());
    if (!file) {
      e.summary = "unreadable";
    } else if (file->checksum != hex64(fnv1a(file->body))) {
      e.summary = "checksum mismatch";
    } else if (hex64(fnv1a(file->header)) != e.id) {
      e.summary = "header does not match file name";
    } else {
      try {
        std::istringstream in(file->header + file->body);
        auto d = read_distribution(in);
        e.valid = d.total() == Rational(1);
        e.summary = d.patterns_text() + " n=" + std::to_string(d.n()) + " counting=" + to_string(d.counting()) +
                    (e.valid ? "" : " (mass does not sum to 1)");
      } catch (const Error& err) {
        e.summary = std::string("parse error: ") + err.what();
      }
    }
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.id < b.id; });
  return out;
}

std::size_t DistributionCache::clear() const {
  std::size_t removed = 0;
  for (const auto& e : list())
    if (std::filesystem::remove(e.path)) ++removed;
  return removed;
}

}  // namespace slideblock
