#include "slideblock/rngs.hpp"

#include <string>
#include <vector>

#include "slideblock/errors.hpp"

namespace slideblock {

BsdRandom::BsdRandom(std::uint32_t seed) {
  // Park-Miller minimal standard, via Schrage's method, with 32-bit signed
  // words exactly as the C library computes them.
  auto word = static_cast<std::int32_t>(seed == 0 ? 1 : seed);
  state_[0] = static_cast<std::uint32_t>(word);
  for (std::size_t i = 1; i < kDegree; ++i) {
    long hi = word / 127773;
    long lo = word % 127773;
    word = static_cast<std::int32_t>(16807 * lo - 2836 * hi);
    if (word < 0) word += 2147483647;
    state_[i] = static_cast<std::uint32_t>(word);
  }
  for (std::size_t i = 0; i < 10 * kDegree; ++i) next();
}

Mt19937::Mt19937(std::uint32_t seed) {
  state_[0] = seed;
  for (std::size_t i = 1; i < kN; ++i)
    state_[i] = 1812433253u * (state_[i - 1] ^ (state_[i - 1] >> 30)) + static_cast<std::uint32_t>(i);
}

void Mt19937::twist() {
  constexpr std::uint32_t kUpper = 0x80000000u;
  constexpr std::uint32_t kLower = 0x7fffffffu;
  constexpr std::uint32_t kMatrix = 0x9908b0dfu;
  for (std::size_t i = 0; i < kN; ++i) {
    std::uint32_t y = (state_[i] & kUpper) | (state_[(i + 1) % kN] & kLower);
    state_[i] = state_[(i + kM) % kN] ^ (y >> 1) ^ ((y & 1u) ? kMatrix : 0u);
  }
  index_ = 0;
}

std::uint32_t Mt19937::temper(std::uint32_t y) {
  y ^= y >> 11;
  y ^= (y << 7) & 0x9d2c5680u;
  y ^= (y << 15) & 0xefc60000u;
  y ^= y >> 18;
  return y;
}

namespace {

std::uint32_t undo_right(std::uint32_t y, unsigned shift) {
  std::uint32_t x = y;
  for (unsigned i = 0; i < 32 / shift + 1; ++i) x = y ^ (x >> shift);
  return x;
}

std::uint32_t undo_left(std::uint32_t y, unsigned shift, std::uint32_t mask) {
  std::uint32_t x = y;
  for (unsigned i = 0; i < 32 / shift + 1; ++i) x = y ^ ((x << shift) & mask);
  return x;
}

}  // namespace

std::uint32_t Mt19937::untemper(std::uint32_t y) {
  y = undo_right(y, 18);
  y = undo_left(y, 15, 0xefc60000u);
  y = undo_left(y, 7, 0x9d2c5680u);
  y = undo_right(y, 11);
  return y;
}

std::string ExtractionPolicy::str() const {
  switch (kind) {
    case Kind::kLsb: return "lsb";
    case Kind::kBit: return "bit(" + std::to_string(bit) + ")";
    case Kind::kThresholdHalf: return "threshold-half";
  }
  return "lsb";
}

const char* family_name(Family family) {
  switch (family) {
    case Family::kBsdRandom: return "bsd";
    case Family::kMt19937: return "mt";
    case Family::kBaselineCounter: return "baseline";
  }
  return "?";
}

std::uint32_t GeneratorSpec::default_seed(Family family) {
  switch (family) {
    case Family::kBsdRandom: return 1;
    case Family::kMt19937: return 5489;
    case Family::kBaselineCounter: return 42;
  }
  return 0;
}

std::string GeneratorSpec::str() const {
  return std::string(family_name(family)) + ":seed=" + std::to_string(seed) + ":policy=" + policy.str();
}

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? text.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint32_t parse_u32(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 10)
    throw ParseError("bad " + what + " '" + s + "'");
  unsigned long long v = std::stoull(s);
  if (v > 0xffffffffULL) throw ParseError(what + " out of 32-bit range: " + s);
  return static_cast<std::uint32_t>(v);
}

ExtractionPolicy parse_policy(const std::string& s, unsigned word_bits) {
  ExtractionPolicy p;
  if (s == "lsb") return p;
  if (s == "threshold-half") {
    p.kind = ExtractionPolicy::Kind::kThresholdHalf;
    return p;
  }
  std::string digits;
  if (s.rfind("bit(", 0) == 0 && s.size() > 5 && s.back() == ')')
    digits = s.substr(4, s.size() - 5);
  else if (s.rfind("bit", 0) == 0)
    digits = s.substr(3);
  else
    throw ParseError("unknown extraction policy '" + s + "'");
  p.kind = ExtractionPolicy::Kind::kBit;
  p.bit = parse_u32(digits, "bit index");
  if (p.bit >= word_bits)
    throw ParseError("bit index " + digits + " exceeds the generator's " + std::to_string(word_bits) + "-bit words");
  return p;
}

unsigned word_bits(Family family) {
  switch (family) {
    case Family::kBsdRandom: return 31;
    case Family::kMt19937: return 32;
    case Family::kBaselineCounter: return 64;
  }
  return 32;
}

}  // namespace

GeneratorSpec GeneratorSpec::parse(std::string_view text) {
  auto parts = split(text, ':');
  GeneratorSpec spec;
  const std::string& fam = parts[0];
  if (fam == "bsd" || fam == "bsd-random")
    spec.family = Family::kBsdRandom;
  else if (fam == "mt" || fam == "mt19937")
    spec.family = Family::kMt19937;
  else if (fam == "baseline" || fam == "baseline-counter")
    spec.family = Family::kBaselineCounter;
  else
    throw ParseError("unknown generator family '" + fam + "'");
  spec.seed = default_seed(spec.family);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value in generator spec, got '" + parts[i] + "'");
    std::string key = parts[i].substr(0, eq);
    std::string value = parts[i].substr(eq + 1);
    if (key == "seed")
      spec.seed = parse_u32(value, "seed");
    else if (key == "policy")
      spec.policy = parse_policy(value, word_bits(spec.family));
    else
      throw ParseError("unknown generator option '" + key + "'");
  }
  return spec;
}

BitSource::BitSource(const GeneratorSpec& spec) : spec_(spec), generator_(BsdRandom(1)) {
  switch (spec.family) {
    case Family::kBsdRandom: generator_ = BsdRandom(spec.seed); break;
    case Family::kMt19937: generator_ = Mt19937(spec.seed); break;
    case Family::kBaselineCounter: generator_ = BaselineCounter(spec.seed); break;
  }
}

std::uint64_t BitSource::half_range() const {
  switch (spec_.family) {
    case Family::kBsdRandom: return BsdRandom::kOutputRange / 2;
    case Family::kMt19937: return Mt19937::kOutputRange / 2;
    case Family::kBaselineCounter: return std::uint64_t{1} << 63;
  }
  return 0;
}

namespace {

// murmur3 finalizer; a bijection on 32-bit words.
std::uint32_t fmix32(std::uint32_t h) {
  h ^= h >> 16;
  h *= 0x85ebca6bu;
  h ^= h >> 13;
  h *= 0xc2b2ae35u;
  h ^= h >> 16;
  return h;
}

}  // namespace

std::uint32_t derive_worker_seed(std::uint32_t base_seed, std::uint32_t worker_index) {
  return fmix32(fmix32(base_seed ^ 0x5bd1e995u) + worker_index * 0x9e3779b9u);
}

}  // namespace slideblock
