#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace slideblock {

// Additive lagged-Fibonacci generator of the classic BSD/glibc random()
// (TYPE_3: degree 31, separation 3). Outputs 31-bit words.
class BsdRandom {
 public:
  static constexpr std::uint64_t kOutputRange = std::uint64_t{1} << 31;

  explicit BsdRandom(std::uint32_t seed = 1);

  std::uint32_t next() {
    std::uint32_t x = state_[front_] += state_[rear_];
    last_ = x;
    front_ = front_ + 1 == kDegree ? 0 : front_ + 1;
    rear_ = rear_ + 1 == kDegree ? 0 : rear_ + 1;
    return x >> 1;
  }

  // Full 32-bit state word behind the most recent output.
  std::uint32_t last_state_word() const { return last_; }

 private:
  static constexpr std::size_t kDegree = 31;
  static constexpr std::size_t kSeparation = 3;
  std::array<std::uint32_t, kDegree> state_{};
  std::size_t front_ = kSeparation;
  std::size_t rear_ = 0;
  std::uint32_t last_ = 0;
};

// MT19937 (32-bit Mersenne Twister).
class Mt19937 {
 public:
  static constexpr std::uint64_t kOutputRange = std::uint64_t{1} << 32;

  explicit Mt19937(std::uint32_t seed = 5489);

  std::uint32_t next() {
    if (index_ >= kN) twist();
    last_raw_ = state_[index_++];
    return temper(last_raw_);
  }

  std::uint32_t last_raw_word() const { return last_raw_; }

  static std::uint32_t temper(std::uint32_t y);
  static std::uint32_t untemper(std::uint32_t y);

 private:
  static constexpr std::size_t kN = 624;
  static constexpr std::size_t kM = 397;
  void twist();
  std::array<std::uint32_t, kN> state_{};
  std::size_t index_ = kN;
  std::uint32_t last_raw_ = 0;
};

// Counter run through the SplitMix64 finalizer; the control generator.
class BaselineCounter {
 public:

  explicit BaselineCounter(std::uint32_t seed = 42) : counter_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (counter_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t counter_;
};

enum class Family { kBsdRandom, kMt19937, kBaselineCounter };

struct ExtractionPolicy {
  enum class Kind { kLsb, kBit, kThresholdHalf };
  Kind kind = Kind::kLsb;
  unsigned bit = 0;  // used by kBit

  std::string str() const;
  friend bool operator==(const ExtractionPolicy&, const ExtractionPolicy&) = default;
};

// "bsd:seed=1:policy=lsb", "mt:seed=5489:policy=bit(3)", "baseline:seed=42".
struct GeneratorSpec {
  Family family = Family::kMt19937;
  std::uint32_t seed = 5489;
  ExtractionPolicy policy;

  static GeneratorSpec parse(std::string_view text);
  static std::uint32_t default_seed(Family family);
  std::string str() const;
  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

const char* family_name(Family family);

// Applies an extraction policy to one generator word.
inline unsigned extract_bit(std::uint64_t word, const ExtractionPolicy& policy, std::uint64_t half_range) {
  switch (policy.kind) {
    case ExtractionPolicy::Kind::kLsb: return static_cast<unsigned>(word & 1u);
    case ExtractionPolicy::Kind::kBit: return static_cast<unsigned>((word >> policy.bit) & 1u);
    case ExtractionPolicy::Kind::kThresholdHalf: return word >= half_range ? 1u : 0u;
  }
  return 0;
}

// A seeded generator plus extraction policy; one generator word per bit.
// Single-threaded mutable state.
class BitSource {
 public:
  explicit BitSource(const GeneratorSpec& spec);

  unsigned next_bit() {
    return std::visit([this](auto& g) { return extract_bit(g.next(), spec_.policy, half_range()); }, generator_);
  }
  std::uint64_t next_word() {
    return std::visit([](auto& g) { return static_cast<std::uint64_t>(g.next()); }, generator_);
  }

  const GeneratorSpec& spec() const { return spec_; }
  // Half of the generator's output range (threshold for kThresholdHalf).
  std::uint64_t half_range() const;

  // Calls fn(generator&) with the concrete generator, for tight loops.
  template <typename Fn>
  decltype(auto) visit(Fn&& fn) {
    return std::visit(std::forward<Fn>(fn), generator_);
  }

 private:
  GeneratorSpec spec_;
  std::variant<BsdRandom, Mt19937, BaselineCounter> generator_;
};

// Seed for worker/stream index i; injective in index for a fixed base.
std::uint32_t derive_worker_seed(std::uint32_t base_seed, std::uint32_t worker_index);

}  // namespace slideblock
