#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slideblock/patterns.hpp"

namespace slideblock::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string subcommand;
  std::string patterns;  // --chain or --pattern text
  std::size_t n = 0;
  std::string model = "fair";
  std::string alphabet = "01";
  std::string generator;
  std::optional<std::uint32_t> seed;  // overrides the generator spec's seed
  std::uint64_t trials = 0;
  std::string format;  // empty: the subcommand's default
  std::string counting = "exclusive";
  std::optional<std::string> out_path;
  std::optional<std::string> cache_dir;
  bool use_cache = true;
  unsigned workers = 1;
  unsigned streams = 1;
  bool timestamp = false;

  // moments
  std::size_t tmax = 2;
  // power
  std::string theta_star = "1/4";
  std::size_t wlen = 2;
  double sigma = 5.0;
  std::string grid;
  bool exact_power = true;
  // kstest / chisq
  double alpha = 0.001;
  double min_expected = 5.0;
  // oracle
  std::size_t max_members = 3;
  std::size_t max_length = 5;
  // cache
  std::string cache_action;
};

// "fair" or "p=<rational>[,<rational>...]". A single value on a binary
// alphabet is P('1'); otherwise one probability per alphabet symbol.
IidModel parse_model(const std::string& text, const std::string& alphabet = "01");

int cmd_dist(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_moments(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_power(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_kstest(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_chisq(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_cache(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses args (without the program name), dispatches, and maps errors to
// exit codes: 0 pass, 1 reject, 2 usage or validation error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slideblock::cli
