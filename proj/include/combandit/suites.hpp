#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace combandit {

struct CheckResult {
  std::string suite;
  std::string check;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20190521;
  // Replaces sigma(T) in the clip-event suite (negative testing).
  std::optional<double> clip_sigma;
};

// cardinality, bijection, variance, kl, play_counts, ranking_counts, clip.
const std::vector<std::string>& suite_names();

// "all" runs every suite. Throws std::invalid_argument for unknown names.
std::vector<CheckResult> run_suite(std::string_view name,
                                   const VerifyOptions& options);

}  // namespace combandit
