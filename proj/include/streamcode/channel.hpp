// Sliding-window erasure channel C(N, B, W): every width-W window holds
// either erasures spanning at most B slots, or at most N erasures.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace streamcode::channel {

struct ErasurePattern {
  std::size_t horizon = 0;
  std::vector<std::size_t> erased;  // sorted, unique, < horizon

  /// Sorts and checks the indices.
  static ErasurePattern make(std::size_t horizon, std::vector<std::size_t> erased);
  bool contains(std::size_t t) const;

  friend bool operator==(const ErasurePattern&, const ErasurePattern&) = default;
};

/// Checks every full window [t, t+W-1]; when horizon < W the single
/// truncated window [0, horizon-1] is checked instead.
bool validate_pattern(const ErasurePattern& p, int N, int B, int W);

/// Events (a burst of length <= B, or up to N erasures inside a width-W
/// stretch) separated by at least W-1 clean slots. burst_bias is the
/// probability that an event is a burst.
ErasurePattern random_pattern(int N, int B, int W, std::size_t horizon, std::uint64_t seed, double burst_bias = 0.5);

inline constexpr std::size_t kMaxEnumerationHorizon = 32;

/// Admissible patterns over [0, horizon-1] in lexicographic order of their
/// sorted index lists. Depth-first with pruning, so the cost tracks the
/// number of admissible patterns rather than 2^horizon.
class PatternEnumerator {
 public:
  PatternEnumerator(int N, int B, int W, std::size_t horizon);
  std::optional<ErasurePattern> next();

 private:
  bool admissible_with_last() const;

  int N_;
  int B_;
  int W_;
  std::size_t horizon_;
  std::vector<std::size_t> current_;
  bool started_ = false;
  bool done_ = false;
};

std::vector<ErasurePattern> enumerate_patterns(int N, int B, int W, std::size_t horizon);

/// `count` bursts of length B starting at 0, B+guard, 2(B+guard), ...
ErasurePattern guarded_burst_pattern(int B, int guard, int count, std::size_t horizon);

/// JSON {"horizon": H, "erased": [...]}.
std::string pattern_to_json(const ErasurePattern& p);
/// Accepts the JSON form, or newline-separated indices after a
/// "# horizon=H" header line.
ErasurePattern parse_pattern(const std::string& text);
ErasurePattern load_pattern_file(const std::string& path);

}  // namespace streamcode::channel
