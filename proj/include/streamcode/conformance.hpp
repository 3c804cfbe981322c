// Exhaustive recoverability checks for linear block codes.
//
// Coordinate i is recoverable from a set I when its generator column lies in
// the span of the columns in I. A code conforms to C(N, B, W) with delay T
// when every coordinate i is recoverable from [0, min(i + T, n - 1)] minus
// any erasure set of at most N coordinates, and minus any interval of at
// most B coordinates.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "streamcode/blockcodes.hpp"
#include "streamcode/matrix.hpp"

namespace streamcode::conformance {

enum class Clause { Isolated, Burst };

std::string to_string(Clause c);

struct ErasureSet {
  Clause clause = Clause::Isolated;
  std::vector<std::size_t> erased;

  friend bool operator==(const ErasureSet&, const ErasureSet&) = default;
};

struct RecoveryCertificate {
  std::size_t coordinate = 0;
  std::vector<std::size_t> observed;
  std::vector<gf::FieldElement> lambda;  // indexed like `observed`
};

struct Violation {
  std::size_t coordinate = 0;
  std::vector<std::size_t> erased;
  Clause clause = Clause::Isolated;
};

struct ConformanceReport {
  int N = 0;
  int B = 0;
  int T = 0;
  int n = 0;
  int k = 0;
  bool pass = false;
  std::string reason;  // set when the inputs themselves were rejected
  std::vector<Violation> violations;  // first `violation_cap`, in enumeration order
  std::size_t violation_count = 0;
  std::size_t isolated_checked = 0;
  std::size_t burst_checked = 0;
};

struct ConformOptions {
  std::size_t violation_cap = 16;
  unsigned threads = 0;  // 0: STREAMCODE_THREADS or hardware concurrency
};

/// min(i + T, n - 1).
std::size_t delta_i(std::size_t i, int T, std::size_t n);

/// Erasure sets that contain coordinate i: subsets of size <= N (by size,
/// then lexicographically), then intervals of length <= B (by length, then
/// start).
class ErasureSetEnumerator {
 public:
  ErasureSetEnumerator(std::size_t n, int N, int B, std::size_t i);
  std::optional<ErasureSet> next();

 private:
  bool advance_combination();

  std::size_t n_;
  std::size_t N_;
  std::size_t B_;
  std::size_t i_;
  // isolated phase: combination of `size_ - 1` others drawn from [0,n) \ {i}
  std::size_t size_ = 1;
  std::vector<std::size_t> comb_;
  bool comb_fresh_ = true;
  bool isolated_done_ = false;
  // burst phase
  std::size_t len_ = 1;
  std::size_t start_ = 0;
  bool burst_started_ = false;
};

std::vector<ErasureSet> enumerate_erasure_sets(std::size_t n, int N, int B, std::size_t i);

/// Certificate with lambda such that g_i = sum lambda_j g_j, or nullopt.
std::optional<RecoveryCertificate> recoverable(const gf::Matrix& generator, std::size_t i,
                                               std::vector<std::size_t> observed);
std::optional<RecoveryCertificate> recoverable(const BlockCode& code, std::size_t i, std::vector<std::size_t> observed);

ConformanceReport conforms(const gf::Matrix& generator, int N, int B, int T, const ConformOptions& opts = {});
ConformanceReport conforms(const BlockCode& code, int N, int B, int T, const ConformOptions& opts = {});

/// Worker count from STREAMCODE_THREADS, else hardware concurrency.
unsigned default_threads();

}  // namespace streamcode::conformance
