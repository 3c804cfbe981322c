// Streaming codes by diagonal interleaving.
//
// Packet x[t] has n symbols. The block codeword whose first coordinate is
// sent at time s occupies coordinate d of packet s + d, for d in [0, n-1].
// Coordinates d < k carry message symbols (x_d[t] = s_d[t]); the rest are
// parities computed from the systematic generator. Everything before t = 0
// is zero.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <tuple>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "streamcode/blockcodes.hpp"
#include "streamcode/channel.hpp"

namespace streamcode::streaming {

struct Packet {
  std::int64_t time = 0;
  std::vector<gf::FieldElement> symbols;
};

class OutOfOrder : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Pattern does not fit the declared channel model.
class InvalidPattern : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Encoder {
 public:
  explicit Encoder(const BlockCode& code);

  /// Packet for time t; t must be the next time in sequence, starting at 0.
  Packet step(std::int64_t t, std::span<const gf::FieldElement> message);

  const gf::Matrix& systematic() const { return sys_; }

 private:
  const gf::Field* field_;
  std::size_t n_;
  std::size_t k_;
  gf::Matrix sys_;
  std::vector<std::vector<gf::FieldElement>> history_;  // ring of the last n-1 messages
  std::int64_t next_ = 0;
};

/// Which coordinates of a codeword are determined by a set of available
/// coordinates, memoized by availability bitmask (n <= 64).
class SpanOracle {
 public:
  explicit SpanOracle(gf::Matrix generator);

  std::size_t n() const { return g_.cols(); }
  const gf::Matrix& generator() const { return g_; }

  /// Bitmask of coordinates whose column lies in the span of `available`.
  std::uint64_t recoverable_mask(std::uint64_t available);
  /// Coefficients over all n coordinates (zero outside `available`)
  /// expressing coordinate i; i must be recoverable.
  const std::vector<gf::FieldElement>& coefficients(std::size_t i, std::uint64_t available);

 private:
  gf::Matrix g_;
  std::unordered_map<std::uint64_t, std::uint64_t> masks_;
  std::map<std::pair<std::uint64_t, std::size_t>, std::vector<gf::FieldElement>> coeffs_;
};

enum class SymbolStatus { Received, Recovered, Failed };

std::string to_string(SymbolStatus s);

struct SymbolRecord {
  std::int64_t time = 0;
  std::size_t coord = 0;
  SymbolStatus status = SymbolStatus::Failed;
  std::optional<std::int64_t> recovered_at;

  std::optional<std::int64_t> delay() const {
    return recovered_at ? std::optional<std::int64_t>(*recovered_at - time) : std::nullopt;
  }
};

struct Recovery {
  std::int64_t time = 0;  // packet the symbol belongs to
  std::size_t coord = 0;
  gf::FieldElement value;
  std::int64_t recovered_at = 0;
};

class Decoder {
 public:
  /// delay: diagonals are finalized once stream time reaches their last
  /// coordinate's time plus delay.
  Decoder(const BlockCode& code, int delay, std::shared_ptr<SpanOracle> oracle = nullptr);

  /// Feed y[t] (nullopt when erased); returns symbols recovered at time t,
  /// ordered by diagonal then coordinate.
  std::vector<Recovery> step(std::int64_t t, const std::optional<Packet>& y);
  /// Finalize every open diagonal; unrecovered symbols become Failed.
  void finish();

  /// One record per erased symbol, in erasure order.
  const std::vector<SymbolRecord>& erased_symbols() const { return records_; }
  std::size_t open_diagonals() const { return diagonals_.size(); }

 private:
  struct Diagonal {
    std::int64_t start = 0;
    std::uint64_t available = 0;
    std::uint64_t pending = 0;
    std::vector<gf::FieldElement> values;
    std::vector<std::size_t> record_index;  // per coordinate, into records_
  };

  void open_diagonal(std::int64_t start);
  void finalize(Diagonal& d);

  const gf::Field* field_;
  std::size_t n_;
  int delay_;
  std::shared_ptr<SpanOracle> oracle_;
  std::vector<Diagonal> diagonals_;  // ascending start
  std::vector<SymbolRecord> records_;
  std::int64_t next_ = 0;
};

struct DelayReport {
  CodeParams params;
  std::size_t horizon = 0;
  std::size_t n = 0;
  std::size_t packets = 0;  // packets processed, including the flush tail
  std::vector<SymbolRecord> erased_symbols;
  std::int64_t max_delay = 0;
  std::size_t failures = 0;
  std::size_t mismatches = 0;  // recovered values that differ from what was sent
  std::size_t late = 0;        // recovered after time + T
};

struct SimulationOptions {
  /// Channel model the pattern must satisfy; skipped when absent.
  std::optional<std::tuple<int, int, int>> declared_model;  // (N, B, W)
};

/// Encode random messages (seeded), erase the pattern's packets, decode,
/// and log per-symbol recovery. Runs n-1+T clean packets past the horizon
/// so every erased symbol reaches its deadline.
DelayReport run_simulation(const BlockCode& code, const channel::ErasurePattern& pattern, std::uint64_t seed,
                           const SimulationOptions& opts = {});

/// Recovery offsets of a single diagonal given its erased coordinates, as
/// the decoder schedules them. Memoized per erasure mask.
class DiagonalOutcomeTable {
 public:
  struct Outcome {
    int max_delay = 0;  // over recovered coordinates, -1 if none erased
    int failures = 0;
    bool computed = false;
  };

  DiagonalOutcomeTable(const BlockCode& code, std::shared_ptr<SpanOracle> oracle = nullptr);
  const Outcome& outcome(std::uint64_t erased_mask);
  /// Per-coordinate recovery offset (-1 when never recovered).
  std::vector<int> recovery_offsets(std::uint64_t erased_mask);
  std::size_t n() const { return n_; }

 private:
  Outcome compute(std::uint64_t erased_mask);

  std::size_t n_;
  std::shared_ptr<SpanOracle> oracle_;
  std::vector<Outcome> dense_;
  std::unordered_map<std::uint64_t, Outcome> sparse_;
};

struct PatternSummary {
  int max_delay = 0;
  std::size_t failures = 0;
};

/// Same outcome as run_simulation's delays and failures, computed from
/// erasure positions alone.
PatternSummary summarize_pattern(DiagonalOutcomeTable& table, const channel::ErasurePattern& pattern);

std::string report_csv(const DelayReport& report);
std::string report_summary_json(const DelayReport& report);

// ---------------------------------------------------------------------------
// Burst decoding that follows the check-sum structure of Construction B.

struct DecodeStep {
  enum class Kind { Peel, Gamma, Moore, Parity };
  Kind kind = Kind::Peel;
  std::int64_t time = 0;
  std::vector<int> equations;  // check-sum coordinates whose reduced sums were used
  std::vector<int> points;     // Moore step: coordinates whose evaluations were used
  std::vector<int> recovered;
};

std::string to_string(DecodeStep::Kind k);

struct StructuredDecodeResult {
  std::vector<gf::FieldElement> codeword;
  std::vector<std::optional<std::int64_t>> recovered_at;  // erased coordinates only
  int epsilon = 0;
  int zeta = 0;
  std::string branch;
  std::vector<DecodeStep> steps;
};

/// received[i] is nullopt for erased coordinates, which must form one
/// interval of length <= B.
StructuredDecodeResult structured_burst_decode(const BlockCode& code,
                                               std::span<const std::optional<gf::FieldElement>> received);

/// Which decoding case a burst [u, v] falls into. eps counts erased
/// check-sum coordinates in [T, T+B-N-1]. Labels: "short" (length < B),
/// "delta>=B-N", "eps=0", "eps=B-N", "overflow" (B-eps > N+delta), otherwise
/// "B-eps>=delta,eps>=delta" and its three sign variants.
std::string classify_burst(const CodeParams& p, int u, int v);

}  // namespace streamcode::streaming
