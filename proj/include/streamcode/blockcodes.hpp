// Rate-optimal block codes that conform to the sliding-window channel
// C(N, B, W) with delay T, plus the parameters that govern them.
//
// Every construction places an MDS-like core on coordinates [0, T-1] and
// n-1, and fills the B-N coordinates T .. T+B-N-1 with check-sums of core
// symbols spaced B apart.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "streamcode/gf.hpp"
#include "streamcode/matrix.hpp"

namespace streamcode {

class InfeasibleParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A construction's self-check against the channel model failed.
class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct CodeParams {
  int N = 1;
  int B = 1;
  std::optional<int> W;
  int T = 1;  // effective delay min(T, W-1)
  int a = 0;
  int delta = 1;
  int delta_prime = 0;
  int n = 0;
  int k = 0;

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

/// min(T, W-1), or T when W is absent.
int effective_delay(int T, std::optional<int> W);

/// Throws InfeasibleParams unless 1 <= N <= B <= min(T, W-1) and W >= 2.
void check_feasible(int N, int B, std::optional<int> W, int T);

/// Validated parameters with the derived quantities filled in.
CodeParams make_params(int N, int B, std::optional<int> W, int T);

/// T = a*B + delta with a >= 0 and 1 <= delta <= B.
std::pair<int, int> decompose_delay(int T, int B);

/// (T_eff - N + 1) / (B + T_eff - N + 1) in lowest terms.
Rational rate_upper_bound(int N, int B, std::optional<int> W, int T);

enum class Construction { A, B, MDS, ABinary, ASwap };

std::string to_string(Construction c);
Construction construction_from_string(const std::string& s);

struct BlockCode {
  CodeParams params;
  Construction construction = Construction::A;
  gf::FieldPtr field;
  /// Order of the subfield that holds check-sum coefficients and that the
  /// linearized evaluation map is linear over.
  std::uint64_t subfield_order = 2;
  gf::Matrix generator;  // k x n
  std::vector<gf::FieldElement> eval_points;  // Construction B: eta_0 .. eta_{n-1}
  std::optional<gf::Matrix> gamma;            // Construction B, when delta < B - N

  int n() const { return params.n; }
  int k() const { return params.k; }
  Rational rate() const { return Rational::make(params.k, params.n); }
};

/// Systematic k x n_mds generator of a Reed-Solomon code whose entries lie in
/// the prime subfield of `field`; evaluation points 0, 1, ..., n_mds - 1.
gf::Matrix mds_generator(int n_mds, int k, const gf::Field& field);

/// rows x cols matrix with entries 1 / (x_i - y_j), x_i = element(i),
/// y_j = element(rows + j).
gf::Matrix cauchy_matrix(int rows, int cols, const gf::Field& field);

/// Moore matrix: entry (r, j) = points[j]^(q^r).
gf::Matrix moore_matrix(std::span<const gf::FieldElement> points, std::size_t rows, std::uint64_t q);

BlockCode construct_mds(int B, int T);
BlockCode construct_a(int N, int B, int T);
BlockCode construct_a_binary(int B, int T);
/// Requires N = B - 1. Prime field of order >= T + 1; alpha is the least
/// nonzero residue whose code certifies.
BlockCode construct_a_swap(int N, int B, int T);
BlockCode construct_b(int N, int B, int T);

/// Cheapest certified construction: MDS, A-binary, A-swap, A, then B.
BlockCode construct_auto(int N, int B, std::optional<int> W, int T);

/// Dispatch on an explicit construction with W taken into account.
BlockCode construct(Construction c, int N, int B, std::optional<int> W, int T);

/// c = m * G.
std::vector<gf::FieldElement> encode_block(const BlockCode& code, std::span<const gf::FieldElement> message);

/// Generator rewritten so its first k columns are the identity.
gf::Matrix systematic_generator(const gf::Matrix& g);

/// Data coordinates and coefficients of the check-sum stored at coordinate
/// T + j (0 <= j < B - N), as the construction defines it.
std::vector<std::pair<int, gf::FieldElement>> checksum_support(const BlockCode& code, int j);

}  // namespace streamcode
