#include "streamcode/blockcodes.hpp"

#include <algorithm>
#include <numeric>

#include "streamcode/conformance.hpp"

namespace streamcode {

using gf::Field;
using gf::FieldElement;
using gf::Matrix;

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

int effective_delay(int T, std::optional<int> W) { return W ? std::min(T, *W - 1) : T; }

void check_feasible(int N, int B, std::optional<int> W, int T) {
  if (N < 1) throw InfeasibleParams("N must be at least 1");
  if (B < 1) throw InfeasibleParams("B must be at least 1");
  if (N > B) throw InfeasibleParams("N > B: isolated erasures cannot exceed the burst length");
  if (W && *W < 2) throw InfeasibleParams("W must be at least 2");
  const int te = effective_delay(T, W);
  if (te < B)
    throw InfeasibleParams("effective delay min(T, W-1) = " + std::to_string(te) + " is below B = " + std::to_string(B));
}

std::pair<int, int> decompose_delay(int T, int B) {
  if (B < 1 || B > T) throw InfeasibleParams("decompose_delay requires 1 <= B <= T");
  const int a = (T - 1) / B;
  return {a, T - a * B};
}

CodeParams make_params(int N, int B, std::optional<int> W, int T) {
  check_feasible(N, B, W, T);
  CodeParams p;
  p.N = N;
  p.B = B;
  p.W = W;
  p.T = effective_delay(T, W);
  std::tie(p.a, p.delta) = decompose_delay(p.T, B);
  p.delta_prime = std::min(p.delta, B - N);
  p.n = B + p.T - N + 1;
  p.k = p.T - N + 1;
  return p;
}

Rational rate_upper_bound(int N, int B, std::optional<int> W, int T) {
  check_feasible(N, B, W, T);
  const int te = effective_delay(T, W);
  return Rational::make(te - N + 1, B + te - N + 1);
}

std::string to_string(Construction c) {
  switch (c) {
    case Construction::A: return "A";
    case Construction::B: return "B";
    case Construction::MDS: return "MDS";
    case Construction::ABinary: return "A-binary";
    case Construction::ASwap: return "A-swap";
  }
  return "?";
}

Construction construction_from_string(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (l == "a") return Construction::A;
  if (l == "b") return Construction::B;
  if (l == "mds") return Construction::MDS;
  if (l == "a-binary") return Construction::ABinary;
  if (l == "a-swap") return Construction::ASwap;
  throw std::invalid_argument("unknown construction '" + s + "'");
}

Matrix mds_generator(int n_mds, int k, const Field& field) {
  if (k < 1 || k > n_mds) throw std::invalid_argument("mds_generator requires 1 <= k <= n_mds");
  if (static_cast<std::uint64_t>(field.characteristic()) < static_cast<std::uint64_t>(n_mds))
    throw InfeasibleParams("mds_generator: field too small (prime subfield of order " +
                           std::to_string(field.characteristic()) + " < " + std::to_string(n_mds) + ")");
  Matrix v(field, static_cast<std::size_t>(k), static_cast<std::size_t>(n_mds));
  for (int j = 0; j < n_mds; ++j) {
    const FieldElement x = field.from_int(j);
    FieldElement power = field.one();
    for (int r = 0; r < k; ++r) {
      v(r, j) = power;
      power *= x;
    }
  }
  return systematic_generator(v);
}

Matrix cauchy_matrix(int rows, int cols, const Field& field) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("cauchy_matrix: negative dimension");
  const auto needed = static_cast<std::uint64_t>(rows + cols);
  if (field.order() != 0 && field.order() < needed)
    throw InfeasibleParams("cauchy_matrix: field of order " + std::to_string(field.order()) + " has fewer than " +
                           std::to_string(needed) + " elements");
  Matrix m(field, static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j)
      m(i, j) = (field.element(static_cast<std::uint64_t>(i)) - field.element(static_cast<std::uint64_t>(rows + j))).inverse();
  }
  return m;
}

Matrix moore_matrix(std::span<const FieldElement> points, std::size_t rows, std::uint64_t q) {
  if (points.empty()) throw std::invalid_argument("moore_matrix: no points");
  Matrix m(points.front().field(), rows, points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    FieldElement cur = points[j];
    for (std::size_t r = 0; r < rows; ++r) {
      m(r, j) = cur;
      if (r + 1 < rows) cur = gf::frobenius_power(cur, 1, q);
    }
  }
  return m;
}

Matrix systematic_generator(const Matrix& g) {
  const std::size_t k = g.rows();
  std::vector<std::size_t> head(k);
  std::iota(head.begin(), head.end(), 0);
  const Matrix lead = g.select_columns(head);
  return lead.inverse() * g;
}

namespace {

// Assemble Construction A's generator: MDS columns on [0, T-1] and n-1,
// check-sum alpha*g_j + g_{j+B} + ... + g_{j+aB} at T + j.
Matrix layout_construction_a(const CodeParams& p, const Matrix& mds, const FieldElement& alpha) {
  const Field& f = mds.field();
  Matrix g(f, static_cast<std::size_t>(p.k), static_cast<std::size_t>(p.n));
  for (int r = 0; r < p.k; ++r) {
    for (int c = 0; c < p.T; ++c) g(r, c) = mds(r, c);
    g(r, p.n - 1) = mds(r, p.T);
  }
  for (int j = 0; j < p.B - p.N; ++j) {
    for (int r = 0; r < p.k; ++r) {
      FieldElement acc = alpha * g(r, j);
      for (int l = 1; l <= p.a; ++l) acc += g(r, j + l * p.B);
      g(r, p.T + j) = acc;
    }
  }
  return g;
}

void certify(const BlockCode& code) {
  const auto report = conformance::conforms(code.generator, code.params.N, code.params.B, code.params.T);
  if (!report.pass) {
    std::string what = to_string(code.construction) + " code for (N=" + std::to_string(code.params.N) +
                       ", B=" + std::to_string(code.params.B) + ", T=" + std::to_string(code.params.T) +
                       ") failed conformance";
    if (!report.violations.empty()) what += " at coordinate " + std::to_string(report.violations.front().coordinate);
    throw CertificationError(what);
  }
}

}  // namespace

BlockCode construct_mds(int B, int T) {
  BlockCode code;
  code.params = make_params(B, B, std::nullopt, T);
  code.construction = Construction::MDS;
  const auto q = gf::next_prime_at_least(static_cast<std::uint64_t>(code.params.T) + 1);
  code.field = gf::make_field(static_cast<std::uint32_t>(q), {1});
  code.subfield_order = q;
  code.generator = mds_generator(code.params.T + 1, code.params.k, *code.field);
  return code;
}

BlockCode construct_a(int N, int B, int T) {
  BlockCode code;
  code.params = make_params(N, B, std::nullopt, T);
  const auto& p = code.params;
  if (p.delta < B - N)
    throw InfeasibleParams("construction A requires delta >= B - N (delta = " + std::to_string(p.delta) +
                           ", B - N = " + std::to_string(B - N) + ")");
  code.construction = Construction::A;
  const auto q = gf::next_prime_at_least(static_cast<std::uint64_t>(p.T) + 1);
  code.field = gf::make_field(static_cast<std::uint32_t>(q), {2});
  code.subfield_order = q;
  const Matrix mds = mds_generator(p.T + 1, p.k, *code.field);
  code.generator = layout_construction_a(p, mds, code.field->generator());
  return code;
}

BlockCode construct_a_binary(int B, int T) {
  BlockCode code;
  code.params = make_params(1, B, std::nullopt, T);
  const auto& p = code.params;
  if (p.delta < B - 1)
    throw InfeasibleParams("binary construction requires delta >= B - 1 (delta = " + std::to_string(p.delta) + ")");
  code.construction = Construction::ABinary;
  code.field = gf::make_field(2, {1});
  code.subfield_order = 2;
  // [T+1, T] single-parity code
  Matrix mds = Matrix::identity(*code.field, static_cast<std::size_t>(p.k));
  Matrix parity(*code.field, static_cast<std::size_t>(p.k), static_cast<std::size_t>(p.T) + 1);
  for (int r = 0; r < p.k; ++r) {
    for (int c = 0; c < p.k; ++c) parity(r, c) = mds(r, c);
    parity(r, p.T) = code.field->one();
  }
  code.generator = layout_construction_a(p, parity, code.field->one());
  certify(code);
  return code;
}

BlockCode construct_a_swap(int N, int B, int T) {
  if (N != B - 1) throw InfeasibleParams("swap construction requires N = B - 1");
  BlockCode code;
  code.params = make_params(N, B, std::nullopt, T);
  const auto& p = code.params;
  code.construction = Construction::ASwap;
  const auto q = gf::next_prime_at_least(static_cast<std::uint64_t>(p.T) + 1);
  code.field = gf::make_field(static_cast<std::uint32_t>(q), {1});
  code.subfield_order = q;
  const Matrix mds = mds_generator(p.T + 1, p.k, *code.field);
  // Not every nonzero alpha survives the swap with this MDS core (e.g. alpha = 1
  // at N=2, B=3, T=5), so take the first one that certifies.
  for (std::uint64_t alpha = 1; alpha < q; ++alpha) {
    code.generator = layout_construction_a(p, mds, code.field->from_int(static_cast<std::int64_t>(alpha)));
    code.generator.swap_columns(0, static_cast<std::size_t>(p.T));
    try {
      certify(code);
      return code;
    } catch (const CertificationError&) {
    }
  }
  throw CertificationError("A-swap code for (N=" + std::to_string(N) + ", B=" + std::to_string(B) +
                           ", T=" + std::to_string(T) + "): no alpha in F_" + std::to_string(q) + " conforms");
}

BlockCode construct_b(int N, int B, int T) {
  BlockCode code;
  code.params = make_params(N, B, std::nullopt, T);
  const auto& p = code.params;
  code.construction = Construction::B;
  const auto q = gf::next_prime_at_least(static_cast<std::uint64_t>(std::max(2, B - N)));
  code.subfield_order = q;
  code.field = gf::make_field(static_cast<std::uint32_t>(q), {p.T + 1});
  const Field& big = *code.field;
  const gf::FieldPtr small = gf::make_field(static_cast<std::uint32_t>(q), {1});

  std::vector<FieldElement> theta;
  for (int i = 0; i <= p.T; ++i) theta.push_back(big.basis_element(static_cast<std::size_t>(i)));

  if (p.delta_prime < B - N) code.gamma = cauchy_matrix(B - N - p.delta_prime, p.delta, *small);

  auto& eta = code.eval_points;
  eta.assign(static_cast<std::size_t>(p.n), big.zero());
  for (int j = 0; j < p.T; ++j) eta[j] = theta[j];
  eta[p.n - 1] = theta[p.T];
  for (int j = 0; j < B - N; ++j) {
    FieldElement point = big.zero();
    if (j < p.delta_prime) {
      for (int l = 0; l <= p.a; ++l) point += theta[j + l * B];
    } else {
      for (int l = 0; l < p.a; ++l) point += theta[j + l * B];
      for (int l = 0; l < p.delta; ++l) point += big.embed((*code.gamma)(j - p.delta_prime, l)) * theta[p.a * B + l];
    }
    eta[p.T + j] = point;
  }
  code.generator = moore_matrix(eta, static_cast<std::size_t>(p.k), q);
  return code;
}

BlockCode construct(Construction c, int N, int B, std::optional<int> W, int T) {
  check_feasible(N, B, W, T);
  const int te = effective_delay(T, W);
  BlockCode code;
  switch (c) {
    case Construction::A: code = construct_a(N, B, te); break;
    case Construction::B: code = construct_b(N, B, te); break;
    case Construction::MDS:
      if (N != B) throw InfeasibleParams("MDS construction requires N = B");
      code = construct_mds(B, te);
      break;
    case Construction::ABinary:
      if (N != 1) throw InfeasibleParams("binary construction requires N = 1");
      code = construct_a_binary(B, te);
      break;
    case Construction::ASwap: code = construct_a_swap(N, B, te); break;
  }
  code.params.W = W;
  return code;
}

BlockCode construct_auto(int N, int B, std::optional<int> W, int T) {
  const CodeParams p = make_params(N, B, W, T);
  if (B == N) return construct(Construction::MDS, N, B, W, T);
  if (N == 1 && p.delta >= B - 1) {
    try {
      return construct(Construction::ABinary, N, B, W, T);
    } catch (const CertificationError&) {
    }
  }
  if (N == B - 1) {
    try {
      return construct(Construction::ASwap, N, B, W, T);
    } catch (const CertificationError&) {
    }
  }
  if (p.delta >= B - N) return construct(Construction::A, N, B, W, T);
  return construct(Construction::B, N, B, W, T);
}

std::vector<FieldElement> encode_block(const BlockCode& code, std::span<const FieldElement> message) {
  if (message.size() != static_cast<std::size_t>(code.k()))
    throw std::invalid_argument("encode_block: message length " + std::to_string(message.size()) + " != k = " +
                                std::to_string(code.k()));
  for (const auto& m : message) {
    if (!m.valid() || !m.field().same_as(*code.field)) throw gf::FieldMismatch("encode_block: message field mismatch");
  }
  return code.generator.left_multiply(message);
}

std::vector<std::pair<int, FieldElement>> checksum_support(const BlockCode& code, int j) {
  const auto& p = code.params;
  if (j < 0 || j >= p.B - p.N) throw std::out_of_range("checksum_support: no check-sum at this offset");
  const Field& f = *code.field;
  std::vector<std::pair<int, FieldElement>> out;
  switch (code.construction) {
    case Construction::A:
    case Construction::ABinary: {
      out.emplace_back(j, code.construction == Construction::A ? f.generator() : f.one());
      for (int l = 1; l <= p.a; ++l) out.emplace_back(j + l * p.B, f.one());
      break;
    }
    case Construction::B: {
      if (j < p.delta_prime) {
        for (int l = 0; l <= p.a; ++l) out.emplace_back(j + l * p.B, f.one());
      } else {
        for (int l = 0; l < p.a; ++l) out.emplace_back(j + l * p.B, f.one());
        for (int l = 0; l < p.delta; ++l) out.emplace_back(p.a * p.B + l, f.embed((*code.gamma)(j - p.delta_prime, l)));
      }
      break;
    }
    default: throw std::logic_error("checksum_support: construction has no plain check-sum layout");
  }
  return out;
}

}  // namespace streamcode
