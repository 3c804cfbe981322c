// Acceptance checks: one PASS/FAIL line per criterion. Exit status is
// nonzero when any criterion fails. Pass criterion numbers as arguments to
// run a subset.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "streamcode/blockcodes.hpp"
#include "streamcode/channel.hpp"
#include "streamcode/conformance.hpp"
#include "streamcode/streaming.hpp"

using namespace streamcode;
using gf::FieldElement;
using gf::Matrix;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void fail(const std::string& why) {
    pass = false;
    if (problems.size() < 5) problems.push_back(why);
  }
};

struct GridPoint {
  int N, B, T;
  int W() const { return T + 1; }
};

std::vector<GridPoint> grid() {
  std::vector<GridPoint> g;
  for (int T = 1; T <= 8; ++T)
    for (int B = 1; B <= T; ++B)
      for (int N = 1; N <= B; ++N) g.push_back({N, B, T});
  return g;
}

std::string label(int N, int B, int T) {
  return "(" + std::to_string(N) + "," + std::to_string(B) + "," + std::to_string(T) + ")";
}

std::string label(const GridPoint& p) { return label(p.N, p.B, p.T); }

FieldElement random_element(const gf::Field& f, std::mt19937_64& rng) {
  if (f.order() != 0) return f.element(rng() % f.order());
  gf::Coeffs c(f.dimension());
  for (auto& r : c) r = static_cast<gf::Residue>(rng() % f.characteristic());
  return f.from_coeffs(gf::view(c));
}

std::vector<FieldElement> random_message(const BlockCode& code, std::mt19937_64& rng) {
  std::vector<FieldElement> m;
  for (int i = 0; i < code.k(); ++i) m.push_back(random_element(*code.field, rng));
  return m;
}

// Earliest t such that coordinate i is a fixed linear function of the
// unerased coordinates in [0, t]; recoverability only grows with t.
std::optional<std::int64_t> generic_recovery_time(const BlockCode& code, int i, int u, int v) {
  const int n = code.n();
  auto ok = [&](int t) {
    std::vector<std::size_t> seen;
    for (int j = 0; j <= t; ++j)
      if (j < u || j > v) seen.push_back(static_cast<std::size_t>(j));
    return conformance::recoverable(code, static_cast<std::size_t>(i), seen).has_value();
  };
  if (!ok(n - 1)) return std::nullopt;
  int lo = i, hi = n - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (ok(mid)) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

bool all_k_subsets_independent(const Matrix& g) {
  const std::size_t k = g.rows(), n = g.cols();
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (g.select_columns(idx).rank() != k) return false;
    std::size_t pos = k;
    while (pos-- > 0 && idx[pos] == n - k + pos) {
    }
    if (pos == static_cast<std::size_t>(-1)) return true;
    ++idx[pos];
    for (std::size_t t = pos + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
}

// ---------------------------------------------------------------------------

Outcome rate_optimality() {
  Outcome o;
  int count = 0;
  for (const auto& p : grid()) {
    const auto code = construct_auto(p.N, p.B, p.W(), p.T);
    const auto bound = rate_upper_bound(p.N, p.B, p.W(), p.T);
    ++count;
    if (!(code.rate() == bound))
      o.fail(label(p) + " rate " + code.rate().to_string() + " vs bound " + bound.to_string());
    if (static_cast<int>(code.generator.rows()) != code.k() || static_cast<int>(code.generator.cols()) != code.n() ||
        code.generator.rank() != static_cast<std::size_t>(code.k()))
      o.fail(label(p) + " generator shape or rank");
  }
  o.detail = std::to_string(count) + " parameter points, k/n equals the bound exactly";
  return o;
}

Outcome exhaustive_conformance() {
  Outcome o;
  std::map<std::string, int> per;
  for (const auto& p : grid()) {
    const auto dp = make_params(p.N, p.B, p.W(), p.T);
    std::vector<Construction> admitted{Construction::B};
    if (dp.delta >= p.B - p.N) admitted.push_back(Construction::A);
    if (p.N == p.B) admitted.push_back(Construction::MDS);
    if (p.N == 1 && dp.delta >= p.B - 1) admitted.push_back(Construction::ABinary);
    if (p.N == p.B - 1) admitted.push_back(Construction::ASwap);
    for (auto c : admitted) {
      try {
        const auto code = construct(c, p.N, p.B, p.W(), p.T);
        const auto rep = conformance::conforms(code, p.N, p.B, p.T);
        ++per[to_string(c)];
        if (!rep.pass) o.fail(to_string(c) + " " + label(p) + ": " + std::to_string(rep.violation_count) + " violations");
      } catch (const std::exception& e) {
        o.fail(to_string(c) + " " + label(p) + ": " + e.what());
      }
    }
  }
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, n] : per) {
    os << (first ? "" : ", ") << name << " x" << n;
    first = false;
  }
  o.detail = os.str() + ", zero violations";
  return o;
}

Outcome code_2_7_10() {
  Outcome o;
  std::mt19937_64 rng(2024);
  const auto code = construct_b(2, 7, 10);
  const auto& p = code.params;
  if (code.n() != 16 || code.k() != 9 || p.delta != 3 || p.delta_prime != 3) o.fail("parameters");

  auto support = [&](int j) {
    std::vector<int> out;
    for (const auto& [i, g] : checksum_support(code, j)) out.push_back(i);
    return out;
  };
  if (support(0) != std::vector<int>{0, 7}) o.fail("c10 support");
  if (support(3) != std::vector<int>{3, 7, 8, 9}) o.fail("c13 support");

  // c15 = f(theta_10) with f(x) = sum_r m_r x^(5^r)
  const auto theta10 = code.field->basis_element(10);
  for (int rep = 0; rep < 20; ++rep) {
    const auto m = random_message(code, rng);
    FieldElement f = code.field->zero(), x = theta10;
    for (const auto& coeff : m) {
      f += coeff * x;
      x = x.pow(5);
    }
    if (encode_block(code, m)[15] != f) {
      o.fail("c15 is not f(theta_10)");
      break;
    }
  }

  std::set<int> classes;
  for (int u = 0; u + 7 <= 16; ++u) {
    const int v = u + 6;
    const auto m = random_message(code, rng);
    const auto sent = encode_block(code, m);
    std::vector<std::optional<FieldElement>> rx(sent.begin(), sent.end());
    for (int i = u; i <= v; ++i) rx[static_cast<std::size_t>(i)] = std::nullopt;
    const auto res = streaming::structured_burst_decode(code, rx);
    classes.insert(res.epsilon);
    if (res.codeword != sent) o.fail("burst at " + std::to_string(u) + " decoded wrongly");
    for (int i = u; i <= v; ++i) {
      const auto at = res.recovered_at[static_cast<std::size_t>(i)];
      if (!at || *at - i > 10) o.fail("burst at " + std::to_string(u) + ": c" + std::to_string(i) + " late or lost");
    }
    if (res.epsilon == 2) {
      const auto& st = res.steps;
      auto peel = std::find_if(st.begin(), st.end(), [](const streaming::DecodeStep& s) {
        return s.kind == streaming::DecodeStep::Kind::Peel && s.recovered == std::vector<int>{9};
      });
      auto gamma = std::find_if(st.begin(), st.end(), [](const streaming::DecodeStep& s) {
        return s.kind == streaming::DecodeStep::Kind::Gamma && s.recovered == std::vector<int>{7, 8};
      });
      if (peel == st.end() || peel->equations != std::vector<int>{12}) o.fail("eps=2: c9 not peeled from c12");
      if (gamma == st.end() || gamma < peel) o.fail("eps=2: {c7,c8} not solved after c9");
    }
  }
  if (classes != std::set<int>{0, 1, 2, 3, 4, 5}) o.fail("burst classes seen do not cover eps 0..5");
  o.detail = "n=16 k=9 delta=delta'=3, supports and c15 match, " + std::to_string(classes.size()) +
             " burst classes decode within delay 10";
  return o;
}

Outcome structured_equivalence() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::vector<std::tuple<int, int, int>> codes;
  for (const auto& p : grid()) codes.emplace_back(p.N, p.B, p.T);
  codes.emplace_back(1, 7, 12);  // the grid never has both B - eps < delta and eps < delta
  std::set<std::string> branches;
  std::size_t bursts = 0;
  for (const auto& [N, B, T] : codes) {
    const auto code = construct_b(N, B, T);
    const int n = code.n();
    for (int len = 1; len <= B; ++len)
      for (int u = 0; u + len <= n; ++u) {
        const int v = u + len - 1;
        const auto sent = encode_block(code, random_message(code, rng));
        std::vector<std::optional<FieldElement>> rx(sent.begin(), sent.end());
        for (int i = u; i <= v; ++i) rx[static_cast<std::size_t>(i)] = std::nullopt;
        ++bursts;
        try {
          const auto res = streaming::structured_burst_decode(code, rx);
          branches.insert(res.branch);
          if (res.codeword != sent) o.fail(label(N, B, T) + " [" + std::to_string(u) + "," + std::to_string(v) + "] wrong values");
          for (int i = u; i <= v; ++i)
            if (res.recovered_at[static_cast<std::size_t>(i)] != generic_recovery_time(code, i, u, v))
              o.fail(label(N, B, T) + " [" + std::to_string(u) + "," + std::to_string(v) + "] c" + std::to_string(i) +
                     " recovery time differs");
        } catch (const std::exception& e) {
          o.fail(label(N, B, T) + " [" + std::to_string(u) + "," + std::to_string(v) + "] " + e.what());
        }
      }
  }
  for (const std::string want :
       {"B-eps>=delta,eps>=delta", "B-eps>=delta,eps<delta", "B-eps<delta,eps>=delta", "B-eps<delta,eps<delta", "overflow"})
    if (!branches.count(want)) o.fail("branch never exercised: " + want);
  o.detail = std::to_string(codes.size()) + " codes, " + std::to_string(bursts) +
             " bursts; values and recovery times equal the linear oracle; " + std::to_string(branches.size()) +
             " branches covered";
  return o;
}

Outcome streaming_guarantee() {
  Outcome o;
  std::size_t exhaustive = 0, sampled = 0, guarded = 0, simulated = 0;
  for (const auto& p : grid()) {
    const auto code = construct_auto(p.N, p.B, p.W(), p.T);
    auto oracle = std::make_shared<streaming::SpanOracle>(code.generator);
    streaming::DiagonalOutcomeTable table(code, oracle);
    auto check = [&](const streaming::PatternSummary& s, const std::string& what) {
      if (s.failures != 0 || s.max_delay > p.T)
        o.fail(label(p) + " " + what + ": failures " + std::to_string(s.failures) + ", max delay " +
               std::to_string(s.max_delay));
    };
    // Full simulations alongside the symbolic summaries, which must agree.
    auto simulate = [&](const channel::ErasurePattern& pat, std::uint64_t seed, const std::string& what) {
      const auto rep = streaming::run_simulation(code, pat, seed);
      ++simulated;
      const streaming::PatternSummary sim{static_cast<int>(rep.max_delay), rep.failures};
      check(sim, what + " (simulated)");
      if (rep.mismatches != 0 || rep.late != 0) o.fail(label(p) + " " + what + ": wrong or late values");
      const auto sum = streaming::summarize_pattern(table, pat);
      if (sum.max_delay != sim.max_delay || sum.failures != sim.failures)
        o.fail(label(p) + " " + what + ": summary disagrees with simulation");
    };

    // (a) every admissible pattern over n + T + 2 slots
    const std::size_t H = static_cast<std::size_t>(code.n() + p.T + 2);
    channel::PatternEnumerator en(p.N, p.B, p.W(), H);
    std::size_t idx = 0;
    while (auto pat = en.next()) {
      check(streaming::summarize_pattern(table, *pat), "pattern " + channel::pattern_to_json(*pat));
      if (idx % 4099 == 0) simulate(*pat, idx, "enumerated pattern");
      ++idx;
    }
    exhaustive += idx;

    // (b) sampled patterns over 200 slots
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const auto pat = channel::random_pattern(p.N, p.B, p.W(), 200, seed);
      check(streaming::summarize_pattern(table, pat), "seed " + std::to_string(seed));
      simulate(pat, seed, "seed " + std::to_string(seed));
      ++sampled;
    }

    // (c) bursts of length B separated by T clean slots
    const auto pat = channel::guarded_burst_pattern(p.B, p.T, 6, static_cast<std::size_t>(6 * (p.B + p.T)));
    const auto rep = streaming::run_simulation(code, pat, 5);
    ++guarded;
    std::size_t recovered = 0;
    for (const auto& r : rep.erased_symbols) recovered += r.status == streaming::SymbolStatus::Recovered;
    if (recovered != rep.erased_symbols.size() || rep.erased_symbols.size() != pat.erased.size() * code.generator.cols() ||
        rep.max_delay > p.T || rep.mismatches != 0)
      o.fail(label(p) + " guarded bursts not fully recovered within T");
  }
  o.detail = "(a) " + std::to_string(exhaustive) + " enumerated patterns, (b) " + std::to_string(sampled) +
             " sampled patterns, (c) " + std::to_string(guarded) + " guarded-burst runs; " + std::to_string(simulated) +
             " cross-checked by full simulation; no failures, delay <= T";
  return o;
}

Outcome corner_cases() {
  Outcome o;
  int mds = 0, binary = 0, swap = 0;
  for (const auto& p : grid()) {
    const auto dp = make_params(p.N, p.B, p.W(), p.T);
    if (p.N == p.B) {
      const auto code = construct_auto(p.N, p.B, p.W(), p.T);
      ++mds;
      if (code.construction != Construction::MDS || !all_k_subsets_independent(code.generator))
        o.fail(label(p) + " is not MDS");
    }
    if (p.N == 1 && dp.delta >= p.B - 1) {
      const auto code = construct_a_binary(p.B, p.T);
      ++binary;
      if (code.field->order() != 2 || !conformance::conforms(code, 1, p.B, p.T).pass)
        o.fail(label(p) + " binary code does not conform over F2");
    }
    if (p.B >= 2 && p.N == p.B - 1) {
      const auto code = construct_a_swap(p.N, p.B, p.T);
      ++swap;
      const bool prime = code.field->dimension() == 1;
      if (!prime || code.field->order() < static_cast<std::uint64_t>(p.T + 1) ||
          !conformance::conforms(code, p.N, p.B, p.T).pass)
        o.fail(label(p) + " swap code does not conform over a prime field of order >= T+1");
    }
  }
  o.detail = std::to_string(mds) + " MDS codes (all k-subsets independent), " + std::to_string(binary) +
             " binary codes, " + std::to_string(swap) + " swap codes conform";
  return o;
}

// --- infrastructure -------------------------------------------------------

FieldElement det(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  FieldElement acc = m.field().zero();
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::size_t> rows, cols;
    for (std::size_t r = 1; r < n; ++r) rows.push_back(r);
    for (std::size_t j = 0; j < n; ++j)
      if (j != c) cols.push_back(j);
    const auto term = m(0, c) * det(m.select_rows(rows).select_columns(cols));
    acc = c % 2 == 0 ? acc + term : acc - term;
  }
  return acc;
}

// F_q-independence of residue vectors by trying every nonzero combination.
bool independent_by_enumeration(const std::vector<std::vector<gf::Residue>>& pts, std::uint32_t q) {
  const std::size_t s = pts.size(), m = pts.empty() ? 0 : pts[0].size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < s; ++i) total *= q;
  std::vector<std::uint32_t> acc(m);
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    std::fill(acc.begin(), acc.end(), 0);
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < s; ++i, rest /= q) {
      const auto c = static_cast<std::uint32_t>(rest % q);
      for (std::size_t d = 0; d < m; ++d) acc[d] = (acc[d] + c * pts[i][d]) % q;
    }
    if (std::all_of(acc.begin(), acc.end(), [](std::uint32_t x) { return x == 0; })) return false;
  }
  return true;
}

Outcome infrastructure() {
  Outcome o;
  std::mt19937_64 rng(31337);

  // field axioms
  const std::vector<gf::FieldPtr> fields{gf::make_field(2, {1}), gf::make_field(7, {1}),   gf::make_field(2, {8}),
                                         gf::make_field(3, {5}), gf::make_field(11, {2}),  gf::make_field(5, {11}),
                                         gf::make_field(2, {2, 3}), gf::make_field(3, {2, 2})};
  std::size_t axiom_cases = 0;
  for (const auto& f : fields)
    for (int rep = 0; rep < 1500; ++rep, ++axiom_cases) {
      const auto a = random_element(*f, rng), b = random_element(*f, rng), c = random_element(*f, rng);
      bool ok = a + b == b + a && a * b == b * a && (a + b) + c == a + (b + c) && (a * b) * c == a * (b * c) &&
                a * (b + c) == a * b + a * c && a + f->zero() == a && a * f->one() == a && a + (-a) == f->zero();
      if (!a.is_zero()) ok = ok && a * a.inverse() == f->one();
      if (!ok) o.fail("field axiom fails in " + f->describe());
    }

  // Frobenius additivity
  std::size_t frob_cases = 0;
  for (const auto& [f, q] : std::vector<std::pair<gf::FieldPtr, std::uint64_t>>{
           {gf::make_field(5, {11}), 5}, {gf::make_field(2, {8}), 2}, {gf::make_field(2, {2, 3}), 4},
           {gf::make_field(3, {5}), 3}, {gf::make_field(7, {4}), 7}})
    for (int rep = 0; rep < 2000; ++rep, ++frob_cases) {
      const auto a = random_element(*f, rng), b = random_element(*f, rng);
      const auto i = static_cast<std::uint64_t>(rep % 5);
      if (gf::frobenius_power(a + b, i, q) != gf::frobenius_power(a, i, q) + gf::frobenius_power(b, i, q))
        o.fail("Frobenius not additive in " + f->describe());
    }

  // Moore matrix invertibility vs F_q-independence, every point set
  std::size_t moore_sets = 0;
  for (std::uint32_t q : {2U, 3U})
    for (int m = 1; m <= 4; ++m) {
      auto f = gf::make_field(q, {m});
      std::vector<FieldElement> elems;
      for (std::uint64_t i = 0; i < f->order(); ++i) elems.push_back(f->element(i));
      for (std::size_t s = 1; s <= static_cast<std::size_t>(m); ++s) {
        std::vector<std::size_t> idx(s);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
          std::vector<FieldElement> pts;
          std::vector<std::vector<gf::Residue>> digits;
          for (auto i : idx) {
            pts.push_back(elems[i]);
            digits.emplace_back(elems[i].coeffs().begin(), elems[i].coeffs().end());
          }
          const bool indep = independent_by_enumeration(digits, q);
          const bool moore = moore_matrix(pts, s, q).rank() == s;
          ++moore_sets;
          if (indep != moore || gf::fq_independent(pts, q) != indep)
            o.fail("Moore/independence mismatch over " + f->describe());
          std::size_t pos = s;
          while (pos-- > 0 && idx[pos] == elems.size() - s + pos) {
          }
          if (pos == static_cast<std::size_t>(-1)) break;
          ++idx[pos];
          for (std::size_t t = pos + 1; t < s; ++t) idx[t] = idx[t - 1] + 1;
        }
      }
    }

  // Cauchy square submatrices
  std::size_t cauchy_subs = 0;
  for (const auto& f : {gf::make_field(5, {1}), gf::make_field(7, {1}), gf::make_field(2, {3}), gf::make_field(3, {2})})
    for (int r = 1; r <= 4; ++r)
      for (int c = 1; r + c <= 5; ++c) {
        const auto cm = cauchy_matrix(r, c, *f);
        for (std::uint32_t rm = 1; rm < (1U << r); ++rm)
          for (std::uint32_t cmask = 1; cmask < (1U << c); ++cmask) {
            if (__builtin_popcount(rm) != __builtin_popcount(cmask)) continue;
            std::vector<std::size_t> rows, cols;
            for (int i = 0; i < r; ++i)
              if (rm & (1U << i)) rows.push_back(static_cast<std::size_t>(i));
            for (int j = 0; j < c; ++j)
              if (cmask & (1U << j)) cols.push_back(static_cast<std::size_t>(j));
            ++cauchy_subs;
            if (det(cm.select_rows(rows).select_columns(cols)).is_zero())
              o.fail("singular Cauchy submatrix over " + f->describe());
          }
      }

  // CLI determinism
  const std::vector<std::vector<std::string>> runs{
      {"bound", "--N", "2", "--B", "4", "--W", "11", "--T", "10"},
      {"construct", "--N", "2", "--B", "7", "--T", "10", "--construction", "b"},
      {"verify", "--N", "2", "--B", "4", "--W", "11", "--T", "10"},
      {"simulate", "--N", "2", "--B", "4", "--W", "11", "--T", "10", "--horizon", "200", "--seed", "7", "--verbose"},
  };
  for (const auto& args : runs) {
    std::ostringstream o1, e1, o2, e2;
    const int r1 = cli::run_cli(args, o1, e1);
    const int r2 = cli::run_cli(args, o2, e2);
    if (r1 != 0 || r1 != r2 || o1.str() != o2.str() || e1.str() != e2.str()) o.fail("CLI " + args[0] + " not reproducible");
  }

  o.detail = std::to_string(axiom_cases) + " axiom cases, " + std::to_string(frob_cases) + " Frobenius cases, " +
             std::to_string(moore_sets) + " Moore point sets (q<=3, m<=4), " + std::to_string(cauchy_subs) +
             " Cauchy submatrices, " + std::to_string(runs.size()) + " CLI reruns byte-identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"rate optimality", rate_optimality},
      {"exhaustive conformance", exhaustive_conformance},
      {"(N,B,T) = (2,7,10) burst walkthrough", code_2_7_10},
      {"structured decode equals generic decoding", structured_equivalence},
      {"streaming delay guarantee", streaming_guarantee},
      {"corner cases", corner_cases},
      {"infrastructure properties", infrastructure},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[i].first << ": " << o.detail << " ["
              << std::fixed << std::setprecision(1) << secs << "s]\n";
    for (const auto& pr : o.problems) std::cout << "        " << pr << '\n';
    std::cout.flush();
  }
  return all ? 0 : 1;
}
