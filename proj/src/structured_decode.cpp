// Burst recovery for Construction B, following the check-sum structure
// rather than generic linear algebra: peel check-sums with a single erased
// term, solve the Gamma sub-system, then invert the Moore system over the
// evaluation points that are known.

#include <algorithm>

#include "streamcode/streaming.hpp"

namespace streamcode::streaming {

using gf::FieldElement;

std::string to_string(DecodeStep::Kind k) {
  switch (k) {
    case DecodeStep::Kind::Peel: return "peel";
    case DecodeStep::Kind::Gamma: return "gamma";
    case DecodeStep::Kind::Moore: return "moore";
    case DecodeStep::Kind::Parity: return "parity";
  }
  return "?";
}

std::string classify_burst(const CodeParams& p, int u, int v) {
  if (v - u + 1 != p.B) return "short";
  if (p.delta >= p.B - p.N) return "delta>=B-N";
  const int lo = std::max(u, p.T);
  const int hi = std::min(v, p.T + p.B - p.N - 1);
  const int eps = std::max(0, hi - lo + 1);
  if (eps == p.B - p.N) return "eps=B-N";
  if (eps == 0) return "eps=0";
  if (p.B - eps > p.N + p.delta) return "overflow";
  return std::string(p.B - eps >= p.delta ? "B-eps>=delta" : "B-eps<delta") + (eps >= p.delta ? ",eps>=delta" : ",eps<delta");
}

namespace {

struct Equation {
  int coord;  // T + j
  std::vector<std::pair<int, FieldElement>> support;
};

class BurstSolver {
 public:
  BurstSolver(const BlockCode& code, std::span<const std::optional<FieldElement>> received)
      : code_(code), p_(code.params), f_(*code.field), n_(p_.n) {
    c_.assign(received.begin(), received.end());
    erased_.assign(static_cast<std::size_t>(n_), false);
    for (int i = 0; i < n_; ++i) erased_[i] = !received[i].has_value();
    for (int j = 0; j < p_.B - p_.N; ++j) eqs_.push_back(Equation{p_.T + j, checksum_support(code, j)});
  }

  StructuredDecodeResult run() {
    StructuredDecodeResult res;
    res.recovered_at.assign(static_cast<std::size_t>(n_), std::nullopt);
    for (t_ = 0; t_ < n_; ++t_) {
      while (peel(res) || gamma(res) || moore(res) || parity(res)) {
      }
    }
    for (int i = 0; i < n_; ++i) {
      if (!c_[i]) throw std::runtime_error("structured decode left coordinate " + std::to_string(i) + " unresolved");
      res.codeword.push_back(*c_[i]);
      if (erased_[i]) res.recovered_at[i] = at_[i];
    }
    return res;
  }

 private:
  bool core(int i) const { return i < p_.T || i == n_ - 1; }
  bool usable(int i) const { return c_[i].has_value() && (erased_[i] || i <= t_); }
  bool arrived_equation(const Equation& e) const { return !erased_[e.coord] && e.coord <= t_; }

  // A symbol is never reported before its own arrival time.
  void set(int i, FieldElement v) {
    c_[i] = std::move(v);
    at_[i] = std::max(t_, i);
  }

  std::vector<int> unknowns(const Equation& e) const {
    std::vector<int> out;
    for (const auto& [i, g] : e.support)
      if (!c_[i]) out.push_back(i);
    return out;
  }

  // Check-sum value minus its known terms.
  FieldElement reduced(const Equation& e) const {
    FieldElement v = *c_[e.coord];
    for (const auto& [i, g] : e.support)
      if (c_[i]) v -= g * *c_[i];
    return v;
  }

  bool peel(StructuredDecodeResult& res) {
    for (const auto& e : eqs_) {
      if (!arrived_equation(e)) continue;
      const auto u = unknowns(e);
      if (u.size() != 1) continue;
      const auto& g = std::find_if(e.support.begin(), e.support.end(), [&](const auto& s) { return s.first == u[0]; })->second;
      set(u[0], reduced(e) / g);
      res.steps.push_back(DecodeStep{DecodeStep::Kind::Peel, t_, {e.coord}, {}, {u[0]}});
      return true;
    }
    return false;
  }

  bool gamma(StructuredDecodeResult& res) {
    std::vector<const Equation*> rows;
    std::vector<int> cols;
    for (const auto& e : eqs_) {
      if (!arrived_equation(e)) continue;
      const auto u = unknowns(e);
      if (u.size() < 2) continue;
      rows.push_back(&e);
      for (int i : u)
        if (std::find(cols.begin(), cols.end(), i) == cols.end()) cols.push_back(i);
    }
    if (rows.size() < 2) return false;
    std::sort(cols.begin(), cols.end());

    gf::Matrix m(f_, rows.size(), cols.size() + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (const auto& [i, g] : rows[r]->support) {
        if (c_[i]) continue;
        const auto pos = static_cast<std::size_t>(std::lower_bound(cols.begin(), cols.end(), i) - cols.begin());
        m(r, pos) = g;
      }
      m(r, cols.size()) = reduced(*rows[r]);
    }
    const auto pivots = gf::row_reduce(m, cols.size());
    DecodeStep step{DecodeStep::Kind::Gamma, t_, {}, {}, {}};
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      bool alone = true;
      for (std::size_t c = 0; c < cols.size() && alone; ++c) alone = c == pivots[r] || m(r, c).is_zero();
      if (!alone) continue;
      step.recovered.push_back(cols[pivots[r]]);
      set(cols[pivots[r]], m(r, cols.size()));
    }
    if (step.recovered.empty()) return false;
    std::sort(step.recovered.begin(), step.recovered.end());
    for (const auto* e : rows) step.equations.push_back(e->coord);
    res.steps.push_back(std::move(step));
    return true;
  }

  bool moore(StructuredDecodeResult& res) {
    std::vector<int> missing;
    for (int i = 0; i < n_; ++i)
      if (core(i) && !c_[i]) missing.push_back(i);
    if (missing.empty()) return false;

    const auto k = static_cast<std::size_t>(p_.k);
    const std::uint64_t q = code_.subfield_order;
    std::vector<FieldElement> points;
    std::vector<FieldElement> values;
    DecodeStep step{DecodeStep::Kind::Moore, t_, {}, {}, {}};
    auto offer = [&](const FieldElement& pt, const FieldElement& val) {
      if (points.size() == k) return false;
      points.push_back(pt);
      if (!gf::fq_independent(points, q)) {
        points.pop_back();
        return false;
      }
      values.push_back(val);
      return true;
    };
    for (int i = 0; i < n_; ++i) {
      if (core(i) && usable(i) && offer(code_.eval_points[i], *c_[i])) step.points.push_back(i);
    }
    for (const auto& e : eqs_) {
      if (!arrived_equation(e) || unknowns(e).empty()) continue;
      FieldElement pt = f_.zero();
      for (const auto& [i, g] : e.support)
        if (!c_[i]) pt += g * code_.eval_points[i];
      if (offer(pt, reduced(e))) step.equations.push_back(e.coord);
    }
    if (points.size() < k) return false;

    // message m with sum_r m_r x^(q^r) = value at each point
    const gf::Matrix moore = moore_matrix(points, k, q);
    const auto msg = moore.inverse().left_multiply(values);
    for (int i : missing) {
      FieldElement v = f_.zero();
      for (std::size_t r = 0; r < k; ++r) v += msg[r] * code_.generator(r, static_cast<std::size_t>(i));
      set(i, std::move(v));
    }
    step.recovered = missing;
    res.steps.push_back(std::move(step));
    return true;
  }

  bool parity(StructuredDecodeResult& res) {
    DecodeStep step{DecodeStep::Kind::Parity, t_, {}, {}, {}};
    for (const auto& e : eqs_) {
      if (c_[e.coord] || !std::all_of(e.support.begin(), e.support.end(), [&](const auto& s) { return usable(s.first); }))
        continue;
      FieldElement v = f_.zero();
      for (const auto& [i, g] : e.support) v += g * *c_[i];
      set(e.coord, std::move(v));
      step.recovered.push_back(e.coord);
    }
    if (step.recovered.empty()) return false;
    res.steps.push_back(std::move(step));
    return true;
  }

  const BlockCode& code_;
  const CodeParams& p_;
  const gf::Field& f_;
  int n_;
  int t_ = 0;
  std::vector<std::optional<FieldElement>> c_;
  std::vector<bool> erased_;
  std::vector<Equation> eqs_;
  std::unordered_map<int, std::int64_t> at_;
};

}  // namespace

StructuredDecodeResult structured_burst_decode(const BlockCode& code,
                                               std::span<const std::optional<FieldElement>> received) {
  if (code.construction != Construction::B)
    throw std::invalid_argument("structured_burst_decode: only Construction B is supported");
  const auto& p = code.params;
  if (received.size() != static_cast<std::size_t>(p.n))
    throw std::invalid_argument("structured_burst_decode: received word must have n coordinates");

  int u = -1;
  int v = -1;
  for (int i = 0; i < p.n; ++i) {
    if (received[i]) {
      if (!received[i]->valid() || !received[i]->field().same_as(*code.field))
        throw gf::FieldMismatch("structured_burst_decode: symbol outside the code's field");
      continue;
    }
    if (u < 0) u = i;
    else if (v != i - 1) throw std::invalid_argument("structured_burst_decode: erasures do not form a burst");
    v = i;
  }
  if (u >= 0 && v - u + 1 > p.B) throw std::invalid_argument("structured_burst_decode: burst longer than B");

  BurstSolver solver(code, received);
  StructuredDecodeResult res = solver.run();
  if (u >= 0) {
    const int lo = std::max(u, p.T);
    const int hi = std::min(v, p.T + p.B - p.N - 1);
    res.epsilon = std::max(0, hi - lo + 1);
    for (int i = p.T + res.epsilon; i <= p.T + p.delta - 1; ++i)
      if (i < u || i > v) ++res.zeta;
    res.branch = classify_burst(p, u, v);
  } else {
    res.branch = "none";
  }
  return res;
}

}  // namespace streamcode::streaming
