#include "streamcode/streaming.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <sstream>

#include "json.hpp"

namespace streamcode::streaming {

namespace {

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

std::uint64_t low_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : bit(n) - 1; }

void require_small(std::size_t n) {
  if (n == 0 || n > 64) throw std::invalid_argument("streaming: block length must be in [1, 64]");
}

}  // namespace

std::string to_string(SymbolStatus s) {
  switch (s) {
    case SymbolStatus::Received: return "received";
    case SymbolStatus::Recovered: return "recovered";
    case SymbolStatus::Failed: return "failed";
  }
  return "?";
}

// ---------------------------------------------------------------------------

Encoder::Encoder(const BlockCode& code)
    : field_(code.field.get()),
      n_(static_cast<std::size_t>(code.n())),
      k_(static_cast<std::size_t>(code.k())),
      sys_(systematic_generator(code.generator)),
      history_(n_) {}

Packet Encoder::step(std::int64_t t, std::span<const gf::FieldElement> message) {
  if (t != next_) {
    throw OutOfOrder("encoder: expected time " + std::to_string(next_) + ", got " + std::to_string(t));
  }
  if (message.size() != k_) throw std::invalid_argument("encoder: message must have k symbols");
  for (const auto& m : message) {
    if (!m.valid() || !m.field().same_as(*field_)) throw gf::FieldMismatch("encoder: message symbol outside the code's field");
  }
  const auto n = static_cast<std::int64_t>(n_);
  history_[static_cast<std::size_t>(t % n)].assign(message.begin(), message.end());
  ++next_;

  Packet out;
  out.time = t;
  out.symbols.reserve(n_);
  for (std::size_t d = 0; d < k_; ++d) out.symbols.push_back(message[d]);
  for (std::size_t d = k_; d < n_; ++d) {
    const std::int64_t s = t - static_cast<std::int64_t>(d);
    gf::FieldElement acc = field_->zero();
    for (std::size_t r = 0; r < k_; ++r) {
      const std::int64_t when = s + static_cast<std::int64_t>(r);
      if (when < 0) continue;
      const auto& m = history_[static_cast<std::size_t>(when % n)][r];
      if (!m.is_zero()) acc += m * sys_(r, d);
    }
    out.symbols.push_back(std::move(acc));
  }
  return out;
}

// ---------------------------------------------------------------------------

SpanOracle::SpanOracle(gf::Matrix generator) : g_(std::move(generator)) { require_small(g_.cols()); }

std::uint64_t SpanOracle::recoverable_mask(std::uint64_t available) {
  const std::size_t n = g_.cols();
  available &= low_mask(n);
  if (auto it = masks_.find(available); it != masks_.end()) return it->second;

  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < n; ++j)
    if (available & bit(j)) order.push_back(j);
  const std::size_t navail = order.size();
  for (std::size_t j = 0; j < n; ++j)
    if (!(available & bit(j))) order.push_back(j);

  gf::Matrix m = g_.select_columns(order);
  const auto pivots = gf::row_reduce(m, navail);
  const std::size_t rank = pivots.size();
  std::uint64_t result = available;
  for (std::size_t c = navail; c < n; ++c) {
    bool in_span = true;
    for (std::size_t r = rank; r < m.rows() && in_span; ++r) in_span = m(r, c).is_zero();
    if (in_span) result |= bit(order[c]);
  }
  masks_.emplace(available, result);
  return result;
}

const std::vector<gf::FieldElement>& SpanOracle::coefficients(std::size_t i, std::uint64_t available) {
  const std::size_t n = g_.cols();
  if (i >= n) throw std::out_of_range("SpanOracle: coordinate outside [0, n-1]");
  available &= low_mask(n);
  const auto key = std::make_pair(available, i);
  if (auto it = coeffs_.find(key); it != coeffs_.end()) return it->second;

  const gf::Field& f = g_.field();
  std::vector<gf::FieldElement> full(n, f.zero());
  if (available & bit(i)) {
    full[i] = f.one();
  } else {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j)
      if (available & bit(j)) cols.push_back(j);
    const auto target = g_.column(i);
    std::optional<std::vector<gf::FieldElement>> lambda;
    if (cols.empty()) {
      if (std::all_of(target.begin(), target.end(), [](const auto& x) { return x.is_zero(); })) lambda.emplace();
    } else {
      lambda = gf::solve_in_span(g_.select_columns(cols), target);
    }
    if (!lambda) throw std::logic_error("SpanOracle: coordinate " + std::to_string(i) + " is not recoverable");
    for (std::size_t q = 0; q < cols.size(); ++q) full[cols[q]] = (*lambda)[q];
  }
  return coeffs_.emplace(key, std::move(full)).first->second;
}

// ---------------------------------------------------------------------------

Decoder::Decoder(const BlockCode& code, int delay, std::shared_ptr<SpanOracle> oracle)
    : field_(code.field.get()), n_(static_cast<std::size_t>(code.n())), delay_(delay), oracle_(std::move(oracle)) {
  require_small(n_);
  if (delay < 0) throw std::invalid_argument("decoder: negative delay");
  if (!oracle_) oracle_ = std::make_shared<SpanOracle>(code.generator);
}

void Decoder::open_diagonal(std::int64_t start) {
  Diagonal d;
  d.start = start;
  d.values.assign(n_, field_->zero());
  d.record_index.assign(n_, SIZE_MAX);
  // Coordinates sent before t = 0 are known zeros.
  for (std::size_t c = 0; c < n_ && start + static_cast<std::int64_t>(c) < 0; ++c) d.available |= bit(c);
  diagonals_.push_back(std::move(d));
}

void Decoder::finalize(Diagonal& d) {
  for (std::size_t c = 0; c < n_; ++c) {
    if ((d.pending & bit(c)) && d.record_index[c] != SIZE_MAX) records_[d.record_index[c]].status = SymbolStatus::Failed;
  }
  d.pending = 0;
}

std::vector<Recovery> Decoder::step(std::int64_t t, const std::optional<Packet>& y) {
  if (t != next_) throw OutOfOrder("decoder: expected time " + std::to_string(next_) + ", got " + std::to_string(t));
  if (y && y->symbols.size() != n_) throw std::invalid_argument("decoder: packet must have n symbols");
  ++next_;

  const auto n = static_cast<std::int64_t>(n_);
  if (t == 0) {
    for (std::int64_t s = -(n - 1); s <= 0; ++s) open_diagonal(s);
  } else {
    open_diagonal(t);
  }

  std::vector<Recovery> out;
  for (auto& d : diagonals_) {
    const std::int64_t offset = t - d.start;
    bool changed = false;
    if (offset >= 0 && offset < n) {
      const auto c = static_cast<std::size_t>(offset);
      if (y) {
        d.values[c] = y->symbols[c];
        d.available |= bit(c);
      } else {
        d.pending |= bit(c);
        d.record_index[c] = records_.size();
        records_.push_back(SymbolRecord{t, c, SymbolStatus::Failed, std::nullopt});
      }
      changed = true;
    }
    if (!changed || d.pending == 0) continue;

    const std::uint64_t newly = d.pending & oracle_->recoverable_mask(d.available);
    if (newly == 0) continue;
    const std::uint64_t basis = d.available;
    for (std::size_t c = 0; c < n_; ++c) {
      if (!(newly & bit(c))) continue;
      const auto& lambda = oracle_->coefficients(c, basis);
      gf::FieldElement v = field_->zero();
      for (std::size_t j = 0; j < n_; ++j)
        if ((basis & bit(j)) && !lambda[j].is_zero()) v += lambda[j] * d.values[j];
      d.values[c] = v;
      auto& rec = records_[d.record_index[c]];
      rec.status = SymbolStatus::Recovered;
      rec.recovered_at = t;
      out.push_back(Recovery{rec.time, c, std::move(v), t});
    }
    d.available |= newly;
    d.pending &= ~newly;
  }

  // Diagonals whose deadline has passed, and complete ones, are closed.
  std::erase_if(diagonals_, [&](Diagonal& d) {
    const std::int64_t last = d.start + n - 1;
    if (last + delay_ <= t) {
      finalize(d);
      return true;
    }
    return last <= t && d.pending == 0;
  });
  return out;
}

void Decoder::finish() {
  for (auto& d : diagonals_) finalize(d);
  diagonals_.clear();
}

// ---------------------------------------------------------------------------

DelayReport run_simulation(const BlockCode& code, const channel::ErasurePattern& pattern, std::uint64_t seed,
                           const SimulationOptions& opts) {
  if (opts.declared_model) {
    const auto [N, B, W] = *opts.declared_model;
    if (!channel::validate_pattern(pattern, N, B, W)) {
      throw InvalidPattern("erasure pattern violates C(" + std::to_string(N) + ", " + std::to_string(B) + ", " +
                           std::to_string(W) + ")");
    }
  }
  const auto& p = code.params;
  DelayReport report;
  report.params = p;
  report.horizon = pattern.horizon;
  report.n = static_cast<std::size_t>(p.n);
  if (pattern.horizon == 0) return report;

  const gf::Field& f = *code.field;
  const auto H = static_cast<std::int64_t>(pattern.horizon);
  const std::int64_t total = H + p.n - 1 + p.T;
  Encoder enc(code);
  Decoder dec(code, p.T);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<gf::Residue> digit(0, f.characteristic() - 1);
  std::vector<std::vector<gf::FieldElement>> sent;
  sent.reserve(pattern.horizon);

  gf::Coeffs flat(f.dimension());
  std::vector<gf::FieldElement> msg(static_cast<std::size_t>(p.k));
  for (std::int64_t t = 0; t < total; ++t) {
    for (auto& m : msg) {
      for (auto& r : flat) r = digit(rng);
      m = f.from_coeffs(gf::view(flat));
    }
    Packet pkt = enc.step(t, msg);
    const bool erased = t < H && pattern.contains(static_cast<std::size_t>(t));
    if (t < H) sent.push_back(pkt.symbols);
    const auto recovered = erased ? dec.step(t, std::nullopt) : dec.step(t, pkt);
    for (const auto& r : recovered) {
      if (r.time < H && !(r.value == sent[static_cast<std::size_t>(r.time)][r.coord])) ++report.mismatches;
    }
  }
  dec.finish();

  report.packets = static_cast<std::size_t>(total);
  report.erased_symbols = dec.erased_symbols();
  for (const auto& rec : report.erased_symbols) {
    if (rec.status == SymbolStatus::Failed) {
      ++report.failures;
      continue;
    }
    const auto delay = *rec.delay();
    report.max_delay = std::max(report.max_delay, delay);
    if (delay > p.T) ++report.late;
  }
  return report;
}

// ---------------------------------------------------------------------------

DiagonalOutcomeTable::DiagonalOutcomeTable(const BlockCode& code, std::shared_ptr<SpanOracle> oracle)
    : n_(static_cast<std::size_t>(code.n())), oracle_(std::move(oracle)) {
  require_small(n_);
  if (!oracle_) oracle_ = std::make_shared<SpanOracle>(code.generator);
  if (n_ <= 20) dense_.resize(std::size_t{1} << n_);
}

std::vector<int> DiagonalOutcomeTable::recovery_offsets(std::uint64_t erased_mask) {
  erased_mask &= low_mask(n_);
  std::vector<int> at(n_, -1);
  std::uint64_t avail = 0;
  std::uint64_t pending = 0;
  for (std::size_t d = 0; d < n_; ++d) {
    if (erased_mask & bit(d)) pending |= bit(d);
    else avail |= bit(d);
    if (!pending) continue;
    const std::uint64_t newly = pending & oracle_->recoverable_mask(avail);
    for (std::size_t c = 0; c < n_; ++c)
      if (newly & bit(c)) at[c] = static_cast<int>(d);
    pending &= ~newly;
    avail |= newly;
  }
  return at;
}

DiagonalOutcomeTable::Outcome DiagonalOutcomeTable::compute(std::uint64_t erased_mask) {
  Outcome o;
  o.computed = true;
  o.max_delay = -1;
  const auto at = recovery_offsets(erased_mask);
  for (std::size_t c = 0; c < n_; ++c) {
    if (!(erased_mask & bit(c))) continue;
    if (at[c] < 0) ++o.failures;
    else o.max_delay = std::max(o.max_delay, at[c] - static_cast<int>(c));
  }
  return o;
}

const DiagonalOutcomeTable::Outcome& DiagonalOutcomeTable::outcome(std::uint64_t erased_mask) {
  erased_mask &= low_mask(n_);
  if (!dense_.empty()) {
    auto& slot = dense_[erased_mask];
    if (!slot.computed) slot = compute(erased_mask);
    return slot;
  }
  auto it = sparse_.find(erased_mask);
  if (it == sparse_.end()) it = sparse_.emplace(erased_mask, compute(erased_mask)).first;
  return it->second;
}

PatternSummary summarize_pattern(DiagonalOutcomeTable& table, const channel::ErasurePattern& pattern) {
  PatternSummary out;
  if (pattern.erased.empty()) return out;
  const std::size_t n = table.n();
  const auto H = static_cast<std::int64_t>(pattern.horizon);
  std::vector<char> erased(pattern.horizon, 0);
  for (std::size_t x : pattern.erased) erased[x] = 1;

  // Mask of diagonal s: bit d set iff s + d is erased.
  std::uint64_t mask = 0;
  const auto top = static_cast<std::int64_t>(n) - 1;
  for (std::int64_t s = -top; s < H; ++s) {
    const std::int64_t incoming = s + top;
    mask >>= 1;
    if (incoming < H && erased[static_cast<std::size_t>(incoming)]) mask |= bit(n - 1);
    if (!mask) continue;
    const auto& o = table.outcome(mask);
    out.failures += static_cast<std::size_t>(o.failures);
    out.max_delay = std::max(out.max_delay, o.max_delay);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string report_csv(const DelayReport& report) {
  std::ostringstream os;
  os << "t,coord,erased,recovered_at,delay,status\n";
  std::vector<SymbolRecord> sorted = report.erased_symbols;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return std::tie(a.time, a.coord) < std::tie(b.time, b.coord); });
  auto rec = sorted.begin();
  for (std::size_t t = 0; t < report.horizon; ++t) {
    for (std::size_t c = 0; c < report.n; ++c) {
      const auto ti = static_cast<std::int64_t>(t);
      if (rec != sorted.end() && rec->time == ti && rec->coord == c) {
        os << t << ',' << c << ",1,";
        if (rec->recovered_at) os << *rec->recovered_at << ',' << *rec->delay();
        else os << ',';
        os << ',' << to_string(rec->status) << '\n';
        ++rec;
      } else {
        os << t << ',' << c << ",0," << t << ",0,received\n";
      }
    }
  }
  return os.str();
}

std::string report_summary_json(const DelayReport& report) {
  nlohmann::ordered_json j;
  j["max_delay"] = report.max_delay;
  j["failures"] = report.failures;
  j["packets"] = report.packets;
  const auto& p = report.params;
  nlohmann::ordered_json params;
  params["N"] = p.N;
  params["B"] = p.B;
  if (p.W) params["W"] = *p.W;
  else params["W"] = nullptr;
  params["T"] = p.T;
  params["n"] = p.n;
  params["k"] = p.k;
  j["params"] = params;
  j["horizon"] = report.horizon;
  j["erased_symbols"] = report.erased_symbols.size();
  j["mismatches"] = report.mismatches;
  j["late"] = report.late;
  return j.dump(2);
}

}  // namespace streamcode::streaming
