#include "streamcode/conformance.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <unordered_map>

namespace streamcode::conformance {

std::string to_string(Clause c) { return c == Clause::Isolated ? "isolated" : "burst"; }

std::size_t delta_i(std::size_t i, int T, std::size_t n) {
  if (i >= n) throw std::out_of_range("delta_i: coordinate outside [0, n-1]");
  if (T < 0) throw std::invalid_argument("delta_i: negative delay");
  return std::min(i + static_cast<std::size_t>(T), n - 1);
}

unsigned default_threads() {
  if (const char* env = std::getenv("STREAMCODE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------

ErasureSetEnumerator::ErasureSetEnumerator(std::size_t n, int N, int B, std::size_t i)
    : n_(n), N_(static_cast<std::size_t>(std::max(N, 0))), B_(static_cast<std::size_t>(std::max(B, 0))), i_(i) {
  if (i >= n) throw std::out_of_range("erasure enumeration: coordinate outside [0, n-1]");
  if (N_ == 0) isolated_done_ = true;
}

bool ErasureSetEnumerator::advance_combination() {
  // comb_ holds indices into [0, n-1) (the coordinates other than i).
  const std::size_t m = n_ - 1;
  const std::size_t s = comb_.size();
  for (std::size_t pos = s; pos-- > 0;) {
    if (comb_[pos] < m - s + pos) {
      ++comb_[pos];
      for (std::size_t q = pos + 1; q < s; ++q) comb_[q] = comb_[q - 1] + 1;
      return true;
    }
  }
  return false;
}

std::optional<ErasureSet> ErasureSetEnumerator::next() {
  while (!isolated_done_) {
    if (comb_fresh_) {
      comb_fresh_ = false;
      if (size_ - 1 > n_ - 1) {
        isolated_done_ = true;
        break;
      }
      comb_.resize(size_ - 1);
      for (std::size_t q = 0; q < comb_.size(); ++q) comb_[q] = q;
    } else if (!advance_combination()) {
      ++size_;
      comb_fresh_ = true;
      if (size_ > N_ || size_ > n_) isolated_done_ = true;
      continue;
    }
    ErasureSet out{Clause::Isolated, {}};
    out.erased.reserve(size_);
    for (std::size_t idx : comb_) out.erased.push_back(idx < i_ ? idx : idx + 1);
    out.erased.push_back(i_);
    std::sort(out.erased.begin(), out.erased.end());
    return out;
  }

  while (len_ <= B_ && len_ <= n_) {
    const std::size_t lo = i_ + 1 >= len_ ? i_ + 1 - len_ : 0;
    const std::size_t hi = std::min(i_, n_ - len_);
    if (!burst_started_) {
      burst_started_ = true;
      start_ = lo;
    } else {
      ++start_;
    }
    if (start_ > hi) {
      ++len_;
      burst_started_ = false;
      continue;
    }
    ErasureSet out{Clause::Burst, {}};
    for (std::size_t t = start_; t < start_ + len_; ++t) out.erased.push_back(t);
    return out;
  }
  return std::nullopt;
}

std::vector<ErasureSet> enumerate_erasure_sets(std::size_t n, int N, int B, std::size_t i) {
  std::vector<ErasureSet> out;
  ErasureSetEnumerator it(n, N, B, i);
  while (auto s = it.next()) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------

std::optional<RecoveryCertificate> recoverable(const gf::Matrix& generator, std::size_t i,
                                               std::vector<std::size_t> observed) {
  const std::size_t n = generator.cols();
  if (i >= n) throw std::out_of_range("recoverable: coordinate outside [0, n-1]");
  std::sort(observed.begin(), observed.end());
  observed.erase(std::unique(observed.begin(), observed.end()), observed.end());
  if (!observed.empty() && observed.back() >= n) throw std::out_of_range("recoverable: observed coordinate out of range");

  const gf::Field& f = generator.field();
  RecoveryCertificate cert;
  cert.coordinate = i;
  cert.observed = observed;
  if (auto it = std::find(observed.begin(), observed.end(), i); it != observed.end()) {
    cert.lambda.assign(observed.size(), f.zero());
    cert.lambda[static_cast<std::size_t>(it - observed.begin())] = f.one();
    return cert;
  }
  const auto target = generator.column(i);
  if (observed.empty()) {
    if (std::all_of(target.begin(), target.end(), [](const auto& x) { return x.is_zero(); })) return cert;
    return std::nullopt;
  }
  auto lambda = gf::solve_in_span(generator.select_columns(observed), target);
  if (!lambda) return std::nullopt;
  cert.lambda = std::move(*lambda);
  return cert;
}

std::optional<RecoveryCertificate> recoverable(const BlockCode& code, std::size_t i, std::vector<std::size_t> observed) {
  return recoverable(code.generator, i, std::move(observed));
}

namespace {

struct CoordinateResult {
  std::vector<Violation> violations;
  std::size_t violation_count = 0;
  std::size_t isolated = 0;
  std::size_t burst = 0;
};

CoordinateResult check_coordinate(const gf::Matrix& g, int N, int B, int T, std::size_t i, std::size_t cap) {
  const std::size_t n = g.cols();
  const std::size_t last = delta_i(i, T, n);
  CoordinateResult res;
  std::unordered_map<std::uint64_t, bool> seen;
  const bool cacheable = n <= 64;

  ErasureSetEnumerator it(n, N, B, i);
  while (auto set = it.next()) {
    (set->clause == Clause::Isolated ? res.isolated : res.burst)++;
    std::vector<std::size_t> observed;
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j <= last; ++j) {
      if (!std::binary_search(set->erased.begin(), set->erased.end(), j)) {
        observed.push_back(j);
        if (cacheable) mask |= std::uint64_t{1} << j;
      }
    }
    bool ok;
    if (cacheable) {
      auto found = seen.find(mask);
      if (found != seen.end()) {
        ok = found->second;
      } else {
        ok = recoverable(g, i, observed).has_value();
        seen.emplace(mask, ok);
      }
    } else {
      ok = recoverable(g, i, observed).has_value();
    }
    if (!ok) {
      ++res.violation_count;
      if (res.violations.size() < cap) res.violations.push_back(Violation{i, set->erased, set->clause});
    }
  }
  return res;
}

}  // namespace

ConformanceReport conforms(const gf::Matrix& generator, int N, int B, int T, const ConformOptions& opts) {
  ConformanceReport report;
  report.N = N;
  report.B = B;
  report.T = T;
  report.n = static_cast<int>(generator.cols());
  report.k = static_cast<int>(generator.rows());
  if (generator.cols() == 0) report.reason = "code has no coordinates";
  else if (N < 1) report.reason = "N must be at least 1";
  else if (B < 1) report.reason = "B must be at least 1";
  else if (N > B) report.reason = "N must not exceed B";
  else if (T < 0) report.reason = "T must be non-negative";
  if (!report.reason.empty()) return report;

  const std::size_t n = generator.cols();
  std::vector<CoordinateResult> results(n);
  const unsigned threads = std::min<unsigned>(opts.threads ? opts.threads : default_threads(), static_cast<unsigned>(n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = check_coordinate(generator, N, B, T, i, opts.violation_cap);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++)
          results[i] = check_coordinate(generator, N, B, T, i, opts.violation_cap);
      });
    }
  }

  for (auto& r : results) {
    report.isolated_checked += r.isolated;
    report.burst_checked += r.burst;
    report.violation_count += r.violation_count;
    for (auto& v : r.violations) {
      if (report.violations.size() < opts.violation_cap) report.violations.push_back(std::move(v));
    }
  }
  report.pass = report.violation_count == 0;
  return report;
}

ConformanceReport conforms(const BlockCode& code, int N, int B, int T, const ConformOptions& opts) {
  return conforms(code.generator, N, B, T, opts);
}

}  // namespace streamcode::conformance
