#include "streamcode/channel.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace streamcode::channel {

ErasurePattern ErasurePattern::make(std::size_t horizon, std::vector<std::size_t> erased) {
  std::sort(erased.begin(), erased.end());
  if (std::adjacent_find(erased.begin(), erased.end()) != erased.end())
    throw std::invalid_argument("erasure pattern has duplicate indices");
  if (!erased.empty() && erased.back() >= horizon)
    throw std::invalid_argument("erasure index " + std::to_string(erased.back()) + " outside horizon " +
                                std::to_string(horizon));
  return ErasurePattern{horizon, std::move(erased)};
}

bool ErasurePattern::contains(std::size_t t) const { return std::binary_search(erased.begin(), erased.end(), t); }

namespace {

bool window_ok(const std::vector<std::size_t>& e, std::size_t lo, std::size_t hi, int N, int B) {
  const auto first = std::lower_bound(e.begin(), e.end(), lo);
  const auto last = std::upper_bound(first, e.end(), hi);
  const auto count = static_cast<std::size_t>(last - first);
  if (count == 0) return true;
  if (count <= static_cast<std::size_t>(std::max(N, 0))) return true;
  const std::size_t span = *(last - 1) - *first + 1;
  return span <= static_cast<std::size_t>(std::max(B, 0));
}

// Windows that contain slot x.
bool windows_through_ok(const std::vector<std::size_t>& e, std::size_t x, std::size_t horizon, int N, int B, int W) {
  const auto w = static_cast<std::size_t>(W);
  if (horizon < w) return window_ok(e, 0, horizon - 1, N, B);
  const std::size_t t_lo = x + 1 >= w ? x + 1 - w : 0;
  const std::size_t t_hi = std::min(x, horizon - w);
  for (std::size_t t = t_lo; t <= t_hi; ++t) {
    if (!window_ok(e, t, t + w - 1, N, B)) return false;
  }
  return true;
}

}  // namespace

bool validate_pattern(const ErasurePattern& p, int N, int B, int W) {
  if (W < 1) throw std::invalid_argument("validate_pattern: W must be at least 1");
  if (p.erased.empty()) return true;
  for (std::size_t x : p.erased) {
    if (!windows_through_ok(p.erased, x, p.horizon, N, B, W)) return false;
  }
  return true;
}

ErasurePattern random_pattern(int N, int B, int W, std::size_t horizon, std::uint64_t seed, double burst_bias) {
  if (N < 1 || B < 1 || W < 1) throw std::invalid_argument("random_pattern: N, B and W must be positive");
  if (N > B) throw std::invalid_argument("random_pattern: N must not exceed B");
  if (!(burst_bias >= 0.0 && burst_bias <= 1.0)) throw std::invalid_argument("random_pattern: burst_bias outside [0, 1]");

  std::mt19937_64 rng(seed);
  const auto w = static_cast<std::size_t>(W);
  std::vector<std::size_t> erased;
  std::size_t t = std::uniform_int_distribution<std::size_t>(0, w - 1)(rng);
  while (t < horizon) {
    std::size_t end = t;
    if (std::bernoulli_distribution(burst_bias)(rng)) {
      const auto len = std::uniform_int_distribution<std::size_t>(1, static_cast<std::size_t>(B))(rng);
      end = t + len - 1;
      for (std::size_t s = t; s <= end && s < horizon; ++s) erased.push_back(s);
    } else {
      const auto count = std::uniform_int_distribution<std::size_t>(1, static_cast<std::size_t>(N))(rng);
      std::vector<std::size_t> offsets(w - 1);
      for (std::size_t s = 0; s + 1 < w; ++s) offsets[s] = s + 1;
      std::shuffle(offsets.begin(), offsets.end(), rng);
      offsets.resize(std::min(count - 1, offsets.size()));
      offsets.push_back(0);
      for (std::size_t off : offsets) {
        if (t + off < horizon) erased.push_back(t + off);
        end = std::max(end, t + off);
      }
    }
    t = end + w + std::uniform_int_distribution<std::size_t>(0, w)(rng);
  }
  ErasurePattern p = ErasurePattern::make(horizon, std::move(erased));
  if (!validate_pattern(p, N, B, W)) throw std::logic_error("random_pattern produced an inadmissible pattern");
  return p;
}

// ---------------------------------------------------------------------------

PatternEnumerator::PatternEnumerator(int N, int B, int W, std::size_t horizon)
    : N_(N), B_(B), W_(W), horizon_(horizon) {
  if (W < 1) throw std::invalid_argument("enumerate_patterns: W must be at least 1");
  if (horizon > kMaxEnumerationHorizon)
    throw std::invalid_argument("enumerate_patterns: horizon " + std::to_string(horizon) + " exceeds " +
                                std::to_string(kMaxEnumerationHorizon));
}

bool PatternEnumerator::admissible_with_last() const {
  return windows_through_ok(current_, current_.back(), horizon_, N_, B_, W_);
}

std::optional<ErasurePattern> PatternEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    return ErasurePattern{horizon_, {}};
  }
  // Descend: append the smallest admissible successor.
  const std::size_t first = current_.empty() ? 0 : current_.back() + 1;
  for (std::size_t x = first; x < horizon_; ++x) {
    current_.push_back(x);
    if (admissible_with_last()) return ErasurePattern{horizon_, current_};
    current_.pop_back();
  }
  // Backtrack: advance the last element, popping exhausted levels.
  while (!current_.empty()) {
    std::size_t x = current_.back() + 1;
    current_.pop_back();
    for (; x < horizon_; ++x) {
      current_.push_back(x);
      if (admissible_with_last()) return ErasurePattern{horizon_, current_};
      current_.pop_back();
    }
  }
  done_ = true;
  return std::nullopt;
}

std::vector<ErasurePattern> enumerate_patterns(int N, int B, int W, std::size_t horizon) {
  std::vector<ErasurePattern> out;
  PatternEnumerator it(N, B, W, horizon);
  while (auto p = it.next()) out.push_back(std::move(*p));
  return out;
}

ErasurePattern guarded_burst_pattern(int B, int guard, int count, std::size_t horizon) {
  if (B < 1 || guard < 0 || count < 0) throw std::invalid_argument("guarded_burst_pattern: invalid arguments");
  std::vector<std::size_t> erased;
  const auto period = static_cast<std::size_t>(B + guard);
  for (int c = 0; c < count; ++c) {
    const std::size_t start = static_cast<std::size_t>(c) * period;
    if (start + static_cast<std::size_t>(B) > horizon)
      throw std::invalid_argument("guarded_burst_pattern: " + std::to_string(count) + " bursts do not fit in horizon " +
                                  std::to_string(horizon));
    for (int s = 0; s < B; ++s) erased.push_back(start + static_cast<std::size_t>(s));
  }
  return ErasurePattern::make(horizon, std::move(erased));
}

std::string pattern_to_json(const ErasurePattern& p) {
  nlohmann::json j;
  j["horizon"] = p.horizon;
  j["erased"] = p.erased;
  return j.dump();
}

ErasurePattern parse_pattern(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto j = nlohmann::json::parse(text);
    if (!j.contains("horizon") || !j.contains("erased")) throw std::invalid_argument("pattern JSON needs horizon and erased");
    return ErasurePattern::make(j.at("horizon").get<std::size_t>(), j.at("erased").get<std::vector<std::size_t>>());
  }
  std::istringstream in(text);
  std::string line;
  std::optional<std::size_t> horizon;
  std::vector<std::size_t> erased;
  while (std::getline(in, line)) {
    const auto s = line.find_first_not_of(" \t\r");
    if (s == std::string::npos) continue;
    if (line[s] == '#') {
      const auto pos = line.find("horizon=");
      if (pos != std::string::npos) horizon = std::stoull(line.substr(pos + 8));
      continue;
    }
    std::size_t used = 0;
    const long long v = std::stoll(line.substr(s), &used);
    if (v < 0) throw std::invalid_argument("negative erasure index in pattern file");
    erased.push_back(static_cast<std::size_t>(v));
  }
  if (!horizon) throw std::invalid_argument("pattern text lacks a '# horizon=H' header");
  return ErasurePattern::make(*horizon, std::move(erased));
}

ErasurePattern load_pattern_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pattern file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pattern(ss.str());
}

}  // namespace streamcode::channel
