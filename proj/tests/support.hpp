#pragma once

#include <random>
#include <vector>

#include "streamcode/gf.hpp"

namespace testsupport {

inline streamcode::gf::FieldElement random_element(const streamcode::gf::Field& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<streamcode::gf::Residue> d(0, f.characteristic() - 1);
  streamcode::gf::Coeffs c(f.dimension());
  for (auto& r : c) r = d(rng);
  return f.from_coeffs(streamcode::gf::view(c));
}

inline std::vector<streamcode::gf::FieldElement> all_elements(const streamcode::gf::Field& f) {
  std::vector<streamcode::gf::FieldElement> out;
  for (std::uint64_t i = 0; i < f.order(); ++i) out.push_back(f.element(i));
  return out;
}

}  // namespace testsupport
