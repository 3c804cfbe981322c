// Exact arithmetic over prime fields and extension towers F_p ⊂ F_{p^d1} ⊂ ...
//
// An element of the top layer is stored as a flat vector of residues mod p.
// Layer l with degree d_l holds d_l coefficients, each an element of layer
// l-1 laid out contiguously, so an element of a prefix (sub)field embeds by
// zero-padding its flat vector.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace streamcode::gf {

using Residue = std::uint32_t;
using Coeffs = boost::container::small_vector<Residue, 16>;

inline std::span<const Residue> view(const Coeffs& c) { return {c.data(), c.size()}; }
inline std::span<Residue> view(Coeffs& c) { return {c.data(), c.size()}; }

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// Operands belong to different fields.
class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inverse or division by zero.
class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Description of a field tower. irreducible_polys[l] is the monic modulus
/// of layer l, lowest coefficient first; each coefficient is the flat
/// residue vector of an element of layer l-1.
struct FieldSpec {
  std::uint32_t p = 2;
  std::vector<int> degrees;
  std::vector<std::vector<Coeffs>> irreducible_polys;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(const Field* field, Coeffs coeffs);

  const Field& field() const;
  const Field* field_ptr() const { return field_; }
  std::span<const Residue> coeffs() const { return view(coeffs_); }
  bool valid() const { return field_ != nullptr; }

  bool is_zero() const;
  bool is_one() const;

  FieldElement& operator+=(const FieldElement& rhs);
  FieldElement& operator-=(const FieldElement& rhs);
  FieldElement& operator*=(const FieldElement& rhs);
  FieldElement& operator/=(const FieldElement& rhs);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
  FieldElement operator-() const;

  FieldElement inverse() const;
  FieldElement pow(std::uint64_t e) const;

  friend bool operator==(const FieldElement& a, const FieldElement& b);

  std::string to_string() const;

 private:
  const Field* field_ = nullptr;
  Coeffs coeffs_;

  friend class Field;
};

class Field {
 public:
  const FieldSpec& spec() const { return spec_; }
  std::uint32_t characteristic() const { return spec_.p; }
  /// Degree over the prime field.
  std::size_t dimension() const { return dims_.back(); }
  /// Number of tower layers above the prime field (0 for F_p itself).
  std::size_t depth() const { return spec_.degrees.size() == 1 && spec_.degrees[0] == 1 ? 0 : spec_.degrees.size(); }
  /// Field order, or 0 if it overflows 64 bits.
  std::uint64_t order() const { return order_; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(std::int64_t v) const;
  FieldElement from_coeffs(std::span<const Residue> flat) const;
  /// The i-th element under the fixed enumeration: flat residues are the
  /// base-p digits of i, least significant first.
  FieldElement element(std::uint64_t index) const;
  std::uint64_t index_of(const FieldElement& x) const;
  /// The adjoined root of the top layer's modulus (polynomial-basis generator).
  FieldElement generator() const;
  /// Element x^i in the polynomial basis of a single-layer extension.
  FieldElement basis_element(std::size_t i) const;

  /// Field made of the first `levels` layers (the prime field for 0).
  FieldPtr prefix(std::size_t levels) const;
  /// Lift an element of a prefix subfield into this field.
  FieldElement embed(const FieldElement& sub) const;
  /// True when the element lies in the prefix subfield of the given level.
  bool in_prefix(const FieldElement& x, std::size_t levels) const;
  /// Level whose prefix field has order q, or -1.
  int level_of_order(std::uint64_t q) const;

  bool same_as(const Field& other) const { return this == &other || spec_ == other.spec_; }

  std::string describe() const;

  // Raw kernels over flat residue spans; exposed for matrix code.
  void add_into(std::span<Residue> a, std::span<const Residue> b) const;
  void sub_into(std::span<Residue> a, std::span<const Residue> b) const;
  void mul(std::span<const Residue> a, std::span<const Residue> b, std::span<Residue> out) const;

 private:
  friend FieldPtr make_field_from_spec(FieldSpec spec);
  friend class FieldElement;

  explicit Field(FieldSpec spec);

  void mul_level(std::size_t level, const Residue* a, const Residue* b, Residue* out) const;
  Coeffs inverse_coeffs(std::span<const Residue> a) const;

  FieldSpec spec_;
  std::vector<std::size_t> dims_;  // dims_[l] = flat length of layer-l elements, dims_[0] = 1
  std::uint64_t order_ = 0;
  std::vector<FieldPtr> prefixes_;
};

/// Field tower over F_p with the given layer degrees. Each layer modulus is
/// the least monic irreducible polynomial over the layer below, comparing
/// coefficient vectors from the highest degree down with the subfield's
/// enumeration order. Instances are interned: equal inputs return the same
/// object.
FieldPtr make_field(std::uint32_t p, const std::vector<int>& degrees);

/// Field from an explicit spec (deserialization); moduli are checked.
FieldPtr make_field_from_spec(FieldSpec spec);

bool is_prime(std::uint64_t n);
std::uint64_t next_prime_at_least(std::uint64_t n);

/// x^(q^i), by i successive q-th powers. q must be the order of a subfield.
FieldElement frobenius_power(const FieldElement& x, std::uint64_t i, std::uint64_t q);

/// Coordinates of x over the prefix subfield of order q.
std::vector<FieldElement> expand_over(const FieldElement& x, std::uint64_t q);

void require_same_field(const FieldElement& a, const FieldElement& b);

}  // namespace streamcode::gf
