#include "streamcode/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace streamcode::gf {

namespace {

using Poly = std::vector<FieldElement>;  // lowest coefficient first

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

void trim(Poly& f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
}

// a mod f, f monic.
Poly poly_mod(Poly a, const Poly& f) {
  trim(a);
  const std::size_t d = f.size() - 1;
  while (a.size() > d) {
    const FieldElement c = a.back();
    const std::size_t shift = a.size() - 1 - d;
    for (std::size_t t = 0; t <= d; ++t) a[shift + t] -= c * f[t];
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, const Field& k) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return poly_mod(std::move(r), f);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, const Field& k) {
  Poly r{k.one()};
  r = poly_mod(r, f);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, f, k);
    base = poly_mulmod(base, base, f, k);
    e >>= 1;
  }
  return r;
}

// a^Q mod f where Q is the order of k, as dim(k) successive p-th powers.
Poly poly_frobenius(Poly a, const Poly& f, const Field& k) {
  for (std::size_t i = 0; i < k.dimension(); ++i) a = poly_powmod(std::move(a), k.characteristic(), f, k);
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b with b made monic
    const FieldElement lead_inv = b.back().inverse();
    for (auto& c : b) c *= lead_inv;
    a = poly_mod(std::move(a), b);
    std::swap(a, b);
  }
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Rabin's test over the field k.
bool is_irreducible(const Poly& f, const Field& k) {
  const std::size_t d = f.size() - 1;
  if (d == 0) return false;
  if (!f.back().is_one()) return false;
  if (d == 1) return true;
  const Poly x{k.zero(), k.one()};
  std::vector<Poly> frob(d + 1);
  frob[0] = poly_mod(x, f);
  for (std::size_t j = 1; j <= d; ++j) frob[j] = poly_frobenius(frob[j - 1], f, k);
  Poly diff = frob[d];
  diff.resize(std::max<std::size_t>(diff.size(), 2), k.zero());
  diff[1] -= k.one();
  trim(diff);
  if (!diff.empty()) return false;
  for (std::uint64_t r : prime_factors(d)) {
    Poly h = frob[d / r];
    h.resize(std::max<std::size_t>(h.size(), 2), k.zero());
    h[1] -= k.one();
    trim(h);
    if (poly_gcd(h, f).size() != 1) return false;
  }
  return true;
}

std::vector<Coeffs> least_irreducible(const Field& k, int degree) {
  const std::uint64_t q = k.order();
  if (q == 0) throw std::invalid_argument("make_field: subfield too large to enumerate");
  for (std::uint64_t idx = 0;; ++idx) {
    Poly f;
    std::uint64_t rest = idx;
    for (int j = 0; j < degree; ++j) {
      f.push_back(k.element(rest % q));
      rest /= q;
    }
    if (rest != 0) throw std::logic_error("make_field: no irreducible polynomial found");
    f.push_back(k.one());
    if (is_irreducible(f, k)) {
      std::vector<Coeffs> out;
      for (const auto& c : f) out.emplace_back(c.coeffs().begin(), c.coeffs().end());
      return out;
    }
  }
}

using CanonicalKey = std::pair<std::uint32_t, std::vector<int>>;

struct SpecLess {
  bool operator()(const FieldSpec& a, const FieldSpec& b) const {
    return std::tie(a.p, a.degrees, a.irreducible_polys) < std::tie(b.p, b.degrees, b.irreducible_polys);
  }
};

struct Registry {
  std::recursive_mutex mu;
  std::map<CanonicalKey, FieldPtr> canonical;
  std::map<FieldSpec, FieldPtr, SpecLess> by_spec;
};

Registry& registry() {
  static Registry* r = new Registry;
  return *r;
}

bool is_prime_field_spec(const std::vector<int>& degrees) { return degrees.size() == 1 && degrees[0] == 1; }

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % d == 0) return n == d;
  }
  std::uint64_t m = n - 1;
  int s = 0;
  while ((m & 1) == 0) {
    m >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, m, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime_at_least(std::uint64_t n) {
  if (n <= 2) return 2;
  while (!is_prime(n)) ++n;
  return n;
}

// ---------------------------------------------------------------------------
// Field

Field::Field(FieldSpec spec) : spec_(std::move(spec)) {
  dims_.push_back(1);
  if (!is_prime_field_spec(spec_.degrees)) {
    for (int d : spec_.degrees) dims_.push_back(dims_.back() * static_cast<std::size_t>(d));
  }
  order_ = 1;
  for (std::size_t i = 0; i < dims_.back(); ++i) {
    if (order_ > UINT64_MAX / spec_.p) {
      order_ = 0;
      break;
    }
    order_ *= spec_.p;
  }
}

FieldPtr make_field_from_spec(FieldSpec spec) {
  if (!is_prime(spec.p) || spec.p > (1U << 31)) throw std::invalid_argument("field characteristic must be a prime below 2^31");
  if (spec.degrees.empty()) throw std::invalid_argument("field needs at least one degree");
  for (int d : spec.degrees) {
    if (d <= 0) throw std::invalid_argument("extension degrees must be positive");
  }
  const bool prime = is_prime_field_spec(spec.degrees);
  if (prime && !spec.irreducible_polys.empty()) throw std::invalid_argument("prime field takes no modulus");
  if (!prime && spec.irreducible_polys.size() != spec.degrees.size())
    throw std::invalid_argument("one modulus per tower layer required");

  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  if (auto it = reg.by_spec.find(spec); it != reg.by_spec.end()) return it->second;

  std::vector<FieldPtr> prefixes;
  if (!prime) {
    for (std::size_t l = 0; l < spec.degrees.size(); ++l) {
      FieldPtr sub;
      // a leading degree-1 layer is the prime field itself
      if (l == 0 || (l == 1 && spec.degrees[0] == 1)) {
        sub = make_field_from_spec(FieldSpec{spec.p, {1}, {}});
      } else {
        FieldSpec sub_spec{spec.p,
                           std::vector<int>(spec.degrees.begin(), spec.degrees.begin() + static_cast<long>(l)),
                           std::vector<std::vector<Coeffs>>(spec.irreducible_polys.begin(),
                                                            spec.irreducible_polys.begin() + static_cast<long>(l))};
        sub = make_field_from_spec(std::move(sub_spec));
      }
      const auto& modulus = spec.irreducible_polys[l];
      if (modulus.size() != static_cast<std::size_t>(spec.degrees[l]) + 1)
        throw std::invalid_argument("modulus degree does not match layer degree");
      Poly f;
      for (const auto& c : modulus) {
        if (c.size() != sub->dimension()) throw std::invalid_argument("modulus coefficient has wrong length");
        for (Residue r : c) {
          if (r >= spec.p) throw std::invalid_argument("modulus coefficient out of range");
        }
        f.push_back(sub->from_coeffs(view(c)));
      }
      if (!is_irreducible(f, *sub)) throw std::invalid_argument("modulus is not monic irreducible");
      prefixes.push_back(std::move(sub));
    }
  }
  auto field = std::shared_ptr<Field>(new Field(spec));
  field->prefixes_ = std::move(prefixes);
  reg.by_spec.emplace(std::move(spec), field);
  return field;
}

FieldPtr make_field(std::uint32_t p, const std::vector<int>& degrees) {
  if (!is_prime(p)) throw std::invalid_argument("make_field: characteristic " + std::to_string(p) + " is not prime");
  if (degrees.empty()) throw std::invalid_argument("make_field: empty degree list");
  for (int d : degrees) {
    if (d <= 0) throw std::invalid_argument("make_field: degrees must be >= 1");
  }
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  CanonicalKey key{p, degrees};
  if (auto it = reg.canonical.find(key); it != reg.canonical.end()) return it->second;

  FieldSpec spec{p, degrees, {}};
  if (!is_prime_field_spec(degrees)) {
    for (std::size_t l = 0; l < degrees.size(); ++l) {
      FieldPtr sub = l == 0 ? make_field(p, {1})
                            : make_field(p, std::vector<int>(degrees.begin(), degrees.begin() + static_cast<long>(l)));
      spec.irreducible_polys.push_back(least_irreducible(*sub, degrees[l]));
    }
  }
  FieldPtr f = make_field_from_spec(std::move(spec));
  reg.canonical.emplace(std::move(key), f);
  return f;
}

FieldElement Field::zero() const { return FieldElement(this, Coeffs(dimension(), 0)); }

FieldElement Field::one() const {
  Coeffs c(dimension(), 0);
  c[0] = 1 % spec_.p;
  return FieldElement(this, std::move(c));
}

FieldElement Field::from_int(std::int64_t v) const {
  const auto p = static_cast<std::int64_t>(spec_.p);
  Coeffs c(dimension(), 0);
  c[0] = static_cast<Residue>(((v % p) + p) % p);
  return FieldElement(this, std::move(c));
}

FieldElement Field::from_coeffs(std::span<const Residue> flat) const {
  if (flat.size() != dimension()) throw std::invalid_argument("element coefficient vector has wrong length");
  for (Residue r : flat) {
    if (r >= spec_.p) throw std::invalid_argument("element residue out of range");
  }
  return FieldElement(this, Coeffs(flat.begin(), flat.end()));
}

FieldElement Field::element(std::uint64_t index) const {
  if (order_ != 0 && index >= order_) throw std::out_of_range("element index exceeds field order");
  Coeffs c(dimension(), 0);
  for (auto& r : c) {
    r = static_cast<Residue>(index % spec_.p);
    index /= spec_.p;
  }
  return FieldElement(this, std::move(c));
}

std::uint64_t Field::index_of(const FieldElement& x) const {
  std::uint64_t idx = 0;
  for (std::size_t i = dimension(); i-- > 0;) idx = idx * spec_.p + x.coeffs()[i];
  return idx;
}

FieldElement Field::generator() const {
  if (depth() == 0) return one();
  Coeffs c(dimension(), 0);
  // second coefficient of the top layer, which is 1 in the layer below
  c[dims_[depth() - 1]] = 1;
  return FieldElement(this, std::move(c));
}

FieldElement Field::basis_element(std::size_t i) const {
  if (depth() != 1) throw std::logic_error("basis_element requires a single-layer extension");
  if (i >= dimension()) throw std::out_of_range("basis index out of range");
  Coeffs c(dimension(), 0);
  c[i] = 1;
  return FieldElement(this, std::move(c));
}

FieldPtr Field::prefix(std::size_t levels) const {
  if (levels > depth()) throw std::out_of_range("prefix level beyond tower depth");
  if (levels < prefixes_.size()) return prefixes_[levels];
  return make_field_from_spec(spec_);
}

FieldElement Field::embed(const FieldElement& sub) const {
  if (sub.field().characteristic() != spec_.p) throw FieldMismatch("embed: characteristic differs");
  const std::size_t sd = sub.field().dimension();
  int level = -1;
  for (std::size_t l = 0; l <= depth(); ++l) {
    if (dims_[l] == sd && prefix(l)->same_as(sub.field())) level = static_cast<int>(l);
  }
  if (level < 0) throw FieldMismatch("embed: not a prefix subfield");
  Coeffs c(dimension(), 0);
  std::copy(sub.coeffs().begin(), sub.coeffs().end(), c.begin());
  return FieldElement(this, std::move(c));
}

bool Field::in_prefix(const FieldElement& x, std::size_t levels) const {
  const auto c = x.coeffs();
  return std::all_of(c.begin() + static_cast<long>(dims_.at(levels)), c.end(), [](Residue r) { return r == 0; });
}

int Field::level_of_order(std::uint64_t q) const {
  std::uint64_t o = spec_.p;
  std::size_t dim = 1;
  for (std::size_t l = 0; l <= depth(); ++l) {
    while (dim < dims_[l]) {
      if (o > UINT64_MAX / spec_.p) return -1;
      o *= spec_.p;
      ++dim;
    }
    if (o == q) return static_cast<int>(l);
  }
  return -1;
}

std::string Field::describe() const {
  std::ostringstream os;
  os << "F_" << spec_.p;
  if (dimension() > 1) os << "^" << dimension();
  if (spec_.degrees.size() > 1) {
    os << " (tower";
    for (int d : spec_.degrees) os << " " << d;
    os << ")";
  }
  return os.str();
}

void Field::add_into(std::span<Residue> a, std::span<const Residue> b) const {
  const Residue p = spec_.p;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Residue s = a[i] + b[i];
    a[i] = s >= p ? s - p : s;
  }
}

void Field::sub_into(std::span<Residue> a, std::span<const Residue> b) const {
  const Residue p = spec_.p;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + p - b[i];
}

void Field::mul(std::span<const Residue> a, std::span<const Residue> b, std::span<Residue> out) const {
  mul_level(depth(), a.data(), b.data(), out.data());
}

void Field::mul_level(std::size_t level, const Residue* a, const Residue* b, Residue* out) const {
  const std::uint64_t p = spec_.p;
  if (level == 0) {
    out[0] = static_cast<Residue>((static_cast<std::uint64_t>(a[0]) * b[0]) % p);
    return;
  }
  const std::size_t d = static_cast<std::size_t>(spec_.degrees[level - 1]);
  const auto& modulus = spec_.irreducible_polys[level - 1];
  const std::size_t sub = dims_[level - 1];

  if (sub == 1) {
    // Coefficients are residues; accumulate in 64 bits and reduce once.
    const bool lazy = p < (1U << 16) && d < 4096;
    boost::container::small_vector<std::uint64_t, 32> acc(2 * d - 1, 0);
    for (std::size_t i = 0; i < d; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        const std::uint64_t prod = static_cast<std::uint64_t>(a[i]) * b[j];
        acc[i + j] = lazy ? acc[i + j] + prod : (acc[i + j] + prod % p) % p;
      }
    }
    for (std::size_t deg = 2 * d - 1; deg-- > d;) {
      const std::uint64_t c = acc[deg] % p;
      if (c == 0) continue;
      for (std::size_t t = 0; t < d; ++t) {
        const std::uint64_t m = modulus[t][0];
        if (m == 0) continue;
        const std::uint64_t sub_term = ((p - m) * c) % p;
        acc[deg - d + t] = lazy ? acc[deg - d + t] + sub_term : (acc[deg - d + t] + sub_term) % p;
      }
    }
    for (std::size_t i = 0; i < d; ++i) out[i] = static_cast<Residue>(acc[i] % p);
    return;
  }

  Coeffs acc((2 * d - 1) * sub, 0);
  Coeffs tmp(sub, 0);
  for (std::size_t i = 0; i < d; ++i) {
    const Residue* ai = a + i * sub;
    if (std::all_of(ai, ai + sub, [](Residue r) { return r == 0; })) continue;
    for (std::size_t j = 0; j < d; ++j) {
      mul_level(level - 1, ai, b + j * sub, tmp.data());
      add_into(std::span(acc.data() + (i + j) * sub, sub), view(tmp));
    }
  }
  for (std::size_t deg = 2 * d - 1; deg-- > d;) {
    const Residue* c = acc.data() + deg * sub;
    if (std::all_of(c, c + sub, [](Residue r) { return r == 0; })) continue;
    Coeffs cc(c, c + sub);
    for (std::size_t t = 0; t < d; ++t) {
      mul_level(level - 1, cc.data(), modulus[t].data(), tmp.data());
      sub_into(std::span(acc.data() + (deg - d + t) * sub, sub), view(tmp));
    }
  }
  std::copy(acc.begin(), acc.begin() + static_cast<long>(d * sub), out);
}

Coeffs Field::inverse_coeffs(std::span<const Residue> a) const {
  const std::uint64_t p = spec_.p;
  const std::size_t n = dimension();
  if (n == 1) return Coeffs{static_cast<Residue>(powmod(a[0], p - 2, p))};
  // Solve (multiplication-by-a) x = 1 over F_p.
  std::vector<std::vector<std::uint64_t>> m(n, std::vector<std::uint64_t>(n + 1, 0));
  Coeffs basis(n, 0);
  Coeffs col(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(basis.begin(), basis.end(), 0);
    basis[j] = 1;
    mul_level(depth(), a.data(), basis.data(), col.data());
    for (std::size_t i = 0; i < n; ++i) m[i][j] = col[i];
  }
  m[0][n] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) throw DivisionByZero("inverse of zero");
    std::swap(m[piv], m[c]);
    const std::uint64_t inv = powmod(m[c][c], p - 2, p);
    for (auto& v : m[c]) v = (v * inv) % p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const std::uint64_t f = m[r][c];
      for (std::size_t k = c; k <= n; ++k) m[r][k] = (m[r][k] + (p - f) * m[c][k]) % p;
    }
  }
  Coeffs out(n, 0);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<Residue>(m[i][n]);
  return out;
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(const Field* field, Coeffs coeffs) : field_(field), coeffs_(std::move(coeffs)) {}

const Field& FieldElement::field() const {
  if (!field_) throw std::logic_error("use of an unbound field element");
  return *field_;
}

bool FieldElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Residue r) { return r == 0; });
}

bool FieldElement::is_one() const {
  if (coeffs_.empty() || coeffs_[0] != 1) return false;
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](Residue r) { return r == 0; });
}

void require_same_field(const FieldElement& a, const FieldElement& b) {
  if (a.field_ptr() == b.field_ptr() && a.valid()) return;
  if (!a.valid() || !b.valid() || !a.field().same_as(b.field()))
    throw FieldMismatch("operands belong to different fields");
}

FieldElement& FieldElement::operator+=(const FieldElement& rhs) {
  require_same_field(*this, rhs);
  field_->add_into(view(coeffs_), view(rhs.coeffs_));
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& rhs) {
  require_same_field(*this, rhs);
  field_->sub_into(view(coeffs_), view(rhs.coeffs_));
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& rhs) {
  require_same_field(*this, rhs);
  Coeffs out(coeffs_.size(), 0);
  field_->mul_level(field_->depth(), coeffs_.data(), rhs.coeffs_.data(), out.data());
  coeffs_ = std::move(out);
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& rhs) { return *this *= rhs.inverse(); }

FieldElement FieldElement::operator-() const {
  FieldElement z = field().zero();
  z -= *this;
  return z;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero");
  return FieldElement(field_, field_->inverse_coeffs(view(coeffs_)));
}

FieldElement FieldElement::pow(std::uint64_t e) const {
  FieldElement result = field().one();
  FieldElement base = *this;
  while (e) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  if (a.field_ != b.field_ && (!a.valid() || !b.valid() || !a.field().same_as(b.field()))) return false;
  return std::equal(a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(), b.coeffs_.end());
}

std::string FieldElement::to_string() const {
  if (!valid()) return "<unbound>";
  if (coeffs_.size() == 1) return std::to_string(coeffs_[0]);
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) os << (i ? "," : "") << coeffs_[i];
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------

FieldElement frobenius_power(const FieldElement& x, std::uint64_t i, std::uint64_t q) {
  const Field& f = x.field();
  const std::uint64_t p = f.characteristic();
  std::size_t e = 0;
  for (std::uint64_t v = q; v > 1; v /= p) {
    if (v % p != 0) throw std::invalid_argument("frobenius_power: q is not a power of the characteristic");
    ++e;
  }
  if (e == 0 || f.dimension() % e != 0) throw std::invalid_argument("frobenius_power: q is not a subfield order");
  FieldElement y = x;
  for (std::uint64_t r = 0; r < i; ++r) {
    for (std::size_t s = 0; s < e; ++s) y = y.pow(p);
  }
  return y;
}

std::vector<FieldElement> expand_over(const FieldElement& x, std::uint64_t q) {
  const Field& f = x.field();
  const int level = f.level_of_order(q);
  if (level < 0) throw FieldMismatch("expand_over: q is not the order of a tower subfield");
  FieldPtr sub = f.prefix(static_cast<std::size_t>(level));
  const std::size_t block = sub->dimension();
  std::vector<FieldElement> out;
  for (std::size_t off = 0; off < f.dimension(); off += block)
    out.push_back(sub->from_coeffs(x.coeffs().subspan(off, block)));
  return out;
}

}  // namespace streamcode::gf
