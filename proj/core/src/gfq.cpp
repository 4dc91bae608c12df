#include "lfw/gfq.hpp"

#include <string>

namespace lfw {
namespace {

using Poly = std::vector<unsigned>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo the monic polynomial m over GF(p).
Poly poly_mod(Poly a, const Poly& m, unsigned p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const unsigned lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = (a[shift + i] + (p - lead) * m[i]) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b, unsigned p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}

unsigned ipow(unsigned b, unsigned e) {
  unsigned r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_irreducible(unsigned p, std::span<const unsigned> poly) {
  Poly f(poly.begin(), poly.end());
  trim(f);
  if (f.size() < 2 || f.back() != 1) return false;
  const unsigned deg = static_cast<unsigned>(f.size() - 1);
  if (deg == 1) return true;
  // Exhaustive trial division by every monic polynomial of degree <= deg/2.
  for (unsigned d = 1; d <= deg / 2; ++d) {
    const unsigned count = ipow(p, d);
    for (unsigned idx = 0; idx < count; ++idx) {
      Poly g(d + 1, 0);
      unsigned t = idx;
      for (unsigned i = 0; i < d; ++i) {
        g[i] = t % p;
        t /= p;
      }
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<unsigned> default_modulus(unsigned p, unsigned c) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (c == 1) return {0, 1};
  const unsigned count = ipow(p, c);
  for (unsigned idx = 0; idx < count; ++idx) {
    Poly f(c + 1, 0);
    unsigned t = idx;
    for (unsigned i = 0; i < c; ++i) {
      f[i] = t % p;
      t /= p;
    }
    f[c] = 1;
    if (is_irreducible(p, f)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

FieldConfigPtr FieldConfig::make(unsigned p, unsigned c, std::vector<unsigned> modulus) {
  if (!is_prime(p) || p > kMaxPrime) {
    throw std::invalid_argument("p must be a prime <= " + std::to_string(kMaxPrime));
  }
  if (c < 1 || c > kMaxDegree) {
    throw std::invalid_argument("c must be in [1, " + std::to_string(kMaxDegree) + "]");
  }
  if (ipow(p, c) > kMaxOrder) {
    throw std::invalid_argument("q = p^c must not exceed " + std::to_string(kMaxOrder));
  }
  if (modulus.empty()) {
    modulus = default_modulus(p, c);
  } else {
    for (unsigned& m : modulus) {
      if (m >= p) throw std::invalid_argument("modulus coefficient out of range");
    }
    if (modulus.size() != c + 1 || modulus.back() != 1) {
      throw std::invalid_argument("modulus must be monic of degree c");
    }
    if (!is_irreducible(p, modulus)) throw std::invalid_argument("modulus is reducible");
  }
  return FieldConfigPtr(new FieldConfig(p, c, std::move(modulus)));
}

FieldConfig::FieldConfig(unsigned p, unsigned c, std::vector<unsigned> modulus)
    : p_(p), c_(c), q_(ipow(p, c)), modulus_(std::move(modulus)) {
  add_.resize(q_ * q_);
  mul_.resize(q_ * q_);
  neg_.resize(q_);
  inv_.assign(q_, 0);
  trace_.resize(q_);

  std::vector<Poly> polys(q_);
  for (unsigned a = 0; a < q_; ++a) {
    polys[a] = coords(static_cast<FqCode>(a));
    trim(polys[a]);
  }
  auto encode_poly = [&](const Poly& f) {
    std::vector<unsigned> cs(c_, 0);
    for (std::size_t i = 0; i < f.size(); ++i) cs[i] = f[i];
    return encode(cs);
  };

  for (unsigned a = 0; a < q_; ++a) {
    const auto ca = coords(static_cast<FqCode>(a));
    std::vector<unsigned> cn(c_);
    for (unsigned i = 0; i < c_; ++i) cn[i] = (p_ - ca[i]) % p_;
    neg_[a] = encode(cn);
    for (unsigned b = 0; b < q_; ++b) {
      const auto cb = coords(static_cast<FqCode>(b));
      std::vector<unsigned> cs(c_);
      for (unsigned i = 0; i < c_; ++i) cs[i] = (ca[i] + cb[i]) % p_;
      add_[a * q_ + b] = encode(cs);
      mul_[a * q_ + b] = encode_poly(poly_mod(poly_mul(polys[a], polys[b], p_), modulus_, p_));
    }
  }
  for (unsigned a = 1; a < q_; ++a)
    for (unsigned b = 1; b < q_; ++b)
      if (mul_[a * q_ + b] == 1) inv_[a] = static_cast<FqCode>(b);

  for (unsigned a = 0; a < q_; ++a) {
    // Tr(a) = a + a^p + ... + a^{p^{c-1}}
    FqCode power = static_cast<FqCode>(a);
    FqCode sum = 0;
    for (unsigned i = 0; i < c_; ++i) {
      sum = add(sum, power);
      FqCode next = 1;
      for (unsigned e = 0; e < p_; ++e) next = mul(next, power);
      power = next;
    }
    if (sum >= p_) throw std::logic_error("trace left the prime field");
    trace_[a] = sum;
  }
}

FqCode FieldConfig::inv(FqCode a) const {
  if (a == 0) throw std::domain_error("inverse of zero in GF(q)");
  return inv_[a];
}

std::vector<unsigned> FieldConfig::coords(FqCode a) const {
  std::vector<unsigned> out(c_);
  unsigned t = a;
  for (unsigned i = 0; i < c_; ++i) {
    out[i] = t % p_;
    t /= p_;
  }
  return out;
}

FqCode FieldConfig::encode(std::span<const unsigned> coords) const {
  if (coords.size() != c_) throw std::invalid_argument("coordinate vector must have length c");
  unsigned code = 0;
  for (std::size_t i = coords.size(); i-- > 0;) {
    if (coords[i] >= p_) throw std::invalid_argument("coordinate out of range [0, p)");
    code = code * p_ + coords[i];
  }
  return static_cast<FqCode>(code);
}

void require_same_field(const FieldConfig& a, const FieldConfig& b) {
  if (!a.same_as(b)) throw FieldMismatch();
}

FqElement::FqElement(FieldConfigPtr field, FqCode code) : field_(std::move(field)), code_(code) {
  if (!field_) throw std::invalid_argument("null field");
  if (code_ >= field_->q()) throw std::invalid_argument("element code out of range");
}

FqElement FqElement::from_coords(FieldConfigPtr field, std::span<const unsigned> coords) {
  const FqCode code = field->encode(coords);
  return {std::move(field), code};
}

FqElement FqElement::operator+(const FqElement& o) const {
  require_same_field(*field_, *o.field_);
  return {field_, field_->add(code_, o.code_)};
}

FqElement FqElement::operator-(const FqElement& o) const {
  require_same_field(*field_, *o.field_);
  return {field_, field_->sub(code_, o.code_)};
}

FqElement FqElement::operator-() const { return {field_, field_->neg(code_)}; }

FqElement FqElement::operator*(const FqElement& o) const {
  require_same_field(*field_, *o.field_);
  return {field_, field_->mul(code_, o.code_)};
}

bool FqElement::operator==(const FqElement& o) const {
  return field_->same_as(*o.field_) && code_ == o.code_;
}

FqElement gf_mul(const FqElement& a, const FqElement& b) { return a * b; }

FqElement gf_inv(const FqElement& a) { return {a.field(), a.field()->inv(a.code())}; }

unsigned gf_trace(const FqElement& a) { return a.field()->trace(a.code()); }

FqElement gf_pow(const FqElement& a, unsigned e) {
  FqElement r = FqElement::one(a.field());
  for (unsigned i = 0; i < e; ++i) r = r * a;
  return r;
}

}  // namespace lfw
