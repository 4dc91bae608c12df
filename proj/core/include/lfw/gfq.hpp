#pragma once

// Residue field GF(q), q = p^c, in the power basis of a root of the modulus.
//
// Elements are addressed by a compact code: the coordinates (a_0, ..., a_{c-1})
// in the basis 1 = eps_0, eps_1, ..., eps_{c-1} are read as base-p digits,
// code = a_0 + a_1 p + ... + a_{c-1} p^{c-1}. With this encoding the coset
// representative u(n) for 0 <= n < q is exactly (element with code n) * p^-1.

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace lfw {

constexpr unsigned kMaxPrime = 13;
constexpr unsigned kMaxDegree = 4;
constexpr unsigned kMaxOrder = 256;

using FqCode = std::uint16_t;

class FieldMismatch : public std::invalid_argument {
 public:
  FieldMismatch() : std::invalid_argument("operands belong to different fields") {}
};

class FieldConfig;
using FieldConfigPtr = std::shared_ptr<const FieldConfig>;

bool is_prime(unsigned n);

/// Monic polynomial over GF(p), coefficients low to high.
bool is_irreducible(unsigned p, std::span<const unsigned> poly);

/// First monic irreducible polynomial of degree c over GF(p) in the order
/// that enumerates the low coefficients fastest.
std::vector<unsigned> default_modulus(unsigned p, unsigned c);

class FieldConfig {
 public:
  /// Builds all arithmetic tables. An empty modulus selects default_modulus.
  static FieldConfigPtr make(unsigned p, unsigned c, std::vector<unsigned> modulus = {});

  unsigned p() const { return p_; }
  unsigned c() const { return c_; }
  unsigned q() const { return q_; }
  const std::vector<unsigned>& modulus() const { return modulus_; }

  FqCode add(FqCode a, FqCode b) const { return add_[a * q_ + b]; }
  FqCode mul(FqCode a, FqCode b) const { return mul_[a * q_ + b]; }
  FqCode neg(FqCode a) const { return neg_[a]; }
  FqCode sub(FqCode a, FqCode b) const { return add(a, neg(b)); }
  /// Throws std::domain_error for a = 0.
  FqCode inv(FqCode a) const;
  /// Absolute trace to GF(p), as a residue in [0, p).
  unsigned trace(FqCode a) const { return trace_[a]; }

  std::vector<unsigned> coords(FqCode a) const;
  FqCode encode(std::span<const unsigned> coords) const;

  bool same_as(const FieldConfig& other) const {
    return this == &other || (p_ == other.p_ && c_ == other.c_ && modulus_ == other.modulus_);
  }

 private:
  FieldConfig(unsigned p, unsigned c, std::vector<unsigned> modulus);

  unsigned p_;
  unsigned c_;
  unsigned q_;
  std::vector<unsigned> modulus_;
  std::vector<FqCode> add_;
  std::vector<FqCode> mul_;
  std::vector<FqCode> neg_;
  std::vector<FqCode> inv_;
  std::vector<unsigned> trace_;
};

void require_same_field(const FieldConfig& a, const FieldConfig& b);

/// Value type for a single GF(q) element bound to its field.
class FqElement {
 public:
  FqElement(FieldConfigPtr field, FqCode code);
  static FqElement zero(FieldConfigPtr field) { return {std::move(field), 0}; }
  static FqElement one(FieldConfigPtr field) { return {std::move(field), 1}; }
  static FqElement from_coords(FieldConfigPtr field, std::span<const unsigned> coords);

  FqCode code() const { return code_; }
  std::vector<unsigned> coords() const { return field_->coords(code_); }
  bool is_zero() const { return code_ == 0; }
  const FieldConfigPtr& field() const { return field_; }

  FqElement operator+(const FqElement& o) const;
  FqElement operator-(const FqElement& o) const;
  FqElement operator-() const;
  FqElement operator*(const FqElement& o) const;

  bool operator==(const FqElement& o) const;

 private:
  FieldConfigPtr field_;
  FqCode code_;
};

FqElement gf_mul(const FqElement& a, const FqElement& b);
FqElement gf_inv(const FqElement& a);
unsigned gf_trace(const FqElement& a);
FqElement gf_pow(const FqElement& a, unsigned e);

}  // namespace lfw
