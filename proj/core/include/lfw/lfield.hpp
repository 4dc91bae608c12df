#pragma once

// Finite-support Laurent series over GF(q) in the prime element p.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lfw/cyclo.hpp"
#include "lfw/gfq.hpp"

namespace lfw {

/// valuation(0); ordered above every finite valuation.
constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

using Digit = std::pair<int, FqCode>;

class FieldElement {
 public:
  explicit FieldElement(FieldConfigPtr field);
  /// Digits may be unsorted, repeated or zero; they are summed and canonicalized.
  FieldElement(FieldConfigPtr field, std::vector<Digit> digits);

  static FieldElement monomial(FieldConfigPtr field, int exponent, FqCode code = 1);
  static FieldElement from_integer(FieldConfigPtr field, long n);

  const FieldConfigPtr& field() const { return field_; }
  /// Sorted by exponent, all codes nonzero.
  const std::vector<Digit>& digits() const { return digits_; }
  FqCode digit(int exponent) const;

  bool is_zero() const { return digits_.empty(); }
  int valuation() const { return digits_.empty() ? kInfiniteValuation : digits_.front().first; }
  /// log_q |x| = -valuation; meaningless for zero.
  int log_abs() const { return -valuation(); }
  /// Highest exponent carrying a digit; throws for zero.
  int top_exponent() const;

  /// Keeps the digits with exponent < k (the canonical ball center for scale k).
  FieldElement truncated_below(int k) const;
  /// Keeps the digits with exponent >= k.
  FieldElement tail_from(int k) const;
  /// Multiplication by p^j.
  FieldElement shifted(int j) const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement scaled(FqCode c) const;

  bool operator==(const FieldElement& o) const;
  bool operator<(const FieldElement& o) const { return digits_ < o.digits_; }

 private:
  FieldConfigPtr field_;
  std::vector<Digit> digits_;
};

FieldElement field_add(const FieldElement& x, const FieldElement& y);
FieldElement field_mul(const FieldElement& x, const FieldElement& y);
FieldElement field_neg(const FieldElement& x);

/// Coset representative u(n): base-q digit b_k of n sits at exponent -(k+1).
FieldElement u_of_index(const FieldConfigPtr& field, std::uint64_t n);

/// Inverse of u_of_index. Throws std::invalid_argument when x has a digit at
/// a non-negative exponent and std::overflow_error past 64 bits.
std::uint64_t index_of_u(const FieldElement& x);

struct FractionalSplit {
  std::uint64_t index;
  FieldElement remainder;
};

/// x = u(index) + remainder with remainder in O.
FractionalSplit fractional_part(const FieldElement& x);

/// Exponent t in [0, p) with chi(y x) = zeta_p^t.
unsigned character_exponent(const FieldElement& y, const FieldElement& x);
CycloScalar character(const FieldElement& y, const FieldElement& x);

std::string to_string(const FieldElement& x);
std::ostream& operator<<(std::ostream& os, const FieldElement& x);

/// Grammar: sums and differences of products of factors, where a factor is an
/// integer, a digit literal [a0,...,a_{c-1}], p or p^k (k may be negative) or u(n).
FieldElement parse_element(const FieldConfigPtr& field, std::string_view text);

}  // namespace lfw
