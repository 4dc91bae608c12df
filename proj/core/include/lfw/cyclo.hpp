#pragma once

// Exact scalars in Q(zeta_p), optionally times sqrt(q).
//
// A scalar is (a_0 + a_1 zeta + ... + a_{p-2} zeta^{p-2}) * q^{e/2}. Even parts
// of e are folded into the rational coefficients as they arise, so the stored
// grade is 0 or 1, and always 0 when c is even (sqrt(q) = p^{c/2}).

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lfw/rational.hpp"

namespace lfw {

class GradeMismatch : public std::invalid_argument {
 public:
  GradeMismatch() : std::invalid_argument("cannot add scalars with different sqrt(q) grades") {}
};

class CycloScalar {
 public:
  /// Zero of Q(zeta_p) for the field of order p^c.
  CycloScalar(unsigned p, unsigned c);

  static CycloScalar from_rational(unsigned p, unsigned c, const Rational& r);
  static CycloScalar zeta_power(unsigned p, unsigned c, long k);
  /// q^{e/2}.
  static CycloScalar qhalf_power(unsigned p, unsigned c, int e);

  unsigned p() const { return p_; }
  unsigned c() const { return c_; }
  /// Residual sqrt(q) exponent, 0 or 1.
  int grade() const { return grade_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  /// Equal to its own complex conjugate.
  bool is_real() const;
  bool is_rational() const;
  /// Throws std::domain_error unless is_rational().
  Rational rational_value() const;

  /// Sign of a real scalar, decided exactly. Throws std::domain_error if not real.
  int sign() const;
  /// Largest integer <= value for a real scalar.
  long floor() const;

  CycloScalar operator+(const CycloScalar& o) const;
  CycloScalar operator-(const CycloScalar& o) const;
  CycloScalar operator-() const;
  CycloScalar operator*(const CycloScalar& o) const;
  CycloScalar& operator+=(const CycloScalar& o);
  CycloScalar& operator*=(const CycloScalar& o);
  CycloScalar scaled(const Rational& r) const;
  /// Complex conjugate: zeta -> zeta^-1.
  CycloScalar conj() const;

  bool operator==(const CycloScalar& o) const;
  bool operator!=(const CycloScalar& o) const { return !(*this == o); }

  std::complex<double> numeric() const;

 private:
  // Coefficients of zeta^0 .. zeta^{p-1} reduced into the p-1 dimensional basis.
  void reduce_full(std::vector<Rational> full);
  void require_compatible(const CycloScalar& o) const;

  unsigned p_;
  unsigned c_;
  int grade_ = 0;
  std::vector<Rational> coeffs_;
};

CycloScalar cy_add(const CycloScalar& a, const CycloScalar& b);
CycloScalar cy_mul(const CycloScalar& a, const CycloScalar& b);
CycloScalar cy_conj(const CycloScalar& a);
CycloScalar cy_abs_sq(const CycloScalar& a);

/// Exact literal in the value grammar, e.g. "1/2 - 1/3*zeta^2" or "qhalf*(1/1)".
std::string to_string(const CycloScalar& a);
std::ostream& operator<<(std::ostream& os, const CycloScalar& a);
/// Exact literal followed by an approximate decimal in parentheses.
std::string to_display_string(const CycloScalar& a);

/// Grammar: sums and products of a/b, zeta^k, qhalf^e and parenthesized terms.
CycloScalar parse_cyclo(unsigned p, unsigned c, std::string_view text);

/// Extended nonnegative real used for integrals that may diverge.
struct ExtendedScalar {
  bool infinite = false;
  CycloScalar value;
};

}  // namespace lfw
