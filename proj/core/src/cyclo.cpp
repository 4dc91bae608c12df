#include "lfw/cyclo.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include <mpfr.h>

namespace lfw {
namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

unsigned mod_p(long k, unsigned p) {
  long r = k % static_cast<long>(p);
  if (r < 0) r += p;
  return static_cast<unsigned>(r);
}

// RAII holder for an MPFR number.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// Real part of sum a_i zeta^i at the given precision, with a bound on the
// absolute error of the result.
void real_part(const std::vector<Rational>& coeffs, unsigned p, mpfr_prec_t prec, double& approx,
               int& sign_out, bool& decided) {
  Mpfr acc(prec), term(prec), angle(prec), bound(prec), absval(prec);
  mpfr_set_zero(acc.get(), 1);
  mpfr_set_zero(bound.get(), 1);
  for (unsigned i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    mpfr_const_pi(angle.get(), MPFR_RNDN);
    mpfr_mul_ui(angle.get(), angle.get(), 2 * i, MPFR_RNDN);
    mpfr_div_ui(angle.get(), angle.get(), p, MPFR_RNDN);
    mpfr_cos(term.get(), angle.get(), MPFR_RNDN);
    Mpfr coef(prec);
    mpfr_set_q(coef.get(), coeffs[i].get_mpq_t(), MPFR_RNDN);
    mpfr_mul(term.get(), term.get(), coef.get(), MPFR_RNDN);
    mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
    mpfr_abs(absval.get(), coef.get(), MPFR_RNDU);
    mpfr_add(bound.get(), bound.get(), absval.get(), MPFR_RNDU);
  }
  // Each term carries a few ulps of relative error; 2^-(prec-16) per unit of
  // coefficient mass covers them with room to spare.
  mpfr_add_ui(bound.get(), bound.get(), 1, MPFR_RNDU);
  mpfr_mul_2si(bound.get(), bound.get(), -static_cast<long>(prec) + 16, MPFR_RNDU);
  mpfr_abs(absval.get(), acc.get(), MPFR_RNDD);
  approx = mpfr_get_d(acc.get(), MPFR_RNDN);
  decided = mpfr_cmp(absval.get(), bound.get()) > 0;
  sign_out = mpfr_sgn(acc.get()) > 0 ? 1 : -1;
}

}  // namespace

CycloScalar::CycloScalar(unsigned p, unsigned c) : p_(p), c_(c), coeffs_(p - 1) {
  if (p < 2) throw std::invalid_argument("cyclotomic order must be a prime >= 2");
}

CycloScalar CycloScalar::from_rational(unsigned p, unsigned c, const Rational& r) {
  CycloScalar s(p, c);
  s.coeffs_[0] = r;
  s.coeffs_[0].canonicalize();
  return s;
}

CycloScalar CycloScalar::zeta_power(unsigned p, unsigned c, long k) {
  CycloScalar s(p, c);
  std::vector<Rational> full(p);
  full[mod_p(k, p)] = 1;
  s.reduce_full(std::move(full));
  return s;
}

CycloScalar CycloScalar::qhalf_power(unsigned p, unsigned c, int e) {
  const unsigned q = static_cast<unsigned>(std::lround(std::pow(p, c)));
  if (c % 2 == 0) {
    return from_rational(p, c, rational_power(p, static_cast<int>(c / 2) * e));
  }
  const long f = floor_div(e, 2);
  CycloScalar s = from_rational(p, c, rational_power(q, static_cast<int>(f)));
  s.grade_ = static_cast<int>(e - 2 * f);
  return s;
}

void CycloScalar::reduce_full(std::vector<Rational> full) {
  const Rational top = full[p_ - 1];
  for (unsigned i = 0; i + 1 < p_; ++i) {
    coeffs_[i] = full[i] - top;
  }
  if (is_zero()) grade_ = 0;
}

bool CycloScalar::is_zero() const {
  for (const auto& a : coeffs_)
    if (a != 0) return false;
  return true;
}

bool CycloScalar::is_real() const { return *this == cy_conj(*this); }

bool CycloScalar::is_rational() const {
  if (is_zero()) return true;
  if (grade_ != 0) return false;
  for (unsigned i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

Rational CycloScalar::rational_value() const {
  if (!is_rational()) throw std::domain_error("scalar is not rational: " + to_string(*this));
  return coeffs_[0];
}

int CycloScalar::sign() const {
  if (is_zero()) return 0;
  if (!is_real()) throw std::domain_error("sign of a non-real scalar");
  if (is_rational()) return sgn(coeffs_[0]);
  for (mpfr_prec_t prec = 64; prec <= (1 << 20); prec *= 2) {
    double approx = 0;
    int s = 0;
    bool decided = false;
    real_part(coeffs_, p_, prec, approx, s, decided);
    if (decided) return s;
  }
  throw std::runtime_error("sign undecided at maximal precision");
}

long CycloScalar::floor() const {
  if (!is_real()) throw std::domain_error("floor of a non-real scalar");
  if (is_rational()) return static_cast<long>(floor_to_int(coeffs_[0]));
  // Compare against integers n via signs of (x - n); for grade 1 compare squares.
  auto cmp = [&](long n) {
    if (grade_ == 0) return (*this - from_rational(p_, c_, Rational(n))).sign();
    const int sx = sign();
    const int sn = n > 0 ? 1 : (n < 0 ? -1 : 0);
    if (sx != sn) return sx > sn ? 1 : -1;
    const CycloScalar sq = *this * *this;
    const int d = (sq - from_rational(p_, c_, Rational(n) * n)).sign();
    return sx >= 0 ? d : -d;
  };
  long n = static_cast<long>(std::floor(numeric().real()));
  while (cmp(n) < 0) --n;
  while (cmp(n + 1) >= 0) ++n;
  return n;
}

void CycloScalar::require_compatible(const CycloScalar& o) const {
  if (p_ != o.p_ || c_ != o.c_) throw std::invalid_argument("scalars from different fields");
}

CycloScalar CycloScalar::operator+(const CycloScalar& o) const {
  CycloScalar r = *this;
  r += o;
  return r;
}

CycloScalar& CycloScalar::operator+=(const CycloScalar& o) {
  require_compatible(o);
  if (o.is_zero()) return *this;
  if (is_zero()) {
    *this = o;
    return *this;
  }
  if (grade_ != o.grade_) throw GradeMismatch();
  for (unsigned i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  if (is_zero()) grade_ = 0;
  return *this;
}

CycloScalar CycloScalar::operator-() const {
  CycloScalar r = *this;
  for (auto& a : r.coeffs_) a = -a;
  return r;
}

CycloScalar CycloScalar::operator-(const CycloScalar& o) const { return *this + (-o); }

CycloScalar CycloScalar::operator*(const CycloScalar& o) const {
  require_compatible(o);
  CycloScalar r(p_, c_);
  if (is_zero() || o.is_zero()) return r;
  std::vector<Rational> full(p_);
  for (unsigned i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (unsigned j = 0; j < o.coeffs_.size(); ++j) {
      if (o.coeffs_[j] == 0) continue;
      full[(i + j) % p_] += coeffs_[i] * o.coeffs_[j];
    }
  }
  int g = grade_ + o.grade_;
  if (g == 2) {
    const Rational q = rational_power(p_, static_cast<int>(c_));
    for (auto& a : full) a *= q;
    g = 0;
  }
  r.grade_ = g;
  r.reduce_full(std::move(full));
  return r;
}

CycloScalar CycloScalar::conj() const {
  CycloScalar r(p_, c_);
  std::vector<Rational> full(p_);
  for (unsigned i = 0; i < coeffs_.size(); ++i) full[(p_ - i) % p_] = coeffs_[i];
  r.grade_ = grade_;
  r.reduce_full(std::move(full));
  return r;
}

CycloScalar& CycloScalar::operator*=(const CycloScalar& o) {
  *this = *this * o;
  return *this;
}

CycloScalar CycloScalar::scaled(const Rational& r) const {
  CycloScalar out = *this;
  Rational factor = r;
  factor.canonicalize();
  for (auto& a : out.coeffs_) a *= factor;
  if (out.is_zero()) out.grade_ = 0;
  return out;
}

bool CycloScalar::operator==(const CycloScalar& o) const {
  return p_ == o.p_ && c_ == o.c_ && grade_ == o.grade_ && coeffs_ == o.coeffs_;
}

std::complex<double> CycloScalar::numeric() const {
  std::complex<double> z = 0;
  for (unsigned i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    const double angle = 2.0 * std::numbers::pi * i / p_;
    z += coeffs_[i].get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  if (grade_ == 1) z *= std::sqrt(std::pow(static_cast<double>(p_), static_cast<double>(c_)));
  return z;
}

CycloScalar cy_add(const CycloScalar& a, const CycloScalar& b) { return a + b; }

CycloScalar cy_mul(const CycloScalar& a, const CycloScalar& b) { return a * b; }

CycloScalar cy_conj(const CycloScalar& a) { return a.conj(); }

CycloScalar cy_abs_sq(const CycloScalar& a) { return a * cy_conj(a); }

std::string to_string(const CycloScalar& a) {
  if (a.is_zero()) return "0";
  std::string inner;
  bool first = true;
  for (unsigned i = 0; i < a.coeffs().size(); ++i) {
    const Rational& v = a.coeffs()[i];
    if (v == 0) continue;
    const Rational mag = abs(v);
    std::string term = to_fraction_string(mag);
    if (i > 0) term += "*zeta^" + std::to_string(i);
    if (first) {
      inner += (v < 0 ? "-" : "") + term;
    } else {
      inner += (v < 0 ? " - " : " + ") + term;
    }
    first = false;
  }
  if (a.grade() == 1) return "qhalf*(" + inner + ")";
  return inner;
}

std::ostream& operator<<(std::ostream& os, const CycloScalar& a) { return os << to_string(a); }

std::string to_display_string(const CycloScalar& a) {
  const auto z = a.numeric();
  std::ostringstream os;
  os.precision(12);
  os << to_string(a) << " (~" << z.real();
  if (std::abs(z.imag()) > 1e-15) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  os << ")";
  return os.str();
}

namespace {

class CycloParser {
 public:
  CycloParser(unsigned p, unsigned c, std::string_view text) : p_(p), c_(c), text_(text) {}

  CycloScalar parse() {
    CycloScalar v = sum();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("scalar literal '" + std::string(text_) + "': " + what + " at offset " +
                                std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  long integer() {
    skip();
    bool neg = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    const long v = std::stol(std::string(text_.substr(start, pos_ - start)));
    return neg ? -v : v;
  }

  CycloScalar sum() {
    skip();
    bool neg = accept('-');
    CycloScalar v = product();
    if (neg) v = -v;
    while (true) {
      if (accept('+')) {
        v += product();
      } else if (accept('-')) {
        v += -product();
      } else {
        return v;
      }
    }
  }

  CycloScalar product() {
    CycloScalar v = factor();
    while (accept('*')) v = v * factor();
    return v;
  }

  CycloScalar factor() {
    skip();
    if (accept('(')) {
      CycloScalar v = sum();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view word = text_.substr(start, pos_ - start);
      long e = 1;
      if (accept('^')) e = integer();
      if (word == "zeta") return CycloScalar::zeta_power(p_, c_, e);
      if (word == "qhalf") return CycloScalar::qhalf_power(p_, c_, static_cast<int>(e));
      fail("unknown name '" + std::string(word) + "'");
    }
    const long num = integer();
    long den = 1;
    if (accept('/')) den = integer();
    if (den == 0) fail("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return CycloScalar::from_rational(p_, c_, r);
  }

  unsigned p_;
  unsigned c_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

CycloScalar parse_cyclo(unsigned p, unsigned c, std::string_view text) {
  return CycloParser(p, c, text).parse();
}

}  // namespace lfw
