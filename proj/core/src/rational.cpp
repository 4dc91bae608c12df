#include "lfw/rational.hpp"

#include <stdexcept>

namespace lfw {

Rational rational_power(unsigned q, int e) {
  mpz_class base = q;
  mpz_class pw;
  mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -static_cast<long>(e) : e));
  Rational r;
  if (e >= 0) {
    r = Rational(pw, 1);
  } else {
    r = Rational(1, pw);
  }
  r.canonicalize();
  return r;
}

std::string to_fraction_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_fraction(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) {
    throw std::invalid_argument("not a rational literal: " + text);
  }
  if (r.get_den() == 0) {
    throw std::invalid_argument("zero denominator: " + text);
  }
  r.canonicalize();
  return r;
}

std::int64_t floor_to_int(const Rational& r) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  if (!f.fits_slong_p()) {
    throw std::overflow_error("floor does not fit in 64 bits");
  }
  return f.get_si();
}

}  // namespace lfw
