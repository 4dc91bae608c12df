#include "lfw/lfield.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>

namespace lfw {

FieldElement::FieldElement(FieldConfigPtr field) : field_(std::move(field)) {
  if (!field_) throw std::invalid_argument("null field");
}

FieldElement::FieldElement(FieldConfigPtr field, std::vector<Digit> digits) : field_(std::move(field)) {
  if (!field_) throw std::invalid_argument("null field");
  std::sort(digits.begin(), digits.end(),
            [](const Digit& a, const Digit& b) { return a.first < b.first; });
  for (const auto& [e, code] : digits) {
    if (code >= field_->q()) throw std::invalid_argument("digit code out of range");
    if (!digits_.empty() && digits_.back().first == e) {
      digits_.back().second = field_->add(digits_.back().second, code);
      if (digits_.back().second == 0) digits_.pop_back();
    } else if (code != 0) {
      digits_.emplace_back(e, code);
    }
  }
}

FieldElement FieldElement::monomial(FieldConfigPtr field, int exponent, FqCode code) {
  return FieldElement(std::move(field), {{exponent, code}});
}

FieldElement FieldElement::from_integer(FieldConfigPtr field, long n) {
  const long p = field->p();
  const long r = ((n % p) + p) % p;
  return monomial(std::move(field), 0, static_cast<FqCode>(r));
}

FqCode FieldElement::digit(int exponent) const {
  auto it = std::lower_bound(digits_.begin(), digits_.end(), exponent,
                             [](const Digit& d, int e) { return d.first < e; });
  if (it != digits_.end() && it->first == exponent) return it->second;
  return 0;
}

int FieldElement::top_exponent() const {
  if (digits_.empty()) throw std::domain_error("zero has no digits");
  return digits_.back().first;
}

FieldElement FieldElement::truncated_below(int k) const {
  FieldElement r(field_);
  for (const auto& d : digits_) {
    if (d.first >= k) break;
    r.digits_.push_back(d);
  }
  return r;
}

FieldElement FieldElement::tail_from(int k) const {
  FieldElement r(field_);
  for (const auto& d : digits_)
    if (d.first >= k) r.digits_.push_back(d);
  return r;
}

FieldElement FieldElement::shifted(int j) const {
  FieldElement r = *this;
  for (auto& d : r.digits_) d.first += j;
  return r;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same_field(*field_, *o.field_);
  FieldElement r(field_);
  r.digits_.reserve(digits_.size() + o.digits_.size());
  auto a = digits_.begin();
  auto b = o.digits_.begin();
  while (a != digits_.end() || b != o.digits_.end()) {
    if (b == o.digits_.end() || (a != digits_.end() && a->first < b->first)) {
      r.digits_.push_back(*a++);
    } else if (a == digits_.end() || b->first < a->first) {
      r.digits_.push_back(*b++);
    } else {
      const FqCode s = field_->add(a->second, b->second);
      if (s != 0) r.digits_.emplace_back(a->first, s);
      ++a;
      ++b;
    }
  }
  return r;
}

FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  for (auto& d : r.digits_) d.second = field_->neg(d.second);
  return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const { return *this + (-o); }

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same_field(*field_, *o.field_);
  std::map<int, FqCode> acc;
  for (const auto& [ea, ca] : digits_) {
    for (const auto& [eb, cb] : o.digits_) {
      FqCode& slot = acc[ea + eb];
      slot = field_->add(slot, field_->mul(ca, cb));
    }
  }
  FieldElement r(field_);
  for (const auto& [e, code] : acc)
    if (code != 0) r.digits_.emplace_back(e, code);
  return r;
}

FieldElement FieldElement::scaled(FqCode c) const {
  FieldElement r(field_);
  if (c == 0) return r;
  r.digits_ = digits_;
  for (auto& d : r.digits_) d.second = field_->mul(d.second, c);
  return r;
}

bool FieldElement::operator==(const FieldElement& o) const {
  return field_->same_as(*o.field_) && digits_ == o.digits_;
}

FieldElement field_add(const FieldElement& x, const FieldElement& y) { return x + y; }

FieldElement field_mul(const FieldElement& x, const FieldElement& y) { return x * y; }

FieldElement field_neg(const FieldElement& x) { return -x; }

FieldElement u_of_index(const FieldConfigPtr& field, std::uint64_t n) {
  std::vector<Digit> digits;
  const unsigned q = field->q();
  for (int k = 0; n > 0; ++k) {
    const auto b = static_cast<FqCode>(n % q);
    if (b != 0) digits.emplace_back(-(k + 1), b);
    n /= q;
  }
  return FieldElement(field, std::move(digits));
}

std::uint64_t index_of_u(const FieldElement& x) {
  const unsigned q = x.field()->q();
  std::uint64_t n = 0;
  // Digits are sorted ascending, so the most significant base-q digit comes first.
  for (const auto& [e, code] : x.digits()) {
    if (e >= 0) throw std::invalid_argument("index_of_u: element has a digit at exponent >= 0");
    (void)code;
  }
  if (x.is_zero()) return 0;
  const int lowest = x.digits().front().first;
  for (int e = lowest; e <= -1; ++e) {
    const std::uint64_t limit = (UINT64_MAX - (q - 1)) / q;
    if (n > limit) throw std::overflow_error("index_of_u: index exceeds 64 bits");
    n = n * q + x.digit(e);
  }
  return n;
}

FractionalSplit fractional_part(const FieldElement& x) {
  return {index_of_u(x.truncated_below(0)), x.tail_from(0)};
}

unsigned character_exponent(const FieldElement& y, const FieldElement& x) {
  require_same_field(*y.field(), *x.field());
  const FieldConfig& f = *y.field();
  FqCode d = 0;
  for (const auto& [ea, ca] : y.digits()) {
    const FqCode cb = x.digit(-1 - ea);
    if (cb != 0) d = f.add(d, f.mul(ca, cb));
  }
  return f.trace(d);
}

CycloScalar character(const FieldElement& y, const FieldElement& x) {
  const FieldConfig& f = *y.field();
  return CycloScalar::zeta_power(f.p(), f.c(), character_exponent(y, x));
}

namespace {

std::string digit_literal(const FieldConfig& f, FqCode code) {
  if (f.c() == 1) return std::to_string(code);
  std::string s = "[";
  const auto cs = f.coords(code);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(cs[i]);
  }
  return s + "]";
}

}  // namespace

std::string to_string(const FieldElement& x) {
  if (x.is_zero()) return "0";
  const FieldConfig& f = *x.field();
  std::string out;
  for (const auto& [e, code] : x.digits()) {
    if (!out.empty()) out += " + ";
    if (e == 0) {
      out += digit_literal(f, code);
      continue;
    }
    if (code != 1) out += digit_literal(f, code) + "*";
    out += e == 1 ? "p" : "p^" + std::to_string(e);
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << to_string(x); }

namespace {

class ElementParser {
 public:
  ElementParser(const FieldConfigPtr& field, std::string_view text) : field_(field), text_(text) {}

  FieldElement parse() {
    FieldElement v = sum();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("element literal '" + std::string(text_) + "': " + what + " at offset " +
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

  void expect(char ch) {
    if (!accept(ch)) fail(std::string("expected '") + ch + "'");
  }

  std::uint64_t natural() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    if (pos_ - start > 18) fail("integer too large");
    return std::stoull(std::string(text_.substr(start, pos_ - start)));
  }

  long signed_integer() {
    const bool neg = accept('-');
    const auto v = static_cast<long>(natural());
    return neg ? -v : v;
  }

  FieldElement sum() {
    const bool neg = accept('-');
    FieldElement v = product();
    if (neg) v = -v;
    while (true) {
      if (accept('+')) {
        v = v + product();
      } else if (accept('-')) {
        v = v - product();
      } else {
        return v;
      }
    }
  }

  FieldElement product() {
    FieldElement v = factor();
    while (accept('*')) v = v * factor();
    return v;
  }

  FieldElement factor() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      FieldElement v = sum();
      expect(')');
      return v;
    }
    if (ch == '[') {
      ++pos_;
      std::vector<unsigned> coords;
      do {
        const auto a = natural();
        if (a >= field_->p()) fail("digit coordinate out of range");
        coords.push_back(static_cast<unsigned>(a));
      } while (accept(','));
      expect(']');
      if (coords.size() != field_->c()) fail("digit literal needs exactly c coordinates");
      return FieldElement::monomial(field_, 0, field_->encode(coords));
    }
    if (ch == 'p') {
      ++pos_;
      long e = 1;
      if (accept('^')) e = signed_integer();
      return FieldElement::monomial(field_, static_cast<int>(e));
    }
    if (ch == 'u') {
      ++pos_;
      expect('(');
      const auto n = natural();
      expect(')');
      return u_of_index(field_, n);
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      return FieldElement::from_integer(field_, static_cast<long>(natural() % field_->p()));
    }
    fail("unexpected character");
  }

  const FieldConfigPtr& field_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

FieldElement parse_element(const FieldConfigPtr& field, std::string_view text) {
  return ElementParser(field, text).parse();
}

}  // namespace lfw
