#include "lfw/clopen.hpp"

#include <algorithm>
#include <map>

#include "digit_trie.hpp"

namespace lfw {

using detail::AccumTrie;
using detail::SetNode;
using detail::SetTrie;

Ball::Ball(FieldElement center, int scale) : center_(center.truncated_below(scale)), scale_(scale) {}

Rational Ball::measure() const { return rational_power(field()->q(), -scale_); }

bool Ball::contains(const FieldElement& x) const {
  return (x - center_).valuation() >= scale_;
}

bool Ball::contains(const Ball& other) const {
  return other.scale_ >= scale_ && contains(other.center_);
}

bool Ball::intersects(const Ball& other) const { return contains(other) || other.contains(*this); }

int Ball::base_exponent() const { return std::min(center_.valuation(), scale_); }

Ball Ball::parent() const { return Ball(center_, scale_ - 1); }

std::vector<Ball> Ball::children() const {
  std::vector<Ball> out;
  const unsigned q = field()->q();
  out.reserve(q);
  for (unsigned d = 0; d < q; ++d) {
    out.emplace_back(center_ + FieldElement::monomial(field(), scale_, static_cast<FqCode>(d)), scale_ + 1);
  }
  return out;
}

std::vector<Ball> Ball::refine_to(int k) const {
  if (k <= scale_) return {*this};
  const unsigned q = field()->q();
  std::size_t count = 1;
  for (int i = scale_; i < k; ++i) {
    count *= q;
    if (count > kMaxRefinementPieces) throw std::length_error("ball refinement exceeds the piece cap");
  }
  std::vector<Ball> out;
  out.reserve(count);
  std::vector<FqCode> digits(static_cast<std::size_t>(k - scale_), 0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t t = idx;
    std::vector<Digit> ds(center_.digits());
    for (std::size_t i = 0; i < digits.size(); ++i) {
      const auto d = static_cast<FqCode>(t % q);
      t /= q;
      if (d != 0) ds.emplace_back(scale_ + static_cast<int>(i), d);
    }
    out.emplace_back(FieldElement(field(), std::move(ds)), k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Ball::operator<(const Ball& o) const {
  if (scale_ != o.scale_) return scale_ < o.scale_;
  return center_.digits() < o.center_.digits();
}

ClopenSet::ClopenSet(FieldConfigPtr field) : field_(std::move(field)) {
  if (!field_) throw std::invalid_argument("null field");
}

ClopenSet::ClopenSet(FieldConfigPtr field, std::vector<Ball> raw) : field_(std::move(field)) {
  if (!field_) throw std::invalid_argument("null field");
  if (raw.empty()) return;
  int base = raw.front().base_exponent();
  for (const auto& b : raw) {
    require_same_field(*field_, *b.field());
    base = std::min(base, b.base_exponent());
  }
  SetTrie trie(field_, base);
  // Coarse balls first so that nested finer balls are absorbed on insertion.
  std::sort(raw.begin(), raw.end());
  for (const auto& b : raw) trie.insert(b);
  trie.compress();
  balls_ = trie.balls();
}

ClopenSet ClopenSet::integers(const FieldConfigPtr& field) { return ideal(field, 0); }

ClopenSet ClopenSet::ideal(const FieldConfigPtr& field, int k) {
  return ClopenSet(field, {Ball(FieldElement(field), k)});
}

ClopenSet ClopenSet::units(const FieldConfigPtr& field) { return shell(field, 0); }

ClopenSet ClopenSet::shell(const FieldConfigPtr& field, int s) {
  std::vector<Ball> balls;
  for (FqCode d = 1; d < field->q(); ++d) balls.emplace_back(FieldElement::monomial(field, s, d), s + 1);
  return ClopenSet(field, std::move(balls));
}

bool ClopenSet::contains(const FieldElement& x) const {
  for (const auto& b : balls_)
    if (b.contains(x)) return true;
  return false;
}

Rational ClopenSet::measure() const {
  Rational m = 0;
  for (const auto& b : balls_) m += b.measure();
  return m;
}

int ClopenSet::min_scale() const {
  if (balls_.empty()) throw std::domain_error("empty set has no scale");
  return balls_.front().scale();
}

int ClopenSet::max_scale() const {
  if (balls_.empty()) throw std::domain_error("empty set has no scale");
  return balls_.back().scale();
}

int ClopenSet::base_exponent() const {
  if (balls_.empty()) throw std::domain_error("empty set has no base");
  int base = balls_.front().base_exponent();
  for (const auto& b : balls_) base = std::min(base, b.base_exponent());
  return base;
}

bool ClopenSet::contains_zero() const {
  return std::any_of(balls_.begin(), balls_.end(), [](const Ball& b) { return b.contains_zero(); });
}

ClopenSet cs_normalize(const FieldConfigPtr& field, std::vector<Ball> raw) {
  return ClopenSet(field, std::move(raw));
}

namespace {

enum class SetOp { Union, Intersect, Subtract };

ClopenSet combine(const ClopenSet& a, const ClopenSet& b, SetOp op) {
  require_same_field(*a.field(), *b.field());
  if (a.empty() && b.empty()) return a;
  int base = a.empty() ? b.base_exponent() : a.base_exponent();
  if (!b.empty()) base = std::min(base, b.base_exponent());
  SetTrie ta(a.field(), base), tb(a.field(), base);
  for (const auto& x : a.balls()) ta.insert(x);
  for (const auto& x : b.balls()) tb.insert(x);
  const unsigned q = a.field()->q();
  SetTrie out(a.field(), base);
  switch (op) {
    case SetOp::Union:
      out.root() = SetTrie::unite(ta.root(), tb.root(), q);
      break;
    case SetOp::Intersect:
      out.root() = SetTrie::intersect(ta.root(), tb.root(), q);
      break;
    case SetOp::Subtract:
      out.root() = SetTrie::subtract(ta.root(), tb.root(), q);
      break;
  }
  return ClopenSet(a.field(), out.balls());
}

}  // namespace

ClopenSet cs_union(const ClopenSet& a, const ClopenSet& b) { return combine(a, b, SetOp::Union); }

ClopenSet cs_intersect(const ClopenSet& a, const ClopenSet& b) { return combine(a, b, SetOp::Intersect); }

ClopenSet cs_subtract(const ClopenSet& a, const ClopenSet& b) { return combine(a, b, SetOp::Subtract); }

ClopenSet cs_union_all(const FieldConfigPtr& field, const std::vector<ClopenSet>& sets) {
  std::vector<Ball> all;
  for (const auto& s : sets) {
    require_same_field(*field, *s.field());
    all.insert(all.end(), s.balls().begin(), s.balls().end());
  }
  return ClopenSet(field, std::move(all));
}

bool cs_subset(const ClopenSet& a, const ClopenSet& b) {
  require_same_field(*a.field(), *b.field());
  if (a.empty()) return true;
  if (b.empty()) return false;
  const int base = std::min(a.base_exponent(), b.base_exponent());
  SetTrie ta(a.field(), base), tb(a.field(), base);
  for (const auto& x : a.balls()) ta.insert(x);
  for (const auto& x : b.balls()) tb.insert(x);
  return SetTrie::subset(ta.root(), tb.root());
}

ClopenSet cs_scale(const ClopenSet& w, int j) {
  std::vector<Ball> out;
  out.reserve(w.balls().size());
  for (const auto& b : w.balls()) out.push_back(b.scaled(j));
  return ClopenSet(w.field(), std::move(out));
}

ClopenSet cs_translate(const ClopenSet& w, const FieldElement& t) {
  std::vector<Ball> out;
  out.reserve(w.balls().size());
  for (const auto& b : w.balls()) out.push_back(b.translated(t));
  return ClopenSet(w.field(), std::move(out));
}

Rational cs_measure(const ClopenSet& w) { return w.measure(); }

FoldResult cs_fold(const ClopenSet& w) {
  const auto& field = w.field();
  FoldResult result{{}, ClopenSet(field), ClopenSet(field)};
  std::size_t pieces = 0;
  for (const auto& b : w.balls()) {
    for (const auto& piece : b.refine_to(0)) {
      if (++pieces > kMaxRefinementPieces) throw std::length_error("fold exceeds the piece cap");
      const auto split = fractional_part(piece.center());
      result.fragments.push_back({Ball(split.remainder, piece.scale()), split.index});
    }
  }
  if (result.fragments.empty()) return result;
  AccumTrie<long> counts(field, 0);
  for (const auto& f : result.fragments) counts.add(f.ball, 1);
  std::vector<Ball> image, overlap;
  counts.for_each_cell([&](const Ball& cell, const long& n) {
    if (n >= 1) image.push_back(cell);
    if (n >= 2) overlap.push_back(cell);
  });
  result.image = ClopenSet(field, std::move(image));
  result.overlap = ClopenSet(field, std::move(overlap));
  return result;
}

ExtendedRational cs_inv_norm_integral(const ClopenSet& w) {
  ExtendedRational r{false, 0};
  const unsigned q = w.field()->q();
  for (const auto& b : w.balls()) {
    if (b.contains_zero()) return {true, 0};
    r.value += rational_power(q, b.center().valuation() - b.scale());
  }
  return r;
}

ShellDecomposition cs_shells(const ClopenSet& w, std::optional<int> depth) {
  const auto& field = w.field();
  ShellDecomposition out;
  if (w.empty()) return out;
  const int d = depth.value_or(w.max_scale());
  std::map<int, std::vector<Ball>> by_shell;
  for (const auto& b : w.balls()) {
    if (!b.contains_zero()) {
      by_shell[b.center().valuation()].push_back(b);
      continue;
    }
    // b = p^k O: peel p^s O* for s in [k, d), leaving p^max(k,d) O.
    const int k = b.scale();
    for (int s = k; s < d; ++s) {
      const auto sh = ClopenSet::shell(field, s);
      by_shell[s].insert(by_shell[s].end(), sh.balls().begin(), sh.balls().end());
    }
    out.zero_ball = Ball(FieldElement(field), std::max(k, d));
  }
  for (auto& [s, balls] : by_shell) out.shells.emplace_back(s, ClopenSet(field, std::move(balls)));
  return out;
}

std::string to_string(const Ball& b) {
  return "ball(" + to_string(b.center()) + ", " + std::to_string(b.scale()) + ")";
}

std::string to_string(const ClopenSet& w) {
  if (w.empty()) return "{}";
  std::string s = "{";
  for (std::size_t i = 0; i < w.balls().size(); ++i) {
    if (i > 0) s += ", ";
    s += to_string(w.balls()[i]);
  }
  return s + "}";
}

}  // namespace lfw
