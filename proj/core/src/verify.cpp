#include "lfw/verify.hpp"

#include <algorithm>
#include <sstream>

#include "digit_trie.hpp"

namespace lfw {

using detail::AccumTrie;

namespace {

constexpr long kMaxTranslationIndices = 10'000'000;

Ball integers_ball(const FieldConfigPtr& field) { return Ball(FieldElement(field), 0); }

CycloScalar one_of(const FieldConfigPtr& field) { return CycloScalar::from_rational(field->p(), field->c(), 1); }

Check pass(std::string name, std::string detail = {}) { return {std::move(name), true, Witness::none(), std::move(detail)}; }

Check fail(std::string name, Witness w, std::string detail) { return {std::move(name), false, std::move(w), std::move(detail)}; }

// Balls of a count trie grouped into (covered, overlapping) sets.
std::pair<ClopenSet, ClopenSet> coverage(const FieldConfigPtr& field, int base, const std::vector<Ball>& balls) {
  if (balls.empty()) return {ClopenSet(field), ClopenSet(field)};
  AccumTrie<long> counts(field, base);
  for (const auto& b : balls) counts.add(b, 1);
  std::vector<Ball> covered, overlap;
  counts.for_each_cell([&](const Ball& cell, const long& n) {
    if (n >= 1) covered.push_back(cell);
    if (n >= 2) overlap.push_back(cell);
  });
  return {ClopenSet(field, std::move(covered)), ClopenSet(field, std::move(overlap))};
}

// First cell of f whose value differs from target on O*, or a gap of the support.
std::optional<std::pair<Witness, std::string>> compare_to_constant(const StepFunction& f, const ClopenSet& domain,
                                                                  const CycloScalar& target) {
  for (const auto& [b, v] : f.cells()) {
    if (v != target) {
      auto w = Witness::of_point(b.center());
      w.ball = b;
      return std::make_pair(w, "value " + to_string(v) + " on " + to_string(b));
    }
  }
  const auto gap = cs_subtract(domain, f.support());
  if (!gap.empty()) {
    auto w = Witness::of_set(gap);
    return std::make_pair(w, "value 0 on a set of measure " + to_fraction_string(gap.measure()));
  }
  return std::nullopt;
}

// sum_j g(p^j xi) on O*; nullopt when g has a nonzero cell at the origin.
std::optional<StepFunction> dilation_sum(const StepFunction& g, Ball* divergent) {
  const auto& field = g.field();
  std::vector<Cell> normalized;
  for (const auto& [b, v] : g.cells()) {
    if (b.contains_zero()) {
      if (divergent) *divergent = b;
      return std::nullopt;
    }
    normalized.emplace_back(b.scaled(-b.center().valuation()), v);
  }
  return StepFunction::accumulate(field, normalized);
}

int support_radius(const std::vector<StepFunction>& fs) {
  int a = 0;
  for (const auto& f : fs)
    for (const auto& [b, v] : f.cells()) a = std::max(a, -b.base_exponent());
  return a;
}

long checked_power(unsigned q, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) {
    r *= q;
    if (r > kMaxTranslationIndices) throw std::length_error("translation index range exceeds the cap");
  }
  return r;
}

std::optional<Ball> ball_intersection(const Ball& a, const Ball& b) {
  if (a.contains(b)) return b;
  if (b.contains(a)) return a;
  return std::nullopt;
}

// Checks sum_m sum_{j>=0} psi_m(p^-j xi) conj(psi_m(p^-j (xi + u(s)))) = 0 for q not dividing s.
Check translation_correlations(const std::vector<StepFunction>& family, VerdictBounds& bounds, const std::string& name) {
  const auto& field = family.front().field();
  const unsigned q = field->q();
  const int a = support_radius(family);
  const long s_end = checked_power(q, a);
  bounds.s_max = s_end - 1;
  bounds.j_max = std::max(a - 1, 0);
  for (long s = 1; s < s_end; ++s) {
    if (s % q == 0) continue;
    const FieldElement us = u_of_index(field, static_cast<std::uint64_t>(s));
    const int ks = us.log_abs();
    if (ks > a) continue;
    std::vector<Cell> terms;
    for (int j = 0; j <= a - ks; ++j) {
      for (const auto& psi : family) {
        for (const auto& [c1, v1] : psi.cells()) {
          const Ball d1 = c1.scaled(j);
          for (const auto& [c2, v2] : psi.cells()) {
            const auto region = ball_intersection(d1, c2.scaled(j).translated(-us));
            if (region) terms.emplace_back(*region, v1 * v2.conj());
          }
        }
      }
    }
    const auto t = StepFunction::accumulate(field, terms);
    if (!t.is_zero()) {
      const auto& [b, v] = t.cells().front();
      auto w = Witness::of_point(b.center());
      w.ball = b;
      return fail(name, w, "s = " + std::to_string(s) + ", value " + to_string(v));
    }
  }
  return pass(name, "s < " + std::to_string(s_end));
}

Check dilation_sum_check(const std::vector<StepFunction>& family, const std::string& name) {
  const auto& field = family.front().field();
  std::vector<Cell> squares;
  for (const auto& psi : family)
    for (const auto& [b, v] : psi.cells()) squares.emplace_back(b, cy_abs_sq(v));
  const auto g = StepFunction::accumulate(field, squares);
  Ball origin = integers_ball(field);
  const auto sum = dilation_sum(g, &origin);
  if (!sum) return fail(name, Witness::of_ball(origin), "nonzero near the origin, so the sum diverges");
  if (auto bad = compare_to_constant(*sum, ClopenSet::units(field), one_of(field))) {
    return fail(name, bad->first, bad->second);
  }
  return pass(name);
}

std::string component_name(std::size_t i) { return "W" + std::to_string(i + 1); }

std::optional<Check> disjoint_components(const std::vector<ClopenSet>& components) {
  for (std::size_t i = 0; i < components.size(); ++i) {
    for (std::size_t j = i + 1; j < components.size(); ++j) {
      const auto common = cs_intersect(components[i], components[j]);
      if (!common.empty()) {
        return fail("components disjoint", Witness::of_set(common),
                    component_name(i) + " and " + component_name(j) + " intersect");
      }
    }
  }
  return std::nullopt;
}

void require_nonempty(const std::vector<ClopenSet>& components) {
  if (components.empty()) throw std::invalid_argument("at least one component is required");
  for (const auto& c : components) require_same_field(*components.front().field(), *c.field());
}

void require_nonempty(const std::vector<StepFunction>& fs) {
  if (fs.empty()) throw std::invalid_argument("at least one function is required");
  for (const auto& f : fs) require_same_field(*fs.front().field(), *f.field());
}

Verdict multiwavelet(const std::vector<ClopenSet>& components, TranslationMode mode) {
  require_nonempty(components);
  const auto& field = components.front().field();
  Verdict v;
  v.set_fact("order", std::to_string(components.size()));
  if (auto bad = disjoint_components(components)) {
    v.add(*bad);
    return v;
  }
  v.absorb(check_dilation_tiling(cs_union_all(field, components)), "union ");
  for (std::size_t i = 0; i < components.size(); ++i) {
    v.absorb(check_translation(components[i], mode), component_name(i) + " ");
  }
  return v;
}

// Level range [lo, hi] of |xi| over a cell, used to bound correlation lags.
std::pair<int, int> cell_levels(const Ball& b) {
  if (b.contains_zero()) return {-b.scale() - 1, -b.scale()};
  const int l = -b.center().valuation();
  return {l, l};
}

BoundReport bound_from(const BoundReport& integral, const FieldConfigPtr& field) {
  BoundReport r = integral;
  if (r.infinite) return r;
  const unsigned q = field->q();
  r.max_m = r.value.scaled(Rational(q, q - 1)).floor();
  return r;
}

}  // namespace

Witness Witness::of_ball(const Ball& b) {
  Witness w;
  w.kind = WitnessKind::Ball;
  w.ball = b;
  return w;
}

Witness Witness::of_set(const ClopenSet& s) {
  Witness w;
  w.kind = WitnessKind::Set;
  w.set = s;
  w.measure = s.measure();
  if (!s.empty()) {
    auto it = std::find_if(s.balls().begin(), s.balls().end(), [](const Ball& b) { return b.contains_zero(); });
    w.ball = it != s.balls().end() ? *it : s.balls().front();
  }
  return w;
}

Witness Witness::of_point(const FieldElement& x) {
  Witness w;
  w.kind = WitnessKind::Point;
  w.point = x;
  return w;
}

Witness Witness::of_measure(const Rational& m) {
  Witness w;
  w.kind = WitnessKind::Measure;
  w.measure = m;
  return w;
}

bool Verdict::passed() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; });
}

void Verdict::add(Check c) { checks_.push_back(std::move(c)); }

void Verdict::absorb(const Verdict& other, const std::string& prefix) {
  for (auto c : other.checks_) {
    c.name = prefix + c.name;
    checks_.push_back(std::move(c));
  }
  for (const auto& [k, v] : other.facts_) facts_.emplace(prefix + k, v);
  const auto merge = [](std::optional<long>& a, const std::optional<long>& b) {
    if (b) a = a ? std::max(*a, *b) : *b;
  };
  merge(bounds_.s_max, other.bounds_.s_max);
  merge(bounds_.j_max, other.bounds_.j_max);
  merge(bounds_.k_max, other.bounds_.k_max);
}

const Check* Verdict::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

Verdict check_dilation_tiling(const ClopenSet& w) {
  const std::string name = "dilation tiling";
  const auto& field = w.field();
  Verdict v;
  if (w.empty()) {
    v.add(fail(name, Witness::of_measure(0), "empty set"));
    return v;
  }
  for (const auto& b : w.balls()) {
    if (b.contains_zero()) {
      const Ball inner(FieldElement(field), b.scale() + 1);
      v.add(fail(name, Witness::of_ball(inner), to_string(b) + " meets its own dilate on " + to_string(inner)));
      return v;
    }
  }
  std::vector<Ball> normalized;
  std::string shells;
  int last_shell = kInfiniteValuation;
  for (const auto& b : w.balls()) {
    const int s = b.center().valuation();
    normalized.push_back(b.scaled(-s));
    if (s != last_shell) {
      last_shell = s;
      if (!shells.empty()) shells += ",";
      shells += std::to_string(s);
    }
  }
  v.set_fact("shells", shells);
  const auto [covered, overlap] = coverage(field, 0, normalized);
  if (!overlap.empty()) {
    v.add(fail(name, Witness::of_set(overlap), "dilates overlap on a set of measure " +
                                                   to_fraction_string(overlap.measure()) + " in O*"));
    return v;
  }
  const auto gap = cs_subtract(ClopenSet::units(field), covered);
  if (!gap.empty()) {
    v.add(fail(name, Witness::of_set(gap), "dilates miss a set of measure " + to_fraction_string(gap.measure()) +
                                               " in O*"));
    return v;
  }
  v.add(pass(name));
  return v;
}

Verdict check_translation(const ClopenSet& w, TranslationMode mode) {
  const std::string name = mode == TranslationMode::Tiling ? "translation tiling" : "translation packing";
  const auto& field = w.field();
  Verdict v;
  const auto folded = cs_fold(w);
  v.set_fact("fold_measure", to_fraction_string(folded.image.measure()));
  if (!folded.overlap.empty()) {
    auto wit = Witness::of_set(folded.overlap);
    v.add(fail(name, wit, "translates overlap on a set of measure " + to_fraction_string(*wit.measure) + " in O"));
    return v;
  }
  if (mode == TranslationMode::Tiling) {
    const auto gap = cs_subtract(ClopenSet::integers(field), folded.image);
    if (!gap.empty()) {
      auto wit = Witness::of_set(gap);
      v.add(fail(name, wit, "translates miss " + to_string(*wit.ball) + " (gap measure " +
                                to_fraction_string(*wit.measure) + ")"));
      return v;
    }
  }
  v.add(pass(name));
  return v;
}

Verdict verify_pf_multiwavelet_set(const std::vector<ClopenSet>& components) {
  return multiwavelet(components, TranslationMode::Packing);
}

Verdict verify_multiwavelet_set(const std::vector<ClopenSet>& components) {
  return multiwavelet(components, TranslationMode::Tiling);
}

Check joint_fold_check(const FieldConfigPtr& field, const std::vector<Ball>& fragments, SuperMode mode,
                       const std::string& name) {
  Rational total = 0;
  for (const auto& b : fragments) {
    if (b.base_exponent() < 0) throw std::invalid_argument("fold fragment outside O: " + to_string(b));
    total += b.measure();
  }
  const std::string measure_text = "joint fold measure " + to_fraction_string(total);
  const auto [covered, overlap] = coverage(field, 0, fragments);
  if (mode == SuperMode::Orthonormal && total != 1) {
    auto w = Witness::of_measure(total);
    if (!overlap.empty()) {
      w.set = overlap;
      w.ball = Witness::of_set(overlap).ball;
    }
    return fail(name, w, measure_text + ", expected 1");
  }
  if (!overlap.empty()) {
    auto w = Witness::of_set(overlap);
    w.measure = total;
    return fail(name, w, measure_text + "; folds overlap on measure " + to_fraction_string(overlap.measure()));
  }
  if (mode == SuperMode::Orthonormal) {
    const auto gap = cs_subtract(ClopenSet::integers(field), covered);
    if (!gap.empty()) return fail(name, Witness::of_set(gap), measure_text + "; folds miss part of O");
  }
  return pass(name, measure_text);
}

Verdict verify_superwavelet(const std::vector<ClopenSet>& components, SuperMode mode) {
  require_nonempty(components);
  const auto& field = components.front().field();
  Verdict v;
  v.set_fact("order", std::to_string(components.size()));
  std::vector<Ball> fragments;
  Rational total = 0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    v.absorb(check_dilation_tiling(components[i]), component_name(i) + " ");
    v.absorb(check_translation(components[i], TranslationMode::Packing), component_name(i) + " ");
    for (const auto& f : cs_fold(components[i]).fragments) fragments.push_back(f.ball);
    total += components[i].measure();
  }
  v.set_fact("joint_fold_measure", to_fraction_string(total));
  v.add(joint_fold_check(field, fragments, mode,
                         mode == SuperMode::Orthonormal ? "joint fold tiling" : "joint fold packing"));
  return v;
}

Verdict verify_frame_pointwise(const std::vector<StepFunction>& family) {
  require_nonempty(family);
  Verdict v;
  v.set_fact("order", std::to_string(family.size()));
  v.add(dilation_sum_check(family, "dilation sum equals 1"));
  v.add(translation_correlations(family, v.bounds(), "translation correlations vanish"));
  return v;
}

Verdict verify_translates(const StepFunction& phi, TranslatesMode mode) {
  const auto& field = phi.field();
  const auto w = sf_weight(phi);
  const auto one = one_of(field);
  Verdict v;
  const bool indicator =
      std::all_of(phi.cells().begin(), phi.cells().end(), [&](const Cell& c) { return c.second == one; });
  v.set_fact("indicator", indicator ? "true" : "false");
  if (mode == TranslatesMode::Parseval) {
    const std::string name = "translate weight at most 1";
    for (const auto& [b, val] : w.cells()) {
      if ((one - val).sign() < 0) {
        v.add(fail(name, Witness::of_ball(b), "weight " + to_display_string(val) + " on " + to_string(b)));
        return v;
      }
    }
    v.add(pass(name));
  } else {
    const std::string name = "translate weight equals 1";
    if (auto bad = compare_to_constant(w, ClopenSet::integers(field), one)) {
      v.add(fail(name, bad->first, bad->second));
    } else {
      v.add(pass(name));
    }
  }
  return v;
}

StepFunction correlation(const std::vector<StepFunction>& tuple, int n) {
  require_nonempty(tuple);
  const auto& field = tuple.front().field();
  const unsigned q = field->q();
  const Ball integers = integers_ball(field);
  std::vector<Cell> folded;
  for (const auto& eta : tuple) {
    for (const auto& [c, vc] : eta.cells()) {
      for (const auto& [c1, v1] : eta.cells()) {
        const auto region = ball_intersection(c, c1.scaled(n));
        if (!region) continue;
        const CycloScalar value = v1 * vc.conj();
        if (region->scale() >= 0) {
          folded.emplace_back(Ball(fractional_part(region->center()).remainder, region->scale()), value);
        } else {
          folded.emplace_back(integers, value.scaled(rational_power(q, -region->scale())));
        }
      }
    }
  }
  return StepFunction::accumulate(field, folded);
}

int correlation_range(const std::vector<StepFunction>& tuple) {
  std::optional<int> lo, hi;
  for (const auto& eta : tuple) {
    for (const auto& [b, v] : eta.cells()) {
      const auto [l, h] = cell_levels(b);
      lo = lo ? std::min(*lo, l) : l;
      hi = hi ? std::max(*hi, h) : h;
    }
  }
  if (!lo) return 0;
  return std::max(0, *hi - *lo);
}

Verdict verify_super_general(const std::vector<StepFunction>& tuple) {
  require_nonempty(tuple);
  const auto& field = tuple.front().field();
  Verdict v;
  v.set_fact("order", std::to_string(tuple.size()));
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const std::string prefix = "eta" + std::to_string(i + 1) + " ";
    v.add(dilation_sum_check({tuple[i]}, prefix + "dilation sum equals 1"));
    v.add(translation_correlations({tuple[i]}, v.bounds(), prefix + "translation correlations vanish"));
  }
  const int range = correlation_range(tuple);
  v.bounds().k_max = range;
  const std::string name = "joint dilation correlations";
  const auto identity = StepFunction::indicator(ClopenSet::integers(field));
  for (int n = 0; n <= range; ++n) {
    const auto corr = correlation(tuple, n);
    const auto expected = n == 0 ? identity : StepFunction(field);
    if (corr == expected) continue;
    const auto diff = StepFunction::accumulate(field, [&] {
      std::vector<Cell> cells = corr.cells();
      for (const auto& [b, val] : expected.cells()) cells.emplace_back(b, -val);
      return cells;
    }());
    const auto& [b, val] = diff.cells().front();
    auto w = Witness::of_point(b.center());
    w.ball = b;
    v.add(fail(name, w, "n = " + std::to_string(n) + ", correlation value " + to_string(corr.eval(b.center()))));
    return v;
  }
  v.add(pass(name, "n <= " + std::to_string(range)));
  return v;
}

Verdict equivalent_superwavelets(const std::vector<StepFunction>& a, const std::vector<StepFunction>& b) {
  require_nonempty(a);
  require_nonempty(b);
  require_same_field(*a.front().field(), *b.front().field());
  const auto& field = a.front().field();
  const int range = std::max(correlation_range(a), correlation_range(b));
  Verdict v;
  v.bounds().k_max = range;
  const std::string name = "dilation correlations agree";
  for (int n = 0; n <= range; ++n) {
    const auto ca = correlation(a, n);
    const auto cb = correlation(b, n);
    if (ca == cb) continue;
    std::vector<Cell> cells = ca.cells();
    for (const auto& [ball, val] : cb.cells()) cells.emplace_back(ball, -val);
    const auto diff = StepFunction::accumulate(field, cells);
    const auto& [ball, val] = diff.cells().front();
    auto w = Witness::of_point(ball.center());
    w.ball = ball;
    v.add(fail(name, w,
               "n = " + std::to_string(n) + ": " + to_string(ca.eval(ball.center())) + " vs " +
                   to_string(cb.eval(ball.center()))));
    return v;
  }
  v.add(pass(name, "n <= " + std::to_string(range)));
  return v;
}

BoundReport inv_norm_integral(const StepFunction& f) {
  const auto& field = f.field();
  BoundReport r{false, f.zero(), std::nullopt};
  for (const auto& [b, v] : f.cells()) {
    if (b.base_exponent() < 0) throw std::invalid_argument("function not supported in O: " + to_string(b));
    if (b.contains_zero()) return {true, f.zero(), std::nullopt};
    r.value += v.scaled(rational_power(field->q(), b.center().valuation() - b.scale()));
  }
  return r;
}

BoundReport decomposability_bound(const StepFunction& psi) {
  return bound_from(inv_norm_integral(sf_weight(psi)), psi.field());
}

BoundReport extendability_bound(const StepFunction& psi) {
  const auto& field = psi.field();
  const auto w = sf_weight(psi);
  const auto one = one_of(field);
  for (const auto& [b, v] : w.cells()) {
    if ((one - v).sign() < 0) {
      throw PreconditionError("translate weight exceeds 1 on " + to_string(b), Witness::of_ball(b));
    }
  }
  const auto complement = StepFunction::indicator(ClopenSet::integers(field)) + w * (-one);
  return bound_from(inv_norm_integral(complement), field);
}

Verdict mra_scaling_check(const ClopenSet& w, const ClopenSet& s) {
  require_same_field(*w.field(), *s.field());
  const unsigned q = w.field()->q();
  Verdict v;
  const auto ps = cs_scale(s, 1);
  if (cs_subset(ps, s)) {
    v.add(pass("pS within S"));
  } else {
    v.add(fail("pS within S", Witness::of_set(cs_subtract(ps, s)), "pS leaves S"));
  }
  const auto layer = cs_subtract(cs_scale(s, -1), s);
  if (layer == w) {
    v.add(pass("p^-1 S minus S equals W"));
  } else {
    const auto diff = cs_union(cs_subtract(layer, w), cs_subtract(w, layer));
    v.add(fail("p^-1 S minus S equals W", Witness::of_set(diff), "symmetric difference is nonempty"));
  }
  const Rational expected = w.measure() / Rational(q - 1);
  if (s.measure() == expected) {
    v.add(pass("scaling set measure", "|S| = " + to_fraction_string(expected)));
  } else {
    v.add(fail("scaling set measure", Witness::of_measure(s.measure()),
               "|S| = " + to_fraction_string(s.measure()) + ", expected " + to_fraction_string(expected)));
  }
  const auto packing = check_translation(s, TranslationMode::Packing);
  v.absorb(packing, "S ");
  if (packing.passed()) {
    const bool tiles = check_translation(s, TranslationMode::Tiling).passed();
    v.set_fact("mra", tiles ? "tiling (MRA)" : "packing (Parseval frame MRA)");
  }
  return v;
}

std::string to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::None:
      return "none";
    case WitnessKind::Ball:
      return "ball";
    case WitnessKind::Set:
      return "set";
    case WitnessKind::Point:
      return "point";
    case WitnessKind::Measure:
      return "measure";
  }
  return "none";
}

std::string to_text(const Verdict& v) {
  std::ostringstream os;
  for (const auto& c : v.checks()) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    if (!c.passed) {
      const auto& w = c.witness;
      os << " [witness " << to_string(w.kind);
      if (w.kind == WitnessKind::Point && w.point) os << " " << to_string(*w.point);
      if (w.ball) os << " " << to_string(*w.ball);
      if (w.measure) os << (w.kind == WitnessKind::Measure ? " " : " measure ") << to_fraction_string(*w.measure);
      os << "]";
    }
    os << "\n";
  }
  for (const auto& [k, val] : v.facts()) os << "  " << k << " = " << val << "\n";
  const auto& b = v.bounds();
  if (b.s_max) os << "  s_max = " << *b.s_max << "\n";
  if (b.j_max) os << "  j_max = " << *b.j_max << "\n";
  if (b.k_max) os << "  k_max = " << *b.k_max << "\n";
  os << (v.passed() ? "verdict: pass" : "verdict: fail") << "\n";
  return os.str();
}

}  // namespace lfw
