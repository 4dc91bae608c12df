#include "lfw/stepfn.hpp"

#include <algorithm>
#include <map>

#include "digit_trie.hpp"

namespace lfw {

namespace {

// Merges q equal-valued siblings bottom-up; input cells are disjoint and nonzero.
std::vector<Cell> merge_siblings(const FieldConfigPtr& field, std::vector<Cell> cells) {
  if (cells.empty()) return cells;
  const unsigned q = field->q();
  std::map<int, std::map<Ball, CycloScalar>> by_scale;
  for (auto& [b, v] : cells) by_scale[b.scale()].emplace(b, std::move(v));
  std::vector<Cell> out;
  while (!by_scale.empty()) {
    auto top = std::prev(by_scale.end());
    const int k = top->first;
    std::map<Ball, std::vector<std::pair<Ball, CycloScalar>>> groups;
    for (auto& [b, v] : top->second) groups[b.parent()].emplace_back(b, v);
    by_scale.erase(top);
    for (auto& [parent, kids] : groups) {
      bool merge = kids.size() == q;
      for (std::size_t i = 1; merge && i < kids.size(); ++i) merge = kids[i].second == kids[0].second;
      if (merge) {
        by_scale[k - 1].emplace(parent, kids[0].second);
      } else {
        for (auto& kv : kids) out.push_back(std::move(kv));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Cell& a, const Cell& b) { return a.first < b.first; });
  return out;
}

std::vector<int> distinct_scales(const std::vector<Cell>& cells) {
  std::vector<int> s;
  for (const auto& c : cells) s.push_back(c.first.scale());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

int base_of(const std::vector<Cell>& cells) {
  int base = cells.front().first.base_exponent();
  for (const auto& c : cells) base = std::min(base, c.first.base_exponent());
  return base;
}

}  // namespace

StepFunction::StepFunction(FieldConfigPtr field) : field_(std::move(field)) {
  if (!field_) throw std::invalid_argument("null field");
}

StepFunction::StepFunction(FieldConfigPtr field, std::vector<Cell> cells) : field_(std::move(field)) {
  if (!field_) throw std::invalid_argument("null field");
  std::vector<Cell> nonzero;
  for (auto& c : cells) {
    require_same_field(*field_, *c.first.field());
    if (c.second.p() != field_->p() || c.second.c() != field_->c()) {
      throw std::invalid_argument("cell value from a different field");
    }
    if (!c.second.is_zero()) nonzero.push_back(std::move(c));
  }
  std::sort(nonzero.begin(), nonzero.end(), [](const Cell& a, const Cell& b) { return a.first < b.first; });
  if (!nonzero.empty()) {
    detail::AccumTrie<int> trie(field_, base_of(nonzero));
    for (const auto& c : nonzero) trie.add(c.first, 1);
    trie.for_each_cell([](const Ball& b, const int& n) {
      if (n > 1) throw std::invalid_argument("step function cells overlap at " + to_string(b));
    });
  }
  cells_ = merge_siblings(field_, std::move(nonzero));
  scales_ = distinct_scales(cells_);
}

StepFunction StepFunction::indicator(const ClopenSet& w) {
  return constant_on(w, CycloScalar::from_rational(w.field()->p(), w.field()->c(), 1));
}

StepFunction StepFunction::constant_on(const ClopenSet& w, const CycloScalar& value) {
  std::vector<Cell> cells;
  for (const auto& b : w.balls()) cells.emplace_back(b, value);
  return StepFunction(w.field(), std::move(cells));
}

StepFunction StepFunction::accumulate(const FieldConfigPtr& field, const std::vector<Cell>& weighted) {
  StepFunction f(field);
  if (weighted.empty()) return f;
  detail::AccumTrie<CycloScalar> trie(field, base_of(weighted));
  for (const auto& [b, v] : weighted) trie.add(b, v);
  std::vector<Cell> cells;
  trie.for_each_cell([&](const Ball& b, const CycloScalar& v) {
    if (!v.is_zero()) cells.emplace_back(b, v);
  });
  f.cells_ = merge_siblings(field, std::move(cells));
  f.scales_ = distinct_scales(f.cells_);
  return f;
}

CycloScalar StepFunction::eval(const FieldElement& xi) const {
  for (int k : scales_) {
    const Ball key(xi, k);
    auto it = std::lower_bound(cells_.begin(), cells_.end(), key,
                               [](const Cell& c, const Ball& b) { return c.first < b; });
    if (it != cells_.end() && it->first == key) return it->second;
  }
  return zero();
}

ClopenSet StepFunction::support() const {
  std::vector<Ball> balls;
  for (const auto& c : cells_) balls.push_back(c.first);
  return ClopenSet(field_, std::move(balls));
}

StepFunction StepFunction::operator+(const StepFunction& o) const {
  std::vector<Cell> all = cells_;
  all.insert(all.end(), o.cells_.begin(), o.cells_.end());
  return accumulate(field_, all);
}

StepFunction StepFunction::operator*(const CycloScalar& s) const {
  std::vector<Cell> cells;
  for (const auto& [b, v] : cells_) cells.emplace_back(b, v * s);
  return StepFunction(field_, std::move(cells));
}

CycloScalar sf_eval(const StepFunction& f, const FieldElement& xi) { return f.eval(xi); }

std::vector<Ball> sf_common_refinement(const std::vector<StepFunction>& fs, const std::vector<ClopenSet>& extra) {
  std::vector<Ball> all;
  FieldConfigPtr field;
  for (const auto& f : fs) {
    field = f.field();
    for (const auto& c : f.cells()) all.push_back(c.first);
  }
  for (const auto& s : extra) {
    field = s.field();
    all.insert(all.end(), s.balls().begin(), s.balls().end());
  }
  if (all.empty()) return {};
  int base = all.front().base_exponent();
  for (const auto& b : all) base = std::min(base, b.base_exponent());
  detail::AccumTrie<int> trie(field, base);
  for (const auto& b : all) trie.add(b, 1);
  std::vector<Ball> mesh;
  trie.for_each_cell([&](const Ball& b, const int&) { mesh.push_back(b); });
  std::sort(mesh.begin(), mesh.end());
  return mesh;
}

StepFunction sf_weight(const StepFunction& phi) {
  const auto& field = phi.field();
  const Ball integers(FieldElement(field), 0);
  std::vector<Cell> weighted;
  for (const auto& [b, v] : phi.cells()) {
    const CycloScalar w = cy_abs_sq(v);
    if (b.scale() < 0) {
      // b is a union of q^{-k} translates of O, each covering O once after folding.
      weighted.emplace_back(integers, w.scaled(rational_power(field->q(), -b.scale())));
    } else {
      weighted.emplace_back(Ball(fractional_part(b.center()).remainder, b.scale()), w);
    }
  }
  return StepFunction::accumulate(field, weighted);
}

CycloScalar sf_eval_periodic(const StepFunction& f, const FieldElement& xi) {
  return f.eval(fractional_part(xi).remainder);
}

std::string to_string(const StepFunction& f) {
  if (f.is_zero()) return "step{}";
  std::string s = "step{ ";
  for (std::size_t i = 0; i < f.cells().size(); ++i) {
    if (i > 0) s += ", ";
    s += "(" + to_string(f.cells()[i].first) + ", " + to_string(f.cells()[i].second) + ")";
  }
  return s + " }";
}

}  // namespace lfw
