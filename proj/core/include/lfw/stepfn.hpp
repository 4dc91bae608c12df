#pragma once

// Piecewise-constant functions on K with cyclotomic values.

#include <string>
#include <utility>
#include <vector>

#include "lfw/clopen.hpp"
#include "lfw/cyclo.hpp"

namespace lfw {

using Cell = std::pair<Ball, CycloScalar>;

class StepFunction {
 public:
  explicit StepFunction(FieldConfigPtr field);
  /// Cells must be pairwise disjoint; zero values are dropped and q equal
  /// siblings merge into their parent.
  StepFunction(FieldConfigPtr field, std::vector<Cell> cells);

  static StepFunction indicator(const ClopenSet& w);
  static StepFunction constant_on(const ClopenSet& w, const CycloScalar& value);
  /// Sum of value * indicator(ball) over possibly overlapping balls.
  static StepFunction accumulate(const FieldConfigPtr& field, const std::vector<Cell>& weighted);

  const FieldConfigPtr& field() const { return field_; }
  /// Canonical nonzero cells in ball order.
  const std::vector<Cell>& cells() const { return cells_; }
  bool is_zero() const { return cells_.empty(); }
  CycloScalar zero() const { return CycloScalar(field_->p(), field_->c()); }

  CycloScalar eval(const FieldElement& xi) const;
  ClopenSet support() const;

  StepFunction operator+(const StepFunction& o) const;
  StepFunction operator*(const CycloScalar& s) const;
  bool operator==(const StepFunction& o) const { return cells_ == o.cells_; }

 private:
  FieldConfigPtr field_;
  std::vector<Cell> cells_;
  std::vector<int> scales_;
};

CycloScalar sf_eval(const StepFunction& f, const FieldElement& xi);

/// Disjoint balls covering every support and extra set such that each input
/// is constant on every ball; ball centers serve as representative points.
std::vector<Ball> sf_common_refinement(const std::vector<StepFunction>& fs, const std::vector<ClopenSet>& extra);

/// w(xi) = sum_k |phi(xi + u(k))|^2 as a step function on O.
StepFunction sf_weight(const StepFunction& phi);

/// Value at the representative of xi modulo the lattice {u(k)}: f(xi - u(l))
/// where u(l) is the fractional part of xi. Meaningful for f supported in O.
CycloScalar sf_eval_periodic(const StepFunction& f, const FieldElement& xi);

std::string to_string(const StepFunction& f);

}  // namespace lfw
