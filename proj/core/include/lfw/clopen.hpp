#pragma once

// Compact-open subsets of K as canonical finite disjoint unions of balls.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lfw/lfield.hpp"
#include "lfw/rational.hpp"

namespace lfw {

/// Upper bound on the number of balls any refinement may produce.
constexpr std::size_t kMaxRefinementPieces = std::size_t{1} << 22;

/// center + p^scale O, with the center reduced to its digits below scale.
class Ball {
 public:
  Ball(FieldElement center, int scale);

  const FieldElement& center() const { return center_; }
  int scale() const { return scale_; }
  const FieldConfigPtr& field() const { return center_.field(); }

  Rational measure() const;
  bool contains(const FieldElement& x) const;
  /// other is a subset of this ball.
  bool contains(const Ball& other) const;
  bool intersects(const Ball& other) const;
  bool contains_zero() const { return center_.is_zero(); }
  /// Lowest exponent needed to address the ball: min(valuation(center), scale).
  int base_exponent() const;

  Ball parent() const;
  std::vector<Ball> children() const;
  /// All sub-balls at scale k >= scale(); throws std::length_error past the cap.
  std::vector<Ball> refine_to(int k) const;

  Ball scaled(int j) const { return Ball(center_.shifted(j), scale_ + j); }
  Ball translated(const FieldElement& t) const { return Ball(center_ + t, scale_); }

  bool operator==(const Ball& o) const { return scale_ == o.scale_ && center_ == o.center_; }
  /// Canonical order: scale, then center digits.
  bool operator<(const Ball& o) const;

 private:
  FieldElement center_;
  int scale_;
};

class ClopenSet {
 public:
  explicit ClopenSet(FieldConfigPtr field);
  /// Any list of balls; overlaps and nesting are resolved.
  ClopenSet(FieldConfigPtr field, std::vector<Ball> raw);

  static ClopenSet integers(const FieldConfigPtr& field);
  static ClopenSet units(const FieldConfigPtr& field);
  /// p^s O*.
  static ClopenSet shell(const FieldConfigPtr& field, int s);
  /// p^k O.
  static ClopenSet ideal(const FieldConfigPtr& field, int k);
  static ClopenSet of_ball(const Ball& b) { return ClopenSet(b.field(), {b}); }

  const FieldConfigPtr& field() const { return field_; }
  const std::vector<Ball>& balls() const { return balls_; }
  bool empty() const { return balls_.empty(); }
  bool contains(const FieldElement& x) const;
  Rational measure() const;
  int min_scale() const;
  int max_scale() const;
  /// Smallest base exponent over the balls (the set lies in p^base O).
  int base_exponent() const;
  /// Some ball contains 0.
  bool contains_zero() const;

  bool operator==(const ClopenSet& o) const { return balls_ == o.balls_; }

 private:
  FieldConfigPtr field_;
  std::vector<Ball> balls_;
};

ClopenSet cs_normalize(const FieldConfigPtr& field, std::vector<Ball> raw);
ClopenSet cs_union(const ClopenSet& a, const ClopenSet& b);
ClopenSet cs_intersect(const ClopenSet& a, const ClopenSet& b);
ClopenSet cs_subtract(const ClopenSet& a, const ClopenSet& b);
ClopenSet cs_union_all(const FieldConfigPtr& field, const std::vector<ClopenSet>& sets);
bool cs_subset(const ClopenSet& a, const ClopenSet& b);
/// p^j W.
ClopenSet cs_scale(const ClopenSet& w, int j);
/// W + t.
ClopenSet cs_translate(const ClopenSet& w, const FieldElement& t);
Rational cs_measure(const ClopenSet& w);

struct FoldFragment {
  Ball ball;
  std::uint64_t source;
};

struct FoldResult {
  /// One fragment per ball of W refined to scale >= 0, in canonical ball order.
  std::vector<FoldFragment> fragments;
  ClopenSet image;
  /// Points of O covered by two or more fragments.
  ClopenSet overlap;
};

/// Moves every piece of W into O by xi -> xi - u(l).
FoldResult cs_fold(const ClopenSet& w);

struct ExtendedRational {
  bool infinite = false;
  Rational value;

  bool operator==(const ExtendedRational& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
};

/// Integral of 1/|xi| over W; +infinity when a ball of W contains 0.
ExtendedRational cs_inv_norm_integral(const ClopenSet& w);

struct ShellDecomposition {
  /// (s, W intersect p^s O*) for every nonempty shell, ascending in s.
  std::vector<std::pair<int, ClopenSet>> shells;
  /// p^depth O when W contains a neighbourhood of 0 not peeled into shells.
  std::optional<Ball> zero_ball;
};

/// Shell decomposition; balls around 0 are peeled up to `depth`, which
/// defaults to the largest ball scale.
ShellDecomposition cs_shells(const ClopenSet& w, std::optional<int> depth = std::nullopt);

std::string to_string(const Ball& b);
std::string to_string(const ClopenSet& w);

}  // namespace lfw
