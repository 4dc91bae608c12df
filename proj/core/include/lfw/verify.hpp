#pragma once

// Exact decision procedures for wavelet-set, frame and super-wavelet criteria.
//
// Every infinite condition is reduced to a finite one before evaluation:
// dilation conditions are normalized into O*, translation conditions are
// folded into O, and the remaining index ranges are derived from the supports
// and recorded in the verdict.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfw/clopen.hpp"
#include "lfw/stepfn.hpp"

namespace lfw {

enum class WitnessKind { None, Ball, Set, Point, Measure };

struct Witness {
  WitnessKind kind = WitnessKind::None;
  std::optional<Ball> ball;
  std::optional<ClopenSet> set;
  std::optional<FieldElement> point;
  std::optional<Rational> measure;

  static Witness none() { return {}; }
  static Witness of_ball(const Ball& b);
  /// Set witness; the ball field holds a representative ball of the set.
  static Witness of_set(const ClopenSet& s);
  static Witness of_point(const FieldElement& x);
  static Witness of_measure(const Rational& m);
};

struct Check {
  std::string name;
  bool passed = false;
  Witness witness;
  std::string detail;
};

struct VerdictBounds {
  std::optional<long> s_max;
  std::optional<long> j_max;
  std::optional<long> k_max;
};

class Verdict {
 public:
  /// True iff every check passed.
  bool passed() const;
  const std::vector<Check>& checks() const { return checks_; }
  const VerdictBounds& bounds() const { return bounds_; }
  VerdictBounds& bounds() { return bounds_; }
  const std::map<std::string, std::string>& facts() const { return facts_; }

  void add(Check c);
  void set_fact(const std::string& key, const std::string& value) { facts_[key] = value; }
  /// Appends the checks of another verdict, prefixing their names.
  void absorb(const Verdict& other, const std::string& prefix);
  const Check* find(const std::string& name) const;

 private:
  std::vector<Check> checks_;
  VerdictBounds bounds_;
  std::map<std::string, std::string> facts_;
};

/// Raised when an input violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(const std::string& what, Witness w) : std::invalid_argument(what), witness_(std::move(w)) {}
  const Witness& witness() const { return witness_; }

 private:
  Witness witness_;
};

enum class TranslationMode { Packing, Tiling };
enum class SuperMode { Orthonormal, Parseval };
enum class TranslatesMode { Parseval, Orthonormal };

/// {p^j W : j in Z} partitions K.
Verdict check_dilation_tiling(const ClopenSet& w);
/// {W + u(k)} is pairwise disjoint (packing) or a partition of K (tiling).
Verdict check_translation(const ClopenSet& w, TranslationMode mode);

Verdict verify_pf_multiwavelet_set(const std::vector<ClopenSet>& components);
Verdict verify_multiwavelet_set(const std::vector<ClopenSet>& components);
Verdict verify_superwavelet(const std::vector<ClopenSet>& components, SuperMode mode);

/// Joint fold condition on fold fragments counted with multiplicity. Also
/// serves components known only through a hypothesized fold image.
Check joint_fold_check(const FieldConfigPtr& field, const std::vector<Ball>& fragments, SuperMode mode,
                       const std::string& name);

Verdict verify_frame_pointwise(const std::vector<StepFunction>& family);
Verdict verify_translates(const StepFunction& phi, TranslatesMode mode);
Verdict verify_super_general(const std::vector<StepFunction>& tuple);
Verdict equivalent_superwavelets(const std::vector<StepFunction>& a, const std::vector<StepFunction>& b);

/// sum_i sum_k eta_i(p^-n (xi + u(k))) conj(eta_i(xi + u(k))) on O.
StepFunction correlation(const std::vector<StepFunction>& tuple, int n);
/// Largest n for which correlation() can differ from its limiting form.
int correlation_range(const std::vector<StepFunction>& tuple);

struct BoundReport {
  bool infinite = false;
  CycloScalar value;
  /// Largest m not excluded by the necessary condition; empty when unbounded.
  std::optional<long> max_m;
};

/// I = integral over O of w(xi)/|xi|; m-decomposable wavelets need I >= m(q-1)/q.
BoundReport decomposability_bound(const StepFunction& psi);
/// J = integral over O of (1 - w(xi))/|xi|; throws PreconditionError when w > 1.
BoundReport extendability_bound(const StepFunction& psi);

/// Integral over O of f(xi)/|xi| for f supported in O.
BoundReport inv_norm_integral(const StepFunction& f);

Verdict mra_scaling_check(const ClopenSet& w, const ClopenSet& s);

std::string to_string(WitnessKind k);
std::string to_text(const Verdict& v);

}  // namespace lfw
