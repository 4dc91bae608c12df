#pragma once

// Builders for the standard wavelet-set families, scaling sets with a measure
// certificate, and an exact-cover search completing a packing family to an
// orthonormal super-wavelet at a stated resolution.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "lfw/clopen.hpp"
#include "lfw/verify.hpp"

namespace lfw {

/// {O + u(i) : 1 <= i < q}.
std::vector<ClopenSet> shannon_multiwavelet(const FieldConfigPtr& field);
/// p^m O*.
ClopenSet annulus_wavelet(const FieldConfigPtr& field, int m);
/// {p^m O + p^m u(i) : 1 <= i < q}.
std::vector<ClopenSet> scaled_shannon(const FieldConfigPtr& field, int m);
/// (p O*, ..., p^n O*).
std::vector<ClopenSet> shell_superwavelet(const FieldConfigPtr& field, int n);

struct ScalingSet {
  ClopenSet set;
  bool certified = false;
};

/// union_{j >= 1} p^j W, exact when certified; throws PreconditionError unless
/// W tiles under dilation.
ScalingSet scaling_set(const ClopenSet& w, int depth);

enum class SolveStatus { Solved, Unsat, ResourceCap };

struct SolveLimits {
  long max_nodes = 200'000'000;
  std::chrono::milliseconds time_limit{60'000};
};

struct SolveRequest {
  std::vector<ClopenSet> existing;
  int shell_lo = 0;
  int shell_hi = 0;
  int max_scale = 0;
  /// Fold target; defaults to O minus the joint fold of the existing sets.
  std::optional<ClopenSet> target;
  SolveLimits limits;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unsat;
  std::optional<ClopenSet> set;
  ClopenSet target;
  std::size_t pool_size = 0;
  std::size_t dilation_cells = 0;
  std::size_t fold_cells = 0;
  long nodes = 0;
  /// How an Unsat answer was reached: "count mod (q-1)" or "exhaustive".
  std::string certificate;
  /// verify_superwavelet(existing + set, orthonormal) on a solved instance.
  std::optional<Verdict> verification;
};

/// Double exact cover over balls B(b, k) with v(b) in [shell_lo, shell_hi] and
/// max(0, v(b)+1) <= k <= max_scale: normalized images p^{-v(b)} B must
/// partition O*, fold images must partition the target.
SolveResult solve_complement(const SolveRequest& request);

std::string to_string(SolveStatus s);

/// Joint fold condition for existing components plus a hypothetical component
/// whose fold image is target.
Check completion_joint_fold(const std::vector<ClopenSet>& existing, const ClopenSet& target, const std::string& name);

/// Example family with components p^{i-1} O* for i = 1..n-1 and a missing
/// component whose fold image is prescribed.
struct MissingComponentFamily {
  std::vector<ClopenSet> existing;
  ClopenSet printed_target;    // p^{n-2} O
  ClopenSet corrected_target;  // p^{n-1} O
};

MissingComponentFamily missing_component_family(const FieldConfigPtr& field, int n);

/// completion_joint_fold for the family's existing components.
Check missing_component_joint_fold(const MissingComponentFamily& family, const ClopenSet& target, const std::string& name);

}  // namespace lfw
