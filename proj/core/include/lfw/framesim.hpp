#pragma once

// Brute-force affine systems on a finite window of the frequency side.
//
// Spectra are step functions. D^j T^k psi has Fourier transform
// q^{-j/2} chi(-u(k) p^j xi) psi^(p^j xi); inner products are integrals of
// step functions against characters, evaluated ball by ball and summed over
// every (j, k) at which they can be nonzero.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lfw/stepfn.hpp"

namespace lfw {

class WindowError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Functions supported in p^{-R} O and constant on cosets of p^S O.
struct FiniteModel {
  int R = 3;
  int S = 3;

  /// Throws WindowError unless f lies in the window.
  void require(const StepFunction& f) const;
  /// The q^{R+S} balls of scale S inside p^{-R} O.
  std::vector<Ball> mesh(const FieldConfigPtr& field) const;
};

/// One component per summand of the direct sum; plain wavelets are 1-tuples.
using SpectrumTuple = std::vector<StepFunction>;

/// integral over B of chi(y xi) d xi, via the closed form on balls.
CycloScalar ball_character_integral(const Ball& b, const FieldElement& y);
/// The same integral summed over the sub-balls on which chi(y .) is constant.
CycloScalar ball_character_integral_refined(const Ball& b, const FieldElement& y);

/// (D^j T^k psi)^ as an exact function of xi.
CycloScalar affine_spectrum_at(const StepFunction& psi, int j, std::uint64_t k, const FieldElement& xi);

/// <f, D^j T^k psi> computed from the spectra.
CycloScalar affine_coef(const StepFunction& f, const StepFunction& psi, int j, std::uint64_t k);
/// sum_i <f_i, D^j T^k eta_i>.
CycloScalar affine_coef(const SpectrumTuple& f, const SpectrumTuple& eta, int j, std::uint64_t k);

struct ResidualReport {
  CycloScalar residual;
  CycloScalar norm_sq;
  CycloScalar energy;
  /// Dilations evaluated one by one; below j_lo a geometric tail is summed.
  int j_lo = 0;
  int j_hi = -1;
  std::optional<int> tail_from;
  /// Largest sigma with k < q^sigma enumerated at some j.
  int k_digits = 0;
  std::uint64_t coefficients = 0;
  /// Coefficients recomputed for k in [q^sigma, q^{sigma+1}) by refinement.
  std::uint64_t spot_checks = 0;
};

/// ||f||^2 - sum_m sum_j sum_k |<f, D^j T^k eta_m>|^2 for a family of tuples.
/// Every eta component must vanish near 0 (PreconditionError otherwise).
ResidualReport parseval_residual(const std::vector<SpectrumTuple>& family, const SpectrumTuple& f,
                                 const FiniteModel& window, bool spot_check = false);
ResidualReport parseval_residual(const std::vector<StepFunction>& family, const StepFunction& f,
                                 const FiniteModel& window, bool spot_check = false);

/// sum_i <D^j T^k eta_i, D^j' T^k' eta_i>.
CycloScalar gram_entry(const SpectrumTuple& eta, std::pair<int, std::uint64_t> a,
                       std::pair<int, std::uint64_t> b);

/// Indicator of one mesh ball placed in one tuple component.
std::vector<SpectrumTuple> mesh_deltas(const FieldConfigPtr& field, const FiniteModel& window,
                                       std::size_t components);
/// One to eight disjoint balls in the window with small cyclotomic values.
StepFunction random_step_function(const FieldConfigPtr& field, const FiniteModel& window,
                                  std::mt19937_64& rng);
SpectrumTuple random_spectrum_tuple(const FieldConfigPtr& field, const FiniteModel& window,
                                    std::size_t components, std::mt19937_64& rng);

/// Worker count from LFW_THREADS, else the hardware concurrency.
unsigned worker_count();
/// Runs body(i) for i in [0, n) on worker_count() threads; rethrows the first
/// exception by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

struct SimulationReport {
  std::size_t mesh_functions = 0;
  std::size_t random_functions = 0;
  std::size_t nonzero_residuals = 0;
  /// Description and residual of the first failing function, if any.
  std::optional<std::string> first_failure;
  int k_digits = 0;
  std::uint64_t coefficients = 0;
  std::uint64_t spot_checks = 0;

  bool passed() const { return nonzero_residuals == 0; }
};

/// Residuals on every mesh delta plus `trials` seeded random tuples.
SimulationReport simulate_parseval(const std::vector<SpectrumTuple>& family, const FiniteModel& window,
                                   std::size_t trials, std::uint64_t seed);

/// Wraps sets as indicator tuples: one tuple per set, or a single tuple.
std::vector<SpectrumTuple> indicator_family(const std::vector<ClopenSet>& sets);
SpectrumTuple indicator_tuple(const std::vector<ClopenSet>& sets);

}  // namespace lfw
