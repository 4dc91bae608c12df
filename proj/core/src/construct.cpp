#include "lfw/construct.hpp"

#include <algorithm>
#include <map>

namespace lfw {

namespace {

constexpr std::size_t kMaxPool = 4'000'000;

// Dancing-links exact cover with minimum-remaining-values column choice.
class ExactCover {
 public:
  ExactCover(int columns, const std::vector<std::vector<int>>& rows) {
    const int header = columns + 1;
    left_.resize(header);
    right_.resize(header);
    up_.resize(header);
    down_.resize(header);
    col_.resize(header);
    row_.assign(header, -1);
    size_.assign(header, 0);
    for (int i = 0; i < header; ++i) {
      left_[i] = (i + header - 1) % header;
      right_[i] = (i + 1) % header;
      up_[i] = down_[i] = col_[i] = i;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      int first = -1;
      for (int c : rows[r]) {
        const int h = c + 1;
        const int n = static_cast<int>(col_.size());
        col_.push_back(h);
        row_.push_back(static_cast<int>(r));
        up_.push_back(up_[h]);
        down_.push_back(h);
        down_[up_[h]] = n;
        up_[h] = n;
        ++size_[h];
        if (first < 0) {
          left_.push_back(n);
          right_.push_back(n);
          first = n;
        } else {
          left_.push_back(left_[first]);
          right_.push_back(first);
          right_[left_[first]] = n;
          left_[first] = n;
        }
      }
    }
  }

  enum class Outcome { Found, Exhausted, Capped };

  Outcome solve(const SolveLimits& limits) {
    limits_ = limits;
    start_ = std::chrono::steady_clock::now();
    if (search()) return Outcome::Found;
    return capped_ ? Outcome::Capped : Outcome::Exhausted;
  }

  const std::vector<int>& solution() const { return chosen_; }
  long nodes() const { return nodes_; }

 private:
  void cover(int c) {
    right_[left_[c]] = right_[c];
    left_[right_[c]] = left_[c];
    for (int i = down_[c]; i != c; i = down_[i]) {
      for (int j = right_[i]; j != i; j = right_[j]) {
        up_[down_[j]] = up_[j];
        down_[up_[j]] = down_[j];
        --size_[col_[j]];
      }
    }
  }

  void uncover(int c) {
    for (int i = up_[c]; i != c; i = up_[i]) {
      for (int j = left_[i]; j != i; j = left_[j]) {
        ++size_[col_[j]];
        up_[down_[j]] = j;
        down_[up_[j]] = j;
      }
    }
    right_[left_[c]] = c;
    left_[right_[c]] = c;
  }

  bool out_of_budget() {
    if (++nodes_ > limits_.max_nodes) return capped_ = true;
    if ((nodes_ & 1023) == 0 && std::chrono::steady_clock::now() - start_ > limits_.time_limit) return capped_ = true;
    return false;
  }

  bool search() {
    if (right_[0] == 0) return true;
    if (capped_ || out_of_budget()) return false;
    int c = right_[0];
    for (int j = right_[c]; j != 0; j = right_[j])
      if (size_[j] < size_[c]) c = j;
    if (size_[c] == 0) return false;
    cover(c);
    for (int r = down_[c]; r != c; r = down_[r]) {
      chosen_.push_back(row_[r]);
      for (int j = right_[r]; j != r; j = right_[j]) cover(col_[j]);
      if (search()) return true;
      for (int j = left_[r]; j != r; j = left_[j]) uncover(col_[j]);
      chosen_.pop_back();
      if (capped_) break;
    }
    uncover(c);
    return false;
  }

  std::vector<int> left_, right_, up_, down_, col_, row_, size_;
  std::vector<int> chosen_;
  SolveLimits limits_;
  std::chrono::steady_clock::time_point start_;
  long nodes_ = 0;
  bool capped_ = false;
};

Ball fold_ball(const Ball& b) { return Ball(fractional_part(b.center()).remainder, b.scale()); }

std::map<Ball, int> index_cells(const ClopenSet& s, int scale, int offset) {
  std::map<Ball, int> out;
  int i = offset;
  for (const auto& b : s.balls())
    for (const auto& cell : b.refine_to(scale)) out.emplace(cell, i++);
  return out;
}

void require_check(const Verdict& v, const std::string& what) {
  for (const auto& c : v.checks()) {
    if (!c.passed) throw PreconditionError(what + ": " + c.name + " fails (" + c.detail + ")", c.witness);
  }
}

}  // namespace

std::vector<ClopenSet> shannon_multiwavelet(const FieldConfigPtr& field) {
  std::vector<ClopenSet> out;
  for (std::uint64_t i = 1; i < field->q(); ++i) out.push_back(ClopenSet::of_ball(Ball(u_of_index(field, i), 0)));
  return out;
}

ClopenSet annulus_wavelet(const FieldConfigPtr& field, int m) {
  if (m < 1) throw std::invalid_argument("annulus needs m >= 1");
  return ClopenSet::shell(field, m);
}

std::vector<ClopenSet> scaled_shannon(const FieldConfigPtr& field, int m) {
  if (m < 1) throw std::invalid_argument("scaled Shannon family needs m >= 1");
  std::vector<ClopenSet> out;
  for (const auto& w : shannon_multiwavelet(field)) out.push_back(cs_scale(w, m));
  return out;
}

std::vector<ClopenSet> shell_superwavelet(const FieldConfigPtr& field, int n) {
  if (n < 1) throw std::invalid_argument("super-wavelet family needs n >= 1");
  std::vector<ClopenSet> out;
  for (int i = 1; i <= n; ++i) out.push_back(ClopenSet::shell(field, i));
  return out;
}

ScalingSet scaling_set(const ClopenSet& w, int depth) {
  if (depth < 1) throw std::invalid_argument("scaling set depth must be >= 1");
  require_check(check_dilation_tiling(w), "scaling set");
  const auto& field = w.field();
  std::vector<ClopenSet> layers;
  for (int j = 1; j <= depth; ++j) layers.push_back(cs_scale(w, j));
  const auto partial = cs_union_all(field, layers);
  const Rational remaining = w.measure() / Rational(field->q() - 1) - partial.measure();
  const auto tail = ClopenSet::ideal(field, depth + 1 + w.base_exponent());
  if (tail.measure() == remaining && cs_intersect(partial, tail).empty()) {
    return {cs_union(partial, tail), true};
  }
  return {partial, false};
}

SolveResult solve_complement(const SolveRequest& req) {
  if (req.shell_lo > req.shell_hi) throw std::invalid_argument("empty shell range");
  if (req.max_scale < 0) throw std::invalid_argument("max scale must be >= 0");
  if (req.existing.empty() && !req.target) {
    throw std::invalid_argument("solver needs existing components or an explicit target");
  }
  const FieldConfigPtr field = req.existing.empty() ? req.target->field() : req.existing.front().field();
  const unsigned q = field->q();
  const auto integers = ClopenSet::integers(field);

  std::vector<Ball> fragments;
  for (std::size_t i = 0; i < req.existing.size(); ++i) {
    const auto& w = req.existing[i];
    require_same_field(*field, *w.field());
    const std::string what = "existing component " + std::to_string(i + 1);
    require_check(check_dilation_tiling(w), what);
    require_check(check_translation(w, TranslationMode::Packing), what);
    for (const auto& f : cs_fold(w).fragments) fragments.push_back(f.ball);
  }
  const auto joint = joint_fold_check(field, fragments, SuperMode::Parseval, "joint fold packing");
  if (!joint.passed) throw PreconditionError("existing folds overlap", joint.witness);

  SolveResult result{SolveStatus::Unsat, std::nullopt, ClopenSet(field), 0, 0, 0, 0, {}, std::nullopt};
  result.target = req.target ? *req.target : cs_subtract(integers, ClopenSet(field, fragments));
  const auto& target = result.target;
  if (target.empty()) throw PreconditionError("fold target is empty", Witness::of_measure(0));
  if (!cs_subset(target, integers)) {
    throw PreconditionError("fold target leaves O", Witness::of_set(cs_subtract(target, integers)));
  }
  const int r = req.max_scale;
  if (target.max_scale() > r) throw std::invalid_argument("target is finer than the maximum scale");

  // Universe: O* at the finest normalized scale, then the target at scale r.
  const int dil_scale = r - req.shell_lo;
  if (dil_scale < 1) throw std::invalid_argument("maximum scale too small for the shell range");
  const auto dil_cells = index_cells(ClopenSet::units(field), dil_scale, 0);
  const auto fold_cells = index_cells(target, r, static_cast<int>(dil_cells.size()));
  result.dilation_cells = dil_cells.size();
  result.fold_cells = fold_cells.size();

  std::vector<Ball> pool;
  std::vector<std::vector<int>> rows;
  // Coarse candidates first so that short covers are tried early.
  std::vector<ClopenSet> shells;
  for (int s = req.shell_lo; s <= req.shell_hi; ++s) shells.push_back(ClopenSet::shell(field, s));
  for (int k = std::max(0, req.shell_lo + 1); k <= r; ++k) {
    for (int s = req.shell_lo; s <= std::min(req.shell_hi, k - 1); ++s) {
      for (const auto& shell_ball : shells[static_cast<std::size_t>(s - req.shell_lo)].balls()) {
        for (const auto& b : shell_ball.refine_to(k)) {
          const Ball folded = fold_ball(b);
          std::vector<int> row;
          bool inside = true;
          for (const auto& cell : folded.refine_to(r)) {
            const auto it = fold_cells.find(cell);
            if (it == fold_cells.end()) {
              inside = false;
              break;
            }
            row.push_back(it->second);
          }
          if (!inside) continue;
          for (const auto& cell : b.scaled(-s).refine_to(dil_scale)) row.push_back(dil_cells.at(cell));
          pool.push_back(b);
          rows.push_back(std::move(row));
          if (pool.size() > kMaxPool) {
            result.status = SolveStatus::ResourceCap;
            return result;
          }
        }
      }
    }
  }
  result.pool_size = pool.size();

  // Each candidate covers a power of q cells in each universe, hence one cell
  // modulo q-1; an exact cover selects the same number of candidates for both.
  if (q > 2 && dil_cells.size() % (q - 1) != fold_cells.size() % (q - 1)) {
    result.status = SolveStatus::Unsat;
    result.certificate = "count mod (q-1)";
    return result;
  }

  ExactCover dlx(static_cast<int>(dil_cells.size() + fold_cells.size()), rows);
  const auto outcome = dlx.solve(req.limits);
  result.nodes = dlx.nodes();
  if (outcome == ExactCover::Outcome::Capped) {
    result.status = SolveStatus::ResourceCap;
    return result;
  }
  if (outcome == ExactCover::Outcome::Exhausted) {
    result.status = SolveStatus::Unsat;
    result.certificate = "exhaustive";
    return result;
  }

  std::vector<Ball> chosen;
  for (int i : dlx.solution()) chosen.push_back(pool[static_cast<std::size_t>(i)]);
  const ClopenSet set(field, chosen);
  const auto folded = cs_fold(set);
  if (!check_dilation_tiling(set).passed() || !folded.overlap.empty() || folded.image != target) {
    throw std::logic_error("exact cover produced an invalid completion");
  }
  auto family = req.existing;
  family.push_back(set);
  result.verification = verify_superwavelet(family, SuperMode::Orthonormal);
  if (!req.target && !result.verification->passed()) {
    throw std::logic_error("completed family fails re-verification");
  }
  result.status = SolveStatus::Solved;
  result.set = set;
  return result;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved:
      return "solved";
    case SolveStatus::Unsat:
      return "unsat";
    case SolveStatus::ResourceCap:
      return "resource_cap";
  }
  return "unsat";
}

MissingComponentFamily missing_component_family(const FieldConfigPtr& field, int n) {
  if (n < 2) throw std::invalid_argument("family needs n >= 2");
  MissingComponentFamily f{{}, ClopenSet::ideal(field, n - 2), ClopenSet::ideal(field, n - 1)};
  for (int i = 1; i <= n - 1; ++i) f.existing.push_back(ClopenSet::shell(field, i - 1));
  return f;
}

Check completion_joint_fold(const std::vector<ClopenSet>& existing, const ClopenSet& target, const std::string& name) {
  std::vector<Ball> fragments;
  for (const auto& w : existing)
    for (const auto& f : cs_fold(w).fragments) fragments.push_back(f.ball);
  fragments.insert(fragments.end(), target.balls().begin(), target.balls().end());
  return joint_fold_check(target.field(), fragments, SuperMode::Orthonormal, name);
}

Check missing_component_joint_fold(const MissingComponentFamily& family, const ClopenSet& target, const std::string& name) {
  return completion_joint_fold(family.existing, target, name);
}

}  // namespace lfw
