#include "lfw/framesim.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

#include "lfw/verify.hpp"

namespace lfw {

namespace {

constexpr std::uint64_t kMaxTranslates = std::uint64_t{1} << 26;

std::uint64_t power_u64(unsigned q, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / q) throw std::length_error("translate count overflows");
    r *= q;
  }
  return r;
}

Rational from_i128(__int128 x) {
  const bool neg = x < 0;
  unsigned __int128 m = neg ? static_cast<unsigned __int128>(-(x + 1)) + 1 : static_cast<unsigned __int128>(x);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(m >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(m)));
  mpz_class r = (hi << 64) + lo;
  if (neg) r = -r;
  return Rational(r);
}

// Nonzero piece of f(xi) conj(eta(p^j xi)).
struct Piece {
  Ball ball;
  CycloScalar weight;
};

std::vector<Piece> pieces_at(const SpectrumTuple& f, const SpectrumTuple& eta, int j) {
  std::vector<Piece> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (const auto& [c, ve] : eta[i].cells()) {
      const Ball d = c.scaled(-j);
      for (const auto& [b, vf] : f[i].cells()) {
        if (b.contains(d)) {
          out.push_back({d, vf * ve.conj()});
        } else if (d.contains(b)) {
          out.push_back({b, vf * ve.conj()});
        }
      }
    }
  }
  return out;
}

// Per-piece character exponent tables: entry [t][kappa] is the contribution
// of base-q digit kappa at position t of k to chi(u(k) p^j center).
struct PieceTables {
  int active_digits;
  std::vector<std::vector<unsigned>> table;
};

PieceTables tables_for(const Piece& pc, int j) {
  const FieldConfig& f = *pc.ball.field();
  PieceTables t{std::max(0, j + pc.ball.scale()), {}};
  t.table.resize(static_cast<std::size_t>(t.active_digits));
  for (int pos = 0; pos < t.active_digits; ++pos) {
    const FqCode x = pc.ball.center().digit(pos - j);
    auto& row = t.table[static_cast<std::size_t>(pos)];
    row.resize(f.q());
    for (unsigned kappa = 0; kappa < f.q(); ++kappa) row[kappa] = x == 0 ? 0 : f.trace(f.mul(static_cast<FqCode>(kappa), x));
  }
  return t;
}

// Integer image of a piece weight: coefficients of zeta^0..zeta^{p-1} after
// multiplying by a common scale.
struct IntegerWeights {
  bool ok = false;
  Rational scale;  // true weight = integer weight / scale
  std::vector<std::vector<std::int64_t>> w;
};

IntegerWeights integer_weights(const std::vector<Piece>& pcs, unsigned p, unsigned q, int sigma_max) {
  IntegerWeights out;
  mpz_class den = 1;
  for (const auto& pc : pcs) {
    if (pc.weight.grade() != 0) return out;
    for (const auto& a : pc.weight.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), a.get_den_mpz_t());
  }
  if (den > (1L << 20)) return out;
  for (const auto& pc : pcs) {
    mpz_class mult = den;
    for (int s = pc.ball.scale(); s < sigma_max; ++s) mult *= q;
    std::vector<std::int64_t> v(p, 0);
    const auto& cs = pc.weight.coeffs();
    for (std::size_t e = 0; e < cs.size(); ++e) {
      const mpz_class n = cs[e].get_num() * (mult / cs[e].get_den());
      if (!n.fits_slong_p() || abs(n) > (1L << 40)) return out;
      v[e] = n.get_si();
    }
    out.w.push_back(std::move(v));
  }
  out.scale = Rational(den) * rational_power(q, sigma_max);
  out.ok = true;
  return out;
}

struct Energy {
  CycloScalar value;
  int digits;
  std::uint64_t count;
};

// sum_k |sum_pieces w q^{-sigma} chi(u(k) p^j b)|^2, with inactive pieces
// dropped; j is only used for the digit tables.
Energy translate_energy(const std::vector<Piece>& pcs, int j, const FieldConfigPtr& field) {
  const unsigned p = field->p();
  const unsigned q = field->q();
  Energy out{CycloScalar(p, field->c()), 0, 0};
  if (pcs.empty()) return out;
  if (pcs.size() == 1) {
    const auto& pc = pcs.front();
    const int n = std::max(0, j + pc.ball.scale());
    out.digits = n;
    out.count = power_u64(q, n);
    out.value = cy_abs_sq(pc.weight).scaled(rational_power(q, -2 * pc.ball.scale()) * Rational(mpz_class(power_u64(q, n))));
    return out;
  }
  std::vector<PieceTables> tabs;
  int sigma_max = std::numeric_limits<int>::min();
  for (const auto& pc : pcs) {
    tabs.push_back(tables_for(pc, j));
    out.digits = std::max(out.digits, tabs.back().active_digits);
    sigma_max = std::max(sigma_max, pc.ball.scale());
  }
  const std::uint64_t total = power_u64(q, out.digits);
  if (total > kMaxTranslates) throw std::length_error("translate range exceeds the simulation cap");
  out.count = total;

  std::vector<unsigned> kd(static_cast<std::size_t>(out.digits), 0);
  int klen = 0;
  auto advance = [&]() {
    for (std::size_t t = 0; t < kd.size(); ++t) {
      if (++kd[t] < q) {
        klen = std::max(klen, static_cast<int>(t) + 1);
        return;
      }
      kd[t] = 0;
    }
  };
  auto exponent = [&](const PieceTables& tb) {
    unsigned e = 0;
    for (int t = 0; t < klen; ++t) e += tb.table[static_cast<std::size_t>(t)][kd[static_cast<std::size_t>(t)]];
    return e % p;
  };

  const auto iw = integer_weights(pcs, p, q, sigma_max);
  if (iw.ok) {
    std::vector<__int128> acc(p, 0);
    std::vector<std::int64_t> z(p);
    for (std::uint64_t k = 0; k < total; ++k, advance()) {
      std::fill(z.begin(), z.end(), 0);
      for (std::size_t i = 0; i < pcs.size(); ++i) {
        if (klen > tabs[i].active_digits) continue;
        const unsigned e = exponent(tabs[i]);
        const auto& w = iw.w[i];
        for (unsigned a = 0; a < p; ++a) z[(a + e) % p] += w[a];
      }
      for (unsigned a = 0; a < p; ++a) {
        if (z[a] == 0) continue;
        for (unsigned b = 0; b < p; ++b) acc[(a + p - b) % p] += static_cast<__int128>(z[a]) * z[b];
      }
    }
    CycloScalar sum(p, field->c());
    for (unsigned e = 0; e < p; ++e) {
      if (acc[e] != 0) sum += CycloScalar::zeta_power(p, field->c(), e).scaled(from_i128(acc[e]));
    }
    out.value = sum.scaled(1 / (iw.scale * iw.scale));
    return out;
  }

  std::vector<CycloScalar> scaled;
  for (const auto& pc : pcs) scaled.push_back(pc.weight.scaled(rational_power(q, -pc.ball.scale())));
  for (std::uint64_t k = 0; k < total; ++k, advance()) {
    CycloScalar z(p, field->c());
    for (std::size_t i = 0; i < pcs.size(); ++i) {
      if (klen > tabs[i].active_digits) continue;
      z += scaled[i] * CycloScalar::zeta_power(p, field->c(), exponent(tabs[i]));
    }
    out.value += cy_abs_sq(z);
  }
  return out;
}

CycloScalar coefficient_from_pieces(const std::vector<Piece>& pcs, const FieldElement& y, int j, bool refined) {
  const FieldConfigPtr& field = y.field();
  CycloScalar sum(field->p(), field->c());
  for (const auto& pc : pcs) {
    sum += pc.weight * (refined ? ball_character_integral_refined(pc.ball, y) : ball_character_integral(pc.ball, y));
  }
  return sum * CycloScalar::qhalf_power(field->p(), field->c(), -j);
}

// Whether the refined spot check at digit length len stays small.
bool refinable(const std::vector<Piece>& pcs, int j, int len) {
  for (const auto& pc : pcs) {
    std::uint64_t pieces = 1;
    for (int d = pc.ball.scale(); d < len - j; ++d) {
      pieces *= pc.ball.field()->q();
      if (pieces > 4096) return false;
    }
  }
  return true;
}

void require_same_shape(const std::vector<SpectrumTuple>& family, const SpectrumTuple& f) {
  if (f.empty()) throw std::invalid_argument("empty spectrum tuple");
  for (const auto& eta : family) {
    if (eta.size() != f.size()) throw std::invalid_argument("tuple sizes differ");
  }
}

}  // namespace

void FiniteModel::require(const StepFunction& f) const {
  for (const auto& [b, v] : f.cells()) {
    if (b.base_exponent() < -R) throw WindowError("support escapes p^" + std::to_string(-R) + " O");
    if (b.scale() > S) throw WindowError("function is not constant on cosets of p^" + std::to_string(S) + " O");
  }
}

std::vector<Ball> FiniteModel::mesh(const FieldConfigPtr& field) const {
  if (R + S < 0) throw std::invalid_argument("empty window");
  return Ball(FieldElement(field), -R).refine_to(S);
}

CycloScalar ball_character_integral(const Ball& b, const FieldElement& y) {
  const FieldConfig& f = *b.field();
  if (!y.is_zero() && y.valuation() + b.scale() < 0) return CycloScalar(f.p(), f.c());
  return character(y, b.center()).scaled(b.measure());
}

CycloScalar ball_character_integral_refined(const Ball& b, const FieldElement& y) {
  const FieldConfig& f = *b.field();
  CycloScalar sum(f.p(), f.c());
  const int fine = y.is_zero() ? b.scale() : std::max(b.scale(), -y.valuation());
  for (const auto& piece : b.refine_to(fine)) sum += character(y, piece.center()).scaled(piece.measure());
  return sum;
}

CycloScalar affine_spectrum_at(const StepFunction& psi, int j, std::uint64_t k, const FieldElement& xi) {
  const FieldConfigPtr& field = psi.field();
  const FieldElement x = xi.shifted(j);
  const FieldElement y = -u_of_index(field, k);
  return character(y, x) * psi.eval(x) * CycloScalar::qhalf_power(field->p(), field->c(), -j);
}

CycloScalar affine_coef(const StepFunction& f, const StepFunction& psi, int j, std::uint64_t k) {
  return affine_coef(SpectrumTuple{f}, SpectrumTuple{psi}, j, k);
}

CycloScalar affine_coef(const SpectrumTuple& f, const SpectrumTuple& eta, int j, std::uint64_t k) {
  if (f.size() != eta.size() || f.empty()) throw std::invalid_argument("tuple sizes differ");
  const FieldConfigPtr& field = f.front().field();
  return coefficient_from_pieces(pieces_at(f, eta, j), u_of_index(field, k).shifted(j), j, false);
}

ResidualReport parseval_residual(const std::vector<SpectrumTuple>& family, const SpectrumTuple& f,
                                 const FiniteModel& window, bool spot_check) {
  require_same_shape(family, f);
  const FieldConfigPtr& field = f.front().field();
  const unsigned p = field->p();
  const unsigned c = field->c();
  const unsigned q = field->q();
  for (const auto& fi : f) window.require(fi);
  for (const auto& eta : family) {
    for (const auto& e : eta) {
      for (const auto& [b, v] : e.cells()) {
        if (b.contains_zero()) throw PreconditionError("wavelet spectrum must vanish near 0", Witness::of_ball(b));
      }
    }
  }

  ResidualReport rep{CycloScalar(p, c), CycloScalar(p, c), CycloScalar(p, c), 0, -1, std::nullopt, 0, 0, 0};
  for (const auto& fi : f) {
    for (const auto& [b, v] : fi.cells()) rep.norm_sq += cy_abs_sq(v).scaled(b.measure());
  }

  bool have_range = false;
  int lo_all = std::numeric_limits<int>::max();
  int hi_all = std::numeric_limits<int>::min();
  for (const auto& eta : family) {
    // Intersections need v(C) - j to reach a valuation of some f-cell.
    bool any = false;
    int hi = std::numeric_limits<int>::min();
    int tail = std::numeric_limits<int>::max();
    bool has_zero_cell = false;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (eta[i].is_zero() || f[i].is_zero()) continue;
      int vmin_eta = std::numeric_limits<int>::max();
      int vmax_eta = std::numeric_limits<int>::min();
      for (const auto& [cb, cv] : eta[i].cells()) {
        vmin_eta = std::min(vmin_eta, cb.base_exponent());
        vmax_eta = std::max(vmax_eta, cb.base_exponent());
      }
      int fmin = std::numeric_limits<int>::max();
      int fmax = std::numeric_limits<int>::min();
      std::optional<int> zero_scale;
      for (const auto& [bb, bv] : f[i].cells()) {
        fmin = std::min(fmin, bb.base_exponent());
        if (bb.contains_zero()) {
          zero_scale = bb.scale();
        } else {
          fmax = std::max(fmax, bb.base_exponent());
        }
      }
      any = true;
      hi = std::max(hi, vmax_eta - fmin);
      if (zero_scale) {
        has_zero_cell = true;
        tail = std::min(tail, vmin_eta - *zero_scale);
      } else {
        tail = std::min(tail, vmin_eta - fmax - 1);
      }
    }
    if (!any) continue;
    const int lo = tail + 1;
    have_range = true;
    lo_all = std::min(lo_all, lo);
    hi_all = std::max(hi_all, hi);

    auto account = [&](const Energy& e) {
      rep.k_digits = std::max(rep.k_digits, e.digits);
      rep.coefficients += e.count;
    };
    auto spot = [&](const std::vector<Piece>& pcs, int j, int digits) {
      if (!refinable(pcs, j, digits + 1)) return;
      // k of digit length digits + 1: every piece integrates a
      // nonconstant character and the coefficient must vanish.
      const std::uint64_t k0 = power_u64(q, digits);
      for (std::uint64_t k : {k0, k0 * q - 1}) {
        const FieldElement y = u_of_index(field, k).shifted(j);
        if (!coefficient_from_pieces(pcs, y, j, true).is_zero()) {
          throw std::logic_error("coefficient beyond the translate bound is nonzero at j = " + std::to_string(j));
        }
        ++rep.spot_checks;
      }
    };
    if (has_zero_cell) {
      const auto pcs = pieces_at(f, eta, tail);
      const Energy e = translate_energy(pcs, tail, field);
      account(e);
      if (spot_check) spot(pcs, tail, e.digits);
      rep.energy += e.value.scaled(rational_power(q, -tail) * Rational(q, q - 1));
      rep.tail_from = rep.tail_from ? std::min(*rep.tail_from, tail) : tail;
    }
    for (int j = lo; j <= hi; ++j) {
      const auto pcs = pieces_at(f, eta, j);
      if (pcs.empty()) continue;
      const Energy e = translate_energy(pcs, j, field);
      account(e);
      rep.energy += e.value.scaled(rational_power(q, -j));
      if (spot_check) spot(pcs, j, e.digits);
    }
  }
  if (have_range) {
    rep.j_lo = lo_all;
    rep.j_hi = hi_all;
  }
  rep.residual = rep.norm_sq - rep.energy;
  return rep;
}

ResidualReport parseval_residual(const std::vector<StepFunction>& family, const StepFunction& f,
                                 const FiniteModel& window, bool spot_check) {
  std::vector<SpectrumTuple> fam;
  for (const auto& psi : family) fam.push_back({psi});
  return parseval_residual(fam, SpectrumTuple{f}, window, spot_check);
}

CycloScalar gram_entry(const SpectrumTuple& eta, std::pair<int, std::uint64_t> a, std::pair<int, std::uint64_t> b) {
  if (eta.empty()) throw std::invalid_argument("empty spectrum tuple");
  const FieldConfigPtr& field = eta.front().field();
  const auto [j, k] = a;
  const auto [jj, kk] = b;
  const FieldElement y = u_of_index(field, kk).shifted(jj) - u_of_index(field, k).shifted(j);
  CycloScalar sum(field->p(), field->c());
  for (const auto& e : eta) {
    for (const auto& [c1, v1] : e.cells()) {
      const Ball d1 = c1.scaled(-j);
      for (const auto& [c2, v2] : e.cells()) {
        const Ball d2 = c2.scaled(-jj);
        const Ball* inter = d1.contains(d2) ? &d2 : d2.contains(d1) ? &d1 : nullptr;
        if (inter == nullptr) continue;
        sum += v1 * v2.conj() * ball_character_integral(*inter, y);
      }
    }
  }
  return sum * CycloScalar::qhalf_power(field->p(), field->c(), -(j + jj));
}

std::vector<SpectrumTuple> mesh_deltas(const FieldConfigPtr& field, const FiniteModel& window,
                                       std::size_t components) {
  std::vector<SpectrumTuple> out;
  const auto balls = window.mesh(field);
  for (std::size_t i = 0; i < components; ++i) {
    for (const auto& b : balls) {
      SpectrumTuple t(components, StepFunction(field));
      t[i] = StepFunction::indicator(ClopenSet::of_ball(b));
      out.push_back(std::move(t));
    }
  }
  return out;
}

StepFunction random_step_function(const FieldConfigPtr& field, const FiniteModel& window, std::mt19937_64& rng) {
  const unsigned p = field->p();
  const unsigned c = field->c();
  std::uniform_int_distribution<int> count_d(1, 8);
  std::uniform_int_distribution<int> scale_d(-window.R, window.S);
  std::uniform_int_distribution<unsigned> code_d(0, field->q() - 1);
  std::uniform_int_distribution<int> re_d(-3, 3);
  std::uniform_int_distribution<int> im_d(-2, 2);
  std::uniform_int_distribution<unsigned> exp_d(1, p - 1);
  const int n = count_d(rng);
  std::vector<Cell> cells;
  for (int attempt = 0; attempt < 64 && static_cast<int>(cells.size()) < n; ++attempt) {
    const int s = scale_d(rng);
    std::vector<Digit> digits;
    for (int e = -window.R; e < s; ++e) {
      const auto code = static_cast<FqCode>(code_d(rng));
      if (code != 0) digits.emplace_back(e, code);
    }
    const Ball ball(FieldElement(field, std::move(digits)), s);
    const bool clash = std::any_of(cells.begin(), cells.end(), [&](const Cell& x) { return x.first.intersects(ball); });
    const int re = re_d(rng);
    const int im = im_d(rng);
    const unsigned ex = exp_d(rng);
    if (clash) continue;
    CycloScalar v = CycloScalar::from_rational(p, c, re) + CycloScalar::zeta_power(p, c, ex).scaled(im);
    if (v.is_zero()) v = CycloScalar::from_rational(p, c, 1);
    cells.emplace_back(ball, v);
  }
  return StepFunction(field, std::move(cells));
}

SpectrumTuple random_spectrum_tuple(const FieldConfigPtr& field, const FiniteModel& window, std::size_t components,
                                    std::mt19937_64& rng) {
  SpectrumTuple t;
  for (std::size_t i = 0; i < components; ++i) t.push_back(random_step_function(field, window, rng));
  return t;
}

unsigned worker_count() {
  if (const char* env = std::getenv("LFW_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(std::min(n, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SimulationReport simulate_parseval(const std::vector<SpectrumTuple>& family, const FiniteModel& window,
                                   std::size_t trials, std::uint64_t seed) {
  if (family.empty() || family.front().empty()) throw std::invalid_argument("empty family");
  const FieldConfigPtr& field = family.front().front().field();
  const std::size_t n = family.front().size();
  auto functions = mesh_deltas(field, window, n);
  SimulationReport rep;
  rep.mesh_functions = functions.size();
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) functions.push_back(random_spectrum_tuple(field, window, n, rng));
  rep.random_functions = trials;

  std::vector<std::optional<ResidualReport>> results(functions.size());
  parallel_for(functions.size(), [&](std::size_t i) {
    const bool spot = i == 0 || i == rep.mesh_functions;
    results[i] = parseval_residual(family, functions[i], window, spot);
  });
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = *results[i];
    rep.k_digits = std::max(rep.k_digits, r.k_digits);
    rep.coefficients += r.coefficients;
    rep.spot_checks += r.spot_checks;
    if (r.residual.is_zero()) continue;
    ++rep.nonzero_residuals;
    if (!rep.first_failure) {
      const std::string what = i < rep.mesh_functions ? "mesh delta " + std::to_string(i)
                                                       : "random trial " + std::to_string(i - rep.mesh_functions);
      rep.first_failure = what + ": residual " + to_string(r.residual);
    }
  }
  return rep;
}

std::vector<SpectrumTuple> indicator_family(const std::vector<ClopenSet>& sets) {
  std::vector<SpectrumTuple> out;
  for (const auto& s : sets) out.push_back({StepFunction::indicator(s)});
  return out;
}

SpectrumTuple indicator_tuple(const std::vector<ClopenSet>& sets) {
  SpectrumTuple out;
  for (const auto& s : sets) out.push_back(StepFunction::indicator(s));
  return out;
}

}  // namespace lfw
