#include "spilab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spilab/numerics.hpp"

namespace spilab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

BetaFunction BetaFunction::closed_form(double r0, std::function<double(double)> eval,
                                       std::string form) {
  if (!(r0 >= 0)) throw Error(Errc::invalid_argument, "BetaFunction: r0 must be >= 0");
  auto wrapped = [r0, ev = std::move(eval)](double r) -> double {
    if (!(r > r0)) return kInf;
    double v = ev(r);
    return (std::isfinite(v) && v > 0) ? v : kInf;
  };
  return BetaFunction(r0, wrapped, std::move(form));
}

BetaFunction BetaFunction::table(double r0, std::vector<double> r, std::vector<double> values) {
  if (r.size() != values.size() || r.empty())
    throw Error(Errc::invalid_argument, "BetaFunction::table: bad table");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1]))
      throw Error(Errc::invalid_argument, "BetaFunction::table: r grid must ascend");
  // any valid beta may be replaced by a smaller non-increasing one
  double running = kInf;
  for (double& v : values) {
    running = std::min(running, v);
    v = running;
  }
  auto rg = std::make_shared<std::vector<double>>(std::move(r));
  auto vg = std::make_shared<std::vector<double>>(std::move(values));
  auto eval = [rg, vg, r0](double r_query) -> double {
    if (!(r_query > r0)) return kInf;
    if (r_query < rg->front()) return kInf;  // not covered by the table
    auto it = std::upper_bound(rg->begin(), rg->end(), r_query);
    std::size_t j = static_cast<std::size_t>(it - rg->begin()) - 1;
    return (*vg)[j];
  };
  return BetaFunction(r0, eval, "table");
}

bool BetaFunction::defined_at(double r) const { return std::isfinite(eval_(r)); }

double BetaFunction::operator()(double r) const { return eval_(r); }

TransferParams::TransferParams()
    : psi([](double x) { return x * std::log(1.0 / x); }), kappa_grid(geom_grid(1e-8, 0.5, 40)) {}

BetaFunction bcr_to_wang(const std::function<double(double)>& beta_bcr) {
  double at_one = beta_bcr(1.0);
  if (!std::isfinite(at_one))
    throw Error(Errc::invalid_argument, "bcr_to_wang: beta_bcr unbounded at s = 1 (ill-posed)");

  // expand the s range until the running minimum settles: its limit is r0
  double s_max = 16.0;
  auto tail_value = [&](double S) {
    double v = beta_bcr(S);
    return std::isfinite(v) ? v : kInf;
  };
  double prev = tail_value(s_max);
  for (int i = 0; i < 56; ++i) {
    double next = tail_value(2 * s_max);
    s_max *= 2;
    if (std::abs(next - prev) <= 1e-9 * std::max(1.0, std::abs(prev)) + 1e-12) break;
    prev = next;
  }

  auto sg = std::make_shared<std::vector<double>>(geom_grid(1.0, s_max, 4000));
  auto vg = std::make_shared<std::vector<double>>(sg->size());
  double running = kInf;
  for (std::size_t i = 0; i < sg->size(); ++i) {
    double v = beta_bcr((*sg)[i]);
    if (std::isfinite(v)) running = std::min(running, v);
    (*vg)[i] = running;
  }
  double r0 = std::max(0.0, vg->back());

  auto eval = [sg, vg](double r) -> double {
    // smallest tabulated s with monotonized beta_bcr(s) <= r
    if (r < vg->back()) return kInf;
    auto it = std::lower_bound(vg->begin(), vg->end(), r,
                               [](double value, double query) { return value > query; });
    if (it == vg->end()) return kInf;
    return (*sg)[static_cast<std::size_t>(it - vg->begin())];
  };
  return BetaFunction::closed_form(r0, eval, "bcr-inversion");
}

std::function<double(double)> wang_to_bcr(const BetaFunction& beta,
                                          std::optional<double> c_poincare) {
  double r0 = beta.r0();
  return [beta, r0, c_poincare](double s) -> double {
    if (!(s >= 1.0))
      throw Error(Errc::invalid_argument, "wang_to_bcr: defined for s >= 1");
    // scan geometrically for the first r with beta(r) <= s, then bisect
    double r_lo = std::max(r0 * (1 + 1e-12), 1e-12);
    double found = kInf;
    double prev = r_lo;
    for (double r = r_lo; r <= 1e18; r *= 1.25) {
      double v = beta(r);
      if (std::isfinite(v) && v <= s) {
        found = r;
        break;
      }
      prev = r;
    }
    if (!std::isfinite(found)) {
      if (c_poincare) return *c_poincare;  // the pair (r = C_P, beta = 1) always works
      throw Error(Errc::invalid_argument,
                  "wang_to_bcr: extension below lim beta(r) needs a Poincare constant");
    }
    double lo = prev, hi = found;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
      double mid = 0.5 * (lo + hi);
      double v = beta(mid);
      if (std::isfinite(v) && v <= s)
        hi = mid;
      else
        lo = mid;
    }
    return hi;  // beta(hi) <= s certified
  };
}

BetaFunction mc_to_spi(const CapacityProfile& profile) {
  if (profile.kappa.empty()) throw Error(Errc::empty_input, "mc_to_spi: empty profile");
  for (std::size_t i = 1; i < profile.c_kappa.size(); ++i)
    if (profile.c_kappa[i] > profile.c_kappa[i - 1] * (1 + 1e-12))
      throw Error(Errc::invalid_argument, "mc_to_spi: profile must be normalized (non-increasing)");
  auto prof = std::make_shared<CapacityProfile>(profile);
  double r0 = 8.0 / prof->max_c();
  auto eval = [prof](double r) -> double {
    double c_req = 8.0 / r;
    if (c_req > prof->max_c()) return kInf;
    // the qualifying kappas form a prefix of the grid; take its largest member
    std::size_t lo = 0, hi = prof->size();  // invariant: entries [0, lo] qualify
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (prof->c_kappa[mid] >= c_req)
        lo = mid;
      else
        hi = mid;
    }
    return 1.0 / prof->kappa[lo];
  };
  return BetaFunction::closed_form(r0, eval, "mc-inversion");
}

namespace {

void check_psi(const std::function<double(double)>& psi) {
  double prev = kInf, prev_ratio = 0;
  for (double x = 1e-2; x >= 1e-12; x /= 10) {
    double v = psi(x);
    if (!(v > 0) || !(v < prev))
      throw Error(Errc::hypothesis_not_satisfied, "psi must decrease to 0 as x -> 0");
    if (!(v / x > prev_ratio))
      throw Error(Errc::hypothesis_not_satisfied, "psi(x)/x must diverge as x -> 0");
    prev = v;
    prev_ratio = v / x;
  }
}

// sup_{r > r0} (1 - beta(r) * t) / r on an expanding geometric grid with local
// refinement; the objective decays like 1/r, so the expansion terminates.
double sup_over_r(const BetaFunction& beta, double t) {
  double r_lo = std::max(beta.r0() * (1 + 1e-9), 1e-12);
  double r_hi = std::max(1024.0 * r_lo, 8.0);
  auto objective = [&](double r) {
    double b = beta(r);
    if (!std::isfinite(b)) return -kInf;
    return (1.0 - b * t) / r;
  };
  double best = -kInf, best_r = r_lo;
  for (int round = 0; round < 64; ++round) {
    auto grid = geom_grid(r_lo, r_hi, 800);
    double sup = -kInf, arg = r_lo;
    for (double r : grid) {
      double v = objective(r);
      if (v > sup) {
        sup = v;
        arg = r;
      }
    }
    bool stable = std::isfinite(best) && sup <= best * (1 + 1e-9) + 1e-15;
    if (sup > best) {
      best = sup;
      best_r = arg;
    }
    if (stable && arg < r_hi / 4) break;
    r_hi *= 8;
  }
  if (!std::isfinite(best)) return -kInf;
  // parabolic/golden refinement around the best grid point
  double lo = best_r / 1.05, hi = best_r * 1.05;
  Tolerance tol;
  tol.rel_tol = 1e-12;
  ScalarMin r = minimize_scalar([&](double x) { return -objective(x); }, lo, hi, tol);
  return std::max(best, -r.min);
}

CapacityProfile to_mc_core(const BetaFunction& beta, double c_mc,
                           const std::function<double(double)>& psi,
                           const std::function<double(double)>& second_term_weight,
                           double b_star, const std::vector<double>& kappa_grid) {
  if (!(c_mc > 0)) throw Error(Errc::invalid_argument, "transfer: a-priori MC constant must be > 0");
  if (!(b_star > 0) || !(b_star < 1))
    throw Error(Errc::invalid_argument, "transfer: b_star must be in (0,1)");
  if (kappa_grid.empty()) throw Error(Errc::empty_input, "transfer: empty kappa grid");
  CapacityProfile out;
  for (double kappa : kappa_grid) {
    if (!(kappa > 0) || kappa > 0.5 + 1e-12)
      throw Error(Errc::invalid_argument, "transfer: kappa grid must lie in (0, 1/2]");
    double first = b_star * b_star * c_mc * psi(kappa) / kappa;
    double second = (1 - b_star) * (1 - b_star) * sup_over_r(beta, second_term_weight(kappa));
    double c = std::min(first, second);
    out.kappa.push_back(kappa);
    out.c_kappa.push_back(c > 0 ? c : kInf);  // non-positive bounds are vacuous
  }
  out.normalize();
  return out;
}

}  // namespace

CapacityProfile spi_to_mc(const BetaFunction& beta, double c_poincare_mc,
                          const TransferParams& prm) {
  check_psi(prm.psi);
  return to_mc_core(beta, c_poincare_mc, prm.psi, prm.psi, prm.b_star, prm.kappa_grid);
}

CapacityProfile ospi_to_mc(const OrliczSpi& ospi, double c_poincare_mc,
                           const TransferParams& prm) {
  check_psi(prm.psi);
  check_growth_conditions(ospi.pair);
  auto weight = [&prm, pair = ospi.pair](double kappa) {
    double th = theta(prm.psi(kappa), pair);
    return th * th;
  };
  return to_mc_core(ospi.beta, c_poincare_mc, prm.psi, weight, prm.b_star, prm.kappa_grid);
}

BetaFunction ospi_to_spi(const OrliczSpi& ospi, double c_poincare_mc, const TransferParams& prm) {
  CapacityProfile profile = ospi_to_mc(ospi, c_poincare_mc, prm);
  return mc_to_spi(profile);
}

double spi_to_poincare(const BetaFunction& beta) {
  double r_lo = std::max(beta.r0() * (1 + 1e-9), 1e-12);
  double r_hi = std::max(1024.0 * r_lo, 1024.0);
  auto value = [&](double r) -> double {
    double b = beta(r);
    if (!std::isfinite(b) || b >= 2.0) return kInf;
    return r / (1.0 - b / 2.0);
  };
  double best = kInf, best_r = 0;
  for (int round = 0; round < 40; ++round) {
    for (double r : geom_grid(r_lo, r_hi, 2000)) {
      double v = value(r);
      if (v < best) {
        best = v;
        best_r = r;
      }
    }
    // C(r) grows linearly once beta has flattened; stop when the tail of the
    // grid no longer improves
    if (std::isfinite(best) && best_r < r_hi / 8) break;
    r_hi *= 8;
  }
  if (!std::isfinite(best))
    throw Error(Errc::hypothesis_not_satisfied,
                "spi_to_poincare: beta(r) >= 2 on the whole grid (hypothesis not satisfied)");
  Tolerance tol;
  tol.rel_tol = 1e-12;
  ScalarMin refine = minimize_scalar(value, best_r / 1.1, best_r * 1.1, tol);
  return std::min(best, refine.min);
}

Lemma1Bound lemma1_bound(const Measure1D& m, std::span<const double> f, const BetaFunction& beta,
                         double r) {
  if (!(r > beta.r0()))
    throw Error(Errc::invalid_argument, "lemma1_bound: r must exceed the validity threshold");
  double s = m.support_mass(f);
  double b = beta(r);
  if (!std::isfinite(b))
    throw Error(Errc::invalid_argument, "lemma1_bound: beta undefined at r");
  Lemma1Bound out;
  out.supp_mass = s;
  out.lhs = (1.0 - b * s) * m.inner_fv(f, f);
  out.rhs = r * m.dirichlet_energy_fv(f);
  return out;
}

}  // namespace spilab
