#include "spilab/gauss_lsi.hpp"

#include <algorithm>
#include <cmath>

#include "spilab/numerics.hpp"
#include "spilab/orlicz.hpp"
#include "spilab/spectrum.hpp"

namespace spilab {

double beta_bound(double r, const GaussChainParams& params) {
  if (!(r > 0)) throw Error(Errc::invalid_argument, "beta_bound: r must be positive");
  if (!(params.p > 2) || params.d < 1 || !(params.c_const > 0))
    throw Error(Errc::invalid_argument, "beta_bound: invalid chain parameters");
  return std::pow(2.0 / r, params.d) * std::pow(params.c_const, 2.0 / r) *
         std::pow(params.p, 1.5 / r);
}

ClaimCheck claim_check(double kappa, const GaussChainParams& params) {
  if (!(kappa > 0) || !(kappa < std::exp(-1.0)))
    throw Error(Errc::invalid_argument, "claim_check: kappa must be in (0, 1/e)");
  const double log_inv = std::log(1.0 / kappa);
  ClaimCheck out;
  out.r_kappa = 4.0 / log_inv;
  const double psi = kappa * log_inv;
  const double theta_sq = 4.0 * params.p * std::pow(psi, params.p / 2.0);
  out.product = beta_bound(out.r_kappa, params) * theta_sq;
  out.pass = out.product <= 0.5;
  out.lemma_log_p = std::log(params.p) <= params.p / 6.0;
  out.lemma_c_vs_log = params.c_const <= log_inv;
  return out;
}

double find_kappa1(std::span<const GaussChainParams> family) {
  if (family.empty()) throw Error(Errc::empty_input, "find_kappa1: empty parameter family");
  double depth = 40.0;   // scan kappa = exp(-t) for t in (1, depth]
  std::size_t count = 400;
  for (int round = 0; round < 3; ++round) {
    std::vector<double> grid;  // descending kappa
    for (std::size_t i = 0; i < count; ++i) {
      double t = 1.0 + (depth - 1.0) * static_cast<double>(i + 1) / static_cast<double>(count);
      grid.push_back(std::exp(-t));
    }
    // largest grid kappa such that every smaller grid kappa passes for the
    // whole family
    double kappa1 = 0.0;
    for (std::size_t i = grid.size(); i-- > 0;) {
      bool all_pass = true;
      for (const auto& prm : family)
        if (!claim_check(grid[i], prm).pass) {
          all_pass = false;
          break;
        }
      if (!all_pass) break;
      kappa1 = grid[i];
    }
    if (kappa1 > 0.0) return kappa1;
    depth *= 4.0;
    count *= 2;
  }
  throw Error(Errc::hypothesis_not_satisfied, "find_kappa1: no passing kappa on the grid");
}

double c_kappa_chain(double kappa, const GaussChainParams& params) {
  ClaimCheck chk = claim_check(kappa, params);
  if (!chk.pass)
    throw Error(Errc::invalid_argument,
                "c_kappa_chain: kappa is not below the admissible threshold (claim fails)");
  const double log_inv = std::log(1.0 / kappa);
  return 0.25 * std::min(log_inv, 1.0 / (2.0 * chk.r_kappa));
}

LsiReport lsi_defect_check(const Measure1D& m, double c_lsi, std::size_t trials,
                           std::uint64_t seed) {
  if (!(c_lsi > 0)) throw Error(Errc::invalid_argument, "lsi_defect_check: c_lsi must be > 0");
  LsiReport report;
  report.c_lsi = c_lsi;
  report.trials = trials;
  report.seed = seed;
  report.max_ratio = 0;
  report.max_violation = 0;

  auto account = [&](std::span<const double> f) {
    double sq = m.inner_fv(f, f);
    if (!(sq > 0)) return;
    std::vector<double> integrand(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      double v = f[i] * f[i] / sq;
      integrand[i] = (v > 0) ? f[i] * f[i] * std::log(v) : 0.0;
    }
    double ent = m.integrate_fv(integrand);
    double energy = m.dirichlet_energy_fv(f);
    if (energy > 1e-300) report.max_ratio = std::max(report.max_ratio, ent / energy);
    double violation = (ent - c_lsi * energy) / std::max(std::abs(ent), 1e-300);
    report.max_violation = std::max(report.max_violation, violation);
  };

  for (std::size_t t = 0; t < trials; ++t) {
    DetRng rng(seed, t);
    std::vector<double> f = random_test_function(m, rng);
    account(f);
  }
  // the exponential family saturates the Gaussian bound as a near-extremal set
  for (double s = -2.0; s <= 2.0 + 1e-12; s += 0.1) {
    if (std::abs(s) < 1e-9) continue;
    std::vector<double> f(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) f[i] = std::exp(0.5 * s * m.node(i));
    account(f);
  }
  report.pass = report.max_violation <= 1e-6;
  return report;
}

}  // namespace spilab
