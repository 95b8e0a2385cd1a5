#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spilab/measure.hpp"

namespace spilab {

/// Parameters of the dimension-free Gaussian chain. The shape function is
/// fixed to psi(x) = x log(1/x) and the split point to b* = 1/2; the growth
/// constant c_const is normally taken from the Hermite norm audit.
struct GaussChainParams {
  int d = 1;            // dimension
  double p = 4;         // Orlicz exponent, > 2 (and > 2d + 2 for the endgame)
  double c_const = 1;   // growth constant of the Hermite L^p bound
};

/// Bound 2^d r^{-d} c^{2/r} p^{3/(2r)} on the spectral Orlicz beta(r) of the
/// d-dimensional Gaussian.
double beta_bound(double r, const GaussChainParams& params);

struct ClaimCheck {
  double r_kappa = 0;    // (log(1/kappa)/4)^{-1}
  double product = 0;    // beta_bound(r_kappa) * theta^2(psi(kappa))
  bool pass = false;     // product <= 1/2
  // side conditions of the derivation, evaluated rather than trusted
  bool lemma_log_p = false;      // log p <= p/6
  bool lemma_c_vs_log = false;   // c_const <= log(1/kappa)
};

/// The small-set check beta(r_kappa) theta^2(psi(kappa)) <= 1/2 with
/// theta^2(x) = 4 p x^{p/2}; kappa must lie in (0, 1/e).
ClaimCheck claim_check(double kappa, const GaussChainParams& params);

/// Largest grid kappa below which claim_check passes simultaneously for every
/// parameter set in the family; the grid is deepened twice before giving up.
double find_kappa1(std::span<const GaussChainParams> family);

/// Capacity lower bound (1/4) min(log(1/kappa), 1/(2 r_kappa)), which equals
/// log(1/kappa)/32 at these parameter choices. Requires the claim to hold at
/// kappa.
double c_kappa_chain(double kappa, const GaussChainParams& params);

struct LsiReport {
  double c_lsi = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double max_ratio = 0;     // max of Ent(f^2) / energy over the test family
  double max_violation = 0; // relative excess of Ent over c_lsi * energy
  bool pass = false;
};

/// Checks Ent(f^2) <= c_lsi * Integral |f'|^2 dmu on random test functions
/// plus the exponential family e^{sx/2}, which saturates the Gaussian bound.
LsiReport lsi_defect_check(const Measure1D& m, double c_lsi, std::size_t trials,
                           std::uint64_t seed);

}  // namespace spilab
