#pragma once

#include <span>
#include <string>
#include <vector>

#include "spilab/measure.hpp"

namespace spilab {

/// Monotone table kappa -> C_kappa certifying cap(A) >= C_kappa * mu(A) over
/// the tested family for all mu(A) <= kappa.
struct CapacityProfile {
  std::vector<double> kappa;    // ascending, in (0, 1/2]
  std::vector<double> c_kappa;  // non-increasing after normalize()

  /// Replaces each entry by the running minimum over smaller kappa, so the
  /// bound quantifies over all sets of measure <= kappa; C_kappa becomes
  /// non-increasing and kappa/C_kappa non-decreasing.
  void normalize();
  /// Interpolated value (linear in log kappa); errors outside the table range.
  double at(double k) const;
  double max_c() const;  // value at the smallest kappa (after normalize)
  bool covers(double k) const;
  std::size_t size() const { return kappa.size(); }
};

/// Capacity of the interval [a, b]: infimum of the Dirichlet energy over
/// functions 1_[a,b] <= f <= 1 whose support has measure at most 1/2, computed
/// from the two-sided resistance formula minimized over the support placement.
/// Intervals touching a domain edge need no transition on that side.
double interval_capacity(const Measure1D& m, double a, double b);

/// Profile over the kappa grid from a family of test sets (left/right tails,
/// centered intervals, symmetric tail unions), normalized.
CapacityProfile capacity_profile(const Measure1D& m, const std::vector<double>& kappa_grid);

/// True iff the profile certifies C_kappa >= c at kappa.
bool check_mc(const CapacityProfile& profile, double kappa, double c);

struct PoincareSandwich {
  double lower = 0;  // 1 / C_MC
  double upper = 0;  // 4 / C_MC
  double c_mc = 0;
};

/// Two-sided Poincare estimate from the kappa = 1/2 entry of the profile.
PoincareSandwich poincare_from_mc(const CapacityProfile& profile);

}  // namespace spilab
