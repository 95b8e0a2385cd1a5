#include "spilab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spilab/numerics.hpp"

namespace spilab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1 / (Z * Integral_a^b e^V), the conductance of the transition layer [a, b].
double layer_conductance(const Measure1D& m, double a, double b) {
  if (!(b > a)) return kInf;
  return std::exp(-m.log_weight_integral(a, b));
}

}  // namespace

double interval_capacity(const Measure1D& m, double a, double b) {
  const double lo = m.x_lo(), hi = m.x_hi();
  if (!(a < b)) throw Error(Errc::invalid_argument, "interval_capacity: need a < b");
  a = std::max(a, lo);
  b = std::min(b, hi);
  const double mass = m.mass_between(a, b);
  if (mass > 0.5 + 1e-10)
    throw Error(Errc::invalid_argument, "interval_capacity: mu([a,b]) exceeds 1/2");

  const double edge = 1e-12 * (hi - lo);
  const bool touches_left = (a <= lo + edge);
  const bool touches_right = (b >= hi - edge);

  if (touches_left && touches_right)
    throw Error(Errc::invalid_argument, "interval_capacity: set covers the whole domain");

  if (touches_right) {
    // one transition on the left; support grows down to measure 1/2
    double alpha = (m.tail_mass(a) >= 0.5 - 1e-14) ? a : m.tail_quantile(0.5);
    if (alpha >= a - edge) return kInf;
    return layer_conductance(m, alpha, a);
  }
  if (touches_left) {
    double beta = (m.cdf(b) >= 0.5 - 1e-14) ? b : m.quantile(0.5);
    if (beta <= b + edge) return kInf;
    return layer_conductance(m, b, beta);
  }

  // interior interval: support [alpha, beta(alpha)] with mu = 1/2 (or beta
  // pinned at the right edge, where the constraint goes slack)
  const double cdf_b = m.cdf(b);
  double alpha_lo = (cdf_b <= 0.5) ? lo : m.quantile(cdf_b - 0.5);
  if (alpha_lo >= a - edge) return kInf;
  auto energy = [&](double alpha) -> double {
    if (alpha >= a - edge) return kInf;
    double ca = m.cdf(alpha);
    double beta = (ca + 0.5 >= 1.0 - 1e-14) ? hi : m.quantile(ca + 0.5);
    double e = layer_conductance(m, alpha, a);
    if (beta < hi - edge) {
      if (beta <= b + edge) return kInf;
      e += layer_conductance(m, b, beta);
    }
    return e;
  };
  // multi-well weights make the energy landscape multi-modal: global scan
  // first, then local refinement around the best cell
  const double a_cap = a - edge;
  const std::size_t scan = 400;
  double best = kInf, best_alpha = alpha_lo;
  for (std::size_t i = 0; i <= scan; ++i) {
    double alpha = alpha_lo + (a_cap - alpha_lo) * static_cast<double>(i) / scan;
    double e = energy(alpha);
    if (e < best) {
      best = e;
      best_alpha = alpha;
    }
  }
  if (!std::isfinite(best)) return kInf;
  double cell = (a_cap - alpha_lo) / scan;
  Tolerance tol;
  tol.abs_tol = 1e-13 * (a - alpha_lo) + 1e-300;
  tol.rel_tol = 1e-12;
  tol.max_iter = 300;
  ScalarMin r = minimize_scalar(energy, std::max(alpha_lo, best_alpha - cell),
                                std::min(a_cap, best_alpha + cell), tol);
  return std::min(best, r.min);
}

namespace {

// capacity of the union of the two tails [lo, t_l] and [t_r, hi]; the support
// budget of measure 1/2 is split between the sides and optimized.
double two_tail_capacity(const Measure1D& m, double t_l, double t_r, double kappa) {
  if (!(t_l < t_r)) return kInf;
  auto energy = [&](double sigma) -> double {
    // left support mass sigma, right support mass 1/2 - sigma
    if (sigma <= kappa / 2 || sigma >= 0.5 - kappa / 2) return kInf;
    double beta_l = m.quantile(sigma);
    double alpha_r = m.tail_quantile(0.5 - sigma);
    if (beta_l <= t_l || alpha_r >= t_r) return kInf;
    return layer_conductance(m, t_l, beta_l) + layer_conductance(m, alpha_r, t_r);
  };
  double lo = kappa / 2 + 1e-12, hi = 0.5 - kappa / 2 - 1e-12;
  if (!(lo < hi)) return kInf;
  const std::size_t scan = 160;
  double best = kInf, best_sigma = lo;
  for (std::size_t i = 0; i <= scan; ++i) {
    double sigma = lo + (hi - lo) * static_cast<double>(i) / scan;
    double e = energy(sigma);
    if (e < best) {
      best = e;
      best_sigma = sigma;
    }
  }
  if (!std::isfinite(best)) return kInf;
  double cell = (hi - lo) / scan;
  Tolerance tol;
  tol.abs_tol = 1e-12;
  tol.rel_tol = 1e-11;
  tol.max_iter = 300;
  ScalarMin r = minimize_scalar(energy, std::max(lo, best_sigma - cell),
                                std::min(hi, best_sigma + cell), tol);
  return std::min(best, r.min);
}

}  // namespace

CapacityProfile capacity_profile(const Measure1D& m, const std::vector<double>& kappa_grid) {
  if (kappa_grid.empty()) throw Error(Errc::empty_input, "capacity_profile: empty kappa grid");
  for (std::size_t i = 0; i < kappa_grid.size(); ++i) {
    if (!(kappa_grid[i] > 0) || kappa_grid[i] > 0.5 + 1e-12)
      throw Error(Errc::invalid_argument, "capacity_profile: kappa grid must lie in (0, 1/2]");
    if (i > 0 && !(kappa_grid[i] > kappa_grid[i - 1]))
      throw Error(Errc::invalid_argument, "capacity_profile: kappa grid must ascend");
  }
  const double lo = m.x_lo(), hi = m.x_hi();
  CapacityProfile profile;
  for (double kappa : kappa_grid) {
    double best = kInf;
    auto consider = [&](double cap) {
      if (std::isfinite(cap) && cap > 0) best = std::min(best, cap / kappa);
    };
    // right and left tails
    double t_r = m.tail_quantile(kappa);
    if (t_r > lo) consider(interval_capacity(m, t_r, hi));
    double t_l = m.quantile(kappa);
    if (t_l < hi) consider(interval_capacity(m, lo, t_l));
    // centered interval around the median
    double md = m.median();
    double s_max = std::min(md - lo, hi - md);
    if (s_max > 0 && m.mass_between(md - s_max, md + s_max) > kappa) {
      Tolerance tol;
      tol.abs_tol = 1e-13 * (hi - lo);
      tol.rel_tol = 1e-12;
      tol.max_iter = 300;
      double s = root_find_monotone(
          [&](double v) { return m.mass_between(md - v, md + v) - kappa; }, 0.0, s_max, tol);
      if (s > 0) {
        double cap = kInf;
        try {
          cap = interval_capacity(m, md - s, md + s);
        } catch (const Error&) {
        }
        consider(cap);
      }
    }
    // symmetric two-tail union, each side holding kappa/2
    if (kappa < 0.5) {
      double ul = m.quantile(kappa / 2);
      double ur = m.tail_quantile(kappa / 2);
      consider(two_tail_capacity(m, ul, ur, kappa));
    }
    profile.kappa.push_back(kappa);
    profile.c_kappa.push_back(best);
  }
  profile.normalize();
  return profile;
}

void CapacityProfile::normalize() {
  if (kappa.empty()) throw Error(Errc::empty_input, "CapacityProfile: empty profile");
  double running = kInf;
  for (std::size_t i = 0; i < c_kappa.size(); ++i) {
    running = std::min(running, c_kappa[i]);
    c_kappa[i] = running;
  }
  // leading entries can be infinite only if every candidate degenerated
  while (!c_kappa.empty() && !std::isfinite(c_kappa.front())) {
    c_kappa.erase(c_kappa.begin());
    kappa.erase(kappa.begin());
  }
  if (c_kappa.empty())
    throw Error(Errc::hypothesis_not_satisfied, "CapacityProfile: no finite capacity entries");
}

bool CapacityProfile::covers(double k) const {
  return !kappa.empty() && k >= kappa.front() * (1 - 1e-12) && k <= kappa.back() * (1 + 1e-12);
}

double CapacityProfile::at(double k) const {
  if (!covers(k)) throw Error(Errc::invalid_argument, "CapacityProfile: kappa outside range");
  if (k <= kappa.front()) return c_kappa.front();
  if (k >= kappa.back()) return c_kappa.back();
  auto it = std::upper_bound(kappa.begin(), kappa.end(), k);
  std::size_t j = static_cast<std::size_t>(it - kappa.begin());
  double lk0 = std::log(kappa[j - 1]), lk1 = std::log(kappa[j]);
  double t = (std::log(k) - lk0) / (lk1 - lk0);
  return c_kappa[j - 1] + t * (c_kappa[j] - c_kappa[j - 1]);
}

double CapacityProfile::max_c() const {
  if (c_kappa.empty()) throw Error(Errc::empty_input, "CapacityProfile: empty profile");
  return c_kappa.front();
}

bool check_mc(const CapacityProfile& profile, double kappa, double c) {
  return profile.at(kappa) >= c;
}

PoincareSandwich poincare_from_mc(const CapacityProfile& profile) {
  if (profile.kappa.empty() || profile.kappa.back() < 0.5 * (1 - 1e-9))
    throw Error(Errc::invalid_argument, "poincare_from_mc: profile is missing kappa = 1/2");
  double c_mc = profile.at(std::min(0.5, profile.kappa.back()));
  double lower = 1.0 / c_mc;
  return PoincareSandwich{lower, 4.0 * lower, c_mc};
}

}  // namespace spilab
