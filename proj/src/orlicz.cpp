#include "spilab/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spilab/numerics.hpp"

namespace spilab {

YoungFunction YoungFunction::power(double p) {
  if (!(p > 1))
    throw Error(Errc::invalid_argument, "YoungFunction::power: exponent must exceed 1");
  return YoungFunction([p](double x) { return std::pow(x, p) / p; }, p,
                       "power(" + std::to_string(p) + ")");
}

YoungFunction YoungFunction::custom(std::function<double(double)> f, std::string name) {
  return YoungFunction(std::move(f), 0.0, std::move(name));
}

YoungPair YoungPair::power_pair(double p) {
  if (!(p > 2))
    throw Error(Errc::invalid_argument,
                "power_pair: need p > 2 (the growth condition Phi*(x)/x^2 -> infinity fails "
                "otherwise)");
  double q = p / (p - 1.0);
  return YoungPair{YoungFunction::power(q), YoungFunction::power(p)};
}

void check_young(const YoungFunction& phi, double x_max) {
  if (std::abs(phi(0.0)) > 1e-12)
    throw Error(Errc::invalid_argument, "Young function must vanish at 0");
  double prev = 0;
  bool grew = false;
  // convexity via second differences on a geometric sample
  for (double x = 1e-3; x <= x_max; x *= 2) {
    double f0 = phi(x), fl = phi(0.75 * x), fr = phi(1.25 * x);
    if (!std::isfinite(f0)) break;  // divergence is fine, it just ends the scan
    if (fl + fr - 2 * f0 < -1e-9 * std::max(1.0, std::abs(f0)))
      throw Error(Errc::invalid_argument, "Young function fails sampled convexity");
    if (f0 > prev + 1) grew = true;
    prev = std::max(prev, f0);
  }
  if (!grew && phi(x_max) < 1.0)
    throw Error(Errc::invalid_argument, "Young function does not grow to infinity");
}

void check_young_pair(const YoungPair& pair) {
  check_young(pair.phi);
  check_young(pair.phi_star);
  for (double x = 0.125; x <= 8.0; x *= 2)
    for (double y = 0.125; y <= 8.0; y *= 2) {
      double lhs = x * y;
      double rhs = pair.phi(x) + pair.phi_star(y);
      if (lhs > rhs + 1e-9 * std::max(1.0, rhs))
        throw Error(Errc::invalid_argument, "Young inequality fails on the sample grid");
    }
}

void check_growth_conditions(const YoungPair& pair) {
  // Phi*(x)/x^2 must grow without bound
  double prev_ratio = 0;
  bool diverging = false;
  for (double x = 1.0; x <= 4096.0; x *= 2) {
    double r = pair.phi_star(x) / (x * x);
    if (!std::isfinite(r)) {
      diverging = true;
      break;
    }
    if (x >= 64.0 && r > 8.0 * prev_ratio + 8.0) diverging = true;
    if (r > 1e6) diverging = true;
    prev_ratio = std::max(prev_ratio, r);
  }
  if (!diverging && pair.phi_star(4096.0) / (4096.0 * 4096.0) < 16.0)
    throw Error(Errc::invalid_argument,
                "growth condition fails: Phi*(x)/x^2 does not diverge on samples");
  // x -> Phi*(sqrt(x)) convex on samples
  for (double x = 0.25; x <= 1024.0; x *= 2) {
    double f0 = pair.phi_star(std::sqrt(x));
    double fl = pair.phi_star(std::sqrt(0.75 * x));
    double fr = pair.phi_star(std::sqrt(1.25 * x));
    if (!std::isfinite(fr)) break;
    if (fl + fr - 2 * f0 < -1e-9 * std::max(1.0, std::abs(f0)))
      throw Error(Errc::invalid_argument, "growth condition fails: Phi*(sqrt(x)) not convex");
  }
}

YoungFunction legendre(const YoungFunction& phi, const std::vector<double>& x_grid) {
  if (x_grid.size() < 4) throw Error(Errc::invalid_argument, "legendre: grid too small");
  auto grid = std::make_shared<std::vector<double>>();
  grid->push_back(0.0);
  for (double x : x_grid)
    if (x > 0) grid->push_back(x);
  std::sort(grid->begin(), grid->end());
  auto phi_copy = std::make_shared<YoungFunction>(phi);
  auto eval = [grid, phi_copy](double y) -> double {
    y = std::abs(y);
    const auto& g = *grid;
    double best = 0.0;  // x = 0 gives 0
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = g[i] * y - (*phi_copy)(g[i]);
      if (s > best) {
        best = s;
        best_i = i;
      }
    }
    if (best_i + 1 == g.size() && best > 0)
      throw Error(Errc::norm_unbounded,
                  "legendre: supremum attained at the grid edge (grid too small)");
    // refine between the neighbors of the best grid point (concave objective)
    double lo = g[best_i > 0 ? best_i - 1 : 0];
    double hi = g[std::min(best_i + 1, g.size() - 1)];
    if (hi > lo) {
      auto neg = [&](double x) { return (*phi_copy)(x)-x * y; };
      Tolerance tol;
      tol.abs_tol = 1e-12 * (hi - lo) + 1e-300;
      tol.rel_tol = 1e-12;
      ScalarMin r = minimize_scalar(neg, lo, hi, tol);
      best = std::max(best, -r.min);
    }
    return best;
  };
  return YoungFunction::custom(eval, "legendre(" + phi.name() + ")");
}

namespace {

// Smallest lambda with modular(lambda) <= 1; modular is non-increasing in
// lambda, modular(lambda) -> 0 as lambda -> infinity.
double luxembourg_from_modular(const std::function<double(double)>& modular, double scale) {
  if (scale <= 0) return 0.0;
  double hi = scale;
  int guard = 0;
  while (true) {
    double v = modular(hi);
    if (std::isfinite(v) && v <= 1.0) break;
    hi *= 4.0;
    if (++guard > 600)
      throw Error(Errc::norm_unbounded, "luxembourg_norm: no admissible lambda found");
  }
  double lo = hi;
  guard = 0;
  while (true) {
    double cand = lo / 2.0;
    double v = modular(cand);
    if (!std::isfinite(v) || v > 1.0) {
      lo = cand;
      break;
    }
    lo = cand;
    hi = cand;
    if (++guard > 2400) return 0.0;  // modular stays <= 1 down to denormals: norm is 0
  }
  // ensure finite value at the low end for the root finder
  guard = 0;
  while (!std::isfinite(modular(lo)) && guard++ < 200) lo = 0.5 * (lo + hi);
  Tolerance tol;
  tol.abs_tol = 1e-300;
  tol.rel_tol = 1e-13;
  tol.max_iter = 400;
  return root_find_monotone([&](double lam) { return modular(lam) - 1.0; }, lo, hi, tol);
}

}  // namespace

double luxembourg_norm(const Measure1D& m, const std::function<double(double)>& f,
                       const YoungFunction& phi) {
  double l1 = m.integrate([&](double x) { return std::abs(f(x)); });
  if (l1 == 0.0) return 0.0;
  if (phi.is_power()) {
    double p = phi.exponent();
    double lp = std::pow(m.integrate([&](double x) { return std::pow(std::abs(f(x)), p); }),
                         1.0 / p);
    return std::pow(p, -1.0 / p) * lp;
  }
  auto modular = [&](double lam) {
    return m.integrate([&](double x) { return phi(std::abs(f(x)) / lam); });
  };
  return luxembourg_from_modular(modular, l1);
}

double luxembourg_norm_fv(const Measure1D& m, std::span<const double> f,
                          const YoungFunction& phi) {
  double l1 = 0, fmax = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    l1 += m.cell_mass(i) * std::abs(f[i]);
    fmax = std::max(fmax, std::abs(f[i]));
  }
  if (fmax == 0.0) return 0.0;
  if (phi.is_power()) {
    double p = phi.exponent();
    return std::pow(p, -1.0 / p) * m.lp_norm_fv(f, p);
  }
  auto modular = [&](double lam) {
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += m.cell_mass(i) * phi(std::abs(f[i]) / lam);
    return s;
  };
  return luxembourg_from_modular(modular, std::max(l1, 1e-300));
}

double indicator_norm(double mu_A, const YoungPair& pair) {
  if (!(mu_A > 0) || !(mu_A < 1))
    throw Error(Errc::invalid_argument, "indicator_norm: mu_A must be in (0,1)");
  return 1.0 / pair.phi_star(std::sqrt(1.0 / mu_A));
}

double theta(double x, const YoungPair& pair) {
  if (!(x > 0) || !(x < 1)) throw Error(Errc::invalid_argument, "theta: x must be in (0,1)");
  return 2.0 / std::sqrt(pair.phi_star(std::sqrt(1.0 / x)));
}

double theta_exact(double x, const YoungPair& pair) {
  if (!(x > 0) || !(x < 1)) throw Error(Errc::invalid_argument, "theta_exact: x must be in (0,1)");
  if (pair.is_power()) {
    double p = pair.phi_star.exponent();
    return std::sqrt(x * std::pow(p / x, 2.0 / p));
  }
  // invert G(u) = Phi*(sqrt(u)) at 1/x
  double target = 1.0 / x;
  double hi = 1.0;
  int guard = 0;
  while (pair.phi_star(std::sqrt(hi)) < target && guard++ < 600) hi *= 2.0;
  Tolerance tol;
  tol.rel_tol = 1e-12;
  double u = root_find_monotone(
      [&](double v) { return pair.phi_star(std::sqrt(v)) - target; }, 0.0, hi, tol);
  return std::sqrt(x * u);
}

double orlicz_norm_dual(const Measure1D& m, const std::function<double(double)>& f,
                        const YoungPair& pair,
                        const std::vector<std::function<double(double)>>& trial_g) {
  if (trial_g.empty()) throw Error(Errc::empty_input, "orlicz_norm_dual: empty trial set");
  double best = 0.0;
  for (const auto& g : trial_g) {
    double raw = m.integrate([&](double x) { return pair.phi_star(std::abs(g(x))); });
    if (raw == 0.0) continue;
    // rescale c*g into the unit Phi*-modular ball: modular(c) is increasing in c
    double c_hi = 1.0;
    int guard = 0;
    auto modular = [&](double c) {
      return m.integrate([&](double x) { return pair.phi_star(c * std::abs(g(x))); });
    };
    while (modular(c_hi) < 1.0 && guard++ < 600) c_hi *= 2.0;
    double c_lo = c_hi;
    guard = 0;
    while (modular(c_lo) > 1.0 && guard++ < 600) c_lo /= 2.0;
    Tolerance tol;
    tol.rel_tol = 1e-11;
    double c = root_find_monotone([&](double v) { return modular(v) - 1.0; }, c_lo, c_hi, tol);
    double value = std::abs(m.integrate([&](double x) { return f(x) * c * g(x); }));
    best = std::max(best, value);
  }
  return best;
}

double orlicz_norm_power_fv(const Measure1D& m, std::span<const double> f, double p) {
  if (!(p > 1)) throw Error(Errc::invalid_argument, "orlicz_norm_power_fv: need p > 1");
  double q = p / (p - 1.0);
  return std::pow(p, 1.0 / p) * m.lp_norm_fv(f, q);
}

}  // namespace spilab
