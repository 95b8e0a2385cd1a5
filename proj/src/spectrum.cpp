#include "spilab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spilab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Tridiag discretize_generator(const Measure1D& m) {
  const std::size_t n = m.size();
  if (n < 66)
    throw Error(Errc::grid_too_coarse, "discretize_generator: need at least 64 interior nodes");
  const double h = m.step();
  const auto& pot = m.potential();
  // log cell masses and log conductances, normalization-free (ratios only)
  std::vector<double> log_mass(n), log_cond(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double hw = (i == 0 || i + 1 == n) ? 0.5 * h : h;
    log_mass[i] = -pot(m.node(i)) + std::log(hw);
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    log_cond[i] = -pot(0.5 * (m.node(i) + m.node(i + 1))) - std::log(h);

  Tridiag t;
  t.diag.assign(n, 0.0);
  t.offdiag.assign(n - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) t.diag[i] += std::exp(log_cond[i - 1] - log_mass[i]);
    if (i + 1 < n) t.diag[i] += std::exp(log_cond[i] - log_mass[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    t.offdiag[i] = -std::exp(log_cond[i] - 0.5 * (log_mass[i] + log_mass[i + 1]));
  return t;
}

SpectralData low_spectrum(const Measure1D& m, std::size_t k, std::optional<double> ess_threshold) {
  if (k < 1) throw Error(Errc::invalid_argument, "low_spectrum: k must be >= 1");
  Tridiag t = discretize_generator(m);
  TridiagEigen eig = eig_sym_tridiag(t.diag, t.offdiag, k);
  if (eig.values.front() < -1e-6 * (1 + std::abs(eig.values.back())))
    throw Error(Errc::eigen_convergence, "low_spectrum: negative bottom eigenvalue");

  SpectralData out{m, std::move(eig.values), {}, ess_threshold};
  out.eigenvectors.assign(k, std::vector<double>(m.size(), 0.0));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      double mass = m.cell_mass(i);
      out.eigenvectors[j][i] = (mass > 0) ? eig.vectors[j][i] / std::sqrt(mass) : 0.0;
    }
    // deterministic sign: positive at the rightmost node of significant
    // magnitude (matches the positive-leading-coefficient convention of the
    // Hermite eigenfunctions)
    double peak = 0;
    for (double v : out.eigenvectors[j]) peak = std::max(peak, std::abs(v));
    for (std::size_t i = m.size(); i-- > 0;) {
      double v = out.eigenvectors[j][i];
      if (std::abs(v) >= 0.2 * peak) {
        if (v < 0)
          for (double& t : out.eigenvectors[j]) t = -t;
        break;
      }
    }
  }
  return out;
}

OrliczSpi spectral_ospi(const SpectralData& spec, const YoungPair& pair,
                        const std::vector<double>& r_grid) {
  check_growth_conditions(pair);
  const double lambda_top = spec.largest_computed();
  double ess = spec.ess_threshold.value_or(std::numeric_limits<double>::quiet_NaN());
  for (double r : r_grid) {
    if (!(r > 0)) throw Error(Errc::invalid_argument, "spectral_ospi: r grid must be positive");
    bool covered = 1.0 / r < lambda_top;
    bool below_ess_validity = spec.ess_threshold && !(r > 1.0 / ess);
    if (!covered && !below_ess_validity)
      throw Error(Errc::insufficient_spectrum,
                  "spectral_ospi: insufficient spectrum computed for r = " + std::to_string(r));
  }

  auto norms_sq = std::make_shared<std::vector<double>>();
  for (const auto& f : spec.eigenvectors) {
    double nrm = luxembourg_norm_fv(spec.measure, f, pair.phi_star);
    if (!std::isfinite(nrm))
      throw Error(Errc::norm_unbounded, "spectral_ospi: eigenvector outside the Orlicz space");
    norms_sq->push_back(nrm * nrm);
  }

  double r0 = spec.ess_threshold ? (std::isfinite(ess) ? 1.0 / ess : 0.0) : 1.0 / lambda_top;
  auto values = std::make_shared<std::vector<double>>(*norms_sq);
  auto lambdas = std::make_shared<std::vector<double>>(spec.eigenvalues);
  auto eval = [values, lambdas, lambda_top](double r) -> double {
    if (!(1.0 / r < lambda_top)) return kInf;  // coverage not demonstrable here
    double s = 0;
    for (std::size_t i = 0; i < lambdas->size(); ++i)
      if ((*lambdas)[i] <= 1.0 / r) s += (*values)[i];
    return s;
  };
  return OrliczSpi{BetaFunction::closed_form(r0, eval, "spectral"), pair};
}

std::vector<double> random_test_function(const Measure1D& m, DetRng& rng) {
  const double lo = m.x_lo(), hi = m.x_hi();
  const double width = hi - lo;
  const std::size_t n = m.size();
  std::vector<double> f(n, 0.0);
  if (rng.uniform() < 0.5) {
    // Gaussian bump
    double center = rng.uniform(lo + 0.1 * width, hi - 0.1 * width);
    double sigma = rng.uniform(5 * m.step(), 0.25 * width);
    double amp = rng.uniform(0.25, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      double z = (m.node(i) - center) / sigma;
      f[i] = amp * std::exp(-0.5 * z * z);
    }
  } else {
    // natural cubic spline through random knots, continued by constants
    std::size_t knots = 4 + static_cast<std::size_t>(rng.next_u64() % 7);
    std::vector<double> xs(knots), ys(knots);
    for (std::size_t i = 0; i < knots; ++i) xs[i] = rng.uniform(lo + 0.05 * width, hi - 0.05 * width);
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 1; i < knots; ++i)
      if (xs[i] - xs[i - 1] < 1e-3 * width) xs[i] = xs[i - 1] + 1e-3 * width;
    for (std::size_t i = 0; i < knots; ++i) ys[i] = rng.normal();
    // second derivatives from the natural-spline tridiagonal system
    std::vector<double> m2(knots, 0.0);
    if (knots > 2) {
      std::size_t inner = knots - 2;
      std::vector<double> a(inner, 0), b(inner, 0), c(inner, 0), d(inner, 0);
      for (std::size_t i = 0; i < inner; ++i) {
        double h0 = xs[i + 1] - xs[i], h1 = xs[i + 2] - xs[i + 1];
        a[i] = h0;
        b[i] = 2 * (h0 + h1);
        c[i] = h1;
        d[i] = 6 * ((ys[i + 2] - ys[i + 1]) / h1 - (ys[i + 1] - ys[i]) / h0);
      }
      for (std::size_t i = 1; i < inner; ++i) {
        double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
      }
      m2[inner] = d[inner - 1] / b[inner - 1];
      for (std::size_t i = inner - 1; i-- > 0;)
        m2[i + 1] = (d[i] - c[i] * m2[i + 2]) / b[i];
    }
    auto spline_at = [&](double x) -> double {
      if (x <= xs.front()) return ys.front();
      if (x >= xs.back()) return ys.back();
      std::size_t j = static_cast<std::size_t>(
                          std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
      double h = xs[j + 1] - xs[j];
      double u = (x - xs[j]) / h;
      double v = 1 - u;
      return v * ys[j] + u * ys[j + 1] +
             h * h / 6.0 * ((v * v * v - v) * m2[j] + (u * u * u - u) * m2[j + 1]);
    };
    for (std::size_t i = 0; i < n; ++i) f[i] = spline_at(m.node(i));
  }
  if (rng.uniform() < 0.2) {
    double offset = rng.uniform(-1.0, 1.0);
    for (double& v : f) v += offset;
  }
  return f;
}

namespace {

VerifyReport verify_core(const Measure1D& m, double r, std::size_t trials, std::uint64_t seed,
                         const std::function<double(std::span<const double>)>& norm_term) {
  VerifyReport report;
  report.r = r;
  report.trials = trials;
  report.seed = seed;
  report.max_violation = -kInf;
  for (std::size_t t = 0; t < trials; ++t) {
    DetRng rng(seed, t);
    std::vector<double> f = random_test_function(m, rng);
    double lhs = m.inner_fv(f, f);
    double rhs = r * m.dirichlet_energy_fv(f) + norm_term(f);
    double violation = (lhs - rhs) / std::max(lhs, 1e-300);
    if (violation > report.max_violation) {
      report.max_violation = violation;
      report.worst_lhs = lhs;
      report.worst_rhs = rhs;
    }
  }
  report.pass = report.max_violation <= VerifyReport::kRelTol;
  return report;
}

}  // namespace

VerifyReport verify_spi(const Measure1D& m, const BetaFunction& beta, double r,
                        std::size_t trials, std::uint64_t seed) {
  if (!beta.defined_at(r))
    throw Error(Errc::invalid_argument, "verify_spi: r is below the validity threshold");
  double b = beta(r);
  return verify_core(m, r, trials, seed, [&m, b](std::span<const double> f) {
    std::vector<double> absf(f.begin(), f.end());
    for (double& v : absf) v = std::abs(v);
    double l1 = m.integrate_fv(absf);
    return b * l1 * l1;
  });
}

VerifyReport verify_spi(const Measure1D& m, const OrliczSpi& ospi, double r,
                        std::size_t trials, std::uint64_t seed) {
  if (!ospi.beta.defined_at(r))
    throw Error(Errc::invalid_argument, "verify_spi: r is below the validity threshold");
  double b = ospi.beta(r);
  const YoungPair& pair = ospi.pair;
  return verify_core(m, r, trials, seed, [&m, b, &pair](std::span<const double> f) {
    double dual_norm = pair.is_power()
                           ? orlicz_norm_power_fv(m, f, pair.phi_star.exponent())
                           : 2.0 * luxembourg_norm_fv(m, f, pair.phi);
    return b * dual_norm * dual_norm;
  });
}

SplitResult projection_split(const SpectralData& spec, std::span<const double> f, double r) {
  if (!(r > 0)) throw Error(Errc::invalid_argument, "projection_split: r must be positive");
  if (!spec.covers(r))
    throw Error(Errc::insufficient_spectrum,
                "projection_split: computed spectrum does not cover [0, 1/r]");
  const Measure1D& m = spec.measure;
  double total = m.inner_fv(f, f);
  double p_part = 0;
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    if (spec.eigenvalues[i] > 1.0 / r) break;
    double c = m.inner_fv(f, spec.eigenvectors[i]);
    p_part += c * c;
  }
  double q_part = total - p_part;
  double scale = std::max(total, 1e-300);
  if (q_part < -1e-9 * scale)
    throw Error(Errc::hypothesis_not_satisfied, "projection_split: negative remainder");
  double energy = m.dirichlet_energy_fv(f);
  if (q_part > r * energy + 1e-8 * scale)
    throw Error(Errc::hypothesis_not_satisfied,
                "projection_split: remainder exceeds r times the Dirichlet energy");
  return SplitResult{p_part, q_part};
}

}  // namespace spilab
