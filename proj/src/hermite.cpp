#include "spilab/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace spilab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogGaussNorm = -0.91893853320467274178032973640562;  // -log sqrt(2 pi)

}  // namespace

double LogMag::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

LogMag hermite_log(int n, double x) {
  if (n < 0) throw Error(Errc::invalid_argument, "hermite: degree must be >= 0");
  if (n == 0) return {0.0, 1};
  double prev = 1.0, cur = x;
  double log_scale = 0.0;
  for (int k = 1; k < n; ++k) {
    double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                  std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
    double mag = std::max(std::abs(prev), std::abs(cur));
    if (mag > 1e120 || (mag > 0 && mag < 1e-120)) {
      prev /= mag;
      cur /= mag;
      log_scale += std::log(mag);
    }
  }
  if (cur == 0.0) return {kNegInf, 0};
  return {std::log(std::abs(cur)) + log_scale, cur > 0 ? 1 : -1};
}

double hermite_eval(int n, double x) { return hermite_log(n, x).value(); }

double hermite_scaled(int n, double x) {
  LogMag lm = hermite_log(n, x);
  if (lm.sign == 0) return 0.0;
  return lm.sign * std::exp(lm.log_abs - 0.25 * x * x);
}

double airy_ai(double t) {
  // Ai = c1 f - c2 g with the two Maclaurin branches; refine until the terms
  // fall below 1e-18 of the partial sum
  static const double c1 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
  static const double c2 = std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
  const double t3 = t * t * t;
  double f = 1.0, f_term = 1.0;
  double g = t, g_term = t;
  for (int k = 1; k < 600; ++k) {
    f_term *= t3 / ((3.0 * k) * (3.0 * k - 1.0));
    g_term *= t3 / ((3.0 * k) * (3.0 * k + 1.0));
    f += f_term;
    g += g_term;
    if (std::abs(f_term) < 1e-18 * (std::abs(f) + 1) &&
        std::abs(g_term) < 1e-18 * (std::abs(g) + 1))
      break;
  }
  return c1 * f - c2 * g;
}

PrResult pr_asymptotic(int n, double x) {
  if (n < 10)
    throw Error(Errc::invalid_argument, "pr_asymptotic: asymptotic regime needs n >= 10");
  const double N = std::sqrt(4.0 * n + 2.0);
  const double band = std::pow(static_cast<double>(n), -1.0 / 6.0);
  const double ax = std::abs(x);
  const double parity = (x < 0 && (n % 2)) ? -1.0 : 1.0;
  PrResult out;
  if (ax <= N - band) {
    double phi = std::asin(ax / N);
    double a_n = std::pow(2.0 / kPi, 0.25) * std::pow(static_cast<double>(n), -0.25);
    double phase = N * N / 8.0 * (2.0 * phi + std::sin(2.0 * phi)) - (n - 1) * kPi / 2.0;
    out.value = parity * a_n / std::sqrt(std::cos(phi)) * std::sin(phase);
    out.regime = PrRegime::oscillating;
    double c = std::cos(phi);
    out.error_scale = 1.0 / (n * c * c * c);
  } else if (ax >= N + band) {
    double phi = std::acosh(ax / N);
    double b_n = std::pow(8.0 * kPi, -0.25) * std::pow(static_cast<double>(n), -0.25);
    out.value = parity * b_n / std::sqrt(std::sinh(phi)) *
                std::exp(N * N / 8.0 * (2.0 * phi - std::sinh(2.0 * phi)));
    out.regime = PrRegime::exterior;
    double s = std::sinh(phi) * std::exp(-phi);
    out.error_scale = 1.0 / (n * s * s * s);
  } else {
    double t = (N - ax) * std::pow(3.0, 1.0 / 3.0) * std::pow(static_cast<double>(n), 1.0 / 6.0);
    double d_n = std::pow(3.0, 1.0 / 3.0) * std::pow(2.0 / (kPi * kPi * kPi), 0.25) *
                 std::pow(static_cast<double>(n), -1.0 / 12.0);
    double airy_profile = kPi * std::pow(3.0, -1.0 / 3.0) * airy_ai(-std::pow(3.0, -1.0 / 3.0) * t);
    out.value = parity * d_n * airy_profile;
    out.regime = PrRegime::frontier;
    out.error_scale = std::pow(static_cast<double>(n), -2.0 / 3.0);
  }
  return out;
}

double pr_calibration(int n) {
  const double N = std::sqrt(4.0 * n + 2.0);
  // pick the candidate reference point with the largest formula value, away
  // from the zeros where the ratio is ill-conditioned
  double best_ratio = 1.0, best_mag = -1.0;
  for (double phi : {0.25, 0.35, 0.45, 0.55, 0.65, 0.75}) {
    double x = N * std::sin(phi);
    PrResult pr = pr_asymptotic(n, x);
    if (std::abs(pr.value) > best_mag) {
      best_mag = std::abs(pr.value);
      best_ratio = hermite_scaled(n, x) / pr.value;
    }
  }
  return best_ratio;
}

namespace {

// simple odd-count Simpson grid on [-X, X]
struct SimpsonGrid {
  double h = 0;
  std::size_t count = 0;
  double x(std::size_t i) const { return -0.5 * h * static_cast<double>(count - 1) + h * i; }
  double w(std::size_t i) const {
    if (i == 0 || i + 1 == count) return h / 3.0;
    return (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
  }
};

SimpsonGrid make_grid(double x_max, double step) {
  SimpsonGrid g;
  std::size_t half = static_cast<std::size_t>(std::ceil(x_max / step));
  if (half % 2) ++half;
  g.count = 2 * half + 1;
  g.h = x_max / static_cast<double>(half);
  return g;
}

double quad_domain(int n, double p_max) {
  double N = std::sqrt(4.0 * n + 2.0);
  return std::max(N + 2.0, std::sqrt(std::max(1.0, p_max * n))) + 15.0;
}

double logsumexp_acc(const std::vector<double>& v) {
  double m = kNegInf;
  for (double t : v) m = std::max(m, t);
  if (!std::isfinite(m)) return kNegInf;
  double s = 0;
  for (double t : v) s += std::exp(t - m);
  return m + std::log(s);
}

}  // namespace

std::vector<double> lp_norms(int n, std::span<const double> p_set) {
  for (double p : p_set)
    if (!(p >= 2)) throw Error(Errc::invalid_argument, "lp_norm: requires p >= 2");
  if (n == 0) return std::vector<double>(p_set.size(), 1.0);
  double p_max = *std::max_element(p_set.begin(), p_set.end());
  SimpsonGrid g = make_grid(quad_domain(n, p_max), 0.002);
  std::vector<double> logmag(g.count);
  for (std::size_t i = 0; i < g.count; ++i) {
    LogMag lm = hermite_log(n, g.x(i));
    logmag[i] = (lm.sign == 0) ? kNegInf : lm.log_abs;
  }
  std::vector<double> out;
  std::vector<double> terms(g.count);
  for (double p : p_set) {
    for (std::size_t i = 0; i < g.count; ++i) {
      double xi = g.x(i);
      terms[i] = p * logmag[i] - 0.5 * xi * xi + kLogGaussNorm + std::log(g.w(i));
    }
    double log_integral = logsumexp_acc(terms);
    out.push_back(std::exp(log_integral / p));
  }
  return out;
}

double lp_norm(int n, double p) {
  double ps[1] = {p};
  return lp_norms(n, ps)[0];
}

LpAudit audit_lp_bound(int n_max, std::span<const double> p_set) {
  if (n_max < 5) throw Error(Errc::invalid_argument, "audit_lp_bound: need n_max >= 5");
  for (double p : p_set)
    if (!(p > 2)) throw Error(Errc::invalid_argument, "audit_lp_bound: p_set must lie in (2, inf)");
  LpAudit audit;
  audit.c_sup = 0;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> norms = lp_norms(n, p_set);
    for (std::size_t j = 0; j < p_set.size(); ++j) {
      double p = p_set[j];
      double c = std::exp((std::log(norms[j]) - 0.75 * n * std::log(p)) / n);
      if (!std::isfinite(c))
        throw Error(Errc::norm_unbounded, "audit_lp_bound: non-finite growth constant");
      audit.rows.push_back({n, p, norms[j], c});
      audit.c_sup = std::max(audit.c_sup, c);
    }
  }
  return audit;
}

IntegralSplit integral_split(int n, double p) {
  if (!(p >= 2)) throw Error(Errc::invalid_argument, "integral_split: requires p >= 2");
  if (n < 10) throw Error(Errc::invalid_argument, "integral_split: requires n >= 10");
  const double N = std::sqrt(4.0 * n + 2.0);
  const double band = std::pow(static_cast<double>(n), -1.0 / 6.0);
  SimpsonGrid g = make_grid(quad_domain(n, p), 0.002);
  std::vector<double> t1, t2, t3;
  for (std::size_t i = 0; i < g.count; ++i) {
    double xi = g.x(i);
    LogMag lm = hermite_log(n, xi);
    double term = (lm.sign == 0 ? kNegInf : p * lm.log_abs) - 0.5 * xi * xi + kLogGaussNorm +
                  std::log(g.w(i));
    double ax = std::abs(xi);
    if (ax <= N - band)
      t1.push_back(term);
    else if (ax >= N + band)
      t3.push_back(term);
    else
      t2.push_back(term);
  }
  IntegralSplit out;
  out.i1 = std::exp(logsumexp_acc(t1));
  out.i2 = std::exp(logsumexp_acc(t2));
  out.i3 = std::exp(logsumexp_acc(t3));
  return out;
}

namespace {

std::uint64_t binom_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > static_cast<unsigned __int128>(std::numeric_limits<std::uint64_t>::max()))
      throw Error(Errc::invalid_argument, "eigenspace_dims: dimension count overflows");
  }
  return static_cast<std::uint64_t>(c);
}

}  // namespace

EigenspaceDims eigenspace_dims(int d, int k) {
  if (d < 1 || k < 0) throw Error(Errc::invalid_argument, "eigenspace_dims: need d >= 1, k >= 0");
  EigenspaceDims out;
  out.cumulative_dim = binom_u64(static_cast<std::uint64_t>(k) + d, d);
  out.level_dim = (k == 0) ? 1
                           : out.cumulative_dim - binom_u64(static_cast<std::uint64_t>(k) - 1 + d, d);
  if (k >= 1) {
    double bound = std::pow(2.0 * k, d);
    if (static_cast<double>(out.cumulative_dim) > bound * (1 + 1e-12))
      throw Error(Errc::hypothesis_not_satisfied,
                  "eigenspace_dims: cumulative dimension exceeds (2k)^d");
  }
  return out;
}

double multivariate_lp_bound(std::span<const int> alpha, double p) {
  if (!(p >= 2)) throw Error(Errc::invalid_argument, "multivariate_lp_bound: requires p >= 2");
  double prod = 1.0;
  for (int a : alpha) {
    if (a < 0) throw Error(Errc::invalid_argument, "multivariate_lp_bound: negative index");
    if (a > 0) prod *= lp_norm(a, p);
  }
  return prod;
}

std::vector<std::vector<double>> hermite_gram(int n_max) {
  if (n_max < 0) throw Error(Errc::invalid_argument, "hermite_gram: bad degree");
  const int m = n_max + 1;
  SimpsonGrid g = make_grid(quad_domain(n_max, 2.0), 0.002);
  std::vector<std::vector<double>> gram(m, std::vector<double>(m, 0.0));
  std::vector<double> h(m);
  for (std::size_t i = 0; i < g.count; ++i) {
    double x = g.x(i);
    h[0] = 1.0;
    if (m > 1) h[1] = x;
    for (int k = 1; k + 1 < m; ++k)
      h[k + 1] = (x * h[k] - std::sqrt(static_cast<double>(k)) * h[k - 1]) /
                 std::sqrt(static_cast<double>(k + 1));
    double w = g.w(i) * std::exp(-0.5 * x * x + kLogGaussNorm);
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) gram[a][b] += w * h[a] * h[b];
  }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < a; ++b) gram[a][b] = gram[b][a];
  return gram;
}

double hermite_project(const std::function<double(double)>& f, int k, double x_max) {
  SimpsonGrid g = make_grid(x_max + std::sqrt(4.0 * k + 2.0), 0.002);
  double s = 0;
  for (std::size_t i = 0; i < g.count; ++i) {
    double x = g.x(i);
    s += g.w(i) * f(x) * hermite_eval(k, x) * std::exp(-0.5 * x * x + kLogGaussNorm);
  }
  return s;
}

}  // namespace spilab
