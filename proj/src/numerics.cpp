#include "spilab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spilab {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::parse_error: return "parse_error";
    case Errc::non_integrable_density: return "non_integrable_density";
    case Errc::tail_mass_exceeded: return "tail_mass_exceeded";
    case Errc::non_finite_value: return "non_finite_value";
    case Errc::no_sign_change: return "no_sign_change";
    case Errc::max_iter_exceeded: return "max_iter_exceeded";
    case Errc::eigen_convergence: return "eigen_convergence";
    case Errc::grid_too_coarse: return "grid_too_coarse";
    case Errc::insufficient_spectrum: return "insufficient_spectrum";
    case Errc::norm_unbounded: return "norm_unbounded";
    case Errc::hypothesis_not_satisfied: return "hypothesis_not_satisfied";
    case Errc::empty_input: return "empty_input";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

double root_find_monotone(const std::function<double(double)>& g, double lo, double hi,
                          const Tolerance& tol) {
  if (!(lo < hi)) throw Error(Errc::invalid_argument, "root_find_monotone: empty bracket");
  double flo = g(lo);
  double fhi = g(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi))
    throw Error(Errc::non_finite_value, "root_find_monotone: non-finite endpoint value");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw Error(Errc::no_sign_change, "root_find_monotone: no sign change in bracket");

  double x = lo, fx = flo;
  for (int it = 0; it < tol.max_iter; ++it) {
    double width = hi - lo;
    if (width <= tol.abs_tol + tol.rel_tol * std::max(std::abs(lo), std::abs(hi)))
      return 0.5 * (lo + hi);
    // secant step, clipped well inside the bracket; otherwise bisect
    double xs = hi - fhi * (hi - lo) / (fhi - flo);
    if (!std::isfinite(xs) || xs <= lo + 0.01 * width || xs >= hi - 0.01 * width)
      xs = 0.5 * (lo + hi);
    x = xs;
    fx = g(x);
    if (!std::isfinite(fx)) {
      x = 0.5 * (lo + hi);
      fx = g(x);
      if (!std::isfinite(fx))
        throw Error(Errc::non_finite_value, "root_find_monotone: non-finite value inside bracket");
    }
    if (std::abs(fx) <= tol.abs_tol || fx == 0.0) return x;
    if ((fx > 0) == (flo > 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
  }
  throw Error(Errc::max_iter_exceeded, "root_find_monotone: max_iter exceeded");
}

ScalarMin minimize_scalar(const std::function<double(double)>& h, double lo, double hi,
                          const Tolerance& tol) {
  if (!(lo < hi)) throw Error(Errc::invalid_argument, "minimize_scalar: empty interval");
  // Brent's method without derivatives.
  const double gold = 0.3819660112501051;
  double a = lo, b = hi;
  double x = a + gold * (b - a), w = x, v = x;
  double fx = h(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < tol.max_iter; ++it) {
    double m = 0.5 * (a + b);
    double eps = tol.abs_tol + tol.rel_tol * std::abs(x);
    if (std::abs(x - m) + 0.5 * (b - a) <= 2 * eps) break;
    double p = 0, q = 0, r = 0;
    if (std::abs(e) > eps) {
      // parabolic fit through x, v, w
      r = (x - w) * (fx - fv);
      q = (x - v) * (fx - fw);
      p = (x - v) * q - (x - w) * r;
      q = 2 * (q - r);
      if (q > 0) p = -p;
      q = std::abs(q);
      double e_old = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        double u = x + d;
        if (u - a < 2 * eps || b - u < 2 * eps) d = (x < m) ? eps : -eps;
      } else {
        e = (x < m) ? b - x : a - x;
        d = gold * e;
      }
    } else {
      e = (x < m) ? b - x : a - x;
      d = gold * e;
    }
    double u = (std::abs(d) >= eps) ? x + d : x + ((d > 0) ? eps : -eps);
    double fu = h(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  // endpoints can beat the interior for monotone objectives
  double flo_v = h(lo), fhi_v = h(hi);
  ScalarMin best{x, fx};
  if (flo_v < best.min) best = {lo, flo_v};
  if (fhi_v < best.min) best = {hi, fhi_v};
  return best;
}

namespace {

std::size_t sturm_count_below(const std::vector<double>& a, const std::vector<double>& b2,
                              double x, double pivmin) {
  std::size_t cnt = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = a[i] - x - (i ? b2[i - 1] / d : 0.0);
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0) ++cnt;
  }
  return cnt;
}

// LU solve of (T - sigma I) y = rhs with partial pivoting; bands l, d, u plus
// one fill band u2.
bool shifted_tridiag_solve(const std::vector<double>& diag, const std::vector<double>& off,
                           double sigma, std::vector<double>& y) {
  const std::size_t n = diag.size();
  std::vector<double> dl(n, 0), dd(n, 0), du(n, 0), du2(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    dd[i] = diag[i] - sigma;
    if (i + 1 < n) {
      du[i] = off[i];
      dl[i + 1] = off[i];
    }
  }
  std::vector<int> swapped(n, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(dl[i + 1]) > std::abs(dd[i])) {
      std::swap(dd[i], dl[i + 1]);
      std::swap(du[i], dd[i + 1]);
      du2[i] = du[i + 1];
      du[i + 1] = 0.0;
      std::swap(y[i], y[i + 1]);
      swapped[i] = 1;
    }
    if (dd[i] == 0.0) dd[i] = 1e-300;
    double m = dl[i + 1] / dd[i];
    dd[i + 1] -= m * du[i];
    if (i + 2 < n) du[i + 1] -= m * du2[i];
    y[i + 1] -= m * y[i];
  }
  if (dd[n - 1] == 0.0) dd[n - 1] = 1e-300;
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    if (ii + 1 < n) s -= du[ii] * y[ii + 1];
    if (ii + 2 < n) s -= du2[ii] * y[ii + 2];
    y[ii] = s / dd[ii];
    if (!std::isfinite(y[ii])) return false;
  }
  return true;
}

}  // namespace

TridiagEigen eig_sym_tridiag(const std::vector<double>& diag, const std::vector<double>& offdiag,
                             std::size_t k) {
  const std::size_t n = diag.size();
  if (n == 0) throw Error(Errc::empty_input, "eig_sym_tridiag: empty matrix");
  if (offdiag.size() + 1 != n)
    throw Error(Errc::invalid_argument, "eig_sym_tridiag: offdiag size must be n-1");
  if (k < 1 || k > n) throw Error(Errc::invalid_argument, "eig_sym_tridiag: k out of range");

  std::vector<double> b2(offdiag.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(offdiag[i - 1]);
    if (i + 1 < n) row += std::abs(offdiag[i]);
    norm = std::max(norm, row);
  }
  if (norm == 0.0) norm = 1.0;
  for (std::size_t i = 0; i < offdiag.size(); ++i) b2[i] = offdiag[i] * offdiag[i];
  const double pivmin = norm * 1e-306;

  // Gershgorin bracket
  double glo = diag[0], ghi = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    double r = (i > 0 ? std::abs(offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::abs(offdiag[i]) : 0.0);
    glo = std::min(glo, diag[i] - r);
    ghi = std::max(ghi, diag[i] + r);
  }
  glo -= norm * 1e-12 + 1e-300;
  ghi += norm * 1e-12 + 1e-300;

  TridiagEigen out;
  out.values.resize(k);
  for (std::size_t j = 1; j <= k; ++j) {
    double lo = (j >= 2) ? out.values[j - 2] - norm * 1e-14 : glo;
    double hi = ghi;
    for (int it = 0; it < 120 && hi - lo > norm * 4e-16 + 1e-300; ++it) {
      double mid = 0.5 * (lo + hi);
      if (sturm_count_below(diag, b2, mid, pivmin) >= j)
        hi = mid;
      else
        lo = mid;
    }
    out.values[j - 1] = 0.5 * (lo + hi);
  }
  std::sort(out.values.begin(), out.values.end());

  // inverse iteration
  out.vectors.assign(k, std::vector<double>(n));
  const double cluster_eps = std::max(norm * 1e-7, 1e-300);
  for (std::size_t j = 0; j < k; ++j) {
    double lambda = out.values[j];
    double sigma = lambda;
    // nudge off exact singularity when the shift reproduces the eigenvalue to
    // machine precision
    sigma += norm * 1e-14;
    DetRng rng(0x5eedbeefULL + j);
    std::vector<double>& v = out.vectors[j];
    for (std::size_t i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
    auto orthogonalize = [&](std::vector<double>& y) {
      for (std::size_t i = 0; i < j; ++i) {
        if (std::abs(out.values[i] - lambda) > cluster_eps) continue;
        double dot = 0;
        for (std::size_t t = 0; t < n; ++t) dot += y[t] * out.vectors[i][t];
        for (std::size_t t = 0; t < n; ++t) y[t] -= dot * out.vectors[i][t];
      }
    };
    auto normalize = [&](std::vector<double>& y) {
      double s = 0;
      for (double t : y) s += t * t;
      s = std::sqrt(s);
      if (s == 0.0) return false;
      for (double& t : y) t /= s;
      return true;
    };
    orthogonalize(v);
    if (!normalize(v)) {
      for (std::size_t i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
      normalize(v);
    }
    bool converged = false;
    for (int it = 0; it < 12 && !converged; ++it) {
      std::vector<double> y = v;
      if (!shifted_tridiag_solve(diag, offdiag, sigma, y))
        throw Error(Errc::eigen_convergence, "eig_sym_tridiag: inverse iteration solve failed");
      orthogonalize(y);
      if (!normalize(y)) {
        for (std::size_t i = 0; i < n; ++i) y[i] = rng.uniform(-1.0, 1.0);
        orthogonalize(y);
        normalize(y);
      }
      v = y;
      // residual ||T v - lambda v||
      double res = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double t = (diag[i] - lambda) * v[i];
        if (i > 0) t += offdiag[i - 1] * v[i - 1];
        if (i + 1 < n) t += offdiag[i] * v[i + 1];
        res += t * t;
      }
      converged = std::sqrt(res) <= norm * 1e-11;
    }
    if (!converged)
      throw Error(Errc::eigen_convergence, "eig_sym_tridiag: inverse iteration did not converge");
  }

  // final pass: exact orthonormalization within clusters, deterministic sign
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double>& v = out.vectors[j];
    for (std::size_t i = 0; i < j; ++i) {
      double dot = 0;
      for (std::size_t t = 0; t < n; ++t) dot += v[t] * out.vectors[i][t];
      if (std::abs(dot) < 1e-15) continue;
      for (std::size_t t = 0; t < n; ++t) v[t] -= dot * out.vectors[i][t];
    }
    double s = 0;
    for (double t : v) s += t * t;
    s = std::sqrt(s);
    for (double& t : v) t /= s;
    std::size_t imax = 0;
    for (std::size_t t = 1; t < n; ++t)
      if (std::abs(v[t]) > std::abs(v[imax])) imax = t;
    if (v[imax] < 0)
      for (double& t : v) t = -t;
  }
  return out;
}

std::vector<double> geom_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi > lo) || n < 2)
    throw Error(Errc::invalid_argument, "geom_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (!(hi > lo) || n < 2) throw Error(Errc::invalid_argument, "linear_grid: bad range");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

namespace {
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

DetRng::DetRng(std::uint64_t seed) {
  std::uint64_t st = seed;
  s_ = splitmix64(st);
  if (s_ == 0) s_ = 0x9E3779B97F4A7C15ULL;
}

DetRng::DetRng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t st = seed ^ (0xA24BAED4963EE407ULL * (stream + 1));
  s_ = splitmix64(st);
  if (s_ == 0) s_ = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t DetRng::next_u64() {
  // xorshift64*
  s_ ^= s_ >> 12;
  s_ ^= s_ << 25;
  s_ ^= s_ >> 27;
  return s_ * 0x2545F4914F6CDD1DULL;
}

double DetRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double DetRng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double DetRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925287 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

}  // namespace spilab
