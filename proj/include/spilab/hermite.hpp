#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spilab/error.hpp"

namespace spilab {

/// Signed log-magnitude value; keeps Hermite evaluations representable far
/// outside the oscillatory zone, where |H_n| overflows double precision.
struct LogMag {
  double log_abs = 0;  // -inf encodes zero
  int sign = 0;
  double value() const;
};

/// H_n(x), orthonormal in L^2 of the standard Gaussian:
/// H_{n+1} = (x H_n - sqrt(n) H_{n-1}) / sqrt(n+1).
double hermite_eval(int n, double x);
LogMag hermite_log(int n, double x);
/// e^{-x^2/4} H_n(x), evaluated through the log form.
double hermite_scaled(int n, double x);

enum class PrRegime { oscillating, exterior, frontier };

struct PrResult {
  double value = 0;        // approximation to e^{-x^2/4} H_n(x)
  PrRegime regime = PrRegime::oscillating;
  double error_scale = 0;  // the regime's relative error scale
};

/// Plancherel-Rotach approximation with N = sqrt(4n+2):
///  - |x| <= N - n^{-1/6}:  a_n (cos phi)^{-1/2} sin(N^2/8 (2 phi + sin 2 phi)
///                          - (n-1) pi/2), x = N sin phi, error 1/(n cos^3 phi)
///  - |x| >= N + n^{-1/6}:  b_n (sinh phi)^{-1/2} exp(N^2/8 (2 phi - sinh 2 phi)),
///                          x = N cosh phi, error 1/(n (sinh phi e^{-phi})^3)
///  - frontier band:        d_n A(t), x = N - 3^{-1/3} n^{-1/6} t,
///                          A(t) = pi 3^{-1/3} Ai(-3^{-1/3} t), error n^{-2/3}
/// with a_n = (2/pi)^{1/4} n^{-1/4}, b_n = (8 pi)^{-1/4} n^{-1/4},
/// d_n = 3^{1/3} (2/pi^3)^{1/4} n^{-1/12}. Requires n >= 10.
PrResult pr_asymptotic(int n, double x);

/// Scalar mapping the formula onto the recurrence normalization, measured at
/// an interior reference point; approximately 1 for the scalings above.
double pr_calibration(int n);

/// Airy function Ai by its Maclaurin series with term-count refinement.
double airy_ai(double t);

/// ||H_n||_p under the standard Gaussian, quadrature in log-magnitude form.
double lp_norm(int n, double p);
/// One pass per degree, all p at once.
std::vector<double> lp_norms(int n, std::span<const double> p_set);

struct LpAuditRow {
  int n = 0;
  double p = 0;
  double norm = 0;
  double c = 0;  // (||H_n||_p / p^{3n/4})^{1/n}
};

struct LpAudit {
  std::vector<LpAuditRow> rows;
  double c_sup = 0;
};

/// Growth-constant audit of ||H_n||_p <= C^n p^{3n/4} over the (n, p) table.
LpAudit audit_lp_bound(int n_max, std::span<const double> p_set);

struct IntegralSplit {
  double i1 = 0;  // |x| <= N - n^{-1/6}
  double i2 = 0;  // frontier band
  double i3 = 0;  // |x| >= N + n^{-1/6}
};

/// Splits Integral |H_n|^p dgamma across the three regimes; i1+i2+i3 equals
/// lp_norm(n,p)^p by construction of the shared rule.
IntegralSplit integral_split(int n, double p);

struct EigenspaceDims {
  std::uint64_t level_dim = 0;       // multi-indices with |alpha| = k
  std::uint64_t cumulative_dim = 0;  // binom(k + d, d)
};

/// Dimension counts of the Hermite eigenspaces of the d-dimensional
/// Ornstein-Uhlenbeck generator; cumulative_dim <= (2k)^d for k >= 1.
EigenspaceDims eigenspace_dims(int d, int k);

/// Product upper bound prod_k ||H_{alpha_k}||_p on ||H_alpha||_p.
double multivariate_lp_bound(std::span<const int> alpha, double p);

/// Gram matrix of {H_0..H_n_max} under the Gaussian, by quadrature.
std::vector<std::vector<double>> hermite_gram(int n_max);

/// Quadrature inner product (f, H_k) under the Gaussian for analytic f.
double hermite_project(const std::function<double(double)>& f, int k, double x_max = 20.0);

}  // namespace spilab
