#pragma once

#include <functional>
#include <vector>

#include "spilab/error.hpp"

namespace spilab {

struct Tolerance {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_iter = 200;
};

/// Root of a monotone function on a sign-changing bracket [lo, hi].
/// Bisection with secant acceleration; the iterate never leaves the bracket.
double root_find_monotone(const std::function<double(double)>& g, double lo, double hi,
                          const Tolerance& tol = {});

struct ScalarMin {
  double argmin = 0.0;
  double min = 0.0;
};

/// Derivative-free minimization on [lo, hi] (golden section with parabolic
/// refinement). For unimodal h this locates the global minimizer; endpoints
/// are probed as well.
ScalarMin minimize_scalar(const std::function<double(double)>& h, double lo, double hi,
                          const Tolerance& tol = {});

struct TridiagEigen {
  std::vector<double> values;                 // ascending
  std::vector<std::vector<double>> vectors;   // orthonormal, one per value
};

/// k smallest eigenpairs of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal. Eigenvalues by Sturm-count bisection (certified
/// ordering), eigenvectors by inverse iteration with in-cluster
/// re-orthogonalization.
TridiagEigen eig_sym_tridiag(const std::vector<double>& diag, const std::vector<double>& offdiag,
                             std::size_t k);

/// Geometric grid with n points from lo to hi (inclusive); lo, hi > 0.
std::vector<double> geom_grid(double lo, double hi, std::size_t n);

/// Uniform grid with n points from lo to hi (inclusive).
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/// Deterministic random stream (splitmix-seeded xorshift); identical output on
/// every platform, unlike the standard-library distributions.
class DetRng {
public:
  explicit DetRng(std::uint64_t seed);
  /// Substream t of the same seed; streams are independent.
  DetRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double a, double b);
  double normal();                        // standard normal, Box-Muller
private:
  std::uint64_t s_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spilab
