#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spilab/error.hpp"
#include "spilab/expr.hpp"

namespace spilab {

/// Potential V defining the Gibbs density e^{-V(x)}/Z.
class Potential {
public:
  enum class Kind { gaussian, double_well, power, polynomial, expression };

  static Potential gaussian();                               // x^2/2
  static Potential double_well();                            // (x^2-1)^2
  static Potential power(double alpha);                      // |x|^alpha
  static Potential polynomial(std::vector<double> coeffs);   // sum c_k x^k
  static Potential expression(const std::string& src);
  static Potential from_preset(const std::string& name, const std::vector<double>& params = {});

  double operator()(double x) const;
  Kind kind() const { return kind_; }
  const std::string& description() const { return description_; }
  /// Centered finite-difference derivative V'(x).
  double derivative(double x, double step = 1e-5) const;

private:
  Potential(Kind k, std::vector<double> params, std::string desc,
            std::shared_ptr<const expr::Node> tree = nullptr);
  Kind kind_;
  std::vector<double> params_;
  std::string description_;
  std::shared_ptr<const expr::Node> tree_;
};

/// Probability measure e^{-V(x)}dx/Z on a truncated interval, with quadrature.
///
/// Two integration rules coexist: per-cell Simpson (with midpoint evaluations)
/// for analytic integrands, and the node-mass (finite-volume) rule for grid
/// functions. The latter is the inner product in which the discretized
/// generator is self-adjoint, so spectral identities hold exactly in it.
/// Immutable after construction; all queries are const and thread-safe.
class Measure1D {
public:
  static Measure1D build(const Potential& pot, double x_lo, double x_hi, std::size_t n_nodes,
                         double tail_tol);
  /// Doubles the domain outward until the tail-mass estimate clears tail_tol;
  /// reports non-integrable densities (normalization diverging under growth).
  static Measure1D build_adaptive(const Potential& pot, double x_lo, double x_hi,
                                  std::size_t n_nodes, double tail_tol,
                                  int max_doublings = 48);

  double x_lo() const { return nodes_.front(); }
  double x_hi() const { return nodes_.back(); }
  double log_z() const { return log_z_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double step() const { return h_; }
  const Potential& potential() const { return potential_; }
  /// One-sided exponential bound on the mass outside the truncated domain.
  double tail_estimate() const { return tail_estimate_; }

  /// log of the normalized density at an arbitrary point.
  double log_density(double x) const { return -potential_(x) - log_z_; }
  double density(double x) const;
  /// Node mass of the finite-volume rule (h_i * density at node i).
  double cell_mass(std::size_t i) const { return fv_mass_[i]; }
  double fv_total_mass() const { return fv_total_; }

  struct QuadResult {
    double value = 0;
    double error_estimate = 0;
  };
  QuadResult integrate_err(const std::function<double(double)>& f) const;
  double integrate(const std::function<double(double)>& f) const;

  /// Finite-volume sums over grid functions (values sampled at the nodes).
  double inner_fv(std::span<const double> f, std::span<const double> g) const;
  double integrate_fv(std::span<const double> f) const;
  double lp_norm_fv(std::span<const double> f, double p) const;

  /// Dirichlet energy.
  double dirichlet_energy(const std::function<double(double)>& f,
                          const std::function<double(double)>& df) const;
  /// Finite-difference energy of the node samples of f (the quadratic form of
  /// the discretized generator).
  double dirichlet_energy(const std::function<double(double)>& f) const;
  double dirichlet_energy_fv(std::span<const double> f) const;

  double cdf(double x) const;         // mu((-inf, x]) within the truncation
  double tail_mass(double x) const;   // mu([x, x_hi]), accurate in the tail
  double mass_between(double a, double b) const;
  double quantile(double p) const;
  double median() const { return quantile(0.5); }
  /// x with mu([x, x_hi]) = kappa.
  double tail_quantile(double kappa) const;

  /// log( Z * Integral_a^b e^{V(x)} dx ); the two-sided resistance integrals
  /// of interval capacities are built from this.
  double log_weight_integral(double a, double b) const;

  /// mu-measure of the support of a grid function (cells where |f| exceeds
  /// rel_threshold * max|f|).
  double support_mass(std::span<const double> f, double rel_threshold = 1e-12) const;

private:
  Measure1D(Potential pot, std::vector<double> nodes);
  void finalize(double tail_tol, bool throw_on_tail);

  Potential potential_;
  std::vector<double> nodes_;
  double h_ = 0;
  double log_z_ = 0;
  double tail_estimate_ = 0;
  std::vector<double> neg_v_node_;   // -V at nodes
  std::vector<double> neg_v_mid_;    // -V at cell midpoints
  std::vector<double> cell_logmass_; // log of unnormalized per-cell Simpson mass
  std::vector<double> prefix_mass_;  // normalized cumulative mass at nodes
  std::vector<double> suffix_mass_;
  std::vector<double> fv_mass_;      // normalized node masses
  double fv_total_ = 0;

  double partial_cell_mass(std::size_t cell, double a, double b) const;
};

}  // namespace spilab
