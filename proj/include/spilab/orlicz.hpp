#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spilab/measure.hpp"

namespace spilab {

/// Even convex function with Phi(0) = 0 and Phi(x) -> infinity; power kinds
/// carry their exponent so norms can take the closed-form route.
class YoungFunction {
public:
  static YoungFunction power(double p);  // |x|^p / p
  static YoungFunction custom(std::function<double(double)> f, std::string name = "custom");

  double operator()(double x) const { return eval_(std::abs(x)); }
  bool is_power() const { return p_ > 0; }
  double exponent() const { return p_; }
  const std::string& name() const { return name_; }

private:
  YoungFunction(std::function<double(double)> f, double p, std::string name)
      : eval_(std::move(f)), p_(p), name_(std::move(name)) {}
  std::function<double(double)> eval_;
  double p_ = 0;
  std::string name_;
};

/// Dual pair (Phi, Phi*); phi_star is the Legendre transform of phi.
struct YoungPair {
  YoungFunction phi;
  YoungFunction phi_star;

  /// phi_star(x) = x^p/p and phi(x) = x^q/q with the conjugate exponent
  /// 1/p + 1/q = 1. Requires p > 2 so that phi_star(x)/x^2 -> infinity.
  static YoungPair power_pair(double p);
  bool is_power() const { return phi_star.is_power(); }
};

/// Sampled structural checks: Phi(0)=0, divergence at infinity, convexity.
void check_young(const YoungFunction& phi, double x_max = 64.0);
/// Above plus Young's inequality x*y <= Phi(x) + Phi*(y) on a sample grid.
void check_young_pair(const YoungPair& pair);
/// Growth conditions Phi*(x)/x^2 -> infinity and convexity of x -> Phi*(sqrt x).
void check_growth_conditions(const YoungPair& pair);

/// Numerical Legendre transform sup_x (x y - phi(x)), maximized over the grid
/// with golden-section refinement between neighbors.
YoungFunction legendre(const YoungFunction& phi, const std::vector<double>& x_grid);

/// Smallest lambda with Integral Phi(|f|/lambda) dmu <= 1; 0 for f identically 0.
double luxembourg_norm(const Measure1D& m, const std::function<double(double)>& f,
                       const YoungFunction& phi);
/// Same norm for a grid function under the node-mass rule.
double luxembourg_norm_fv(const Measure1D& m, std::span<const double> f, const YoungFunction& phi);

/// Closed-form value 1/Phi*(sqrt(1/mu_A)) used as the support factor of
/// indicator functions in the Orlicz transfer chain.
double indicator_norm(double mu_A, const YoungPair& pair);

/// theta(x) = 2 / Phi*(sqrt(1/x))^{1/2}; theta(x) -> 0 as x -> 0.
double theta(double x, const YoungPair& pair);

/// theta_exact(x)^2 = x * (Phi* o sqrt)^{-1}(1/x): the support factor obtained
/// from the exact Orlicz norm of an indicator. Bounds the Luxembourg norm of
/// any f by ||f||_2 * theta_exact(mu(supp f)) for every support size.
double theta_exact(double x, const YoungPair& pair);

/// Lower bound on the dual Orlicz norm N_Phi(f) from a finite trial set, each
/// trial rescaled into the unit Phi*-modular ball. Used for sandwich checks
/// only, never as the norm itself.
double orlicz_norm_dual(const Measure1D& m, const std::function<double(double)>& f,
                        const YoungPair& pair,
                        const std::vector<std::function<double(double)>>& trial_g);

/// Dual Orlicz norm N_Phi(f) for power pairs: p^{1/p} ||f||_q (sharp Hoelder).
double orlicz_norm_power_fv(const Measure1D& m, std::span<const double> f, double p);

}  // namespace spilab
