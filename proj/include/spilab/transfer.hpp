#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spilab/capacity.hpp"
#include "spilab/measure.hpp"
#include "spilab/orlicz.hpp"

namespace spilab {

/// r -> beta(r) of a (possibly partial) super-Poincare inequality, valid for
/// r > r0. Non-increasing; evaluates to +infinity where the inequality is not
/// certified (r <= r0, or below the covered range of a table).
class BetaFunction {
public:
  static BetaFunction closed_form(double r0, std::function<double(double)> eval,
                                  std::string form = "closed-form");
  /// Table form; values are replaced by their running minimum so the function
  /// is non-increasing, and evaluation steps conservatively (the value at the
  /// largest tabulated r not exceeding the query).
  static BetaFunction table(double r0, std::vector<double> r, std::vector<double> values);

  double r0() const { return r0_; }
  const std::string& form() const { return form_; }
  bool defined_at(double r) const;
  /// beta(r), or +infinity where undefined.
  double operator()(double r) const;

private:
  BetaFunction(double r0, std::function<double(double)> eval, std::string form)
      : r0_(r0), eval_(std::move(eval)), form_(std::move(form)) {}
  double r0_;
  std::function<double(double)> eval_;
  std::string form_;
};

/// Super-Poincare inequality with the L^1 term replaced by an Orlicz norm.
struct OrliczSpi {
  BetaFunction beta;
  YoungPair pair;
};

struct TransferParams {
  std::function<double(double)> psi;  // shape function; default x log(1/x)
  double b_star = 0.5;
  std::vector<double> kappa_grid;
  TransferParams();
};

/// Inversion of the s-indexed inequality form into the r-indexed one:
/// r0 = lim_{s->inf} beta_bcr(s), beta(r) = inf{s >= 1 : beta_bcr(s) <= r}.
BetaFunction bcr_to_wang(const std::function<double(double)>& beta_bcr);

/// The reverse inversion beta_bcr(s) = inf{r > r0 : beta(r) <= s}; where the
/// set is empty the Poincare constant (if supplied) patches the value for
/// s >= 1, since a Poincare inequality yields the pair (r = C_P, beta = 1).
std::function<double(double)> wang_to_bcr(const BetaFunction& beta,
                                          std::optional<double> c_poincare = std::nullopt);

/// Measure-capacity to super-Poincare: beta(r) = 1 / sup{kappa : C_kappa >= 8/r},
/// valid for r > 8 / C_max.
BetaFunction mc_to_spi(const CapacityProfile& profile);

/// Super-Poincare to measure-capacity:
/// C_kappa = min( C psi(k)/k b*^2 , sup_{r>r0} (1 - beta(r) psi(k))/r (1-b*)^2 ).
CapacityProfile spi_to_mc(const BetaFunction& beta, double c_poincare_mc,
                          const TransferParams& prm);

/// Orlicz variant: psi(kappa) is replaced by theta^2(psi(kappa)) in the
/// supremum term (the first term is untouched).
CapacityProfile ospi_to_mc(const OrliczSpi& ospi, double c_poincare_mc, const TransferParams& prm);

/// Composition ospi_to_mc then mc_to_spi; degrades validity to r > 8 r0 as
/// b_star -> 0 (at fixed b_star the cutoff is 8 r0 / (1-b_star)^2).
BetaFunction ospi_to_spi(const OrliczSpi& ospi, double c_poincare_mc, const TransferParams& prm);

/// Certified Poincare constant min_r r / (1 - beta(r)/2) over r with beta(r) < 2.
double spi_to_poincare(const BetaFunction& beta);

struct Lemma1Bound {
  double lhs = 0;  // (1 - beta(r) mu(supp f)) * Integral f^2 dmu
  double rhs = 0;  // r * Dirichlet energy
  double supp_mass = 0;
};
Lemma1Bound lemma1_bound(const Measure1D& m, std::span<const double> f, const BetaFunction& beta,
                         double r);

}  // namespace spilab
