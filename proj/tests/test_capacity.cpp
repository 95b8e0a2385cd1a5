#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "spilab/capacity.hpp"
#include "spilab/numerics.hpp"

using namespace spilab;

namespace {
const double kInfTol = std::numeric_limits<double>::infinity();

Measure1D uniform01(std::size_t nodes = 2001) {
  return Measure1D::build(Potential::polynomial({0.0}), 0, 1, nodes, kInfTol);
}
Measure1D standard_gaussian(std::size_t nodes = 2001) {
  return Measure1D::build(Potential::gaussian(), -10, 10, nodes, 1e-9);
}
}  // namespace

TEST_CASE("interval_capacity: uniform measure symmetric instance") {
  Measure1D m = uniform01();
  // optimal support [0.05, 0.95] splits the slack symmetrically: 1/0.2 + 1/0.2
  CHECK(interval_capacity(m, 0.45, 0.55) == doctest::Approx(10.0).epsilon(1e-7));
}

TEST_CASE("interval_capacity: set mass above 1/2 is rejected") {
  Measure1D m = uniform01(201);
  CHECK_THROWS_AS(interval_capacity(m, 0.2, 0.8), Error);
}

TEST_CASE("interval_capacity: shrinking the set inside a fixed window is continuous") {
  Measure1D m = uniform01();
  double prev = interval_capacity(m, 0.5 - 0.04, 0.5 + 0.04);
  double limit = 0;
  for (double eps : {0.02, 0.01, 0.005, 0.0025}) {
    double cap = interval_capacity(m, 0.5 - eps, 0.5 + eps);
    CHECK(cap < prev * (1 + 1e-9));
    prev = cap;
    limit = cap;
  }
  // the limiting two-sided resistance with support [0, 1] split at 0.5
  CHECK(limit == doctest::Approx(8.0).epsilon(2e-2));
}

TEST_CASE("interval_capacity: gaussian instance against the discrete minimizer") {
  Measure1D m = standard_gaussian();
  oracle::CapacityOracle brute{[](double x) { return 0.5 * x * x; }, -10, 10, 400};
  double lib = interval_capacity(m, -0.1, 0.1);
  double ref = brute.capacity(-0.1, 0.1);
  CHECK(lib == doctest::Approx(ref).epsilon(0.02));
}

TEST_CASE("interval_capacity: random instances against the discrete minimizer") {
  DetRng rng(97);
  for (int trial = 0; trial < 6; ++trial) {
    double alpha = rng.uniform(1.0, 2.0);
    auto pot = [alpha](double x) { return std::pow(std::abs(x), alpha); };
    Measure1D m = Measure1D::build(Potential::power(alpha), -12, 12, 2401, 1e-6);
    oracle::CapacityOracle brute{pot, -12, 12, 400};
    double h = 24.0 / 400;
    int ia = 170 + static_cast<int>(rng.next_u64() % 20);
    int ib = ia + 4 + static_cast<int>(rng.next_u64() % 40);
    double a = -12 + ia * h, b = -12 + ib * h;
    if (m.mass_between(a, b) > 0.45) continue;
    double lib = interval_capacity(m, a, b);
    double ref = brute.capacity(a, b);
    CHECK(lib == doctest::Approx(ref).epsilon(0.02));
  }
}

TEST_CASE("interval_capacity: monotone in the set and invariant under density scaling") {
  Measure1D m = standard_gaussian();
  double small = interval_capacity(m, -0.1, 0.1);
  double large = interval_capacity(m, -0.3, 0.3);
  CHECK(small <= large + 1e-12);
  // adding a constant to V is absorbed by the normalization
  Measure1D shifted =
      Measure1D::build(Potential::expression("x^2/2 + 3"), -10, 10, 2001, 1e-9);
  CHECK(interval_capacity(shifted, -0.1, 0.1) == doctest::Approx(small).epsilon(1e-9));
}

TEST_CASE("capacity_profile: gaussian profile shape and the log lower bound") {
  Measure1D m = standard_gaussian();
  CapacityProfile profile = capacity_profile(m, geom_grid(1e-8, 0.5, 40));
  for (std::size_t i = 1; i < profile.size(); ++i) {
    CHECK(profile.c_kappa[i] <= profile.c_kappa[i - 1] * (1 + 1e-12));
    double ratio_prev = profile.kappa[i - 1] / profile.c_kappa[i - 1];
    double ratio = profile.kappa[i] / profile.c_kappa[i];
    CHECK(ratio >= ratio_prev * (1 - 1e-12));
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    double kappa = profile.kappa[i];
    if (kappa <= 1e-3)
      CHECK(profile.c_kappa[i] >= std::log(1.0 / kappa) / 32.0);
  }
  // the half-level constant sits in the two-sided Poincare window
  double c_half = profile.at(0.5);
  CHECK(c_half >= 1.0);
  CHECK(c_half <= 4.0);
}

TEST_CASE("check_mc: interpolated threshold tests") {
  Measure1D m = standard_gaussian(1201);
  CapacityProfile profile = capacity_profile(m, geom_grid(1e-7, 0.5, 25));
  CHECK(check_mc(profile, 1e-6, 0.0));
  CHECK(check_mc(profile, 1e-6, std::log(1e6) / 32.0));
  CHECK_FALSE(check_mc(profile, 1e-6, 10.0 * profile.at(1e-6)));
  CHECK_THROWS_AS(check_mc(profile, 1e-12, 1.0), Error);
}

TEST_CASE("poincare_from_mc: sandwich structure") {
  CapacityProfile manual;
  manual.kappa = {0.1, 0.5};
  manual.c_kappa = {3.0, 2.0};
  PoincareSandwich s = poincare_from_mc(manual);
  CHECK(s.lower == doctest::Approx(0.5));
  CHECK(s.upper == doctest::Approx(2.0));
  CHECK(s.upper / s.lower == 4.0);  // exact by construction

  Measure1D m = standard_gaussian();
  PoincareSandwich g = poincare_from_mc(capacity_profile(m, geom_grid(1e-6, 0.5, 30)));
  CHECK(g.lower <= 1.0);
  CHECK(g.upper >= 1.0);

  CapacityProfile missing;
  missing.kappa = {0.01, 0.1};
  missing.c_kappa = {5.0, 4.0};
  CHECK_THROWS_AS(poincare_from_mc(missing), Error);
}

TEST_CASE("profile normalization drops degenerate leading entries") {
  CapacityProfile p;
  p.kappa = {0.1, 0.2, 0.5};
  p.c_kappa = {std::numeric_limits<double>::infinity(), 3.0, 5.0};
  p.normalize();
  CHECK(p.size() == 2);
  CHECK(p.c_kappa[0] == doctest::Approx(3.0));
  CHECK(p.c_kappa[1] == doctest::Approx(3.0));  // running minimum
}
