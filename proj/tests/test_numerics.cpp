#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "spilab/numerics.hpp"

using namespace spilab;

TEST_CASE("root_find_monotone: linear and cubic roots") {
  CHECK(root_find_monotone([](double x) { return x - 2; }, 0, 5) ==
        doctest::Approx(2).epsilon(1e-10));
  CHECK(root_find_monotone([](double x) { return x * x * x - 8; }, 0, 5) ==
        doctest::Approx(2).epsilon(1e-10));
}

TEST_CASE("root_find_monotone: no sign change is an error") {
  CHECK_THROWS_AS(root_find_monotone([](double x) { return x + 1; }, 0, 5), Error);
}

TEST_CASE("root_find_monotone: result bracketed with small residual") {
  DetRng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    double root = rng.uniform(-3, 3);
    double scale = rng.uniform(0.5, 4);
    auto g = [&](double x) { return scale * (x - root) * (1 + 0.1 * (x - root) * (x - root)); };
    double x = root_find_monotone(g, -5, 5, {1e-13, 1e-13, 300});
    CHECK(x >= -5);
    CHECK(x <= 5);
    CHECK(std::abs(g(x)) < 1e-9);
  }
}

TEST_CASE("minimize_scalar: quadratic") {
  ScalarMin r = minimize_scalar([](double x) { return (x - 1) * (x - 1); }, 0, 3);
  CHECK(r.argmin == doctest::Approx(1).epsilon(1e-6));
  CHECK(r.min == doctest::Approx(0).epsilon(1e-10));
}

TEST_CASE("minimize_scalar: two-sided resistance sum against a dense scan") {
  auto h = [](double x) { return 1 / x + 1 / (0.4 - x); };
  ScalarMin r = minimize_scalar(h, 1e-6, 0.4 - 1e-6);
  CHECK(r.argmin == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(r.min == doctest::Approx(10.0).epsilon(1e-6));
  auto scan = oracle::dense_scan_min(h, 0.01, 0.39);
  CHECK(r.min <= scan.second + 1e-9);
}

TEST_CASE("minimize_scalar: constant objective") {
  ScalarMin r = minimize_scalar([](double) { return 3.5; }, -1, 1);
  CHECK(r.min == doctest::Approx(3.5));
  CHECK(r.argmin >= -1);
  CHECK(r.argmin <= 1);
}

namespace {

std::vector<double> tridiag_apply(const std::vector<double>& d, const std::vector<double>& e,
                                  const std::vector<double>& v) {
  std::size_t n = d.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = d[i] * v[i];
    if (i > 0) out[i] += e[i - 1] * v[i - 1];
    if (i + 1 < n) out[i] += e[i] * v[i + 1];
  }
  return out;
}

double tridiag_norm(const std::vector<double>& d, const std::vector<double>& e) {
  double norm = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double row = std::abs(d[i]);
    if (i > 0) row += std::abs(e[i - 1]);
    if (i + 1 < d.size()) row += std::abs(e[i]);
    norm = std::max(norm, row);
  }
  return norm;
}

}  // namespace

TEST_CASE("eig_sym_tridiag: discrete Laplacian closed-form spectrum") {
  const std::size_t n = 50;
  std::vector<double> d(n, 2.0), e(n - 1, -1.0);
  TridiagEigen eig = eig_sym_tridiag(d, e, 5);
  const double pi = 3.14159265358979323846;
  for (std::size_t j = 0; j < 5; ++j) {
    double expect = 2 - 2 * std::cos((j + 1) * pi / (n + 1));
    CHECK(eig.values[j] == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("eig_sym_tridiag: diagonal matrix returns sorted entries") {
  std::vector<double> d{3.0, -1.0, 2.0, 0.5, 7.0};
  std::vector<double> e(4, 0.0);
  TridiagEigen eig = eig_sym_tridiag(d, e, 5);
  std::vector<double> expect{-1.0, 0.5, 2.0, 3.0, 7.0};
  for (std::size_t j = 0; j < 5; ++j) CHECK(eig.values[j] == doctest::Approx(expect[j]));
}

TEST_CASE("eig_sym_tridiag: 2x2 closed form") {
  double a = 1.3, b = -0.7, c = 2.9;
  TridiagEigen eig = eig_sym_tridiag({a, c}, {b}, 2);
  double disc = std::sqrt((a - c) * (a - c) + 4 * b * b);
  CHECK(eig.values[0] == doctest::Approx((a + c - disc) / 2).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx((a + c + disc) / 2).epsilon(1e-12));
}

TEST_CASE("eig_sym_tridiag: orthonormality, residuals, shift invariance") {
  const std::size_t n = 120;
  DetRng rng(42);
  std::vector<double> d(n), e(n - 1);
  for (auto& v : d) v = rng.uniform(-1, 1);
  for (auto& v : e) v = rng.uniform(-1, 1);
  const std::size_t k = 6;
  TridiagEigen eig = eig_sym_tridiag(d, e, k);
  double norm = tridiag_norm(d, e);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double dot = 0;
      for (std::size_t t = 0; t < n; ++t) dot += eig.vectors[i][t] * eig.vectors[j][t];
      CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
    std::vector<double> tv = tridiag_apply(d, e, eig.vectors[i]);
    double res = 0;
    for (std::size_t t = 0; t < n; ++t) {
      double r = tv[t] - eig.values[i] * eig.vectors[i][t];
      res += r * r;
    }
    CHECK(std::sqrt(res) < 1e-8 * norm);
  }
  // shifting by c I moves eigenvalues and leaves eigenvectors put (up to sign)
  double shift = 0.37;
  std::vector<double> d2 = d;
  for (auto& v : d2) v += shift;
  TridiagEigen eig2 = eig_sym_tridiag(d2, e, k);
  for (std::size_t i = 0; i < k; ++i) {
    CHECK(eig2.values[i] == doctest::Approx(eig.values[i] + shift).epsilon(1e-9));
    double dot = 0;
    for (std::size_t t = 0; t < n; ++t) dot += eig.vectors[i][t] * eig2.vectors[i][t];
    CHECK(std::abs(std::abs(dot) - 1.0) < 1e-8);
  }
}

TEST_CASE("DetRng: deterministic substreams") {
  DetRng a(123, 5), b(123, 5), c(123, 6);
  for (int i = 0; i < 20; ++i) {
    double va = a.uniform();
    CHECK(va == b.uniform());
    CHECK(va != c.uniform());
  }
}
