#include "spilab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spilab/numerics.hpp"

namespace spilab {

namespace {

double logsumexp3(double a, double b, double c) {
  double m = std::max(a, std::max(b, c));
  if (!std::isfinite(m)) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

double logsumexp_vec(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

Potential::Potential(Kind k, std::vector<double> params, std::string desc,
                     std::shared_ptr<const expr::Node> tree)
    : kind_(k), params_(std::move(params)), description_(std::move(desc)), tree_(std::move(tree)) {}

Potential Potential::gaussian() { return Potential(Kind::gaussian, {}, "gaussian"); }

Potential Potential::double_well() { return Potential(Kind::double_well, {}, "double-well"); }

Potential Potential::power(double alpha) {
  if (!(alpha > 0)) throw Error(Errc::invalid_argument, "power potential needs alpha > 0");
  return Potential(Kind::power, {alpha}, "power(" + std::to_string(alpha) + ")");
}

Potential Potential::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw Error(Errc::invalid_argument, "polynomial potential needs coefficients");
  return Potential(Kind::polynomial, std::move(coeffs), "polynomial");
}

Potential Potential::expression(const std::string& src) {
  auto tree = expr::parse(src);
  return Potential(Kind::expression, {}, src, tree);
}

Potential Potential::from_preset(const std::string& name, const std::vector<double>& params) {
  if (name == "gaussian") return gaussian();
  if (name == "double-well" || name == "double_well") return double_well();
  if (name == "power") return power(params.empty() ? 1.0 : params[0]);
  if (name == "polynomial") return polynomial(params);
  if (name == "uniform") return polynomial({0.0});
  throw Error(Errc::invalid_argument, "unknown potential preset '" + name + "'");
}

double Potential::operator()(double x) const {
  switch (kind_) {
    case Kind::gaussian: return 0.5 * x * x;
    case Kind::double_well: {
      double t = x * x - 1.0;
      return t * t;
    }
    case Kind::power: return std::pow(std::abs(x), params_[0]);
    case Kind::polynomial: {
      double v = 0;
      for (std::size_t i = params_.size(); i-- > 0;) v = v * x + params_[i];
      return v;
    }
    case Kind::expression: return tree_->eval(x);
  }
  return 0;
}

double Potential::derivative(double x, double step) const {
  return ((*this)(x + step) - (*this)(x - step)) / (2 * step);
}

Measure1D::Measure1D(Potential pot, std::vector<double> nodes)
    : potential_(std::move(pot)), nodes_(std::move(nodes)) {}

Measure1D Measure1D::build(const Potential& pot, double x_lo, double x_hi, std::size_t n_nodes,
                           double tail_tol) {
  if (!(x_lo < x_hi)) throw Error(Errc::invalid_argument, "build_measure: empty domain");
  if (n_nodes < 16) throw Error(Errc::invalid_argument, "build_measure: need at least 16 nodes");
  if (!(tail_tol > 0)) throw Error(Errc::invalid_argument, "build_measure: tail_tol must be > 0");
  Measure1D m(pot, linear_grid(x_lo, x_hi, n_nodes));
  m.finalize(tail_tol, /*throw_on_tail=*/true);
  return m;
}

Measure1D Measure1D::build_adaptive(const Potential& pot, double x_lo, double x_hi,
                                    std::size_t n_nodes, double tail_tol, int max_doublings) {
  if (!(x_lo < x_hi)) throw Error(Errc::invalid_argument, "build_measure: empty domain");
  if (n_nodes < 16) throw Error(Errc::invalid_argument, "build_measure: need at least 16 nodes");
  double lo = x_lo, hi = x_hi;
  std::size_t n = n_nodes;
  double prev_log_z = -std::numeric_limits<double>::infinity();
  int growth_streak = 0;
  for (int round = 0; round <= max_doublings; ++round) {
    Measure1D m(pot, linear_grid(lo, hi, n));
    m.finalize(tail_tol, /*throw_on_tail=*/false);
    if (m.tail_estimate_ <= tail_tol) return m;
    // diverging normalization means the density is not integrable on the line
    if (std::isfinite(prev_log_z) && m.log_z_ > prev_log_z + 0.2)
      ++growth_streak;
    else
      growth_streak = 0;
    double slope_hi = pot.derivative(hi);
    double slope_lo = pot.derivative(lo);
    bool decaying = slope_hi > 0 && slope_lo < 0;
    if (growth_streak >= 4 || (!decaying && round >= 6))
      throw Error(Errc::non_integrable_density,
                  "build_measure: non-integrable density (normalization diverges as the domain "
                  "grows)");
    prev_log_z = m.log_z_;
    double width = hi - lo;
    lo -= 0.5 * width;
    hi += 0.5 * width;
    if (n < (1u << 20)) n = 2 * n - 1;
  }
  throw Error(Errc::tail_mass_exceeded,
              "build_measure: tail mass estimate still above tail_tol after adaptive growth");
}

void Measure1D::finalize(double tail_tol, bool throw_on_tail) {
  const std::size_t n = nodes_.size();
  h_ = (nodes_.back() - nodes_.front()) / static_cast<double>(n - 1);
  neg_v_node_.resize(n);
  neg_v_mid_.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double v = potential_(nodes_[i]);
    if (!std::isfinite(v))
      throw Error(Errc::non_finite_value, "build_measure: potential not finite at x=" +
                                              std::to_string(nodes_[i]));
    neg_v_node_[i] = -v;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double v = potential_(0.5 * (nodes_[i] + nodes_[i + 1]));
    if (!std::isfinite(v))
      throw Error(Errc::non_finite_value, "build_measure: potential not finite at a cell midpoint");
    neg_v_mid_[i] = -v;
  }

  const double log_h6 = std::log(h_ / 6.0);
  cell_logmass_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cell_logmass_[i] = log_h6 + logsumexp3(neg_v_node_[i], neg_v_mid_[i] + std::log(4.0),
                                           neg_v_node_[i + 1]);
  }
  log_z_ = logsumexp_vec(cell_logmass_);
  if (!std::isfinite(log_z_))
    throw Error(Errc::non_integrable_density, "build_measure: normalization is not finite");

  prefix_mass_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    prefix_mass_[i + 1] = prefix_mass_[i] + std::exp(cell_logmass_[i] - log_z_);
  suffix_mass_.assign(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;)
    suffix_mass_[i] = suffix_mass_[i + 1] + std::exp(cell_logmass_[i] - log_z_);

  fv_mass_.resize(n);
  fv_total_ = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double hw = (i == 0 || i + 1 == n) ? 0.5 * h_ : h_;
    fv_mass_[i] = hw * std::exp(neg_v_node_[i] - log_z_);
    fv_total_ += fv_mass_[i];
  }

  // one-sided exponential tail bounds from the boundary log-density slope
  double slope_hi = potential_.derivative(nodes_.back());
  double slope_lo = potential_.derivative(nodes_.front());
  double est_hi = (slope_hi > 0) ? std::exp(neg_v_node_[n - 1] - log_z_) / slope_hi
                                 : std::numeric_limits<double>::infinity();
  double est_lo = (slope_lo < 0) ? std::exp(neg_v_node_[0] - log_z_) / (-slope_lo)
                                 : std::numeric_limits<double>::infinity();
  tail_estimate_ = est_hi + est_lo;
  if (throw_on_tail && !(tail_estimate_ <= tail_tol))
    throw Error(Errc::tail_mass_exceeded,
                "build_measure: tail mass estimate " + std::to_string(tail_estimate_) +
                    " exceeds tail_tol (domain too small)");
}

double Measure1D::density(double x) const { return std::exp(log_density(x)); }

Measure1D::QuadResult Measure1D::integrate_err(const std::function<double(double)>& f) const {
  const std::size_t n = nodes_.size();
  double simpson = 0, trapezoid = 0;
  double f_right = f(nodes_[0]);
  double rho_right = std::exp(neg_v_node_[0] - log_z_);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double fl = f_right, rl = rho_right;
    double xm = 0.5 * (nodes_[i] + nodes_[i + 1]);
    double fm = f(xm);
    double rm = std::exp(neg_v_mid_[i] - log_z_);
    f_right = f(nodes_[i + 1]);
    rho_right = std::exp(neg_v_node_[i + 1] - log_z_);
    if (!std::isfinite(fl) || !std::isfinite(fm) || !std::isfinite(f_right))
      throw Error(Errc::non_finite_value, "integrate: integrand not finite on the grid");
    simpson += (h_ / 6.0) * (fl * rl + 4.0 * fm * rm + f_right * rho_right);
    trapezoid += (h_ / 2.0) * (fl * rl + f_right * rho_right);
  }
  return {simpson, std::abs(simpson - trapezoid) / 15.0};
}

double Measure1D::integrate(const std::function<double(double)>& f) const {
  return integrate_err(f).value;
}

double Measure1D::inner_fv(std::span<const double> f, std::span<const double> g) const {
  double s = 0;
  for (std::size_t i = 0; i < fv_mass_.size(); ++i) s += fv_mass_[i] * f[i] * g[i];
  return s;
}

double Measure1D::integrate_fv(std::span<const double> f) const {
  double s = 0;
  for (std::size_t i = 0; i < fv_mass_.size(); ++i) s += fv_mass_[i] * f[i];
  return s;
}

double Measure1D::lp_norm_fv(std::span<const double> f, double p) const {
  double s = 0;
  for (std::size_t i = 0; i < fv_mass_.size(); ++i)
    s += fv_mass_[i] * std::pow(std::abs(f[i]), p);
  return std::pow(s, 1.0 / p);
}

double Measure1D::dirichlet_energy(const std::function<double(double)>&,
                                   const std::function<double(double)>& df) const {
  return integrate([&](double x) {
    double d = df(x);
    return d * d;
  });
}

double Measure1D::dirichlet_energy(const std::function<double(double)>& f) const {
  std::vector<double> vals(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) vals[i] = f(nodes_[i]);
  return dirichlet_energy_fv(vals);
}

double Measure1D::dirichlet_energy_fv(std::span<const double> f) const {
  double s = 0;
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    double g = std::exp(neg_v_mid_[i] - log_z_) / h_;
    double d = f[i + 1] - f[i];
    s += g * d * d;
  }
  return s;
}

double Measure1D::partial_cell_mass(std::size_t, double a, double b) const {
  if (b <= a) return 0.0;
  // Simpson on the sub-segment with fresh potential evaluations
  double xm = 0.5 * (a + b);
  double fa = std::exp(-potential_(a) - log_z_);
  double fm = std::exp(-potential_(xm) - log_z_);
  double fb = std::exp(-potential_(b) - log_z_);
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double Measure1D::cdf(double x) const {
  if (x <= nodes_.front()) return 0.0;
  if (x >= nodes_.back()) return 1.0;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t cell = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return prefix_mass_[cell] + partial_cell_mass(cell, nodes_[cell], x);
}

double Measure1D::tail_mass(double x) const {
  if (x <= nodes_.front()) return 1.0;
  if (x >= nodes_.back()) return 0.0;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t cell = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return suffix_mass_[cell + 1] + partial_cell_mass(cell, x, nodes_[cell + 1]);
}

double Measure1D::mass_between(double a, double b) const {
  if (b <= a) return 0.0;
  a = std::max(a, nodes_.front());
  b = std::min(b, nodes_.back());
  if (b <= a) return 0.0;
  auto ia = std::upper_bound(nodes_.begin(), nodes_.end(), a) - nodes_.begin() - 1;
  auto ib = std::upper_bound(nodes_.begin(), nodes_.end(), b) - nodes_.begin() - 1;
  std::size_t ca = static_cast<std::size_t>(ia);
  std::size_t cb = std::min(static_cast<std::size_t>(ib), nodes_.size() - 2);
  if (ca == cb) return partial_cell_mass(ca, a, b);
  double s = partial_cell_mass(ca, a, nodes_[ca + 1]);
  for (std::size_t c = ca + 1; c < cb; ++c) s += std::exp(cell_logmass_[c] - log_z_);
  s += partial_cell_mass(cb, nodes_[cb], b);
  return s;
}

double Measure1D::quantile(double p) const {
  if (!(p > 0) || !(p < 1)) throw Error(Errc::invalid_argument, "quantile: p must be in (0,1)");
  auto it = std::lower_bound(prefix_mass_.begin(), prefix_mass_.end(), p);
  std::size_t hi_idx = std::min<std::size_t>(it - prefix_mass_.begin(), nodes_.size() - 1);
  std::size_t lo_idx = (hi_idx == 0) ? 0 : hi_idx - 1;
  if (hi_idx == 0) return nodes_.front();
  double lo = nodes_[lo_idx], hi = nodes_[hi_idx];
  Tolerance tol;
  tol.abs_tol = 1e-14;
  tol.rel_tol = 1e-14;
  tol.max_iter = 300;
  return root_find_monotone([&](double x) { return cdf(x) - p; }, lo, hi, tol);
}

double Measure1D::tail_quantile(double kappa) const {
  if (!(kappa > 0) || !(kappa < 1))
    throw Error(Errc::invalid_argument, "tail_quantile: kappa must be in (0,1)");
  // suffix_mass_ is decreasing; locate the bracketing cell
  std::size_t lo_idx = 0, hi_idx = nodes_.size() - 1;
  while (hi_idx - lo_idx > 1) {
    std::size_t mid = (lo_idx + hi_idx) / 2;
    if (suffix_mass_[mid] >= kappa)
      lo_idx = mid;
    else
      hi_idx = mid;
  }
  Tolerance tol;
  tol.abs_tol = kappa * 1e-12;
  tol.rel_tol = 0;
  tol.max_iter = 300;
  return root_find_monotone([&](double x) { return tail_mass(x) - kappa; }, nodes_[lo_idx],
                            nodes_[hi_idx], tol);
}

double Measure1D::log_weight_integral(double a, double b) const {
  if (!(a < b)) return -std::numeric_limits<double>::infinity();
  a = std::max(a, nodes_.front());
  b = std::min(b, nodes_.back());
  if (!(a < b)) return -std::numeric_limits<double>::infinity();
  auto cl = [&](double u, double v) {
    // Simpson of e^{V} on [u, v] in log form
    double m = 0.5 * (u + v);
    return std::log((v - u) / 6.0) +
           logsumexp3(potential_(u), potential_(m) + std::log(4.0), potential_(v));
  };
  auto ia = std::upper_bound(nodes_.begin(), nodes_.end(), a) - nodes_.begin() - 1;
  auto ib = std::upper_bound(nodes_.begin(), nodes_.end(), b) - nodes_.begin() - 1;
  std::size_t ca = static_cast<std::size_t>(std::max<std::ptrdiff_t>(ia, 0));
  std::size_t cb = std::min(static_cast<std::size_t>(std::max<std::ptrdiff_t>(ib, 0)),
                            nodes_.size() - 2);
  std::vector<double> logs;
  if (ca == cb) {
    logs.push_back(cl(a, b));
  } else {
    logs.push_back(cl(a, nodes_[ca + 1]));
    for (std::size_t c = ca + 1; c < cb; ++c)
      logs.push_back(std::log(h_ / 6.0) + logsumexp3(-neg_v_node_[c], -neg_v_mid_[c] + std::log(4.0),
                                                     -neg_v_node_[c + 1]));
    logs.push_back(cl(nodes_[cb], b));
  }
  return log_z_ + logsumexp_vec(logs);
}

double Measure1D::support_mass(std::span<const double> f, double rel_threshold) const {
  double fmax = 0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));
  if (fmax == 0) return 0;
  double thr = rel_threshold * fmax;
  double s = 0;
  for (std::size_t i = 0; i < fv_mass_.size(); ++i)
    if (std::abs(f[i]) > thr) s += fv_mass_[i];
  return s;
}

}  // namespace spilab
