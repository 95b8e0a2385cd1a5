// spilab: functional-inequality constants for one-dimensional Gibbs measures.
//
// Subcommands: analyze, spectrum, transfer, hermite, gauss-lsi. Every artifact
// embeds the hash of the effective configuration and the seed, and writes are
// atomic, so identical invocations produce byte-identical outputs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spilab/capacity.hpp"
#include "spilab/gauss_lsi.hpp"
#include "spilab/hermite.hpp"
#include "spilab/io.hpp"
#include "spilab/measure.hpp"
#include "spilab/orlicz.hpp"
#include "spilab/spectrum.hpp"
#include "spilab/transfer.hpp"

namespace {

using namespace spilab;
namespace fs = std::filesystem;

struct GridSpec {
  double lo = 0, hi = 0;
  std::size_t n = 0;
};

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  if (std::sscanf(s.c_str(), "%lf:%lf:%zu", &g.lo, &g.hi, &g.n) != 3 || g.n < 2)
    throw Error(Errc::invalid_argument, "grid spec must be lo:hi:n, got '" + s + "'");
  return g;
}

std::pair<double, double> parse_domain(const std::string& s) {
  double lo = 0, hi = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf", &lo, &hi) != 2 || !(lo < hi))
    throw Error(Errc::invalid_argument, "domain must be lo:hi, got '" + s + "'");
  return {lo, hi};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::strtod(s.substr(pos, next - pos).c_str(), nullptr));
    pos = next + 1;
  }
  if (out.empty()) throw Error(Errc::invalid_argument, "empty list '" + s + "'");
  return out;
}

struct RunContext {
  std::map<std::string, std::string> config;  // canonical key=value map
  std::uint64_t seed = 1;
  fs::path out_dir = ".";
  std::vector<std::string> formats{"csv", "json"};

  void record(const std::string& key, const std::string& value) { config[key] = value; }
  void record(const std::string& key, double value) { config[key] = io::format_double(value); }
  void record(const std::string& key, std::uint64_t value) { config[key] = std::to_string(value); }

  std::string canonical() const {
    std::string s;
    for (const auto& [k, v] : config) s += k + "=" + v + "\n";
    return s;
  }
  std::string hash() const { return io::hash_hex(canonical()); }
  std::string stamp() const { return "config_hash=" + hash() + " seed=" + std::to_string(seed); }
  bool wants(const std::string& fmt) const {
    return std::find(formats.begin(), formats.end(), fmt) != formats.end();
  }
  void write(const std::string& name, const std::string& content) const {
    fs::create_directories(out_dir);
    io::write_file_atomic(out_dir / name, content);
  }
  io::Json stamped_json() const {
    io::Json j = io::Json::object();
    j.set("config_hash", io::Json::string(hash()));
    j.set("seed", io::Json::integer(static_cast<std::int64_t>(seed)));
    return j;
  }
};

struct MeasureOpts {
  std::string preset = "gaussian";
  std::string expr_src;
  std::vector<double> params;
  std::string domain = "-10:10";
  std::size_t nodes = 2001;
  double tail_tol = 1e-9;
  bool adaptive = false;
};

void add_measure_flags(CLI::App* cmd, MeasureOpts& mo) {
  cmd->add_option("--preset", mo.preset,
                  "potential preset: gaussian | double-well | power | polynomial | uniform");
  cmd->add_option("--expr", mo.expr_src, "potential expression, e.g. \"x^2/2\" or \"abs(x)^1.5\"");
  cmd->add_option("--params", mo.params, "preset parameters (power exponent, poly coefficients)");
  cmd->add_option("--domain", mo.domain, "truncated domain lo:hi");
  cmd->add_option("--nodes", mo.nodes, "grid nodes");
  cmd->add_option("--tail-tol", mo.tail_tol, "tail mass tolerance (inf allowed)");
  cmd->add_flag("--adaptive-domain", mo.adaptive, "grow the domain until the tail bound clears");
}

Measure1D build_from_opts(const MeasureOpts& mo, RunContext& ctx) {
  Potential pot = mo.expr_src.empty() ? Potential::from_preset(mo.preset, mo.params)
                                      : Potential::expression(mo.expr_src);
  ctx.record("measure.potential", mo.expr_src.empty() ? mo.preset : mo.expr_src);
  for (std::size_t i = 0; i < mo.params.size(); ++i)
    ctx.record("measure.param" + std::to_string(i), mo.params[i]);
  ctx.record("measure.domain", mo.domain);
  ctx.record("measure.nodes", static_cast<std::uint64_t>(mo.nodes));
  ctx.record("measure.tail_tol", mo.tail_tol);
  auto [lo, hi] = parse_domain(mo.domain);
  return mo.adaptive ? Measure1D::build_adaptive(pot, lo, hi, mo.nodes, mo.tail_tol)
                     : Measure1D::build(pot, lo, hi, mo.nodes, mo.tail_tol);
}

io::Json measure_json(const Measure1D& m, RunContext& ctx) {
  io::Json j = ctx.stamped_json();
  j.set("x_lo", io::Json::number(m.x_lo()));
  j.set("x_hi", io::Json::number(m.x_hi()));
  j.set("nodes", io::Json::integer(static_cast<std::int64_t>(m.size())));
  j.set("log_z", io::Json::number(m.log_z()));
  j.set("median", io::Json::number(m.median()));
  j.set("mass", io::Json::number(m.integrate([](double) { return 1.0; })));
  j.set("tail_estimate", io::Json::number(m.tail_estimate()));
  return j;
}

BetaFunction beta_from_file(const fs::path& path) {
  io::BetaTable t = io::read_beta_csv(path);
  return BetaFunction::table(t.r0, t.r, t.beta);
}

int cmd_analyze(const MeasureOpts& mo, const std::string& kappa_spec, RunContext& ctx) {
  ctx.record("cmd", "analyze");
  ctx.record("kappa_grid", kappa_spec);
  Measure1D m = build_from_opts(mo, ctx);
  GridSpec ks = parse_grid(kappa_spec);
  CapacityProfile profile = capacity_profile(m, geom_grid(ks.lo, ks.hi, ks.n));
  PoincareSandwich sandwich = poincare_from_mc(profile);

  ctx.write("measure.json", measure_json(m, ctx).str(2));
  if (ctx.wants("csv")) ctx.write("capacity_profile.csv", io::profile_csv(profile, ctx.stamp()));
  if (ctx.wants("json")) {
    io::Json j = ctx.stamped_json();
    io::Json rows = io::Json::array();
    for (std::size_t i = 0; i < profile.size(); ++i) {
      io::Json row = io::Json::object();
      row.set("kappa", io::Json::number(profile.kappa[i]));
      row.set("c_kappa", io::Json::number(profile.c_kappa[i]));
      rows.push(std::move(row));
    }
    j.set("profile", std::move(rows));
    ctx.write("capacity_profile.json", j.str(2));
    io::Json p = ctx.stamped_json();
    p.set("c_mc", io::Json::number(sandwich.c_mc));
    p.set("poincare_lower", io::Json::number(sandwich.lower));
    p.set("poincare_upper", io::Json::number(sandwich.upper));
    ctx.write("poincare.json", p.str(2));
  }
  if (ctx.wants("svg")) {
    io::Series measured{"C_kappa", profile.kappa, profile.c_kappa};
    ctx.write("capacity_profile.svg",
              "<!-- " + ctx.stamp() + " -->\n" +
                  io::svg_chart("capacity profile", {measured}, /*log_x=*/true));
  }
  std::printf("analyze: %zu profile entries, C_MC = %s, Poincare in [%s, %s]\n", profile.size(),
              io::format_double(sandwich.c_mc).c_str(), io::format_double(sandwich.lower).c_str(),
              io::format_double(sandwich.upper).c_str());
  return 0;
}

int cmd_spectrum(const MeasureOpts& mo, std::size_t k, const std::string& r_spec, double p,
                 std::size_t trials, double ess, bool dump_vectors, RunContext& ctx) {
  ctx.record("cmd", "spectrum");
  ctx.record("k", static_cast<std::uint64_t>(k));
  ctx.record("r_grid", r_spec);
  ctx.record("p", p);
  ctx.record("trials", static_cast<std::uint64_t>(trials));
  ctx.record("ess", ess);
  Measure1D m = build_from_opts(mo, ctx);
  std::optional<double> ess_opt;
  if (ess > 0) ess_opt = ess;
  SpectralData spec = low_spectrum(m, k, ess_opt);

  io::Json ev = ctx.stamped_json();
  io::Json vals = io::Json::array();
  for (double v : spec.eigenvalues) vals.push(io::Json::number(v));
  ev.set("eigenvalues", std::move(vals));
  ctx.write("eigenvalues.json", ev.str(2));

  GridSpec rs = parse_grid(r_spec);
  std::vector<double> r_grid = geom_grid(rs.lo, rs.hi, rs.n);
  OrliczSpi ospi = spectral_ospi(spec, YoungPair::power_pair(p), r_grid);
  std::vector<double> beta_vals;
  for (double r : r_grid) beta_vals.push_back(ospi.beta(r));
  if (ctx.wants("csv"))
    ctx.write("spectral_beta.csv", io::beta_csv(ospi.beta.r0(), r_grid, beta_vals, ctx.stamp()));

  io::Json rep = ctx.stamped_json();
  io::Json arr = io::Json::array();
  for (double r : r_grid) {
    VerifyReport vr = verify_spi(m, ospi, r, trials, ctx.seed);
    io::Json one = io::Json::object();
    one.set("r", io::Json::number(r));
    one.set("max_violation", io::Json::number(vr.max_violation));
    one.set("pass", io::Json::boolean(vr.pass));
    arr.push(std::move(one));
  }
  rep.set("trials", io::Json::integer(static_cast<std::int64_t>(trials)));
  rep.set("reports", std::move(arr));
  ctx.write("spi_report.json", rep.str(2));

  if (dump_vectors && ctx.wants("csv")) {
    io::Csv csv;
    csv.comment(ctx.stamp());
    std::vector<std::string> names{"x"};
    for (std::size_t j = 0; j < spec.eigenvectors.size(); ++j)
      names.push_back("f" + std::to_string(j));
    csv.columns(names);
    for (std::size_t i = 0; i < m.size(); ++i) {
      std::vector<double> row{m.node(i)};
      for (const auto& f : spec.eigenvectors) row.push_back(f[i]);
      csv.row(row);
    }
    ctx.write("eigenvectors.csv", csv.str());
  }
  std::printf("spectrum: lambda = [");
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
    std::printf("%s%s", i ? ", " : "", io::format_double(spec.eigenvalues[i]).c_str());
  std::printf("]\n");
  return 0;
}

int cmd_transfer(const std::string& pipeline, const fs::path& input, double c_mc, double b_star,
                 const std::string& kappa_spec, const std::string& r_spec, double p,
                 RunContext& ctx) {
  ctx.record("cmd", "transfer");
  ctx.record("pipeline", pipeline);
  ctx.record("input", input.string());
  ctx.record("c_mc", c_mc);
  ctx.record("b_star", b_star);
  ctx.record("kappa_grid", kappa_spec);
  ctx.record("r_grid", r_spec);
  ctx.record("p", p);
  GridSpec ks = parse_grid(kappa_spec);
  GridSpec rs = parse_grid(r_spec);
  TransferParams prm;
  prm.b_star = b_star;
  prm.kappa_grid = geom_grid(ks.lo, ks.hi, ks.n);
  std::vector<double> r_grid = geom_grid(rs.lo, rs.hi, rs.n);

  auto write_beta = [&](const BetaFunction& beta, const std::string& name) {
    std::vector<double> vals;
    for (double r : r_grid) vals.push_back(beta(r));
    ctx.write(name, io::beta_csv(beta.r0(), r_grid, vals, ctx.stamp()));
  };

  if (pipeline == "mc-to-spi") {
    BetaFunction beta = mc_to_spi(io::read_profile_csv(input));
    write_beta(beta, "beta.csv");
  } else if (pipeline == "spi-to-mc") {
    CapacityProfile out = spi_to_mc(beta_from_file(input), c_mc, prm);
    ctx.write("profile.csv", io::profile_csv(out, ctx.stamp()));
  } else if (pipeline == "ospi-to-mc") {
    OrliczSpi ospi{beta_from_file(input), YoungPair::power_pair(p)};
    CapacityProfile out = ospi_to_mc(ospi, c_mc, prm);
    ctx.write("profile.csv", io::profile_csv(out, ctx.stamp()));
  } else if (pipeline == "ospi-to-spi") {
    OrliczSpi ospi{beta_from_file(input), YoungPair::power_pair(p)};
    write_beta(ospi_to_spi(ospi, c_mc, prm), "beta.csv");
  } else if (pipeline == "spi-to-poincare") {
    double c = spi_to_poincare(beta_from_file(input));
    io::Json j = ctx.stamped_json();
    j.set("poincare_constant", io::Json::number(c));
    ctx.write("poincare.json", j.str(2));
  } else {
    throw Error(Errc::invalid_argument, "unknown pipeline '" + pipeline + "'");
  }
  std::printf("transfer: %s done\n", pipeline.c_str());
  return 0;
}

int cmd_hermite(int n_max, const std::vector<double>& p_set, RunContext& ctx) {
  ctx.record("cmd", "hermite");
  ctx.record("n_max", static_cast<std::uint64_t>(n_max));
  for (std::size_t i = 0; i < p_set.size(); ++i) ctx.record("p" + std::to_string(i), p_set[i]);
  LpAudit audit = audit_lp_bound(n_max, p_set);
  if (ctx.wants("csv")) {
    io::Csv csv;
    csv.comment(ctx.stamp());
    csv.columns({"n", "p", "lp_norm", "c"});
    for (const auto& row : audit.rows)
      csv.row({static_cast<double>(row.n), row.p, row.norm, row.c});
    ctx.write("lp_audit.csv", csv.str());
  }
  io::Json j = ctx.stamped_json();
  j.set("c_sup", io::Json::number(audit.c_sup));
  ctx.write("lp_audit.json", j.str(2));

  if (ctx.wants("csv")) {
    io::Csv cal;
    cal.comment(ctx.stamp());
    cal.columns({"n", "calibration"});
    for (int n : {25, 50, 100, 200, 400})
      if (n <= std::max(25, n_max * 10)) cal.row({static_cast<double>(n), pr_calibration(n)});
    ctx.write("pr_calibration.csv", cal.str());
  }
  std::printf("hermite: c_sup = %s over n <= %d\n", io::format_double(audit.c_sup).c_str(), n_max);
  return 0;
}

int cmd_gauss_lsi(const MeasureOpts& mo, const std::vector<double>& d_list, double c_const,
                  const std::string& kappa_spec, std::size_t trials, RunContext& ctx) {
  ctx.record("cmd", "gauss-lsi");
  for (std::size_t i = 0; i < d_list.size(); ++i) ctx.record("d" + std::to_string(i), d_list[i]);
  ctx.record("kappa_grid", kappa_spec);
  ctx.record("trials", static_cast<std::uint64_t>(trials));

  double c_used = c_const;
  if (!(c_used > 0)) {
    c_used = audit_lp_bound(40, std::vector<double>{3, 4, 6, 8, 12}).c_sup;
  }
  ctx.record("c_const", c_used);

  std::vector<GaussChainParams> family;
  for (double d : d_list)
    family.push_back(GaussChainParams{static_cast<int>(d), 2 * d + 3, c_used});
  double kappa1 = find_kappa1(family);

  GridSpec ks = parse_grid(kappa_spec);
  std::vector<double> kappas = geom_grid(ks.lo, ks.hi, ks.n);

  if (ctx.wants("csv")) {
    io::Csv claim;
    claim.comment(ctx.stamp());
    claim.columns({"kappa", "d", "p", "r_kappa", "product", "pass"});
    for (double kappa : kappas)
      for (const auto& prm : family) {
        if (!(kappa < std::exp(-1.0))) continue;
        ClaimCheck chk = claim_check(kappa, prm);
        claim.row({kappa, static_cast<double>(prm.d), prm.p, chk.r_kappa, chk.product,
                   chk.pass ? 1.0 : 0.0});
      }
    ctx.write("claim.csv", claim.str());
  }

  // measured capacity of the one-dimensional Gaussian against the chain bound
  Measure1D m = build_from_opts(mo, ctx);
  CapacityProfile profile = capacity_profile(m, kappas);
  io::Csv versus;
  versus.comment(ctx.stamp());
  versus.columns({"kappa", "chain_bound", "measured_c_kappa"});
  std::vector<double> chain_vals;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    double kappa = profile.kappa[i];
    double bound = (kappa < kappa1) ? std::log(1.0 / kappa) / 32.0 : 0.0;
    chain_vals.push_back(bound);
    versus.row({kappa, bound, profile.c_kappa[i]});
  }
  if (ctx.wants("csv")) ctx.write("chain_vs_capacity.csv", versus.str());
  if (ctx.wants("svg")) {
    io::Series measured{"measured", profile.kappa, profile.c_kappa};
    io::Series bound{"log(1/kappa)/32", profile.kappa, chain_vals};
    ctx.write("chain_vs_capacity.svg",
              "<!-- " + ctx.stamp() + " -->\n" +
                  io::svg_chart("capacity vs chain bound", {measured, bound}, /*log_x=*/true));
  }

  LsiReport lsi = lsi_defect_check(m, 2.0, trials, ctx.seed);
  io::Json j = ctx.stamped_json();
  j.set("c_const", io::Json::number(c_used));
  j.set("kappa1", io::Json::number(kappa1));
  io::Json dl = io::Json::array();
  for (double d : d_list) dl.push(io::Json::integer(static_cast<std::int64_t>(d)));
  j.set("d_list", std::move(dl));
  j.set("lsi_max_ratio", io::Json::number(lsi.max_ratio));
  j.set("lsi_pass", io::Json::boolean(lsi.pass));
  ctx.write("chain.json", j.str(2));
  std::printf("gauss-lsi: kappa1 = %s, lsi max ratio = %s\n",
              io::format_double(kappa1).c_str(), io::format_double(lsi.max_ratio).c_str());
  return 0;
}

int errc_exit_code(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return 2;
    case Errc::parse_error: return 3;
    case Errc::non_integrable_density:
    case Errc::tail_mass_exceeded:
    case Errc::non_finite_value:
    case Errc::grid_too_coarse: return 4;
    case Errc::no_sign_change:
    case Errc::max_iter_exceeded:
    case Errc::eigen_convergence:
    case Errc::norm_unbounded: return 5;
    case Errc::insufficient_spectrum: return 6;
    case Errc::hypothesis_not_satisfied:
    case Errc::empty_input: return 7;
    case Errc::io_error: return 8;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"functional-inequality constants for 1-d Gibbs measures"};
  app.set_config("--config", "", "key=value config file; flags override");
  app.require_subcommand(1);

  RunContext ctx;
  app.add_option("--seed", ctx.seed, "random seed recorded in every artifact");
  app.add_option("--out", ctx.out_dir, "output directory");
  app.add_option("--format", ctx.formats, "artifact formats: csv json svg");

  MeasureOpts mo;

  auto* analyze = app.add_subcommand("analyze", "measure summary, capacity profile, Poincare sandwich");
  analyze->fallthrough();
  add_measure_flags(analyze, mo);
  std::string kappa_spec = "1e-8:0.5:40";
  analyze->add_option("--kappa-grid", kappa_spec, "geometric kappa grid lo:hi:n");

  auto* spectrum = app.add_subcommand("spectrum", "low eigenpairs, spectral beta, SPI verification");
  spectrum->fallthrough();
  add_measure_flags(spectrum, mo);
  std::size_t k = 6;
  std::string r_spec = "0.25:2:8";  // coverage needs 1/r below the k-th eigenvalue
  double p_exp = 4.0;
  std::size_t trials = 200;
  double ess = -1;
  bool dump_vectors = false;
  spectrum->add_option("--k", k, "number of eigenpairs");
  spectrum->add_option("--r-grid", r_spec, "geometric r grid lo:hi:n");
  spectrum->add_option("--p", p_exp, "Orlicz exponent (> 2)");
  spectrum->add_option("--trials", trials, "verification trials per r");
  spectrum->add_option("--ess", ess, "bottom of the essential spectrum (inf for none; <,= 0 unset)");
  spectrum->add_flag("--dump-vectors", dump_vectors, "write eigenvectors.csv");

  auto* transfer = app.add_subcommand("transfer", "inequality transfer pipelines on serialized tables");
  transfer->fallthrough();
  std::string pipeline;
  std::string input;
  double c_mc = 1.0, b_star = 0.5;
  std::string t_kappa_spec = "1e-8:0.5:40";
  std::string t_r_spec = "0.05:100:60";
  double t_p = 4.0;
  transfer->add_option("--pipeline", pipeline,
                       "mc-to-spi | spi-to-mc | ospi-to-mc | ospi-to-spi | spi-to-poincare")
      ->required();
  transfer->add_option("--in", input, "input table (profile.csv or beta.csv)")->required();
  transfer->add_option("--c-mc", c_mc, "a-priori measure-capacity constant");
  transfer->add_option("--b-star", b_star, "split point in (0,1)");
  transfer->add_option("--kappa-grid", t_kappa_spec, "geometric kappa grid lo:hi:n");
  transfer->add_option("--r-grid", t_r_spec, "geometric r grid lo:hi:n for beta outputs");
  transfer->add_option("--p", t_p, "Orlicz exponent for ospi pipelines");

  auto* hermite = app.add_subcommand("hermite", "Hermite norm tables, growth audit, asymptotic calibration");
  hermite->fallthrough();
  int n_max = 40;
  std::vector<double> p_set{3, 4, 6, 8, 12};
  hermite->add_option("--n-max", n_max, "largest degree");
  hermite->add_option("--p-set", p_set, "exponents (> 2)");

  auto* gauss = app.add_subcommand("gauss-lsi", "dimension-free Gaussian chain and LSI defect check");
  gauss->fallthrough();
  add_measure_flags(gauss, mo);
  std::string d_spec = "1,2,5,10";
  double c_const = -1;
  std::string g_kappa_spec = "1e-8:0.3:40";
  std::size_t g_trials = 300;
  gauss->add_option("--d", d_spec, "dimension list, comma separated");
  gauss->add_option("--c-const", c_const, "growth constant; <= 0 takes the audit supremum");
  gauss->add_option("--kappa-grid", g_kappa_spec, "geometric kappa grid lo:hi:n");
  gauss->add_option("--trials", g_trials, "LSI defect trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help/version exit clean; bad flags exit 2
  }

  ctx.record("seed", ctx.seed);
  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(mo, kappa_spec, ctx);
    if (app.got_subcommand(spectrum))
      return cmd_spectrum(mo, k, r_spec, p_exp, trials, ess, dump_vectors, ctx);
    if (app.got_subcommand(transfer))
      return cmd_transfer(pipeline, input, c_mc, b_star, t_kappa_spec, t_r_spec, t_p, ctx);
    if (app.got_subcommand(hermite)) return cmd_hermite(n_max, p_set, ctx);
    if (app.got_subcommand(gauss)) return cmd_gauss_lsi(mo, parse_list(d_spec), c_const,
                                                        g_kappa_spec, g_trials, ctx);
  } catch (const Error& e) {
    std::fprintf(stderr, "{\"error\": \"%s\", \"message\": \"%s\"}\n", errc_name(e.code()),
                 e.what());
    return errc_exit_code(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"error\": \"internal\", \"message\": \"%s\"}\n", e.what());
    return 1;
  }
  return 0;
}
