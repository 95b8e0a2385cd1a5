// End-to-end checks of the command-line binary: artifact determinism, exit
// codes, and basic content sanity.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "[FAIL] " << what << "\n";
  }
}

int run(const std::string& args) {
  std::string cmd = std::string(SPILAB_BIN) + " " + args + " >/dev/null 2>/dev/null";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  fs::path base = fs::temp_directory_path() / "spilab_cli_tests";
  fs::remove_all(base);
  fs::create_directories(base);

  // identical config + seed => byte-identical artifacts
  std::string spect_args = "spectrum --preset gaussian --nodes 801 --k 6 --r-grid 0.4:2:6 "
                           "--trials 40 --ess inf --seed 99 --out ";
  check(run(spect_args + (base / "a").string()) == 0, "spectrum run A");
  check(run(spect_args + (base / "b").string()) == 0, "spectrum run B");
  for (const char* name : {"eigenvalues.json", "spectral_beta.csv", "spi_report.json"}) {
    std::string va = slurp(base / "a" / name);
    std::string vb = slurp(base / "b" / name);
    check(!va.empty(), std::string(name) + " non-empty");
    check(va == vb, std::string(name) + " byte-identical across reruns");
  }
  check(slurp(base / "a" / "eigenvalues.json").find("config_hash") != std::string::npos,
        "artifacts embed the config hash");

  // a different seed changes the hash-stamped reports
  std::string spect_seed2 = "spectrum --preset gaussian --nodes 801 --k 6 --r-grid 0.4:2:6 "
                            "--trials 40 --ess inf --seed 100 --out " + (base / "c").string();
  check(run(spect_seed2) == 0, "spectrum run C");
  check(slurp(base / "a" / "spi_report.json") != slurp(base / "c" / "spi_report.json"),
        "different seed changes the report");

  // analyze produces a sandwich containing the unit Poincare constant
  check(run("analyze --preset gaussian --nodes 1201 --kappa-grid 1e-6:0.5:24 --seed 5 --out " +
            (base / "an").string()) == 0,
        "analyze run");
  std::string poincare = slurp(base / "an" / "poincare.json");
  check(poincare.find("poincare_lower") != std::string::npos, "poincare.json has bounds");

  // parse errors exit with the dedicated code and leave no artifacts
  fs::path bad_dir = base / "bad";
  int rc = run("analyze --expr \"x^^2\" --out " + bad_dir.string());
  check(rc == 3, "parse error exit code is 3 (got " + std::to_string(rc) + ")");
  check(!fs::exists(bad_dir / "capacity_profile.csv"), "no artifacts on parse failure");

  // config file + flag override: flags win
  fs::path cfg = base / "run.cfg";
  {
    std::ofstream out(cfg);
    out << "# comment line\n";
    out << "seed=77\n";
  }
  check(run("--config " + cfg.string() + " hermite --n-max 6 --p-set 3 4 --out " +
            (base / "h1").string()) == 0,
        "hermite with config file");
  std::string audit = slurp(base / "h1" / "lp_audit.json");
  check(audit.find("\"seed\": 77") != std::string::npos, "config file sets the seed");
  check(run("--config " + cfg.string() + " --seed 78 hermite --n-max 6 --p-set 3 4 --out " +
            (base / "h2").string()) == 0,
        "hermite with flag override");
  check(slurp(base / "h2" / "lp_audit.json").find("\"seed\": 78") != std::string::npos,
        "flag overrides the config file");

  // transfer pipeline round trip through serialized tables
  fs::path profile = base / "profile.csv";
  {
    std::ofstream out(profile);
    out << "kappa,c_kappa\n";
    for (double t = 30; t >= 1; t -= 0.25) {
      double kappa = std::exp(-t);
      out << kappa << "," << (t / 32.0) << "\n";
    }
  }
  check(run("transfer --pipeline mc-to-spi --in " + profile.string() +
            " --r-grid 20:200:12 --out " + (base / "t").string()) == 0,
        "transfer mc-to-spi");
  check(slurp(base / "t" / "beta.csv").find("r0=") != std::string::npos,
        "beta.csv records the validity threshold");

  // the full chain subcommand reports a positive dimension-free threshold
  check(run("gauss-lsi --d 1,2,5,10 --kappa-grid 1e-6:0.3:10 --trials 40 --nodes 1201 "
            "--seed 3 --out " + (base / "g").string()) == 0,
        "gauss-lsi run");
  std::string chain = slurp(base / "g" / "chain.json");
  check(chain.find("kappa1") != std::string::npos, "chain.json reports kappa1");
  check(chain.find("\"lsi_pass\": true") != std::string::npos, "LSI defect check passes");
  check(!slurp(base / "g" / "chain_vs_capacity.csv").empty(), "chain_vs_capacity.csv written");

  // eigenvalues land on the integers for the default spectrum invocation
  check(run("spectrum --preset gaussian --k 6 --trials 10 --ess inf --out " +
            (base / "sp").string()) == 0,
        "default spectrum run");
  std::string ev = slurp(base / "sp" / "eigenvalues.json");
  check(ev.find("2.9999") != std::string::npos || ev.find("3.0000") != std::string::npos,
        "fourth eigenvalue is near 3");

  if (failures == 0) std::printf("cli_tests: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
