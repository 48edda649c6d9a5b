#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ppes/harness.hpp"

namespace {

ppes::CaseConfig load(const std::string& path, std::optional<std::uint64_t> seed, const std::string& scheme) {
  ppes::CaseConfig cfg = ppes::load_config(path);
  if (seed) cfg.seed = *seed;
  if (!scheme.empty()) cfg.scheme = ppes::scheme_from_name(scheme);
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positivity-preserving entropy-stable DG solver"};
  app.require_subcommand(0, 1);
  std::optional<int> dumpOps;
  app.add_option("--dump-operators", dumpOps, "Print the SBP operator of order p as JSON and exit");

  std::string config, outDir, scheme;
  std::optional<std::uint64_t> seed;
  bool dumpAv = false, quiet = false;
  double tol = 1e-10;
  auto common = [&](CLI::App* c) {
    c->add_option("config", config, "Case configuration (JSON)")->required()->check(CLI::ExistingFile);
    c->add_option("--seed", seed, "Override the mesh and random seed");
    c->add_option("--out-dir", outDir, "Directory for CSV, VTK and manifest output");
    c->add_option("--scheme", scheme, "Override the scheme (ESSC, PPES, PPESAD)");
    c->add_flag("--dump-av", dumpAv, "Write per-step element sensor/viscosity/theta CSV");
    c->add_flag("-q,--quiet", quiet, "No progress lines");
  };
  auto* run = app.add_subcommand("run", "Run a case to t_final");
  common(run);
  auto* conv = app.add_subcommand("convergence", "Run a case over the configured K refinements");
  common(conv);
  auto* audit = app.add_subcommand("audit", "Run a case and fail on positivity or conservation violations");
  common(audit);
  audit->add_option("--tol", tol, "Relative conservation tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dumpOps) {
      std::cout << ppes::dump_operators(*dumpOps).dump(2) << "\n";
      if (app.get_subcommands().empty()) return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }
    const ppes::CaseConfig cfg = load(config, seed, scheme);
    ppes::RunOptions opts;
    opts.outDir = outDir;
    opts.dumpAv = dumpAv;
    opts.log = !quiet;

    if (conv->parsed()) {
      const auto rows = ppes::run_convergence(cfg, opts);
      ppes::write_convergence_csv(cfg, rows, std::cout);
      if (!outDir.empty()) {
        std::ofstream os(outDir + "/convergence.csv");
        ppes::write_convergence_csv(cfg, rows, os);
      }
      return 0;
    }

    const ppes::RunResult r = ppes::run_case(cfg, opts);
    fmt::print("completed={} steps={} t={:.6g} min_rho={:.6g} min_T={:.6g} mass_drift={:.3g} energy_drift={:.3g} "
               "entropy_drift={:.6g}\n",
               r.completed, r.steps, r.t, r.minRho, r.minT, r.massDrift, r.energyDrift, r.entropyDrift);
    if (r.errors) fmt::print("L2={:.6e} Linf={:.6e}\n", r.errors->L2, r.errors->Linf);
    if (!r.completed) fmt::print(stderr, "failure: {}\n", r.failure);
    if (audit->parsed()) {
      const bool ok = r.completed && r.positivityHeld && r.conservation_ok(tol);
      fmt::print("audit={}\n", ok ? "PASS" : "FAIL");
      return ok ? 0 : 1;
    }
    return r.completed ? 0 : 1;
  } catch (const ppes::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
