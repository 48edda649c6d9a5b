#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ppes/harness.hpp"

namespace ppes {

using nlohmann::json;
namespace fs = std::filesystem;

ErrorNorms error_norms(const Mesh& mesh, const Field& U, const std::function<State(const Vec3&)>& exact) {
  const int np = mesh.npts();
  const auto& w = mesh.ops.weights;
  double num = 0.0, den = 0.0;
  ErrorNorms n;
  for (const auto& e : mesh.elements)
    for (int pt = 0; pt < np; ++pt) {
      const State s = exact(Vec3{e.x[pt * 3], e.x[pt * 3 + 1], e.x[pt * 3 + 2]});
      const Vec5 ex = s.vec();
      const double* u = U.data() + (e.id * np + pt) * kNv;
      double sq = 0.0;
      for (int c = 0; c < kNv; ++c) {
        const double d = u[c] - ex[c];
        sq += d * d;
        n.Linf = std::max(n.Linf, std::abs(d));
      }
      const double wj = w[pt] * e.J[pt];
      num += wj * sq;
      den += wj;
    }
  n.L2 = std::sqrt(num / den);
  return n;
}

namespace {

double kinetic_energy(const Mesh& mesh, const Field& U) {
  const int np = mesh.npts();
  double k = 0.0;
  for (const auto& e : mesh.elements)
    for (int pt = 0; pt < np; ++pt) {
      const State s = State::from(U.data() + (e.id * np + pt) * kNv);
      k += mesh.ops.weights[pt] * e.J[pt] * 0.5 * dot3(s.m, s.m) / s.rho;
    }
  return k;
}

HistoryRow snapshot(const Mesh& mesh, const Field& U, const GasModel& gas, long step, double t) {
  HistoryRow r;
  r.step = step;
  r.t = t;
  const Vec5 q = integrate_conserved(mesh, U);
  r.mass = q[0];
  r.energy = q[4];
  r.entropy = total_entropy(mesh, U, gas);
  r.kinetic = kinetic_energy(mesh, U);
  field_minima(U, gas, r.minRho, r.minT);
  return r;
}

void write_history_header(std::ostream& os) {
  os << "step,t,dt,mass,energy,entropy,kinetic_energy,min_rho,min_T,max_Sn,min_theta,limited,retries\n";
}

void write_history_row(std::ostream& os, const HistoryRow& r) {
  fmt::print(os, "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{}\n", r.step,
             r.t, r.dt, r.mass, r.energy, r.entropy, r.kinetic, r.minRho, r.minT, r.maxSn, r.minTheta, r.limited,
             r.retries);
}

void write_solution_vtk(const std::string& path, const Mesh& mesh, const Field& U, const GasModel& gas,
                        const Integrator& integ) {
  const int np = mesh.npts();
  const std::size_t n = mesh.elements.size() * np;
  std::vector<PointField> f{{"rho", {}}, {"u", {}}, {"v", {}}, {"w", {}}, {"p", {}}, {"T", {}},
                            {"mu_ad", {}}, {"theta_f", {}}};
  for (auto& pf : f) pf.values.resize(n);
  const AvFields& av = integ.av();
  for (std::size_t i = 0; i < n; ++i) {
    const State s = State::from(U.data() + i * kNv);
    const double ie = internal_energy(s);
    f[0].values[i] = s.rho;
    for (int d = 0; d < 3; ++d) f[1 + d].values[i] = s.m[d] / s.rho;
    f[4].values[i] = (gas.gamma - 1.0) * ie;
    f[5].values[i] = (gas.gamma - 1.0) * ie / (s.rho * gas.R);
    f[6].values[i] = av.mu.size() == n ? av.mu[i] : 0.0;
    f[7].values[i] = integ.theta()[i / np];
  }
  std::ofstream os(path);
  write_vtk(mesh, f, os);
}

json norms_json(const ErrorNorms& e) { return json{{"L2", e.L2}, {"Linf", e.Linf}}; }

}  // namespace

void write_manifest(const std::string& outDir, const CaseConfig& cfg, const std::vector<std::string>& files,
                    const json& summary) {
  json m{{"schema_version", kManifestVersion},
         {"case", cfg.caseId},
         {"scheme", scheme_name(cfg.scheme)},
         {"config", config_to_json(cfg)},
         {"files", files},
         {"summary", summary}};
  std::ofstream os(fs::path(outDir) / "manifest.json");
  os << m.dump(2) << "\n";
}

RunResult run_case(const CaseConfig& cfg, const RunOptions& opts) {
  CaseSetup setup = make_case(cfg);
  const Mesh& mesh = setup.mesh;
  const GasModel& gas = setup.gas;
  RhsOptions ro;
  ro.scheme = cfg.scheme;
  ro.entropyConservative = cfg.entropyConservative;
  ro.av = cfg.av;
  Discretization disc(mesh, gas, ro, setup.bc);
  StepController ctl;
  ctl.cfl = cfg.cfl;
  Integrator integ(disc, ctl, cfg.thetaMode, cfg.seed);
  if (cfg.randomAv >= 0.0) integ.set_random_av(cfg.randomAv);

  Field U = setup.U0;
  double t = 0.0;
  RunResult res;

  std::ofstream hist, elems;
  std::vector<std::string> files;
  if (!opts.outDir.empty()) {
    fs::create_directories(opts.outDir);
    hist.open(fs::path(opts.outDir) / "history.csv");
    write_history_header(hist);
    files.push_back("history.csv");
    if (opts.dumpAv) {
      elems.open(fs::path(opts.outDir) / "elements.csv");
      elems << "step,t,element,Sn,mu_max,theta_f\n";
      files.push_back("elements.csv");
    }
  }

  const HistoryRow h0 = snapshot(mesh, U, gas, 0, 0.0);
  res.history.push_back(h0);
  if (hist.is_open()) write_history_row(hist, h0);
  res.minRho = h0.minRho;
  res.minT = h0.minT;
  res.positivityHeld = h0.minRho > 0.0 && h0.minT > 0.0;
  Vec5 boundary{};
  const double eps = 1e-12 * std::max(1.0, cfg.tFinal);

  try {
    while (t < cfg.tFinal - eps && res.steps < cfg.maxSteps) {
      double dt = cfg.dt > 0.0 ? cfg.dt : stable_dt(mesh, U, gas, &integ.av(), ctl, cfg.av.c_rho);
      if (t + dt > cfg.tFinal) dt = cfg.tFinal - t;
      dt = integ.step(U, t, dt);
      t += dt;
      ++res.steps;
      const StepStats& st = integ.last_step();
      for (int c = 0; c < kNv; ++c) boundary[c] += st.boundaryFlux[c];
      res.minRho = std::min(res.minRho, st.minRho);
      res.minT = std::min(res.minT, st.minT);
      res.positivityHeld = res.positivityHeld && st.minRho > 0.0 && st.minT > 0.0;
      res.maxLimiting = std::max(res.maxLimiting, 1.0 - st.minTheta);
      res.maxLimited = std::max(res.maxLimited, st.limited);

      const bool last = !(t < cfg.tFinal - eps) || res.steps >= cfg.maxSteps;
      if (cfg.outputEvery <= 0 || res.steps % cfg.outputEvery == 0 || last) {
        HistoryRow r = snapshot(mesh, U, gas, res.steps, t);
        r.dt = dt;
        r.maxSn = st.maxSn;
        r.minTheta = st.minTheta;
        r.limited = st.limited;
        r.retries = st.retries;
        res.history.push_back(r);
        if (hist.is_open()) write_history_row(hist, r);
        if (opts.onStep) opts.onStep(r);
        if (opts.log)
          fmt::print(stderr, "step={} t={:.6g} dt={:.4g} min_rho={:.4g} min_T={:.4g} limited={} max_Sn={:.3g}\n",
                     r.step, r.t, r.dt, r.minRho, r.minT, r.limited, r.maxSn);
      }
      if (elems.is_open()) {
        const AvFields& av = integ.av();
        for (std::size_t k = 0; k < mesh.elements.size(); ++k)
          fmt::print(elems, "{},{:.17g},{},{:.17g},{:.17g},{:.17g}\n", res.steps, t, k,
                     av.Sn.empty() ? 0.0 : av.Sn[k], av.muMax.empty() ? 0.0 : av.muMax[k], integ.theta()[k]);
      }
    }
    res.completed = !(t < cfg.tFinal - eps);
    if (!res.completed) res.failure = fmt::format("max_steps reached at t={:.6g}", t);
  } catch (const InadmissibleState& e) {
    res.failure = fmt::format("inadmissible state at t={:.6g}: {}", t, e.what());
  }
  res.t = t;

  const HistoryRow& h1 = res.history.back();
  auto rel = [](double a, double b) { return std::abs(a) / std::max(std::abs(b), 1e-300); };
  res.massDrift = rel(h1.mass - h0.mass - boundary[0], h0.mass);
  res.energyDrift = rel(h1.energy - h0.energy - boundary[4], h0.energy);
  res.entropyDrift = entropy_change(mesh, setup.U0, U, gas, boundary);
  if (setup.exact) {
    const auto ex = setup.exact;
    const double tt = t;
    res.errors = error_norms(mesh, U, [&](const Vec3& x) { return ex(x, tt); });
  }

  if (!opts.outDir.empty()) {
    if (opts.writeVtk) {
      write_solution_vtk((fs::path(opts.outDir) / "solution.vtk").string(), mesh, U, gas, integ);
      files.push_back("solution.vtk");
    }
    if (res.errors) {
      std::ofstream os(fs::path(opts.outDir) / "errors.csv");
      os << "case,scheme,p,K,t,L2,Linf\n";
      fmt::print(os, "{},{},{},{},{:.17g},{:.17g},{:.17g}\n", cfg.caseId, scheme_name(cfg.scheme), cfg.p, cfg.K[0], t,
                 res.errors->L2, res.errors->Linf);
      files.push_back("errors.csv");
    }
    json summary{{"completed", res.completed},
                 {"failure", res.failure},
                 {"steps", res.steps},
                 {"t", res.t},
                 {"mass_drift", res.massDrift},
                 {"energy_drift", res.energyDrift},
                 {"entropy_drift", res.entropyDrift},
                 {"min_rho", res.minRho},
                 {"min_T", res.minT},
                 {"positivity_held", res.positivityHeld},
                 {"max_limiting", res.maxLimiting}};
    if (res.errors) summary["errors"] = norms_json(*res.errors);
    write_manifest(opts.outDir, cfg, files, summary);
  }
  return res;
}

std::vector<ConvergenceRow> run_convergence(const CaseConfig& cfg, const RunOptions& opts) {
  std::vector<ConvergenceRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int K : cfg.convergenceK) {
    CaseConfig c = cfg;
    for (int d = 0; d < 3; ++d)
      if (d == 0 || cfg.K[d] > 1) c.K[d] = K;
    RunOptions o = opts;
    if (!opts.outDir.empty()) o.outDir = (fs::path(opts.outDir) / fmt::format("K{}", K)).string();
    const RunResult r = run_case(c, o);
    ConvergenceRow row;
    row.K = K;
    const CaseSetup s = make_case(c);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& e : s.mesh.elements)
      for (const auto& v : e.vertices) {
        lo = std::min(lo, v[0]);
        hi = std::max(hi, v[0]);
      }
    row.h = (hi - lo) / K;
    row.completed = r.completed;
    row.err = r.errors.value_or(ErrorNorms{nan, nan});
    row.rateL2 = row.rateLinf = nan;
    if (!rows.empty()) {
      const ConvergenceRow& p = rows.back();
      const double lh = std::log(p.h / row.h);
      row.rateL2 = std::log(p.err.L2 / row.err.L2) / lh;
      row.rateLinf = std::log(p.err.Linf / row.err.Linf) / lh;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_convergence_csv(const CaseConfig& cfg, const std::vector<ConvergenceRow>& rows, std::ostream& os) {
  os << "case,scheme,p,K,h,Linf,Linf_rate,L2,L2_rate,completed\n";
  for (const auto& r : rows)
    fmt::print(os, "{},{},{},{},{:.17g},{:.17g},{:.6g},{:.17g},{:.6g},{}\n", cfg.caseId, scheme_name(cfg.scheme),
               cfg.p, r.K, r.h, r.err.Linf, r.rateLinf, r.err.L2, r.rateL2, r.completed ? 1 : 0);
}

json dump_operators(int p) {
  const OperatorSet& op = operators(p);
  const int N = op.N;
  auto mat = [N](const std::vector<double>& a) {
    json rows = json::array();
    for (int i = 0; i < N; ++i) rows.push_back(std::vector<double>(a.begin() + i * N, a.begin() + (i + 1) * N));
    return rows;
  };
  return json{{"p", p}, {"N", N}, {"nodes", op.nodes}, {"weights", op.P}, {"D", mat(op.D)}, {"Q", mat(op.Q)},
              {"flux_nodes", op.fluxNodes}};
}

}  // namespace ppes
