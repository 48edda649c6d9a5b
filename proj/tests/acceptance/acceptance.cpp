// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Optional arguments select criteria by name substring.

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ppes/dissipation.hpp"
#include "ppes/harness.hpp"

using namespace ppes;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Outcome()> run;
};

std::string sig3(double v) { return fmt::format("{:.2e}", v); }

Outcome sbp_algebra() {
  double sbp = 0.0, mono = 0.0, spacing = 0.0;
  for (int p = 1; p <= 8; ++p) {
    const OperatorSet& o = operators(p);
    const int N = o.N;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) sbp = std::max(sbp, std::abs(o.q(i, j) + o.q(j, i) - o.B[i * N + j]));
    for (int k = 0; k <= p; ++k)
      for (int i = 0; i < N; ++i) {
        double d = 0.0;
        for (int j = 0; j < N; ++j) d += o.d(i, j) * std::pow(o.nodes[j], k);
        const double ex = k == 0 ? 0.0 : k * std::pow(o.nodes[i], k - 1);
        mono = std::max(mono, std::abs(d - ex));
      }
    for (int i = 0; i < N; ++i) spacing = std::max(spacing, std::abs(o.fluxNodes[i + 1] - o.fluxNodes[i] - o.P[i]));
  }
  return {sbp <= 1e-13 && mono <= 1e-10 && spacing <= 1e-14,
          fmt::format("max|Q+Q^T-B| = {:.2e}, monomial error = {:.2e}, spacing error = {:.2e}", sbp, mono, spacing)};
}

Outcome tadmor() {
  GasModel gas;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100000; ++trial) {
    const State a = oracle::random_state(rng, gas), b = oracle::random_state(rng, gas);
    const Vec3 n{u(rng), u(rng), u(rng)};
    const EntropyVars ea = entropy_vars(a, gas), eb = entropy_vars(b, gas);
    const Vec5 f = ec_flux_n(a, b, n, gas);
    double lhs = 0.0;
    for (int c = 0; c < 5; ++c) lhs += (ea.w[c] - eb.w[c]) * f[c];
    const double psiA = dot3(ea.psi, n), psiB = dot3(eb.psi, n);
    worst = std::max(worst, std::abs(lhs - (psiA - psiB)) / std::max({1.0, std::abs(psiA), std::abs(psiB)}));
  }
  return {worst <= 5e-13, fmt::format("1e5 pairs, worst relative residual {:.2e}", worst)};
}

Outcome freestream() {
  CaseConfig c;
  c.caseId = "freestream";
  c.scheme = Scheme::PPESAD;
  c.p = 4;
  c.K = {4, 4, 4};
  c.alpha = 0.15;
  c.seed = 11;
  c.Ma = 3.5;
  c.Re = 500.0;
  c.Pr = 0.7;
  c.tFinal = 1.0;
  c.thetaMode = ThetaMode::RandomPerStage;
  c.randomAv = 1.0 / c.Re;
  const RunResult r = run_case(c);
  const double linf = r.errors ? r.errors->Linf : INFINITY;
  return {r.completed && linf <= 1e-11,
          fmt::format("curvilinear 4^3 p=4, random AV and theta per stage, t=1, {} steps: Linf = {:.2e}", r.steps, linf)};
}

Outcome entropy_drift() {
  const double dts[3] = {4e-4, 2e-4, 1e-4};
  double drift[3];
  for (int i = 0; i < 3; ++i) {
    CaseConfig c;
    c.caseId = "isentropic_vortex";
    c.scheme = Scheme::PPES;
    c.p = 4;
    c.K = {8, 8, 1};
    c.alpha = 0.15;
    c.seed = 1;
    c.Ma = 0.3;
    c.tFinal = 1.0;
    c.dt = dts[i];
    c.thetaMode = ThetaMode::RandomFixed;
    c.entropyConservative = true;
    const RunResult r = run_case(c);
    if (!r.completed) return {false, "run failed at dt = " + sig3(dts[i]) + ": " + r.failure};
    drift[i] = r.entropyDrift;
  }
  const double r1 = drift[0] / drift[1], r2 = drift[1] / drift[2];
  const bool small = std::abs(drift[0]) < 1e-9 && std::abs(drift[1]) < 1e-9 && std::abs(drift[2]) < 1e-9;
  const bool ratios = std::abs(r1 - 8.0) <= 2.4 && std::abs(r2 - 8.0) <= 2.4;
  return {small && ratios, fmt::format("drift {:.3e}, {:.3e}, {:.3e} for dt 4e-4, 2e-4, 1e-4; ratios {:.2f}, {:.2f}",
                                       drift[0], drift[1], drift[2], r1, r2)};
}

Outcome conservation() {
  CaseConfig v;
  v.caseId = "isentropic_vortex";
  v.scheme = Scheme::PPESAD;
  v.p = 4;
  v.K = {8, 8, 1};
  v.alpha = 0.15;
  v.seed = 5;
  v.Ma = 0.3;
  v.Re = 1000.0;
  v.dt = 2e-3;
  v.tFinal = 500 * v.dt;
  v.thetaMode = ThetaMode::RandomPerStage;
  v.randomAv = 0.01;

  CaseConfig t;
  t.caseId = "tgv";
  t.scheme = Scheme::PPESAD;
  t.p = 3;
  t.K = {4, 4, 4};
  t.alpha = 0.1;
  t.seed = 6;
  t.Ma = 1.0;
  t.Re = 400.0;
  t.dt = 2e-3;
  t.tFinal = 500 * t.dt;
  t.thetaMode = ThetaMode::RandomPerStage;
  t.randomAv = 0.005;

  bool ok = true;
  std::string detail;
  for (const CaseConfig* c : {&v, &t}) {
    const RunResult r = run_case(*c);
    ok = ok && r.completed && r.steps == 500 && r.conservation_ok(1e-11);
    detail += fmt::format("{}{}: {} steps, mass {:.2e}, energy {:.2e}", detail.empty() ? "" : "; ", c->caseId, r.steps,
                          r.massDrift, r.energyDrift);
  }
  return {ok, detail};
}

CaseConfig viscous_shock(Scheme s) {
  CaseConfig c;
  c.caseId = "viscous_shock";
  c.scheme = s;
  c.p = 4;
  c.K = {6, 1, 1};
  c.Ma = 2.5;
  c.Re = 50.0;
  c.Pr = 0.75;
  c.tFinal = 0.1;
  c.convergenceK = {6, 12, 24, 48};
  return c;
}

Outcome convergence() {
  const auto ppesad = run_convergence(viscous_shock(Scheme::PPESAD));
  const auto essc = run_convergence(viscous_shock(Scheme::ESSC));
  bool completed = true;
  std::string table;
  for (std::size_t i = 0; i < ppesad.size(); ++i) {
    completed = completed && ppesad[i].completed && essc[i].completed;
    table += fmt::format(" K={} L2 {} / {}", ppesad[i].K, sig3(ppesad[i].err.L2), sig3(essc[i].err.L2));
  }
  const double rate = ppesad.back().rateL2;
  const std::size_t n = ppesad.size();
  const bool agree = sig3(ppesad[n - 1].err.L2) == sig3(essc[n - 1].err.L2) &&
                     sig3(ppesad[n - 2].err.L2) == sig3(essc[n - 2].err.L2);
  return {completed && rate >= 4.0 && agree,
          fmt::format("final L2 rate {:.2f}; PPESAD / ESSC:{}", rate, table)};
}

Outcome positivity() {
  CaseConfig blast;
  blast.caseId = "riemann_1d";
  blast.p = 4;
  blast.K = {40, 1, 1};
  blast.R = 1.0;
  blast.tFinal = 0.012;

  CaseConfig diff;
  diff.caseId = "shock_diffraction_coarse";
  diff.p = 3;
  diff.K = {26, 22, 1};
  diff.shockMach = 5.0;
  diff.tFinal = 0.05;

  bool ok = true;
  std::string detail;
  for (CaseConfig* c : {&blast, &diff}) {
    c->scheme = Scheme::PPESAD;
    const RunResult r = run_case(*c);
    const bool pass = r.completed && r.positivityHeld && r.minRho > 0.0 && r.minT > 0.0;
    ok = ok && pass;
    detail += fmt::format("{}{} PPESAD: {} steps, min rho {:.3e}, min T {:.3e}, max limited {}", detail.empty() ? "" : "; ",
                          c->caseId, r.steps, r.minRho, r.minT, r.maxLimited);
    c->scheme = Scheme::ESSC;
    const RunResult e = run_case(*c);
    detail += fmt::format("; ESSC (recorded): {}", e.completed ? "completed" : "failed: " + e.failure.substr(0, 60));
  }
  return {ok, detail};
}

Outcome limiter_consistency() {
  // run_convergence does not report limiting, so repeat the runs on the three finest grids
  std::vector<double> h, lim;
  for (int K : {12, 24, 48}) {
    CaseConfig c = viscous_shock(Scheme::PPESAD);
    c.K = {K, 1, 1};
    const RunResult r = run_case(c);
    if (r.maxLimiting > 0.0) {
      h.push_back(1.0 / K);
      lim.push_back(r.maxLimiting);
    }
  }
  if (h.size() < 3)
    return {true, fmt::format("vacuous: limiting active on {} of the 3 finest grids (note logged)", h.size())};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(lim[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(h.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope >= 4 - 1.5, fmt::format("log-log slope of max(1 - theta) vs h = {:.2f}", slope)};
}

Outcome oracle_equivalences() {
  GasModel gas;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0), v(0.0, 1.0);

  double flux = 0.0;
  for (int trial = 0; trial < 50; ++trial)
    for (int p = 1; p <= 4; ++p) {
      const OperatorSet& o = operators(p);
      std::vector<State> line(o.N);
      std::vector<Vec3> a(o.N);
      for (int i = 0; i < o.N; ++i) {
        line[i] = oracle::random_state(rng, gas, 1.0);
        a[i] = {1.0 + 0.5 * u(rng), 0.5 * u(rng), 0.5 * u(rng)};
      }
      const auto f = telescoped_volume_flux(o, line, a, gas);
      const auto ref = oracle::ec_volume_flux_double_sum(o, line, a, gas);
      for (std::size_t i = 0; i < f.size(); ++i)
        for (int c = 0; c < 5; ++c) flux = std::max(flux, std::abs(f[i][c] - ref[i][c]) / std::max(1.0, std::abs(ref[i][c])));
    }

  double theta = 0.0;
  for (int trial = 0; trial < 20000; ++trial) {
    const State a = oracle::random_state(rng, gas, 1.0);
    const State b{a.rho * (1.0 + 1.5 * u(rng)), {a.m[0] + u(rng), a.m[1] + u(rng), a.m[2]}, a.Et * (1.0 + u(rng))};
    const double al = std::max(kAlephFloor, 0.5 * v(rng));
    const double tr = theta_rho(a.rho, b.rho, al * a.rho);
    const double ei = al * internal_energy(a);
    theta = std::max(theta, std::abs(theta_ie(a, b, tr, ei) - oracle::theta_ie_bisection(a, b, tr, ei)));
  }

  BoxSpec box;
  box.K = {2, 1, 1};
  box.periodic = {true, true, true};
  box.collapsed = {false, true, true};
  const Mesh m = build_box_mesh(box, 2);
  double ldg = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w(2 * 3 * 5);
    for (double& x : w) x = u(rng);
    for (int e = 0; e < 2; ++e) {
      const int o = 1 - e;
      const double* lo = &w[(o * 3 + 2) * 5];
      const double* hi = &w[(o * 3 + 0) * 5];
      const double* self = &w[e * 15];
      std::array<const double*, kFaces> traces{lo, hi, self, self, self, self};
      std::vector<double> th(3 * 15);
      ldg_gradient(m, m.elements[e], self, traces, th.data());
      for (int c = 0; c < 5; ++c) {
        const auto ref = oracle::ldg_p2({self[c], self[5 + c], self[10 + c]}, lo[c], hi[c], 0.5);
        for (int i = 0; i < 3; ++i) ldg = std::max(ldg, std::abs(th[i * 15 + c] - ref[i]) / std::max(1.0, std::abs(ref[i])));
      }
    }
  }
  return {flux <= 1e-13 && theta <= 1e-12 && ldg <= 1e-13,
          fmt::format("double sum {:.2e} (N <= 5), theta_IE vs bisection {:.2e}, LDG hand case {:.2e}", flux, theta, ldg)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"sbp_algebra", sbp_algebra},
      {"tadmor_condition", tadmor},
      {"freestream_preservation", freestream},
      {"entropy_conservation", entropy_drift},
      {"conservation_under_limiting", conservation},
      {"viscous_shock_convergence", convergence},
      {"positivity", positivity},
      {"limiter_consistency", limiter_consistency},
      {"oracle_equivalences", oracle_equivalences},
  };
  int failed = 0;
  for (const Criterion& c : all) {
    if (argc > 1) {
      bool want = false;
      for (int i = 1; i < argc; ++i) want = want || c.name.find(argv[i]) != std::string::npos;
      if (!want) continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print("{} {} ({:.1f} s): {}\n", o.pass ? "PASS" : "FAIL", c.name, sec, o.detail);
    std::fflush(stdout);
    failed += !o.pass;
  }
  fmt::print("{} criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
