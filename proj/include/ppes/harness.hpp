#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppes/rhs.hpp"
#include "ppes/time_integrator.hpp"

namespace ppes {

inline constexpr int kManifestVersion = 1;

struct CaseConfig {
  std::string caseId = "isentropic_vortex";
  Scheme scheme = Scheme::PPESAD;
  int p = 4;
  std::array<int, 3> K{8, 8, 1};
  double alpha = 0.0;
  std::uint64_t seed = 1;

  double gamma = 1.4;
  double Ma = 0.3;          // sets R = 1/(gamma Ma^2) unless R > 0
  double R = 0.0;
  double Re = 0.0;          // 0 means inviscid
  double Pr = 0.72;
  std::string viscosityLaw = "constant";

  double tFinal = 1.0;
  double cfl = 0.5;
  double dt = 0.0;          // > 0 fixes the time step
  long maxSteps = 10000000;
  int outputEvery = 0;      // history cadence in steps, 0 = every step

  AvConfig av;
  ThetaMode thetaMode = ThetaMode::Computed;
  double randomAv = -1.0;   // >= 0 injects random artificial viscosity up to this value
  bool entropyConservative = false;

  // riemann_1d
  std::array<double, 3> left{1.0, 0.0, 1000.0};   // rho, u, p
  std::array<double, 3> right{1.0, 0.0, 0.01};
  double x0 = 0.5;
  // shock_diffraction_coarse
  double shockMach = 5.0;

  std::vector<int> convergenceK{6, 12, 24, 48};

  GasModel gas() const;
  void validate() const;
};

CaseConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const CaseConfig& c);
CaseConfig load_config(const std::string& path);

/// Steady viscous shock profile for Pr = 3/4 in the shock frame, evaluated
/// in the lab frame where the upstream gas is at rest.
class ViscousShock {
 public:
  ViscousShock(double gamma, double Ma, double Re, double R, double x0 = 0.0);
  /// Shock-frame velocity at shock-frame coordinate xi.
  double velocity(double xi) const;
  /// Lab-frame state at (x, t).
  State state(double x, double t, const GasModel& gas) const;
  double uL() const { return uL_; }
  double uR() const { return uR_; }

 private:
  double g_, R_, mu_, uL_, uR_, H_, k_, x0_, Fmid_;
  double lhs(double u) const;
};

/// Isentropic vortex translating with (1, 0, 0) on the periodic square [-half, half]^2;
/// it returns to the origin after 2 half.
struct IsentropicVortex {
  double beta = 5.0;
  double half = 10.0;
  Vec3 Vinf{1.0, 0.0, 0.0};
  State state(const Vec3& x, double t, const GasModel& gas) const;
};

struct CaseSetup {
  Mesh mesh;
  GasModel gas;
  BoundaryData bc;
  Field U0;
  std::function<State(const Vec3&, double)> exact;  // empty when unknown
};

CaseSetup make_case(const CaseConfig& cfg);

struct ErrorNorms {
  double L2 = 0.0;
  double Linf = 0.0;
};

/// Volume-weighted (P J) L2 and pointwise Linf over all conservative components.
ErrorNorms error_norms(const Mesh& mesh, const Field& U, const std::function<State(const Vec3&)>& exact);

struct HistoryRow {
  long step = 0;
  double t = 0.0, dt = 0.0;
  double mass = 0.0, energy = 0.0, entropy = 0.0, kinetic = 0.0;
  double minRho = 0.0, minT = 0.0, maxSn = 0.0, minTheta = 1.0;
  int limited = 0, retries = 0;
};

struct RunOptions {
  std::string outDir;       // empty: no files
  bool dumpAv = false;      // per-step element CSV
  bool writeVtk = true;
  bool log = false;         // key=value progress lines on stderr
  std::function<void(const HistoryRow&)> onStep;
};

struct RunResult {
  bool completed = false;
  std::string failure;
  long steps = 0;
  double t = 0.0;
  std::optional<ErrorNorms> errors;
  double massDrift = 0.0;     // relative, boundary fluxes removed
  double energyDrift = 0.0;
  double entropyDrift = 0.0;  // S(t) - S(0)
  double minRho = 0.0, minT = 0.0;
  bool positivityHeld = true;  // every accepted step had rho, T > 0
  double maxLimiting = 0.0;    // max over steps of 1 - theta_f
  int maxLimited = 0;
  std::vector<HistoryRow> history;

  bool conservation_ok(double tol) const { return massDrift <= tol && energyDrift <= tol; }
};

RunResult run_case(const CaseConfig& cfg, const RunOptions& opts = {});

struct ConvergenceRow {
  int K = 0;
  double h = 0.0;
  ErrorNorms err;
  double rateLinf = 0.0, rateL2 = 0.0;  // NaN on the first row
  bool completed = false;
};

std::vector<ConvergenceRow> run_convergence(const CaseConfig& cfg, const RunOptions& opts = {});
void write_convergence_csv(const CaseConfig& cfg, const std::vector<ConvergenceRow>& rows, std::ostream& os);

/// Operator dump for --dump-operators: nodes, weights, D, Q for order p as JSON.
nlohmann::json dump_operators(int p);

/// Writes manifest.json describing the files in outDir.
void write_manifest(const std::string& outDir, const CaseConfig& cfg, const std::vector<std::string>& files,
                    const nlohmann::json& summary);

}  // namespace ppes
