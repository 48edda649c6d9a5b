#include <cmath>
#include <fstream>
#include <numbers>

#include "ppes/harness.hpp"

namespace ppes {

using nlohmann::json;

namespace {

const char* theta_mode_name(ThetaMode m) {
  switch (m) {
    case ThetaMode::Computed: return "computed";
    case ThetaMode::RandomPerStage: return "random_per_stage";
    case ThetaMode::RandomFixed: return "random_fixed";
  }
  return "?";
}

ThetaMode theta_mode_from_name(const std::string& s) {
  if (s == "computed") return ThetaMode::Computed;
  if (s == "random_per_stage") return ThetaMode::RandomPerStage;
  if (s == "random_fixed") return ThetaMode::RandomFixed;
  throw ConfigError("unknown theta_mode: " + s);
}

bool uses_unit_gas_constant(const std::string& id) { return id == "riemann_1d" || id == "shock_diffraction_coarse"; }

}  // namespace

GasModel CaseConfig::gas() const {
  GasModel g;
  g.gamma = gamma;
  if (R > 0.0) g.R = R;
  else if (uses_unit_gas_constant(caseId)) g.R = 1.0;
  else g.R = 1.0 / (gamma * Ma * Ma);
  g.Pr = Pr;
  g.Re = Re > 0.0 ? Re : std::numeric_limits<double>::infinity();
  if (viscosityLaw == "constant") g.law = ViscosityLaw::Constant;
  else if (viscosityLaw == "sutherland") g.law = ViscosityLaw::Sutherland;
  else throw ConfigError("unknown viscosity law: " + viscosityLaw);
  return g;
}

void CaseConfig::validate() const {
  static const char* known[] = {"viscous_shock", "isentropic_vortex", "freestream", "tgv", "riemann_1d",
                                "shock_diffraction_coarse"};
  bool ok = false;
  for (const char* k : known) ok = ok || caseId == k;
  if (!ok) throw ConfigError("unknown case: " + caseId);
  if (p < 1 || p > kMaxOrder) throw ConfigError("p must lie in [1, 12]");
  for (int k : K)
    if (k < 1) throw ConfigError("K entries must be >= 1");
  if (!(tFinal >= 0.0)) throw ConfigError("t_final must be >= 0");
  if (!(cfl > 0.0)) throw ConfigError("cfl must be positive");
  if (dt < 0.0) throw ConfigError("dt must be >= 0");
  if (caseId == "viscous_shock" && std::abs(Pr - 0.75) > 1e-12)
    throw ConfigError("the viscous shock solution requires Pr = 3/4");
  if (caseId == "viscous_shock" && !(Re > 0.0)) throw ConfigError("the viscous shock needs a finite Re");
  if (av.c_rho < 0.0 || av.C_av < 0.0) throw ConfigError("artificial viscosity constants must be >= 0");
  gas().validate();
}

CaseConfig config_from_json(const json& j) {
  CaseConfig c;
  c.caseId = j.value("case", c.caseId);
  c.scheme = scheme_from_name(j.value("scheme", std::string(scheme_name(c.scheme))));
  c.p = j.value("p", c.p);
  if (j.contains("K")) {
    const auto& k = j.at("K");
    if (k.is_number_integer()) c.K = {k.get<int>(), c.K[1], c.K[2]};
    else {
      std::vector<int> v = k.get<std::vector<int>>();
      if (v.empty() || v.size() > 3) throw ConfigError("K must have 1 to 3 entries");
      for (std::size_t i = 0; i < v.size(); ++i) c.K[i] = v[i];
    }
  }
  c.alpha = j.value("alpha", c.alpha);
  c.seed = j.value("seed", c.seed);
  if (j.contains("gas")) {
    const json& g = j.at("gas");
    c.gamma = g.value("gamma", c.gamma);
    c.Ma = g.value("Ma", c.Ma);
    c.R = g.value("R", c.R);
    c.Re = g.value("Re", c.Re);
    c.Pr = g.value("Pr", c.Pr);
    c.viscosityLaw = g.value("viscosity_law", c.viscosityLaw);
  }
  c.tFinal = j.value("t_final", c.tFinal);
  c.cfl = j.value("cfl", c.cfl);
  c.dt = j.value("dt", c.dt);
  c.maxSteps = j.value("max_steps", c.maxSteps);
  c.outputEvery = j.value("output_every", c.outputEvery);
  if (j.contains("av")) {
    const json& a = j.at("av");
    c.av.c_rho = a.value("c_rho", c.av.c_rho);
    c.av.C_av = a.value("C_av", c.av.C_av);
    c.av.delta = a.value("delta", c.av.delta);
  }
  c.thetaMode = theta_mode_from_name(j.value("theta_mode", std::string(theta_mode_name(c.thetaMode))));
  c.randomAv = j.value("random_av", c.randomAv);
  c.entropyConservative = j.value("entropy_conservative", c.entropyConservative);
  if (j.contains("riemann")) {
    const json& r = j.at("riemann");
    if (r.contains("left")) c.left = r.at("left").get<std::array<double, 3>>();
    if (r.contains("right")) c.right = r.at("right").get<std::array<double, 3>>();
    c.x0 = r.value("x0", c.x0);
  }
  c.shockMach = j.value("shock_mach", c.shockMach);
  if (j.contains("convergence")) c.convergenceK = j.at("convergence").value("K", c.convergenceK);
  c.validate();
  return c;
}

json config_to_json(const CaseConfig& c) {
  return json{{"case", c.caseId},
              {"scheme", scheme_name(c.scheme)},
              {"p", c.p},
              {"K", c.K},
              {"alpha", c.alpha},
              {"seed", c.seed},
              {"gas",
               {{"gamma", c.gamma}, {"Ma", c.Ma}, {"R", c.R}, {"Re", c.Re}, {"Pr", c.Pr},
                {"viscosity_law", c.viscosityLaw}}},
              {"t_final", c.tFinal},
              {"cfl", c.cfl},
              {"dt", c.dt},
              {"max_steps", c.maxSteps},
              {"output_every", c.outputEvery},
              {"av", {{"c_rho", c.av.c_rho}, {"C_av", c.av.C_av}, {"delta", c.av.delta}}},
              {"theta_mode", theta_mode_name(c.thetaMode)},
              {"random_av", c.randomAv},
              {"entropy_conservative", c.entropyConservative},
              {"riemann", {{"left", c.left}, {"right", c.right}, {"x0", c.x0}}},
              {"shock_mach", c.shockMach},
              {"convergence", {{"K", c.convergenceK}}}};
}

CaseConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }
}

ViscousShock::ViscousShock(double gamma, double Ma, double Re, double R, double x0)
    : g_(gamma), R_(R), mu_(1.0 / Re), uL_(1.0), x0_(x0) {
  uR_ = uL_ * (2.0 + (g_ - 1.0) * Ma * Ma) / ((g_ + 1.0) * Ma * Ma);
  const double cp = g_ * R_ / (g_ - 1.0);
  H_ = cp * 1.0 + 0.5 * uL_ * uL_;
  k_ = 3.0 * (g_ + 1.0) / (8.0 * g_ * mu_);  // mass flux rho_L u_L = 1
  Fmid_ = lhs(0.5 * (uL_ + uR_));
}

double ViscousShock::lhs(double u) const {
  return (uL_ * std::log(uL_ - u) - uR_ * std::log(u - uR_)) / (uL_ - uR_);
}

double ViscousShock::velocity(double xi) const {
  const double target = k_ * (xi - x0_) + Fmid_;
  double lo = uR_, hi = uL_;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (lhs(mid) > target) lo = mid;
    else hi = mid;
  }
  const double u = 0.5 * (lo + hi);
  if (!(u > uR_ && u < uL_) && !(u == uR_ || u == uL_)) throw std::runtime_error("viscous shock root find failed");
  return u;
}

State ViscousShock::state(double x, double t, const GasModel& gas) const {
  const double u = velocity(x + uL_ * t);
  const double rho = 1.0 / u;
  const double T = (H_ - 0.5 * u * u) / gas.cp();
  return from_primitive(rho, Vec3{u - uL_, 0.0, 0.0}, rho * gas.R * T, gas);
}

State IsentropicVortex::state(const Vec3& x, double t, const GasModel& gas) const {
  const double L = 2.0 * half;
  auto wrap = [&](double v) { return v - L * std::floor((v + half) / L); };
  const double xr = wrap(x[0] - Vinf[0] * t), yr = wrap(x[1] - Vinf[1] * t);
  const double r2 = xr * xr + yr * yr;
  const double pi = std::numbers::pi;
  const double g = gas.gamma;
  const double dv = beta / (2.0 * pi) * std::exp(0.5 * (1.0 - r2));
  const double T = 1.0 - (g - 1.0) * beta * beta / (8.0 * g * pi * pi * gas.R) * std::exp(1.0 - r2);
  const double rho = std::pow(T, 1.0 / (g - 1.0));
  return from_primitive(rho, Vec3{Vinf[0] - dv * yr, Vinf[1] + dv * xr, Vinf[2]}, rho * gas.R * T, gas);
}

CaseSetup make_case(const CaseConfig& cfg) {
  cfg.validate();
  CaseSetup s;
  s.gas = cfg.gas();
  const GasModel gas = s.gas;
  BoxSpec b;
  b.K = cfg.K;
  b.alpha = cfg.alpha;
  b.seed = cfg.seed;
  const double pi = std::numbers::pi;
  auto one_d = [&](double lo, double hi) {
    b.K = {cfg.K[0], 1, 1};
    b.lo = {lo, 0.0, 0.0};
    b.hi = {hi, 1.0, 1.0};
    b.periodic = {false, true, true};
    b.collapsed = {false, true, true};
  };

  if (cfg.caseId == "viscous_shock") {
    one_d(-0.5, 0.5);
    auto shock = std::make_shared<ViscousShock>(gas.gamma, cfg.Ma, cfg.Re, gas.R);
    s.exact = [shock, gas](const Vec3& x, double t) { return shock->state(x[0], t, gas); };
    s.bc.farfield = s.exact;
  } else if (cfg.caseId == "isentropic_vortex") {
    b.K = {cfg.K[0], cfg.K[1], 1};
    IsentropicVortex v;
    b.lo = {-v.half, -v.half, 0.0};
    b.hi = {v.half, v.half, 1.0};
    b.periodic = {true, true, true};
    b.collapsed = {false, false, true};
    s.exact = [v, gas](const Vec3& x, double t) { return v.state(x, t, gas); };
  } else if (cfg.caseId == "freestream") {
    b.lo = {0.0, 0.0, 0.0};
    b.hi = {1.0, 1.0, 1.0};
    b.vertex_map = [](const Vec3& x) {
      // smooth skew of the lattice; tri-linear elements follow it piecewise
      return Vec3{x[0] + 0.08 * std::sin(std::numbers::pi * x[1]) * std::sin(std::numbers::pi * x[2]),
                  x[1] + 0.08 * std::sin(std::numbers::pi * x[2]) * std::sin(std::numbers::pi * x[0]),
                  x[2] + 0.08 * std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1])};
    };
    const double a = 10.0 * pi / 180.0;
    const State inf = from_primitive(1.0, Vec3{std::cos(a), std::sin(a), 0.0}, gas.R, gas);
    s.exact = [inf](const Vec3&, double) { return inf; };
    s.bc.farfield = s.exact;
  } else if (cfg.caseId == "tgv") {
    b.lo = {0.0, 0.0, 0.0};
    b.hi = {2.0 * pi, 2.0 * pi, 2.0 * pi};
    b.periodic = {true, true, true};
  } else if (cfg.caseId == "riemann_1d") {
    one_d(0.0, 1.0);
    b.side_bc[0] = Bc::Outflow;
    b.side_bc[1] = Bc::Outflow;
  } else if (cfg.caseId == "shock_diffraction_coarse") {
    b.K = {cfg.K[0], cfg.K[1], 1};
    b.lo = {0.0, 0.0, 0.0};
    b.hi = {1.0, 1.0, 1.0};
    b.periodic = {false, false, true};
    b.collapsed = {false, false, true};
    b.side_bc = {Bc::FarField, Bc::Outflow, Bc::SlipWall, Bc::SlipWall, Bc::FarField, Bc::FarField};
    const int si = std::max(1, static_cast<int>(std::lround(cfg.K[0] / 13.0)));
    const int sj = std::max(1, static_cast<int>(std::lround(cfg.K[1] * 6.0 / 11.0)));
    b.keep = [si, sj](int i, int j, int) { return !(i < si && j < sj); };
    b.mask_bc = Bc::SlipWall;
  }

  s.mesh = build_box_mesh(b, cfg.p);

  if (cfg.caseId == "tgv") {
    s.U0 = project(s.mesh, [gas](const Vec3& x) {
      const double rho = 1.0 + (std::cos(2 * x[0]) + std::cos(2 * x[1])) * (std::cos(2 * x[2]) + 2.0) / 16.0;
      const Vec3 V{std::sin(x[0]) * std::cos(x[1]) * std::cos(x[2]), -std::cos(x[0]) * std::sin(x[1]) * std::cos(x[2]),
                   0.0};
      return from_primitive(rho, V, rho * gas.R * 1.0, gas);
    });
  } else if (cfg.caseId == "riemann_1d") {
    const auto L = cfg.left, R = cfg.right;
    const double x0 = cfg.x0;
    s.U0 = project(s.mesh, [=](const Vec3& x) {
      const auto& q = x[0] < x0 ? L : R;
      return from_primitive(q[0], Vec3{q[1], 0.0, 0.0}, q[2], gas);
    });
  } else if (cfg.caseId == "shock_diffraction_coarse") {
    const double g = gas.gamma, M = cfg.shockMach;
    const double rho1 = g, p1 = 1.0, c1 = 1.0;  // T1 = 1/gamma with R = 1
    const double rho2 = rho1 * (g + 1.0) * M * M / ((g - 1.0) * M * M + 2.0);
    const double p2 = p1 * (2.0 * g * M * M - (g - 1.0)) / (g + 1.0);
    const double u2 = 2.0 / (g + 1.0) * (M - 1.0 / M) * c1;
    const State post = from_primitive(rho2, Vec3{u2, 0.0, 0.0}, p2, gas);
    const State pre = from_primitive(rho1, Vec3{0.0, 0.0, 0.0}, p1, gas);
    const double xs = std::max(1, static_cast<int>(std::lround(cfg.K[0] / 13.0))) / static_cast<double>(cfg.K[0]);
    s.U0 = project(s.mesh, [=](const Vec3& x) { return x[0] < xs ? post : pre; });
    s.bc.farfield = [post](const Vec3&, double) { return post; };
  } else {
    auto ex = s.exact;
    s.U0 = project(s.mesh, [ex](const Vec3& x) { return ex(x, 0.0); });
  }
  return s;
}

}  // namespace ppes
