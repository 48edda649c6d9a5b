#include "ppes/time_integrator.hpp"

#include <algorithm>
#include <cmath>

#include "ppes/limiter.hpp"

namespace ppes {

double stable_dt(const Mesh& mesh, const Field& U, const GasModel& gas, const AvFields* av,
                 const StepController& ctl, double c_rho) {
  const int np = mesh.npts();
  const double pc = std::pow(mesh.p + 1.0, ctl.convectiveFactor);
  const double pd = std::pow(mesh.p + 1.0, ctl.diffusiveFactor);
  double dt = ctl.dtMax;
  for (const auto& e : mesh.elements)
    for (int pt = 0; pt < np; ++pt) {
      const Primitive q = primitive(State::from(U.data() + (e.id * np + pt) * kNv), gas, e.id, pt);
      const double speed = std::sqrt(dot3(q.V, q.V)) + q.c;
      if (!std::isfinite(speed)) throw InadmissibleState(State::from(U.data() + (e.id * np + pt) * kNv), e.id, pt);
      dt = std::min(dt, e.h / (speed * pc));
      double nu = gas.mu(q.T) / q.rho * std::max(4.0 / 3.0, gas.gamma / gas.Pr);
      if (av && !av->empty()) {
        const double m = std::max(av->mu[e.id * np + pt], av->muP[e.id * np + pt]);
        nu += m / q.rho * (4.0 / 3.0 + 2.0 * c_rho);
      }
      if (nu > 0.0) dt = std::min(dt, e.h * e.h / (nu * pd));
    }
  return ctl.cfl * dt;
}

void ssp_rk3(Field& u, double t, double dt, const EulerMap& euler) {
  // convex combinations in increment form u + c (v - u): the rounding error then
  // scales with the stage increment instead of with u
  Field a, b;
  euler(u, t, dt, a);
  euler(a, t + dt, dt, b);
  for (std::size_t i = 0; i < u.size(); ++i) b[i] = u[i] + 0.25 * (b[i] - u[i]);
  euler(b, t + 0.5 * dt, dt, a);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += 2.0 / 3.0 * (a[i] - u[i]);
}

void field_minima(const Field& U, const GasModel& gas, double& minRho, double& minT) {
  minRho = std::numeric_limits<double>::infinity();
  minT = minRho;
  for (std::size_t i = 0; i < U.size(); i += kNv) {
    const State s = State::from(U.data() + i);
    minRho = std::min(minRho, s.rho);
    const double ie = internal_energy(s);
    minT = std::min(minT, (gas.gamma - 1.0) * ie / (s.rho * gas.R));
  }
}

Integrator::Integrator(Discretization& disc, StepController ctl, ThetaMode mode, std::uint64_t seed)
    : disc_(disc), ctl_(ctl), mode_(mode), rng_(seed) {
  const std::size_t ne = disc.mesh().elements.size();
  theta_.assign(ne, 1.0);
  if (mode_ == ThetaMode::RandomFixed) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    fixedTheta_.resize(ne);
    for (double& v : fixedTheta_) v = u(rng_);
  }
}

void Integrator::max_pressure_jumps(const Field& U1, std::vector<double>& out) const {
  const Mesh& mesh = disc_.mesh();
  const TensorOps& ops = mesh.ops;
  const GasModel& gas = disc_.gas();
  const int np = mesh.npts();
  out.assign(mesh.elements.size(), 0.0);
  auto pressure = [&](long e, int pt) {
    return (gas.gamma - 1.0) * internal_energy(State::from(U1.data() + (e * np + pt) * kNv));
  };
  for (const auto& e : mesh.elements)
    for (int d = 0; d < 3; ++d) {
      if (!ops.active(d)) continue;
      const int st = d == 0 ? 1 : (d == 1 ? ops.n[0] : ops.n[0] * ops.n[1]);
      for (int pt = 0; pt < np; ++pt) {
        if ((pt / st) % ops.n[d] + 1 >= ops.n[d]) continue;
        out[e.id] = std::max(out[e.id], relative_pressure_jump(pressure(e.id, pt), pressure(e.id, pt + st)));
      }
    }
  for (const Face& f : mesh.faces)
    for (std::size_t q = 0; q < f.perm.size(); ++q) {
      const double j = relative_pressure_jump(pressure(f.elemL, mesh.face_node(f.faceL, static_cast<int>(q))),
                                              pressure(f.elemR, mesh.face_node(f.faceR, f.perm[q])));
      out[f.elemL] = std::max(out[f.elemL], j);
      out[f.elemR] = std::max(out[f.elemR], j);
    }
}

void Integrator::euler_substep(const Field& U, double t, double dt, Field& out) {
  const Mesh& mesh = disc_.mesh();
  const Scheme scheme = disc_.options().scheme;
  const std::size_t ne = mesh.elements.size();
  const int np = mesh.npts();
  const std::size_t blk = static_cast<std::size_t>(np) * kNv;
  stage_ = StageStats{};

  disc_.prepare(U, t);
  disc_.inviscid_high(rhsP_);
  out.resize(U.size());

  if (scheme == Scheme::ESSC) {
    disc_.parabolic(nullptr, par_);
    for (std::size_t i = 0; i < U.size(); ++i) out[i] = U[i] + dt * (rhsP_[i] + par_[i]);
    std::fill(theta_.begin(), theta_.end(), 1.0);
    stageBoundary_ = disc_.boundary_flux_rate();
    return;
  }
  disc_.inviscid_low(rhs1_);

  av_.Sn.assign(ne, 0.0);
  av_.muMax.assign(ne, 0.0);
  if (scheme == Scheme::PPESAD && randomAvMax_ < 0.0) disc_.sensor(rhsP_, av_);
  for (double s : av_.Sn) stage_.maxSn = std::max(stage_.maxSn, s);
  av_.limited.assign(ne, 0);
  std::vector<std::uint8_t> rescueFlags(ne, 0);
  bool anyRescue = false;

  if (randomAvMax_ >= 0.0) {
    std::uniform_real_distribution<double> u(0.0, randomAvMax_);
    av_.muP.resize(ne * np);
    av_.mu.resize(ne * np);
    for (std::size_t i = 0; i < av_.mu.size(); ++i) {
      av_.muP[i] = u(rng_);
      av_.mu[i] = av_.muP[i] + u(rng_);
    }
  }

  std::vector<double> jumps;
  const int maxPasses = 6;
  for (int pass = 0; pass < maxPasses; ++pass) {
    stage_.passes = pass + 1;
    if (randomAvMax_ < 0.0) smooth_and_split(mesh, av_);
    disc_.parabolic(&av_, par_);
    if (anyRescue) disc_.rescue(av_, rescueFlags, sig_);
    U1_.resize(U.size());
    Up_.resize(U.size());
    for (std::size_t i = 0; i < U.size(); ++i) {
      const double s = anyRescue ? sig_[i] : 0.0;
      U1_[i] = U[i] + dt * (rhs1_[i] + s + par_[i]);
      Up_[i] = U[i] + dt * (rhsP_[i] + par_[i]);
    }
    if (mode_ != ThetaMode::Computed) {
      if (mode_ == ThetaMode::RandomFixed) {
        theta_ = fixedTheta_;
      } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& v : theta_) v = u(rng_);
      }
      break;
    }

    bool changed = false;
    long bad = -1;
    for (std::size_t k = 0; k < ne; ++k)
      for (int pt = 0; pt < np; ++pt)
        if (!admissible(State::from(U1_.data() + k * blk + pt * kNv))) {
          // first-order-only AD in the element, then density rescue
          if (!av_.limited[k] && randomAvMax_ < 0.0) {
            av_.limited[k] = 1;
            changed = true;
          } else if (!rescueFlags[k]) {
            rescueFlags[k] = 1;
            anyRescue = true;
            changed = true;
          } else {
            bad = static_cast<long>(k);
          }
          break;
        }
    if (changed) continue;
    if (bad >= 0) {
      for (int pt = 0; pt < np; ++pt) {
        const State s = State::from(U1_.data() + bad * blk + pt * kNv);
        if (!admissible(s)) throw InadmissibleState(s, bad, pt);
      }
    }

    max_pressure_jumps(U1_, jumps);
    for (std::size_t k = 0; k < ne; ++k) {
      const double al = aleph(av_.Sn[k], jumps[k]);
      theta_[k] = limit_element(U1_.data() + k * blk, Up_.data() + k * blk, np, al).theta;
      if (theta_[k] < 1.0 && !av_.limited[k]) {
        av_.limited[k] = 1;
        changed = true;
      }
    }
    if (!changed) break;
  }

  stageBoundary_ = disc_.boundary_flux_rate();
  for (std::size_t k = 0; k < ne; ++k) {
    const double th = theta_[k];
    for (std::size_t i = k * blk; i < (k + 1) * blk; ++i)
      out[i] = th == 1.0 ? Up_[i] : U1_[i] + th * (Up_[i] - U1_[i]);
    if (th < 1.0) ++stage_.limited;
    stage_.minTheta = std::min(stage_.minTheta, th);
    if (rescueFlags[k]) ++stage_.rescued;
  }
  if (mode_ == ThetaMode::Computed)
    for (std::size_t k = 0; k < ne; ++k)
      for (int pt = 0; pt < np; ++pt) {
        const State s = State::from(out.data() + k * blk + pt * kNv);
        if (!admissible(s)) throw InadmissibleState(s, static_cast<long>(k), pt);
      }
}

double Integrator::step(Field& U, double t, double dt) {
  stats_ = StepStats{};
  for (int attempt = 0;; ++attempt) {
    Field trial = U;
    StepStats acc;
    int sub = 0;
    try {
      ssp_rk3(trial, t, dt, [&](const Field& u, double ts, double h, Field& o) {
        euler_substep(u, ts, h, o);
        static constexpr double kWeights[3] = {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0};
        for (int c = 0; c < kNv; ++c) acc.boundaryFlux[c] += h * kWeights[sub] * stageBoundary_[c];
        ++sub;
        acc.limited = std::max(acc.limited, stage_.limited);
        acc.minTheta = std::min(acc.minTheta, stage_.minTheta);
        acc.maxSn = std::max(acc.maxSn, stage_.maxSn);
      });
      field_minima(trial, disc_.gas(), acc.minRho, acc.minT);
      if (!(acc.minRho > 0.0 && acc.minT > 0.0)) throw InadmissibleState(State{}, -1, -1);
    } catch (const InadmissibleState&) {
      if (attempt >= ctl_.maxRetries || dt * ctl_.retryFactor < ctl_.dtMin) throw;
      dt *= ctl_.retryFactor;
      continue;
    }
    U.swap(trial);
    acc.dt = dt;
    acc.retries = attempt;
    stats_ = acc;
    return dt;
  }
}

}  // namespace ppes
