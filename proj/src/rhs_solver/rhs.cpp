#include "ppes/rhs.hpp"

#include <algorithm>
#include <cmath>

#include "ppes/fluxes.hpp"

namespace ppes {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::ESSC: return "ESSC";
    case Scheme::PPES: return "PPES";
    case Scheme::PPESAD: return "PPESAD";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& s) {
  if (s == "ESSC") return Scheme::ESSC;
  if (s == "PPES") return Scheme::PPES;
  if (s == "PPESAD") return Scheme::PPESAD;
  throw ConfigError("unknown scheme: " + s);
}

namespace {

int line_stride(const TensorOps& ops, int d) { return d == 0 ? 1 : (d == 1 ? ops.n[0] : ops.n[0] * ops.n[1]); }

Vec3 metric(const Element& e, int pt, int l) {
  const double* a = e.a(pt, l);
  return {a[0], a[1], a[2]};
}

// Signed tangential quadrature weight of a face point (+ on the xi = +1 face).
double face_weight(const Mesh& mesh, int f, int pt) {
  const OperatorSet& o = *mesh.ops.op[f / 2];
  const double w = mesh.ops.weights[pt] / (f % 2 ? o.P[o.N - 1] : o.P[0]);
  return f % 2 ? w : -w;
}

// Scale an accumulated P-weighted residual by 1/J into out.
void finish_element(const Element& e, int np, const std::vector<double>& hat, double* out) {
  for (int pt = 0; pt < np; ++pt) {
    const double s = 1.0 / e.J[pt];
    for (int c = 0; c < kNv; ++c) out[pt * kNv + c] = hat[pt * kNv + c] * s;
  }
}

}  // namespace

Discretization::Discretization(const Mesh& mesh, const GasModel& gas, RhsOptions opts, BoundaryData bc)
    : mesh_(&mesh), gas_(gas), opts_(opts), bc_(std::move(bc)), npts_(mesh.npts()) {
  gas_.validate();
  std::size_t off = 0;
  for (int f = 0; f < kFaces; ++f) {
    faceStart_[f] = off;
    off += static_cast<std::size_t>(mesh.face_points(f / 2)) * kNv;
  }
  faceBlock_ = off;
  links_.assign(mesh.elements.size() * kFaces, Link{});
  for (const Face& fc : mesh.faces) {
    Link& l = links_[fc.elemL * kFaces + fc.faceL];
    l.nbr = fc.elemR;
    l.nbrFace = fc.faceR;
    l.perm = fc.perm;
    Link& r = links_[fc.elemR * kFaces + fc.faceR];
    r.nbr = fc.elemL;
    r.nbrFace = fc.faceL;
    r.perm.assign(fc.perm.size(), 0);
    for (std::size_t q = 0; q < fc.perm.size(); ++q) r.perm[fc.perm[q]] = static_cast<int>(q);
  }
  for (std::size_t b = 0; b < mesh.boundaryFaces.size(); ++b) {
    const Face& fc = mesh.boundaryFaces[b];
    links_[fc.elemL * kFaces + fc.faceL].boundary = static_cast<long>(b);
  }
  for (const auto& e : mesh.elements)
    for (int f = 0; f < kFaces; ++f) {
      if (!mesh.active(f / 2)) continue;
      const Link& l = links_[e.id * kFaces + f];
      if (l.nbr < 0 && l.boundary < 0) throw MeshError("element face without neighbour or boundary condition");
      if (l.boundary >= 0 && e.bc[f] == Bc::FarField && !bc_.farfield)
        throw ConfigError("far-field boundary present but no far-field state given");
    }
}

State Discretization::ghost(const Element& e, int f, int q, const State& own, double t) const {
  const int pt = mesh_->face_node(f, q);
  switch (e.bc[f]) {
    case Bc::FarField: {
      const Vec3 x{e.x[pt * 3], e.x[pt * 3 + 1], e.x[pt * 3 + 2]};
      return bc_.farfield(x, t);
    }
    case Bc::NoSlipWall: {
      State g = own;
      g.m = {-own.m[0], -own.m[1], -own.m[2]};
      return g;
    }
    case Bc::SlipWall: {
      const Vec3 a = metric(e, pt, f / 2);
      const double an = std::sqrt(dot3(a, a));
      const Vec3 n{a[0] / an, a[1] / an, a[2] / an};
      const double mn = dot3(own.m, n);
      State g = own;
      for (int k = 0; k < 3; ++k) g.m[k] -= 2.0 * mn * n[k];
      return g;
    }
    case Bc::Outflow: return own;
  }
  return own;
}

Vec5 Discretization::inviscid_face_flux(const State& L, const State& R, const Vec3& n) const {
  if (opts_.entropyConservative) return ec_flux_n(L, R, n, gas_);
  return merriam_roe_flux(L, R, gas_, n);
}

void Discretization::prepare(const Field& U, double t) {
  require(U.size() == field_size(), "prepare: field size mismatch");
  U_ = &U;
  t_ = t;
  const Mesh& mesh = *mesh_;
  w_.resize(U.size());
  for (const auto& e : mesh.elements)
    for (int pt = 0; pt < npts_; ++pt) {
      const State s = State::from(point(U, e.id, pt));
      if (!admissible(s)) throw InadmissibleState(s, e.id, pt);
      const Vec5 w = entropy_vars(s, gas_).w;
      std::copy(w.begin(), w.end(), w_.begin() + (e.id * npts_ + pt) * kNv);
    }

  const std::size_t nf = mesh.elements.size() * faceBlock_;
  traceU_.assign(nf, 0.0);
  traceW_.assign(nf, 0.0);
  faceFlux_.assign(nf, 0.0);
  boundaryInviscid_ = Vec5{};
  boundaryParabolic_ = Vec5{};
  for (const auto& e : mesh.elements)
    for (int f = 0; f < kFaces; ++f) {
      const int d = f / 2;
      if (!mesh.active(d)) continue;
      const Link& l = links_[e.id * kFaces + f];
      double* tu = traceU_.data() + face_offset(e.id, f);
      double* tw = traceW_.data() + face_offset(e.id, f);
      for (int q = 0; q < mesh.face_points(d); ++q) {
        if (l.nbr >= 0) {
          const int np = mesh.face_node(l.nbrFace, l.perm[q]);
          std::copy_n(point(U, l.nbr, np), kNv, tu + q * kNv);
          std::copy_n(w_.data() + (l.nbr * npts_ + np) * kNv, kNv, tw + q * kNv);
        } else {
          const State own = State::from(point(U, e.id, mesh.face_node(f, q)));
          const State g = ghost(e, f, q, own, t);
          if (!admissible(g)) throw InadmissibleState(g, e.id, mesh.face_node(f, q));
          g.store(tu + q * kNv);
          const Vec5 w = entropy_vars(g, gas_).w;
          std::copy(w.begin(), w.end(), tw + q * kNv);
        }
      }
    }

  for (const Face& fc : mesh.faces) {
    const Element& L = mesh.elements[fc.elemL];
    const int d = fc.faceL / 2;
    double* fl = faceFlux_.data() + face_offset(fc.elemL, fc.faceL);
    double* fr = faceFlux_.data() + face_offset(fc.elemR, fc.faceR);
    for (int q = 0; q < static_cast<int>(fc.perm.size()); ++q) {
      const int pl = mesh.face_node(fc.faceL, q);
      const int pr = mesh.face_node(fc.faceR, fc.perm[q]);
      const Vec5 F = inviscid_face_flux(State::from(point(U, fc.elemL, pl)), State::from(point(U, fc.elemR, pr)),
                                        metric(L, pl, d));
      std::copy(F.begin(), F.end(), fl + q * kNv);
      std::copy(F.begin(), F.end(), fr + fc.perm[q] * kNv);
    }
  }
  for (const Face& fc : mesh.boundaryFaces) {
    const Element& e = mesh.elements[fc.elemL];
    const int d = fc.faceL / 2;
    const double* tu = traceU_.data() + face_offset(e.id, fc.faceL);
    double* ff = faceFlux_.data() + face_offset(e.id, fc.faceL);
    for (int q = 0; q < mesh.face_points(d); ++q) {
      const int pt = mesh.face_node(fc.faceL, q);
      const State own = State::from(point(U, e.id, pt));
      const State g = State::from(tu + q * kNv);
      const Vec3 n = metric(e, pt, d);
      const Vec5 F = (fc.faceL % 2) ? inviscid_face_flux(own, g, n) : inviscid_face_flux(g, own, n);
      std::copy(F.begin(), F.end(), ff + q * kNv);
      const double wq = face_weight(mesh, fc.faceL, pt);
      for (int c = 0; c < kNv; ++c) boundaryInviscid_[c] += wq * F[c];
    }
  }
}

void Discretization::inviscid_high(Field& out) const {
  require(U_ != nullptr, "inviscid_high: prepare() not called");
  const Mesh& mesh = *mesh_;
  const TensorOps& ops = mesh.ops;
  out.assign(field_size(), 0.0);
  std::vector<double> hat(npts_ * kNv);
  std::vector<State> line;
  std::vector<Vec3> met;
  for (const auto& e : mesh.elements) {
    std::fill(hat.begin(), hat.end(), 0.0);
    for (int d = 0; d < 3; ++d) {
      if (!ops.active(d)) continue;
      const OperatorSet& o = *ops.op[d];
      const int N = o.N, st = line_stride(ops, d);
      line.resize(N);
      met.resize(N);
      const double* f0 = faceFlux_.data() + face_offset(e.id, 2 * d);
      const double* f1 = faceFlux_.data() + face_offset(e.id, 2 * d + 1);
      for (int q = 0; q < mesh.face_points(d); ++q) {
        const int base = mesh.face_node(2 * d, q);
        for (int i = 0; i < N; ++i) {
          line[i] = State::from(point(*U_, e.id, base + i * st));
          met[i] = metric(e, base + i * st, d);
        }
        std::vector<Vec5> fb = telescoped_volume_flux(o, line, met, gas_);
        for (int c = 0; c < kNv; ++c) {
          fb[0][c] = f0[q * kNv + c];
          fb[N][c] = f1[q * kNv + c];
        }
        for (int i = 0; i < N; ++i)
          for (int c = 0; c < kNv; ++c) hat[(base + i * st) * kNv + c] -= o.Pinv[i] * (fb[i + 1][c] - fb[i][c]);
      }
    }
    finish_element(e, npts_, hat, out.data() + e.id * npts_ * kNv);
  }
}

void Discretization::inviscid_low(Field& out) const {
  require(U_ != nullptr, "inviscid_low: prepare() not called");
  const Mesh& mesh = *mesh_;
  const TensorOps& ops = mesh.ops;
  out.assign(field_size(), 0.0);
  std::vector<double> hat(npts_ * kNv);
  std::vector<State> line;
  std::vector<Vec3> met;
  std::vector<Vec5> fb;
  for (const auto& e : mesh.elements) {
    std::fill(hat.begin(), hat.end(), 0.0);
    for (int d = 0; d < 3; ++d) {
      if (!ops.active(d)) continue;
      const OperatorSet& o = *ops.op[d];
      const int N = o.N, st = line_stride(ops, d);
      line.resize(N);
      met.resize(N);
      fb.resize(N + 1);
      const double* f0 = faceFlux_.data() + face_offset(e.id, 2 * d);
      const double* f1 = faceFlux_.data() + face_offset(e.id, 2 * d + 1);
      for (int q = 0; q < mesh.face_points(d); ++q) {
        const int base = mesh.face_node(2 * d, q);
        for (int i = 0; i < N; ++i) {
          line[i] = State::from(point(*U_, e.id, base + i * st));
          met[i] = metric(e, base + i * st, d);
        }
        const std::vector<Vec3> abar = flux_point_metrics(o, met);
        for (int i = 1; i < N; ++i) fb[i] = inviscid_face_flux(line[i - 1], line[i], abar[i]);
        for (int c = 0; c < kNv; ++c) {
          fb[0][c] = f0[q * kNv + c];
          fb[N][c] = f1[q * kNv + c];
        }
        for (int i = 0; i < N; ++i)
          for (int c = 0; c < kNv; ++c) hat[(base + i * st) * kNv + c] -= o.Pinv[i] * (fb[i + 1][c] - fb[i][c]);
      }
    }
    finish_element(e, npts_, hat, out.data() + e.id * npts_ * kNv);
  }
}

void Discretization::face_ad(const AvFields& av, long eid, int f, Vec5* out) const {
  const Mesh& mesh = *mesh_;
  const int d = f / 2;
  const OperatorSet& o = *mesh.ops.op[d];
  const Link& l = links_[eid * kFaces + f];
  const double c_rho = opts_.av.c_rho;
  AdConstants ad{c_rho};
  const double delta = o.P[0];
  const Element& me = mesh.elements[eid];
  for (int q = 0; q < mesh.face_points(d); ++q) {
    const int pt = mesh.face_node(f, q);
    // orient the pair along +xi_d; the element owning the low side supplies the metric
    long eL = eid, eR = l.nbr;
    int ptL = pt, ptR = -1;
    if (l.nbr >= 0) ptR = mesh.face_node(l.nbrFace, l.perm[q]);
    const bool mineIsLeft = (f % 2) == 1;
    State sMe = State::from(point(*U_, eid, pt));
    State sOther = State::from(traceU_.data() + face_offset(eid, f) + q * kNv);
    double muMe = av.mu[eid * npts_ + pt] - av.muP[eid * npts_ + pt];
    double muOther = l.nbr >= 0 ? av.mu[l.nbr * npts_ + ptR] - av.muP[l.nbr * npts_ + ptR] : muMe;
    const bool chi = av.limited[eid] || (l.nbr >= 0 && av.limited[l.nbr]);
    const State& sL = mineIsLeft ? sMe : sOther;
    const State& sR = mineIsLeft ? sOther : sMe;
    Vec3 a;
    double Jbar;
    if (l.nbr >= 0) {
      if (!mineIsLeft) {
        std::swap(eL, eR);
        std::swap(ptL, ptR);
      }
      a = metric(mesh.elements[eL], ptL, d);
      Jbar = 0.5 * (mesh.elements[eL].J[ptL] + mesh.elements[eR].J[ptR]);
    } else {
      a = metric(me, pt, d);
      Jbar = me.J[pt];
    }
    const double muBar = std::max(std::max(muMe, muOther), 0.0);
    const double an2 = dot3(a, a);
    const double smin = chi ? sigma_min(sL, sR, a, Jbar, delta, gas_) : 0.0;
    const double sb = sigma_bar(chi, smin, muBar, sL.rho, sR.rho, c_rho);
    Vec5 F = low_order_viscous_flux(sL, sR, a, Jbar, delta, muBar, gas_, ad);
    const Vec5 M = low_order_mass_diffusion(sL, sR, sb, an2 / (Jbar * delta));
    for (int c = 0; c < kNv; ++c) F[c] += M[c];
    out[q] = F;
  }
}

void Discretization::parabolic(const AvFields* av, Field& out) {
  require(U_ != nullptr, "parabolic: prepare() not called");
  const Mesh& mesh = *mesh_;
  const TensorOps& ops = mesh.ops;
  out.assign(field_size(), 0.0);
  boundaryParabolic_ = Vec5{};
  const bool useAv = av != nullptr && !av->empty();
  bool anyMuP = false;
  if (useAv)
    for (double v : av->muP)
      if (v > 0.0) {
        anyMuP = true;
        break;
      }
  const bool highOrder = gas_.viscous() || anyMuP;
  if (!highOrder && !useAv) return;

  const std::size_t ne = mesh.elements.size();
  if (highOrder) {
    theta_.resize(ne * npts_ * 15);
    fhat_.resize(ne * 3 * npts_ * kNv);
    for (const auto& e : mesh.elements) {
      std::array<const double*, kFaces> tr{};
      for (int f = 0; f < kFaces; ++f)
        if (mesh.active(f / 2)) tr[f] = traceW_.data() + face_offset(e.id, f);
      double* th = theta_.data() + e.id * npts_ * 15;
      ldg_gradient(mesh, e, w_.data() + e.id * npts_ * kNv, tr, th);
      double* fh = fhat_.data() + e.id * 3 * npts_ * kNv;
      for (int pt = 0; pt < npts_; ++pt) {
        const Primitive q = primitive(State::from(point(*U_, e.id, pt)), gas_, e.id, pt);
        ViscousCoeffs c = physical_coeffs(q, gas_);
        if (useAv) c += brenner_coeffs(q, av->muP[e.id * npts_ + pt], gas_, AdConstants{opts_.av.c_rho});
        Grad g;
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < kNv; ++k) g[j][k] = th[pt * 15 + 5 * j + k];
        const Grad F = viscous_flux(q, g, c);
        for (int l = 0; l < 3; ++l) {
          const Vec5 fl = contract(metric(e, pt, l), F);
          std::copy(fl.begin(), fl.end(), fh + (l * npts_ + pt) * kNv);
        }
      }
    }
  }

  std::vector<double> hat(npts_ * kNv);
  std::vector<Vec5> faceAd;
  std::vector<double> mb;
  for (const auto& e : mesh.elements) {
    std::fill(hat.begin(), hat.end(), 0.0);
    for (int d = 0; d < 3; ++d) {
      if (!ops.active(d)) continue;
      const OperatorSet& o = *ops.op[d];
      const int N = o.N, st = line_stride(ops, d);
      const int nq = mesh.face_points(d);
      if (highOrder) {
        const double* fh = fhat_.data() + (e.id * 3 + d) * npts_ * kNv;
        ops.apply_derivative_acc(d, fh, hat.data(), kNv, 1.0);
        for (int side = 0; side < 2; ++side) {
          const int f = 2 * d + side;
          const Link& l = links_[e.id * kFaces + f];
          if (l.nbr < 0) {
            for (int q = 0; q < nq; ++q) {
              const int pt = mesh.face_node(f, q);
              const double wq = face_weight(mesh, f, pt);
              for (int c = 0; c < kNv; ++c) boundaryParabolic_[c] += wq * fh[pt * kNv + c];
            }
            continue;
          }
          const int nd = l.nbrFace / 2;
          const double* fn = fhat_.data() + (l.nbr * 3 + nd) * npts_ * kNv;
          const double w = side ? o.Pinv[N - 1] : -o.Pinv[0];
          for (int q = 0; q < nq; ++q) {
            const int pt = mesh.face_node(f, q);
            const int pn = mesh.face_node(l.nbrFace, l.perm[q]);
            for (int c = 0; c < kNv; ++c) {
              const double own = fh[pt * kNv + c];
              hat[pt * kNv + c] += w * 0.5 * (fn[pn * kNv + c] - own);
            }
          }
        }
      }
      if (useAv) {
        faceAd.resize(2 * nq);
        face_ad(*av, e.id, 2 * d, faceAd.data());
        face_ad(*av, e.id, 2 * d + 1, faceAd.data() + nq);
        for (int side = 0; side < 2; ++side) {
          const int f = 2 * d + side;
          if (links_[e.id * kFaces + f].nbr >= 0) continue;
          for (int q = 0; q < nq; ++q) {
            const double wq = face_weight(mesh, f, mesh.face_node(f, q));
            for (int c = 0; c < kNv; ++c) boundaryParabolic_[c] += wq * faceAd[side * nq + q][c];
          }
        }
        mb.resize(N + 1);
        for (int q = 0; q < nq; ++q) {
          const int base = mesh.face_node(2 * d, q);
          const double* mu = av->mu.data() + e.id * npts_ + base;
          const double* mp = av->muP.data() + e.id * npts_ + base;
          mu_bar_line(N, mu, mp, st, mb.data());
          std::vector<Vec3> met(N);
          for (int i = 0; i < N; ++i) met[i] = metric(e, base + i * st, d);
          const std::vector<Vec3> abar = flux_point_metrics(o, met);
          Vec5 prev = faceAd[q];
          for (int i = 0; i < N; ++i) {
            Vec5 next;
            if (i + 1 < N) {
              const int pa = base + i * st, pb = base + (i + 1) * st;
              const State sa = State::from(point(*U_, e.id, pa));
              const State sb = State::from(point(*U_, e.id, pb));
              const double Jbar = 0.5 * (e.J[pa] + e.J[pb]);
              const double delta = o.nodes[i + 1] - o.nodes[i];
              const double muBar = mb[i + 1];
              next = low_order_viscous_flux(sa, sb, abar[i + 1], Jbar, delta, muBar, gas_,
                                            AdConstants{opts_.av.c_rho});
              const double sg = sigma_bar(false, 0.0, muBar, sa.rho, sb.rho, opts_.av.c_rho);
              const Vec5 M = low_order_mass_diffusion(sa, sb, sg, dot3(abar[i + 1], abar[i + 1]) / (Jbar * delta));
              for (int c = 0; c < kNv; ++c) next[c] += M[c];
            } else {
              next = faceAd[nq + q];
            }
            const int pt = base + i * st;
            for (int c = 0; c < kNv; ++c) hat[pt * kNv + c] += o.Pinv[i] * (next[c] - prev[c]);
            prev = next;
          }
        }
      }
    }
    finish_element(e, npts_, hat, out.data() + e.id * npts_ * kNv);
  }
}

void Discretization::rescue(const AvFields& av, const std::vector<std::uint8_t>& flagged, Field& out) const {
  require(U_ != nullptr, "rescue: prepare() not called");
  const Mesh& mesh = *mesh_;
  const TensorOps& ops = mesh.ops;
  out.assign(field_size(), 0.0);
  std::vector<double> hat(npts_ * kNv);
  std::vector<double> mb;
  for (const auto& e : mesh.elements) {
    if (!flagged[e.id]) continue;
    std::fill(hat.begin(), hat.end(), 0.0);
    for (int d = 0; d < 3; ++d) {
      if (!ops.active(d)) continue;
      const OperatorSet& o = *ops.op[d];
      const int N = o.N, st = line_stride(ops, d);
      mb.resize(N + 1);
      for (int q = 0; q < mesh.face_points(d); ++q) {
        const int base = mesh.face_node(2 * d, q);
        if (av.empty()) std::fill(mb.begin(), mb.end(), 0.0);
        else mu_bar_line(N, av.mu.data() + e.id * npts_ + base, av.muP.data() + e.id * npts_ + base, st, mb.data());
        std::vector<Vec3> met(N);
        for (int i = 0; i < N; ++i) met[i] = metric(e, base + i * st, d);
        const std::vector<Vec3> abar = flux_point_metrics(o, met);
        Vec5 prev{};
        for (int i = 0; i < N; ++i) {
          Vec5 next{};
          if (i + 1 < N) {
            const int pa = base + i * st, pb = base + (i + 1) * st;
            const State sa = State::from(point(*U_, e.id, pa));
            const State sb = State::from(point(*U_, e.id, pb));
            const double Jbar = 0.5 * (e.J[pa] + e.J[pb]);
            const double delta = o.nodes[i + 1] - o.nodes[i];
            const double smin = sigma_min(sa, sb, abar[i + 1], Jbar, delta, gas_);
            const double sb1 = sigma_bar(false, 0.0, mb[i + 1], sa.rho, sb.rho, opts_.av.c_rho);
            next = low_order_mass_diffusion(sa, sb, sigma_hat(smin, sb1),
                                            dot3(abar[i + 1], abar[i + 1]) / (Jbar * delta));
          }
          const int pt = base + i * st;
          for (int c = 0; c < kNv; ++c) hat[pt * kNv + c] += o.Pinv[i] * (next[c] - prev[c]);
          prev = next;
        }
      }
    }
    finish_element(e, npts_, hat, out.data() + e.id * npts_ * kNv);
  }
}

void Discretization::sensor(const Field& rhsInv, AvFields& av) const {
  require(U_ != nullptr, "sensor: prepare() not called");
  const Mesh& mesh = *mesh_;
  const std::size_t ne = mesh.elements.size();
  av.Sn.assign(ne, 0.0);
  av.muMax.assign(ne, 0.0);
  for (const auto& e : mesh.elements) {
    const double* u = point(*U_, e.id, 0);
    const SensorValue s = entropy_residual_sensor(mesh, e, u, rhsInv.data() + e.id * npts_ * kNv, gas_,
                                                  element_scale(mesh, e), opts_.av.delta);
    av.Sn[e.id] = s.Sn;
    if (s.Sn == 0.0) continue;
    std::array<const double*, kFaces> tr{};
    for (int f = 0; f < kFaces; ++f)
      if (mesh.active(f / 2)) tr[f] = traceU_.data() + face_offset(e.id, f);
    av.muMax[e.id] = element_mu_max(mesh, e, u, tr, gas_, opts_.av.C_av);
  }
}

Vec5 Discretization::boundary_flux_rate() const {
  Vec5 r;
  for (int c = 0; c < kNv; ++c) r[c] = boundaryParabolic_[c] - boundaryInviscid_[c];
  return r;
}

void Discretization::rhs_baseline(const Field& U, double t, Field& out) {
  prepare(U, t);
  inviscid_high(out);
  if (gas_.viscous()) {
    Field v;
    parabolic(nullptr, v);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i];
  }
}

void blend(const Mesh& mesh, const Field& rhsP, const Field& rhs1, const Field& rhsAD,
           const std::vector<double>& theta, Field& out) {
  const int np = mesh.npts();
  require(theta.size() == mesh.elements.size(), "blend: one theta per element");
  out.resize(rhsP.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double th = theta[k];
    if (!(th >= 0.0 && th <= 1.0)) throw ContractViolation("blend: theta outside [0, 1]");
    const std::size_t b = k * np * kNv, n = static_cast<std::size_t>(np) * kNv;
    for (std::size_t i = b; i < b + n; ++i) {
      const double inv = th == 1.0 ? rhsP[i] : th * rhsP[i] + (1.0 - th) * rhs1[i];
      out[i] = rhsAD.empty() ? inv : inv + rhsAD[i];
    }
  }
}

Vec5 integrate_conserved(const Mesh& mesh, const Field& u) {
  const int np = mesh.npts();
  std::array<CompensatedSum, kNv> s;
  for (const auto& e : mesh.elements)
    for (int pt = 0; pt < np; ++pt) {
      const double w = mesh.ops.weights[pt] * e.J[pt];
      for (int c = 0; c < kNv; ++c) s[c].add(w * u[(e.id * np + pt) * kNv + c]);
    }
  Vec5 out;
  for (int c = 0; c < kNv; ++c) out[c] = s[c].value();
  return out;
}

double total_entropy(const Mesh& mesh, const Field& U, const GasModel& gas) {
  const int np = mesh.npts();
  CompensatedSum s;
  for (const auto& e : mesh.elements)
    for (int pt = 0; pt < np; ++pt)
      s.add(mesh.ops.weights[pt] * e.J[pt] * entropy(State::from(U.data() + (e.id * np + pt) * kNv), gas));
  return s.value();
}

double entropy_change(const Mesh& mesh, const Field& U0, const Field& U, const GasModel& gas, const Vec5& inflow) {
  const int np = mesh.npts();
  // Subtracting wbar . (sum dU - inflow) is exact (the totals change only through the
  // boundary) and removes the round-off of the conserved totals, which would otherwise
  // enter the change as wbar . dU_total.
  std::array<CompensatedSum, kNv> wm;
  CompensatedSum vol;
  for (const auto& e : mesh.elements)
    for (int pt = 0; pt < np; ++pt) {
      const double pj = mesh.ops.weights[pt] * e.J[pt];
      const Vec5 w = entropy_vars(State::from(U0.data() + (e.id * np + pt) * kNv), gas).w;
      for (int c = 0; c < kNv; ++c) wm[c].add(pj * w[c]);
      vol.add(pj);
    }
  Vec5 wbar;
  for (int c = 0; c < kNv; ++c) wbar[c] = wm[c].value() / vol.value();
  CompensatedSum s;
  for (const auto& e : mesh.elements)
    for (int pt = 0; pt < np; ++pt) {
      const std::size_t o = (e.id * np + pt) * kNv;
      const State a = State::from(U0.data() + o), b = State::from(U.data() + o);
      double d = entropy(b, gas) - entropy(a, gas);
      for (int c = 0; c < kNv; ++c) d -= wbar[c] * (U[o + c] - U0[o + c]);
      s.add(mesh.ops.weights[pt] * e.J[pt] * d);
    }
  double back = 0.0;
  for (int c = 0; c < kNv; ++c) back += wbar[c] * inflow[c];
  return s.value() + back;
}

double entropy_rate(const Mesh& mesh, const Field& U, const Field& rhs, const GasModel& gas) {
  const int np = mesh.npts();
  CompensatedSum s;
  for (const auto& e : mesh.elements)
    for (int pt = 0; pt < np; ++pt) {
      const std::size_t o = (e.id * np + pt) * kNv;
      const Vec5 w = entropy_vars(State::from(U.data() + o), gas).w;
      double d = 0.0;
      for (int c = 0; c < kNv; ++c) d += w[c] * rhs[o + c];
      s.add(mesh.ops.weights[pt] * e.J[pt] * d);
    }
  return s.value();
}

Field project(const Mesh& mesh, const std::function<State(const Vec3&)>& f) {
  const int np = mesh.npts();
  Field U(mesh.elements.size() * np * kNv);
  for (const auto& e : mesh.elements)
    for (int pt = 0; pt < np; ++pt)
      f(Vec3{e.x[pt * 3], e.x[pt * 3 + 1], e.x[pt * 3 + 2]}).store(U.data() + (e.id * np + pt) * kNv);
  return U;
}

}  // namespace ppes
