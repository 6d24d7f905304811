#include "gq/dynamics.hpp"

#include <cmath>

namespace gq {

FlowMap::FlowMap(const KahlerModel& m, const RationalSymbol& h)
    : model_(&m), h_(h) {
  require(h.is_real(), "FlowMap: generator must be real");
  a_ = hamilton_plus(m, h);
  da_dz_ = a_.dz();
  da_dzb_ = a_.dzbar();
  // Rotation flows: a = i w(zbar z) z with real w. Detect symbolically.
  RationalSymbol s = a_ / (RationalSymbol::z() * kI);
  RationalSymbol euler = RationalSymbol::z() * s.dz() - RationalSymbol::zbar() * s.dzbar();
  if (euler.is_zero(1e-10) && s.is_real(1e-10)) {
    closed_form_ = true;
    RationalSymbol sp = s.dz();
    omega_of_r2_ = [s](double u) {
      double r = std::sqrt(u);
      return s.eval(r, r).real();
    };
    domega_dr2_ = [sp](double u) {
      double r = std::sqrt(std::max(u, 1e-14));
      return (sp.eval(r, r) / r).real();
    };
    preserving_ = s.dz().is_zero(1e-10);
  }
}

Complex FlowMap::velocity(Complex z) const { return a_.eval(z, std::conj(z)); }

std::pair<Complex, Complex> FlowMap::evolve(double t, Complex x) const {
  if (closed_form_) {
    double u = std::norm(x);
    double w = omega_of_r2_(u);
    double wp = (u > 1e-13) ? domega_dr2_(u) : 0.0;
    Complex zt = std::polar(1.0, w * t) * x;
    Complex jac = std::polar(1.0, w * t) * (Complex(1.0) + kI * t * u * wp);
    return {zt, jac};
  }
  // RK4 on (z, dz^t/dz, dz^t/dzbar).
  int steps = std::max(64, int(std::ceil(std::abs(t) * 256)));
  double dt = t / steps;
  Complex z = x, u1 = 1.0, u2 = 0.0;
  auto rhs = [this](Complex z, Complex u1, Complex u2) {
    Complex zb = std::conj(z);
    Complex a = a_.eval(z, zb);
    Complex az = da_dz_.eval(z, zb), azb = da_dzb_.eval(z, zb);
    return std::array<Complex, 3>{a, az * u1 + azb * std::conj(u2),
                                  az * u2 + azb * std::conj(u1)};
  };
  for (int i = 0; i < steps; ++i) {
    auto k1 = rhs(z, u1, u2);
    auto k2 = rhs(z + 0.5 * dt * k1[0], u1 + 0.5 * dt * k1[1], u2 + 0.5 * dt * k1[2]);
    auto k3 = rhs(z + 0.5 * dt * k2[0], u1 + 0.5 * dt * k2[1], u2 + 0.5 * dt * k2[2]);
    auto k4 = rhs(z + dt * k3[0], u1 + dt * k3[1], u2 + dt * k3[2]);
    z += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    u1 += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    u2 += dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
  }
  return {z, u1};
}

TrajectoryCocycle trajectory_cocycles(const KahlerModel& m, const FlowMap& flow,
                                      double t, Complex x, int nq) {
  TrajectoryCocycle out;
  auto [zt, jac] = flow.evolve(t, x);
  Complex ztb = std::conj(zt), xb = std::conj(x);
  double detg0 = m.detg().eval(x, xb).real();
  double detgt = m.detg().eval(zt, ztb).real();
  out.delta_t = std::abs(jac) * std::sqrt(detgt / detg0);

  // nu^tau = -(1/2) Im(d/dtau ln J) - (1/2) Im(dz(ln det g) zdot), and the
  // trajectory part of the membrane action; both by quadrature along the
  // trajectory (closed-form flows make the integrand cheap).
  auto gl = gauss_legendre(nq, 0.0, t);
  double nu_int = 0.0, traj = 0.0;
  for (int i = 0; i < nq; ++i) {
    double tau = gl.nodes[i];
    auto [zs, js] = flow.evolve(tau, x);
    Complex zsb = std::conj(zs);
    Complex zdot = flow.velocity(zs);
    // d/dtau ln J by a short central difference on the Jacobian phase.
    double h = std::max(1e-6, 1e-6 * std::abs(t));
    auto [zp, jp] = flow.evolve(tau + h, x);
    auto [zm, jm] = flow.evolve(std::max(tau - h, 0.0), x);
    double span = (tau - h < 0.0) ? (tau + h) : 2.0 * h;
    Complex dlnj = (std::log(jp) - std::log(jm)) / span;
    double nu = -0.5 * dlnj.imag() -
                0.5 * (m.dz_log_detg().eval(zs, zsb) * zdot).imag();
    nu_int += nu * gl.weights[i];
    traj += (m.dz_phi().eval(zs, zsb) * zdot).imag() * gl.weights[i];
  }
  out.nu_integral = nu_int;
  if (t == 0.0) {
    out.action = 0.0;
    out.delta_t = 1.0;
    out.nu_integral = 0.0;
    return out;
  }
  Complex quadr = m.phi(xb, zt) - 0.5 * m.phi(xb, x) - 0.5 * m.phi(ztb, zt);
  out.action = quadr - kI * traj;
  return out;
}

CauchyResult cauchy_evolve(const StarEngine& eng, const RationalSymbol& h, double t,
                           const Vec& f0, int steps) {
  const KahlerModel& m = eng.model();
  HTensor ht = hh_tensor(m, h);
  require(ht.cls != FiltrationClass::kOther, "cauchy_evolve: class 1 or 2 required");
  if (ht.cls == FiltrationClass::kOne || t == 0.0) return {f0, 0.0};

  FlowMap flow(m, h);
  const SymbolBasis& basis = eng.basis();
  const Grid2D& grid = eng.grid();
  HolDiffOp d0 = conjugate_by_density_sqrt(dee_op(m, h), m.mprime_density());

  // D^t(H)_{++} on the basis: the diagonal-time operator conjugated by the
  // flow, (D^t g)(x) = [D0 (g o gamma^{-t})](gamma^t x). For the bundled
  // rotation flows (rate w(u) = c u, u = zbar z) the pullback of a basis
  // monomial zbar^mm z^nn only shifts the weight exponent by -i(nn-mm) c t,
  // so D0 still applies symbolically; the result is sampled at the flowed
  // points and projected back onto the basis.
  RationalSymbol rate = hamilton_plus(m, h) / (RationalSymbol::z() * kI);
  RationalSymbol rate_slope = rate.dz();  // = c zbar for w = c u
  RationalSymbol check = rate_slope - RationalSymbol::zbar() * rate_slope.eval(1.0, 1.0);
  require(check.is_zero(1e-10),
          "cauchy_evolve: class-2 evolution implemented for linear rotation rates");
  double c = rate_slope.eval(1.0, 1.0).real();

  auto dmat = [&](double tt) {
    const int d = basis.dim();
    Mat out(d, d);
    Vec cache(grid.size());
    for (int j = 0; j < d; ++j) {
      auto [mm, nn] = basis.labels[j];
      WeightedSymbol pulled = basis.elems[j];
      pulled.expc += Complex(0.0, -double(nn - mm) * c * tt);
      WeightedSymbol dw = apply_op(d0, pulled);
      for (size_t a = 0; a < grid.size(); ++a) {
        auto [zt, jac] = flow.evolve(tt, grid.z[a]);
        (void)jac;
        cache(a) = dw.eval_diag(zt);
      }
      out.col(j) = eng.project_grid(cache);
    }
    return out;
  };

  auto run = [&](int nsteps) {
    Vec f = f0;
    double dt = t / nsteps;
    for (int i = 0; i < nsteps; ++i) {
      double tmid = (i + 0.5) * dt;
      Mat x = Complex(0.0, -1.0) * dt * m.hbar() * dmat(tmid);
      // 4th-order Taylor exponential (steps are small).
      Mat e = Mat::Identity(x.rows(), x.cols());
      Mat term = e;
      for (int k = 1; k <= 4; ++k) {
        term = (term * x) / double(k);
        e += term;
      }
      f = e * f;
    }
    return f;
  };

  Vec f1 = run(steps);
  Vec f2 = run(2 * steps);
  return {f2, (f1 - f2).norm()};
}

Mat graph_transform(const ReferenceQuantization& ref, const KahlerModel& m,
                    const FlowMap& flow, double t,
                    const std::function<Complex(Complex)>& g, const Grid2D& grid) {
  const int d = ref.dim();
  Mat acc = Mat::Zero(d, d);
  for (size_t a = 0; a < grid.size(); ++a) {
    Complex x = grid.z[a];
    Complex xb = std::conj(x);
    double dm = m.m_density().eval(x, xb).real() * grid.wA[a];
    TrajectoryCocycle c = trajectory_cocycles(m, flow, t, x);
    auto [zt, jac] = flow.evolve(t, x);
    (void)jac;
    // Phase: trajectory part of the membrane action + nu + dynamical phase.
    Complex traj_phase = c.action - (m.phi(xb, zt) - 0.5 * m.phi(xb, x) -
                                     0.5 * m.phi(std::conj(zt), zt));
    Complex hval = flow.generator().eval(x, xb);
    Complex amp = std::exp(traj_phase - kI * c.nu_integral - kI * t * hval / m.hbar()) *
                  std::sqrt(c.delta_t);
    acc.noalias() += (g(x) * amp * dm) *
                     (ref.normalized_ket(zt) * ref.normalized_ket(x).adjoint());
  }
  return acc;
}

EvolutionReport evolution_formula(const ReferenceQuantization& ref, const StarEngine& eng,
                                  const RationalSymbol& h, double t, const Vec& f0,
                                  const Grid2D& grid) {
  const KahlerModel& m = eng.model();
  FlowMap flow(m, h);
  HTensor ht = hh_tensor(m, h);
  RationalSymbol hq = (ht.cls == FiltrationClass::kOne)
                          ? quantum_deformation(m, h)
                          : secondary_deformation(m, h);
  Mat hhat = ref.quantize(hq, grid);
  hhat = 0.5 * (hhat + hhat.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(hhat);
  Mat prop = es.eigenvectors() *
             (es.eigenvalues().array() * Complex(0.0, -t / m.hbar())).exp().matrix().asDiagonal() *
             es.eigenvectors().adjoint();

  CauchyResult ft = cauchy_evolve(eng, h, t, f0);
  auto fval = [&](Complex z) { return eng.eval_coeffs(f0, z); };
  auto ftval = [&](Complex z) { return eng.eval_coeffs(ft.coeffs, z); };
  Mat fhat = ref.quantize(fval, grid);
  Mat lhs = prop * fhat;
  Mat rhs = graph_transform(ref, m, flow, t, ftval, grid);
  Mat rhs0 = graph_transform(ref, m, flow, 0.0, fval, grid);

  EvolutionReport rep;
  double scale = std::max(operator_norm(fhat), 1e-30);
  rep.discrepancy = operator_norm(lhs - rhs) / scale;
  rep.t0_identity = operator_norm(fhat - rhs0) / scale;
  return rep;
}

TraceReport trace_formula(const ReferenceQuantization& ref, const KahlerModel& m,
                          const RationalSymbol& h, double t,
                          const std::function<Complex(Complex)>& f,
                          const std::function<Complex(Complex)>& ft,
                          const Grid2D& grid) {
  FlowMap flow(m, h);
  Mat hdef = ref.quantize(quantum_deformation(m, h), grid);
  hdef = 0.5 * (hdef + hdef.adjoint());
  Mat hraw = ref.quantize(h, grid);
  hraw = 0.5 * (hraw + hraw.adjoint());
  Mat fhat = ref.quantize(f, grid);

  auto propagate_trace = [&](const Mat& hh) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hh);
    Vec ph = (es.eigenvalues().array() * Complex(0.0, -t / m.hbar())).exp().matrix();
    Mat prop = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    return (prop * fhat).trace();
  };

  TraceReport rep;
  rep.lhs = propagate_trace(hdef);
  rep.lhs_raw = propagate_trace(hraw);

  Complex acc = 0.0, acc_simple = 0.0;
  for (size_t a = 0; a < grid.size(); ++a) {
    Complex x = grid.z[a], xb = std::conj(x);
    double dm = m.m_density().eval(x, xb).real() * grid.wA[a];
    TrajectoryCocycle c = trajectory_cocycles(m, flow, t, x);
    Complex hval = h.eval(x, xb);
    Complex common = std::exp(c.action - kI * c.nu_integral - kI * t * hval / m.hbar());
    acc += common * std::sqrt(c.delta_t) * ft(x) * dm;
    acc_simple += common * f(x) * dm;
  }
  rep.rhs = acc;
  rep.rhs_simplified = acc_simple;
  rep.rel_error = std::abs(rep.lhs - rep.rhs) / std::max(std::abs(rep.lhs), 1e-30);
  return rep;
}

}  // namespace gq
