#include "gq/lagrangian.hpp"

#include <cmath>

namespace gq {

LambdaGrid::LambdaGrid(const KahlerModel& m, const LagrangianLoop& loop, double pinv_tol)
    : model_(&m), loop_(&loop), mloop_(loop.size()) {
  require(loop.admissible(1e-6), "LambdaGrid: loop violates the quantization condition");
  w_ = RealVec(mloop_);
  double da = 2.0 * kPi / mloop_;
  for (int i = 0; i < mloop_; ++i) w_(i) = loop.sigma(i) * da;

  a_ = Mat(mloop_, mloop_);
  for (int i = 0; i < mloop_; ++i)
    for (int j = 0; j < mloop_; ++j) {
      Amplitude amp = transition_nodes(loop, i, j);
      a_(i, j) = amp.zero ? Complex(0.0) : amp.value;
    }
  RealVec ws = w_.cwiseSqrt();
  a_tilde_ = ws.cast<Complex>().asDiagonal() * a_ * ws.cast<Complex>().asDiagonal();
  a_tilde_ = 0.5 * (a_tilde_ + a_tilde_.adjoint());
  apinv_ = hermitian_pinv(a_tilde_, pinv_tol);
  rank_ = apinv_.rank;
  bframe_ = apinv_.basis;
  dspec_ = fourier_diff_matrix(mloop_);
}

RealVec LambdaGrid::a_eigenvalues() const { return apinv_.eigvals; }

Vec LambdaGrid::k_vector(const PhasePoint& x) const {
  const KahlerModel& m = *model_;
  Vec v(mloop_);
  Complex xb = std::conj(x.coord);
  Complex phix = m.phi(xb, x.coord);
  for (int i = 0; i < mloop_; ++i) {
    Complex zi = loop_->z(i), zib = std::conj(zi);
    try {
      Complex lv = m.phi(zib, x.coord) - 0.5 * m.phi(zib, zi) - 0.5 * phix +
                   kI * loop_->action(i) + 0.5 * std::log(loop_->modular(i));
      v(i) = std::exp(lv);
    } catch (const SingularAmplitude&) {
      v(i) = 0.0;
    }
  }
  return v;
}

Vec LambdaGrid::c_vector(const PhasePoint& x) const {
  Vec v = k_vector(x);
  Vec vw = w_.cwiseSqrt().cast<Complex>().cwiseProduct(v);
  return bframe_.adjoint() * vw;
}

Mat LambdaGrid::build_c(const PhasePoint& x) const {
  Vec vt = c_vector(x);
  return vt * vt.adjoint();
}

Mat LambdaGrid::to_cframe(const Mat& node_op) const {
  RealVec ws = w_.cwiseSqrt();
  Mat t = ws.cast<Complex>().asDiagonal() * node_op * ws.cwiseInverse().cast<Complex>().asDiagonal();
  return bframe_.adjoint() * a_tilde_ * t * bframe_;
}

Vec LambdaGrid::phi_to_cframe(const Vec& phi) const {
  Vec pw = w_.cwiseSqrt().cast<Complex>().cwiseProduct(phi);
  return bframe_.adjoint() * a_tilde_ * pw;
}

Vec LambdaGrid::cframe_to_phi(const Vec& c) const {
  Vec pw = bframe_ * c;
  return w_.cwiseSqrt().cwiseInverse().cast<Complex>().cwiseProduct(pw);
}

Mat LambdaGrid::quantize_fn(const std::function<Complex(Complex)>& h,
                            const Grid2D& grid) const {
  Mat acc = Mat::Zero(rank_, rank_);
  const KahlerModel& m = *model_;
  for (size_t a = 0; a < grid.size(); ++a) {
    Complex z = grid.z[a];
    double dm = m.m_density().eval(z, std::conj(z)).real() * grid.wA[a];
    Vec vt = c_vector(PhasePoint{0, z});
    acc.noalias() += (h(z) * dm) * (vt * vt.adjoint());
  }
  return acc;
}

Mat LambdaGrid::quantize(const RationalSymbol& h, const Grid2D& grid) const {
  return quantize_fn([&h](Complex z) { return h.eval(z, std::conj(z)); }, grid);
}

Mat LambdaGrid::identity_check(const Grid2D& grid) const {
  return quantize_fn([](Complex) { return Complex(1.0); }, grid);
}

Mat LambdaGrid::node_op_weyl(const RationalSymbol& h, int degree) const {
  const KahlerModel& m = *model_;
  Realization real = holomorphic_realization(m, h, degree);
  // xi_Lambda = dF(alpha) + (hbar/2) dtilde(ln q) - hbar dtilde, with
  // dtilde = (dz/dalpha)^{-1} d/dalpha; the q^(±1/2) conjugation is
  // expanded into the (hbar/2) dtilde(ln q) shift, which keeps the
  // operator single-valued on loops where q winds.
  Vec zl(mloop_), qv(mloop_);
  for (int i = 0; i < mloop_; ++i) {
    zl(i) = loop_->z(i);
    qv(i) = loop_->q(i);
  }
  Vec qp = dspec_ * qv;
  Mat dtilde = Mat::Zero(mloop_, mloop_);
  for (int i = 0; i < mloop_; ++i) dtilde.row(i) = dspec_.row(i) / loop_->dz(i);
  Mat xihat = -m.hbar() * dtilde;
  for (int i = 0; i < mloop_; ++i) {
    Complex zb = std::conj(zl(i));
    Complex dlnq = qp(i) / (qv(i) * loop_->dz(i));  // dtilde ln q
    xihat(i, i) += m.dz_F().eval(zl(i), zb) + 0.5 * m.hbar() * dlnq;
  }
  Mat zmul = zl.asDiagonal();
  // Weyl average of the insertion positions, degree <= 2.
  Mat op = Mat::Zero(mloop_, mloop_);
  std::vector<Mat> xipow{Mat::Identity(mloop_, mloop_), xihat, xihat * xihat};
  for (int k = 0; k <= real.h.degree(); ++k) {
    if (real.h.coeff[k].is_zero(0.0)) continue;
    Mat cdiag = Mat::Zero(mloop_, mloop_);
    for (int i = 0; i < mloop_; ++i)
      cdiag(i, i) = real.h.coeff[k].eval(zl(i), std::conj(zl(i)));
    Mat sym = Mat::Zero(mloop_, mloop_);
    for (int j = 0; j <= k; ++j) sym += xipow[j] * cdiag * xipow[k - j];
    op += sym / double(k + 1);
  }
  return op;
}

Mat LambdaGrid::weyl_realization(const RationalSymbol& h, int degree) const {
  require(degree <= 2, "weyl_realization: degree > 2 not implemented");
  return to_cframe(node_op_weyl(h, degree));
}

Mat LambdaGrid::reduced_first_order(const RationalSymbol& h) const {
  const KahlerModel& m = *model_;
  HTensor t = hh_tensor(m, h);
  require(t.cls == FiltrationClass::kOne, "reduced_first_order: class-1 symbol required");
  RationalSymbol a = hamilton_plus(m, h);
  Vec v(mloop_), hl(mloop_);
  RealVec sig(mloop_);
  for (int i = 0; i < mloop_; ++i) {
    Complex z = loop_->z(i), zb = std::conj(z);
    Complex dz = loop_->dz(i);
    require(std::abs(dz) > 1e-14, "reduced_first_order: singular frame");
    v(i) = a.eval(z, zb) / dz;
    hl(i) = h.eval(z, zb);
    sig(i) = loop_->sigma(i);
  }
  // div^sigma v = (1/sigma) d(sigma v)/dalpha.
  Vec sv = sig.cast<Complex>().cwiseProduct(v);
  Vec dsv = dspec_ * sv;
  Mat op = hl.asDiagonal();
  op += Complex(0.0, -m.hbar()) * (v.asDiagonal() * dspec_);
  for (int i = 0; i < mloop_; ++i)
    op(i, i) += Complex(0.0, -0.5 * m.hbar()) * dsv(i) / sig(i);
  return to_cframe(op);
}

Mat LambdaGrid::reduced_second_order(const RationalSymbol& h) const {
  const KahlerModel& m = *model_;
  HTensor t = hh_tensor(m, h);
  require(t.cls == FiltrationClass::kTwo && t.invertible,
          "reduced_second_order: class-2 symbol with invertible HH required");
  // First-order part as in Eq. (8) (without the class-1 gate).
  RationalSymbol a = hamilton_plus(m, h);
  Vec v(mloop_), hl(mloop_), hh(mloop_), dhh(mloop_), d2hh(mloop_), dlnq(mloop_);
  RealVec sig(mloop_);
  RationalSymbol hp = t.value.dz(), hpp = hp.dz();
  Vec qv(mloop_);
  for (int i = 0; i < mloop_; ++i) qv(i) = loop_->q(i);
  Vec qp = dspec_ * qv;
  for (int i = 0; i < mloop_; ++i) {
    Complex z = loop_->z(i), zb = std::conj(z);
    Complex dz = loop_->dz(i);
    v(i) = a.eval(z, zb) / dz;
    hl(i) = h.eval(z, zb);
    hh(i) = t.value.eval(z, zb);
    require(std::abs(hh(i)) > 1e-12, "reduced_second_order: HH vanishes on the loop");
    dhh(i) = hp.eval(z, zb);
    d2hh(i) = hpp.eval(z, zb);
    dlnq(i) = qp(i) / (qv(i) * dz);
    sig(i) = loop_->sigma(i);
  }
  Vec sv = sig.cast<Complex>().cwiseProduct(v);
  Vec dsv = dspec_ * sv;
  Mat op = hl.asDiagonal();
  op += Complex(0.0, -m.hbar()) * (v.asDiagonal() * dspec_);
  for (int i = 0; i < mloop_; ++i)
    op(i, i) += Complex(0.0, -0.5 * m.hbar()) * dsv(i) / sig(i);

  // hbar^2 q^(1/2) Dtilde(H) q^(-1/2): the second-order loop operator with
  // HH|_Lambda and dtilde in place of HH and d (conjugation by q^(1/2)
  // shifts dtilde by -(1/2) dtilde ln q). Same -(1/2)-normalized D as the
  // ambient dee_op.
  Mat dtilde = Mat::Zero(mloop_, mloop_);
  for (int i = 0; i < mloop_; ++i) dtilde.row(i) = dspec_.row(i) / loop_->dz(i);
  Mat dshift = dtilde - 0.5 * Mat(dlnq.asDiagonal());
  Mat dee = -0.5 * Mat(hh.asDiagonal()) * dshift * dshift -
            0.5 * Mat(dhh.asDiagonal()) * dshift;
  for (int i = 0; i < mloop_; ++i)
    dee(i, i) += -d2hh(i) / 8.0 + dhh(i) * dhh(i) / (32.0 * hh(i));
  op += m.hbar() * m.hbar() * dee;
  return to_cframe(op);
}

}  // namespace gq
