#include "gq/starprod.hpp"

#include <cmath>

namespace gq {

WeightedSymbol apply_op(const HolDiffOp& op, const WeightedSymbol& f) {
  WeightedSymbol out{RationalSymbol(0.0), f.expc};
  WeightedSymbol der = f;
  for (int k = 0; k <= op.order(); ++k) {
    if (k > 0) der = der.dz();
    if (!op.coeff(k).is_zero(0.0)) out.r = out.r + op.coeff(k) * der.r;
  }
  return out;
}

SymbolBasis covariant_basis(const KahlerModel& m, int nmax) {
  require(nmax >= 0, "covariant_basis: nmax >= 0");
  SymbolBasis b;
  if (m.name() == "plane") {
    double hb = m.hbar();
    for (int mm = 0; mm <= nmax; ++mm)
      for (int nn = 0; nn <= nmax; ++nn) {
        double lognorm = 0.0;
        for (int k = 1; k <= mm; ++k) lognorm += std::log(hb * k);
        for (int k = 1; k <= nn; ++k) lognorm += std::log(hb * k);
        Complex c = std::exp(-0.5 * lognorm);
        b.elems.push_back({RationalSymbol(Poly2::monomial(nn, mm, c), Poly2::constant(1.0)),
                           Complex(-1.0 / hb, 0.0)});
        b.labels.emplace_back(mm, nn);
      }
  } else {
    int n = m.level_n();
    require(nmax <= n, "covariant_basis: sphere basis capped at N");
    Poly2 den = Poly2::constant(1.0);
    Poly2 d1 = Poly2::constant(1.0) + Poly2::monomial(1, 1, 1.0);
    for (int k = 0; k < n; ++k) den = den * d1;
    auto logc = [n](int k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += std::log(double(n - j + 1) / j);
      return s;
    };
    for (int mm = 0; mm <= nmax; ++mm)
      for (int nn = 0; nn <= nmax; ++nn) {
        Complex c = std::exp(0.5 * (logc(mm) + logc(nn)));
        b.elems.push_back({RationalSymbol(Poly2::monomial(nn, mm, c), den), Complex(0.0)});
        b.labels.emplace_back(mm, nn);
      }
  }
  return b;
}

StarEngine::StarEngine(const KahlerModel& m, const SymbolBasis& basis, const Grid2D& grid,
                       double pinv_tol)
    : model_(&m), basis_(&basis), grid_(grid) {
  const int g = int(grid_.size());
  const int d = basis_->dim();
  kn_ = Mat(g, g);
  Vec diag_phi(g);
  for (int a = 0; a < g; ++a)
    diag_phi(a) = m.phi(std::conj(grid_.z[a]), grid_.z[a]);
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) {
      if (m.singular(std::conj(grid_.z[a]), grid_.z[b])) {
        kn_(a, b) = 0.0;
        continue;
      }
      kn_(a, b) = std::exp(m.phi(std::conj(grid_.z[a]), grid_.z[b]) -
                           0.5 * diag_phi(a) - 0.5 * diag_phi(b));
    }

  dmw_ = Vec(g);
  for (int a = 0; a < g; ++a) {
    Complex zb = std::conj(grid_.z[a]);
    dmw_(a) = m.m_density().eval(grid_.z[a], zb).real() * grid_.wA[a];
  }

  // Completeness residual of axiom (3). On the plane the gate is taken over
  // the interior (the Gaussian ball around boundary nodes leaves the cutoff
  // disk); basis integrands themselves decay well before the cutoff.
  completeness_ = 0.0;
  double interior = (m.name() == "plane") ? grid_.radius - 4.0 * std::sqrt(m.hbar()) : -1.0;
  for (int a = 0; a < g; ++a) {
    if (interior > 0.0 && std::abs(grid_.z[a]) > interior) continue;
    double s = 0.0;
    for (int b = 0; b < g; ++b) s += std::norm(kn_(a, b)) * dmw_(b).real();
    completeness_ = std::max(completeness_, std::abs(s - 1.0));
  }
  require(completeness_ < 1e-6,
          "build_engine: completeness residual too large (grid or model misconfigured)");

  ev_ = Mat(g, d);
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < g; ++a)
      ev_(a, i) = basis_->elems[i].eval_diag(grid_.z[a]);

  gram_ = ev_.adjoint() * dmw_.asDiagonal() * ev_;
  Mat pker(g, g);
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) pker(a, b) = std::norm(kn_(a, b));
  Mat pe = pker * (dmw_.asDiagonal() * ev_);
  p_ = ev_.adjoint() * (dmw_.asDiagonal() * pe);
  p_ = 0.5 * (p_ + p_.adjoint());
  p_pinv_ = hermitian_pinv(p_, pinv_tol);
  gram_pinv_ = hermitian_pinv(gram_, 1e-13);
  p_rank_ = p_pinv_.rank;
}

Vec StarEngine::grid_values(const Vec& coef) const { return ev_ * coef; }

Vec StarEngine::project_values(const Vec& vals) const {
  return gram_pinv_.pinv * (ev_.adjoint() * (dmw_.asDiagonal() * vals));
}

Vec StarEngine::star(const Vec& f, const Vec& g) const {
  Vec fv = grid_values(f), gv = grid_values(g);
  Vec fw = fv.cwiseProduct(dmw_), gw = gv.cwiseProduct(dmw_);
  Mat m1 = kn_ * gw.asDiagonal() * kn_;
  Mat m2 = kn_ * fw.asDiagonal();
  Vec r = (m2.cwiseProduct(m1.transpose())).rowwise().sum();
  Vec rhs = ev_.adjoint() * (dmw_.asDiagonal() * r);
  return p_pinv_.pinv * rhs;
}

Complex StarEngine::hilbert_inner(const Vec& f, const Vec& g) const {
  return (g.adjoint() * (p_ * f))(0, 0);
}

Mat StarEngine::left_mult_star(const Vec& h) const {
  // B(h (x) g)(w) = sum_x [kn diag(h dm) kn](w,x) kn(x,w) (g dm)(x): one
  // kernel build, then the map g -> h*g is a linear operator on the basis.
  Vec hw = grid_values(h).cwiseProduct(dmw_);
  Mat t = kn_ * hw.asDiagonal() * kn_;
  Mat lk = t.cwiseProduct(kn_.transpose());
  return p_pinv_.pinv * (ev_.adjoint() * (dmw_.asDiagonal() * lk) * (dmw_.asDiagonal() * ev_));
}

Mat StarEngine::left_mult_star_fn(const std::function<Complex(Complex)>& h) const {
  Vec hw(grid_.size());
  for (size_t a = 0; a < grid_.size(); ++a) hw(a) = h(grid_.z[a]) * dmw_(a);
  Mat t = kn_ * hw.asDiagonal() * kn_;
  Mat lk = t.cwiseProduct(kn_.transpose());
  return p_pinv_.pinv * (ev_.adjoint() * (dmw_.asDiagonal() * lk) * (dmw_.asDiagonal() * ev_));
}

Mat StarEngine::right_mult_star(const Vec& g) const {
  // r(w) = sum_y [kn .* M1^T](w,y) (f dm)(y) with M1 = kn diag(g dm) kn.
  Vec gw = grid_values(g).cwiseProduct(dmw_);
  Mat m1 = kn_ * gw.asDiagonal() * kn_;
  Mat rk = kn_.cwiseProduct(m1.transpose());
  return p_pinv_.pinv * (ev_.adjoint() * (dmw_.asDiagonal() * rk) * (dmw_.asDiagonal() * ev_));
}

Mat StarEngine::project_op(const HolDiffOp& op) const {
  const int d = basis_->dim();
  const int g = int(grid_.size());
  Mat vals(g, d);
  for (int i = 0; i < d; ++i) {
    WeightedSymbol w = apply_op(op, basis_->elems[i]);
    for (int a = 0; a < g; ++a) vals(a, i) = w.eval_diag(grid_.z[a]);
  }
  return gram_pinv_.pinv * (ev_.adjoint() * (dmw_.asDiagonal() * vals));
}

Mat StarEngine::left_mult_theorem1(const RationalSymbol& h, int degree) const {
  return project_op(left_mult_op(*model_, h, degree));
}

Mat StarEngine::left_mult_theorem2(const RationalSymbol& h, Theorem2Case c) const {
  return project_op(left_mult_theorem2_op(*model_, h, c));
}

Vec StarEngine::expand(const std::function<Complex(Complex)>& f) const {
  Vec vals(grid_.size());
  for (size_t a = 0; a < grid_.size(); ++a) vals(a) = f(grid_.z[a]);
  return project_values(vals);
}

Vec StarEngine::expand(const RationalSymbol& f) const {
  return expand([&f](Complex z) { return f.eval(z, std::conj(z)); });
}

Vec StarEngine::project_grid(const Vec& grid_values) const {
  return project_values(grid_values);
}

Complex StarEngine::eval_coeffs(const Vec& coef, Complex z) const {
  Complex acc = 0.0;
  for (int i = 0; i < basis_->dim(); ++i)
    acc += coef(i) * basis_->elems[i].eval_diag(z);
  return acc;
}

double StarEngine::coeff_norm(const Vec& coef) const {
  return std::sqrt(std::abs((coef.adjoint() * (gram_ * coef))(0, 0)));
}

Vec expand_in_basis(const SymbolBasis& basis, const KahlerModel& m, const Grid2D& g,
                    const std::function<Complex(Complex)>& f) {
  const int d = basis.dim();
  Mat ev(g.size(), d);
  Vec dmw(g.size()), vals(g.size());
  for (size_t a = 0; a < g.size(); ++a) {
    Complex zb = std::conj(g.z[a]);
    dmw(a) = m.m_density().eval(g.z[a], zb).real() * g.wA[a];
    vals(a) = f(g.z[a]);
    for (int i = 0; i < d; ++i) ev(a, i) = basis.elems[i].eval_diag(g.z[a]);
  }
  Mat gram = ev.adjoint() * dmw.asDiagonal() * ev;
  return hermitian_pinv(gram, 1e-13).pinv * (ev.adjoint() * (dmw.asDiagonal() * vals));
}

}  // namespace gq
