#include "gq/coherent.hpp"

#include <cmath>

namespace gq {

int ReferenceQuantization::plane_truncation_for(double rmax, double hbar) {
  double lambda = rmax * rmax / hbar;
  return int(std::ceil(lambda + 12.0 * std::sqrt(lambda + 4.0) + 24.0));
}

ReferenceQuantization ReferenceQuantization::build(const KahlerModel& m,
                                                   int plane_truncation) {
  ReferenceQuantization r;
  r.model_ = &m;
  double hb = m.hbar();
  if (m.name() == "plane") {
    int nt = plane_truncation > 0 ? plane_truncation
                                  : plane_truncation_for(m.plane_cutoff(48), hb);
    r.dim_ = nt + 1;
    r.lower_ = Mat::Zero(r.dim_, r.dim_);
    for (int k = 1; k < r.dim_; ++k) r.lower_(k - 1, k) = std::sqrt(hb * k);
    r.raise_m_ = r.lower_.adjoint();
    r.jz_ = Mat::Zero(r.dim_, r.dim_);
  } else {
    int n = m.level_n();
    r.dim_ = n + 1;
    r.lower_ = Mat::Zero(r.dim_, r.dim_);  // J-
    r.raise_m_ = Mat::Zero(r.dim_, r.dim_);
    r.jz_ = Mat::Zero(r.dim_, r.dim_);
    for (int k = 0; k <= n; ++k) {
      r.jz_(k, k) = hb * (k - 0.5 * n);
      if (k < n) r.raise_m_(k + 1, k) = hb * std::sqrt(double((k + 1) * (n - k)));
      if (k > 0) r.lower_(k - 1, k) = hb * std::sqrt(double(k * (n - k + 1)));
    }
  }
  return r;
}

Vec ReferenceQuantization::normalized_ket(Complex x) const {
  Vec v(dim_);
  double hb = model_->hbar();
  if (model_->name() == "plane") {
    // n_k = x^k / sqrt(hbar^k k!) * exp(-|x|^2 / 2 hbar), by stable recursion.
    v(0) = std::exp(-0.5 * std::norm(x) / hb);
    for (int k = 1; k < dim_; ++k) v(k) = v(k - 1) * x / std::sqrt(hb * k);
  } else {
    int n = model_->level_n();
    v(0) = std::pow(1.0 + std::norm(x), -0.5 * n);
    for (int k = 1; k < dim_; ++k)
      v(k) = v(k - 1) * x * std::sqrt(double(n - k + 1) / double(k));
  }
  return v;
}

Mat ReferenceQuantization::projector(Complex x) const {
  Vec v = normalized_ket(x);
  return v * v.adjoint();
}

Complex ReferenceQuantization::overlap_normalized(Complex xbra, Complex yket) const {
  return normalized_ket(xbra).dot(normalized_ket(yket));
}

Mat ReferenceQuantization::quantize(const std::function<Complex(Complex)>& f,
                                    const Grid2D& g) const {
  // K diag(f dm) K^dagger with K columns the normalized kets.
  Mat kets(dim_, g.size());
  Vec w(g.size());
  for (size_t k = 0; k < g.size(); ++k) {
    kets.col(k) = normalized_ket(g.z[k]);
    Complex zb = std::conj(g.z[k]);
    w(k) = f(g.z[k]) * model_->m_density().eval(g.z[k], zb).real() * g.wA[k];
  }
  return kets * w.asDiagonal() * kets.adjoint();
}

Mat ReferenceQuantization::quantize(const RationalSymbol& f, const Grid2D& g) const {
  return quantize([&f](Complex z) { return f.eval(z, std::conj(z)); }, g);
}

Vec ReferenceQuantization::apply_quantized(const std::function<Complex(Complex)>& f,
                                           const Grid2D& g, const Vec& u) const {
  Vec out = Vec::Zero(dim_);
  for (size_t k = 0; k < g.size(); ++k) {
    Vec ket = normalized_ket(g.z[k]);
    Complex zb = std::conj(g.z[k]);
    Complex w = f(g.z[k]) * model_->m_density().eval(g.z[k], zb).real() * g.wA[k];
    out.noalias() += (w * ket.dot(u)) * ket;
  }
  return out;
}

Mat ReferenceQuantization::annihilator(Complex z) const {
  if (model_->name() == "plane")
    return lower_ - z * Mat::Identity(dim_, dim_);
  // (J- + z^2 J+ - hbar N z) ket(z) = 0 on the spin sphere.
  double hbn = model_->hbar() * model_->level_n();
  return lower_ + z * z * raise_m_ - hbn * z * Mat::Identity(dim_, dim_);
}

CoherentFamily connection_and_transport(const ReferenceQuantization& ref,
                                        const LagrangianLoop& loop) {
  const int m = loop.size();
  const int dim = ref.dim();
  CoherentFamily fam;
  fam.e = Mat(dim, m);
  fam.u = Mat(dim, m);
  fam.wsigma = RealVec(m);
  double ann = 0.0, fid = 1.0;
  // Annihilator scale is node-independent on the circle families.
  double ascale = std::max(1e-30, operator_norm(ref.annihilator(loop.z(0))));
  for (int i = 0; i < m; ++i) {
    // Parallel translation of the vacuum reduces to the scalar phase
    // -S(alpha) on the coherent line bundle; S is the loop's cumulative
    // action phase (see conventions.hpp).
    Vec e = std::polar(1.0, -loop.action(i)) * ref.normalized_ket(loop.z(i));
    fam.e.col(i) = e;
    fam.u.col(i) = std::sqrt(loop.modular(i)) * e;
    fam.wsigma(i) = loop.sigma(i) * 2.0 * kPi / m;
    ann = std::max(ann, (ref.annihilator(loop.z(i)) * e).norm() / ascale);
    // Dominant eigenvector of P(alpha) is the coherent ray itself.
    Complex ov = ref.normalized_ket(loop.z(i)).dot(e);
    fid = std::min(fid, std::norm(ov));
  }
  fam.annihilation_residual = ann;
  fam.projector_fidelity = fid;
  fam.holonomy_scalar = std::polar(1.0, -2.0 * kPi * loop.winding());
  fam.holonomy_defect = std::abs(fam.holonomy_scalar - Complex(1.0));
  return fam;
}

Vec coherent_transform(const CoherentFamily& fam, const Vec& phi_nodes) {
  require(phi_nodes.size() == fam.u.cols(), "coherent_transform: node mismatch");
  return fam.u * (fam.wsigma.cast<Complex>().asDiagonal() * phi_nodes);
}

namespace {

double loop_winding(const KahlerModel& m, double r, int nodes) {
  LagrangianLoop l(m, circle_loop(m, r), nodes);
  return l.winding();
}

// Winding is monotone increasing in the radius for both bundled families.
double solve_winding(const KahlerModel& m, double target, double start, int nodes) {
  double lo = start, hi = start;
  if (loop_winding(m, lo, nodes) > target) {
    while (loop_winding(m, lo, nodes) > target && lo > 1e-7) lo *= 0.7;
    hi = lo / 0.7;
  } else {
    while (loop_winding(m, hi, nodes) < target && hi < 1e6) hi *= 1.4;
    lo = hi / 1.4;
  }
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (loop_winding(m, mid, nodes) < target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double clamp_winding_target(const KahlerModel& m, double k, int nodes) {
  if (loop_winding(m, 1e-5, nodes) > k) k = std::ceil(loop_winding(m, 1e-5, nodes));
  if (m.name() == "sphere") {
    double wmax = loop_winding(m, 1e4, nodes);
    if (k > wmax) k = std::floor(wmax);
  }
  return k;
}

}  // namespace

double admissible_radius(const KahlerModel& m, double target_radius, int loop_nodes) {
  double k = std::round(loop_winding(m, target_radius, loop_nodes));
  k = clamp_winding_target(m, k, loop_nodes);
  return solve_winding(m, k, target_radius, loop_nodes);
}

double admissible_radius_next(const KahlerModel& m, double r_from, int loop_nodes) {
  double k = std::round(loop_winding(m, r_from, loop_nodes)) + 1.0;
  k = clamp_winding_target(m, k, loop_nodes);
  return solve_winding(m, k, r_from, loop_nodes);
}

QuasimodeSweep quasimode_sweep(const std::string& model_name,
                               const std::vector<double>& hbars,
                               const std::vector<double>& model_params,
                               const std::string& preset, double target_radius,
                               int loop_nodes) {
  QuasimodeSweep out;
  std::vector<double> hs, res, res_def;
  for (double hb : hbars) {
    // Sphere sweeps hold the level kappa = (N+1) hbar fixed while N grows.
    KahlerModel m = model_name == "sphere"
                        ? make_model("sphere", hb,
                                     {std::round(model_params.at(0) / hb) - 1.0})
                        : make_model("plane", hb, {});
    RationalSymbol h = preset_symbol(m, preset);
    double r = admissible_radius(m, target_radius, loop_nodes);
    LagrangianLoop loop(m, circle_loop(m, r), loop_nodes);
    int nt = m.name() == "plane"
                 ? ReferenceQuantization::plane_truncation_for(r + 6.5 * std::sqrt(hb), hb)
                 : 0;
    ReferenceQuantization ref = ReferenceQuantization::build(m, nt);
    CoherentFamily fam = connection_and_transport(ref, loop);
    Vec ones = Vec::Ones(loop.size());
    Vec u = coherent_transform(fam, ones);

    int na = 128;
    if (m.name() == "plane") {
      na = std::max(128, int(std::ceil(2.6 * r * r / hb)));
      na += na % 2;
    }
    Grid2D grid = m.name() == "plane"
                      ? m.grid(128, na, r + 6.5 * std::sqrt(hb))
                      : m.default_grid();
    RationalSymbol hdef = quantum_deformation(m, h);
    auto hfn = [&h](Complex z) { return h.eval(z, std::conj(z)); };
    auto hdeffn = [&hdef](Complex z) { return hdef.eval(z, std::conj(z)); };

    double lambda0 = h.eval_diag(loop.z(0)).real();
    double un = u.norm();
    double r1 = (ref.apply_quantized(hfn, grid, u) - lambda0 * u).norm() / un;
    double r2 = (ref.apply_quantized(hdeffn, grid, u) - lambda0 * u).norm() / un;
    double nr = un * un / loop.arc_length();
    out.rows.push_back({hb, r, lambda0, r1, r2, nr});
    hs.push_back(hb);
    res.push_back(r1);
    res_def.push_back(r2);
  }
  if (hs.size() >= 2) {
    out.slope = loglog_slope(hs, res);
    out.slope_deformed = loglog_slope(hs, res_def);
  }
  return out;
}

}  // namespace gq
