#include "gq/membrane.hpp"

#include <cmath>

namespace gq {

LoopSpec circle_loop(const KahlerModel& m, double radius) {
  require(radius > 0.0, "circle_loop: radius must be positive");
  double norm = 1.0 / std::sqrt(4.0 * kPi * m.hbar());
  LoopSpec s;
  s.z = [radius](double a) { return std::polar(radius, a); };
  s.dz = [radius](double a) { return kI * std::polar(radius, a); };
  s.sigma_density = [radius, norm](double) { return norm * radius; };
  s.family = (m.name() == "plane") ? "circle" : "latitude";
  s.radius = radius;
  return s;
}

LoopSpec reparametrized_circle(const KahlerModel& m, double radius, double wobble) {
  require(std::abs(wobble) < 0.9, "reparametrized_circle: |wobble| < 0.9");
  LoopSpec s = circle_loop(m, radius);
  double norm = 1.0 / std::sqrt(4.0 * kPi * m.hbar());
  s.sigma_density = [radius, norm, wobble](double a) {
    return norm * radius * (1.0 + wobble * std::cos(a));
  };
  s.family += "-reparam";
  return s;
}

LagrangianLoop::LagrangianLoop(const KahlerModel& m, const LoopSpec& spec, int nodes)
    : model_(&m), spec_(spec), m_(nodes) {
  require(nodes >= 32 && nodes % 2 == 0, "LagrangianLoop: need even M >= 32");
  z_.resize(m_);
  dz_.resize(m_);
  q_.resize(m_);
  sig_.resize(m_);
  nu_.resize(m_);
  delta_.resize(m_);
  act_.resize(m_);

  const double da = 2.0 * kPi / m_;
  for (int i = 0; i < m_; ++i) {
    double a = da * i;
    z_[i] = spec_.z(a);
    dz_[i] = spec_.dz(a);
    sig_[i] = spec_.sigma_density(a);
    require(std::abs(dz_[i]) > 1e-14, "LagrangianLoop: vanishing loop derivative");
    require(sig_[i] > 0.0, "LagrangianLoop: sigma density must be positive");
    q_[i] = dz_[i] / sig_[i];
    arc_ += std::abs(dz_[i]) * da;
    sig_total_ += sig_[i] * da;
  }

  // d(arg q)/dalpha = Im(q'/q), spectrally.
  Mat d = fourier_diff_matrix(m_);
  Vec qv(m_);
  for (int i = 0; i < m_; ++i) qv(i) = q_[i];
  Vec qp = d * qv;

  RealVec integrand(m_);
  for (int i = 0; i < m_; ++i) {
    Complex zb = std::conj(z_[i]);
    double darg = (qp(i) / q_[i]).imag();
    double dlndet = (model_->dz_log_detg().eval(z_[i], zb) * dz_[i]).imag();
    nu_[i] = conv::kNuS1 * 0.5 * darg + conv::kNuS2 * 0.5 * dlndet;
    double detg = model_->detg().eval(z_[i], zb).real();
    delta_[i] = std::abs(q_[i]) * std::sqrt(conv::kDeltaMetricFactor * detg);
    integrand(i) = (model_->dz_phi().eval(z_[i], zb) * dz_[i]).imag() + nu_[i];
  }

  auto [s, mean] = periodic_antiderivative(integrand);
  wind_ = mean;
  for (int i = 0; i < m_; ++i) act_[i] = s(i);
  act_periodic_ = RealVec(m_);
  for (int i = 0; i < m_; ++i) act_periodic_(i) = s(i) - mean * alpha(i);

  RealVec nuv(m_);
  for (int i = 0; i < m_; ++i) nuv(i) = nu_[i];
  nu_wind_ = nuv.mean();
}

double LagrangianLoop::defect() const { return std::abs(signed_defect()); }

double LagrangianLoop::action_at(double a) const {
  // Trigonometric interpolation of the periodic part.
  double acc = 0.0;
  for (int k = 1; k < m_ / 2; ++k) {
    Complex c = 0.0;
    for (int j = 0; j < m_; ++j)
      c += act_periodic_(j) * std::polar(1.0 / m_, -k * alpha(j));
    acc += 2.0 * (c * std::polar(1.0, k * a)).real();
  }
  return wind_ * a + acc;
}

Complex LagrangianLoop::z_at(double a) const { return spec_.z(a); }

double LagrangianLoop::modular_at(double a) const {
  Complex zp = spec_.z(a), dzp = spec_.dz(a);
  double sd = spec_.sigma_density(a);
  double detg = model_->detg().eval(zp, std::conj(zp)).real();
  return std::abs(dzp / sd) * std::sqrt(conv::kDeltaMetricFactor * detg);
}

LagrangianLoop loop_geometry(const KahlerModel& m, const LoopSpec& spec, int nodes) {
  return LagrangianLoop(m, spec, nodes);
}

Amplitude probability(const KahlerModel& m, const PhasePoint& y, const PhasePoint& x) {
  Complex xb = std::conj(x.coord), yb = std::conj(y.coord);
  try {
    Complex lv = m.phi(xb, y.coord) + m.phi(yb, x.coord) - m.phi(xb, x.coord) -
                 m.phi(yb, y.coord);
    return Amplitude::from_log(lv);
  } catch (const SingularAmplitude&) {
    return Amplitude::null();
  }
}

Amplitude holonomy(const KahlerModel& m, const PhasePoint& w, const PhasePoint& y,
                   const PhasePoint& x) {
  Complex xb = std::conj(x.coord), yb = std::conj(y.coord), wb = std::conj(w.coord);
  try {
    Complex lv = m.phi(xb, w.coord) + m.phi(wb, y.coord) + m.phi(yb, x.coord) -
                 m.phi(xb, x.coord) - m.phi(wb, w.coord) - m.phi(yb, y.coord);
    return Amplitude::from_log(lv);
  } catch (const SingularAmplitude&) {
    return Amplitude::null();
  }
}

static Amplitude transition_impl(const LagrangianLoop& loop, Complex zb, Complex za,
                                 double sb, double sa, double db, double da) {
  const KahlerModel& m = loop.model();
  Complex bb = std::conj(zb), ab = std::conj(za);
  try {
    Complex lv = m.phi(bb, za) - 0.5 * m.phi(ab, za) - 0.5 * m.phi(bb, zb) +
                 kI * (sb - sa) + 0.5 * std::log(da) + 0.5 * std::log(db);
    return Amplitude::from_log(lv);
  } catch (const SingularAmplitude&) {
    return Amplitude::null();
  }
}

Amplitude transition(const LagrangianLoop& loop, double beta, double alpha) {
  return transition_impl(loop, loop.z_at(beta), loop.z_at(alpha), loop.action_at(beta),
                         loop.action_at(alpha), loop.modular_at(beta),
                         loop.modular_at(alpha));
}

Amplitude transition_nodes(const LagrangianLoop& loop, int i, int j) {
  return transition_impl(loop, loop.z(i), loop.z(j), loop.action(i), loop.action(j),
                         loop.modular(i), loop.modular(j));
}

static Amplitude coherent_impl(const LagrangianLoop& loop, Complex zb, Complex x,
                               Complex za, double sb, double sa, double db, double da) {
  const KahlerModel& m = loop.model();
  Complex bb = std::conj(zb), ab = std::conj(za), xb = std::conj(x);
  try {
    Complex lv = m.phi(bb, x) + m.phi(xb, za) - m.phi(xb, x) - 0.5 * m.phi(ab, za) -
                 0.5 * m.phi(bb, zb) + kI * (sb - sa) + 0.5 * std::log(da) +
                 0.5 * std::log(db);
    return Amplitude::from_log(lv);
  } catch (const SingularAmplitude&) {
    return Amplitude::null();
  }
}

Amplitude coherent_amp(const LagrangianLoop& loop, double beta, const PhasePoint& x,
                       double alpha) {
  return coherent_impl(loop, loop.z_at(beta), x.coord, loop.z_at(alpha),
                       loop.action_at(beta), loop.action_at(alpha),
                       loop.modular_at(beta), loop.modular_at(alpha));
}

Amplitude coherent_amp_nodes(const LagrangianLoop& loop, int i, const PhasePoint& x, int j) {
  return coherent_impl(loop, loop.z(i), x.coord, loop.z(j), loop.action(i),
                       loop.action(j), loop.modular(i), loop.modular(j));
}

double quantization_defect(const KahlerModel&, const LagrangianLoop& loop) {
  return loop.defect();
}

Complex membrane_integral(const KahlerModel& m, const MembranePatch& patch, int nq) {
  // i * int of i * d2Phi dwbar ^ dz pulled back to [0,1]^2; derivatives of the
  // patch by central differences on the quadrature lattice scale h.
  RationalSymbol d2phi = m.gw() * Complex(1.0 / m.hbar()) +
                         m.dz_log_detg().dzbar() * Complex(0.5);
  auto gl = gauss_legendre(nq, 0.0, 1.0);
  const double h = 1e-5;
  Complex acc = 0.0;
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nq; ++j) {
      double s = gl.nodes[i], t = gl.nodes[j];
      auto [wb, z] = patch(s, t);
      auto [wb_sp, z_sp] = patch(s + h, t);
      auto [wb_sm, z_sm] = patch(s - h, t);
      auto [wb_tp, z_tp] = patch(s, t + h);
      auto [wb_tm, z_tm] = patch(s, t - h);
      Complex dws = (wb_sp - wb_sm) / (2.0 * h), dzs = (z_sp - z_sm) / (2.0 * h);
      Complex dwt = (wb_tp - wb_tm) / (2.0 * h), dzt = (z_tp - z_tm) / (2.0 * h);
      Complex jac = dws * dzt - dwt * dzs;
      acc += d2phi.eval(z, wb) * jac * gl.weights[i] * gl.weights[j];
    }
  return kI * kI * acc;  // i * [i * d2phi * (pullback)]
}

MembranePatch quadrangle_patch(const PhasePoint& y, const PhasePoint& x) {
  Complex xb = std::conj(x.coord), yb = std::conj(y.coord);
  Complex xc = x.coord, yc = y.coord;
  return [=](double s, double t) {
    return std::make_pair(xb + s * (yb - xb), xc + t * (yc - xc));
  };
}

MembranePatch perturbed_quadrangle_patch(const PhasePoint& y, const PhasePoint& x,
                                         Complex eps_wbar, Complex eps_z) {
  MembranePatch base = quadrangle_patch(y, x);
  return [=](double s, double t) {
    auto [wb, z] = base(s, t);
    double bump = std::sin(kPi * s) * std::sin(kPi * t);
    return std::make_pair(wb + eps_wbar * bump, z + eps_z * bump * (1.0 + 0.5 * s));
  };
}

MembranePatch triangle_patch(const LagrangianLoop& loop, double beta, double alpha, int) {
  Complex corner_wb = std::conj(loop.z_at(beta));
  Complex corner_z = loop.z_at(alpha);
  const LoopSpec spec = loop.spec();
  return [=](double s, double t) {
    Complex g = spec.z(alpha + t * (beta - alpha));
    Complex wb = (1.0 - s) * std::conj(g) + s * corner_wb;
    Complex z = (1.0 - s) * g + s * corner_z;
    return std::make_pair(wb, z);
  };
}

}  // namespace gq
