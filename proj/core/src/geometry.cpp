#include "gq/geometry.hpp"

#include <cmath>

namespace gq {

namespace {

RationalSymbol rat_const(double v) { return RationalSymbol(Complex(v)); }

// 1 + zbar*z as a polynomial (continued: 1 + wbar*z).
Poly2 one_plus_zbz() {
  return Poly2::constant(1.0) + Poly2::monomial(1, 1, 1.0);
}

}  // namespace

KahlerModel KahlerModel::plane(double hbar) {
  require(hbar > 0.0, "plane model: hbar must be positive");
  KahlerModel m;
  m.name_ = "plane";
  m.hbar_ = hbar;
  m.gw_ = rat_const(1.0);
  m.dz_F_ = RationalSymbol::zbar();
  m.detg_ = rat_const(1.0);
  m.dz_phi_ = RationalSymbol::zbar() * Complex(1.0 / hbar);
  m.dz_log_detg_ = rat_const(0.0);
  m.m_density_ = rat_const(1.0 / (kPi * hbar));
  m.mprime_density_ = m.m_density_ * m.m_density_ / (m.detg_ * Complex(2.0));
  m.ratio_ = m.mprime_density_ / (m.gw_ * Complex(2.0));
  m.flux_density_ = rat_const(2.0 / hbar);
  return m;
}

KahlerModel KahlerModel::sphere(int n, double hbar) {
  require(hbar > 0.0, "sphere model: hbar must be positive");
  require(n >= 1, "sphere model: N must be a positive integer");
  KahlerModel m;
  m.name_ = "sphere";
  m.hbar_ = hbar;
  m.n_ = n;
  m.kappa_ = (n + 1) * hbar;
  RationalSymbol d(one_plus_zbz(), Poly2::constant(1.0));
  m.gw_ = rat_const(m.kappa_) / (d * d);
  m.dz_F_ = RationalSymbol(Poly2::monomial(0, 1, m.kappa_), one_plus_zbz());
  m.detg_ = m.gw_;  // det g = kappa / (1+zbar z)^2
  // dz Phi = (N+1) zbar/(1+zbar z) + (1/2) dz log detg = N zbar/(1+zbar z)
  m.dz_phi_ = RationalSymbol(Poly2::monomial(0, 1, double(n)), one_plus_zbz());
  m.dz_log_detg_ = RationalSymbol(Poly2::monomial(0, 1, -2.0), one_plus_zbz());
  m.m_density_ = RationalSymbol(Poly2::constant((n + 1) / kPi), one_plus_zbz() * one_plus_zbz());
  m.mprime_density_ = m.m_density_ * m.m_density_ / (m.detg_ * Complex(2.0));
  m.ratio_ = m.mprime_density_ / (m.gw_ * Complex(2.0));
  m.flux_density_ = RationalSymbol(Poly2::constant(2.0 * n), one_plus_zbz() * one_plus_zbz());
  return m;
}

Complex KahlerModel::phi(Complex wbar, Complex z) const {
  if (name_ == "plane") return wbar * z / hbar_;
  Complex arg = 1.0 + wbar * z;
  if (std::abs(arg) < 1e-14)
    throw SingularAmplitude("continued potential singular: 1 + wbar z = 0");
  return double(n_) * std::log(arg) + 0.5 * std::log(kappa_);
}

bool KahlerModel::singular(Complex wbar, Complex z) const {
  if (name_ == "plane") return false;
  return std::abs(1.0 + wbar * z) < 1e-14;
}

Measures KahlerModel::measures(Complex z) const {
  Complex zb = std::conj(z);
  return Measures{detg_.eval(z, zb).real(), m_density_.eval(z, zb).real(),
                  mprime_density_.eval(z, zb).real(), 2.0 * gw_.eval(z, zb).real()};
}

double KahlerModel::disk_flux(double r) const {
  if (name_ == "plane") return 2.0 * kPi * r * r / hbar_;
  double rho = r * r / (1.0 + r * r);
  return 2.0 * kPi * n_ * rho;
}

double KahlerModel::total_flux() const {
  require(name_ == "sphere", "total_flux: only the closed (sphere) model has finite flux");
  return 2.0 * kPi * n_;
}

double KahlerModel::plane_cutoff(int nmax) const {
  return 1.6 * std::sqrt(hbar_ * (nmax + 1));
}

Grid2D KahlerModel::grid(int n_radial, int n_angular, double radius) const {
  require(n_radial >= 8, "grid: need at least 8 radial nodes");
  require(n_angular >= 8 && n_angular % 2 == 0, "grid: need even n_angular >= 8");
  Grid2D g;
  g.n_radial = n_radial;
  g.n_angular = n_angular;
  double dth = 2.0 * kPi / n_angular;
  if (name_ == "plane") {
    double rmax = (radius > 0.0) ? radius : plane_cutoff(48);
    g.radius = rmax;
    auto gl = gauss_legendre(n_radial, 0.0, rmax);
    g.z.reserve(size_t(n_radial) * n_angular);
    g.wA.reserve(size_t(n_radial) * n_angular);
    for (int i = 0; i < n_radial; ++i)
      for (int j = 0; j < n_angular; ++j) {
        double th = dth * j;
        g.z.push_back(std::polar(gl.nodes[i], th));
        g.wA.push_back(gl.nodes[i] * gl.weights[i] * dth);
      }
  } else {
    // rho = r^2/(1+r^2) substitution: dA = (1+r^2)^2/2 drho dtheta. All
    // bundled sphere integrands are polynomial in rho, so Gauss-Legendre in
    // rho is exact once n_radial exceeds the polynomial degree.
    auto gl = gauss_legendre(n_radial, 0.0, 1.0);
    for (int i = 0; i < n_radial; ++i) {
      double rho = gl.nodes[i];
      double r2 = rho / (1.0 - rho);
      double r = std::sqrt(r2);
      double jac = 0.5 * (1.0 + r2) * (1.0 + r2);
      for (int j = 0; j < n_angular; ++j) {
        double th = dth * j;
        g.z.push_back(std::polar(r, th));
        g.wA.push_back(gl.weights[i] * dth * jac);
      }
    }
  }
  return g;
}

Grid2D KahlerModel::default_grid() const {
  if (name_ == "plane") return grid(96, 128);
  // Integrands are polynomial in rho = r^2/(1+r^2) of degree <= 2N+2 and
  // trigonometric of order <= 4N, so this rule is exact.
  int nr = std::max(16, 2 * n_ + 6);
  int na = std::max(24, 4 * n_ + 6);
  if (na % 2) ++na;
  return grid(nr, na);
}

double KahlerModel::integrate_dm(const Grid2D& g,
                                 const std::function<Complex(Complex)>& f) const {
  double acc = 0.0;
  for (size_t k = 0; k < g.size(); ++k) {
    Complex zb = std::conj(g.z[k]);
    acc += (f(g.z[k]) * m_density_.eval(g.z[k], zb)).real() * g.wA[k];
  }
  return acc;
}

KahlerModel make_model(const std::string& name, double hbar,
                       const std::vector<double>& params) {
  require(hbar > 0.0, "make_model: hbar must be positive");
  if (name == "plane") return KahlerModel::plane(hbar);
  if (name == "sphere") {
    require(!params.empty(), "make_model: sphere needs the integer level N");
    double nf = params[0];
    require(std::abs(nf - std::round(nf)) < 1e-12 && nf >= 1.0,
            "make_model: sphere level N must be a positive integer");
    return KahlerModel::sphere(int(std::round(nf)), hbar);
  }
  throw std::invalid_argument("make_model: unknown model '" + name + "'");
}

Measures metric_and_measures(const KahlerModel& m, const PhasePoint& x) {
  return m.measures(x.coord);
}

Complex continued_potential(const KahlerModel& m, const PhasePoint& wbar_slot,
                            const PhasePoint& z_slot) {
  return m.phi(std::conj(wbar_slot.coord), z_slot.coord);
}

}  // namespace gq
