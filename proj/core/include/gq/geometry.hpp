#pragma once

#include <functional>
#include <string>

#include "gq/symbols.hpp"
#include "gq/util.hpp"

namespace gq {

// Evaluation hit a singularity of the analytic continuation (e.g. the
// branch point 1 + wbar z = 0 on the sphere).
struct SingularAmplitude : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PhasePoint {
  int chart = 0;
  Complex coord{0.0, 0.0};
};

// The pair y|x in the complexified groupoid; Phi pairs the bra slot
// antiholomorphically with the ket slot. Involution swaps the slots.
struct GroupoidPoint {
  PhasePoint bra;  // y
  PhasePoint ket;  // x
  GroupoidPoint involution() const { return {ket, bra}; }
};

struct Measures {
  double detg;     // Hermitian determinant of the Kahler metric
  double dm;       // density of dm w.r.t. dA
  double dmprime;  // density of dm' = (M^2/det g) dzbar dz w.r.t. dA
  double dmomega;  // density of the Liouville measure |omega| w.r.t. dA
};

// Quadrature grid over the model chart; weights wA integrate against dA.
struct Grid2D {
  std::vector<Complex> z;
  std::vector<double> wA;
  int n_radial = 0, n_angular = 0;
  double radius = 0.0;  // plane cutoff; sphere: 0 (full chart)
  size_t size() const { return z.size(); }
};

class KahlerModel {
 public:
  static KahlerModel plane(double hbar);
  static KahlerModel sphere(int n, double hbar);

  const std::string& name() const { return name_; }
  double hbar() const { return hbar_; }
  int level_n() const { return n_; }    // sphere N; -1 for plane
  double kappa() const { return kappa_; }

  // Analytic continuations, rational in (z-slot, wbar-slot).
  const RationalSymbol& gw() const { return gw_; }            // d_wbar d_z F
  const RationalSymbol& dz_F() const { return dz_F_; }        // d_z F continued
  const RationalSymbol& detg() const { return detg_; }        // det g continued
  const RationalSymbol& dz_phi() const { return dz_phi_; }    // d_z Phi
  const RationalSymbol& dz_log_detg() const { return dz_log_detg_; }
  const RationalSymbol& m_density() const { return m_density_; }
  const RationalSymbol& mprime_density() const { return mprime_density_; }
  const RationalSymbol& mprime_over_momega() const { return ratio_; }
  const RationalSymbol& flux_density() const { return flux_density_; }  // of (omega/hbar+rho) w.r.t. dA

  // Phi(wbar, z) = F(wbar, z)/hbar + log(det g continued)/2.
  Complex phi(Complex wbar, Complex z) const;
  Complex phi(const GroupoidPoint& p) const {
    return phi(std::conj(p.bra.coord), p.ket.coord);
  }
  bool singular(Complex wbar, Complex z) const;

  Measures measures(Complex z) const;

  // Flux of (omega/hbar + rho) through the coordinate disk |z| <= r
  // (closed form per model).
  double disk_flux(double r) const;
  double total_flux() const;  // sphere: 2 pi N; plane: infinite -> throws

  Grid2D grid(int n_radial, int n_angular, double radius = 0.0) const;
  Grid2D default_grid() const;
  // Cutoff radius covering Gaussian integrands built from <= nmax Fock
  // levels (plane); documented factor c = 1.6.
  double plane_cutoff(int nmax) const;

  double integrate_dm(const Grid2D& g, const std::function<Complex(Complex)>& f_re_part) const;

 private:
  std::string name_;
  double hbar_ = 1.0;
  int n_ = -1;
  double kappa_ = 0.0;
  RationalSymbol gw_, dz_F_, detg_, dz_phi_, dz_log_detg_, m_density_, mprime_density_,
      ratio_, flux_density_;
};

KahlerModel make_model(const std::string& name, double hbar,
                       const std::vector<double>& params = {});

Measures metric_and_measures(const KahlerModel& m, const PhasePoint& x);
Complex continued_potential(const KahlerModel& m, const PhasePoint& wbar_slot,
                            const PhasePoint& z_slot);

}  // namespace gq
