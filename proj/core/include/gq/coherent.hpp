#pragma once

#include "gq/calculus.hpp"
#include "gq/membrane.hpp"

namespace gq {

// Exact finite-dimensional quantization x -> P(x): truncated Bargmann-Fock
// space for the plane, the spin-N/2 representation for the sphere. Serves
// as the independent oracle for every amplitude and operator identity.
class ReferenceQuantization {
 public:
  static ReferenceQuantization build(const KahlerModel& m, int plane_truncation = 0);

  const KahlerModel& model() const { return *model_; }
  int dim() const { return dim_; }

  // Normalized coherent vector at x (phase convention: holomorphic
  // coefficients, real positive at the basis states).
  Vec normalized_ket(Complex x) const;
  Mat projector(Complex x) const;  // P(x) = |x><x| / <x|x>
  Complex overlap_normalized(Complex xbra, Complex yket) const;

  // Contravariant quantization, Eq.-(11) style: integral of f * P over dm.
  Mat quantize(const std::function<Complex(Complex)>& f, const Grid2D& g) const;
  Mat quantize(const RationalSymbol& f, const Grid2D& g) const;
  // fhat applied to a single vector without forming the matrix.
  Vec apply_quantized(const std::function<Complex(Complex)>& f, const Grid2D& g,
                      const Vec& u) const;

  // Ladder matrices: plane lowering a (a|k> = sqrt(hbar k)|k-1>);
  // sphere J-, Jz, J+ with [Jx, Jy] = i hbar Jz.
  const Mat& lower() const { return lower_; }
  const Mat& raise_() const { return raise_m_; }
  const Mat& jz() const { return jz_; }

  // Coherent annihilator A(z): A(z) ket(z) = 0 exactly.
  Mat annihilator(Complex z) const;

  // Suggested truncation for a working domain |z| <= rmax (plane).
  static int plane_truncation_for(double rmax, double hbar);

 private:
  const KahlerModel* model_ = nullptr;
  int dim_ = 0;
  Mat lower_, raise_m_, jz_;
};

// Transported family over an admissible loop: e_alpha by parallel
// translation of the vacuum at alpha0 = 0, u_alpha = Delta^(1/2) e_alpha.
struct CoherentFamily {
  Mat e;          // dim x M, column i = e_{alpha_i}
  Mat u;          // dim x M, column i = u_{alpha_i}
  RealVec wsigma; // dsigma weights per node
  double holonomy_defect = 0.0;     // |transport around - 1|
  Complex holonomy_scalar{1.0, 0.0};
  double annihilation_residual = 0.0;
  double projector_fidelity = 1.0;  // min over nodes of |<e, dominant(P)>|^2
};

CoherentFamily connection_and_transport(const ReferenceQuantization& ref,
                                        const LagrangianLoop& loop);

// U_Lambda(phi) = sum phi_i u_i w_i.
Vec coherent_transform(const CoherentFamily& fam, const Vec& phi_nodes);

struct QuasimodeRow {
  double hbar, radius, lambda0, residual, residual_deformed, norm_ratio;
};
struct QuasimodeSweep {
  std::vector<QuasimodeRow> rows;
  double slope = 0.0;           // log-log fit of residual vs hbar
  double slope_deformed = 0.0;
};

// Admissible radius with winding nearest the target radius' winding.
double admissible_radius(const KahlerModel& m, double target_radius, int loop_nodes = 64);
// Next admissible radius above r_from (one winding quantum up).
double admissible_radius_next(const KahlerModel& m, double r_from, int loop_nodes = 64);

// For each hbar: nearest admissible loop to the target, u = U(1), residuals
// against lambda0 = H|_Lambda for the raw and deformed quantizations.
QuasimodeSweep quasimode_sweep(const std::string& model_name,
                               const std::vector<double>& hbars,
                               const std::vector<double>& model_params,
                               const std::string& preset, double target_radius,
                               int loop_nodes = 64);

}  // namespace gq
