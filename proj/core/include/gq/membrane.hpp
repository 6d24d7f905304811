#pragma once

#include <functional>

#include "gq/conventions.hpp"
#include "gq/geometry.hpp"

namespace gq {

// Amplitudes carry their exponent so that small-hbar values stay usable.
struct Amplitude {
  Complex log_value{0.0, 0.0};
  Complex value{1.0, 0.0};
  bool zero = false;  // singular continuation collapsed to the p = 0 limit

  static Amplitude from_log(Complex lv) {
    return Amplitude{lv, std::exp(lv), false};
  }
  static Amplitude null() {
    return Amplitude{Complex(-std::numeric_limits<double>::infinity(), 0.0), 0.0, true};
  }
};

// Closed parametrized lagrangian loop alpha in [0, 2pi). sigma_density is
// dsigma/dalpha and already carries the (4 pi hbar)^(-1/2) normalization;
// chart arc length is the reference dsigma0.
struct LoopSpec {
  std::function<Complex(double)> z;
  std::function<Complex(double)> dz;
  std::function<double(double)> sigma_density;
  std::string family = "custom";
  double radius = 0.0;
};

LoopSpec circle_loop(const KahlerModel& m, double radius);    // plane circle / sphere latitude
LoopSpec reparametrized_circle(const KahlerModel& m, double radius, double wobble);

// Loop geometry sampled on M uniform nodes with spectral accessories:
// q = dz/dsigma, nu_Lambda, Delta_Lambda, and the cumulative action phase
// S(alpha) = int_0^alpha [Im(dzPhi dz) + nu].
class LagrangianLoop {
 public:
  LagrangianLoop(const KahlerModel& m, const LoopSpec& spec, int nodes);

  const KahlerModel& model() const { return *model_; }
  int size() const { return m_; }
  double alpha(int i) const { return 2.0 * kPi * i / m_; }
  Complex z(int i) const { return z_[i]; }
  Complex dz(int i) const { return dz_[i]; }
  double sigma(int i) const { return sig_[i]; }      // dsigma/dalpha
  Complex q(int i) const { return q_[i]; }
  double nu(int i) const { return nu_[i]; }
  double modular(int i) const { return delta_[i]; }  // Delta_Lambda
  double action(int i) const { return act_[i]; }     // S at node i

  double nu_holonomy() const { return nu_wind_; }        // (1/2pi) loop integral of nu
  double winding() const { return wind_; }               // (1/2pi) [flux + loop nu]
  double defect() const;                                 // distance of winding to Z
  double signed_defect() const { return wind_ - std::round(wind_); }
  bool admissible(double tol = 1e-6) const { return defect() <= tol; }

  double arc_length() const { return arc_; }             // int dsigma0 = chart length
  double sigma_total() const { return sig_total_; }      // int dsigma

  // Fourier-interpolated action phase at arbitrary alpha.
  double action_at(double alpha) const;
  Complex z_at(double alpha) const;
  double modular_at(double alpha) const;

  const LoopSpec& spec() const { return spec_; }

 private:
  const KahlerModel* model_;
  LoopSpec spec_;
  int m_;
  std::vector<Complex> z_, dz_, q_;
  std::vector<double> sig_, nu_, delta_, act_;
  double nu_wind_ = 0.0, wind_ = 0.0, arc_ = 0.0, sig_total_ = 0.0;
  RealVec act_periodic_;  // mean-free periodic part of the action, at nodes
};

LagrangianLoop loop_geometry(const KahlerModel& m, const LoopSpec& spec, int nodes);

// Membrane amplitudes via the boundary-reduced cocycles.
Amplitude probability(const KahlerModel& m, const PhasePoint& y, const PhasePoint& x);
Amplitude holonomy(const KahlerModel& m, const PhasePoint& w, const PhasePoint& y,
                   const PhasePoint& x);
Amplitude transition(const LagrangianLoop& loop, double beta, double alpha);
Amplitude transition_nodes(const LagrangianLoop& loop, int i, int j);  // a(alpha_i | alpha_j)
Amplitude coherent_amp(const LagrangianLoop& loop, double beta, const PhasePoint& x,
                       double alpha);
Amplitude coherent_amp_nodes(const LagrangianLoop& loop, int i, const PhasePoint& x, int j);

double quantization_defect(const KahlerModel& m, const LagrangianLoop& loop);

// Direct surface integration over a parametrized membrane patch in the
// complexification: returns i * integral of (omega/hbar + rho) continued.
// The patch maps [0,1]^2 -> (wbar, z).
using MembranePatch = std::function<std::pair<Complex, Complex>(double, double)>;
Complex membrane_integral(const KahlerModel& m, const MembranePatch& patch, int nq = 48);

// Product patch for quadrangle(y, x); boundary x -> y|x -> y -> x|y -> x.
MembranePatch quadrangle_patch(const PhasePoint& y, const PhasePoint& x);
// Same patch with an interior bump (vanishing on the boundary).
MembranePatch perturbed_quadrangle_patch(const PhasePoint& y, const PhasePoint& x,
                                         Complex eps_wbar, Complex eps_z);
// Cone patch for triangle_Gamma(beta|alpha) over a loop arc.
MembranePatch triangle_patch(const LagrangianLoop& loop, double beta, double alpha,
                             int arc_samples = 0);

}  // namespace gq
