#pragma once

#include "gq/starprod.hpp"

namespace gq {

// Hamilton flow of a real observable. Bundled rotation flows come in
// closed form; anything else integrates the Hamilton + variational system
// with RK4.
class FlowMap {
 public:
  FlowMap(const KahlerModel& m, const RationalSymbol& h);

  // gamma^t(x) and the holomorphic Jacobian Dz^t/Dz along it.
  std::pair<Complex, Complex> evolve(double t, Complex x) const;
  Complex velocity(Complex z) const;  // zdot = a(z, zbar)

  const RationalSymbol& generator() const { return h_; }
  bool kahler_preserving() const { return preserving_; }

 private:
  const KahlerModel* model_;
  RationalSymbol h_, a_;       // a = hamilton_plus coefficient
  RationalSymbol da_dz_, da_dzb_;
  bool closed_form_ = false;   // rotation flows: zdot = i w(|z|^2) z
  bool preserving_ = false;
  std::function<double(double)> omega_of_r2_;  // rotation rate
  std::function<double(double)> domega_dr2_;
};

struct TrajectoryCocycle {
  double nu_integral = 0.0;   // int_0^t nu^tau dtau
  double delta_t = 1.0;       // modular function along the trajectory
  Complex action{0.0, 0.0};   // i * int over Sigma^t(x) of (omega/hbar + rho)
};

TrajectoryCocycle trajectory_cocycles(const KahlerModel& m, const FlowMap& flow,
                                      double t, Complex x, int nq = 64);

// Cauchy problem of Eq.-(15) type on the covariant-symbol basis. Class-1
// generators leave f unchanged; class-2 generators evolve through the
// flow-conjugated second-order remainder operator.
struct CauchyResult {
  Vec coeffs;          // f^t in the basis
  double step_change;  // norm change under step halving (convergence gate)
};
CauchyResult cauchy_evolve(const StarEngine& eng, const RationalSymbol& h, double t,
                           const Vec& f0, int steps = 32);

// Theorem-9 comparison: exact propagation of fhat against the coherent
// graph transform of f^t.
struct EvolutionReport {
  double discrepancy = 0.0;   // operator-norm difference / norm(fhat)
  double t0_identity = 0.0;   // same at t = 0 (sanity)
};
EvolutionReport evolution_formula(const ReferenceQuantization& ref, const StarEngine& eng,
                                  const RationalSymbol& h, double t, const Vec& f0,
                                  const Grid2D& grid);

struct TraceReport {
  Complex lhs;            // tr(exp(-it Hhat_deformed/hbar) fhat)
  Complex rhs;            // membrane integral, full form (Delta^(1/2), f^t)
  Complex rhs_simplified; // Kahler-preserving shortcut (f in place of f^t, no Delta)
  double rel_error = 0.0;
  Complex lhs_raw;        // propagator from the undeformed symbol, for reference
};
TraceReport trace_formula(const ReferenceQuantization& ref, const KahlerModel& m,
                          const RationalSymbol& h, double t,
                          const std::function<Complex(Complex)>& f,
                          const std::function<Complex(Complex)>& ft,
                          const Grid2D& grid);

// Graph transform U^t(g): integral of g(x) A^t(x) |gamma^t x><x| dm(x)
// with the trajectory action phase; reduces to Eq. (11) at t = 0.
Mat graph_transform(const ReferenceQuantization& ref, const KahlerModel& m,
                    const FlowMap& flow, double t,
                    const std::function<Complex(Complex)>& g, const Grid2D& grid);

}  // namespace gq
