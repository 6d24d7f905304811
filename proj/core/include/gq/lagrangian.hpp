#pragma once

#include "gq/calculus.hpp"
#include "gq/membrane.hpp"

namespace gq {

// Discretized loop operators. Everything acts on node-sampled functions
// phi(alpha_i); adjoints and traces refer to the A-metric
// (phi, psi) = (A phi, psi)_{L2(dsigma)}. The retained eigenframe of the
// weight-symmetrized A matrix gives flat coordinates ("c-frame") in which
// that metric is the identity.
class LambdaGrid {
 public:
  LambdaGrid(const KahlerModel& m, const LagrangianLoop& loop, double pinv_tol = 1e-10);

  const KahlerModel& model() const { return *model_; }
  const LagrangianLoop& loop() const { return *loop_; }
  int nodes() const { return mloop_; }
  int rank() const { return rank_; }  // dim L_Lambda (numerical)

  const Mat& a_nodes() const { return a_; }          // a(alpha_i|alpha_j) values
  const Mat& a_sym() const { return a_tilde_; }      // W^(1/2) a W^(1/2)
  const RealVec& weights() const { return w_; }      // dsigma weights
  RealVec a_eigenvalues() const;

  // Coherent node vector v(x): k(alpha_i | x | alpha_j) = v_i(x) conj(v_j(x)).
  Vec k_vector(const PhasePoint& x) const;
  // C(x) in the flat c-frame: rank-1 vtilde vtilde^dagger.
  Vec c_vector(const PhasePoint& x) const;  // vtilde = B^dag W^(1/2) v
  Mat build_c(const PhasePoint& x) const;

  // Node-space operator -> c-frame.
  Mat to_cframe(const Mat& node_op) const;
  // phi node values -> c-frame coefficients (metric-orthogonal projection).
  Vec phi_to_cframe(const Vec& phi) const;
  Vec cframe_to_phi(const Vec& c) const;

  // Eq. (6): integral of H(x) C(x) dm(x) over the model grid, in c-frame.
  Mat quantize(const RationalSymbol& h, const Grid2D& grid) const;
  Mat quantize_fn(const std::function<Complex(Complex)>& h, const Grid2D& grid) const;
  Mat identity_check(const Grid2D& grid) const;  // integral of C(x) dm(x)

  // Eq. (7): Weyl realization with spectral loop derivative, in c-frame.
  Mat weyl_realization(const RationalSymbol& h, int degree) const;
  // Theorem 4, Eq. (8): first-order reduced operator (the operator of the
  // deformed symbol H_hbar), class-1 H.
  Mat reduced_first_order(const RationalSymbol& h) const;
  // Theorem 5, Eq. (10): adds the second-order term, class-2 H.
  Mat reduced_second_order(const RationalSymbol& h) const;

  Mat node_op_weyl(const RationalSymbol& h, int degree) const;

 private:
  const KahlerModel* model_;
  const LagrangianLoop* loop_;
  int mloop_ = 0, rank_ = 0;
  RealVec w_;       // dsigma weights
  Mat a_, a_tilde_;
  HermitianPinv apinv_;
  Mat bframe_;      // columns: eigvec / sqrt(eig)
  Mat dspec_;       // spectral d/dalpha
};

}  // namespace gq
