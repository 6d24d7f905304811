#pragma once

#include "gq/calculus.hpp"
#include "gq/coherent.hpp"

namespace gq {

// Symbols of the form r(z, zbar) * exp(c * zbar z). The covariant symbols
// of both bundled reference quantizations live here, and the family is
// closed under d, dbar, products and the rational-coefficient operators of
// the calculus module.
struct WeightedSymbol {
  RationalSymbol r;
  Complex expc{0.0, 0.0};

  Complex eval(Complex z, Complex zbar) const {
    return r.eval(z, zbar) * std::exp(expc * zbar * z);
  }
  Complex eval_diag(Complex z) const { return eval(z, std::conj(z)); }
  WeightedSymbol dz() const {
    return {r.dz() + r * RationalSymbol::zbar() * expc, expc};
  }
  WeightedSymbol dzbar() const {
    return {r.dzbar() + r * RationalSymbol::z() * expc, expc};
  }
  WeightedSymbol conj() const { return {r.conj_swap(), std::conj(expc)}; }
  WeightedSymbol operator*(const WeightedSymbol& o) const {
    return {r * o.r, expc + o.expc};
  }
};

WeightedSymbol apply_op(const HolDiffOp& op, const WeightedSymbol& f);

// Covariant-symbol basis u_mn = tr(|m><n| P(.)), m, n <= nmax. Spans
// (Ker P)^perp for the bundled models.
struct SymbolBasis {
  std::vector<WeightedSymbol> elems;
  std::vector<std::pair<int, int>> labels;
  int dim() const { return int(elems.size()); }
};
SymbolBasis covariant_basis(const KahlerModel& m, int nmax);

// Expand a rational symbol over the basis (exact for symbols in the span).
Vec expand_in_basis(const SymbolBasis& basis, const KahlerModel& m, const Grid2D& g,
                    const std::function<Complex(Complex)>& f);

class StarEngine {
 public:
  StarEngine(const KahlerModel& m, const SymbolBasis& basis, const Grid2D& grid,
             double pinv_tol = 1e-10);

  const KahlerModel& model() const { return *model_; }
  const SymbolBasis& basis() const { return *basis_; }
  const Grid2D& grid() const { return grid_; }

  double completeness_residual() const { return completeness_; }
  const Mat& p_matrix() const { return p_; }  // P[i][j] = (P e_i, e_j)
  int p_rank() const { return p_rank_; }

  // f * g = P^{-1} B(f (x) g) projected on the basis span.
  Vec star(const Vec& f, const Vec& g) const;
  Complex hilbert_inner(const Vec& f, const Vec& g) const;  // (P f, g)

  // Operators on basis coefficients.
  Mat left_mult_star(const Vec& h) const;        // g -> h * g via Eq. (2)
  Mat right_mult_star(const Vec& g) const;       // f -> f * g via Eq. (2)
  // Left multiplication by an arbitrary function (needed when h itself is
  // not in the basis span, e.g. polynomial observables on the plane).
  Mat left_mult_star_fn(const std::function<Complex(Complex)>& h) const;
  Mat left_mult_theorem1(const RationalSymbol& h, int degree) const;
  Mat left_mult_theorem2(const RationalSymbol& h, Theorem2Case c) const;
  Mat project_op(const HolDiffOp& op) const;     // symbolic operator -> basis matrix

  Vec expand(const std::function<Complex(Complex)>& f) const;
  Vec expand(const RationalSymbol& f) const;
  Vec project_grid(const Vec& grid_values) const;  // L2(dm) projection onto the basis
  Complex eval_coeffs(const Vec& coef, Complex z) const;
  double coeff_norm(const Vec& coef) const;      // L2(dm) norm of the represented symbol

 private:
  Vec grid_values(const Vec& coef) const;
  Vec project_values(const Vec& vals) const;     // L2(dm) projection onto basis coeffs

  const KahlerModel* model_;
  const SymbolBasis* basis_;
  Grid2D grid_;
  Mat kn_;          // normalized kernel K(conj(z_a), z_b), G x G
  Mat ev_;          // basis values on the grid, G x dim
  Vec dmw_;         // dm weights per node
  Mat gram_;        // (e_i, e_j)_L2(dm)
  Mat p_;           // (P e_i, e_j)
  HermitianPinv p_pinv_, gram_pinv_;
  int p_rank_ = 0;
  double completeness_ = 0.0;
};

}  // namespace gq
