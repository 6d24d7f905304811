#pragma once

#include <vector>

#include "gq/util.hpp"

namespace gq {

// Bivariate polynomial sum_{i,j} c(i,j) z^i zbar^j. The zbar slot doubles
// as the analytically continued wbar slot: eval(z, wbar) evaluates the
// continuation, eval(z, conj(z)) the restriction to the diagonal.
class Poly2 {
 public:
  Poly2() : c_(Mat::Zero(1, 1)) {}
  explicit Poly2(const Mat& coeffs) : c_(coeffs) { trim(); }

  static Poly2 constant(Complex v);
  static Poly2 z();
  static Poly2 zbar();
  static Poly2 monomial(int zpow, int zbarpow, Complex v);

  int deg_z() const { return int(c_.rows()) - 1; }
  int deg_zbar() const { return int(c_.cols()) - 1; }
  Complex coeff(int i, int j) const;
  const Mat& coeffs() const { return c_; }

  Poly2 operator+(const Poly2& o) const;
  Poly2 operator-(const Poly2& o) const;
  Poly2 operator*(const Poly2& o) const;
  Poly2 operator*(Complex s) const;

  Poly2 dz() const;
  Poly2 dzbar() const;
  // z <-> zbar with conjugated coefficients; equals pointwise conjugation
  // on the diagonal.
  Poly2 conj_swap() const;

  Complex eval(Complex z, Complex zbar) const;
  double max_abs_coeff() const;
  bool is_zero(double eps = 1e-12) const;

 private:
  void trim();
  Mat c_;  // (deg_z+1) x (deg_zbar+1)
};

// Ratio of two Poly2, closed under +, *, d/dz, d/dzbar. No gcd reduction is
// attempted; degrees stay modest at the scales used here.
class RationalSymbol {
 public:
  RationalSymbol() : num_(), den_(Poly2::constant(1.0)) {}
  RationalSymbol(Poly2 num, Poly2 den);
  explicit RationalSymbol(Complex v) : num_(Poly2::constant(v)), den_(Poly2::constant(1.0)) {}

  static RationalSymbol z() { return RationalSymbol(Poly2::z(), Poly2::constant(1.0)); }
  static RationalSymbol zbar() { return RationalSymbol(Poly2::zbar(), Poly2::constant(1.0)); }

  const Poly2& num() const { return num_; }
  const Poly2& den() const { return den_; }

  RationalSymbol operator+(const RationalSymbol& o) const;
  RationalSymbol operator-(const RationalSymbol& o) const;
  RationalSymbol operator*(const RationalSymbol& o) const;
  RationalSymbol operator/(const RationalSymbol& o) const;
  RationalSymbol operator*(Complex s) const;

  RationalSymbol dz() const;
  RationalSymbol dzbar() const;
  RationalSymbol conj_swap() const;

  Complex eval(Complex z, Complex zbar) const;
  Complex eval_diag(Complex z) const { return eval(z, std::conj(z)); }

  // Zero / equality tests sample-free: the numerator of the reduced
  // difference must vanish coefficient-wise (relative eps 1e-12).
  bool is_zero(double eps = 1e-12) const;
  bool equals(const RationalSymbol& o, double eps = 1e-12) const;
  bool is_holomorphic(double eps = 1e-12) const { return dzbar().is_zero(eps); }
  bool is_real(double eps = 1e-12) const { return equals(conj_swap(), eps); }

 private:
  Poly2 num_, den_;
};

// Holomorphic-derivative operator sum_k a_k(z,zbar) d^k/dz^k acting on
// rational symbols. Closed under composition (Leibniz).
class HolDiffOp {
 public:
  HolDiffOp() = default;
  explicit HolDiffOp(std::vector<RationalSymbol> coeffs) : a_(std::move(coeffs)) {}
  static HolDiffOp mult(const RationalSymbol& f);
  static HolDiffOp ddz(Complex scale = 1.0);

  int order() const { return a_.empty() ? 0 : int(a_.size()) - 1; }
  const RationalSymbol& coeff(int k) const { return a_[k]; }

  RationalSymbol apply(const RationalSymbol& f) const;
  HolDiffOp compose(const HolDiffOp& rhs) const;  // this after rhs
  HolDiffOp operator+(const HolDiffOp& o) const;
  HolDiffOp operator*(Complex s) const;

 private:
  std::vector<RationalSymbol> a_;
};

// Polynomial in the momentum variable xi with z-dependent coefficients;
// the local holomorphic realization of an observable.
struct MomentumPolynomial {
  std::vector<RationalSymbol> coeff;  // coeff[k] multiplies xi^k
  int degree() const { return int(coeff.size()) - 1; }
};

// Weyl-symmetrized substitution of xihat into a momentum polynomial:
// each c_k(z) xi^k becomes the average over the k+1 insertion positions
// of the multiplication operator among the xihat factors.
HolDiffOp weyl_substitute(const MomentumPolynomial& h, const HolDiffOp& xihat);

}  // namespace gq
