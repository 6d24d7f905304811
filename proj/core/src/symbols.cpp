#include "gq/symbols.hpp"

#include <cmath>

namespace gq {

Poly2 Poly2::constant(Complex v) {
  Mat c(1, 1);
  c(0, 0) = v;
  return Poly2(c);
}

Poly2 Poly2::z() { return monomial(1, 0, 1.0); }
Poly2 Poly2::zbar() { return monomial(0, 1, 1.0); }

Poly2 Poly2::monomial(int zpow, int zbarpow, Complex v) {
  Mat c = Mat::Zero(zpow + 1, zbarpow + 1);
  c(zpow, zbarpow) = v;
  return Poly2(c);
}

Complex Poly2::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i >= c_.rows() || j >= c_.cols()) return 0.0;
  return c_(i, j);
}

Poly2 Poly2::operator+(const Poly2& o) const {
  Mat c = Mat::Zero(std::max(c_.rows(), o.c_.rows()), std::max(c_.cols(), o.c_.cols()));
  c.topLeftCorner(c_.rows(), c_.cols()) = c_;
  c.topLeftCorner(o.c_.rows(), o.c_.cols()) += o.c_;
  return Poly2(c);
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + o * Complex(-1.0); }

Poly2 Poly2::operator*(const Poly2& o) const {
  Mat c = Mat::Zero(c_.rows() + o.c_.rows() - 1, c_.cols() + o.c_.cols() - 1);
  for (int i = 0; i < c_.rows(); ++i)
    for (int j = 0; j < c_.cols(); ++j) {
      if (c_(i, j) == Complex(0.0)) continue;
      c.block(i, j, o.c_.rows(), o.c_.cols()) += c_(i, j) * o.c_;
    }
  return Poly2(c);
}

Poly2 Poly2::operator*(Complex s) const { return Poly2(Mat(c_ * s)); }

Poly2 Poly2::dz() const {
  if (c_.rows() == 1) return Poly2();
  Mat c(c_.rows() - 1, c_.cols());
  for (int i = 1; i < c_.rows(); ++i) c.row(i - 1) = double(i) * c_.row(i);
  return Poly2(c);
}

Poly2 Poly2::dzbar() const {
  if (c_.cols() == 1) return Poly2();
  Mat c(c_.rows(), c_.cols() - 1);
  for (int j = 1; j < c_.cols(); ++j) c.col(j - 1) = double(j) * c_.col(j);
  return Poly2(c);
}

Poly2 Poly2::conj_swap() const { return Poly2(Mat(c_.conjugate().transpose())); }

Complex Poly2::eval(Complex z, Complex zbar) const {
  // Horner in z of Horner-in-zbar rows.
  Complex acc = 0.0;
  for (int i = int(c_.rows()) - 1; i >= 0; --i) {
    Complex row = 0.0;
    for (int j = int(c_.cols()) - 1; j >= 0; --j) row = row * zbar + c_(i, j);
    acc = acc * z + row;
  }
  return acc;
}

double Poly2::max_abs_coeff() const { return c_.cwiseAbs().maxCoeff(); }

bool Poly2::is_zero(double eps) const { return max_abs_coeff() <= eps; }

void Poly2::trim() {
  int r = int(c_.rows()), c = int(c_.cols());
  while (r > 1 && c_.row(r - 1).cwiseAbs().maxCoeff() == 0.0) --r;
  while (c > 1 && c_.col(c - 1).cwiseAbs().maxCoeff() == 0.0) --c;
  if (r != c_.rows() || c != c_.cols()) c_ = Mat(c_.topLeftCorner(r, c));
}

RationalSymbol::RationalSymbol(Poly2 num, Poly2 den) : num_(std::move(num)), den_(std::move(den)) {
  require(!den_.is_zero(0.0), "RationalSymbol: zero denominator");
  // Keep magnitudes tame: normalize by the denominator's largest coefficient.
  double s = den_.max_abs_coeff();
  if (s != 1.0 && s > 0.0) {
    num_ = num_ * Complex(1.0 / s);
    den_ = den_ * Complex(1.0 / s);
  }
}

static bool same_poly(const Poly2& a, const Poly2& b) {
  if (a.deg_z() != b.deg_z() || a.deg_zbar() != b.deg_zbar()) return false;
  return (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff() == 0.0;
}

RationalSymbol RationalSymbol::operator+(const RationalSymbol& o) const {
  if (same_poly(den_, o.den_)) return RationalSymbol(num_ + o.num_, den_);
  return RationalSymbol(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalSymbol RationalSymbol::operator-(const RationalSymbol& o) const {
  return *this + o * Complex(-1.0);
}

RationalSymbol RationalSymbol::operator*(const RationalSymbol& o) const {
  return RationalSymbol(num_ * o.num_, den_ * o.den_);
}

RationalSymbol RationalSymbol::operator/(const RationalSymbol& o) const {
  require(!o.num_.is_zero(0.0), "RationalSymbol: division by zero symbol");
  return RationalSymbol(num_ * o.den_, den_ * o.num_);
}

RationalSymbol RationalSymbol::operator*(Complex s) const {
  return RationalSymbol(num_ * s, den_);
}

RationalSymbol RationalSymbol::dz() const {
  return RationalSymbol(num_.dz() * den_ - num_ * den_.dz(), den_ * den_);
}

RationalSymbol RationalSymbol::dzbar() const {
  return RationalSymbol(num_.dzbar() * den_ - num_ * den_.dzbar(), den_ * den_);
}

RationalSymbol RationalSymbol::conj_swap() const {
  return RationalSymbol(num_.conj_swap(), den_.conj_swap());
}

Complex RationalSymbol::eval(Complex z, Complex zbar) const {
  return num_.eval(z, zbar) / den_.eval(z, zbar);
}

bool RationalSymbol::is_zero(double eps) const {
  double nscale = num_.max_abs_coeff();
  double dscale = den_.max_abs_coeff();
  return nscale <= eps * std::max(1.0, dscale);
}

bool RationalSymbol::equals(const RationalSymbol& o, double eps) const {
  Poly2 diff = num_ * o.den_ - o.num_ * den_;
  double scale = std::max({num_.max_abs_coeff() * o.den_.max_abs_coeff(),
                           o.num_.max_abs_coeff() * den_.max_abs_coeff(), 1.0});
  return diff.max_abs_coeff() <= eps * scale;
}

HolDiffOp HolDiffOp::mult(const RationalSymbol& f) { return HolDiffOp({f}); }

HolDiffOp HolDiffOp::ddz(Complex scale) {
  return HolDiffOp({RationalSymbol(0.0), RationalSymbol(scale)});
}

RationalSymbol HolDiffOp::apply(const RationalSymbol& f) const {
  RationalSymbol out(0.0);
  RationalSymbol der = f;
  for (size_t k = 0; k < a_.size(); ++k) {
    if (k > 0) der = der.dz();
    if (!a_[k].is_zero(0.0)) out = out + a_[k] * der;
  }
  return out;
}

HolDiffOp HolDiffOp::compose(const HolDiffOp& rhs) const {
  // (sum_i a_i d^i)(sum_j b_j d^j): a_i d^i (b_j g^{(j)}) via Leibniz.
  int n = order() + rhs.order();
  std::vector<RationalSymbol> out(n + 1, RationalSymbol(0.0));
  for (int i = 0; i <= order(); ++i) {
    if (a_[i].is_zero(0.0)) continue;
    for (int j = 0; j <= rhs.order(); ++j) {
      if (rhs.a_[j].is_zero(0.0)) continue;
      RationalSymbol bder = rhs.a_[j];
      double binom = 1.0;
      for (int l = 0; l <= i; ++l) {
        if (l > 0) {
          bder = bder.dz();
          binom = binom * double(i - l + 1) / double(l);
        }
        // term: C(i,l) b_j^{(l)} d^{i-l+j}
        out[i - l + j] = out[i - l + j] + a_[i] * bder * Complex(binom);
      }
    }
  }
  return HolDiffOp(out);
}

HolDiffOp HolDiffOp::operator+(const HolDiffOp& o) const {
  std::vector<RationalSymbol> out(std::max(a_.size(), o.a_.size()), RationalSymbol(0.0));
  for (size_t k = 0; k < a_.size(); ++k) out[k] = out[k] + a_[k];
  for (size_t k = 0; k < o.a_.size(); ++k) out[k] = out[k] + o.a_[k];
  return HolDiffOp(out);
}

HolDiffOp HolDiffOp::operator*(Complex s) const {
  std::vector<RationalSymbol> out = a_;
  for (auto& c : out) c = c * s;
  return HolDiffOp(out);
}

HolDiffOp weyl_substitute(const MomentumPolynomial& h, const HolDiffOp& xihat) {
  HolDiffOp total;
  std::vector<HolDiffOp> xipow;  // xihat^0 .. xihat^deg
  xipow.push_back(HolDiffOp::mult(RationalSymbol(1.0)));
  for (int k = 1; k <= h.degree(); ++k) xipow.push_back(xihat.compose(xipow[k - 1]));
  for (int k = 0; k <= h.degree(); ++k) {
    if (h.coeff[k].is_zero(0.0)) continue;
    HolDiffOp cmul = HolDiffOp::mult(h.coeff[k]);
    HolDiffOp sym;
    for (int j = 0; j <= k; ++j) {
      HolDiffOp term = xipow[j].compose(cmul).compose(xipow[k - j]);
      sym = (j == 0) ? term : sym + term;
    }
    total = total + sym * Complex(1.0 / double(k + 1));
  }
  return total;
}

}  // namespace gq
