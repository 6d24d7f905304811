#include "gq/calculus.hpp"

#include <cmath>

namespace gq {

RationalSymbol poisson_bracket(const KahlerModel& m, const RationalSymbol& h,
                               const RationalSymbol& g) {
  RationalSymbol term = h.dzbar() * g.dz() - h.dz() * g.dzbar();
  return term / m.gw() * Complex(0.0, -1.0);
}

RationalSymbol hamilton_plus(const KahlerModel& m, const RationalSymbol& h) {
  return h.dzbar() / m.gw() * Complex(0.0, -1.0);
}

RationalSymbol omega_laplacian(const KahlerModel& m, const RationalSymbol& h) {
  return h.dz().dzbar() / m.gw() * Complex(2.0);
}

HTensor hh_tensor(const KahlerModel& m, const RationalSymbol& h) {
  HTensor out;
  RationalSymbol inner = h.dzbar() / m.gw();
  out.value = (inner.dzbar() / m.gw()) * Complex(-1.0);
  if (out.value.is_zero()) {
    out.cls = FiltrationClass::kOne;
    out.invertible = false;
  } else if (out.value.is_holomorphic()) {
    out.cls = FiltrationClass::kTwo;
    out.invertible = true;
  } else {
    out.cls = FiltrationClass::kOther;
    out.invertible = false;
  }
  return out;
}

RationalSymbol quantum_deformation(const KahlerModel& m, const RationalSymbol& h) {
  double hb = m.hbar();
  RationalSymbol out = h - omega_laplacian(m, h) * Complex(hb / 4.0);
  const RationalSymbol& ratio = m.mprime_over_momega();
  RationalSymbol dlog = ratio.dz() / ratio;  // d/dz of ln|m'/m_omega|
  if (!dlog.is_zero())
    out = out - hamilton_plus(m, h) * dlog * Complex(0.0, hb / 2.0);
  return out;
}

HolDiffOp hh_laplace_op(const KahlerModel& m, const RationalSymbol& h) {
  HTensor t = hh_tensor(m, h);
  require(t.cls == FiltrationClass::kTwo, "hh_laplace_op: needs a class-2 observable");
  require(t.invertible, "hh_laplace_op: HH tensor degenerate");
  RationalSymbol hh = t.value;
  return HolDiffOp({RationalSymbol(0.0), hh.dz() * Complex(0.5), hh});
}

HolDiffOp dee_op(const KahlerModel& m, const RationalSymbol& h) {
  // -(1/2) HH^(-1/4) o HHLaplace o HH^(1/4) with the quarter powers expanded:
  // D(H) f = -(1/2) HH f'' - (1/2) HH' f' - [ (1/8) HH'' - (1/32) HH'^2/HH ] f.
  // The overall -(1/2) against the HH of the double-bracket identity is
  // pinned by the Theorem-1 route (left multiplication of the quartic on
  // the plane is mult - 2 hbar zbar z^2 d + hbar^2 z^2 d^2 with HH = -2z^2).
  HTensor t = hh_tensor(m, h);
  require(t.cls == FiltrationClass::kTwo && t.invertible,
          "dee_op: needs class 2 with invertible HH");
  RationalSymbol hh = t.value, dh = t.value.dz(), d2h = dh.dz();
  RationalSymbol c2 = hh * Complex(-0.5);
  RationalSymbol c1 = dh * Complex(-0.5);
  RationalSymbol c0 = d2h * Complex(-1.0 / 8.0) + dh * dh / hh * Complex(1.0 / 32.0);
  return HolDiffOp({c0, c1, c2});
}

HolDiffOp conjugate_by_density_sqrt(const HolDiffOp& op, const RationalSymbol& density) {
  // M^(-1/2) (sum c_k d^k) M^(1/2) = sum c_k (d + phi')^k, phi' = (1/2) M'/M.
  RationalSymbol phi1 = density.dz() / density * Complex(0.5);
  HolDiffOp dshift = HolDiffOp::ddz() + HolDiffOp::mult(phi1);
  HolDiffOp out = HolDiffOp::mult(op.coeff(0));
  HolDiffOp pow = HolDiffOp::mult(RationalSymbol(1.0));
  for (int k = 1; k <= op.order(); ++k) {
    pow = dshift.compose(pow);
    out = out + HolDiffOp::mult(op.coeff(k)).compose(pow);
  }
  return out;
}

RationalSymbol conjugate_apply_to_one(const HolDiffOp& op, const RationalSymbol& density) {
  return conjugate_by_density_sqrt(op, density).apply(RationalSymbol(1.0));
}

RationalSymbol secondary_deformation(const KahlerModel& m, const RationalSymbol& h) {
  double hb = m.hbar();
  RationalSymbol corr = conjugate_apply_to_one(dee_op(m, h), m.mprime_density());
  return quantum_deformation(m, h) + corr * Complex(hb * hb);
}

HolDiffOp conjugated_momentum(const KahlerModel& m) {
  const RationalSymbol& mp = m.mprime_density();
  RationalSymbol a = m.dz_F() - mp.dz() / mp * Complex(0.5 * m.hbar());
  return HolDiffOp({a, RationalSymbol(-m.hbar())});
}

Realization holomorphic_realization(const KahlerModel& m, const RationalSymbol& h,
                                    int degree) {
  require(degree >= 0 && degree <= 2,
          "holomorphic_realization: Weyl symmetrization implemented for degree <= 2");
  HolDiffOp xihat = conjugated_momentum(m);

  int pmax = std::max(h.num().deg_z(), h.den().deg_z()) + degree + 2;
  // Basis responses S_{k,p} = Weyl[z^p xi^k] applied to 1.
  std::vector<RationalSymbol> resp;
  std::vector<std::pair<int, int>> idx;  // (k, p)
  for (int k = 0; k <= degree; ++k)
    for (int p = 0; p <= pmax; ++p) {
      MomentumPolynomial mono;
      mono.coeff.assign(k + 1, RationalSymbol(0.0));
      mono.coeff[k] = RationalSymbol(Poly2::monomial(p, 0, 1.0), Poly2::constant(1.0));
      resp.push_back(weyl_substitute(mono, xihat).apply(RationalSymbol(1.0)));
      idx.emplace_back(k, p);
    }

  // Least squares on diagonal samples, then a symbolic residual check.
  int nunk = int(resp.size());
  int ns = 3 * nunk + 8;
  SampleStream ss(0x5eed5eedULL);
  Mat a(ns, nunk);
  Vec b(ns);
  for (int s = 0; s < ns; ++s) {
    Complex z = ss.disk(1.4) + Complex(0.15, -0.1);  // avoid exact symmetry points
    Complex zb = std::conj(z);
    for (int c = 0; c < nunk; ++c) a(s, c) = resp[c].eval(z, zb);
    b(s) = h.eval(z, zb);
  }
  Vec gamma = a.completeOrthogonalDecomposition().solve(b);

  Realization out;
  out.h.coeff.assign(degree + 1, RationalSymbol(0.0));
  RationalSymbol recon(0.0);
  for (int c = 0; c < nunk; ++c) {
    Complex g = gamma(c);
    if (std::abs(g) < 1e-11) continue;
    auto [k, p] = idx[c];
    out.h.coeff[k] = out.h.coeff[k] +
        RationalSymbol(Poly2::monomial(p, 0, g), Poly2::constant(1.0));
    recon = recon + resp[c] * g;
  }
  RationalSymbol resid = h - recon;
  out.residual = resid.is_zero(1e-8) ? 0.0 : 1.0;
  if (out.residual != 0.0)
    throw std::runtime_error(
        "holomorphic_realization: no polynomial realization at degree " +
        std::to_string(degree) + " (symbolic residual nonzero)");
  return out;
}

HolDiffOp left_mult_op(const KahlerModel& m, const RationalSymbol& h, int degree) {
  Realization r = holomorphic_realization(m, h, degree);
  return weyl_substitute(r.h, conjugated_momentum(m));
}

HolDiffOp left_mult_theorem2_op(const KahlerModel& m, const RationalSymbol& h,
                                Theorem2Case c) {
  HTensor t = hh_tensor(m, h);
  double hb = m.hbar();
  RationalSymbol hdef = quantum_deformation(m, h);
  HolDiffOp first = HolDiffOp::mult(hdef) +
      HolDiffOp::mult(hamilton_plus(m, h)).compose(HolDiffOp::ddz()) * Complex(0.0, -hb);
  switch (c) {
    case Theorem2Case::kI:
      require(t.cls == FiltrationClass::kOne, "theorem 2 case I needs class 1");
      return first;
    case Theorem2Case::kII: {
      require(t.cls != FiltrationClass::kOther, "theorem 2 case II needs class <= 2");
      // Dual metric must be Ricci-flat: det g' (= M' density) has harmonic log.
      RationalSymbol ric = (m.mprime_density().dz() / m.mprime_density()).dzbar();
      require(ric.is_zero(), "theorem 2 case II: dual metric is not Ricci-flat");
      const RationalSymbol& g2 = m.mprime_density();
      HolDiffOp second = HolDiffOp::mult(RationalSymbol(1.0) / g2)
                             .compose(HolDiffOp::ddz())
                             .compose(HolDiffOp::mult(g2 * t.value))
                             .compose(HolDiffOp::ddz());
      // Coefficient -1/2 against the double-bracket HH, as in dee_op.
      return first + second * Complex(-0.5 * hb * hb);
    }
    case Theorem2Case::kIII: {
      require(t.cls == FiltrationClass::kTwo && t.invertible,
              "theorem 2 case III needs class 2 with nondegenerate HH");
      HolDiffOp dee = conjugate_by_density_sqrt(dee_op(m, h), m.mprime_density());
      return first + dee * Complex(hb * hb);
    }
  }
  throw std::logic_error("unreachable");
}

RationalSymbol preset_symbol(const KahlerModel& m, const std::string& name) {
  if (name == "one") return RationalSymbol(1.0);
  RationalSymbol z = RationalSymbol::z(), zb = RationalSymbol::zbar();
  if (m.name() == "plane") {
    if (name == "oscillator") return zb * z;
    if (name == "quartic") return zb * zb * z * z;
    if (name == "z") return z;
    if (name == "zbar") return zb;
  } else {
    int n = m.level_n();
    double c2 = m.hbar() * (n + 2) / 2.0;
    Poly2 d = Poly2::constant(1.0) + Poly2::monomial(1, 1, 1.0);
    if (name == "spin_z")
      return RationalSymbol(Poly2::monomial(1, 1, c2) - Poly2::constant(c2), d);
    if (name == "spin_x")
      return RationalSymbol(Poly2::monomial(1, 0, c2) + Poly2::monomial(0, 1, c2), d);
    if (name == "spin_y")
      return RationalSymbol(Poly2::monomial(1, 0, Complex(0, c2)) +
                                Poly2::monomial(0, 1, Complex(0, -c2)),
                            d);
    if (name == "spin_z_sq") {
      RationalSymbol sz(Poly2::monomial(1, 1, c2) - Poly2::constant(c2), d);
      return sz * sz;
    }
  }
  throw std::invalid_argument("unknown hamiltonian preset '" + name + "' for model " + m.name());
}

std::vector<std::string> preset_names(const KahlerModel& m) {
  if (m.name() == "plane") return {"oscillator", "quartic", "z", "zbar", "one"};
  return {"spin_x", "spin_y", "spin_z", "spin_z_sq", "one"};
}

}  // namespace gq
