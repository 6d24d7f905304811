#pragma once

// Frozen orientation / sign / normalization conventions. These were fixed
// once by the calibration tests (reference-projector trace against the
// probability cocycle, transported-family Gram against the transition
// amplitude, identity holonomy on admissible loops) and must not be edited
// independently of each other.

namespace gq::conv {

// omega = i * gw(zbar, z) dzbar ^ dz with gw > 0 on the diagonal; surface
// integrals of i*phi*dzbar^dz are evaluated as integral of 2*phi dA with
// the orientation that makes the total flux of (omega/hbar + rho) over the
// sphere equal +N * 2pi.

// Hamilton field: i_X omega = -dH, so X_H = -(i/gw)(dzbar(H) d_z - dz(H) d_zbar)
// and {z, zbar} = +i on the plane model.

// Groupoid slot order: the pair y|x carries Phi(ybar-slot, x-slot); the
// probability cocycle then matches tr(P(x)P(y)) for the bundled reference
// quantizations (bra = y, ket = x).

// Fundamental 1-form on a loop, nu = s1*(1/2) d(arg q) + s2*(1/2) Im(dz(ln det g) dz).
inline constexpr double kNuS1 = -1.0;
inline constexpr double kNuS2 = -1.0;

// Quantization condition: defect = dist((flux(Sigma) + loop integral of nu)/2pi, Z).
// With this sign the condition is equivalent to identity holonomy of the
// transport connection; the loop's Gamma-action uses the same orientation:
// S_Gamma(beta, alpha) = int_{alpha->beta} [Im(dzPhi dz) + nu].

// Loop measure: dsigma = (4 pi hbar)^(-1/2) * (chart arc length), so that
// dsigma0 = |dz| and quasimode norms satisfy |u|^2 -> int dsigma0.

// Modular function: Delta = |q| * (2 det g)^(1/2). The factor 2 is the
// half-form normalization that makes |u|^2 / int dsigma0 -> 1; det g itself
// keeps the bare Hermitian normalization (plane: det g = 1).
inline constexpr double kDeltaMetricFactor = 2.0;

}  // namespace gq::conv
