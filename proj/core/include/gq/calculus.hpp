#pragma once

#include "gq/geometry.hpp"
#include "gq/symbols.hpp"

namespace gq {

// {H,G} built from omega = i gw dzbar^dz with i_X omega = -dH. On the
// plane this gives {z, zbar} = +i.
RationalSymbol poisson_bracket(const KahlerModel& m, const RationalSymbol& h,
                               const RationalSymbol& g);

// Coefficient a with ad(H)_+ = a * d/dz (the dbar-part annihilates
// antiholomorphic functions automatically).
RationalSymbol hamilton_plus(const KahlerModel& m, const RationalSymbol& h);

RationalSymbol omega_laplacian(const KahlerModel& m, const RationalSymbol& h);

enum class FiltrationClass { kOne = 1, kTwo = 2, kOther = 3 };

struct HTensor {
  RationalSymbol value;
  FiltrationClass cls = FiltrationClass::kOther;
  bool invertible = false;  // value not identically zero
};

// HH with {{H,f},g} = HH df dg for holomorphic f, g.
HTensor hh_tensor(const KahlerModel& m, const RationalSymbol& h);

RationalSymbol quantum_deformation(const KahlerModel& m, const RationalSymbol& h);
RationalSymbol secondary_deformation(const KahlerModel& m, const RationalSymbol& h);

// HH-Laplacian and D(H) of the second-order machinery, as symbol operators
// with the quarter-power conjugations expanded to rational coefficients.
HolDiffOp hh_laplace_op(const KahlerModel& m, const RationalSymbol& h);
HolDiffOp dee_op(const KahlerModel& m, const RationalSymbol& h);

// xihat' = dF - (hbar/2) dz(ln M') - hbar d/dz; conjugating the momentum
// operator by M'^(1/2) once and for all keeps every coefficient rational.
HolDiffOp conjugated_momentum(const KahlerModel& m);

struct Realization {
  MomentumPolynomial h;       // coefficients c_k(z), holomorphic
  double residual = 0.0;      // coefficient-scale residual of the defining identity
};

// Solve H = M'^(-1/2) Weyl[h](dF - hbar d) M'^(1/2) applied to 1, degree <= 2.
Realization holomorphic_realization(const KahlerModel& m, const RationalSymbol& h, int degree);

// Operator of left star multiplication by H (Theorem-1 route): the
// Weyl-substituted realization acting on symbols.
HolDiffOp left_mult_op(const KahlerModel& m, const RationalSymbol& h, int degree);

// Closed-form left multiplication (Theorem-2 route).
enum class Theorem2Case { kI, kII, kIII };
HolDiffOp left_mult_theorem2_op(const KahlerModel& m, const RationalSymbol& h, Theorem2Case c);

// M'^(-1/2) L M'^(1/2) as an operator, and applied to the constant 1.
HolDiffOp conjugate_by_density_sqrt(const HolDiffOp& op, const RationalSymbol& density);
RationalSymbol conjugate_apply_to_one(const HolDiffOp& op, const RationalSymbol& density);

// Bundled observable presets.
RationalSymbol preset_symbol(const KahlerModel& m, const std::string& name);
std::vector<std::string> preset_names(const KahlerModel& m);

}  // namespace gq
