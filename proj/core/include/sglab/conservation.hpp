#pragma once

#include "sglab/grid.hpp"
#include "sglab/params.hpp"

namespace sg {

/// The four limits of 1 - cos((varphi +- phi)/2) at the two grid ends,
/// estimated from edge averages.
struct BoundaryLimits {
  Complex plus_at_plus;    // sign +, x -> +inf
  Complex plus_at_minus;   // sign +, x -> -inf
  Complex minus_at_plus;   // sign -, x -> +inf
  Complex minus_at_minus;  // sign -, x -> -inf
};

enum class EnergyForm { Cosine, SinHalf };

/// Energy (1/2) int (phi_x^2 + phi_t^2) + V with V = int (1 - cos phi)
/// (Cosine) or the trig-identical V = 2 int sin^2(phi/2) (SinHalf).
/// Complex-valued for complex states; bilinear, no conjugation.
Complex energy(const FieldPair& p, EnergyForm form = EnergyForm::Cosine);

/// Momentum (1/2) int phi_t phi_x.
Complex momentum(const FieldPair& p);

/// Estimate the four limits by averaging the outer 2% of nodes; throws when
/// the tail is not stationary (adjacent 3% window differs by more than 1e-6).
BoundaryLimits boundary_limits(const FieldPair& varphi, const FieldPair& phi);

/// Conserved-quantity transfer across one BT:
///   E[varphi] = E[phi] + (2/a)(l+^+ - l-^+) + 2a(l+^- - l-^-)
///   P[varphi] = P[phi] + (1/a)(l+^+ - l-^+) -  a(l+^- - l-^-)
struct TransferResult {
  Complex E;
  Complex P;
};
TransferResult bt_transfer(Complex E_phi, Complex P_phi, const BoundaryLimits& lims,
                           const BTParameter& a);

/// Closed-form energy/momentum of a perturbed breather from the vacuum-level
/// values and the fitted parameter correction delta:
///   E = E_y + 8(beta + Re d)(1 + 1/q),  P = P_y + 4(beta + Re d)(1/q - 1),
///   q = 1 + 2 beta Re d + 2 alpha Im d + |d|^2.
TransferResult breather_identity(Complex E_y, Complex P_y, Complex delta,
                                 const SolitonParams& p);

}  // namespace sg
