#pragma once

#include "sglab/backlund.hpp"
#include "sglab/grid.hpp"
#include "sglab/params.hpp"

namespace sg {

/// Parameters of a double-BT composition.
struct CompositionParams {
  Complex a1;
  Complex a2;

  CompositionParams(Complex first, Complex second) : a1(first), a2(second) {
    if (std::abs(a1 - a2) == 0.0 || std::abs(a1 + a2) == 0.0)
      throw std::invalid_argument("CompositionParams: need a1 != +-a2");
  }
  Complex ell() const { return (a1 - a2) / (a1 + a2); }
  Complex ell_tilde() const { return (a1 + a2) / (a1 - a2); }
};

/// Closed-form double-BT composition: from the chain
/// B(phi0) --a2--> phi1 --a1--> varphi1, produce phi3 with
///   phi3 - phi1 = -4 arctan( ell tan((varphi1 - phi0)/4) )
/// (continuous branch anchored at the left edge) and the matching second
/// component. The inputs must satisfy their BTs to check_tol.
FieldPair compose_double_bt(const FieldPair& varphi1, const FieldPair& phi0,
                            const FieldPair& phi1, const CompositionParams& cp,
                            double check_tol = 1e-6);

struct PermutabilityReport {
  double roundtrip_error;    // ||(z~,w~) - (z0,w0)||_{H1xL2}
  double kink_conjugacy;     // ||(u~,s~) - conj(u0,s0)||_{H1xL2}
  double delta_conjugacy;    // |delta - conj(delta~)|
  double im_y;               // sup |Im y0| + sup |Im v0|
  double compose_vs_newton;  // closed-form phi3 vs Newton-ascended conjugate pair
  Complex delta;             // fitted at the breather level
  Complex delta_tilde;       // fitted at the kink level
};

/// Descend twice along the K path, re-ascend along the conj(K) path, and
/// compare: the loop must close and the vacuum-level pair must be real.
PermutabilityReport verify_permutability(const Field& z0, const Field& w0,
                                         const SolitonParams& p,
                                         const SolverOptions& opt = {});

/// Solve y0 from tan((B + z0 - y0)/4) =
/// ((beta + Re delta)/(alpha + Im delta)) tanh(Im(K + u0)/2); real output.
Field realness_shortcut(const Field& z0, const Field& u0, Complex delta,
                        const SolitonParams& p, const Grid& g);

struct ConjugateKinkIdentities {
  double tangent_gap;   // tan((K - conj K)/4) vs i sin(theta1)/cosh(theta2)
  double secant_gap;    // sec^2(B/4) = 1 + q^2
  double tan_gap;       // tan^2(B/4) = q^2
  double bt_form_gap;   // the ell-weighted B_t identity
};
ConjugateKinkIdentities conjugate_kink_identities(const SolitonParams& p, const Grid& g);

}  // namespace sg
