#include <doctest.h>

#include <cmath>

#include "sglab/numerics.hpp"
#include "sglab/permutability.hpp"
#include "sglab/perturb.hpp"
#include "sglab/profiles.hpp"

using namespace sg;

namespace {
const Grid kG(40.0, 4096);

double sup_pair(const std::pair<Field, Field>& r) {
  return std::max(sup_norm(r.first), sup_norm(r.second));
}
}

TEST_CASE("composition params") {
  CHECK_THROWS(CompositionParams(Complex(1, 0), Complex(1, 0)));
  CHECK_THROWS(CompositionParams(Complex(1, 0), Complex(-1, 0)));
  const CompositionParams cp(Complex(0.5, 0.8), Complex(0.5, -0.8));
  CHECK(std::abs(cp.ell() - Complex(0, 0.8 / 0.5)) < 1e-15);
  CHECK(std::abs(cp.ell() * cp.ell_tilde() - 1.0) < 1e-15);
}

TEST_CASE("closed-form composition reproduces the conjugate kink") {
  const SolitonParams p(0.5, 0.3, -0.1);
  const FieldPair zero(kG);
  const FieldPair K = eval_profile(ProfileKind::ComplexKink, p, kG);
  const FieldPair Kb = eval_profile(ProfileKind::ConjugateKink, p, kG);
  const FieldPair B = eval_profile(ProfileKind::Breather, p, kG);
  const CompositionParams cp(Complex(p.beta, p.alpha()), Complex(p.beta, -p.alpha()));

  const FieldPair phi3 = compose_double_bt(B, zero, K, cp);
  CHECK(sup_norm(phi3.phi - Kb.phi) < 1e-9);
  CHECK(sup_norm(phi3.phi_t - Kb.phi_t) < 1e-9);

  // post-hoc: phi3 satisfies the a1-BT against phi0 = 0
  CHECK(sup_pair(bt_residual(phi3, zero, BTParameter(cp.a1))) < 1e-8);

  SUBCASE("swapped parameter order lands on the other kink (path independence)") {
    const CompositionParams swapped(cp.a2, cp.a1);
    const FieldPair phi3b = compose_double_bt(B, zero, Kb, swapped);
    CHECK(sup_norm(phi3b.phi - K.phi) < 1e-9);
    CHECK(sup_norm(phi3b.phi_t - K.phi_t) < 1e-9);
    CHECK(sup_pair(bt_residual(phi3b, zero, BTParameter(cp.a2))) < 1e-8);
  }

  SUBCASE("tangent-sum identity on the composed data") {
    // tan((varphi1 - phi0)/4) + ell~ tan((phi3 - phi1)/4) = 0
    double worst = 0.0;
    for (int i = 0; i < kG.n; ++i) {
      const Complex lhs = std::tan(0.25 * (B.phi[i] - zero.phi[i])) +
                          cp.ell_tilde() * std::tan(0.25 * (phi3.phi[i] - K.phi[i]));
      worst = std::max(worst, std::abs(lhs));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("degenerate composition returns the middle state") {
  const FieldPair zero(kG);
  const CompositionParams cp(Complex(0.5, 0.866), Complex(0.5, -0.866));
  const FieldPair out = compose_double_bt(zero, zero, zero, cp);
  CHECK(sup_norm(out.phi) < 1e-14);
  CHECK(sup_norm(out.phi_t) < 1e-14);
}

TEST_CASE("composition rejects inputs violating the chained BTs") {
  const SolitonParams p(0.5, 0.3, -0.1);
  const FieldPair zero(kG);
  const FieldPair B = eval_profile(ProfileKind::Breather, p, kG);
  const CompositionParams cp(Complex(p.beta, p.alpha()), Complex(p.beta, -p.alpha()));
  // middle state zero does not satisfy the a2-BT of zero with a breather on top
  CHECK_THROWS(compose_double_bt(B, zero, B, cp));
}

TEST_CASE("verify_permutability") {
  const SolitonParams p(0.5, 0.3, -0.1);

  SUBCASE("zero input: every discrepancy vanishes") {
    const PermutabilityReport rep = verify_permutability(Field(kG), Field(kG), p);
    CHECK(rep.roundtrip_error < 1e-10);
    CHECK(rep.kink_conjugacy < 1e-10);
    CHECK(rep.delta_conjugacy < 1e-12);
    CHECK(rep.im_y < 1e-12);
    CHECK(rep.compose_vs_newton < 1e-10);
  }

  SUBCASE("random real input at eta = 1e-3") {
    const FieldPair zw = random_bump_pair(kG, 1e-3, 17);
    const PermutabilityReport rep = verify_permutability(zw.phi, zw.phi_t, p);
    CHECK(rep.roundtrip_error < 1e-7);
    CHECK(rep.kink_conjugacy < 1e-7);
    CHECK(rep.delta_conjugacy < 1e-9);
    CHECK(rep.im_y < 1e-8);
    CHECK(rep.compose_vs_newton < 1e-7);
  }
}

TEST_CASE("realness shortcut") {
  const SolitonParams p(0.5, 0.3, -0.1);

  SUBCASE("vanishing data at sin(alpha x1) = 0") {
    const double x1 = 3.14159265358979323846 / p.alpha();  // sin(alpha x1) = 0
    const SolitonParams p0(p.beta, x1, 0.0);
    const Field y = realness_shortcut(Field(kG), Field(kG), 0.0, p0, kG);
    const FieldPair B = eval_profile(ProfileKind::Breather, p0, kG);
    CHECK(sup_norm(y - B.phi) < 1e-10);
    CHECK(sup_norm(imag_part(y)) == 0.0);
  }

  SUBCASE("matches the Newton descent at eta = 1e-3") {
    const FieldPair zw = random_bump_pair(kG, 1e-3, 29);
    const DescentResult d1 = descend_breather(zw.phi, zw.phi_t, p);
    const DescentResult d2 = descend_kink_to_zero(d1.u, d1.s, p);
    const Field y = realness_shortcut(zw.phi, d1.u, d1.param_correction, p, kG);
    CHECK(sup_norm(y - d2.u) < 1e-7);
    CHECK(sup_norm(imag_part(y)) == 0.0);
  }

  CHECK_THROWS(realness_shortcut(Field(kG), Field(kG), Complex(0.0, -p.alpha()), p, kG));
}

TEST_CASE("conjugate kink identities") {
  const SolitonParams p(0.5, 0.3, -0.1);
  const ConjugateKinkIdentities ids = conjugate_kink_identities(p, kG);
  CHECK(ids.tangent_gap < 1e-10);
  CHECK(ids.secant_gap < 1e-12);
  CHECK(ids.tan_gap < 1e-12);
  CHECK(ids.bt_form_gap < 1e-10);
}
