#include "sglab/permutability.hpp"

#include <cmath>

#include "sglab/numerics.hpp"
#include "sglab/profiles.hpp"

namespace sg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// arctan(ell * tan(psi)) on the continuous branch anchored near zero at the
// left edge. Homogeneous log form, no division by cos(psi).
Field scaled_arctan_of_tan(const Field& psi, Complex ell) {
  const int n = psi.size();
  Field out(psi.grid);
  for (int i = 0; i < n; ++i) {
    const Complex c = std::cos(psi[i]);
    const Complex s = ell * std::sin(psi[i]);
    const Complex num = c + Complex(0, 1) * s;
    const Complex den = c - Complex(0, 1) * s;
    if (std::abs(num) < 1e-140 || std::abs(den) < 1e-140)
      throw std::runtime_error("composition singular: arctan branch point reached");
    out[i] = Complex(0, -0.5) * std::log(num / den);
  }
  // Unwrap by pi multiples (arctan of tan is defined mod pi), then anchor the
  // left edge on the branch nearest zero.
  for (int i = 1; i < n; ++i) {
    const double k = std::round((out[i - 1].real() - out[i].real()) / kPi);
    out[i] += k * kPi;
  }
  const double off = std::round(out[0].real() / kPi) * kPi;
  if (off != 0.0)
    for (int i = 0; i < n; ++i) out[i] -= off;
  return out;
}

double sup_residual(const std::pair<Field, Field>& r) {
  return std::max(sup_norm(r.first), sup_norm(r.second));
}

}  // namespace

FieldPair compose_double_bt(const FieldPair& varphi1, const FieldPair& phi0,
                            const FieldPair& phi1, const CompositionParams& cp,
                            double check_tol) {
  check_same_grid(varphi1.phi, phi0.phi);
  check_same_grid(varphi1.phi, phi1.phi);
  if (sup_residual(bt_residual(phi1, phi0, BTParameter(cp.a2))) > check_tol)
    throw std::invalid_argument("compose_double_bt: (phi0, phi1) do not satisfy the a2-BT");
  if (sup_residual(bt_residual(varphi1, phi1, BTParameter(cp.a1))) > check_tol)
    throw std::invalid_argument("compose_double_bt: (phi1, varphi1) do not satisfy the a1-BT");

  const Grid& g = varphi1.grid();
  const Complex ell = cp.ell();
  Field psi(g);
  for (int i = 0; i < g.n; ++i) psi[i] = 0.25 * (varphi1.phi[i] - phi0.phi[i]);
  const Field theta = scaled_arctan_of_tan(psi, ell);

  FieldPair out(g);
  for (int i = 0; i < g.n; ++i) {
    out.phi[i] = phi1.phi[i] - 4.0 * theta[i];
    const Complex c = std::cos(psi[i]);
    const Complex s = std::sin(psi[i]);
    const Complex den = c * c + ell * ell * s * s;
    out.phi_t[i] =
        phi1.phi_t[i] - ell * (varphi1.phi_t[i] - phi0.phi_t[i]) / den;
  }
  return out;
}

PermutabilityReport verify_permutability(const Field& z0, const Field& w0,
                                         const SolitonParams& p,
                                         const SolverOptions& opt) {
  const Grid& g = z0.grid;

  // Recorded constraint values close the loop for inputs that do not satisfy
  // the modulation orthogonality exactly.
  const Field b0 = nondegeneracy_profile(ProfileKind::Breather, p, g);
  const FieldPair Bpair = eval_profile(ProfileKind::Breather, p, g);
  const FieldPair B1 = shift_derivatives(ProfileKind::Breather, p, g, 1);
  const Complex c_top = pair_integral(z0, B1.phi) + pair_integral(w0, B1.phi_t);

  const DescentResult d1 = descend_breather(z0, w0, p, opt);
  const Complex c_kink = pair_integral(d1.u, b0) + pair_integral(d1.s, Bpair.phi);
  const DescentResult d2 = descend_kink_to_zero(d1.u, d1.s, p, opt);

  const DescentResult a1 = ascend_zero_to_kink(d2.u, d2.s, d1.param_correction, p,
                                               std::conj(c_kink), opt, /*conjugate=*/true);
  const DescentResult a2 = ascend_kink_to_breather(a1.u, a1.s, d2.param_correction, p, c_top,
                                                   opt, /*conjugate=*/true);

  PermutabilityReport rep;
  rep.delta = d1.param_correction;
  rep.delta_tilde = d2.param_correction;
  rep.roundtrip_error = energy_norm(FieldPair(a2.u - z0, a2.s - w0));
  rep.kink_conjugacy = energy_norm(FieldPair(a1.u - conj(d1.u), a1.s - conj(d1.s)));
  rep.delta_conjugacy = std::abs(d1.param_correction - std::conj(d2.param_correction));
  rep.im_y = sup_norm(imag_part(d2.u)) + sup_norm(imag_part(d2.s));

  // Closed-form composition against the Newton-ascended conjugate kink pair.
  const FieldPair Kpair = eval_profile(ProfileKind::ComplexKink, p, g);
  const FieldPair Kbar = eval_profile(ProfileKind::ConjugateKink, p, g);
  const CompositionParams cp(Complex(p.beta, p.alpha()) + d1.param_correction,
                             Complex(p.beta, -p.alpha()) + d2.param_correction);
  const FieldPair top(Bpair.phi + z0, Bpair.phi_t + w0);
  const FieldPair mid(Kpair.phi + d1.u, Kpair.phi_t + d1.s);
  const FieldPair bottom(d2.u, d2.s);
  const FieldPair composed = compose_double_bt(top, bottom, mid, cp);
  const FieldPair newton(Kbar.phi + a1.u, Kbar.phi_t + a1.s);
  rep.compose_vs_newton = std::max(sup_norm(composed.phi - newton.phi),
                                   sup_norm(composed.phi_t - newton.phi_t));
  return rep;
}

Field realness_shortcut(const Field& z0, const Field& u0, Complex delta,
                        const SolitonParams& p, const Grid& g) {
  const double num = p.beta + delta.real();
  const double den = p.alpha() + delta.imag();
  if (std::abs(den) < 1e-12)
    throw std::domain_error("realness_shortcut: alpha + Im delta vanishes");
  const double ratio = num / den;

  const FieldPair Bpair = eval_profile(ProfileKind::Breather, p, g);
  const FieldPair Kpair = eval_profile(ProfileKind::ComplexKink, p, g);
  const int n = g.n;
  // theta(x) = arctan(ratio * tanh(Im(K+u0)/2)), real and bounded, unwrapped
  // so that y0 -> 0 at the left edge.
  std::vector<double> th(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double m = ratio * std::tanh(0.5 * (Kpair.phi[i] + u0[i]).imag());
    th[static_cast<std::size_t>(i)] = std::atan(m);
  }
  for (int i = 1; i < n; ++i) {
    const double k = std::round((th[static_cast<std::size_t>(i - 1)] -
                                 th[static_cast<std::size_t>(i)]) / kPi);
    th[static_cast<std::size_t>(i)] += k * kPi;
  }
  Field y(g);
  for (int i = 0; i < n; ++i)
    y[i] = Complex((Bpair.phi[i] + z0[i]).real() - 4.0 * th[static_cast<std::size_t>(i)], 0.0);
  return y;
}

ConjugateKinkIdentities conjugate_kink_identities(const SolitonParams& p, const Grid& g) {
  if (is_singular(p.x1, p)) throw std::domain_error("conjugate_kink_identities: singular x1");
  const double a = p.alpha(), b = p.beta;
  const FieldPair Bp = eval_profile(ProfileKind::Breather, p, g);
  const FieldPair K = eval_profile(ProfileKind::ComplexKink, p, g);
  const FieldPair Kb = eval_profile(ProfileKind::ConjugateKink, p, g);
  const Complex ell = Complex(0.0, a / b);  // (a1 - a2)/(a1 + a2) at delta = 0

  ConjugateKinkIdentities out{0, 0, 0, 0};
  for (int i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    const double t1 = a * p.x1, t2 = b * (x + p.x2);
    const double q = b * std::sin(t1) / (a * std::cosh(t2));

    const Complex lhs7 = std::tan(0.25 * (K.phi[i] - Kb.phi[i]));
    const Complex rhs7 = Complex(0.0, std::sin(t1) / std::cosh(t2));
    out.tangent_gap = std::max(out.tangent_gap, std::abs(lhs7 - rhs7));

    const Complex cb4 = std::cos(0.25 * Bp.phi[i]);
    const Complex tb4 = std::tan(0.25 * Bp.phi[i]);
    out.secant_gap = std::max(out.secant_gap, std::abs(1.0 / (cb4 * cb4) - (1.0 + q * q)));
    out.tan_gap = std::max(out.tan_gap, std::abs(tb4 * tb4 - q * q));

    const Complex lhs9 = Bp.phi_t[i] / (cb4 * cb4) / (1.0 + ell * ell * tb4 * tb4);
    const Complex rhs9 =
        4.0 * a * a * b * std::cos(t1) * std::cosh(t2) /
        (a * a * std::cosh(t2) * std::cosh(t2) + ell * ell * b * b * std::sin(t1) * std::sin(t1));
    out.bt_form_gap = std::max(out.bt_form_gap, std::abs(lhs9 - rhs9));
  }
  return out;
}

}  // namespace sg
