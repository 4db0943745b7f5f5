#include "sglab/conservation.hpp"

#include <cmath>

#include "sglab/numerics.hpp"

namespace sg {

Complex energy(const FieldPair& p, EnergyForm form) {
  const Field px = differentiate(p.phi);
  const int n = p.phi.size();
  auto w = [&](int i) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; };
  Complex kin{}, pot{};
  for (int i = 0; i < n; ++i) {
    kin += w(i) * (px[i] * px[i] + p.phi_t[i] * p.phi_t[i]);
    if (form == EnergyForm::Cosine) {
      pot += w(i) * (1.0 - std::cos(p.phi[i]));
    } else {
      const Complex s = std::sin(0.5 * p.phi[i]);
      pot += w(i) * 2.0 * s * s;
    }
  }
  const double h = p.grid().h();
  return 0.5 * h * kin + h * pot;
}

Complex momentum(const FieldPair& p) {
  const Field px = differentiate(p.phi);
  return 0.5 * pair_integral(p.phi_t, px);
}

namespace {

Complex window_mean(const Field& f, int lo, int hi) {  // [lo, hi)
  Complex acc{};
  for (int i = lo; i < hi; ++i) acc += f[i];
  return acc / static_cast<double>(hi - lo);
}

}  // namespace

BoundaryLimits boundary_limits(const FieldPair& varphi, const FieldPair& phi) {
  check_same_grid(varphi.phi, phi.phi);
  const Grid& g = varphi.grid();
  const int n = g.n;
  const int w2 = std::max(2, n / 50);   // outer 2%
  const int w5 = std::max(4, n / 20);   // outer 5%

  Field plus(g), minus(g);
  for (int i = 0; i < n; ++i) {
    plus[i] = 1.0 - std::cos(0.5 * (varphi.phi[i] + phi.phi[i]));
    minus[i] = 1.0 - std::cos(0.5 * (varphi.phi[i] - phi.phi[i]));
  }

  auto estimate = [&](const Field& f, bool right) {
    const int a0 = right ? n - w2 : 0;
    const int a1 = right ? n : w2;
    const int b0 = right ? n - w5 : w2;
    const int b1 = right ? n - w2 : w5;
    const Complex m_outer = window_mean(f, a0, a1);
    const Complex m_inner = window_mean(f, b0, b1);
    if (std::abs(m_outer - m_inner) > 1e-6)
      throw std::runtime_error("boundary_limits: tail not stationary, limit undefined");
    return m_outer;
  };

  BoundaryLimits lims;
  lims.plus_at_plus = estimate(plus, true);
  lims.plus_at_minus = estimate(plus, false);
  lims.minus_at_plus = estimate(minus, true);
  lims.minus_at_minus = estimate(minus, false);
  return lims;
}

TransferResult bt_transfer(Complex E_phi, Complex P_phi, const BoundaryLimits& lims,
                           const BTParameter& ap) {
  const Complex a = ap.a;
  const Complex dplus = lims.plus_at_plus - lims.plus_at_minus;
  const Complex dminus = lims.minus_at_plus - lims.minus_at_minus;
  TransferResult r;
  r.E = E_phi + 2.0 / a * dplus + 2.0 * a * dminus;
  r.P = P_phi + 1.0 / a * dplus - a * dminus;
  return r;
}

TransferResult breather_identity(Complex E_y, Complex P_y, Complex delta,
                                 const SolitonParams& p) {
  const double b = p.beta, al = p.alpha();
  const Complex q = 1.0 + 2.0 * b * delta.real() + 2.0 * al * delta.imag() +
                    std::norm(delta);
  if (std::abs(q) == 0.0)
    throw std::domain_error("breather_identity: vanishing denominator");
  const Complex bre = b + delta.real();
  TransferResult r;
  r.E = E_y + 8.0 * bre * (1.0 + 1.0 / q);
  r.P = P_y + 4.0 * bre * (1.0 / q - 1.0);
  return r;
}

}  // namespace sg
