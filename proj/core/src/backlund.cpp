#include "sglab/backlund.hpp"

#include <cmath>

#include "sglab/numerics.hpp"

namespace sg {

namespace {

// One BT interface: upper profile U over lower profile L with base parameter
// a0. Carries every closed-form field the linearized solves need. The same
// decaying factor mu serves the descent ODE u' + (mu'/mu) u = f and the
// ascent ODE u' - (mu'/mu) u = f at this level.
struct Interface {
  Grid g;
  Complex a0;
  Field U, U_t, U_x, U_tx;   // upper profile and derivatives
  Field L_, L_t, L_x;        // lower profile
  Field sum, dif;            // U + L, U - L (value fields)
  Field sinS0, cosS0;        // sin/cos((U+L)/2)
  Field sinD0, cosD0;        // sin/cos((U-L)/2)
  Field mu;
  Field gsel;                // inv(a0)^2 sinS0 + sinD0, the delta-selection field

  Complex inv_a0() const { return 1.0 / a0; }

  // Linearized ODE coefficient P = (inv(a0) cosS0 + a0 cosD0)/2; mu' = P mu.
  Field ode_coefficient() const {
    Field out(g);
    const Complex ia = inv_a0();
    for (int i = 0; i < g.n; ++i) out[i] = 0.5 * (ia * cosS0[i] + a0 * cosD0[i]);
    return out;
  }
};

void angle_sums(const ProfileEvaluator& up, const ProfileEvaluator& lo, const Grid& g,
                Field& sinS, Field& cosS, Field& sinD, Field& cosD) {
  sinS = Field(g); cosS = Field(g); sinD = Field(g); cosD = Field(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    const Complex su = up.sin_half(x), cu = up.cos_half(x);
    const Complex sl = lo.sin_half(x), cl = lo.cos_half(x);
    sinS[i] = su * cl + cu * sl;
    cosS[i] = cu * cl - su * sl;
    sinD[i] = su * cl - cu * sl;
    cosD[i] = cu * cl + su * sl;
  }
}

Field mu_breather(const SolitonParams& p, const Grid& g, bool conjugate) {
  const double a = p.alpha(), b = p.beta;
  Field out(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    const double t1 = a * p.x1, t2 = b * (x + p.x2);
    const double den = a * a * std::cosh(t2) * std::cosh(t2) + b * b * std::sin(t1) * std::sin(t1);
    out[i] = std::cosh(Complex(t2, conjugate ? -t1 : t1)) / den;
  }
  return out;
}

Field mu_kink(const SolitonParams& p, const Grid& g, bool conjugate) {
  const double a = p.alpha(), b = p.beta;
  Field out(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    out[i] = 1.0 / std::cosh(Complex(b * (x + p.x2), (conjugate ? -1.0 : 1.0) * a * p.x1));
  }
  return out;
}

Field mu_2soliton(ProfileKind kind, const SolitonParams& p, const Grid& g) {
  const double b = p.beta, ga = p.gamma();
  Field out(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    const double t1 = ga * p.x1, t2 = ga * (x + p.x2);
    const double num = std::cosh(ga * (x + p.x1 + p.x2));
    const double den = kind == ProfileKind::TwoKink
                           ? std::cosh(t1) * std::cosh(t1) + b * b * std::sinh(t2) * std::sinh(t2)
                           : b * b * std::cosh(t2) * std::cosh(t2) + std::sinh(t1) * std::sinh(t1);
    out[i] = num / den;
  }
  return out;
}

Field mu_q(const SolitonParams& p, const Grid& g, bool growing) {
  const double ga = p.gamma();
  Field out(g);
  for (int i = 0; i < g.n; ++i) {
    const double c = std::cosh(ga * (g.node(i) + p.x1 + p.x2));
    out[i] = growing ? c : 1.0 / c;
  }
  return out;
}

Field sample_field(const ProfileEvaluator& ev, const Grid& g, Complex (ProfileEvaluator::*m)(double) const) {
  Field out(g);
  for (int i = 0; i < g.n; ++i) out[i] = (ev.*m)(g.node(i));
  return out;
}

Interface make_breather_kink(const SolitonParams& p, const Grid& g, bool conj_path) {
  Interface f;
  f.g = g;
  f.a0 = conj_path ? Complex(p.beta, -p.alpha()) : Complex(p.beta, p.alpha());
  const ProfileEvaluator B{ProfileKind::Breather, p};
  const ProfileEvaluator K{conj_path ? ProfileKind::ConjugateKink : ProfileKind::ComplexKink, p};
  if (is_singular(p.x1, p))
    throw std::domain_error("breather/kink interface: singular x1");
  f.U = sample_field(B, g, &ProfileEvaluator::value);
  f.U_t = sample_field(B, g, &ProfileEvaluator::dt);
  f.U_x = sample_field(B, g, &ProfileEvaluator::dx);
  f.U_tx = shift_derivatives(ProfileKind::Breather, p, g, 2).phi_t;
  f.L_ = sample_field(K, g, &ProfileEvaluator::value);
  f.L_t = sample_field(K, g, &ProfileEvaluator::dt);
  f.L_x = sample_field(K, g, &ProfileEvaluator::dx);
  f.sum = f.U + f.L_;
  f.dif = f.U - f.L_;
  angle_sums(B, K, g, f.sinS0, f.cosS0, f.sinD0, f.cosD0);
  f.mu = mu_breather(p, g, conj_path);
  const Complex ia2 = f.inv_a0() * f.inv_a0();
  f.gsel = Field(g);
  for (int i = 0; i < g.n; ++i) f.gsel[i] = ia2 * f.sinS0[i] + f.sinD0[i];
  return f;
}

Interface make_kink_zero(const SolitonParams& p, const Grid& g, bool conj_path) {
  Interface f;
  f.g = g;
  f.a0 = conj_path ? Complex(p.beta, p.alpha()) : Complex(p.beta, -p.alpha());
  const ProfileEvaluator K{conj_path ? ProfileKind::ConjugateKink : ProfileKind::ComplexKink, p};
  if (is_singular(p.x1, p))
    throw std::domain_error("kink/zero interface: singular x1");
  f.U = sample_field(K, g, &ProfileEvaluator::value);
  f.U_t = sample_field(K, g, &ProfileEvaluator::dt);
  f.U_x = sample_field(K, g, &ProfileEvaluator::dx);
  f.U_tx = differentiate(f.U_t);
  f.L_ = Field(g); f.L_t = Field(g); f.L_x = Field(g);
  f.sum = f.U;
  f.dif = f.U;
  Field s(g), c(g);
  for (int i = 0; i < g.n; ++i) {
    s[i] = K.sin_half(g.node(i));
    c[i] = K.cos_half(g.node(i));
  }
  f.sinS0 = s; f.cosS0 = c; f.sinD0 = s; f.cosD0 = c;
  f.mu = mu_kink(p, g, conj_path);
  const Complex ia2 = f.inv_a0() * f.inv_a0();
  f.gsel = Field(g);
  for (int i = 0; i < g.n; ++i) f.gsel[i] = ia2 * f.sinS0[i] + f.sinD0[i];
  return f;
}

double bt_parameter_d(ProfileKind kind, double beta) {
  const double a = std::sqrt((1.0 + beta) / (1.0 - beta));
  return kind == ProfileKind::TwoKink ? -a : a;
}

Interface make_2soliton_kink(ProfileKind kind, const SolitonParams& p, const Grid& g) {
  if (kind != ProfileKind::TwoKink && kind != ProfileKind::KinkAntikink)
    throw std::invalid_argument("2-soliton interface: kind must be TwoKink or KinkAntikink");
  Interface f;
  f.g = g;
  f.a0 = bt_parameter_d(kind, p.beta);
  const ProfileEvaluator D{kind, p};
  const SolitonParams q(-p.beta, p.x1, p.x2);  // kink at speed -beta, shift x1+x2
  const ProfileEvaluator Q{ProfileKind::RealKink, q};
  f.U = sample_field(D, g, &ProfileEvaluator::value);
  f.U_t = sample_field(D, g, &ProfileEvaluator::dt);
  f.U_x = sample_field(D, g, &ProfileEvaluator::dx);
  f.U_tx = shift_derivatives(kind, p, g, 2).phi_t;
  f.L_ = sample_field(Q, g, &ProfileEvaluator::value);
  f.L_t = sample_field(Q, g, &ProfileEvaluator::dt);
  f.L_x = sample_field(Q, g, &ProfileEvaluator::dx);
  f.sum = f.U + f.L_;
  f.dif = f.U - f.L_;
  angle_sums(D, Q, g, f.sinS0, f.cosS0, f.sinD0, f.cosD0);
  f.mu = mu_2soliton(kind, p, g);
  const Complex ia2 = f.inv_a0() * f.inv_a0();
  f.gsel = Field(g);
  for (int i = 0; i < g.n; ++i) f.gsel[i] = ia2 * f.sinS0[i] + f.sinD0[i];
  return f;
}

Interface make_q_zero(const SolitonParams& p, const Grid& g) {
  Interface f;
  f.g = g;
  f.a0 = std::sqrt((1.0 - p.beta) / (1.0 + p.beta));  // a(beta)^{-1} = a(-beta)
  const SolitonParams q(-p.beta, p.x1, p.x2);
  const ProfileEvaluator Q{ProfileKind::RealKink, q};
  f.U = sample_field(Q, g, &ProfileEvaluator::value);
  f.U_t = sample_field(Q, g, &ProfileEvaluator::dt);
  f.U_x = sample_field(Q, g, &ProfileEvaluator::dx);
  f.U_tx = differentiate(f.U_t);
  f.L_ = Field(g); f.L_t = Field(g); f.L_x = Field(g);
  f.sum = f.U;
  f.dif = f.U;
  Field s(g), c(g);
  for (int i = 0; i < g.n; ++i) {
    s[i] = Q.sin_half(g.node(i));
    c[i] = Q.cos_half(g.node(i));
  }
  f.sinS0 = s; f.cosS0 = c; f.sinD0 = s; f.cosD0 = c;
  f.mu = mu_q(p, g, /*growing=*/false);
  const Complex ia2 = f.inv_a0() * f.inv_a0();
  f.gsel = Field(g);
  for (int i = 0; i < g.n; ++i) f.gsel[i] = ia2 * f.sinS0[i] + f.sinD0[i];
  return f;
}

// Descent residual at interface f: data (z, w) perturb the upper profile,
// unknowns (u, delta) live at the lower level.
Field descent_residual(const Interface& f, const Field& z, const Field& w, const Field& u,
                       Complex delta) {
  const Field ux = differentiate(u);
  const Complex ad = f.a0 + delta, iad = 1.0 / ad, ia = f.inv_a0();
  Field out(f.g);
  for (int i = 0; i < f.g.n; ++i) {
    const Complex Sp = std::sin(0.5 * (f.sum[i] + z[i] + u[i]));
    const Complex Sm = std::sin(0.5 * (f.dif[i] + z[i] - u[i]));
    out[i] = w[i] - ux[i] - iad * Sp + ia * f.sinS0[i] + ad * Sm - f.a0 * f.sinD0[i];
  }
  return out;
}

// Second component of the solved lower pair, from the first BT functional.
Field descent_companion(const Interface& f, const Field& z, const Field& zx, const Field& u,
                        Complex delta) {
  const Complex ad = f.a0 + delta, iad = 1.0 / ad, ia = f.inv_a0();
  Field out(f.g);
  for (int i = 0; i < f.g.n; ++i) {
    const Complex Sp = std::sin(0.5 * (f.sum[i] + z[i] + u[i]));
    const Complex Sm = std::sin(0.5 * (f.dif[i] + z[i] - u[i]));
    out[i] = zx[i] - iad * Sp + ia * f.sinS0[i] - ad * Sm + f.a0 * f.sinD0[i];
  }
  return out;
}

DescentResult run_descent(const Interface& f, const Field& z, const Field& w,
                          const SolverOptions& opt) {
  if (energy_norm(FieldPair(z, w)) > opt.eta_max)
    throw std::invalid_argument("descent: input exceeds admissible size eta_max");
  Field u(f.g);
  Complex delta = 0.0;
  Field r = descent_residual(f, z, w, u, delta);
  double rn = l2_norm(r);
  int it = 0;
  while (rn > opt.tol && it < opt.max_iterations) {
    const DeltaSolve step = solve_delta_mode(f.mu, r, f.gsel, /*check_decay=*/false);
    double lambda = 1.0;
    for (int tries = 0;; ++tries) {
      const Field ut = u + lambda * step.u;
      const Complex dt = delta + lambda * step.delta;
      const Field rt = descent_residual(f, z, w, ut, dt);
      const double rtn = l2_norm(rt);
      if (rtn < rn || tries >= 6) {
        u = ut; delta = dt; r = rt; rn = rtn;
        break;
      }
      lambda *= 0.5;
    }
    ++it;
  }
  if (rn > opt.tol)
    throw std::runtime_error("descent failed: residual " + std::to_string(rn) + " after " +
                             std::to_string(it) + " iterations");
  const Field zx = differentiate(z);
  DescentResult res;
  res.u = u;
  res.s = descent_companion(f, z, zx, u, delta);
  res.param_correction = delta;
  res.residual_norm = rn;
  res.iterations = it;
  return res;
}

// Ascent residual: data (y, v) perturb the lower profile, parameter
// correction is fixed; the unknown u perturbs the upper profile.
Field ascent_residual(const Interface& f, const Field& y, const Field& v, const Field& u,
                      Complex corr) {
  const Field ux = differentiate(u);
  const Complex ad = f.a0 + corr, iad = 1.0 / ad, ia = f.inv_a0();
  Field out(f.g);
  for (int i = 0; i < f.g.n; ++i) {
    const Complex Sp = std::sin(0.5 * (f.sum[i] + u[i] + y[i]));
    const Complex Sm = std::sin(0.5 * (f.dif[i] + u[i] - y[i]));
    out[i] = ux[i] - v[i] - iad * Sp + ia * f.sinS0[i] - ad * Sm + f.a0 * f.sinD0[i];
  }
  return out;
}

Field ascent_companion(const Interface& f, const Field& y, const Field& ydx, const Field& u,
                       Complex corr) {
  const Complex ad = f.a0 + corr, iad = 1.0 / ad, ia = f.inv_a0();
  Field out(f.g);
  for (int i = 0; i < f.g.n; ++i) {
    const Complex Sp = std::sin(0.5 * (f.sum[i] + u[i] + y[i]));
    const Complex Sm = std::sin(0.5 * (f.dif[i] + u[i] - y[i]));
    out[i] = ydx[i] + iad * Sp - ia * f.sinS0[i] - ad * Sm + f.a0 * f.sinD0[i];
  }
  return out;
}

DescentResult run_ascent(const Interface& f, const Field& y, const Field& v, Complex corr,
                         const Field& w1, const Field& w2, Complex c,
                         const SolverOptions& opt) {
  const Field ydx = differentiate(y);
  const int xc = f.g.nearest(0.0);
  const Field mu_hat = (1.0 / f.mu[xc]) * f.mu;

  auto functional = [&](const Field& uu, const Field& ss) {
    return pair_integral(uu, w1) + pair_integral(ss, w2) - c;
  };
  auto merit = [&](const Field& uu) {
    const Field r1 = ascent_residual(f, y, v, uu, corr);
    const Field ss = ascent_companion(f, y, ydx, uu, corr);
    return std::make_tuple(l2_norm(r1), functional(uu, ss));
  };

  Field u(f.g);
  auto [rn, cdef] = merit(u);
  const double ctol = opt.tol * (1.0 + std::abs(c));
  int it = 0;
  while ((rn > opt.tol || std::abs(cdef) > ctol) && it < opt.max_iterations) {
    const Field r1 = ascent_residual(f, y, v, u, corr);
    const Field du_p = solve_boundary_mode(f.mu, -r1, 0.0);

    // The scalar along mu_hat is set by the constraint; the functional is
    // close to affine in it, so a short secant does the job.
    auto defect_at = [&](Complex xi) {
      const Field ut = u + du_p + xi * mu_hat;
      return functional(ut, ascent_companion(f, y, ydx, ut, corr));
    };
    Complex x0 = 0.0, h0 = defect_at(x0);
    Complex x1 = 1.0, h1 = defect_at(x1);
    if (std::abs(h1 - h0) < 1e-14 * (1.0 + std::abs(h0)))
      throw std::runtime_error("ascent: degenerate constraint pairing");
    Complex xi = x0 - h0 * (x1 - x0) / (h1 - h0);
    for (int k = 0; k < 3; ++k) {
      const Complex hx = defect_at(xi);
      if (std::abs(hx) < 0.25 * ctol) break;
      if (std::abs(hx - h1) < 1e-16 * std::abs(hx)) break;
      const Complex xin = xi - hx * (xi - x1) / (hx - h1);
      x1 = xi; h1 = hx; xi = xin;
    }

    double lambda = 1.0;
    for (int tries = 0;; ++tries) {
      const Field ut = u + lambda * (du_p + xi * mu_hat);
      auto [rtn, cdt] = merit(ut);
      if (rtn + std::abs(cdt) < rn + std::abs(cdef) || tries >= 6) {
        u = ut; rn = rtn; cdef = cdt;
        break;
      }
      lambda *= 0.5;
    }
    ++it;
  }
  if (rn > opt.tol || std::abs(cdef) > ctol)
    throw std::runtime_error("ascent failed: residual " + std::to_string(rn) +
                             ", constraint defect " + std::to_string(std::abs(cdef)));
  DescentResult res;
  res.u = u;
  res.s = ascent_companion(f, y, ydx, u, corr);
  res.param_correction = corr;
  res.residual_norm = rn;
  res.iterations = it;
  return res;
}

// Constraint target N for ascents, from the rearranged pairing identity:
// int (u,s).(W~0, U) must equal
//   -[int U_x z + int U_tx w] + int U_tx L_x - int U L_t
//   + inv(a0+d) int (U_tx - U) S+ - (a0+d) int (U_tx + U) S-
//   + int [ inv(a0)/2 (U - U_tx) cosS0 - a0/2 (U + U_tx) cosD0 ] u.
Complex constraint_target(const Interface& f, const Field& u, const Field& z, const Field& w,
                          Complex corr) {
  const Complex ad = f.a0 + corr, iad = 1.0 / ad, ia = f.inv_a0();
  const Grid& g = f.g;
  Field Sp(g), Sm(g), halfcos_u(g);
  for (int i = 0; i < g.n; ++i) {
    Sp[i] = std::sin(0.5 * (f.sum[i] + z[i] + u[i]));
    Sm[i] = std::sin(0.5 * (f.dif[i] + z[i] - u[i]));
    halfcos_u[i] = (0.5 * ia * (f.U[i] - f.U_tx[i]) * f.cosS0[i] -
                    0.5 * f.a0 * (f.U[i] + f.U_tx[i]) * f.cosD0[i]) *
                   u[i];
  }
  Complex val = -(pair_integral(f.U_x, z) + pair_integral(f.U_tx, w));
  val += pair_integral(f.U_tx, f.L_x) - pair_integral(f.U, f.L_t);
  val += iad * (pair_integral(f.U_tx, Sp) - pair_integral(f.U, Sp));
  val -= ad * (pair_integral(f.U_tx, Sm) + pair_integral(f.U, Sm));
  val += integrate(halfcos_u);
  return val;
}

Field nondegeneracy_from_interface(const Interface& f) {
  const Field U_xxt = differentiate(f.U_tx);
  const Complex ia = f.inv_a0();
  Field out(f.g);
  for (int i = 0; i < f.g.n; ++i)
    out[i] = U_xxt[i] + 0.5 * ia * (f.U[i] - f.U_tx[i]) * f.cosS0[i] -
             0.5 * f.a0 * (f.U[i] + f.U_tx[i]) * f.cosD0[i];
  return out;
}

}  // namespace

std::pair<Field, Field> bt_residual(const FieldPair& varphi, const FieldPair& phi,
                                    const BTParameter& ap) {
  check_same_grid(varphi.phi, phi.phi);
  const Complex a = ap.a, ia = 1.0 / a;
  const Field vx = differentiate(varphi.phi);
  const Field px = differentiate(phi.phi);
  const Grid& g = varphi.grid();
  Field F1(g), F2(g);
  for (int i = 0; i < g.n; ++i) {
    const Complex Sp = std::sin(0.5 * (varphi.phi[i] + phi.phi[i]));
    const Complex Sm = std::sin(0.5 * (varphi.phi[i] - phi.phi[i]));
    F1[i] = vx[i] - phi.phi_t[i] - ia * Sp - a * Sm;
    F2[i] = varphi.phi_t[i] - px[i] - ia * Sp + a * Sm;
  }
  return {std::move(F1), std::move(F2)};
}

Field integrating_factor(IntegratingFactorKind kind, const SolitonParams& p, const Grid& g) {
  switch (kind) {
    case IntegratingFactorKind::MuK:
      if (is_singular(p.x1, p)) throw std::domain_error("MuK: singular x1");
      return mu_kink(p, g, false);
    case IntegratingFactorKind::MuB:
      return mu_breather(p, g, false);
    case IntegratingFactorKind::MuR:
      return mu_2soliton(ProfileKind::TwoKink, p, g);
    case IntegratingFactorKind::MuA:
      return mu_2soliton(ProfileKind::KinkAntikink, p, g);
    case IntegratingFactorKind::MuQDecaying:
      return mu_q(p, g, false);
    case IntegratingFactorKind::MuBInverse: {
      if (is_singular(p.x1, p)) throw std::domain_error("MuBInverse: singular x1");
      Field m = mu_breather(p, g, false);
      return map(m, [](Complex z) { return 1.0 / z; });
    }
    case IntegratingFactorKind::MuAInverse: {
      Field m = mu_2soliton(ProfileKind::KinkAntikink, p, g);
      return map(m, [](Complex z) { return 1.0 / z; });
    }
    case IntegratingFactorKind::MuRInverse: {
      Field m = mu_2soliton(ProfileKind::TwoKink, p, g);
      return map(m, [](Complex z) { return 1.0 / z; });
    }
    case IntegratingFactorKind::MuQGrowing:
      return mu_q(p, g, true);
  }
  throw std::logic_error("unknown integrating factor kind");
}

Field factor_ode_residual(IntegratingFactorKind kind, const SolitonParams& p, const Grid& g) {
  const Field mu = integrating_factor(kind, p, g);
  const Field mux = differentiate(mu);

  Field coef(g);
  switch (kind) {
    case IntegratingFactorKind::MuK: {
      const Interface f = make_kink_zero(p, g, false);
      for (int i = 0; i < g.n; ++i) coef[i] = p.beta * f.cosS0[i];
      break;
    }
    case IntegratingFactorKind::MuB:
    case IntegratingFactorKind::MuBInverse: {
      const Interface f = make_breather_kink(p, g, false);
      coef = f.ode_coefficient();
      break;
    }
    case IntegratingFactorKind::MuR:
    case IntegratingFactorKind::MuRInverse: {
      const Interface f = make_2soliton_kink(ProfileKind::TwoKink, p, g);
      coef = f.ode_coefficient();
      break;
    }
    case IntegratingFactorKind::MuA:
    case IntegratingFactorKind::MuAInverse: {
      const Interface f = make_2soliton_kink(ProfileKind::KinkAntikink, p, g);
      coef = f.ode_coefficient();
      break;
    }
    case IntegratingFactorKind::MuQDecaying:
    case IntegratingFactorKind::MuQGrowing: {
      const Interface f = make_q_zero(p, g);
      for (int i = 0; i < g.n; ++i) coef[i] = p.gamma() * f.cosS0[i];
      break;
    }
  }

  const bool inverse = kind == IntegratingFactorKind::MuBInverse ||
                       kind == IntegratingFactorKind::MuAInverse ||
                       kind == IntegratingFactorKind::MuRInverse ||
                       kind == IntegratingFactorKind::MuQGrowing;
  // Growing factors reach ~e^{gamma L} at the edges; the residual is scaled
  // by the local factor size so the check stays meaningful in doubles.
  Field out(g);
  for (int i = 0; i < g.n; ++i)
    out[i] = (mux[i] + (inverse ? coef[i] : -coef[i]) * mu[i]) / (1.0 + std::abs(mu[i]));
  return out;
}

DeltaSolve solve_delta_mode(const Field& mu, const Field& f, const Field& g,
                            bool check_decay) {
  check_same_grid(mu, f);
  check_same_grid(mu, g);
  const Complex denom = pair_integral(mu, g);
  if (std::abs(denom) < 1e-8)
    throw std::runtime_error("solve_delta_mode: nondegeneracy pairing too small, ill-posed");
  const Complex delta = -pair_integral(mu, f) / denom;

  const int n = mu.size();
  Field rhs(mu.grid);
  for (int i = 0; i < n; ++i) rhs[i] = mu[i] * (f[i] + delta * g[i]);
  const Field T = cumulative_integral(rhs, CumulativeOrigin::LeftEdge);

  // Anchor the reconstruction from the left up to the peak of |mu| and from
  // the right beyond it; the selection integral makes the two agree and
  // keeps u finite where 1/mu grows.
  int ipeak = 0;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m = std::abs(mu[i]);
    if (m > best) { best = m; ipeak = i; }
  }
  const Complex total = T[n - 1];
  Field u(mu.grid);
  for (int i = 0; i < n; ++i)
    u[i] = (i <= ipeak ? T[i] : T[i] - total) / mu[i];

  if (check_decay) {
    const int w = std::max(1, n / 100);
    for (int i = 0; i < n; ++i)
      if ((i < w || i >= n - w) && std::abs(u[i]) > 1e-6)
        throw std::runtime_error("solve_delta_mode: solution fails to decay at the edges");
  }
  return {std::move(u), delta};
}

Field solve_boundary_mode(const Field& mu, const Field& f, Complex anchor) {
  check_same_grid(mu, f);
  const int n = mu.size();
  const int xc = mu.grid.nearest(0.0);
  Field fom(mu.grid);
  for (int i = 0; i < n; ++i) fom[i] = f[i] / mu[i];
  Field T = cumulative_integral(fom, CumulativeOrigin::LeftEdge);
  const Complex Tc = T[xc];
  const Complex base = anchor / mu[xc];
  Field u(mu.grid);
  for (int i = 0; i < n; ++i) u[i] = mu[i] * (base + T[i] - Tc);
  return u;
}

DeltaSolve solve_constrained_ode(const Field& mu, const Field& f, const Field* g,
                                 const OdeConstraint& constraint) {
  if (constraint.mode == OdeConstraint::Mode::DeltaOrthogonality) {
    if (!g) throw std::invalid_argument("solve_constrained_ode: delta mode needs g");
    return solve_delta_mode(mu, f, *g);
  }
  if (!constraint.weight1 || !constraint.weight2 || !constraint.companion)
    throw std::invalid_argument("solve_constrained_ode: boundary mode needs weights and companion");
  const Field particular = solve_boundary_mode(mu, f, 0.0);
  const int xc = mu.grid.nearest(0.0);
  const Field mu_hat = (1.0 / mu[xc]) * mu;
  auto defect = [&](Complex xi) {
    const Field u = particular + xi * mu_hat;
    const Field s = constraint.companion(u);
    return pair_integral(u, *constraint.weight1) + pair_integral(s, *constraint.weight2) -
           constraint.c;
  };
  Complex x0 = 0.0, h0 = defect(x0);
  Complex x1 = 1.0, h1 = defect(x1);
  if (std::abs(h1 - h0) < 1e-8 * (1.0 + std::abs(h0)))
    throw std::runtime_error("solve_constrained_ode: degenerate functional pairing");
  Complex xi = x0 - h0 * (x1 - x0) / (h1 - h0);
  for (int k = 0; k < 4; ++k) {
    const Complex hx = defect(xi);
    if (std::abs(hx) < 1e-13 * (1.0 + std::abs(constraint.c))) break;
    const Complex xin = xi - hx * (xi - x1) / (hx - h1);
    x1 = xi; h1 = hx; xi = xin;
  }
  return {particular + xi * mu_hat, xi};
}

DescentResult descend_breather(const Field& z0, const Field& w0, const SolitonParams& p,
                               const SolverOptions& opt, bool conjugate_path) {
  const Interface f = make_breather_kink(p, z0.grid, conjugate_path);
  return run_descent(f, z0, w0, opt);
}

DescentResult descend_kink_to_zero(const Field& u0, const Field& s0, const SolitonParams& p,
                                   const SolverOptions& opt, bool conjugate_path) {
  const Interface f = make_kink_zero(p, u0.grid, conjugate_path);
  return run_descent(f, u0, s0, opt);
}

DescentResult ascend_zero_to_kink(const Field& y, const Field& v, Complex delta_tilde,
                                  const SolitonParams& p, Complex c,
                                  const SolverOptions& opt, bool conjugate_path) {
  const Interface f = make_kink_zero(p, y.grid, conjugate_path);
  const Field w0 = nondegeneracy_profile(ProfileKind::Breather, p, y.grid, conjugate_path);
  const ProfileEvaluator B{ProfileKind::Breather, p};
  const Field Bfield = sample_field(B, y.grid, &ProfileEvaluator::value);
  return run_ascent(f, y, v, delta_tilde, w0, Bfield, c, opt);
}

DescentResult ascend_kink_to_breather(const Field& u, const Field& s, Complex delta,
                                      const SolitonParams& p, Complex c,
                                      const SolverOptions& opt, bool conjugate_path) {
  const Interface f = make_breather_kink(p, u.grid, conjugate_path);
  const FieldPair d1 = shift_derivatives(ProfileKind::Breather, p, u.grid, 1);
  return run_ascent(f, u, s, delta, d1.phi, d1.phi_t, c, opt);
}

std::pair<DescentResult, DescentResult> descend_2soliton(const Field& z0, const Field& w0,
                                                         ProfileKind kind,
                                                         const SolitonParams& p,
                                                         const SolverOptions& opt) {
  const Interface top = make_2soliton_kink(kind, p, z0.grid);
  DescentResult first = run_descent(top, z0, w0, opt);
  const Interface bottom = make_q_zero(p, z0.grid);
  DescentResult second = run_descent(bottom, first.u, first.s, opt);
  return {std::move(first), std::move(second)};
}

std::pair<DescentResult, DescentResult> ascend_2soliton(const Field& y, const Field& v,
                                                        Complex b_tilde, Complex b,
                                                        ProfileKind kind,
                                                        const SolitonParams& p, Complex c_kink,
                                                        Complex c_top,
                                                        const SolverOptions& opt) {
  const Interface bottom = make_q_zero(p, y.grid);
  const Field d0 = nondegeneracy_profile(kind, p, y.grid);
  const Interface top = make_2soliton_kink(kind, p, y.grid);
  DescentResult first = run_ascent(bottom, y, v, b_tilde, d0, top.U, c_kink, opt);
  const FieldPair d1 = shift_derivatives(kind, p, y.grid, 1);
  DescentResult second = run_ascent(top, first.u, first.s, b, d1.phi, d1.phi_t, c_top, opt);
  return {std::move(first), std::move(second)};
}

Field nondegeneracy_profile(ProfileKind kind, const SolitonParams& p, const Grid& g,
                            bool conjugate_path) {
  if (kind == ProfileKind::Breather)
    return nondegeneracy_from_interface(make_breather_kink(p, g, conjugate_path));
  if (kind == ProfileKind::TwoKink || kind == ProfileKind::KinkAntikink)
    return nondegeneracy_from_interface(make_2soliton_kink(kind, p, g));
  throw std::invalid_argument("nondegeneracy_profile: unsupported kind");
}

Complex nondegeneracy_integral(double x1, double beta, const Grid& g) {
  const SolitonParams p(beta, x1, 0.0);
  const Interface f = make_breather_kink(p, g, false);
  const Field b0 = nondegeneracy_from_interface(f);
  return pair_integral(b0, f.L_x);
}

Complex nondegeneracy_integral(double x1, double beta) {
  const bool wide = std::abs(beta) < 0.2;
  const Grid g(wide ? 80.0 : 40.0, wide ? 8192 : 4096);
  return nondegeneracy_integral(x1, beta, g);
}

Complex breather_pairing_identity(const SolitonParams& p, const Grid& g) {
  const Interface f = make_breather_kink(p, g, false);
  const Complex ia = f.inv_a0();
  const Complex t1 = pair_integral(f.U_tx, f.L_x);
  const Complex t2 = pair_integral(f.U, f.L_t);
  Complex val = Complex(0.0, t1.imag()) - Complex(0.0, t2.imag());
  val -= ia * (pair_integral(f.U, f.sinS0) - pair_integral(f.U_tx, f.sinS0));
  val -= f.a0 * (pair_integral(f.U, f.sinD0) + pair_integral(f.U_tx, f.sinD0));
  return val;
}

Complex breather_constraint_target(const SolitonParams& p, const Grid& g, const Field& u,
                                   const Field& z, const Field& w, Complex delta,
                                   bool conjugate_path) {
  const Interface f = make_breather_kink(p, g, conjugate_path);
  return constraint_target(f, u, z, w, delta);
}

Complex twosoliton_constraint_target(ProfileKind kind, const SolitonParams& p, const Grid& g,
                                     const Field& u, const Field& z, const Field& w,
                                     Complex b) {
  const Interface f = make_2soliton_kink(kind, p, g);
  return constraint_target(f, u, z, w, b);
}

}  // namespace sg
