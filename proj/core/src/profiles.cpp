#include "sglab/profiles.hpp"

#include <cmath>

namespace sg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// sin and cos of D/2 for D = 4 arctan(u): (2u/(1+u^2), (1-u^2)/(1+u^2)).
// For |u| > 1 the reciprocal form keeps full precision and never overflows.
template <class T>
std::pair<T, T> half_angle_of_arg(T u) {
  if (std::abs(u) <= 1.0) {
    const T d = 1.0 + u * u;
    return {2.0 * u / d, (1.0 - u * u) / d};
  }
  const T r = 1.0 / u;
  const T d = 1.0 + r * r;
  return {2.0 * r / d, -(1.0 - r * r) / d};
}

struct KinkForms {
  // theta = gamma (x + x0) for Q; beta (x+x2) + i alpha x1 for K.
  static Complex sech(Complex th) { return 1.0 / std::cosh(th); }
};

}  // namespace

bool is_singular(double x1, const SolitonParams& p, double eps) {
  const double period = kPi / p.alpha();
  // Distance from x1 to the lattice (pi/alpha)(1/2 + k).
  const double y = x1 / period - 0.5;
  const double d = std::abs(y - std::round(y)) * period;
  return d < eps;
}

std::vector<double> singular_times(const SolitonParams& p, double lo, double hi) {
  std::vector<double> out;
  const double period = kPi / p.alpha();
  // t_k = -x1 + (pi/alpha)(1/2 + k)
  const long kmin = static_cast<long>(std::floor((lo + p.x1) / period - 0.5)) - 1;
  const long kmax = static_cast<long>(std::ceil((hi + p.x1) / period - 0.5)) + 1;
  for (long k = kmin; k <= kmax; ++k) {
    const double t = -p.x1 + period * (0.5 + static_cast<double>(k));
    if (t >= lo && t <= hi) out.push_back(t);
  }
  return out;
}

namespace {

[[noreturn]] void throw_singular(const SolitonParams& p) {
  const double k = std::round(p.alpha() * p.x1 / kPi - 0.5);
  throw std::domain_error("singular profile: x1 within tolerance of (pi/alpha)(1/2 + k), k = " +
                          std::to_string(static_cast<long>(k)));
}

}  // namespace

Complex ProfileEvaluator::value(double x) const {
  const double a = p.alpha(), b = p.beta, g = p.gamma();
  switch (kind) {
    case ProfileKind::RealKink:
      return 4.0 * std::atan(std::exp(g * (x + p.x1 + p.x2)));
    case ProfileKind::ComplexKink:
      return 4.0 * std::atan(std::exp(Complex(b * (x + p.x2), a * p.x1)));
    case ProfileKind::ConjugateKink:
      return 4.0 * std::atan(std::exp(Complex(b * (x + p.x2), -a * p.x1)));
    case ProfileKind::Breather:
      return 4.0 * std::atan(b * std::sin(a * p.x1) / (a * std::cosh(b * (x + p.x2))));
    case ProfileKind::TwoKink:
      return 4.0 * std::atan(b * std::sinh(g * (x + p.x2)) / std::cosh(g * p.x1));
    case ProfileKind::KinkAntikink:
      return 4.0 * std::atan(std::sinh(g * p.x1) / (b * std::cosh(g * (x + p.x2))));
  }
  return {};
}

Complex ProfileEvaluator::dt(double x) const {
  const double a = p.alpha(), b = p.beta, g = p.gamma();
  switch (kind) {
    case ProfileKind::RealKink:
      return -2.0 * b * g / std::cosh(g * (x + p.x1 + p.x2));
    case ProfileKind::ComplexKink:
      return Complex(0.0, 2.0 * a) * KinkForms::sech(Complex(b * (x + p.x2), a * p.x1));
    case ProfileKind::ConjugateKink:
      return Complex(0.0, -2.0 * a) * KinkForms::sech(Complex(b * (x + p.x2), -a * p.x1));
    case ProfileKind::Breather: {
      const double t1 = a * p.x1, t2 = b * (x + p.x2);
      const double den = a * a * std::cosh(t2) * std::cosh(t2) + b * b * std::sin(t1) * std::sin(t1);
      return 4.0 * a * a * b * std::cos(t1) * std::cosh(t2) / den;
    }
    case ProfileKind::TwoKink: {
      const double t1 = g * p.x1, t2 = g * (x + p.x2);
      const double den = std::cosh(t1) * std::cosh(t1) + b * b * std::sinh(t2) * std::sinh(t2);
      return -4.0 * b * b * g * std::sinh(t2) * std::sinh(t1) / den;
    }
    case ProfileKind::KinkAntikink: {
      const double t1 = g * p.x1, t2 = g * (x + p.x2);
      const double den = b * b * std::cosh(t2) * std::cosh(t2) + std::sinh(t1) * std::sinh(t1);
      return 4.0 * b * b * g * std::cosh(t2) * std::cosh(t1) / den;
    }
  }
  return {};
}

Complex ProfileEvaluator::dx(double x) const {
  const double a = p.alpha(), b = p.beta, g = p.gamma();
  switch (kind) {
    case ProfileKind::RealKink:
      return 2.0 * g / std::cosh(g * (x + p.x1 + p.x2));
    case ProfileKind::ComplexKink:
      return 2.0 * b * KinkForms::sech(Complex(b * (x + p.x2), a * p.x1));
    case ProfileKind::ConjugateKink:
      return 2.0 * b * KinkForms::sech(Complex(b * (x + p.x2), -a * p.x1));
    case ProfileKind::Breather: {
      const double t1 = a * p.x1, t2 = b * (x + p.x2);
      const double den = a * a * std::cosh(t2) * std::cosh(t2) + b * b * std::sin(t1) * std::sin(t1);
      return -4.0 * a * b * b * std::sin(t1) * std::sinh(t2) / den;
    }
    case ProfileKind::TwoKink: {
      const double t1 = g * p.x1, t2 = g * (x + p.x2);
      const double den = std::cosh(t1) * std::cosh(t1) + b * b * std::sinh(t2) * std::sinh(t2);
      return 4.0 * b * g * std::cosh(t1) * std::cosh(t2) / den;
    }
    case ProfileKind::KinkAntikink: {
      const double t1 = g * p.x1, t2 = g * (x + p.x2);
      const double den = b * b * std::cosh(t2) * std::cosh(t2) + std::sinh(t1) * std::sinh(t1);
      return -4.0 * b * g * std::sinh(t1) * std::sinh(t2) / den;
    }
  }
  return {};
}

Complex ProfileEvaluator::sin_half(double x) const {
  const double a = p.alpha(), b = p.beta, g = p.gamma();
  switch (kind) {
    case ProfileKind::RealKink:
      return half_angle_of_arg(Complex(std::exp(g * (x + p.x1 + p.x2)))).first;
    case ProfileKind::ComplexKink:
      return half_angle_of_arg(std::exp(Complex(b * (x + p.x2), a * p.x1))).first;
    case ProfileKind::ConjugateKink:
      return half_angle_of_arg(std::exp(Complex(b * (x + p.x2), -a * p.x1))).first;
    case ProfileKind::Breather:
      return half_angle_of_arg(
                 Complex(b * std::sin(a * p.x1) / (a * std::cosh(b * (x + p.x2)))))
          .first;
    case ProfileKind::TwoKink:
      return half_angle_of_arg(
                 Complex(b * std::sinh(g * (x + p.x2)) / std::cosh(g * p.x1)))
          .first;
    case ProfileKind::KinkAntikink:
      return half_angle_of_arg(
                 Complex(std::sinh(g * p.x1) / (b * std::cosh(g * (x + p.x2)))))
          .first;
  }
  return {};
}

Complex ProfileEvaluator::cos_half(double x) const {
  const double a = p.alpha(), b = p.beta, g = p.gamma();
  switch (kind) {
    case ProfileKind::RealKink:
      return half_angle_of_arg(Complex(std::exp(g * (x + p.x1 + p.x2)))).second;
    case ProfileKind::ComplexKink:
      return half_angle_of_arg(std::exp(Complex(b * (x + p.x2), a * p.x1))).second;
    case ProfileKind::ConjugateKink:
      return half_angle_of_arg(std::exp(Complex(b * (x + p.x2), -a * p.x1))).second;
    case ProfileKind::Breather:
      return half_angle_of_arg(
                 Complex(b * std::sin(a * p.x1) / (a * std::cosh(b * (x + p.x2)))))
          .second;
    case ProfileKind::TwoKink:
      return half_angle_of_arg(
                 Complex(b * std::sinh(g * (x + p.x2)) / std::cosh(g * p.x1)))
          .second;
    case ProfileKind::KinkAntikink:
      return half_angle_of_arg(
                 Complex(std::sinh(g * p.x1) / (b * std::cosh(g * (x + p.x2)))))
          .second;
  }
  return {};
}

FieldPair eval_profile(ProfileKind kind, const SolitonParams& p, const Grid& g) {
  if (kind == ProfileKind::ComplexKink || kind == ProfileKind::ConjugateKink)
    if (is_singular(p.x1, p)) throw_singular(p);
  const ProfileEvaluator ev{kind, p};
  FieldPair out(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    out.phi[i] = ev.value(x);
    out.phi_t[i] = ev.dt(x);
  }
  return out;
}

SolitonParams params_at_time(ProfileKind kind, const SolitonParams& p, double t) {
  switch (kind) {
    case ProfileKind::RealKink:
      return p.with_shifts(p.x1 - p.beta * t, p.x2);
    case ProfileKind::ComplexKink:
    case ProfileKind::ConjugateKink:
    case ProfileKind::Breather:
      return p.with_shifts(p.x1 + t, p.x2);
    case ProfileKind::TwoKink:
    case ProfileKind::KinkAntikink:
      return p.with_shifts(p.x1 + p.beta * t, p.x2);
  }
  return p;
}

FieldPair eval_exact_solution(ProfileKind kind, const SolitonParams& p, double t, const Grid& g) {
  return eval_profile(kind, params_at_time(kind, p, t), g);
}

std::pair<Field, Field> half_angle(ProfileKind kind, const SolitonParams& p, const Grid& g) {
  if (kind == ProfileKind::ComplexKink || kind == ProfileKind::ConjugateKink)
    if (is_singular(p.x1, p)) throw_singular(p);
  const ProfileEvaluator ev{kind, p};
  Field s(g), c(g);
  for (int i = 0; i < g.n; ++i) {
    s[i] = ev.sin_half(g.node(i));
    c[i] = ev.cos_half(g.node(i));
  }
  return {std::move(s), std::move(c)};
}

FieldPair shift_derivatives(ProfileKind kind, const SolitonParams& p, const Grid& g, int j) {
  if (j != 1 && j != 2) throw std::invalid_argument("shift_derivatives: j must be 1 or 2");
  const double a = p.alpha(), b = p.beta, ga = p.gamma();
  FieldPair out(g);
  const ProfileEvaluator ev{kind, p};

  switch (kind) {
    case ProfileKind::Breather: {
      const double t1 = a * p.x1;
      for (int i = 0; i < g.n; ++i) {
        const double x = g.node(i);
        const double t2 = b * (x + p.x2);
        const double den =
            a * a * std::cosh(t2) * std::cosh(t2) + b * b * std::sin(t1) * std::sin(t1);
        if (j == 1) {
          out.phi[i] = ev.dt(x);  // B_1 = B_t
          const double pref = -4.0 * a * a * a * b * std::cosh(t2) / den;
          out.phi_t[i] =
              pref * (std::sin(t1) + b * b * std::sin(2.0 * t1) * std::cos(t1) / den);
        } else {
          out.phi[i] = ev.dx(x);  // B_2 = B_x
          const double pref = 4.0 * a * a * b * b * std::cos(t1) / den;
          out.phi_t[i] =
              pref * (std::sinh(t2) - a * a * std::sinh(2.0 * t2) * std::cosh(t2) / den);
        }
      }
      return out;
    }
    case ProfileKind::TwoKink: {
      const double t1 = ga * p.x1;
      for (int i = 0; i < g.n; ++i) {
        const double x = g.node(i);
        const double t2 = ga * (x + p.x2);
        const double den =
            std::cosh(t1) * std::cosh(t1) + b * b * std::sinh(t2) * std::sinh(t2);
        if (j == 1) {
          out.phi[i] = ev.dt(x) / b;  // R_1 = R_t / beta
          const double pref = -4.0 * b * b * ga * ga * std::sinh(t2) / den;
          out.phi_t[i] =
              pref * (std::cosh(t1) - std::sinh(2.0 * t1) * std::sinh(t1) / den);
        } else {
          out.phi[i] = ev.dx(x);  // R_2 = R_x
          const double pref = -4.0 * b * b * ga * ga * std::sinh(t1) / den;
          out.phi_t[i] =
              pref * (std::cosh(t2) - b * b * std::sinh(2.0 * t2) * std::sinh(t2) / den);
        }
      }
      return out;
    }
    case ProfileKind::KinkAntikink: {
      const double t1 = ga * p.x1;
      for (int i = 0; i < g.n; ++i) {
        const double x = g.node(i);
        const double t2 = ga * (x + p.x2);
        const double den =
            b * b * std::cosh(t2) * std::cosh(t2) + std::sinh(t1) * std::sinh(t1);
        if (j == 1) {
          out.phi[i] = ev.dt(x) / b;  // A_1 = A_t / beta
          const double pref = 4.0 * b * b * ga * ga * std::cosh(t2) / den;
          out.phi_t[i] =
              pref * (std::sinh(t1) - std::sinh(2.0 * t1) * std::cosh(t1) / den);
        } else {
          out.phi[i] = ev.dx(x);  // A_2 = A_x
          const double pref = 4.0 * b * b * ga * ga * std::cosh(t1) / den;
          out.phi_t[i] =
              pref * (std::sinh(t2) - b * b * std::sinh(2.0 * t2) * std::cosh(t2) / den);
        }
      }
      return out;
    }
    default:
      throw std::invalid_argument("shift_derivatives: unsupported profile kind");
  }
}

FieldPair SolutionEvaluator::sample(double t, const Grid& g) const {
  FieldPair out(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    out.phi[i] = value(t, x);
    out.phi_t[i] = dt(t, x);
  }
  return out;
}

SolutionEvaluator exact_solution(ProfileKind kind, const SolitonParams& p) {
  SolutionEvaluator e;
  e.value = [kind, p](double t, double x) {
    return ProfileEvaluator{kind, params_at_time(kind, p, t)}.value(x);
  };
  e.dt = [kind, p](double t, double x) {
    return ProfileEvaluator{kind, params_at_time(kind, p, t)}.dt(x);
  };
  e.dx = [kind, p](double t, double x) {
    return ProfileEvaluator{kind, params_at_time(kind, p, t)}.dx(x);
  };
  return e;
}

SolutionEvaluator zero_solution() {
  SolutionEvaluator e;
  e.value = [](double, double) { return Complex{}; };
  e.dt = [](double, double) { return Complex{}; };
  e.dx = [](double, double) { return Complex{}; };
  return e;
}

SolutionEvaluator lorentz_boost(const SolutionEvaluator& e, double boost_beta) {
  if (!(std::abs(boost_beta) < 1.0))
    throw std::invalid_argument("lorentz_boost: need |beta| < 1");
  const double b = boost_beta;
  const double ga = 1.0 / std::sqrt(1.0 - b * b);
  SolutionEvaluator out;
  out.value = [e, b, ga](double t, double x) {
    return e.value(ga * (t - b * x), ga * (x - b * t));
  };
  out.dt = [e, b, ga](double t, double x) {
    const double tp = ga * (t - b * x), xp = ga * (x - b * t);
    return ga * e.dt(tp, xp) - b * ga * e.dx(tp, xp);
  };
  out.dx = [e, b, ga](double t, double x) {
    const double tp = ga * (t - b * x), xp = ga * (x - b * t);
    return -b * ga * e.dt(tp, xp) + ga * e.dx(tp, xp);
  };
  return out;
}

Field sg_residual(const SolutionEvaluator& e, double t, double dt_probe, const Grid& g) {
  const FieldPair now = e.sample(t, g);
  const FieldPair fwd = e.sample(t + dt_probe, g);
  const FieldPair bwd = e.sample(t - dt_probe, g);
  const Field phixx = differentiate(differentiate(now.phi));
  Field out(g);
  const double idt2 = 1.0 / (dt_probe * dt_probe);
  for (int i = 0; i < g.n; ++i) {
    const Complex phitt = (fwd.phi[i] - 2.0 * now.phi[i] + bwd.phi[i]) * idt2;
    out[i] = phitt - phixx[i] + std::sin(now.phi[i]);
  }
  return out;
}

}  // namespace sg
