#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sglab/grid.hpp"
#include "sglab/numerics.hpp"
#include "sglab/params.hpp"

namespace sg {

/// Proximity tolerance around the singular set (time units): |t - t_k| or
/// |x1 - x1_k| below this flags the near-singular regime.
inline constexpr double kSingularTolerance = 0.05;

/// True when x1 lies within eps of the singular set x1 = (pi/alpha)(1/2 + k).
bool is_singular(double x1, const SolitonParams& p, double eps = kSingularTolerance);

/// Singular times t_k = -x1 + (pi/alpha)(1/2 + k) inside [window_lo, window_hi].
std::vector<double> singular_times(const SolitonParams& p, double window_lo, double window_hi);

/// Pointwise closed-form evaluation of one profile family. All members are
/// exact expressions; complex kinds return genuinely complex values.
struct ProfileEvaluator {
  ProfileKind kind;
  SolitonParams p;

  Complex value(double x) const;    // D(x)
  Complex dt(double x) const;       // D_t(x), the time-derivative profile
  Complex dx(double x) const;       // D_x(x)
  Complex sin_half(double x) const; // sin(D/2)
  Complex cos_half(double x) const; // cos(D/2), branch (1-u^2)/(1+u^2)
};

/// (D, D_t) sampled on the grid. Throws on singular x1 for complex kinds.
FieldPair eval_profile(ProfileKind kind, const SolitonParams& p, const Grid& g);

/// Shift the parameters so that the sampled profile is the exact solution at
/// time t (kink: x0 -> x0 - beta t; complex kink and breather: x1 -> x1 + t;
/// R, A: x1 -> x1 + beta t).
SolitonParams params_at_time(ProfileKind kind, const SolitonParams& p, double t);

FieldPair eval_exact_solution(ProfileKind kind, const SolitonParams& p, double t, const Grid& g);

/// Closed-form sin(D/2) and cos(D/2) on the grid; satisfies sin^2+cos^2 = 1
/// pointwise. cos takes the (1-u^2)/(1+u^2) branch (-tanh for exponential u).
std::pair<Field, Field> half_angle(ProfileKind kind, const SolitonParams& p, const Grid& g);

/// Derivatives with respect to the shift x_j, j = 1 or 2, of (D, D_t).
/// Closed forms; supported for Breather, TwoKink, KinkAntikink.
FieldPair shift_derivatives(ProfileKind kind, const SolitonParams& p, const Grid& g, int j);

/// Exact solution with pointwise (t, x) access, composable under boosts.
struct SolutionEvaluator {
  std::function<Complex(double t, double x)> value;
  std::function<Complex(double t, double x)> dt;
  std::function<Complex(double t, double x)> dx;

  FieldPair sample(double t, const Grid& g) const;
};

SolutionEvaluator exact_solution(ProfileKind kind, const SolitonParams& p);

/// Zero solution evaluator (vacuum).
SolutionEvaluator zero_solution();

/// Lorentz boost of a solution evaluator: the boosted pair is the boosted
/// scalar field together with its own time derivative.
SolutionEvaluator lorentz_boost(const SolutionEvaluator& e, double boost_beta);

/// phi_tt - phi_xx + sin(phi) with phi_tt by centered differencing in time
/// (step dt_probe) and phi_xx by differentiate twice.
Field sg_residual(const SolutionEvaluator& e, double t, double dt_probe, const Grid& g);

}  // namespace sg
