#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace sg {

/// Scaling parameter beta in (-1,1)\{0} with shifts x1, x2. alpha and gamma
/// are derived once on construction.
struct SolitonParams {
  double beta = 0.5;
  double x1 = 0.0;
  double x2 = 0.0;

  SolitonParams() : SolitonParams(0.5, 0.0, 0.0) {}
  SolitonParams(double b, double s1, double s2) : beta(b), x1(s1), x2(s2) {
    if (!(std::abs(beta) > 0.0 && std::abs(beta) < 1.0))
      throw std::invalid_argument("SolitonParams: need 0 < |beta| < 1");
    alpha_ = std::sqrt(1.0 - beta * beta);
    gamma_ = 1.0 / alpha_;
  }

  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }

  SolitonParams with_shifts(double s1, double s2) const { return {beta, s1, s2}; }

 private:
  double alpha_ = 0.0;
  double gamma_ = 0.0;
};

/// Nonzero Backlund parameter a (Def of the transformation).
struct BTParameter {
  std::complex<double> a;

  explicit BTParameter(std::complex<double> value) : a(value) {
    if (std::abs(a) == 0.0) throw std::invalid_argument("BTParameter: a must be nonzero");
  }

  /// a(beta) = sqrt((1+beta)/(1-beta)); connects the vacuum to the kink of speed beta.
  static BTParameter of_beta(double beta) {
    return BTParameter(std::sqrt((1.0 + beta) / (1.0 - beta)));
  }
  /// a2 = a(-beta) = 1/a(beta).
  static BTParameter of_beta_reversed(double beta) { return of_beta(-beta); }
  /// a3 = -a(beta).
  static BTParameter of_beta_negated(double beta) {
    return BTParameter(-std::sqrt((1.0 + beta) / (1.0 - beta)));
  }
  /// beta - i*alpha (vacuum -> complex kink).
  static BTParameter kink_descent(const SolitonParams& p) {
    return BTParameter({p.beta, -p.alpha()});
  }
  /// beta + i*alpha (complex kink -> breather).
  static BTParameter breather_ascent(const SolitonParams& p) {
    return BTParameter({p.beta, p.alpha()});
  }
};

enum class ProfileKind {
  RealKink,      // Q(x; beta, x0), x0 = x1 + x2
  ComplexKink,   // K(x; beta, x1, x2)
  ConjugateKink, // conj(K)
  Breather,      // B
  TwoKink,       // R
  KinkAntikink,  // A
};

}  // namespace sg
