#include <doctest.h>

#include <cmath>

#include "sglab/numerics.hpp"
#include "sglab/profiles.hpp"

using namespace sg;

namespace {
const Grid kG(40.0, 4096);
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("soliton params derive alpha and gamma") {
  const SolitonParams p(0.6, 0.1, -0.2);
  CHECK(p.alpha() == doctest::Approx(0.8));
  CHECK(p.gamma() == doctest::Approx(1.25));
  CHECK(p.alpha() * p.alpha() + p.beta * p.beta == doctest::Approx(1.0));
  CHECK(p.gamma() * p.alpha() == doctest::Approx(1.0));
  CHECK_THROWS(SolitonParams(1.0, 0, 0));
  CHECK_THROWS(SolitonParams(0.0, 0, 0));
}

TEST_CASE("breather degenerates to zero at x1 = 0 with B_t(0) = 4 beta") {
  const double beta = std::sqrt(3.0) / 2.0;
  const SolitonParams p(beta, 0.0, 0.0);
  const FieldPair b = eval_profile(ProfileKind::Breather, p, kG);
  CHECK(sup_norm(b.phi) < 1e-14);
  const ProfileEvaluator ev{ProfileKind::Breather, p};
  CHECK(ev.dt(0.0).real() == doctest::Approx(4.0 * beta).epsilon(1e-12));
  CHECK(ev.dt(0.0).real() == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("two-kink is odd about x = -x2, kink-antikink decays and is even") {
  const SolitonParams p(0.5, 0.7, 0.4);
  const ProfileEvaluator R{ProfileKind::TwoKink, p};
  const ProfileEvaluator A{ProfileKind::KinkAntikink, p};
  for (double y : {0.3, 1.1, 2.9, 7.0}) {
    CHECK(std::abs(R.value(-p.x2 + y) + R.value(-p.x2 - y)) < 1e-12);
    CHECK(std::abs(R.dt(-p.x2 + y) + R.dt(-p.x2 - y)) < 1e-12);
    CHECK(std::abs(R.dx(-p.x2 + y) - R.dx(-p.x2 - y)) < 1e-12);
    CHECK(std::abs(A.value(-p.x2 + y) - A.value(-p.x2 - y)) < 1e-12);
    CHECK(std::abs(A.dt(-p.x2 + y) - A.dt(-p.x2 - y)) < 1e-12);
    CHECK(std::abs(A.dx(-p.x2 + y) + A.dx(-p.x2 - y)) < 1e-12);
  }
  // limits: R -> +-2pi, A -> 0, derivative profiles -> 0
  CHECK(std::abs(R.value(39.0) - 2.0 * kPi) < 1e-12);
  CHECK(std::abs(R.value(-39.0) + 2.0 * kPi) < 1e-12);
  CHECK(std::abs(A.value(39.0)) < 1e-6);
  CHECK(std::abs(A.value(-39.0)) < 1e-6);
  CHECK(std::abs(A.dt(39.0)) < 1e-6);
  CHECK(std::abs(R.dt(-39.0)) < 1e-6);
}

TEST_CASE("breather parity and decay at x2 = 0") {
  const SolitonParams p(0.5, 0.45, 0.0);
  const ProfileEvaluator B{ProfileKind::Breather, p};
  for (double y : {0.4, 1.7, 5.2}) {
    CHECK(std::abs(B.value(y) - B.value(-y)) < 1e-13);  // B even
    CHECK(std::abs(B.dt(y) - B.dt(-y)) < 1e-13);        // B_t even
    CHECK(std::abs(B.dx(y) + B.dx(-y)) < 1e-13);        // B_x odd
  }
  CHECK(std::abs(B.value(39.0)) < 1e-6);
  CHECK(std::abs(B.dt(39.0)) < 1e-6);
}

TEST_CASE("complex kink parity about x = -x2") {
  const SolitonParams p(0.5, 0.4, 0.3);
  const ProfileEvaluator K{ProfileKind::ComplexKink, p};
  for (double y : {0.2, 1.4, 3.3}) {
    const Complex a = K.dx(-p.x2 + y), b = K.dx(-p.x2 - y);
    CHECK(std::abs(a.real() - b.real()) < 1e-12);
    CHECK(std::abs(a.imag() + b.imag()) < 1e-12);
  }
}

TEST_CASE("exact solutions: time shifts and breather periodicity") {
  const SolitonParams p(0.5, 0.2, -0.3);
  const FieldPair b0 = eval_profile(ProfileKind::Breather, p, kG);
  const FieldPair bt0 = eval_exact_solution(ProfileKind::Breather, p, 0.0, kG);
  CHECK(sup_norm(b0.phi - bt0.phi) == 0.0);
  CHECK(sup_norm(b0.phi_t - bt0.phi_t) == 0.0);

  const double period = 2.0 * kPi / p.alpha();
  const FieldPair bp = eval_exact_solution(ProfileKind::Breather, p, period, kG);
  CHECK(sup_norm(bp.phi - b0.phi) < 1e-12);
  CHECK(sup_norm(bp.phi_t - b0.phi_t) < 1e-12);
}

TEST_CASE("singular set: times and proximity flag") {
  const double beta = std::sqrt(3.0) / 2.0;  // alpha = 1/2
  const SolitonParams p(beta, 0.0, 0.0);
  const auto tk = singular_times(p, 0.0, 10.0);
  REQUIRE(tk.size() == 2);
  CHECK(tk[0] == doctest::Approx(kPi));
  CHECK(tk[1] == doctest::Approx(3.0 * kPi));

  CHECK(is_singular(kPi / (2.0 * p.alpha()), p));
  CHECK_FALSE(is_singular(0.0, p));
  CHECK_THROWS(eval_profile(ProfileKind::ComplexKink,
                            SolitonParams(beta, kPi / (2.0 * p.alpha()), 0.0), kG));
}

TEST_CASE("half angles: closed forms and Pythagorean identity") {
  const SolitonParams p(0.5, 0.3, -0.1);
  // Real kink: sin(Q/2) = sech, cos(Q/2) = -tanh (the 4 arctan branch).
  const auto [s, c] = half_angle(ProfileKind::RealKink, p, kG);
  const double x0 = p.x1 + p.x2;
  double worst_s = 0.0, worst_c = 0.0;
  for (int i = 0; i < kG.n; ++i) {
    const double th = p.gamma() * (kG.node(i) + x0);
    worst_s = std::max(worst_s, std::abs(s[i] - 1.0 / std::cosh(th)));
    worst_c = std::max(worst_c, std::abs(c[i] + std::tanh(th)));
  }
  CHECK(worst_s < 1e-13);
  CHECK(worst_c < 1e-13);

  for (ProfileKind k : {ProfileKind::RealKink, ProfileKind::ComplexKink,
                        ProfileKind::ConjugateKink, ProfileKind::Breather,
                        ProfileKind::TwoKink, ProfileKind::KinkAntikink}) {
    const auto [sk, ck] = half_angle(k, p, kG);
    double worst = 0.0;
    for (int i = 0; i < kG.n; ++i)
      worst = std::max(worst, std::abs(sk[i] * sk[i] + ck[i] * ck[i] - 1.0));
    CHECK(worst < 1e-12);
  }

  // consistency with the value fields
  for (ProfileKind k : {ProfileKind::Breather, ProfileKind::TwoKink, ProfileKind::ComplexKink}) {
    const auto [sk, ck] = half_angle(k, p, kG);
    const FieldPair d = eval_profile(k, p, kG);
    double worst = 0.0;
    for (int i = 0; i < kG.n; ++i)
      worst = std::max(worst, std::abs(std::sin(0.5 * d.phi[i]) - sk[i]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("shift derivatives: identities, parity, finite differences") {
  const SolitonParams p(0.5, 0.45, 0.0);

  SUBCASE("breather j=1 is B_t, j=2 is B_x") {
    const FieldPair d1 = shift_derivatives(ProfileKind::Breather, p, kG, 1);
    const FieldPair d2 = shift_derivatives(ProfileKind::Breather, p, kG, 2);
    const ProfileEvaluator ev{ProfileKind::Breather, p};
    double w1 = 0.0, w2 = 0.0;
    for (int i = 0; i < kG.n; ++i) {
      w1 = std::max(w1, std::abs(d1.phi[i] - ev.dt(kG.node(i))));
      w2 = std::max(w2, std::abs(d2.phi[i] - ev.dx(kG.node(i))));
    }
    CHECK(w1 < 1e-13);
    CHECK(w2 < 1e-13);
  }

  SUBCASE("parity at x2 = 0: B_t1 even, B_t2 odd") {
    const FieldPair d1 = shift_derivatives(ProfileKind::Breather, p, kG, 1);
    const FieldPair d2 = shift_derivatives(ProfileKind::Breather, p, kG, 2);
    double e_even = 0.0, e_odd = 0.0;
    for (int i = 0; i < kG.n; ++i) {
      const int j = kG.n - 1 - i;
      e_even = std::max(e_even, std::abs(d1.phi_t[i] - d1.phi_t[j]));
      e_odd = std::max(e_odd, std::abs(d2.phi_t[i] + d2.phi_t[j]));
    }
    CHECK(e_even < 1e-12);
    CHECK(e_odd < 1e-12);
  }

  SUBCASE("central finite differences in the shifts") {
    const double eps = 1e-4;
    for (ProfileKind k :
         {ProfileKind::Breather, ProfileKind::TwoKink, ProfileKind::KinkAntikink}) {
      for (int j = 1; j <= 2; ++j) {
        const FieldPair dj = shift_derivatives(k, p, kG, j);
        const SolitonParams pp = j == 1 ? p.with_shifts(p.x1 + eps, p.x2)
                                        : p.with_shifts(p.x1, p.x2 + eps);
        const SolitonParams pm = j == 1 ? p.with_shifts(p.x1 - eps, p.x2)
                                        : p.with_shifts(p.x1, p.x2 - eps);
        const FieldPair fp = eval_profile(k, pp, kG);
        const FieldPair fm = eval_profile(k, pm, kG);
        double w = 0.0, wt = 0.0;
        for (int i = 0; i < kG.n; ++i) {
          w = std::max(w, std::abs((fp.phi[i] - fm.phi[i]) / (2 * eps) - dj.phi[i]));
          wt = std::max(wt, std::abs((fp.phi_t[i] - fm.phi_t[i]) / (2 * eps) - dj.phi_t[i]));
        }
        CHECK(w < 1e-6);
        CHECK(wt < 1e-6);
      }
    }
  }

  CHECK_THROWS(shift_derivatives(ProfileKind::RealKink, p, kG, 1));
  CHECK_THROWS(shift_derivatives(ProfileKind::Breather, p, kG, 3));
}

TEST_CASE("sg residual of exact solutions") {
  SUBCASE("zero solution") {
    const Field r = sg_residual(zero_solution(), 0.3, 1e-4, kG);
    CHECK(sup_norm(r) == 0.0);
  }

  SUBCASE("breather and 2-kink at t = 0.7") {
    const SolitonParams p(0.5, 0.2, -0.3);
    const Field rb = sg_residual(exact_solution(ProfileKind::Breather, p), 0.7, 1e-4, kG);
    CHECK(sup_norm(rb) < 1e-6);
    const Field rr = sg_residual(exact_solution(ProfileKind::TwoKink, p), 0.7, 1e-4, kG);
    CHECK(sup_norm(rr) < 1e-6);
  }

  SUBCASE("complex kink solves SG as well") {
    const SolitonParams p(0.5, 0.2, 0.0);
    const Field rk = sg_residual(exact_solution(ProfileKind::ComplexKink, p), 0.4, 1e-4, kG);
    CHECK(sup_norm(rk) < 1e-6);
  }
}

TEST_CASE("lorentz boost") {
  const SolitonParams p(0.5, 0.0, 0.0);

  SUBCASE("zero boost is the identity") {
    const SolutionEvaluator e = exact_solution(ProfileKind::Breather, p);
    const SolutionEvaluator b = lorentz_boost(e, 0.0);
    const FieldPair s0 = e.sample(0.9, kG);
    const FieldPair s1 = b.sample(0.9, kG);
    CHECK(sup_norm(s0.phi - s1.phi) < 1e-14);
    CHECK(sup_norm(s0.phi_t - s1.phi_t) < 1e-14);
  }

  SUBCASE("boosted static kink matches the moving kink profile") {
    SolutionEvaluator still;
    still.value = [](double, double x) { return Complex(4.0 * std::atan(std::exp(x))); };
    still.dt = [](double, double) { return Complex(0.0); };
    still.dx = [](double, double x) { return Complex(2.0 / std::cosh(x)); };
    const double beta = 0.6;
    const SolutionEvaluator boosted = lorentz_boost(still, beta);
    const SolutionEvaluator moving =
        exact_solution(ProfileKind::RealKink, SolitonParams(beta, 0.0, 0.0));
    for (double t : {0.0, 0.7, 2.1}) {
      const FieldPair a = boosted.sample(t, kG);
      const FieldPair b = moving.sample(t, kG);
      CHECK(sup_norm(a.phi - b.phi) < 1e-10);
      CHECK(sup_norm(a.phi_t - b.phi_t) < 1e-10);
    }
  }

  SUBCASE("boosted breather still satisfies the equation") {
    const SolutionEvaluator b =
        lorentz_boost(exact_solution(ProfileKind::Breather, p), 0.35);
    const Field r = sg_residual(b, 0.7, 1e-4, kG);
    CHECK(sup_norm(r) < 1e-6);
  }

  CHECK_THROWS(lorentz_boost(zero_solution(), 1.0));
}
