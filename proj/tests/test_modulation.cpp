#include <doctest.h>

#include <cmath>

#include "sglab/modulation.hpp"
#include "sglab/numerics.hpp"
#include "sglab/perturb.hpp"
#include "sglab/profiles.hpp"

using namespace sg;

namespace {
const Grid kG(40.0, 4096);
}

TEST_CASE("static modulation recovers exact shifts") {
  const double beta = 0.5;
  for (ProfileKind kind :
       {ProfileKind::Breather, ProfileKind::TwoKink, ProfileKind::KinkAntikink}) {
    CAPTURE(static_cast<int>(kind));
    const SolitonParams p(beta, 0.3, -0.2);
    const FieldPair state = eval_profile(kind, p, kG);
    const ModulationResult fit = modulate_static(state, kind, beta, {0.0, 0.0});
    CHECK(std::abs(fit.x1 - 0.3) < 1e-8);
    CHECK(std::abs(fit.x2 + 0.2) < 1e-8);
    CHECK(energy_norm(FieldPair(fit.z, fit.w)) < 1e-8);
  }
}

TEST_CASE("static modulation under noise") {
  const double beta = 0.5, eta = 1e-3;
  const SolitonParams p(beta, 0.3, -0.2);
  const FieldPair prof = eval_profile(ProfileKind::Breather, p, kG);
  const FieldPair pert = random_bump_pair(kG, eta, 4);
  const FieldPair state(prof.phi + pert.phi, prof.phi_t + pert.phi_t);
  const ModulationResult fit = modulate_static(state, ProfileKind::Breather, beta, {0, 0});
  CHECK(std::abs(fit.x1 - 0.3) < 5e-3);
  CHECK(std::abs(fit.x2 + 0.2) < 5e-3);
  CHECK(energy_norm(FieldPair(fit.z, fit.w)) <= 2e-3);

  const auto r = orthogonality_residual(fit.z, fit.w, ProfileKind::Breather,
                                        SolitonParams(beta, fit.x1, fit.x2));
  CHECK(std::abs(r.first) < 1e-10);
  CHECK(std::abs(r.second) < 1e-10);

  SUBCASE("H1 pairing variant agrees to second order") {
    ModulationOptions h1;
    h1.pairing = PairingKind::H1;
    const ModulationResult fit2 =
        modulate_static(state, ProfileKind::Breather, beta, {0, 0}, h1);
    CHECK(std::abs(fit2.x1 - fit.x1) < 10.0 * eta * eta / beta);
    CHECK(std::abs(fit2.x2 - fit.x2) < 10.0 * eta * eta / beta);
  }

  SUBCASE("idempotence: re-modulating gives no further update") {
    const SolitonParams pf(beta, fit.x1, fit.x2);
    const FieldPair prof2 = eval_profile(ProfileKind::Breather, pf, kG);
    const FieldPair state2(prof2.phi + fit.z, prof2.phi_t + fit.w);
    const ModulationResult again =
        modulate_static(state2, ProfileKind::Breather, beta, {fit.x1, fit.x2});
    CHECK(std::abs(again.x1 - fit.x1) < 1e-9);
    CHECK(std::abs(again.x2 - fit.x2) < 1e-9);
  }
}

TEST_CASE("out-of-neighborhood states are rejected") {
  FieldPair far(kG);
  far.phi = Field::sample(kG, [](double x) { return 3.0 * std::exp(-x * x); });
  CHECK_THROWS(modulate_static(far, ProfileKind::Breather, 0.5, {0, 0}));
}

TEST_CASE("orthogonality residual: self pairing and cross pairings") {
  const SolitonParams p(0.5, 0.45, 0.0);

  SUBCASE("(z,w) = (D1,(D1)_t): r1 > 0, r2 ~ 0") {
    const FieldPair d1 = shift_derivatives(ProfileKind::Breather, p, kG, 1);
    const auto r = orthogonality_residual(d1.phi, d1.phi_t, ProfileKind::Breather, p);
    CHECK(r.first.real() > 0.1);
    CHECK(std::abs(r.second) < 1e-10);
  }

  SUBCASE("zero residual for zero fields") {
    const auto r = orthogonality_residual(Field(kG), Field(kG), ProfileKind::Breather, p);
    CHECK(std::abs(r.first) == 0.0);
    CHECK(std::abs(r.second) == 0.0);
  }

  SUBCASE("A-profile cross pairings vanish") {
    const ProfileEvaluator A{ProfileKind::KinkAntikink, p};
    Field At(kG), Ax(kG);
    for (int i = 0; i < kG.n; ++i) {
      At[i] = A.dt(kG.node(i));
      Ax[i] = A.dx(kG.node(i));
    }
    CHECK(std::abs(pair_integral(At, Ax)) < 1e-10);
    const FieldPair a1 = shift_derivatives(ProfileKind::KinkAntikink, p, kG, 1);
    const FieldPair a2 = shift_derivatives(ProfileKind::KinkAntikink, p, kG, 2);
    CHECK(std::abs(pair_integral(a1.phi_t, a2.phi_t)) < 1e-10);
  }
}

TEST_CASE("Gram off-diagonals vanish at x2 = 0 for all kinds") {
  for (ProfileKind kind :
       {ProfileKind::Breather, ProfileKind::TwoKink, ProfileKind::KinkAntikink}) {
    const SolitonParams p(0.5, 0.45, 0.0);
    const FieldPair d1 = shift_derivatives(kind, p, kG, 1);
    const FieldPair d2 = shift_derivatives(kind, p, kG, 2);
    const Complex off = pair_integral(d1.phi, d2.phi) + pair_integral(d1.phi_t, d2.phi_t);
    CHECK(std::abs(off) < 1e-10);
  }
}

TEST_CASE("translation equivariance on the grid") {
  const double beta = 0.5;
  const SolitonParams p(beta, 0.3, 0.0);
  const FieldPair pert = random_bump_pair(kG, 1e-3, 8);
  const FieldPair prof = eval_profile(ProfileKind::Breather, p, kG);
  const FieldPair state(prof.phi + pert.phi, prof.phi_t + pert.phi_t);
  const ModulationResult fit = modulate_static(state, ProfileKind::Breather, beta, {0, 0});

  // shift by an exact number of nodes: state'(x) = state(x + k h)
  const int k = 37;
  const double c = k * kG.h();
  FieldPair shifted(kG);
  for (int i = 0; i < kG.n - k; ++i) {
    shifted.phi[i] = state.phi[i + k];
    shifted.phi_t[i] = state.phi_t[i + k];
  }
  // pad the tail with the profile itself (fields decay there)
  for (int i = kG.n - k; i < kG.n; ++i) {
    shifted.phi[i] = state.phi[kG.n - 1];
    shifted.phi_t[i] = state.phi_t[kG.n - 1];
  }
  const ModulationResult fit2 =
      modulate_static(shifted, ProfileKind::Breather, beta, {0, 0});
  CHECK(std::abs(fit2.x1 - fit.x1) < 1e-6);
  CHECK(std::abs(fit2.x2 - (fit.x2 + c)) < 1e-6);
}

TEST_CASE("static parity: even data about x = 0 pins x2 to zero") {
  const double beta = 0.5;
  const SolitonParams p(beta, 0.45, 0.0);
  const FieldPair prof = eval_profile(ProfileKind::Breather, p, kG);
  const FieldPair pert = random_bump_pair(kG, 1e-3, 12, /*even=*/true);
  const FieldPair state(prof.phi + pert.phi, prof.phi_t + pert.phi_t);
  const ModulationResult fit = modulate_static(state, ProfileKind::Breather, beta, {0.45, 0});
  CHECK(std::abs(fit.x2) < 1e-8);
}

TEST_CASE("evolved even perturbation keeps x2 pinned at zero") {
  const double beta = 0.5;
  EvolvingState init;
  init.background = exact_solution(ProfileKind::Breather, SolitonParams(beta, 0.45, 0.0));
  init.pert = random_bump_pair(kG, 1e-3, 14, /*even=*/true);
  const Trajectory traj = evolve(init, 2.0, 0.1 * kG.h(), {0.0, 0.5, 1.0, 1.5, 2.0});
  const ModulationTrack track = modulate_trajectory(traj, ProfileKind::Breather, beta,
                                                    {0.45, 0.0});
  for (double x2 : track.x2) CHECK(std::abs(x2) < 1e-6);
}

TEST_CASE("trajectory modulation on exact snapshots recovers the drift law") {
  for (ProfileKind kind :
       {ProfileKind::Breather, ProfileKind::TwoKink, ProfileKind::KinkAntikink}) {
    CAPTURE(static_cast<int>(kind));
    const double beta = 0.5;
    const SolitonParams p(beta, 0.2, -0.1);
    Trajectory traj;
    for (double t = 0.0; t <= 2.0 + 1e-12; t += 0.5) {
      EvolvingState s;
      s.background = exact_solution(kind, p);
      s.pert = FieldPair(kG);
      s.t = t;
      traj.snapshots.push_back(s);
    }
    const ModulationTrack track = modulate_trajectory(traj, kind, beta, {0.2, -0.1});
    const double drift = kind == ProfileKind::Breather ? 1.0 : beta;
    for (std::size_t i = 0; i < track.t.size(); ++i) {
      CHECK(std::abs(track.x1[i] - (0.2 + drift * track.t[i])) < 1e-8);
      CHECK(std::abs(track.x2[i] + 0.1) < 1e-8);
      CHECK(track.residual_norm[i] < 1e-8);
    }
    // centered-difference speeds reproduce the drift
    for (std::size_t i = 1; i + 1 < track.t.size(); ++i) {
      CHECK(std::abs(track.x1dot[i] - drift) < 1e-7);
      CHECK(std::abs(track.x2dot[i]) < 1e-7);
    }
  }
}
