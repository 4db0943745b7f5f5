#pragma once

#include <vector>

#include "sglab/evolution.hpp"
#include "sglab/grid.hpp"
#include "sglab/params.hpp"
#include "sglab/profiles.hpp"

namespace sg {

enum class PairingKind { L2, H1 };

/// The two pairing integrals int (z,w).(D_j, (D_j)_t), j = 1, 2. Under
/// PairingKind::H1 the first slot uses the H1 inner product.
std::pair<Complex, Complex> orthogonality_residual(const Field& z, const Field& w,
                                                   ProfileKind kind, const SolitonParams& p,
                                                   PairingKind pairing = PairingKind::L2);

struct ModulationResult {
  double x1 = 0.0;
  double x2 = 0.0;
  Field z;
  Field w;
  int iterations = 0;
};

struct ModulationOptions {
  double tol = 1e-10;
  int max_iterations = 60;
  double trust_radius = 0.5;
  double neighborhood_radius = 0.1;  // nu0
  PairingKind pairing = PairingKind::L2;
};

/// Fit shifts (x1, x2) so the residual against D(.; beta, x1, x2) meets both
/// orthogonality conditions. 2-D Newton with the Gram-matrix Jacobian,
/// warm-started from `guess`; falls back to a coarse scan on rejection.
ModulationResult modulate_static(const FieldPair& state, ProfileKind kind, double beta,
                                 std::pair<double, double> guess,
                                 const ModulationOptions& opt = {});

struct ModulationTrack {
  std::vector<double> t;
  std::vector<double> x1, x2;
  std::vector<double> x1dot, x2dot;       // centered differences of the fits
  std::vector<double> residual_norm;      // H1 x L2 norm of (z,w)
  std::vector<FieldPair> residuals;
};

/// Per-snapshot static modulation with continuation; speeds by centered
/// differencing of the fitted shifts.
ModulationTrack modulate_trajectory(const Trajectory& traj, ProfileKind kind, double beta,
                                    std::pair<double, double> guess0 = {0.0, 0.0},
                                    const ModulationOptions& opt = {});

/// CSV rendering of a track: t,x1,x2,x1dot,x2dot,residual_norm.
std::string modulation_track_csv(const ModulationTrack& track);

}  // namespace sg
