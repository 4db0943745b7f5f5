#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sglab/grid.hpp"
#include "sglab/profiles.hpp"

namespace sg {

/// Background-plus-perturbation state. The background is an exact solution
/// supplied analytically; the full field is background(t) + perturbation.
struct EvolvingState {
  std::optional<SolutionEvaluator> background;
  FieldPair pert;
  double t = 0.0;

  FieldPair full() const {
    if (!background) return pert;
    const FieldPair bg = background->sample(t, pert.grid());
    return bg + pert;
  }
};

struct ConservedSample {
  double t;
  Complex E;
  Complex P;
};

struct Trajectory {
  std::vector<EvolvingState> snapshots;  // at the requested output times
  std::vector<ConservedSample> conserved;
  std::vector<std::string> warnings;
  bool blew_up = false;
  double blowup_time = 0.0;
};

/// Strang-split conservative step scheme: half-kick by -sin(phi), linear
/// wave drift with the 4th-order Laplacian, half-kick; applied to the full
/// field with the background subtracted analytically after each step.
/// Integrates from initial.t to T (either direction); records snapshots and
/// conserved quantities at the requested output times. Complex states are
/// truncated with a blow-up flag when sup|phi_t| exceeds blowup_threshold or
/// values go non-finite.
Trajectory evolve(const EvolvingState& initial, double T, double dt,
                  const std::vector<double>& outputs, double blowup_threshold = 1e6);

/// (1/2) int (|z_x|^2 + |z|^2 + |w|^2): the functional controlling the
/// near-singular-time windows.
double near_singular_energy(const Field& z, const Field& w);

struct BlowupFlag {
  double t;
  double sup_phi_t;
  double nearest_singular_time;  // NaN when no prediction supplied
};

/// Flags when the state's sup|phi_t| exceeds the threshold or any sample is
/// non-finite; reports the nearest predicted singular time.
std::optional<BlowupFlag> blowup_monitor(const EvolvingState& state, double threshold,
                                         const std::vector<double>& predicted_tk = {});

/// Walk t upward toward t_sing from below until sup|phi_t| of the exact
/// evaluator crosses the threshold; returns the crossing time.
double find_blowup_time(const SolutionEvaluator& e, double t_sing, double threshold,
                        const Grid& g, double start_offset = 0.04);

}  // namespace sg
