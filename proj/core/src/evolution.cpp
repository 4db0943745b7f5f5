#include "sglab/evolution.hpp"

#include <cmath>
#include <limits>

#include "sglab/numerics.hpp"
#include "sglab/conservation.hpp"

namespace sg {

namespace {

bool exceeded(const FieldPair& full, double threshold) {
  if (!all_finite(full.phi) || !all_finite(full.phi_t)) return true;
  return sup_norm(full.phi_t) > threshold;
}

}  // namespace

Trajectory evolve(const EvolvingState& initial, double T, double dt,
                  const std::vector<double>& outputs, double blowup_threshold) {
  const Grid& g = initial.pert.grid();
  const double h = g.h();
  if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
  if (dt > 0.5 * h + 1e-15)
    throw std::invalid_argument("evolve: CFL violated, need dt <= 0.5 h");

  Trajectory traj;
  const double span = std::abs(T - initial.t);
  if (span > g.L - 10.0)
    traj.warnings.push_back("horizon T exceeds L - 10: edge reflections may pollute the run");
  {
    const double interior = sup_norm(initial.pert.phi);
    const double edge = std::max(std::abs(initial.pert.phi[0]), std::abs(initial.pert.phi[g.n - 1]));
    if (interior > 0.0 && edge > 1e-4 * interior)
      traj.warnings.push_back("perturbation does not decay at the grid edges: domain too small");
  }

  const double dir = (T >= initial.t) ? 1.0 : -1.0;

  // Sorted output times within [t0, T] (or reversed for backward runs).
  std::vector<double> outs = outputs;
  std::sort(outs.begin(), outs.end());
  if (dir < 0) std::reverse(outs.begin(), outs.end());

  EvolvingState state = initial;
  FieldPair full = state.full();

  auto record = [&](double t) {
    EvolvingState snap;
    snap.background = state.background;
    snap.t = t;
    if (state.background) {
      const FieldPair bg = state.background->sample(t, g);
      snap.pert = full - bg;
    } else {
      snap.pert = full;
    }
    traj.snapshots.push_back(snap);
    traj.conserved.push_back({t, energy(full), momentum(full)});
  };

  auto step = [&](double t, double tau) {
    // half kick
    for (int i = 0; i < g.n; ++i) full.phi_t[i] -= 0.5 * tau * std::sin(full.phi[i]);
    // linear wave drift, velocity-Verlet with the 4th-order Laplacian
    Field lap = second_derivative(full.phi, 4);
    for (int i = 0; i < g.n; ++i)
      full.phi[i] += tau * full.phi_t[i] + 0.5 * tau * tau * lap[i];
    const Field lap2 = second_derivative(full.phi, 4);
    for (int i = 0; i < g.n; ++i) full.phi_t[i] += 0.5 * tau * (lap[i] + lap2[i]);
    // half kick
    for (int i = 0; i < g.n; ++i) full.phi_t[i] -= 0.5 * tau * std::sin(full.phi[i]);

    const double tn = t + tau;
    // Dirichlet on the perturbation: pin the outermost nodes to the background.
    if (state.background) {
      for (int i : {0, g.n - 1}) {
        const double x = g.node(i);
        full.phi[i] = state.background->value(tn, x);
        full.phi_t[i] = state.background->dt(tn, x);
      }
    } else {
      for (int i : {0, g.n - 1}) {
        full.phi[i] = 0.0;
        full.phi_t[i] = 0.0;
      }
    }
    return tn;
  };

  double t = state.t;
  std::size_t next_out = 0;
  while (next_out < outs.size() && std::abs(outs[next_out] - t) < 1e-12) {
    record(t);
    ++next_out;
  }

  // March segment by segment so output times and T are hit exactly.
  while (dir * (T - t) > 1e-12) {
    const double target = (next_out < outs.size() && dir * (outs[next_out] - T) < 0)
                              ? outs[next_out]
                              : T;
    const double seg = dir * (target - t);
    if (seg <= 1e-12) { ++next_out; continue; }
    const int nsteps = std::max(1, static_cast<int>(std::ceil(seg / dt - 1e-9)));
    const double tau = dir * seg / nsteps;
    bool aborted = false;
    for (int k = 0; k < nsteps; ++k) {
      t = step(t, tau);
      if (exceeded(full, blowup_threshold)) {
        traj.blew_up = true;
        traj.blowup_time = t;
        aborted = true;
        break;
      }
    }
    if (aborted) break;
    t = target;  // clean up accumulated rounding
    if (next_out < outs.size() && std::abs(outs[next_out] - t) < 1e-9) {
      record(t);
      ++next_out;
    } else if (std::abs(T - t) < 1e-9) {
      break;
    }
  }
  if (!traj.blew_up) {
    // Final state snapshot at T unless already recorded there.
    if (traj.snapshots.empty() || std::abs(traj.snapshots.back().t - T) > 1e-9) record(T);
  }
  // Keep the terminal state accessible.
  state.t = t;
  return traj;
}

double near_singular_energy(const Field& z, const Field& w) {
  const Field zx = differentiate(z);
  const int n = z.size();
  auto wgt = [&](int i) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; };
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += wgt(i) * (std::norm(zx[i]) + std::norm(z[i]) + std::norm(w[i]));
  return 0.5 * z.grid.h() * acc;
}

std::optional<BlowupFlag> blowup_monitor(const EvolvingState& state, double threshold,
                                         const std::vector<double>& predicted_tk) {
  const FieldPair full = state.full();
  const double sup = sup_norm(full.phi_t);
  const bool finite = all_finite(full.phi) && all_finite(full.phi_t);
  if (finite && sup <= threshold) return std::nullopt;
  BlowupFlag flag;
  flag.t = state.t;
  flag.sup_phi_t = sup;
  flag.nearest_singular_time = std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::infinity();
  for (double tk : predicted_tk) {
    const double d = std::abs(tk - state.t);
    if (d < best) {
      best = d;
      flag.nearest_singular_time = tk;
    }
  }
  return flag;
}

double find_blowup_time(const SolutionEvaluator& e, double t_sing, double threshold,
                        const Grid& g, double start_offset) {
  double s = start_offset;
  for (int k = 0; k < 60; ++k) {
    const double t = t_sing - s;
    const FieldPair state = e.sample(t, g);
    const double sup = sup_norm(state.phi_t);
    if (!all_finite(state.phi_t) || sup > threshold) return t;
    s *= 0.5;
  }
  throw std::runtime_error("find_blowup_time: threshold not crossed approaching t_sing");
}

}  // namespace sg
