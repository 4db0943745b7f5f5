#include "sglab/modulation.hpp"

#include <cmath>

#include "sglab/csv.hpp"
#include "sglab/numerics.hpp"

namespace sg {

namespace {

std::pair<Complex, Complex> residual_pair(const Field& z, const Field& w, ProfileKind kind,
                                          const SolitonParams& p, PairingKind pairing) {
  std::pair<Complex, Complex> out;
  for (int j = 1; j <= 2; ++j) {
    const FieldPair dj = shift_derivatives(kind, p, z.grid, j);
    Complex r = pair_integral(z, dj.phi) + pair_integral(w, dj.phi_t);
    if (pairing == PairingKind::H1)
      r += pair_integral(differentiate(z), differentiate(dj.phi));
    (j == 1 ? out.first : out.second) = r;
  }
  return out;
}

double state_distance(const FieldPair& state, ProfileKind kind, const SolitonParams& p) {
  const FieldPair prof = eval_profile(kind, p, state.grid());
  return energy_norm(state - prof);
}

}  // namespace

std::pair<Complex, Complex> orthogonality_residual(const Field& z, const Field& w,
                                                   ProfileKind kind, const SolitonParams& p,
                                                   PairingKind pairing) {
  return residual_pair(z, w, kind, p, pairing);
}

ModulationResult modulate_static(const FieldPair& state, ProfileKind kind, double beta,
                                 std::pair<double, double> guess,
                                 const ModulationOptions& opt) {
  const Grid& g = state.grid();

  auto coarse_scan = [&](double cx1, double cx2) {
    double best = std::numeric_limits<double>::infinity();
    std::pair<double, double> arg{cx1, cx2};
    for (double dx1 = -2.0; dx1 <= 2.0; dx1 += 0.5)
      for (double dx2 = -2.0; dx2 <= 2.0; dx2 += 0.5) {
        const SolitonParams p(beta, cx1 + dx1, cx2 + dx2);
        const double d = state_distance(state, kind, p);
        if (d < best) {
          best = d;
          arg = {cx1 + dx1, cx2 + dx2};
        }
      }
    return std::make_pair(best, arg);
  };

  auto [dist, start] = coarse_scan(guess.first, guess.second);
  {
    // The guess itself may already be deep inside the neighborhood.
    const double dg = state_distance(state, kind, SolitonParams(beta, guess.first, guess.second));
    if (dg < dist) {
      dist = dg;
      start = guess;
    }
  }

  double x1 = start.first, x2 = start.second;
  int it = 0;
  double rnorm = std::numeric_limits<double>::infinity();
  Field z(g), w(g);

  auto eval_at = [&](double a1, double a2, Field& zz, Field& ww) {
    const SolitonParams p(beta, a1, a2);
    const FieldPair prof = eval_profile(kind, p, g);
    zz = state.phi - prof.phi;
    ww = state.phi_t - prof.phi_t;
    return residual_pair(zz, ww, kind, p, opt.pairing);
  };

  auto r = eval_at(x1, x2, z, w);
  rnorm = std::max(std::abs(r.first), std::abs(r.second));

  while (rnorm > opt.tol && it < opt.max_iterations) {
    const SolitonParams p(beta, x1, x2);
    const FieldPair d1 = shift_derivatives(kind, p, g, 1);
    const FieldPair d2 = shift_derivatives(kind, p, g, 2);
    // Gram Jacobian: dr_i/dx_j = -<(D_i,(D_i)_t),(D_j,(D_j)_t)>.
    auto gram = [&](const FieldPair& a, const FieldPair& b) {
      Complex v = pair_integral(a.phi, b.phi) + pair_integral(a.phi_t, b.phi_t);
      if (opt.pairing == PairingKind::H1)
        v += pair_integral(differentiate(a.phi), differentiate(b.phi));
      return v.real();
    };
    const double j11 = -gram(d1, d1), j12 = -gram(d1, d2);
    const double j21 = j12, j22 = -gram(d2, d2);
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-12)
      throw std::runtime_error("modulate_static: singular Gram Jacobian");
    double s1 = -(j22 * r.first.real() - j12 * r.second.real()) / det;
    double s2 = -(-j21 * r.first.real() + j11 * r.second.real()) / det;
    const double step = std::max(std::abs(s1), std::abs(s2));
    if (step > opt.trust_radius) {
      s1 *= opt.trust_radius / step;
      s2 *= opt.trust_radius / step;
    }
    Field zt(g), wt(g);
    auto rt = eval_at(x1 + s1, x2 + s2, zt, wt);
    const double rtn = std::max(std::abs(rt.first), std::abs(rt.second));
    if (rtn < rnorm) {
      x1 += s1; x2 += s2;
      z = zt; w = wt; r = rt; rnorm = rtn;
    } else {
      // Rejected step: re-seed from a fresh coarse scan around the iterate.
      auto rescan = coarse_scan(x1, x2);
      if (rescan.second.first == x1 && rescan.second.second == x2)
        throw std::runtime_error("modulate_static: Newton stalled outside trust region");
      x1 = rescan.second.first;
      x2 = rescan.second.second;
      r = eval_at(x1, x2, z, w);
      rnorm = std::max(std::abs(r.first), std::abs(r.second));
    }
    ++it;
  }
  if (rnorm > opt.tol)
    throw std::runtime_error("modulate_static: no convergence, residual " + std::to_string(rnorm));
  // The tube condition is certified at the orthogonal fit, where the
  // distance to the shift orbit is actually attained.
  if (energy_norm(FieldPair(z, w)) > opt.neighborhood_radius)
    throw std::runtime_error("modulate_static: state outside the modulation neighborhood");
  return {x1, x2, std::move(z), std::move(w), it};
}

ModulationTrack modulate_trajectory(const Trajectory& traj, ProfileKind kind, double beta,
                                    std::pair<double, double> guess0,
                                    const ModulationOptions& opt) {
  ModulationTrack track;
  std::pair<double, double> guess = guess0;
  double last_t = 0.0;
  bool have_last = false;
  const double drift = (kind == ProfileKind::Breather) ? 1.0 : beta;

  for (const EvolvingState& snap : traj.snapshots) {
    const FieldPair full = snap.full();
    if (have_last) guess.first += drift * (snap.t - last_t);
    const ModulationResult fit = modulate_static(full, kind, beta, guess, opt);
    track.t.push_back(snap.t);
    track.x1.push_back(fit.x1);
    track.x2.push_back(fit.x2);
    track.residual_norm.push_back(energy_norm(FieldPair(fit.z, fit.w)));
    track.residuals.emplace_back(fit.z, fit.w);
    guess = {fit.x1, fit.x2};
    last_t = snap.t;
    have_last = true;
  }

  const std::size_t n = track.t.size();
  track.x1dot.assign(n, 0.0);
  track.x2dot.assign(n, 0.0);
  auto slope = [&](const std::vector<double>& y, std::size_t i, std::size_t j) {
    return (y[j] - y[i]) / (track.t[j] - track.t[i]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (n < 2) break;
    if (i == 0) {
      track.x1dot[i] = slope(track.x1, 0, 1);
      track.x2dot[i] = slope(track.x2, 0, 1);
    } else if (i == n - 1) {
      track.x1dot[i] = slope(track.x1, n - 2, n - 1);
      track.x2dot[i] = slope(track.x2, n - 2, n - 1);
    } else {
      track.x1dot[i] = slope(track.x1, i - 1, i + 1);
      track.x2dot[i] = slope(track.x2, i - 1, i + 1);
    }
  }
  return track;
}

std::string modulation_track_csv(const ModulationTrack& track) {
  CsvBuilder csv({"t", "x1", "x2", "x1dot", "x2dot", "residual_norm"});
  for (std::size_t i = 0; i < track.t.size(); ++i)
    csv.row({csv_num(track.t[i]), csv_num(track.x1[i]), csv_num(track.x2[i]),
             csv_num(track.x1dot[i]), csv_num(track.x2dot[i]),
             csv_num(track.residual_norm[i])});
  return csv.text();
}

}  // namespace sg
