#pragma once

#include <span>

#include "sglab/grid.hpp"

namespace sg {

/// Finite-difference weights for the m-th derivative at x0 from nodes xs
/// (Fornberg's recursion). Row m of the returned table.
std::vector<double> fd_weights(double x0, std::span<const double> xs, int m);

/// Spatial derivative. Centered stencils in the interior, shifted one-sided
/// stencils of the same order near the boundary. The stencil order exceeds
/// the documented 4th-order contract so that closed-form identity checks on
/// the default grid resolve below 1e-9.
Field differentiate(const Field& f);

/// Second spatial derivative at the requested order of accuracy (2, 4, 6, 8).
Field second_derivative(const Field& f, int order = 4);

/// h * (trapezoid sum). Superalgebraically accurate for smooth integrands
/// whose derivatives vanish at both edges.
Complex integrate(const Field& f);

/// Bilinear pairing integral of two fields (no conjugation).
Complex pair_integral(const Field& a, const Field& b);

enum class CumulativeOrigin { LeftEdge, Zero };

/// Running integral from the chosen origin; exactly 0 there. The running
/// trapezoid sum carries an endpoint-derivative correction so that the
/// derivative of the result converges at 4th order.
Field cumulative_integral(const Field& f, CumulativeOrigin origin = CumulativeOrigin::LeftEdge);

/// H1 x L2 norm of (phi, phi_t): sqrt( int |phi|^2 + |phi_x|^2 + |phi_t|^2 ).
double energy_norm(const FieldPair& p);

/// L2 norm sqrt( int |f|^2 ).
double l2_norm(const Field& f);

}  // namespace sg
