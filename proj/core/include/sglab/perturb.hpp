#pragma once

#include <cstdint>

#include "sglab/grid.hpp"

namespace sg {

/// Seeded smooth real perturbation pair: each component is a sum of 5
/// Gaussian bumps with centers in [-10, 10] and widths in [0.5, 2], jointly
/// scaled so the H1 x L2 size equals eta. With even = true the bumps are
/// symmetrized about x = 0. Reproducible across platforms for a given seed.
FieldPair random_bump_pair(const Grid& g, double eta, std::uint64_t seed, bool even = false);

}  // namespace sg
