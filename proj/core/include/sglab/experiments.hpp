#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "sglab/config.hpp"
#include "sglab/grid.hpp"

namespace sg {

struct RunReport {
  std::string csv;
  int failures = 0;
  std::string summary;
};

/// Allowed config keys per subcommand.
const std::set<std::string>& subcommand_schema(const std::string& name);

RunReport run_identities(const Config& cfg);
RunReport run_roundtrip(const Config& cfg);
RunReport run_nondegeneracy(const Config& cfg);
RunReport run_stability(const Config& cfg);
RunReport run_evolve(const Config& cfg);

/// BT-transport cross check: descend the modulated perturbed breather at
/// t = 0, evolve the vacuum-level pair to t_target, ascend with the profiles
/// modulated from the directly evolved solution, compare in H1 x L2.
struct TransportResult {
  double gap;
  double t;
};
TransportResult bt_transport_check(double beta, double eta, std::uint64_t seed,
                                   double t_target, const Grid& g, double dt);

}  // namespace sg
