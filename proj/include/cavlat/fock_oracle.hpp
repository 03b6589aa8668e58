#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cavlat/atom_stats.hpp"
#include "cavlat/geometry.hpp"

namespace cavlat::oracle {

/// Brute-force reference: every observable is computed by summing over
/// explicit Fock configurations, without using closed-form moments.

struct OracleLimits {
  double max_configurations = 1e7;
  /// Per-site Poisson truncation: keep 0..k with cumulative mass >= 1 - tail.
  double coherent_tail = 1e-12;
};

struct FockConfiguration {
  std::vector<int> occupations;  // n_1 .. n_M
  double probability = 0.0;
};

/// Number of configurations `enumerate` would produce.
double configuration_count(const AtomicState& state, int sites, const OracleLimits& limits = {});

/// Visits every configuration in colexicographic order. The occupation
/// buffer is reused between calls.
void for_each_configuration(const AtomicState& state, int sites, const OracleLimits& limits,
                            const std::function<void(const FockConfiguration&)>& visit);

std::vector<FockConfiguration> enumerate(const AtomicState& state, int sites,
                                         const OracleLimits& limits = {});

struct ExactExpectations {
  Complex mean_d;              // <D10>
  double second_moment = 0.0;  // <D10* D10>
  double noise = 0.0;          // second_moment - |<D10>|^2
};

ExactExpectations exact_expectations(const AtomicState& state, const ModeProfile& probe,
                                     const ModeProfile& cavity_mode, const LatticeGeometry& geom,
                                     const OracleLimits& limits = {});

/// Same, over a configuration list produced by `enumerate` for `geom.sites`
/// sites. Lets angle sweeps reuse one enumeration.
ExactExpectations exact_expectations(std::span<const FockConfiguration> configurations,
                                     const ModeProfile& probe, const ModeProfile& cavity_mode,
                                     const LatticeGeometry& geom);

/// Aggregates sum_m w_m n_m over the enumeration. `weights` has one entry
/// per lattice site.
WeightedStatistic exact_statistic_pmf(const AtomicState& state, std::span<const double> weights,
                                      const LatticeGeometry& geom,
                                      const OracleLimits& limits = {});

}  // namespace cavlat::oracle
