#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cavlat/geometry.hpp"

namespace cavlat {

/// Exactly `per_site` atoms on every site; no number fluctuations.
struct MottInsulator {
  int per_site = 1;
};

/// `atoms` bosons, each delocalised uniformly over `sites` sites. Site
/// occupations are multinomial(atoms; 1/sites, ...), total number fixed.
struct Superfluid {
  int atoms = 30;
  int sites = 30;
};

/// Independent Poissonian occupation with mean `mean_per_site` on every
/// site. Total atom number is not fixed.
struct Coherent {
  double mean_per_site = 1.0;
};

using AtomicState = std::variant<MottInsulator, Superfluid, Coherent>;

/// Throws DomainError on non-physical parameters.
void validate(const AtomicState& state);

/// Throws DomainError when a superfluid's site count differs from the lattice's.
void check_compatible(const AtomicState& state, const LatticeGeometry& geom);

/// Mean density n = <n_i>.
double mean_density(const AtomicState& state);

/// Canonical textual form, `mi:<n>`, `sf:<N>` or `coherent:<n>`.
std::string describe(const AtomicState& state);

/// Site-uniform one- and two-point occupation statistics.
struct OccupationMoments {
  double mean = 0.0;
  double on_site_var = 0.0;  // <dn^2>
  double pair_cov = 0.0;     // <dn_a dn_b>, a != b
};

OccupationMoments moments(const AtomicState& state);

struct PmfOptions {
  /// Width of a value bin. Values of W closer than this are merged.
  double resolution = 1e-4;
  /// Upper bound on the total probability discarded from Poisson tails.
  double coherent_tail = 1e-10;
  /// Largest number of value bins a pmf may span.
  std::int64_t max_support = 10'000'000;
};

/// Distribution of W = sum_m w_m n_m for a fixed weight vector.
struct WeightedStatistic {
  std::vector<double> weights;  // one per lattice site, zero when not illuminated
  std::vector<double> support;  // strictly increasing
  std::vector<double> pmf;      // same length as support
  double resolution = 0.0;
  double truncated_mass = 0.0;  // upper bound on discarded tail probability

  double total_mass() const;
  double mean() const;
  double variance() const;
  double probability_at(double value) const;
};

/// Exact pmf of W. `weights` has one entry per lattice site (M entries);
/// for a superfluid its length must equal the state's site count.
WeightedStatistic statistic_pmf(const AtomicState& state, std::span<const double> weights,
                                const PmfOptions& options = {});

/// Weight vector with `value` on illuminated sites and 0 elsewhere.
std::vector<double> illuminated_weights(const LatticeGeometry& geom, double value = 1.0);

/// Weight vector (-1)^m on illuminated sites and 0 elsewhere.
std::vector<double> parity_weights(const LatticeGeometry& geom);

/// Diagonal cavity coupling |u1(r_m)|^2 on illuminated sites: 1 for a
/// traveling-wave cavity, cos^2(m k_x d) for a standing-wave cavity.
std::vector<double> cavity_weights(const ModeProfile& cavity, const LatticeGeometry& geom);

/// Pmf of sum_m (-1)^m n_m over the illuminated block: the difference between
/// the even-site and odd-site atom numbers.
WeightedStatistic parity_statistic(const AtomicState& state, const LatticeGeometry& geom,
                                   const PmfOptions& options = {});

}  // namespace cavlat
