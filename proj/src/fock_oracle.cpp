#include "cavlat/fock_oracle.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "cavlat/error.hpp"

namespace cavlat::oracle {

namespace {

// Per-site Poisson weights 0..k, k the first index whose cumulative mass
// reaches 1 - tail; renormalised.
std::vector<double> poisson_site(double mean, double tail) {
  std::vector<double> p;
  double cumulative = 0.0;
  for (int k = 0;; ++k) {
    const double pk = std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
    p.push_back(pk);
    cumulative += pk;
    // The second clause stops once terms are negligible even if rounding
    // keeps the running sum just below 1 - tail.
    if ((cumulative >= 1.0 - tail || pk < tail * 1e-6) && k + 1 > mean) {
      break;
    }
  }
  for (auto& x : p) {
    x /= cumulative;
  }
  return p;
}

void require_capacity(double count, const OracleLimits& limits) {
  if (count > limits.max_configurations) {
    std::ostringstream msg;
    msg << "Fock enumeration needs " << count << " configurations, limit is "
        << limits.max_configurations;
    throw CapacityError(msg.str(), count, limits.max_configurations);
  }
}

void enumerate_superfluid(const Superfluid& sf, FockConfiguration& cfg,
                          const std::function<void(const FockConfiguration&)>& visit) {
  const int sites = sf.sites;
  auto& n = cfg.occupations;
  n.assign(static_cast<std::size_t>(sites), 0);
  n[0] = sf.atoms;
  const double log_norm = std::lgamma(sf.atoms + 1.0) - sf.atoms * std::log(double(sites));
  for (;;) {
    double log_w = log_norm;
    for (const int k : n) {
      log_w -= std::lgamma(k + 1.0);
    }
    cfg.probability = std::exp(log_w);
    visit(cfg);

    // Colex successor: move one atom from the first occupied site onward.
    std::size_t i = 0;
    while (i < n.size() && n[i] == 0) {
      ++i;
    }
    if (i + 1 >= n.size()) {
      return;
    }
    const int moved = n[i];
    n[i] = 0;
    n[0] = moved - 1;
    n[i + 1] += 1;
  }
}

void enumerate_coherent(const Coherent& coh, int sites, double tail, FockConfiguration& cfg,
                        const std::function<void(const FockConfiguration&)>& visit) {
  const std::vector<double> site = poisson_site(coh.mean_per_site, tail);
  const int cutoff = static_cast<int>(site.size()) - 1;
  auto& n = cfg.occupations;
  n.assign(static_cast<std::size_t>(sites), 0);
  for (;;) {
    double w = 1.0;
    for (const int k : n) {
      w *= site[static_cast<std::size_t>(k)];
    }
    cfg.probability = w;
    visit(cfg);

    std::size_t i = 0;
    while (i < n.size() && n[i] == cutoff) {
      n[i] = 0;
      ++i;
    }
    if (i == n.size()) {
      return;
    }
    ++n[i];
  }
}

}  // namespace

double configuration_count(const AtomicState& state, int sites, const OracleLimits& limits) {
  validate(state);
  if (sites < 1) {
    throw DomainError("enumeration needs at least one site");
  }
  if (std::holds_alternative<MottInsulator>(state)) {
    return 1.0;
  }
  if (const auto* sf = std::get_if<Superfluid>(&state)) {
    // C(N + M - 1, M - 1)
    const double n = sf->atoms;
    const double m = sf->sites;
    return std::round(
        std::exp(std::lgamma(n + m) - std::lgamma(m) - std::lgamma(n + 1.0)));
  }
  const auto& coh = std::get<Coherent>(state);
  const auto per_site = static_cast<double>(poisson_site(coh.mean_per_site, limits.coherent_tail).size());
  return std::pow(per_site, sites);
}

void for_each_configuration(const AtomicState& state, int sites, const OracleLimits& limits,
                            const std::function<void(const FockConfiguration&)>& visit) {
  require_capacity(configuration_count(state, sites, limits), limits);
  FockConfiguration cfg;
  if (const auto* mi = std::get_if<MottInsulator>(&state)) {
    cfg.occupations.assign(static_cast<std::size_t>(sites), mi->per_site);
    cfg.probability = 1.0;
    visit(cfg);
  } else if (const auto* sf = std::get_if<Superfluid>(&state)) {
    if (sf->sites != sites) {
      throw DomainError("superfluid site count does not match enumeration sites");
    }
    enumerate_superfluid(*sf, cfg, visit);
  } else {
    enumerate_coherent(std::get<Coherent>(state), sites, limits.coherent_tail, cfg, visit);
  }
}

std::vector<FockConfiguration> enumerate(const AtomicState& state, int sites,
                                         const OracleLimits& limits) {
  std::vector<FockConfiguration> out;
  for_each_configuration(state, sites, limits,
                         [&](const FockConfiguration& cfg) { out.push_back(cfg); });
  return out;
}

namespace {

std::vector<Complex> site_couplings(const ModeProfile& probe, const ModeProfile& cavity_mode,
                                    const LatticeGeometry& geom) {
  std::vector<Complex> coupling(static_cast<std::size_t>(geom.sites), Complex{});
  for (int m = geom.first_illuminated(); m <= geom.last_illuminated(); ++m) {
    coupling[static_cast<std::size_t>(m - 1)] =
        std::conj(mode_value(cavity_mode, geom, m)) * mode_value(probe, geom, m);
  }
  return coupling;
}

void accumulate(const std::vector<Complex>& coupling, const FockConfiguration& cfg,
                ExactExpectations& out) {
  Complex d{};
  for (std::size_t i = 0; i < coupling.size(); ++i) {
    d += coupling[i] * static_cast<double>(cfg.occupations[i]);
  }
  out.mean_d += cfg.probability * d;
  out.second_moment += cfg.probability * std::norm(d);
}

}  // namespace

ExactExpectations exact_expectations(const AtomicState& state, const ModeProfile& probe,
                                     const ModeProfile& cavity_mode, const LatticeGeometry& geom,
                                     const OracleLimits& limits) {
  check_compatible(state, geom);
  const auto coupling = site_couplings(probe, cavity_mode, geom);
  ExactExpectations out;
  for_each_configuration(state, geom.sites, limits,
                         [&](const FockConfiguration& cfg) { accumulate(coupling, cfg, out); });
  out.noise = out.second_moment - std::norm(out.mean_d);
  return out;
}

ExactExpectations exact_expectations(std::span<const FockConfiguration> configurations,
                                     const ModeProfile& probe, const ModeProfile& cavity_mode,
                                     const LatticeGeometry& geom) {
  geom.validate();
  const auto coupling = site_couplings(probe, cavity_mode, geom);
  ExactExpectations out;
  for (const auto& cfg : configurations) {
    if (cfg.occupations.size() != coupling.size()) {
      throw DomainError("configuration size does not match the lattice");
    }
    accumulate(coupling, cfg, out);
  }
  out.noise = out.second_moment - std::norm(out.mean_d);
  return out;
}

WeightedStatistic exact_statistic_pmf(const AtomicState& state, std::span<const double> weights,
                                      const LatticeGeometry& geom, const OracleLimits& limits) {
  check_compatible(state, geom);
  if (weights.size() != static_cast<std::size_t>(geom.sites)) {
    throw DomainError("oracle pmf needs one weight per lattice site");
  }
  constexpr double kKeyScale = 1e9;
  std::map<long long, double> mass;
  for_each_configuration(state, geom.sites, limits, [&](const FockConfiguration& cfg) {
    double value = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      value += weights[i] * cfg.occupations[i];
    }
    mass[std::llround(value * kKeyScale)] += cfg.probability;
  });

  WeightedStatistic stat;
  stat.weights.assign(weights.begin(), weights.end());
  stat.resolution = 1.0 / kKeyScale;
  for (const auto& [key, p] : mass) {
    stat.support.push_back(static_cast<double>(key) / kKeyScale);
    stat.pmf.push_back(p);
  }
  return stat;
}

}  // namespace cavlat::oracle
