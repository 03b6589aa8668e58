#include "cavlat/atom_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cavlat/error.hpp"

namespace cavlat {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Maps real values onto integer bin keys and back. When 1/resolution is an
// integer the inverse mapping is exact for integer-valued weights.
class ValueGrid {
 public:
  explicit ValueGrid(double resolution) {
    if (!(resolution > 0.0) || !std::isfinite(resolution)) {
      throw DomainError("pmf resolution must be positive and finite");
    }
    scale_ = 1.0 / resolution;
    const double rounded = std::round(scale_);
    if (std::abs(scale_ - rounded) <= 1e-9 * scale_) {
      scale_ = rounded;
    }
  }

  std::int64_t key(double value) const {
    const double scaled = value * scale_;
    if (std::abs(scaled) > 1e15) {
      throw DomainError("weight too large for the configured pmf resolution");
    }
    return std::llround(scaled);
  }

  double value(std::int64_t key) const { return static_cast<double>(key) / scale_; }

 private:
  double scale_ = 1.0;
};

// Distribution over keys lo + stride * i, stored densely.
struct DenseKeyedPmf {
  std::int64_t lo = 0;
  std::int64_t stride = 1;
  std::vector<double> p;
};

// A distribution on a handful of points, in units of the common stride.
struct SparseTerm {
  std::int64_t unit;
  double probability;
};

void check_capacity(std::int64_t span_units, const PmfOptions& options) {
  const auto bins = static_cast<double>(span_units) + 1.0;
  if (bins > static_cast<double>(options.max_support)) {
    std::ostringstream msg;
    msg << "pmf support of " << bins << " bins exceeds capacity " << options.max_support;
    throw CapacityError(msg.str(), bins, static_cast<double>(options.max_support));
  }
}

std::int64_t gcd_of(std::span<const std::int64_t> keys) {
  std::int64_t g = 0;
  for (const auto k : keys) {
    g = std::gcd(g, k < 0 ? -k : k);
  }
  return g == 0 ? 1 : g;
}

// out = in (*) term, where `in` starts at unit offset 0 and `term` units are
// relative. Each output bin accumulates contributions in term order.
std::vector<double> convolve(const std::vector<double>& in, std::int64_t in_lo,
                             std::span<const SparseTerm> term, std::int64_t out_lo,
                             std::size_t out_size) {
  std::vector<double> out(out_size, 0.0);
  for (const auto& t : term) {
    const auto shift = static_cast<std::size_t>(in_lo + t.unit - out_lo);
    for (std::size_t i = 0; i < in.size(); ++i) {
      out[i + shift] += in[i] * t.probability;
    }
  }
  return out;
}

WeightedStatistic finish(const ValueGrid& grid, const DenseKeyedPmf& dense,
                         std::span<const double> weights, double resolution,
                         double truncated_mass) {
  WeightedStatistic stat;
  stat.weights.assign(weights.begin(), weights.end());
  stat.resolution = resolution;
  stat.truncated_mass = truncated_mass;
  for (std::size_t i = 0; i < dense.p.size(); ++i) {
    if (dense.p[i] > 0.0) {
      stat.support.push_back(
          grid.value(dense.lo + dense.stride * static_cast<std::int64_t>(i)));
      stat.pmf.push_back(dense.p[i]);
    }
  }
  return stat;
}

DenseKeyedPmf point_mass(std::int64_t key) { return {key, 1, {1.0}}; }

DenseKeyedPmf superfluid_pmf(const Superfluid& sf, std::span<const std::int64_t> keys,
                             const PmfOptions& options) {
  if (sf.atoms == 0) {
    return point_mass(0);
  }
  const std::int64_t stride = gcd_of(keys);

  // Single-atom distribution: value w_m with probability 1/M per site.
  std::vector<SparseTerm> atom;
  const double per_site = 1.0 / static_cast<double>(sf.sites);
  for (const auto k : keys) {
    const std::int64_t unit = k / stride;
    auto it = std::find_if(atom.begin(), atom.end(),
                           [unit](const SparseTerm& t) { return t.unit == unit; });
    if (it == atom.end()) {
      atom.push_back({unit, per_site});
    } else {
      it->probability += per_site;
    }
  }
  std::sort(atom.begin(), atom.end(),
            [](const SparseTerm& a, const SparseTerm& b) { return a.unit < b.unit; });
  const std::int64_t atom_lo = atom.front().unit;
  const std::int64_t atom_hi = atom.back().unit;
  check_capacity((atom_hi - atom_lo) * sf.atoms, options);

  std::vector<double> current{1.0};
  std::int64_t lo = 0;
  for (int n = 0; n < sf.atoms; ++n) {
    const std::int64_t out_lo = lo + atom_lo;
    const auto out_size = current.size() + static_cast<std::size_t>(atom_hi - atom_lo);
    current = convolve(current, lo, atom, out_lo, out_size);
    lo = out_lo;
  }
  return {lo * stride, stride, std::move(current)};
}

// Poisson(mean) on 0..cutoff, renormalised; returns the tail bound through
// `tail`. The cutoff is the first k with p_{k+1} / (1 - mean/(k+2)) <= budget,
// an upper bound on the discarded mass since p_{j+1}/p_j = mean/(j+1).
std::vector<double> truncated_poisson(double mean, double budget, double& tail) {
  const double log_mean = std::log(mean);
  auto log_p = [&](int k) { return -mean + k * log_mean - std::lgamma(k + 1.0); };
  std::vector<double> p;
  for (int k = 0;; ++k) {
    p.push_back(std::exp(log_p(k)));
    if (k + 2 > mean) {
      const double bound = std::exp(log_p(k + 1)) / (1.0 - mean / (k + 2));
      if (bound <= budget) {
        tail = bound;
        break;
      }
    }
  }
  const double kept = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) {
    x /= kept;
  }
  return p;
}

DenseKeyedPmf coherent_pmf(const Coherent& coh, std::span<const std::int64_t> keys,
                           const PmfOptions& options, double& truncated_mass) {
  truncated_mass = 0.0;
  const auto active = std::count_if(keys.begin(), keys.end(), [](auto k) { return k != 0; });
  if (active == 0) {
    return point_mass(0);
  }
  if (!(options.coherent_tail > 0.0)) {
    throw DomainError("coherent tail tolerance must be positive");
  }
  const double budget = options.coherent_tail / static_cast<double>(active);
  const std::int64_t stride = gcd_of(keys);

  double tail = 0.0;
  const std::vector<double> site = truncated_poisson(coh.mean_per_site, budget, tail);
  const auto cutoff = static_cast<std::int64_t>(site.size()) - 1;

  std::int64_t total_lo = 0;
  std::int64_t total_hi = 0;
  for (const auto k : keys) {
    const std::int64_t unit = k / stride;
    (unit < 0 ? total_lo : total_hi) += unit * cutoff;
  }
  check_capacity(total_hi - total_lo, options);

  std::vector<double> current{1.0};
  std::int64_t lo = 0;
  std::vector<SparseTerm> term(site.size());
  for (const auto k : keys) {
    if (k == 0) {
      continue;
    }
    const std::int64_t unit = k / stride;
    for (std::size_t j = 0; j < site.size(); ++j) {
      term[j] = {unit * static_cast<std::int64_t>(j), site[j]};
    }
    const std::int64_t out_lo = lo + std::min<std::int64_t>(0, unit * cutoff);
    const auto out_size = current.size() + static_cast<std::size_t>(std::abs(unit) * cutoff);
    current = convolve(current, lo, term, out_lo, out_size);
    lo = out_lo;
    truncated_mass += tail;
  }
  return {lo * stride, stride, std::move(current)};
}

}  // namespace

void validate(const AtomicState& state) {
  std::visit(Overloaded{
                 [](const MottInsulator& mi) {
                   if (mi.per_site < 1) {
                     throw DomainError("Mott insulator needs at least one atom per site");
                   }
                 },
                 [](const Superfluid& sf) {
                   if (sf.atoms < 0) {
                     throw DomainError("superfluid atom number must be non-negative");
                   }
                   if (sf.sites < 1) {
                     throw DomainError("superfluid needs at least one site");
                   }
                 },
                 [](const Coherent& coh) {
                   if (!(coh.mean_per_site > 0.0) || !std::isfinite(coh.mean_per_site)) {
                     throw DomainError("coherent state mean density must be positive");
                   }
                 },
             },
             state);
}

void check_compatible(const AtomicState& state, const LatticeGeometry& geom) {
  validate(state);
  geom.validate();
  if (const auto* sf = std::get_if<Superfluid>(&state); sf && sf->sites != geom.sites) {
    throw DomainError("superfluid spans " + std::to_string(sf->sites) +
                      " sites but the lattice has " + std::to_string(geom.sites));
  }
}

double mean_density(const AtomicState& state) { return moments(state).mean; }

std::string describe(const AtomicState& state) {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const MottInsulator& mi) { out << "mi:" << mi.per_site; },
                 [&](const Superfluid& sf) { out << "sf:" << sf.atoms; },
                 [&](const Coherent& coh) { out << "coherent:" << coh.mean_per_site; },
             },
             state);
  return out.str();
}

OccupationMoments moments(const AtomicState& state) {
  validate(state);
  return std::visit(
      Overloaded{
          [](const MottInsulator& mi) {
            return OccupationMoments{static_cast<double>(mi.per_site), 0.0, 0.0};
          },
          [](const Superfluid& sf) {
            const double atoms = sf.atoms;
            const double sites = sf.sites;
            const double n = atoms / sites;
            return OccupationMoments{n, n * (1.0 - 1.0 / sites), -atoms / (sites * sites)};
          },
          [](const Coherent& coh) {
            return OccupationMoments{coh.mean_per_site, coh.mean_per_site, 0.0};
          },
      },
      state);
}

double WeightedStatistic::total_mass() const {
  return std::accumulate(pmf.begin(), pmf.end(), 0.0);
}

double WeightedStatistic::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    m += pmf[i] * support[i];
  }
  return m;
}

double WeightedStatistic::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    const double d = support[i] - m;
    v += pmf[i] * d * d;
  }
  return v;
}

double WeightedStatistic::probability_at(double value) const {
  const double tol = resolution > 0.0 ? resolution / 2 : 0.0;
  auto it = std::lower_bound(support.begin(), support.end(), value - tol);
  if (it != support.end() && *it <= value + tol) {
    return pmf[static_cast<std::size_t>(it - support.begin())];
  }
  return 0.0;
}

WeightedStatistic statistic_pmf(const AtomicState& state, std::span<const double> weights,
                                const PmfOptions& options) {
  validate(state);
  if (weights.empty()) {
    throw DomainError("weight vector must cover at least one site");
  }
  for (const double w : weights) {
    if (!std::isfinite(w)) {
      throw DomainError("weights must be finite");
    }
  }
  const ValueGrid grid(options.resolution);
  std::vector<std::int64_t> keys(weights.size());
  std::transform(weights.begin(), weights.end(), keys.begin(),
                 [&](double w) { return grid.key(w); });

  double truncated_mass = 0.0;
  const DenseKeyedPmf dense = std::visit(
      Overloaded{
          [&](const MottInsulator& mi) {
            const std::int64_t sum = std::accumulate(keys.begin(), keys.end(), std::int64_t{0});
            return point_mass(sum * mi.per_site);
          },
          [&](const Superfluid& sf) {
            if (static_cast<std::size_t>(sf.sites) != keys.size()) {
              throw DomainError("superfluid over " + std::to_string(sf.sites) +
                                " sites needs one weight per site, got " +
                                std::to_string(keys.size()));
            }
            return superfluid_pmf(sf, keys, options);
          },
          [&](const Coherent& coh) { return coherent_pmf(coh, keys, options, truncated_mass); },
      },
      state);
  return finish(grid, dense, weights, options.resolution, truncated_mass);
}

std::vector<double> illuminated_weights(const LatticeGeometry& geom, double value) {
  geom.validate();
  std::vector<double> w(static_cast<std::size_t>(geom.sites), 0.0);
  for (int m = geom.first_illuminated(); m <= geom.last_illuminated(); ++m) {
    w[static_cast<std::size_t>(m - 1)] = value;
  }
  return w;
}

std::vector<double> parity_weights(const LatticeGeometry& geom) {
  geom.validate();
  std::vector<double> w(static_cast<std::size_t>(geom.sites), 0.0);
  for (int m = geom.first_illuminated(); m <= geom.last_illuminated(); ++m) {
    w[static_cast<std::size_t>(m - 1)] = (m % 2 == 0) ? 1.0 : -1.0;
  }
  return w;
}

std::vector<double> cavity_weights(const ModeProfile& cavity, const LatticeGeometry& geom) {
  geom.validate();
  std::vector<double> w(static_cast<std::size_t>(geom.sites), 0.0);
  for (int m = geom.first_illuminated(); m <= geom.last_illuminated(); ++m) {
    w[static_cast<std::size_t>(m - 1)] = std::norm(mode_value(cavity, geom, m));
  }
  return w;
}

WeightedStatistic parity_statistic(const AtomicState& state, const LatticeGeometry& geom,
                                   const PmfOptions& options) {
  return statistic_pmf(state, parity_weights(geom), options);
}

}  // namespace cavlat
