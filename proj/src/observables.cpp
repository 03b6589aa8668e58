#include "cavlat/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cavlat/error.hpp"

namespace cavlat {

void CavityParams::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError("kappa must be positive and finite");
  }
  if (!(eta_sq >= 0.0) || !std::isfinite(eta_sq)) {
    throw DomainError("eta_sq must be non-negative");
  }
  if (!(a0_sq >= 0.0) || !std::isfinite(a0_sq)) {
    throw DomainError("a0_sq must be non-negative");
  }
  if (!std::isfinite(delta01)) {
    throw DomainError("delta01 must be finite");
  }
}

double CavityParams::scattering_constant_sq() const {
  return a0_sq / (delta01 * delta01 + kappa * kappa);
}

Complex CavityParams::scattering_constant() const {
  const Complex i{0.0, 1.0};
  return i * std::sqrt(a0_sq) / Complex{-kappa, delta01};
}

void SweepAxis::validate() const {
  if (samples < 2) {
    throw DomainError("sweep needs at least 2 samples, got " + std::to_string(samples));
  }
  if (!std::isfinite(start) || !std::isfinite(stop)) {
    throw DomainError("sweep bounds must be finite");
  }
}

double SweepAxis::at(int i) const {
  if (i == samples - 1) {
    return stop;
  }
  return start + (stop - start) * static_cast<double>(i) / static_cast<double>(samples - 1);
}

std::vector<double> SweepAxis::values() const {
  validate();
  std::vector<double> v(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    v[static_cast<std::size_t>(i)] = at(i);
  }
  return v;
}

SweepAxis default_detuning_axis(const WeightedStatistic& stat, double kappa) {
  if (stat.support.empty()) {
    throw DomainError("cannot build a detuning axis for an empty distribution");
  }
  const double step = std::min(kappa / 10.0, 0.01);
  const double start = stat.support.front() - 5.0 * kappa;
  const double stop = stat.support.back() + 5.0 * kappa;
  const int intervals = static_cast<int>(std::ceil((stop - start) / step - 1e-9));
  return {start, start + intervals * step, intervals + 1};
}

SpectrumResult transmission_spectrum(const WeightedStatistic& stat, const CavityParams& cavity,
                                     const SweepAxis& axis) {
  cavity.validate();
  SpectrumResult out;
  out.detunings = axis.values();
  out.photon_number.resize(out.detunings.size());
  const double kappa_sq = cavity.kappa * cavity.kappa;
  std::transform(out.detunings.begin(), out.detunings.end(), out.photon_number.begin(),
                 [&](double delta_p) {
                   double sum = 0.0;
                   for (std::size_t q = 0; q < stat.support.size(); ++q) {
                     const double shift = delta_p - stat.support[q];
                     sum += stat.pmf[q] / (shift * shift + kappa_sq);
                   }
                   return cavity.eta_sq * sum;
                 });
  return out;
}

SpectrumResult transmission_spectrum(const AtomicState& state, std::span<const double> weights,
                                     const CavityParams& cavity, const SweepAxis& axis,
                                     const PmfOptions& options) {
  return transmission_spectrum(statistic_pmf(state, weights, options), cavity, axis);
}

namespace {

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double noise_from(const OccupationMoments& mom, const GeometricSums& sums) {
  return mom.pair_cov * std::norm(sums.overlap) + (mom.on_site_var - mom.pair_cov) * sums.overlap_sq;
}

}  // namespace

double noise_R(const AtomicState& state, const ModeProfile& probe, const ModeProfile& cavity_mode,
               const LatticeGeometry& geom) {
  check_compatible(state, geom);
  return noise_from(moments(state), geometric_sums(probe, cavity_mode, geom));
}

ScatteredLight scattered_light(const AtomicState& state, const ModeProfile& probe,
                               const ModeProfile& cavity_mode, const LatticeGeometry& geom,
                               const CavityParams& cavity) {
  check_compatible(state, geom);
  cavity.validate();
  const OccupationMoments mom = moments(state);
  const GeometricSums sums = geometric_sums(probe, cavity_mode, geom);
  const Complex mean_d = mom.mean * sums.overlap;

  ScatteredLight out;
  out.amplitude = cavity.scattering_constant() * mean_d;
  out.classical_intensity = std::norm(mean_d);
  out.noise = noise_from(mom, sums);
  out.photon_number = cavity.scattering_constant_sq() * (out.classical_intensity + out.noise);
  return out;
}

AngularResult angular_sweep(const AtomicState& state, const ModeProfile& probe,
                            ModeKind cavity_kind, const LatticeGeometry& geom,
                            const CavityParams& cavity, const SweepAxis& axis) {
  AngularResult out;
  out.angles = axis.values();
  const std::size_t n = out.angles.size();
  out.classical_intensity.resize(n);
  out.noise_R.resize(n);
  out.photon_number.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ScatteredLight light =
        scattered_light(state, probe, ModeProfile{cavity_kind, out.angles[i]}, geom, cavity);
    out.classical_intensity[i] = light.classical_intensity;
    out.noise_R[i] = light.noise;
    out.photon_number[i] = light.photon_number;
  }
  return out;
}

double general_steady_state(const AtomicState& state, const ModeProfile& probe,
                            const ModeProfile& cavity_mode, const LatticeGeometry& geom,
                            const CavityParams& cavity, double delta_p,
                            const oracle::OracleLimits& limits) {
  check_compatible(state, geom);
  cavity.validate();
  std::vector<double> self_coupling(static_cast<std::size_t>(geom.sites), 0.0);
  std::vector<Complex> cross_coupling(static_cast<std::size_t>(geom.sites), Complex{});
  for (int m = geom.first_illuminated(); m <= geom.last_illuminated(); ++m) {
    const Complex u1 = mode_value(cavity_mode, geom, m);
    const auto i = static_cast<std::size_t>(m - 1);
    self_coupling[i] = std::norm(u1);
    cross_coupling[i] = std::conj(u1) * mode_value(probe, geom, m);
  }

  const double eta = std::sqrt(cavity.eta_sq);
  const double a0 = std::sqrt(cavity.a0_sq);
  const Complex i_unit{0.0, 1.0};
  // Compensated sums; the mixture is renormalised because the enumerated
  // probabilities only sum to one up to rounding.
  CompensatedSum photons;
  CompensatedSum mass;
  oracle::for_each_configuration(
      state, geom.sites, limits, [&](const oracle::FockConfiguration& cfg) {
        double d11 = 0.0;
        Complex d10{};
        for (std::size_t s = 0; s < cfg.occupations.size(); ++s) {
          const double n = cfg.occupations[s];
          d11 += self_coupling[s] * n;
          d10 += cross_coupling[s] * n;
        }
        const Complex a1 = (eta - i_unit * d10 * a0) / Complex{cavity.kappa, d11 - delta_p};
        photons.add(cfg.probability * std::norm(a1));
        mass.add(cfg.probability);
      });
  return photons.value() / mass.value();
}

std::vector<std::size_t> local_maxima(std::span<const double> y) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
      idx.push_back(i);
    }
  }
  return idx;
}

std::vector<std::size_t> local_minima(std::span<const double> y) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] < y[i - 1] && y[i] <= y[i + 1]) {
      idx.push_back(i);
    }
  }
  return idx;
}

}  // namespace cavlat
