#pragma once

#include <span>
#include <vector>

#include "cavlat/atom_stats.hpp"
#include "cavlat/fock_oracle.hpp"
#include "cavlat/geometry.hpp"

namespace cavlat {

/// Cavity and drive parameters. All frequencies are in units of the
/// single-atom dispersive shift g^2 / Delta_1a, which is therefore 1.
struct CavityParams {
  double kappa = 0.1;
  double eta_sq = 1.0;   // |eta|^2, drive through the cavity mirror
  double a0_sq = 1.0;    // |a0|^2, transverse probe
  double delta01 = 0.0;  // probe-cavity detuning for the scattering constant

  void validate() const;

  /// |C|^2 = |a0|^2 / (delta01^2 + kappa^2).
  double scattering_constant_sq() const;
  /// C = i a0 / (i delta01 - kappa), with a0 taken real and positive.
  Complex scattering_constant() const;
};

/// Evenly spaced samples start + (stop - start) * i / (samples - 1).
struct SweepAxis {
  double start = 0.0;
  double stop = 1.0;
  int samples = 2;

  void validate() const;
  double at(int i) const;
  std::vector<double> values() const;
};

/// Span [min support - 5 kappa, max support + 5 kappa] with step
/// min(kappa / 10, 0.01).
SweepAxis default_detuning_axis(const WeightedStatistic& stat, double kappa);

struct SpectrumResult {
  std::vector<double> detunings;
  std::vector<double> photon_number;
};

/// Transmitted photon number <a1+ a1> = sum_q P(W=q) eta^2 / ((Delta_p - q)^2 + kappa^2)
/// at each detuning on the axis.
SpectrumResult transmission_spectrum(const WeightedStatistic& stat, const CavityParams& cavity,
                                     const SweepAxis& axis);

SpectrumResult transmission_spectrum(const AtomicState& state, std::span<const double> weights,
                                     const CavityParams& cavity, const SweepAxis& axis,
                                     const PmfOptions& options = {});

/// R = <D10* D10> - |<D10>|^2 from the site-uniform occupation moments.
double noise_R(const AtomicState& state, const ModeProfile& probe, const ModeProfile& cavity_mode,
               const LatticeGeometry& geom);

/// Light scattered from the probe into the cavity with the dispersive shift
/// neglected: a1 = C D10.
struct ScatteredLight {
  Complex amplitude;                 // C <D10> = C n A
  double classical_intensity = 0.0;  // |<D10>|^2
  double noise = 0.0;                // R
  double photon_number = 0.0;        // |C|^2 (classical_intensity + R)
};

ScatteredLight scattered_light(const AtomicState& state, const ModeProfile& probe,
                               const ModeProfile& cavity_mode, const LatticeGeometry& geom,
                               const CavityParams& cavity);

struct AngularResult {
  std::vector<double> angles;  // cavity angle theta_1
  std::vector<double> classical_intensity;
  std::vector<double> noise_R;
  std::vector<double> photon_number;
};

/// Sweeps the cavity angle with the probe fixed.
AngularResult angular_sweep(const AtomicState& state, const ModeProfile& probe,
                            ModeKind cavity_kind, const LatticeGeometry& geom,
                            const CavityParams& cavity, const SweepAxis& axis);

/// Steady-state cavity photon number with both the mirror drive and the
/// scattered probe present and the dispersive shift kept. D11 and D10 are
/// diagonal in the Fock basis, so the result is an exact mixture over the
/// enumerated configurations:
///   a1(cfg) = (eta - i d10 a0) / (kappa + i (d11 - Delta_p)).
/// eta and a0 are taken real and positive.
double general_steady_state(const AtomicState& state, const ModeProfile& probe,
                            const ModeProfile& cavity_mode, const LatticeGeometry& geom,
                            const CavityParams& cavity, double delta_p,
                            const oracle::OracleLimits& limits = {});

/// Indices i with y[i-1] < y[i] >= y[i+1]; endpoints never qualify.
std::vector<std::size_t> local_maxima(std::span<const double> y);

/// Same, for local minima.
std::vector<std::size_t> local_minima(std::span<const double> y);

}  // namespace cavlat
