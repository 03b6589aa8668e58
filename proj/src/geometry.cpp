#include "cavlat/geometry.hpp"

#include <cmath>
#include <string>

#include "cavlat/error.hpp"

namespace cavlat {

namespace {

// sin(theta) evaluated on the angle folded into [-pi/2, pi/2], so that
// theta and pi - theta give the same projected wavenumber bit for bit
// whenever the fold is exact.
double folded_sine(double theta) {
  if (theta > kPi || theta <= -kPi) {
    theta = std::remainder(theta, 2.0 * kPi);
  }
  if (theta > kPi / 2) {
    theta = kPi - theta;
  } else if (theta < -kPi / 2) {
    theta = -kPi - theta;
  }
  return std::sin(theta);
}

Complex value_at(const ModeProfile& mode, double period, int m) {
  const double phase = m * period * mode.projected_wavenumber();
  if (mode.kind == ModeKind::Traveling) {
    return std::polar(1.0, phase);
  }
  return {std::cos(phase), 0.0};
}

}  // namespace

void LatticeGeometry::validate() const {
  if (sites < 1) {
    throw DomainError("lattice must have at least one site, got " + std::to_string(sites));
  }
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw DomainError("lattice period must be positive and finite");
  }
  if (illuminated < 1) {
    throw DomainError("illuminated site count must be >= 1, got " +
                      std::to_string(illuminated));
  }
  if (offset < 1) {
    throw DomainError("illuminated offset must be >= 1, got " + std::to_string(offset));
  }
  if (last_illuminated() > sites) {
    throw DomainError("illuminated block [" + std::to_string(first_illuminated()) + ", " +
                      std::to_string(last_illuminated()) + "] exceeds " +
                      std::to_string(sites) + " sites");
  }
}

std::string_view to_string(ModeKind kind) noexcept {
  return kind == ModeKind::Traveling ? "traveling" : "standing";
}

double ModeProfile::projected_wavenumber() const noexcept {
  return 2.0 * kPi * folded_sine(theta);
}

Complex mode_value(const ModeProfile& mode, const LatticeGeometry& geom, int m) {
  if (m < 1 || m > geom.sites) {
    throw DomainError("site index " + std::to_string(m) + " outside [1, " +
                      std::to_string(geom.sites) + "]");
  }
  return value_at(mode, geom.period, m);
}

GeometricSums geometric_sums(const ModeProfile& probe, const ModeProfile& cavity,
                             const LatticeGeometry& geom) {
  geom.validate();
  GeometricSums sums;
  for (int m = geom.first_illuminated(); m <= geom.last_illuminated(); ++m) {
    const Complex product = std::conj(value_at(cavity, geom.period, m)) *
                            value_at(probe, geom.period, m);
    sums.overlap += product;
    sums.overlap_sq += std::norm(product);
  }
  return sums;
}

}  // namespace cavlat
