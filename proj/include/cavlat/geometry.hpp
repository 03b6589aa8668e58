#pragma once

#include <complex>
#include <string_view>

namespace cavlat {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// One-dimensional lattice with sites at x_m = m * period (m = 1..sites).
/// Lengths are in units of the common optical wavelength.
/// Light illuminates the contiguous block [offset, offset + illuminated - 1].
struct LatticeGeometry {
  int sites = 30;
  double period = 0.5;
  int illuminated = 30;
  int offset = 1;

  int first_illuminated() const noexcept { return offset; }
  int last_illuminated() const noexcept { return offset + illuminated - 1; }
  bool is_illuminated(int m) const noexcept {
    return m >= first_illuminated() && m <= last_illuminated();
  }

  /// Throws DomainError unless 1 <= K, K + offset - 1 <= M and period > 0.
  void validate() const;
};

enum class ModeKind { Traveling, Standing };

std::string_view to_string(ModeKind kind) noexcept;

/// A plane or standing wave making angle `theta` (radians) with the
/// lattice normal.
struct ModeProfile {
  ModeKind kind = ModeKind::Traveling;
  double theta = 0.0;

  /// Projection of the wave vector onto the lattice axis, 2*pi*sin(theta).
  double projected_wavenumber() const noexcept;
};

/// u(r_m): exp(i m k_x d) for traveling waves, cos(m k_x d) for standing.
Complex mode_value(const ModeProfile& mode, const LatticeGeometry& geom, int m);

/// The two sums over illuminated sites that carry all angular dependence:
///   overlap     A = sum_i u1*(r_i) u0(r_i)
///   overlap_sq  B = sum_i |u1*(r_i) u0(r_i)|^2
struct GeometricSums {
  Complex overlap;
  double overlap_sq = 0.0;
};

GeometricSums geometric_sums(const ModeProfile& probe, const ModeProfile& cavity,
                             const LatticeGeometry& geom);

}  // namespace cavlat
