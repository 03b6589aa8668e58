#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "cavlat/atom_stats.hpp"
#include "cavlat/geometry.hpp"
#include "cavlat/observables.hpp"

namespace cavlat::cli {

/// Invalid user input. `field` names the flag or config key at fault.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Failure to read or write a file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strict full-string number parse; throws ConfigError naming `field`.
double parse_number(std::string_view text, std::string_view field);
int parse_int(std::string_view text, std::string_view field);

/// Radians (`1.5708`) or multiples of pi (`0.1pi`, `-pi`, `0.5*pi`).
double parse_angle(std::string_view text, std::string_view field);

/// `start:stop:samples`; start and stop use the angle grammar.
SweepAxis parse_axis(std::string_view text, std::string_view field);

/// `mi:<n>`, `sf:<N>` or `coherent:<n>`. A superfluid spans `sites` sites.
AtomicState parse_state(std::string_view text, int sites, std::string_view field);

/// `traveling[:angle]` or `standing[:angle]`, angle defaulting to 0.
ModeProfile parse_mode(std::string_view text, std::string_view field);

/// Inverse of parse_mode, using the shortest round-trip angle.
std::string format_mode(const ModeProfile& mode);

std::string format_axis(const SweepAxis& axis);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace cavlat::cli
