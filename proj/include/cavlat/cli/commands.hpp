#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cavlat/atom_stats.hpp"
#include "cavlat/cli/csv.hpp"
#include "cavlat/fock_oracle.hpp"
#include "cavlat/geometry.hpp"
#include "cavlat/observables.hpp"

namespace cavlat::cli {

enum class ExitCode : int {
  Ok = 0,
  Config = 2,
  Capacity = 3,
  Io = 4,
  OracleMismatch = 5,
};

/// Raw option values keyed by long flag name without dashes. Every
/// subcommand resolves these into a typed run description, so flags and
/// config files share one validation path.
using Options = std::map<std::string, std::string>;

struct OptionSpec {
  std::string name;
  std::string default_value;
  std::string help;
};

const std::vector<OptionSpec>& spectrum_options();
const std::vector<OptionSpec>& angular_options();
const std::vector<OptionSpec>& oracle_check_options();

/// Defaults of `specs` overlaid with `given`. Unknown keys are rejected.
Options with_defaults(const std::vector<OptionSpec>& specs, const Options& given);

enum class StatisticKind { Occupation, Parity };

struct SpectrumRun {
  AtomicState state;
  LatticeGeometry geom;
  ModeProfile cavity_mode;
  StatisticKind statistic = StatisticKind::Occupation;
  CavityParams cavity;
  std::optional<SweepAxis> axis;  // empty: derived from the pmf support
  PmfOptions pmf;
};

struct AngularRun {
  AtomicState state;
  LatticeGeometry geom;
  ModeProfile probe;
  ModeKind cavity_kind = ModeKind::Traveling;
  CavityParams cavity;
  SweepAxis axis;
};

struct OracleCheckRun {
  int atoms = 4;
  int sites = 4;
  int pairs = 50;
  std::uint64_t seed = 1;
  double tolerance = 1e-10;
  double pmf_tolerance = 1e-12;
  oracle::OracleLimits limits;
};

SpectrumRun resolve_spectrum(const Options& options);
AngularRun resolve_angular(const Options& options);
OracleCheckRun resolve_oracle_check(const Options& options);

/// Columns detuning, photon_number; metadata echoes every parameter.
DataTable run_spectrum(const SpectrumRun& run);

/// Columns theta1, classical_intensity, noise_R, photon_number.
DataTable run_angular(const AngularRun& run);

struct OracleCheck {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::size_t comparisons = 0;
  bool passed() const { return max_error <= tolerance; }
};

struct OracleReport {
  int atoms = 0;
  int sites = 0;
  std::uint64_t seed = 0;
  std::vector<OracleCheck> checks;
  std::string error;  // set when the run aborted, e.g. on capacity

  bool passed() const;
  std::string to_json() const;
};

/// Compares every closed form against Fock enumeration. Throws
/// CapacityError when the requested system is too large to enumerate.
OracleReport run_oracle_check(const OracleCheckRun& run);

/// Gnuplot script for a table produced by `spectrum` or `angular`;
/// `csv_path` is written into the script verbatim.
std::string plot_script(const DataTable& table, const std::string& csv_path);

/// Key/value pairs from a config file. Accepts `key = value` lines with `#`
/// comments, or a CSV written by this tool, in which case its metadata
/// header is used. Records the source line of each key in `origin`.
Options load_config(const std::string& path, std::map<std::string, std::string>& origin);

/// Entry point behind the `cavlat` executable.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cavlat::cli
