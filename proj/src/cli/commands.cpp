#include "cavlat/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavlat/cli/grammar.hpp"
#include "cavlat/error.hpp"

namespace cavlat::cli {

namespace {

constexpr const char* kToolName = "cavlat";

const std::string& value_of(const Options& options, const std::string& key) {
  const auto it = options.find(key);
  if (it == options.end()) {
    throw ConfigError("--" + key, "missing value");
  }
  return it->second;
}

double number(const Options& o, const std::string& key) {
  return parse_number(value_of(o, key), "--" + key);
}

int integer(const Options& o, const std::string& key) {
  return parse_int(value_of(o, key), "--" + key);
}

double positive(const Options& o, const std::string& key) {
  const double v = number(o, key);
  if (!(v > 0.0)) {
    throw ConfigError("--" + key, "must be positive, got '" + value_of(o, key) + "'");
  }
  return v;
}

double non_negative(const Options& o, const std::string& key) {
  const double v = number(o, key);
  if (!(v >= 0.0)) {
    throw ConfigError("--" + key, "must be non-negative, got '" + value_of(o, key) + "'");
  }
  return v;
}

LatticeGeometry resolve_geometry(const Options& o) {
  LatticeGeometry geom;
  geom.sites = integer(o, "sites");
  if (geom.sites < 1) {
    throw ConfigError("--sites", "must be >= 1");
  }
  geom.period = positive(o, "period");
  geom.offset = integer(o, "offset");
  if (geom.offset < 1 || geom.offset > geom.sites) {
    throw ConfigError("--offset", "must lie in [1, " + std::to_string(geom.sites) + "]");
  }
  geom.illuminated = integer(o, "illuminated");
  const int room = geom.sites - geom.offset + 1;
  if (geom.illuminated < 1 || geom.illuminated > room) {
    throw ConfigError("--illuminated", "must lie in [1, " + std::to_string(room) +
                                           "] for " + std::to_string(geom.sites) +
                                           " sites starting at offset " +
                                           std::to_string(geom.offset));
  }
  geom.validate();
  return geom;
}

CavityParams resolve_cavity(const Options& o, bool with_drive) {
  CavityParams cavity;
  cavity.kappa = positive(o, "kappa");
  if (with_drive) {
    cavity.eta_sq = non_negative(o, "eta-sq");
  }
  cavity.a0_sq = non_negative(o, "a0-sq");
  cavity.delta01 = number(o, "delta01");
  return cavity;
}

std::string state_spec(const AtomicState& state) {
  if (const auto* mi = std::get_if<MottInsulator>(&state)) {
    return "mi:" + std::to_string(mi->per_site);
  }
  if (const auto* sf = std::get_if<Superfluid>(&state)) {
    return "sf:" + std::to_string(sf->atoms);
  }
  return "coherent:" + format_double(std::get<Coherent>(state).mean_per_site);
}

void add_geometry_metadata(DataTable& table, const LatticeGeometry& geom) {
  table.metadata.emplace_back("sites", std::to_string(geom.sites));
  table.metadata.emplace_back("illuminated", std::to_string(geom.illuminated));
  table.metadata.emplace_back("offset", std::to_string(geom.offset));
  table.metadata.emplace_back("period", format_double(geom.period));
}

std::string tool_id() { return std::string(kToolName) + " " + CAVLAT_VERSION; }

// Uniform angle in [0, pi] from the top 53 bits, identical on every platform.
double random_angle(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53 * kPi;
}

double total_variation(const WeightedStatistic& a, const WeightedStatistic& b) {
  constexpr double kSame = 1e-7;
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.support.size() || j < b.support.size()) {
    if (j == b.support.size() ||
        (i < a.support.size() && a.support[i] < b.support[j] - kSame)) {
      sum += a.pmf[i++];
    } else if (i == a.support.size() || b.support[j] < a.support[i] - kSame) {
      sum += b.pmf[j++];
    } else {
      sum += std::abs(a.pmf[i++] - b.pmf[j++]);
    }
  }
  return 0.5 * sum;
}

class CheckSet {
 public:
  void record(const std::string& name, double error, double tolerance) {
    auto it = std::find_if(checks_.begin(), checks_.end(),
                           [&](const OracleCheck& c) { return c.name == name; });
    if (it == checks_.end()) {
      checks_.push_back({name, 0.0, tolerance, 0});
      it = std::prev(checks_.end());
    }
    // NaN must fail the check, so compare with !(<=).
    if (!(error <= it->max_error)) {
      it->max_error = std::isnan(error) ? std::numeric_limits<double>::infinity() : error;
    }
    ++it->comparisons;
  }
  std::vector<OracleCheck> take() { return std::move(checks_); }

 private:
  std::vector<OracleCheck> checks_;
};

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  file << content;
  if (!file) {
    throw IoError("failed writing '" + path + "'");
  }
}

std::string render(const DataTable& table, const std::string& format) {
  std::ostringstream buf;
  if (format == "json") {
    write_json(buf, table);
  } else {
    write_csv(buf, table);
  }
  return buf.str();
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

const std::vector<OptionSpec>& spectrum_options() {
  static const std::vector<OptionSpec> specs{
      {"state", "sf:30", "atomic state: mi:<n>, sf:<N> or coherent:<n>"},
      {"sites", "30", "lattice sites M"},
      {"illuminated", "15", "illuminated sites K"},
      {"offset", "1", "index of the first illuminated site"},
      {"period", "0.5", "lattice period in wavelengths"},
      {"cavity", "traveling", "cavity mode: traveling or standing[:angle]"},
      {"statistic", "occupation", "occupation (D11) or parity ((-1)^m weights)"},
      {"kappa", "0.1", "cavity decay rate, in single-atom shifts"},
      {"eta-sq", "1", "mirror drive strength |eta|^2"},
      {"a0-sq", "1", "probe strength |a0|^2"},
      {"delta01", "0", "probe-cavity detuning for the scattering constant"},
      {"axis", "auto", "detuning sweep start:stop:samples, or auto"},
      {"resolution", "0.0001", "pmf value bin width"},
      {"coherent-tail", "1e-10", "total Poisson tail mass that may be discarded"},
      {"max-support", "10000000", "largest pmf support, in bins"},
  };
  return specs;
}

const std::vector<OptionSpec>& angular_options() {
  static const std::vector<OptionSpec> specs{
      {"state", "sf:30", "atomic state: mi:<n>, sf:<N> or coherent:<n>"},
      {"sites", "30", "lattice sites M"},
      {"illuminated", "30", "illuminated sites K"},
      {"offset", "1", "index of the first illuminated site"},
      {"period", "0.5", "lattice period in wavelengths"},
      {"probe", "traveling:0", "probe mode: traveling|standing[:angle]"},
      {"cavity", "traveling", "cavity mode kind; its angle is swept"},
      {"kappa", "0.1", "cavity decay rate, in single-atom shifts"},
      {"a0-sq", "1", "probe strength |a0|^2"},
      {"delta01", "0", "probe-cavity detuning"},
      {"axis", "0:pi:1001", "cavity angle sweep start:stop:samples"},
  };
  return specs;
}

const std::vector<OptionSpec>& oracle_check_options() {
  static const std::vector<OptionSpec> specs{
      {"atoms", "4", "atom number N"},
      {"sites", "4", "lattice sites M"},
      {"pairs", "50", "random angle pairs per mode combination and K"},
      {"seed", "1", "seed for the angle generator"},
      {"tolerance", "1e-10", "absolute tolerance for observables"},
      {"pmf-tolerance", "1e-12", "total-variation tolerance for pmfs"},
      {"max-configs", "10000000", "largest Fock enumeration"},
      {"coherent-tail", "1e-15", "Poisson tail mass discarded per site"},
  };
  return specs;
}

Options with_defaults(const std::vector<OptionSpec>& specs, const Options& given) {
  Options out;
  for (const auto& spec : specs) {
    out[spec.name] = spec.default_value;
  }
  for (const auto& [key, value] : given) {
    if (!out.contains(key)) {
      throw ConfigError(key, "unknown option");
    }
    out[key] = value;
  }
  return out;
}

SpectrumRun resolve_spectrum(const Options& o) {
  SpectrumRun run;
  run.geom = resolve_geometry(o);
  run.state = parse_state(value_of(o, "state"), run.geom.sites, "--state");
  run.cavity_mode = parse_mode(value_of(o, "cavity"), "--cavity");
  const auto& statistic = value_of(o, "statistic");
  if (statistic == "occupation") {
    run.statistic = StatisticKind::Occupation;
  } else if (statistic == "parity") {
    run.statistic = StatisticKind::Parity;
  } else {
    throw ConfigError("--statistic", "expected occupation or parity, got '" + statistic + "'");
  }
  run.cavity = resolve_cavity(o, true);
  if (value_of(o, "axis") != "auto") {
    run.axis = parse_axis(value_of(o, "axis"), "--axis");
  }
  run.pmf.resolution = positive(o, "resolution");
  run.pmf.coherent_tail = positive(o, "coherent-tail");
  const double cap = positive(o, "max-support");
  if (cap != std::floor(cap) || cap > 9e15) {
    throw ConfigError("--max-support", "must be a positive integer");
  }
  run.pmf.max_support = static_cast<std::int64_t>(cap);
  return run;
}

AngularRun resolve_angular(const Options& o) {
  AngularRun run;
  run.geom = resolve_geometry(o);
  run.state = parse_state(value_of(o, "state"), run.geom.sites, "--state");
  run.probe = parse_mode(value_of(o, "probe"), "--probe");
  run.cavity_kind = parse_mode(value_of(o, "cavity"), "--cavity").kind;
  run.cavity = resolve_cavity(o, false);
  run.axis = parse_axis(value_of(o, "axis"), "--axis");
  return run;
}

OracleCheckRun resolve_oracle_check(const Options& o) {
  OracleCheckRun run;
  run.atoms = integer(o, "atoms");
  if (run.atoms < 0) {
    throw ConfigError("--atoms", "must be non-negative");
  }
  run.sites = integer(o, "sites");
  if (run.sites < 1) {
    throw ConfigError("--sites", "must be >= 1");
  }
  run.pairs = integer(o, "pairs");
  if (run.pairs < 1) {
    throw ConfigError("--pairs", "must be >= 1");
  }
  const double seed = non_negative(o, "seed");
  if (seed != std::floor(seed) || seed > 9e15) {
    throw ConfigError("--seed", "must be a non-negative integer");
  }
  run.seed = static_cast<std::uint64_t>(seed);
  run.tolerance = non_negative(o, "tolerance");
  run.pmf_tolerance = non_negative(o, "pmf-tolerance");
  run.limits.max_configurations = positive(o, "max-configs");
  run.limits.coherent_tail = positive(o, "coherent-tail");
  return run;
}

DataTable run_spectrum(const SpectrumRun& run) {
  const std::vector<double> weights = run.statistic == StatisticKind::Parity
                                          ? parity_weights(run.geom)
                                          : cavity_weights(run.cavity_mode, run.geom);
  const WeightedStatistic stat = statistic_pmf(run.state, weights, run.pmf);
  const SweepAxis axis = run.axis ? *run.axis : default_detuning_axis(stat, run.cavity.kappa);
  const SpectrumResult spectrum = transmission_spectrum(stat, run.cavity, axis);

  DataTable table;
  table.metadata.emplace_back("tool", tool_id());
  table.metadata.emplace_back("command", "spectrum");
  table.metadata.emplace_back("state", state_spec(run.state));
  add_geometry_metadata(table, run.geom);
  table.metadata.emplace_back("cavity", format_mode(run.cavity_mode));
  table.metadata.emplace_back(
      "statistic", run.statistic == StatisticKind::Parity ? "parity" : "occupation");
  table.metadata.emplace_back("kappa", format_double(run.cavity.kappa));
  table.metadata.emplace_back("eta-sq", format_double(run.cavity.eta_sq));
  table.metadata.emplace_back("a0-sq", format_double(run.cavity.a0_sq));
  table.metadata.emplace_back("delta01", format_double(run.cavity.delta01));
  table.metadata.emplace_back("axis", format_axis(axis));
  table.metadata.emplace_back("resolution", format_double(run.pmf.resolution));
  table.metadata.emplace_back("coherent-tail", format_double(run.pmf.coherent_tail));
  table.metadata.emplace_back("max-support", std::to_string(run.pmf.max_support));
  table.metadata.emplace_back("info.pmf-support", std::to_string(stat.support.size()));
  table.metadata.emplace_back("info.pmf-mean", format_double(stat.mean()));
  table.metadata.emplace_back("info.pmf-variance", format_double(stat.variance()));
  table.metadata.emplace_back("info.truncated-mass", format_double(stat.truncated_mass));
  table.add_column("detuning", spectrum.detunings);
  table.add_column("photon_number", spectrum.photon_number);
  return table;
}

DataTable run_angular(const AngularRun& run) {
  const AngularResult result =
      angular_sweep(run.state, run.probe, run.cavity_kind, run.geom, run.cavity, run.axis);

  DataTable table;
  table.metadata.emplace_back("tool", tool_id());
  table.metadata.emplace_back("command", "angular");
  table.metadata.emplace_back("state", state_spec(run.state));
  add_geometry_metadata(table, run.geom);
  table.metadata.emplace_back("probe", format_mode(run.probe));
  table.metadata.emplace_back("cavity", std::string(to_string(run.cavity_kind)));
  table.metadata.emplace_back("kappa", format_double(run.cavity.kappa));
  table.metadata.emplace_back("a0-sq", format_double(run.cavity.a0_sq));
  table.metadata.emplace_back("delta01", format_double(run.cavity.delta01));
  table.metadata.emplace_back("axis", format_axis(run.axis));
  table.add_column("theta1", result.angles);
  table.add_column("classical_intensity", result.classical_intensity);
  table.add_column("noise_R", result.noise_R);
  table.add_column("photon_number", result.photon_number);
  return table;
}

bool OracleReport::passed() const {
  return error.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed(); });
}

std::string OracleReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["tool"] = tool_id();
  doc["atoms"] = atoms;
  doc["sites"] = sites;
  doc["seed"] = seed;
  doc["passed"] = passed();
  double worst = 0.0;
  auto items = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    worst = std::max(worst, c.max_error);
    items.push_back({{"name", c.name},
                     {"max_error", c.max_error},
                     {"tolerance", c.tolerance},
                     {"comparisons", c.comparisons},
                     {"passed", c.passed()}});
  }
  doc["max_error"] = worst;
  if (!error.empty()) {
    doc["error"] = error;
  }
  doc["checks"] = std::move(items);
  return doc.dump(1) + "\n";
}

OracleReport run_oracle_check(const OracleCheckRun& run) {
  OracleReport report;
  report.atoms = run.atoms;
  report.sites = run.sites;
  report.seed = run.seed;

  const int m = run.sites;
  const double density = static_cast<double>(run.atoms) / m;
  std::vector<AtomicState> states;
  if (run.atoms % m == 0 && run.atoms / m >= 1) {
    states.emplace_back(MottInsulator{run.atoms / m});
  }
  states.emplace_back(Superfluid{run.atoms, m});
  if (density > 0.0) {
    states.emplace_back(Coherent{density});
  }
  for (const auto& state : states) {
    const double count = oracle::configuration_count(state, m, run.limits);
    if (count > run.limits.max_configurations) {
      std::ostringstream msg;
      msg << "oracle for " << state_spec(state) << " on " << m << " sites needs " << count
          << " configurations, limit is " << run.limits.max_configurations;
      throw CapacityError(msg.str(), count, run.limits.max_configurations);
    }
  }

  PmfOptions pmf_options;
  pmf_options.coherent_tail = run.limits.coherent_tail;
  // |C|^2 multiplies both sides; kappa = 1 makes it 1 so the tolerance
  // applies to <D* D> directly.
  CavityParams cavity;
  cavity.kappa = 1.0;
  const double c_sq = cavity.scattering_constant_sq();
  constexpr ModeKind kinds[] = {ModeKind::Traveling, ModeKind::Standing};

  CheckSet checks;
  std::mt19937_64 rng(run.seed);
  for (const auto& state : states) {
    const std::string label = state_spec(state);
    const auto configurations = oracle::enumerate(state, m, run.limits);
    const double n = mean_density(state);

    for (int k = 1; k <= m; ++k) {
      const LatticeGeometry geom{m, 0.5, k, 1};
      for (const ModeKind probe_kind : kinds) {
        for (const ModeKind cavity_kind : kinds) {
          for (int p = 0; p < run.pairs; ++p) {
            const ModeProfile probe{probe_kind, random_angle(rng)};
            const ModeProfile cavity_mode{cavity_kind, random_angle(rng)};
            const auto exact = oracle::exact_expectations(configurations, probe, cavity_mode, geom);
            const auto light = scattered_light(state, probe, cavity_mode, geom, cavity);
            const Complex mean_d = n * geometric_sums(probe, cavity_mode, geom).overlap;
            checks.record("noise_R/" + label, std::abs(light.noise - exact.noise), run.tolerance);
            checks.record("mean_D/" + label, std::abs(mean_d - exact.mean_d), run.tolerance);
            checks.record("photon_number/" + label,
                          std::abs(light.photon_number - c_sq * exact.second_moment),
                          run.tolerance);
          }
        }
      }

      const std::vector<std::pair<std::string, std::vector<double>>> weight_sets{
          {"unit", illuminated_weights(geom)}, {"parity", parity_weights(geom)}};
      for (const auto& [name, weights] : weight_sets) {
        const auto closed = statistic_pmf(state, weights, pmf_options);
        const auto exact = oracle::exact_statistic_pmf(state, weights, geom, run.limits);
        checks.record("pmf_tv/" + name + "/" + label, total_variation(closed, exact),
                      run.pmf_tolerance);
      }

      // Mirror drive only: the Fock mixture must reproduce the transmission spectrum.
      CavityParams drive_only = cavity;
      drive_only.a0_sq = 0.0;
      const ModeProfile traveling{ModeKind::Traveling, 0.0};
      const auto stat = statistic_pmf(state, cavity_weights(traveling, geom), pmf_options);
      const SweepAxis axis{-1.0, m * std::max(1.0, n) + 1.0, 9};
      const auto spectrum = transmission_spectrum(stat, drive_only, axis);
      for (int i = 0; i < axis.samples; ++i) {
        const double steady = general_steady_state(state, traveling, traveling, geom, drive_only,
                                                   axis.at(i), run.limits);
        checks.record("steady_state/" + label,
                      std::abs(steady - spectrum.photon_number[static_cast<std::size_t>(i)]),
                      run.tolerance);
      }
    }
  }
  report.checks = checks.take();
  return report;
}

std::string plot_script(const DataTable& table, const std::string& csv_path) {
  const bool is_spectrum = std::find(table.columns.begin(), table.columns.end(), "detuning") !=
                           table.columns.end();
  const bool is_angular = std::find(table.columns.begin(), table.columns.end(), "theta1") !=
                          table.columns.end();
  std::ostringstream s;
  s << "# gnuplot script generated by " << tool_id() << "\n"
    << "# run from the directory containing this script\n"
    << "set datafile separator ','\n"
    << "set datafile commentschars '#'\n"
    << "data = '" << csv_path << "'\n";
  if (is_spectrum) {
    table.column_index("photon_number");
    s << "set xlabel 'probe-cavity detuning (single-atom shifts)'\n"
      << "set ylabel 'cavity photon number'\n"
      << "set key autotitle columnhead\n"
      << "plot data using (column('detuning')):(column('photon_number')) with lines\n";
  } else if (is_angular) {
    table.column_index("classical_intensity");
    table.column_index("noise_R");
    s << "set key autotitle columnhead\n"
      << "set multiplot layout 2,1\n"
      << "set xlabel 'theta_1 / pi'\n"
      << "set ylabel 'classical intensity'\n"
      << "plot data using (column('theta1')/pi):(column('classical_intensity')) with lines\n"
      << "set ylabel 'R'\n"
      << "plot data using (column('theta1')/pi):(column('noise_R')) with lines\n"
      << "unset multiplot\n";
  } else {
    table.column_index("detuning");
  }
  return s.str();
}

Options load_config(const std::string& path, std::map<std::string, std::string>& origin) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file '" + path + "'");
  }
  Options options;
  std::string line;
  std::size_t line_no = 0;
  bool csv_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line_no == 1 && line.rfind("# tool=", 0) == 0) {
      csv_header = true;
    }
    std::string body;
    if (csv_header) {
      if (line.empty() || line.front() != '#') {
        break;
      }
      body = line.substr(1);
    } else {
      body = line.substr(0, line.find('#'));
    }
    body = trim(body);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    const std::string where = path + ":" + std::to_string(line_no);
    if (eq == std::string::npos) {
      throw ConfigError(where, "expected key = value");
    }
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(where, "empty key");
    }
    options[key] = trim(body.substr(eq + 1));
    origin[key] = where;
  }
  return options;
}

namespace {

struct Subcommand {
  Subcommand(CLI::App* sub, const std::vector<OptionSpec>* option_specs)
      : app(sub), specs(option_specs) {}

  CLI::App* app = nullptr;
  const std::vector<OptionSpec>* specs = nullptr;
  Options raw;
  std::map<std::string, CLI::Option*> flags;
  std::string config_path;
  std::string out_path = "-";
  std::string format = "csv";
};

void declare(Subcommand& sub, bool with_format) {
  for (const auto& spec : *sub.specs) {
    std::string names = "--" + spec.name;
    if (spec.name == "cavity") {
      names += ",--cavity-kind";
    }
    auto* opt = sub.app->add_option(names, sub.raw[spec.name], spec.help);
    opt->default_str(spec.default_value);
    opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub.flags[spec.name] = opt;
  }
  sub.app->add_option("--config", sub.config_path,
                      "key = value file (or a CSV from this tool); flags override it");
  sub.app->add_option("--out", sub.out_path, "output path, - for stdout")
      ->default_str("-");
  if (with_format) {
    sub.app->add_option("--format", sub.format, "csv or json")
        ->default_str("csv")
        ->check(CLI::IsMember({"csv", "json"}));
  }
}

// Merges flags, config file and defaults; flags win over the file.
Options gather(Subcommand& sub, const std::string& command,
               std::map<std::string, std::string>& origin) {
  Options given;
  if (!sub.config_path.empty()) {
    std::map<std::string, std::string> file_origin;
    const Options file = load_config(sub.config_path, file_origin);
    for (const auto& [key, value] : file) {
      if (key == "tool" || key.rfind("info.", 0) == 0) {
        continue;
      }
      if (key == "command") {
        if (value != command) {
          throw ConfigError(file_origin[key], "config is for '" + value + "', not '" + command + "'");
        }
        continue;
      }
      if (!sub.flags.contains(key)) {
        throw ConfigError(file_origin[key], "unknown key '" + key + "'");
      }
      given[key] = value;
      origin[key] = file_origin[key];
    }
  }
  for (const auto& [key, opt] : sub.flags) {
    if (opt->count() > 0) {
      given[key] = sub.raw[key];
      origin.erase(key);
    }
  }
  return with_defaults(*sub.specs, given);
}

std::string located(const ConfigError& e, const std::map<std::string, std::string>& origin) {
  const std::string key = e.field().rfind("--", 0) == 0 ? e.field().substr(2) : e.field();
  const auto it = origin.find(key);
  return it == origin.end() ? e.what() : it->second + ": " + e.what();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optical observables of ultracold lattice atoms probed through a cavity"};
  app.name(kToolName);
  app.set_version_flag("--version", tool_id());
  app.require_subcommand(1);

  Subcommand spectrum{app.add_subcommand("spectrum", "cavity transmission spectrum"),
                      &spectrum_options()};
  Subcommand angular{app.add_subcommand("angular", "scattered light versus cavity angle"),
                     &angular_options()};
  Subcommand oracle{app.add_subcommand("oracle-check", "compare closed forms with Fock enumeration"),
                    &oracle_check_options()};
  declare(spectrum, true);
  declare(angular, true);
  declare(oracle, false);

  std::string plot_input;
  std::string plot_out;
  auto* plot = app.add_subcommand("emit-plot", "write a gnuplot script for a result CSV");
  plot->add_option("input", plot_input, "CSV produced by spectrum or angular")->required();
  plot->add_option("--out", plot_out, "script path (default: input with .gp extension)");

  std::vector<const char*> argv;
  argv.push_back(kToolName);
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Config);
  }

  std::map<std::string, std::string> origin;
  OracleReport report;
  std::string report_path = "-";
  try {
    if (spectrum.app->parsed()) {
      const auto options = gather(spectrum, "spectrum", origin);
      const auto table = run_spectrum(resolve_spectrum(options));
      write_output(spectrum.out_path, render(table, spectrum.format), out);
    } else if (angular.app->parsed()) {
      const auto options = gather(angular, "angular", origin);
      const auto table = run_angular(resolve_angular(options));
      write_output(angular.out_path, render(table, angular.format), out);
    } else if (oracle.app->parsed()) {
      report_path = oracle.out_path;
      const auto options = gather(oracle, "oracle-check", origin);
      const auto run = resolve_oracle_check(options);
      report.atoms = run.atoms;
      report.sites = run.sites;
      report.seed = run.seed;
      try {
        report = run_oracle_check(run);
      } catch (const CapacityError& e) {
        report.error = e.what();
        write_output(report_path, report.to_json(), out);
        throw;
      }
      write_output(report_path, report.to_json(), out);
      if (!report.passed()) {
        for (const auto& c : report.checks) {
          if (!c.passed()) {
            err << "mismatch: " << c.name << " max error " << format_double(c.max_error)
                << " > " << format_double(c.tolerance) << '\n';
          }
        }
        return static_cast<int>(ExitCode::OracleMismatch);
      }
    } else if (plot->parsed()) {
      std::ifstream in(plot_input);
      if (!in) {
        throw IoError("cannot open '" + plot_input + "'");
      }
      const DataTable table = read_csv(in);
      namespace fs = std::filesystem;
      if (plot_out.empty()) {
        plot_out = fs::path(plot_input).replace_extension(".gp").string();
      }
      std::string reference = plot_input;
      if (plot_out != "-") {
        const fs::path script_dir = fs::absolute(plot_out).parent_path();
        reference = fs::absolute(plot_input).lexically_normal().lexically_relative(
                        script_dir.lexically_normal()).generic_string();
      }
      write_output(plot_out, plot_script(table, reference), out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << located(e, origin) << '\n';
    return static_cast<int>(ExitCode::Config);
  } catch (const CsvError& e) {
    err << "error: " << plot_input << ": " << e.what() << '\n';
    return static_cast<int>(ExitCode::Config);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Config);
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Capacity);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Io);
  }
  return static_cast<int>(ExitCode::Ok);
}

}  // namespace cavlat::cli
