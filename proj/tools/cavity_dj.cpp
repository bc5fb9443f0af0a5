// cavity-dj: front end for the cavitydj library. Subcommands synthesize
// controlled-phase-flip gates, enumerate DJ oracle functions, run the
// refined algorithm, produce fidelity sweeps, and print the feasibility
// arithmetic. Exit codes: 0 success, 1 compute or io failure, 2 rejected
// configuration (messages name the offending field).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cavitydj/dj.hpp"
#include "cavitydj/gates.hpp"
#include "cavitydj/lab.hpp"
#include "cavitydj/oracles.hpp"

namespace {

using nlohmann::ordered_json;
using namespace cavitydj;

constexpr double kTwoPi = 6.283185307179586476925286766559;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw std::invalid_argument(field + ": " + message);
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string bits_of(std::uint32_t x, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int b = 0; b < n; ++b) {
    if ((x >> (n - 1 - b)) & 1u) {
      s[static_cast<std::size_t>(b)] = '1';
    }
  }
  return s;
}

std::string classification_name(Classification c) {
  return c == Classification::constant ? "constant" : "balanced";
}

// ---------------------------------------------------------------------------
// output plumbing: stdout passthrough, or temp file renamed into place on
// commit so a failed run never leaves a partial file behind

class OutputFile {
public:
  explicit OutputFile(std::string path) : path_(std::move(path)) {
    if (path_.empty()) {
      return;
    }
    tmp_ = path_ + ".tmp";
    file_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!file_) {
      throw std::runtime_error("out: cannot open " + tmp_ + " for writing");
    }
  }

  OutputFile(const OutputFile&) = delete;
  OutputFile& operator=(const OutputFile&) = delete;

  ~OutputFile() {
    if (!tmp_.empty() && !committed_) {
      file_.close();
      std::remove(tmp_.c_str());
    }
  }

  std::ostream& stream() { return path_.empty() ? std::cout : file_; }

  void commit() {
    if (path_.empty()) {
      std::cout.flush();
      if (!std::cout) {
        throw std::runtime_error("out: write to stdout failed");
      }
      return;
    }
    file_.flush();
    file_.close();
    if (file_.fail()) {
      throw std::runtime_error("out: write to " + path_ + " failed");
    }
    if (std::rename(tmp_.c_str(), path_.c_str()) != 0) {
      throw std::runtime_error("out: cannot rename " + tmp_ + " to " + path_);
    }
    committed_ = true;
  }

private:
  std::string path_;
  std::string tmp_;
  std::ofstream file_;
  bool committed_ = false;
};

// ---------------------------------------------------------------------------
// json config files mirror the long option names; command-line flags win,
// unknown keys are rejected

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& field) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? comma : comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      fail(field, "cannot parse '" + token + "' as a number");
    }
    if (used != token.size() || !std::isfinite(v)) {
      fail(field, "cannot parse '" + token + "' as a number");
    }
    out.push_back(v);
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  if (out.empty()) {
    fail(field, "expected at least one value");
  }
  return out;
}

// grid argument: "lo:hi:count" for a uniform grid or a comma list of values
struct GridArg {
  std::string spec;
};

std::vector<double> parse_grid(const GridArg& grid, const std::string& field) {
  const std::string& spec = grid.spec;
  if (spec.find(':') == std::string::npos) {
    return parse_number_list(spec, field);
  }
  const std::size_t c1 = spec.find(':');
  const std::size_t c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos) {
    fail(field, "expected lo:hi:count or a comma list, got '" + spec + "'");
  }
  const std::vector<double> lo = parse_number_list(spec.substr(0, c1), field);
  const std::vector<double> hi =
      parse_number_list(spec.substr(c1 + 1, c2 - c1 - 1), field);
  const std::string count_text = spec.substr(c2 + 1);
  std::size_t used = 0;
  long count = 0;
  try {
    count = std::stol(count_text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != count_text.size() || count < 1 || count > 100000) {
    fail(field, "grid count must be an integer in [1, 100000]");
  }
  if (lo.size() != 1 || hi.size() != 1) {
    fail(field, "expected lo:hi:count or a comma list, got '" + spec + "'");
  }
  return linspace(lo[0], hi[0], static_cast<int>(count));
}

void from_config(const ordered_json& v, const std::string& key, double& out) {
  if (!v.is_number()) {
    fail(key, "config value must be a number");
  }
  out = v.get<double>();
}

void from_config(const ordered_json& v, const std::string& key, int& out) {
  if (!v.is_number_integer()) {
    fail(key, "config value must be an integer");
  }
  out = v.get<int>();
}

void from_config(const ordered_json& v, const std::string& key,
                 long long& out) {
  if (!v.is_number_integer()) {
    fail(key, "config value must be an integer");
  }
  out = v.get<long long>();
}

void from_config(const ordered_json& v, const std::string& key, bool& out) {
  if (!v.is_boolean()) {
    fail(key, "config value must be a boolean");
  }
  out = v.get<bool>();
}

void from_config(const ordered_json& v, const std::string& key,
                 std::string& out) {
  if (!v.is_string()) {
    fail(key, "config value must be a string");
  }
  out = v.get<std::string>();
}

void from_config(const ordered_json& v, const std::string& key,
                 std::vector<double>& out) {
  if (v.is_string()) {
    out = parse_number_list(v.get<std::string>(), key);
    return;
  }
  if (!v.is_array()) {
    fail(key, "config value must be an array or a comma list");
  }
  out.clear();
  for (const ordered_json& e : v) {
    if (!e.is_number()) {
      fail(key, "config array entries must be numbers");
    }
    out.push_back(e.get<double>());
  }
  if (out.empty()) {
    fail(key, "expected at least one value");
  }
}

void from_config(const ordered_json& v, const std::string& key, GridArg& out) {
  if (v.is_string()) {
    out.spec = v.get<std::string>();
    return;
  }
  std::vector<double> values;
  from_config(v, key, values);
  out.spec.clear();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) {
      out.spec += ',';
    }
    out.spec += fmt17(values[k]);
  }
}

ordered_json load_config(const CLI::App& cmd, const std::string& path) {
  if (path.empty()) {
    return ordered_json::object();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail("config", "cannot open " + path);
  }
  ordered_json cfg = ordered_json::parse(in, nullptr, false);
  if (cfg.is_discarded()) {
    fail("config", "invalid json in " + path);
  }
  if (!cfg.is_object()) {
    fail("config", "expected a json object");
  }
  for (const auto& item : cfg.items()) {
    const std::string& key = item.key();
    if (key == "config" || key == "help" || key == "version" ||
        cmd.get_option_no_throw("--" + key) == nullptr) {
      fail("config", "unknown key '" + key + "'");
    }
  }
  return cfg;
}

// true when the value arrived on the command line or in the config file
bool given(const CLI::App& cmd, const ordered_json& cfg,
           const std::string& key) {
  const CLI::Option* opt = cmd.get_option_no_throw("--" + key);
  return (opt != nullptr && opt->count() > 0) || cfg.contains(key);
}

template <typename T>
void overlay(const CLI::App& cmd, const ordered_json& cfg,
             const std::string& key, T& value) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) {
    return;
  }
  const CLI::Option* opt = cmd.get_option_no_throw("--" + key);
  if (opt != nullptr && opt->count() > 0) {
    return;
  }
  from_config(*it, key, value);
}

// ---------------------------------------------------------------------------
// shared option blocks

struct CommonOptions {
  std::string format;
  std::string out;
  std::string config;
};

void add_common_options(CLI::App& cmd, CommonOptions& common,
                        const std::string& default_format,
                        const std::string& format_help) {
  common.format = default_format;
  cmd.add_option("--format", common.format, format_help);
  cmd.add_option("--out", common.out, "write output to this path (atomic replace)");
  cmd.add_option("--config", common.config,
                 "json config file mirroring the long option names");
}

void overlay_common(const CLI::App& cmd, const ordered_json& cfg,
                    CommonOptions& common,
                    const std::set<std::string>& allowed_formats) {
  overlay(cmd, cfg, "format", common.format);
  overlay(cmd, cfg, "out", common.out);
  if (allowed_formats.count(common.format) == 0) {
    std::string expected;
    for (const auto& f : allowed_formats) {
      expected += expected.empty() ? "" : ", ";
      expected += f;
    }
    fail("format", "expected one of: " + expected);
  }
}

struct PhysicsOptions {
  std::vector<double> ratios;
  double eta = 0.1;
  double kappa_ratio = 0.0;
  double kappa_khz = 0.0;
  double omega1_khz = 5.1;
  double delta_ratio = 0.0;
  std::string dipole_variant = "projector";
  double timing_deviation = 0.0;
  int photon_cutoff = 1;
};

void add_physics_options(CLI::App& cmd, PhysicsOptions& phys) {
  cmd.add_option("--ratios", phys.ratios,
                 "coupling ratios Omega_j/Omega_1, comma list, first entry 1")
      ->delimiter(',');
  cmd.add_option("--eta", phys.eta,
                 "coupling ratio eta = Omega_1/Omega, atoms 2..n at Omega");
  cmd.add_option("--kappa-ratio", phys.kappa_ratio, "cavity decay kappa/Omega_1");
  cmd.add_option("--kappa-khz", phys.kappa_khz, "cavity decay kappa/2pi in kHz");
  cmd.add_option("--omega1-khz", phys.omega1_khz, "Omega_1/2pi in kHz");
  cmd.add_option("--delta-ratio", phys.delta_ratio,
                 "dipole-dipole strength delta/Omega_1");
  cmd.add_option("--dipole-variant", phys.dipole_variant,
                 "dipole term form: projector|exchange");
  cmd.add_option("--timing-deviation", phys.timing_deviation,
                 "relative deviation of the gating time");
  cmd.add_option("--photon-cutoff", phys.photon_cutoff, "Fock-space truncation");
}

void overlay_physics(const CLI::App& cmd, const ordered_json& cfg,
                     PhysicsOptions& phys) {
  overlay(cmd, cfg, "ratios", phys.ratios);
  overlay(cmd, cfg, "eta", phys.eta);
  overlay(cmd, cfg, "kappa-ratio", phys.kappa_ratio);
  overlay(cmd, cfg, "kappa-khz", phys.kappa_khz);
  overlay(cmd, cfg, "omega1-khz", phys.omega1_khz);
  overlay(cmd, cfg, "delta-ratio", phys.delta_ratio);
  overlay(cmd, cfg, "dipole-variant", phys.dipole_variant);
  overlay(cmd, cfg, "timing-deviation", phys.timing_deviation);
  overlay(cmd, cfg, "photon-cutoff", phys.photon_cutoff);
}

DipoleVariant parse_variant(const std::string& name) {
  if (name == "projector") {
    return DipoleVariant::projector;
  }
  if (name == "exchange") {
    return DipoleVariant::exchange;
  }
  fail("dipole-variant", "expected projector or exchange, got '" + name + "'");
}

// simulation inputs are dimensionless with Omega_1 = 1; the physical
// Omega_1 in rad/s only converts reported durations to seconds
struct ResolvedPhysics {
  ModelParams params;
  double omega1;
  double kappa_ratio;
};

ResolvedPhysics resolve_physics(const CLI::App& cmd, const ordered_json& cfg,
                                const PhysicsOptions& phys, int n) {
  if (!(phys.omega1_khz > 0.0) || !std::isfinite(phys.omega1_khz)) {
    fail("omega1-khz", "must be a positive number");
  }

  const bool has_ratios = given(cmd, cfg, "ratios");
  const bool has_eta = given(cmd, cfg, "eta");
  if (has_ratios && has_eta) {
    fail("ratios", "conflicts with --eta; give one of them");
  }
  std::vector<double> couplings;
  if (has_ratios) {
    if (static_cast<int>(phys.ratios.size()) != n) {
      fail("ratios", "expected " + std::to_string(n) + " entries, got " +
                         std::to_string(phys.ratios.size()));
    }
    if (phys.ratios[0] != 1.0) {
      fail("ratios", "first entry must be 1 (couplings are quoted vs Omega_1)");
    }
    for (double r : phys.ratios) {
      if (!std::isfinite(r) || r < 0.0) {
        fail("ratios", "entries must be finite and >= 0");
      }
    }
    couplings = phys.ratios;
  } else {
    if (!(phys.eta > 0.0) || !(phys.eta <= 1.0)) {
      fail("eta", "must lie in (0, 1]");
    }
    couplings.assign(static_cast<std::size_t>(n), 1.0 / phys.eta);
    couplings[0] = 1.0;
  }

  const bool has_kr = given(cmd, cfg, "kappa-ratio");
  const bool has_kk = given(cmd, cfg, "kappa-khz");
  if (has_kr && has_kk) {
    fail("kappa-ratio", "conflicts with --kappa-khz; give one of them");
  }
  double kappa_ratio = phys.kappa_ratio;
  std::string kappa_field = "kappa-ratio";
  if (has_kk) {
    kappa_field = "kappa-khz";
    if (!(phys.kappa_khz >= 0.0) || !std::isfinite(phys.kappa_khz)) {
      fail("kappa-khz", "must be >= 0");
    }
    kappa_ratio = phys.kappa_khz / phys.omega1_khz;
  }
  if (!(kappa_ratio >= 0.0) || !(kappa_ratio < 4.0) ||
      !std::isfinite(kappa_ratio)) {
    fail(kappa_field, "kappa/Omega_1 must lie in [0, 4)");
  }

  if (!(phys.delta_ratio >= 0.0) || !std::isfinite(phys.delta_ratio)) {
    fail("delta-ratio", "must be >= 0");
  }
  if (!(phys.timing_deviation > -1.0) || !std::isfinite(phys.timing_deviation)) {
    fail("timing-deviation", "must be > -1");
  }
  if (phys.photon_cutoff < 1 || phys.photon_cutoff > 8) {
    fail("photon-cutoff", "must lie in [1, 8]");
  }

  ResolvedPhysics resolved;
  resolved.params.couplings = std::move(couplings);
  resolved.params.kappa = kappa_ratio;
  resolved.params.dipole_delta = phys.delta_ratio;
  resolved.params.dipole_variant = parse_variant(phys.dipole_variant);
  resolved.params.photon_cutoff = phys.photon_cutoff;
  resolved.params.timing_deviation = phys.timing_deviation;
  resolved.omega1 = kTwoPi * 1000.0 * phys.omega1_khz;
  resolved.kappa_ratio = kappa_ratio;
  return resolved;
}

// ---------------------------------------------------------------------------
// gate

struct GateOptions {
  int n = 0;
  std::string label;
  PhysicsOptions phys;
  CommonOptions common;
};

void run_gate(const CLI::App& cmd, GateOptions& opt) {
  const ordered_json cfg = load_config(cmd, opt.common.config);
  overlay(cmd, cfg, "n", opt.n);
  overlay(cmd, cfg, "label", opt.label);
  overlay_physics(cmd, cfg, opt.phys);
  overlay_common(cmd, cfg, opt.common, {"text", "json", "csv"});

  if (!given(cmd, cfg, "n")) {
    fail("n", "is required");
  }
  if (opt.n < 1 || opt.n > 8) {
    fail("n", "must lie in [1, 8]");
  }
  if (!given(cmd, cfg, "label")) {
    fail("label", "is required");
  }
  if (static_cast<int>(opt.label.size()) != opt.n) {
    fail("label", "expected " + std::to_string(opt.n) + " bits, got " +
                      std::to_string(opt.label.size()));
  }
  for (char c : opt.label) {
    if (c != '0' && c != '1') {
      fail("label", "bits must be 0 or 1");
    }
  }
  const ResolvedPhysics resolved = resolve_physics(cmd, cfg, opt.phys, opt.n);

  const HilbertSpace space = build_space(opt.n, resolved.params.photon_cutoff);
  const Encoding encoding = Encoding::standard(opt.n);
  const CpfLabel label = CpfLabel::from_string(opt.label);
  const GateResult gate = synthesize_cpf(space, encoding, resolved.params, label);
  const double duration_s = gate.duration / resolved.omega1;
  const auto dim = gate.effective.rows();

  OutputFile out(opt.common.out);
  std::ostream& os = out.stream();
  if (opt.common.format == "text") {
    os << "n: " << opt.n << '\n';
    os << "label: " << opt.label << '\n';
    os << "kappa_ratio: " << fmt17(resolved.kappa_ratio) << '\n';
    os << "duration_s: " << fmt17(duration_s) << '\n';
    os << "input diag_re diag_im leakage norm_loss\n";
    for (Index x = 0; x < dim; ++x) {
      os << bits_of(static_cast<std::uint32_t>(x), opt.n) << ' '
         << fmt17(gate.effective(x, x).real()) << ' '
         << fmt17(gate.effective(x, x).imag()) << ' ' << fmt17(gate.leakage(x))
         << ' ' << fmt17(gate.norm_loss(x)) << '\n';
    }
  } else if (opt.common.format == "csv") {
    os << "x,diag_re,diag_im,leakage,norm_loss,duration_s\n";
    for (Index x = 0; x < dim; ++x) {
      os << bits_of(static_cast<std::uint32_t>(x), opt.n) << ','
         << fmt17(gate.effective(x, x).real()) << ','
         << fmt17(gate.effective(x, x).imag()) << ',' << fmt17(gate.leakage(x))
         << ',' << fmt17(gate.norm_loss(x)) << ',' << fmt17(duration_s) << '\n';
    }
  } else {
    ordered_json j;
    j["n"] = opt.n;
    j["label"] = opt.label;
    j["kappa_ratio"] = resolved.kappa_ratio;
    j["omega1_rad_s"] = resolved.omega1;
    j["duration_s"] = duration_s;
    ordered_json inputs = ordered_json::array();
    for (Index x = 0; x < dim; ++x) {
      inputs.push_back({{"x", bits_of(static_cast<std::uint32_t>(x), opt.n)},
                        {"diag_re", gate.effective(x, x).real()},
                        {"diag_im", gate.effective(x, x).imag()},
                        {"leakage", gate.leakage(x)},
                        {"norm_loss", gate.norm_loss(x)}});
    }
    j["inputs"] = std::move(inputs);
    os << j.dump(2) << '\n';
  }
  out.commit();
}

// ---------------------------------------------------------------------------
// enumerate

struct EnumerateOptions {
  int n = 0;
  CommonOptions common;
};

void run_enumerate(const CLI::App& cmd, EnumerateOptions& opt) {
  const ordered_json cfg = load_config(cmd, opt.common.config);
  overlay(cmd, cfg, "n", opt.n);
  overlay_common(cmd, cfg, opt.common, {"text", "json", "csv"});
  if (!given(cmd, cfg, "n")) {
    fail("n", "is required");
  }
  if (opt.n < 1 || opt.n > 5) {
    fail("n", "must lie in [1, 5]");
  }

  OutputFile out(opt.common.out);
  std::ostream& os = out.stream();
  std::uint64_t id = 0;
  if (opt.common.format == "text") {
    for_each_function(opt.n, [&](const BooleanFunction& f) {
      os << id++ << ' ' << f.to_hex() << ' '
         << classification_name(classify(f)) << '\n';
    });
  } else if (opt.common.format == "csv") {
    os << "id,mask,classification\n";
    for_each_function(opt.n, [&](const BooleanFunction& f) {
      os << id++ << ',' << f.to_hex() << ','
         << classification_name(classify(f)) << '\n';
    });
  } else {
    // streamed by hand so n = 5 never materializes the function list
    os << "[\n";
    for_each_function(opt.n, [&](const BooleanFunction& f) {
      os << (id ? ",\n" : "") << "  {\"id\": " << id << ", \"mask\": \""
         << f.to_hex() << "\", \"classification\": \""
         << classification_name(classify(f)) << "\"}";
      ++id;
    });
    os << "\n]\n";
  }
  out.commit();
}

// ---------------------------------------------------------------------------
// dj

struct DjOptions {
  int n = 0;
  std::string function;
  long long function_id = -1;
  bool ideal = false;
  double threshold = 0.5;
  PhysicsOptions phys;
  CommonOptions common;
};

BooleanFunction resolve_function(const CLI::App& cmd, const ordered_json& cfg,
                                 const DjOptions& opt) {
  const bool has_mask = given(cmd, cfg, "function");
  const bool has_id = given(cmd, cfg, "function-id");
  if (has_mask && has_id) {
    fail("function", "conflicts with --function-id; give one of them");
  }
  if (has_mask) {
    try {
      return BooleanFunction::from_hex(opt.n, opt.function);
    } catch (const std::exception& e) {
      fail("function", e.what());
    }
  }
  if (!has_id) {
    fail("function", "is required (hex mask or --function-id)");
  }
  if (opt.function_id < 0) {
    fail("function-id", "must be >= 0");
  }
  // ordinal id in enumeration order: 0 is the constant function, then the
  // balanced masks ascending
  std::uint64_t want = static_cast<std::uint64_t>(opt.function_id);
  std::uint64_t seen = 0;
  std::uint64_t found_mask = 0;
  bool found = false;
  for_each_function(opt.n, [&](const BooleanFunction& f) {
    if (seen++ == want) {
      found_mask = f.table;
      found = true;
    }
  });
  if (!found) {
    fail("function-id", "only " + std::to_string(seen) + " functions at n = " +
                            std::to_string(opt.n));
  }
  return BooleanFunction(opt.n, found_mask);
}

void run_dj(const CLI::App& cmd, DjOptions& opt) {
  const ordered_json cfg = load_config(cmd, opt.common.config);
  overlay(cmd, cfg, "n", opt.n);
  overlay(cmd, cfg, "function", opt.function);
  overlay(cmd, cfg, "function-id", opt.function_id);
  overlay(cmd, cfg, "ideal", opt.ideal);
  overlay(cmd, cfg, "threshold", opt.threshold);
  overlay_physics(cmd, cfg, opt.phys);
  overlay_common(cmd, cfg, opt.common, {"text", "json", "csv"});

  if (!given(cmd, cfg, "n")) {
    fail("n", "is required");
  }
  if (opt.n < 1 || opt.n > 6) {
    fail("n", "must lie in [1, 6]");
  }
  if (!(opt.threshold > 0.0) || !(opt.threshold < 1.0)) {
    fail("threshold", "must lie in (0, 1)");
  }
  const BooleanFunction f = resolve_function(cmd, cfg, opt);
  if (!f.is_constant() && !f.is_balanced()) {
    fail("function", "mask " + f.to_hex() +
                         " is neither constant nor balanced; the DJ promise "
                         "admits no other functions");
  }

  const GateSequence decomposition = decompose_oracle(f);
  const Matrix ideal = ideal_circuit(f);
  Matrix actual;
  double gate_duration_s = 0.0;
  if (opt.ideal) {
    actual = ideal;
  } else {
    const ResolvedPhysics resolved = resolve_physics(cmd, cfg, opt.phys, opt.n);
    actual = physical_circuit(f, resolved.params);
    gate_duration_s =
        gate_time(1.0, resolved.params.kappa) *
        (1.0 + resolved.params.timing_deviation) / resolved.omega1;
  }
  const DJOutcome outcome = outcome_from_circuits(ideal, actual, opt.threshold);
  const double fid_avg = fidelity(ideal, actual, FidelityMode::basis_averaged);
  const double fid_avg_norm =
      fidelity_normalized(ideal, actual, FidelityMode::basis_averaged);
  const auto n_gates = decomposition.labels.size();
  const double runtime_s = gate_duration_s * static_cast<double>(n_gates);
  const std::string mode = opt.ideal ? "ideal" : "physical";
  const std::string verdict = classification_name(outcome.classification);

  OutputFile out(opt.common.out);
  std::ostream& os = out.stream();
  if (opt.common.format == "text") {
    os << "n: " << opt.n << '\n';
    os << "function: " << f.to_hex() << '\n';
    os << "mode: " << mode << '\n';
    os << "classification: " << verdict << '\n';
    os << "p_zero: " << fmt17(outcome.p_zero) << '\n';
    os << "success_prob: " << fmt17(outcome.success_prob) << '\n';
    os << "fidelity_raw: " << fmt17(outcome.fidelity_raw) << '\n';
    os << "fidelity_normalized: " << fmt17(outcome.fidelity_normalized) << '\n';
    os << "fidelity_raw_avg: " << fmt17(fid_avg) << '\n';
    os << "fidelity_normalized_avg: " << fmt17(fid_avg_norm) << '\n';
    os << "oracle_gates: " << n_gates << '\n';
    if (!opt.ideal) {
      os << "gate_duration_s: " << fmt17(gate_duration_s) << '\n';
      os << "runtime_s: " << fmt17(runtime_s) << '\n';
    }
  } else if (opt.common.format == "csv") {
    os << "n,function,mode,classification,p_zero,success_prob,fidelity_raw,"
          "fidelity_normalized,fidelity_raw_avg,fidelity_normalized_avg,"
          "oracle_gates,gate_duration_s,runtime_s\n";
    os << opt.n << ',' << f.to_hex() << ',' << mode << ',' << verdict << ','
       << fmt17(outcome.p_zero) << ',' << fmt17(outcome.success_prob) << ','
       << fmt17(outcome.fidelity_raw) << ','
       << fmt17(outcome.fidelity_normalized) << ',' << fmt17(fid_avg) << ','
       << fmt17(fid_avg_norm) << ',' << n_gates << ',';
    if (opt.ideal) {
      os << ",\n";
    } else {
      os << fmt17(gate_duration_s) << ',' << fmt17(runtime_s) << '\n';
    }
  } else {
    ordered_json j;
    j["n"] = opt.n;
    j["function"] = f.to_hex();
    j["mode"] = mode;
    j["classification"] = verdict;
    j["p_zero"] = outcome.p_zero;
    j["success_prob"] = outcome.success_prob;
    j["fidelity_raw"] = outcome.fidelity_raw;
    j["fidelity_normalized"] = outcome.fidelity_normalized;
    j["fidelity_raw_avg"] = fid_avg;
    j["fidelity_normalized_avg"] = fid_avg_norm;
    j["oracle_gates"] = n_gates;
    if (!opt.ideal) {
      j["gate_duration_s"] = gate_duration_s;
      j["runtime_s"] = runtime_s;
    }
    os << j.dump(2) << '\n';
  }
  out.commit();
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
  std::string preset;
  GridArg kappa_grid;
  GridArg delta_t_grid;
  GridArg eta_grid;
  GridArg delta_grid;
  std::vector<double> kappa_set = {0.1, 0.05, 0.02};
  std::string dipole_variant = "both";
  int jobs = 1;
  CommonOptions common;
};

void run_sweep(const CLI::App& cmd, SweepOptions& opt) {
  const ordered_json cfg = load_config(cmd, opt.common.config);
  overlay(cmd, cfg, "kappa-grid", opt.kappa_grid);
  overlay(cmd, cfg, "delta-t-grid", opt.delta_t_grid);
  overlay(cmd, cfg, "eta-grid", opt.eta_grid);
  overlay(cmd, cfg, "delta-grid", opt.delta_grid);
  overlay(cmd, cfg, "kappa-set", opt.kappa_set);
  overlay(cmd, cfg, "dipole-variant", opt.dipole_variant);
  overlay(cmd, cfg, "jobs", opt.jobs);
  overlay_common(cmd, cfg, opt.common, {"csv", "json"});

  static const std::set<std::string> kGridKeys = {
      "kappa-grid", "delta-t-grid", "eta-grid",
      "delta-grid", "kappa-set",    "dipole-variant"};
  std::set<std::string> allowed;
  if (opt.preset == "fig3a") {
    allowed = {"kappa-grid", "delta-t-grid"};
  } else if (opt.preset == "fig3b") {
    allowed = {"eta-grid", "kappa-grid"};
  } else if (opt.preset == "fig4") {
    allowed = {"delta-grid", "kappa-set", "dipole-variant"};
  } else {
    fail("preset", "expected fig3a, fig3b, or fig4, got '" + opt.preset + "'");
  }
  for (const std::string& key : kGridKeys) {
    if (given(cmd, cfg, key) && allowed.count(key) == 0) {
      fail(key, "is not a " + opt.preset + " parameter");
    }
  }
  if (opt.jobs < 1 || opt.jobs > 512) {
    fail("jobs", "must lie in [1, 512]");
  }

  SweepTable table;
  if (opt.preset == "fig3a") {
    if (opt.kappa_grid.spec.empty()) {
      opt.kappa_grid.spec = "0:0.1:26";
    }
    if (opt.delta_t_grid.spec.empty()) {
      opt.delta_t_grid.spec = "-0.05:0.05:21";
    }
    table = sweep_fig3a(parse_grid(opt.kappa_grid, "kappa-grid"),
                        parse_grid(opt.delta_t_grid, "delta-t-grid"),
                        reference_balanced_function(3), opt.jobs);
  } else if (opt.preset == "fig3b") {
    if (opt.eta_grid.spec.empty()) {
      opt.eta_grid.spec = "0.05:0.5:19";
    }
    if (opt.kappa_grid.spec.empty()) {
      opt.kappa_grid.spec = "0:0.1:26";
    }
    table = sweep_fig3b(parse_grid(opt.eta_grid, "eta-grid"),
                        parse_grid(opt.kappa_grid, "kappa-grid"), opt.jobs);
  } else {
    if (opt.delta_grid.spec.empty()) {
      opt.delta_grid.spec = "0:0.2:21";
    }
    std::vector<DipoleVariant> variants;
    if (opt.dipole_variant == "both") {
      variants = {DipoleVariant::projector, DipoleVariant::exchange};
    } else {
      variants = {parse_variant(opt.dipole_variant)};
    }
    table = sweep_fig4(parse_grid(opt.delta_grid, "delta-grid"), opt.kappa_set,
                       variants, opt.jobs);
  }

  OutputFile out(opt.common.out);
  if (opt.common.format == "csv") {
    out.stream() << table.to_csv();
  } else {
    out.stream() << table.to_json().dump(2) << '\n';
  }
  out.commit();
}

// ---------------------------------------------------------------------------
// feasibility

struct FeasibilityOptions {
  double omega0_khz = 51.0;
  double omega1_khz = 0.0;
  double eta = 0.1;
  double kappa_ratio = 1e-3;
  double kappa_khz = 0.0;
  double lifetime_ms = 30.0;
  int n_min = 3;
  int n_max = 12;
  CommonOptions common;
};

std::string bool_name(bool v) { return v ? "true" : "false"; }

std::string feasibility_csv(const FeasibilityReport& rep) {
  std::string out = "key,value\n";
  auto row = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += ',';
    out += value;
    out += '\n';
  };
  row("omega0_rad_s", fmt17(rep.omega0));
  row("omega1_rad_s", fmt17(rep.omega1));
  row("kappa_rad_s", fmt17(rep.kappa));
  row("lifetime_s", fmt17(rep.lifetime));
  row("t_gate_s", fmt17(rep.t_gate));
  row("cavity_decay_time_s", std::isfinite(rep.cavity_decay_time)
                                 ? fmt17(rep.cavity_decay_time)
                                 : std::string("inf"));
  for (const auto& [n, t] : rep.runtime_n) {
    row("runtime_n[" + std::to_string(n) + "]", fmt17(t));
  }
  row("max_n", std::to_string(rep.max_n));
  row("max_n_capped", bool_name(rep.max_n_capped));
  row("max_n_lifetime", std::to_string(rep.max_n_lifetime));
  row("max_n_lifetime_capped", bool_name(rep.max_n_lifetime_capped));
  row("reference_max_n", std::to_string(rep.reference_max_n));
  row("matches_reference", bool_name(rep.matches_reference));
  if (!rep.matches_reference) {
    row("note", "computed decay bound max_n = " + std::to_string(rep.max_n) +
                    " differs from the reference estimate " +
                    std::to_string(rep.reference_max_n) +
                    "; the lifetime bound gives max_n_lifetime = " +
                    std::to_string(rep.max_n_lifetime));
  }
  for (std::size_t k = 0; k < rep.atom_positions.size(); ++k) {
    row("atom_position[" + std::to_string(k + 1) + "]",
        fmt17(rep.atom_positions[k]));
  }
  for (std::size_t k = 0; k < rep.atom_couplings.size(); ++k) {
    row("atom_coupling[" + std::to_string(k + 1) + "]",
        fmt17(rep.atom_couplings[k]));
  }
  return out;
}

void run_feasibility(const CLI::App& cmd, FeasibilityOptions& opt) {
  const ordered_json cfg = load_config(cmd, opt.common.config);
  overlay(cmd, cfg, "omega0-khz", opt.omega0_khz);
  overlay(cmd, cfg, "omega1-khz", opt.omega1_khz);
  overlay(cmd, cfg, "eta", opt.eta);
  overlay(cmd, cfg, "kappa-ratio", opt.kappa_ratio);
  overlay(cmd, cfg, "kappa-khz", opt.kappa_khz);
  overlay(cmd, cfg, "lifetime-ms", opt.lifetime_ms);
  overlay(cmd, cfg, "n-min", opt.n_min);
  overlay(cmd, cfg, "n-max", opt.n_max);
  overlay_common(cmd, cfg, opt.common, {"json", "csv"});

  if (!(opt.omega0_khz > 0.0) || !std::isfinite(opt.omega0_khz)) {
    fail("omega0-khz", "must be a positive number");
  }
  const double omega0 = kTwoPi * 1000.0 * opt.omega0_khz;

  const bool has_omega1 = given(cmd, cfg, "omega1-khz");
  const bool has_eta = given(cmd, cfg, "eta");
  if (has_omega1 && has_eta) {
    fail("omega1-khz", "conflicts with --eta; give one of them");
  }
  double omega1 = 0.0;
  if (has_omega1) {
    if (!(opt.omega1_khz > 0.0) || opt.omega1_khz > opt.omega0_khz) {
      fail("omega1-khz", "must lie in (0, omega0-khz]");
    }
    omega1 = kTwoPi * 1000.0 * opt.omega1_khz;
  } else {
    if (!(opt.eta > 0.0) || !(opt.eta <= 1.0)) {
      fail("eta", "must lie in (0, 1]");
    }
    omega1 = opt.eta * omega0;
  }

  const bool has_kr = given(cmd, cfg, "kappa-ratio");
  const bool has_kk = given(cmd, cfg, "kappa-khz");
  if (has_kr && has_kk) {
    fail("kappa-ratio", "conflicts with --kappa-khz; give one of them");
  }
  double kappa = 0.0;
  std::string kappa_field = "kappa-ratio";
  if (has_kk) {
    kappa_field = "kappa-khz";
    if (!(opt.kappa_khz >= 0.0) || !std::isfinite(opt.kappa_khz)) {
      fail("kappa-khz", "must be >= 0");
    }
    kappa = kTwoPi * 1000.0 * opt.kappa_khz;
  } else {
    if (!(opt.kappa_ratio >= 0.0) || !std::isfinite(opt.kappa_ratio)) {
      fail("kappa-ratio", "must be >= 0");
    }
    kappa = opt.kappa_ratio * omega1;
  }
  if (!(kappa < 4.0 * omega1)) {
    fail(kappa_field, "kappa/Omega_1 must lie in [0, 4)");
  }

  if (!(opt.lifetime_ms > 0.0) || !std::isfinite(opt.lifetime_ms)) {
    fail("lifetime-ms", "must be a positive number");
  }
  if (opt.n_min < 2) {
    fail("n-min", "must be >= 2");
  }
  if (opt.n_max < opt.n_min || opt.n_max > 32) {
    fail("n-max", "must lie in [n-min, 32]");
  }

  const FeasibilityReport rep = feasibility(
      omega0, omega1, kappa, opt.lifetime_ms / 1000.0, {opt.n_min, opt.n_max});

  OutputFile out(opt.common.out);
  if (opt.common.format == "json") {
    out.stream() << to_json(rep).dump(2) << '\n';
  } else {
    out.stream() << feasibility_csv(rep);
  }
  out.commit();
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);

  CLI::App app{"controlled-phase-flip gates from resonant cavity QED and the "
               "refined Deutsch-Jozsa algorithm built on them"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cavity-dj 1.0.0");

  GateOptions gate_opt;
  CLI::App* gate = app.add_subcommand(
      "gate", "synthesize one CPF gate and report its effective action");
  gate->add_option("--n", gate_opt.n, "number of qubits");
  gate->add_option("--label", gate_opt.label,
                   "flipped basis state as bits, qubit 1 first (e.g. 111)");
  add_physics_options(*gate, gate_opt.phys);
  add_common_options(*gate, gate_opt.common, "text", "text|json|csv");
  gate->callback([&] { run_gate(*gate, gate_opt); });

  EnumerateOptions enum_opt;
  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "list the canonical constant and balanced functions");
  enumerate->add_option("--n", enum_opt.n, "number of qubits");
  add_common_options(*enumerate, enum_opt.common, "text", "text|json|csv");
  enumerate->callback([&] { run_enumerate(*enumerate, enum_opt); });

  DjOptions dj_opt;
  CLI::App* dj = app.add_subcommand(
      "dj", "run the refined Deutsch-Jozsa algorithm on one function");
  dj->add_option("--n", dj_opt.n, "number of qubits");
  dj->add_option("--function", dj_opt.function,
                 "truth-table mask in hex, bit x = f(x)");
  dj->add_option("--function-id", dj_opt.function_id,
                 "ordinal id in enumeration order instead of a mask");
  dj->add_flag("--ideal", dj_opt.ideal, "use exact gates instead of synthesis");
  dj->add_option("--threshold", dj_opt.threshold,
                 "conditional p_zero cut between balanced and constant");
  add_physics_options(*dj, dj_opt.phys);
  add_common_options(*dj, dj_opt.common, "text", "text|json|csv");
  dj->callback([&] { run_dj(*dj, dj_opt); });

  SweepOptions sweep_opt;
  CLI::App* sweep =
      app.add_subcommand("sweep", "produce one of the fidelity surfaces");
  sweep->add_option("preset", sweep_opt.preset, "fig3a|fig3b|fig4")->required();
  sweep->add_option("--kappa-grid", sweep_opt.kappa_grid.spec,
                    "kappa/Omega_1 grid, lo:hi:count or comma list");
  sweep->add_option("--delta-t-grid", sweep_opt.delta_t_grid.spec,
                    "timing-deviation grid, lo:hi:count or comma list");
  sweep->add_option("--eta-grid", sweep_opt.eta_grid.spec,
                    "eta grid, lo:hi:count or comma list");
  sweep->add_option("--delta-grid", sweep_opt.delta_grid.spec,
                    "dipole delta/Omega_1 grid, lo:hi:count or comma list");
  sweep->add_option("--kappa-set", sweep_opt.kappa_set,
                    "kappa/Omega_1 values for the fig4 curves, comma list")
      ->delimiter(',');
  sweep->add_option("--dipole-variant", sweep_opt.dipole_variant,
                    "projector|exchange|both");
  sweep->add_option("--jobs", sweep_opt.jobs, "parallel grid evaluations");
  add_common_options(*sweep, sweep_opt.common, "csv", "csv|json");
  sweep->callback([&] { run_sweep(*sweep, sweep_opt); });

  FeasibilityOptions feas_opt;
  CLI::App* feasibility = app.add_subcommand(
      "feasibility", "gate times, runtimes, and qubit-count bounds");
  feasibility->add_option("--omega0-khz", feas_opt.omega0_khz,
                          "antinode coupling Omega_0/2pi in kHz");
  feasibility->add_option("--omega1-khz", feas_opt.omega1_khz,
                          "first atom coupling Omega_1/2pi in kHz");
  feasibility->add_option("--eta", feas_opt.eta,
                          "coupling ratio Omega_1/Omega_0");
  feasibility->add_option("--kappa-ratio", feas_opt.kappa_ratio,
                          "cavity decay kappa/Omega_1");
  feasibility->add_option("--kappa-khz", feas_opt.kappa_khz,
                          "cavity decay kappa/2pi in kHz");
  feasibility->add_option("--lifetime-ms", feas_opt.lifetime_ms,
                          "upper-level lifetime in ms");
  feasibility->add_option("--n-min", feas_opt.n_min, "smallest N to tabulate");
  feasibility->add_option("--n-max", feas_opt.n_max, "largest N to tabulate");
  add_common_options(*feasibility, feas_opt.common, "json", "json|csv");
  feasibility->callback([&] { run_feasibility(*feasibility, feas_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
