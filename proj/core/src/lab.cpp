#include "cavitydj/lab.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace cavitydj {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::string> kMetricNames = {
    "fidelity_raw",       "fidelity_normalized",      "p_zero",
    "success_prob",       "leakage",                  "fidelity_raw_fixed",
    "fidelity_normalized_fixed"};

// metric vector in kMetricNames order; the first two fidelities use the
// default basis-averaged mode, the trailing pair the fixed |0...0> input
std::vector<double> metrics_for(const Matrix& ideal, const Matrix& actual) {
  const DJOutcome out = outcome_from_circuits(ideal, actual);
  return {
      fidelity(ideal, actual, FidelityMode::basis_averaged),
      fidelity_normalized(ideal, actual, FidelityMode::basis_averaged),
      out.p_zero,
      out.success_prob,
      std::max(0.0, 1.0 - out.success_prob),
      out.fidelity_raw,
      out.fidelity_normalized,
  };
}

// evaluate row_fn over [0, count) with a bounded worker pool; rows land in
// their slots, so the output order never depends on scheduling
std::vector<SweepRow> fill_rows(
    int count, int jobs, const std::function<SweepRow(int)>& row_fn) {
  std::vector<SweepRow> rows(count);
  const int workers = std::max(1, std::min(jobs, count));
  if (workers == 1) {
    for (int k = 0; k < count; ++k) {
      rows[k] = row_fn(k);
    }
    return rows;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= count) {
        return;
      }
      try {
        rows[k] = row_fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back(worker);
  }
  for (auto& t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return rows;
}

void check_grid(const std::vector<double>& grid, const std::string& name) {
  if (grid.empty()) {
    throw std::invalid_argument(name + " grid must not be empty");
  }
  for (double v : grid) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(name + " grid has non-finite values");
    }
  }
}

std::string variant_name(DipoleVariant v) {
  return v == DipoleVariant::projector ? "projector" : "exchange";
}

}  // namespace

std::string SweepTable::to_csv() const {
  std::string out;
  for (std::size_t k = 0; k < axis_names.size(); ++k) {
    if (k) {
      out += ',';
    }
    out += axis_names[k];
  }
  if (!tag_name.empty()) {
    out += ',';
    out += tag_name;
  }
  for (const auto& m : metric_names) {
    out += ',';
    out += m;
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.axes.size(); ++k) {
      if (k) {
        out += ',';
      }
      out += fmt17(row.axes[k]);
    }
    if (!tag_name.empty()) {
      out += ',';
      out += row.tag;
    }
    for (double m : row.metrics) {
      out += ',';
      out += fmt17(m);
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json SweepTable::to_json() const {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json rec;
    for (std::size_t k = 0; k < axis_names.size(); ++k) {
      rec[axis_names[k]] = row.axes[k];
    }
    if (!tag_name.empty()) {
      rec[tag_name] = row.tag;
    }
    for (std::size_t k = 0; k < metric_names.size(); ++k) {
      rec[metric_names[k]] = row.metrics[k];
    }
    records.push_back(std::move(rec));
  }
  return records;
}

BooleanFunction reference_balanced_function(int n) {
  if (n == 3) {
    return BooleanFunction(3, 0x9A);
  }
  if (n == 4) {
    return BooleanFunction(4, 0x665A);
  }
  throw std::invalid_argument("reference balanced function defined for n = 3, 4");
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) {
    throw std::invalid_argument("linspace needs at least one point");
  }
  if (count == 1) {
    return {lo};
  }
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) {
    out[k] = lo + (hi - lo) * double(k) / double(count - 1);
  }
  return out;
}

SweepTable sweep_fig3a(const std::vector<double>& kappa_grid,
                       const std::vector<double>& delta_t_grid,
                       const BooleanFunction& f, int jobs) {
  check_grid(kappa_grid, "kappa");
  check_grid(delta_t_grid, "delta_t");
  if (f.n != 3) {
    throw std::invalid_argument("this sweep drives a 3-qubit function");
  }
  for (double k : kappa_grid) {
    if (!(k >= 0.0) || k >= 4.0) {
      throw std::invalid_argument("kappa/omega1 must lie in [0, 4)");
    }
  }
  SweepTable table;
  table.axis_names = {"kappa_ratio", "delta_t"};
  table.metric_names = kMetricNames;
  const Matrix ideal = ideal_circuit(f);
  const int nd = static_cast<int>(delta_t_grid.size());
  table.rows = fill_rows(
      static_cast<int>(kappa_grid.size()) * nd, jobs, [&](int row) {
        const double kappa = kappa_grid[row / nd];
        const double delta_t = delta_t_grid[row % nd];
        ModelParams params;
        params.couplings = {1.0, 10.0, 10.0};
        params.kappa = kappa;
        params.timing_deviation = delta_t;
        SweepRow r;
        r.axes = {kappa, delta_t};
        r.metrics = metrics_for(ideal, physical_circuit(f, params));
        return r;
      });
  return table;
}

SweepTable sweep_fig3b(const std::vector<double>& eta_grid,
                       const std::vector<double>& kappa_grid, int jobs) {
  check_grid(eta_grid, "eta");
  check_grid(kappa_grid, "kappa");
  for (double eta : eta_grid) {
    if (!(eta > 0.0) || !(eta < 1.0)) {
      throw std::invalid_argument("eta must lie in (0, 1)");
    }
  }
  for (double k : kappa_grid) {
    if (!(k >= 0.0) || k >= 4.0) {
      throw std::invalid_argument("kappa/omega1 must lie in [0, 4)");
    }
  }
  const BooleanFunction f = reference_balanced_function(4);
  SweepTable table;
  table.axis_names = {"eta", "kappa_ratio"};
  table.metric_names = kMetricNames;
  const Matrix ideal = ideal_circuit(f);
  const int nk = static_cast<int>(kappa_grid.size());
  table.rows = fill_rows(
      static_cast<int>(eta_grid.size()) * nk, jobs, [&](int row) {
        const double eta = eta_grid[row / nk];
        const double kappa_ratio = kappa_grid[row % nk];
        ModelParams params;
        // omega = 1 sets the scale; omega1 = eta, kappa quoted vs omega1
        params.couplings = {eta, 1.0, 1.0, 1.0};
        params.kappa = kappa_ratio * eta;
        SweepRow r;
        r.axes = {eta, kappa_ratio};
        r.metrics = metrics_for(ideal, physical_circuit(f, params));
        return r;
      });
  return table;
}

SweepTable sweep_fig4(const std::vector<double>& delta_grid,
                      const std::vector<double>& kappa_set,
                      const std::vector<DipoleVariant>& variants, int jobs) {
  check_grid(delta_grid, "delta");
  check_grid(kappa_set, "kappa");
  if (variants.empty()) {
    throw std::invalid_argument("at least one dipole variant is required");
  }
  for (double d : delta_grid) {
    if (!(d >= 0.0)) {
      throw std::invalid_argument("delta/omega1 must be >= 0");
    }
  }
  for (double k : kappa_set) {
    if (!(k >= 0.0) || k >= 4.0) {
      throw std::invalid_argument("kappa/omega1 must lie in [0, 4)");
    }
  }
  const BooleanFunction f = reference_balanced_function(3);
  SweepTable table;
  table.axis_names = {"delta_ratio", "kappa_ratio"};
  table.tag_name = "variant";
  table.metric_names = kMetricNames;
  const Matrix ideal = ideal_circuit(f);
  const int nk = static_cast<int>(kappa_set.size());
  const int nd = static_cast<int>(delta_grid.size());
  table.rows = fill_rows(
      static_cast<int>(variants.size()) * nk * nd, jobs, [&](int row) {
        const DipoleVariant variant = variants[row / (nk * nd)];
        const double kappa = kappa_set[(row / nd) % nk];
        const double delta = delta_grid[row % nd];
        ModelParams params;
        params.couplings = {1.0, 10.0, 10.0};
        params.kappa = kappa;
        params.dipole_delta = delta;
        params.dipole_variant = variant;
        SweepRow r;
        r.axes = {delta, kappa};
        r.tag = variant_name(variant);
        r.metrics = metrics_for(ideal, physical_circuit(f, params));
        return r;
      });
  return table;
}

FeasibilityReport feasibility(double omega0, double omega1, double kappa,
                              double lifetime, std::pair<int, int> n_range) {
  if (!(omega0 > 0.0) || !(omega1 > 0.0)) {
    throw std::invalid_argument("omega0 and omega1 must be > 0");
  }
  if (!(kappa >= 0.0)) {
    throw std::invalid_argument("kappa must be >= 0");
  }
  if (!(lifetime > 0.0)) {
    throw std::invalid_argument("lifetime must be > 0");
  }
  if (n_range.first < 2 || n_range.second < n_range.first) {
    throw std::invalid_argument("n_range must satisfy 2 <= first <= second");
  }

  FeasibilityReport rep;
  rep.omega0 = omega0;
  rep.omega1 = omega1;
  rep.kappa = kappa;
  rep.lifetime = lifetime;
  rep.t_gate = gate_time(omega1, kappa);
  rep.cavity_decay_time = kappa > 0.0
                              ? 2.0 * M_PI / kappa
                              : std::numeric_limits<double>::infinity();
  rep.n_range = n_range;
  for (int n = n_range.first; n <= n_range.second; ++n) {
    rep.runtime_n.emplace_back(n, std::ldexp(rep.t_gate, n - 1));
  }

  // largest N with kappa <= omega1 / 2^(N-2); open-ended when kappa = 0
  rep.max_n_capped = false;
  if (kappa == 0.0) {
    rep.max_n = n_range.second;
    rep.max_n_capped = true;
  } else {
    int n = 0;
    while (n < 64 && kappa <= std::ldexp(omega1, -(n - 1))) {
      ++n;
    }
    rep.max_n = n;
  }

  // largest N whose full run fits in the atomic lifetime
  rep.max_n_lifetime_capped = false;
  if (rep.t_gate > lifetime) {
    rep.max_n_lifetime = 0;
  } else {
    int n = 1;
    while (n < 64 && std::ldexp(rep.t_gate, n) <= lifetime) {
      ++n;
    }
    rep.max_n_lifetime = n;
    if (n >= 64) {
      rep.max_n_lifetime_capped = true;
    }
  }

  rep.reference_max_n = 9;
  rep.matches_reference = rep.max_n == rep.reference_max_n;

  rep.positions_n = n_range.second;
  rep.atom_positions = atom_positions(rep.positions_n, omega1 / omega0);
  rep.atom_couplings.reserve(rep.atom_positions.size());
  for (double z : rep.atom_positions) {
    rep.atom_couplings.push_back(coupling_from_position(z, 1.0, 1.0));
  }
  return rep;
}

nlohmann::ordered_json to_json(const FeasibilityReport& rep) {
  nlohmann::ordered_json j;
  j["omega0_rad_s"] = rep.omega0;
  j["omega1_rad_s"] = rep.omega1;
  j["kappa_rad_s"] = rep.kappa;
  j["lifetime_s"] = rep.lifetime;
  j["t_gate_s"] = rep.t_gate;
  if (std::isfinite(rep.cavity_decay_time)) {
    j["cavity_decay_time_s"] = rep.cavity_decay_time;
  } else {
    j["cavity_decay_time_s"] = nullptr;
  }
  nlohmann::ordered_json runtimes = nlohmann::ordered_json::array();
  for (const auto& [n, t] : rep.runtime_n) {
    runtimes.push_back({{"n", n}, {"runtime_s", t}});
  }
  j["runtime_n"] = std::move(runtimes);
  j["max_n"] = rep.max_n;
  j["max_n_capped"] = rep.max_n_capped;
  j["max_n_lifetime"] = rep.max_n_lifetime;
  j["max_n_lifetime_capped"] = rep.max_n_lifetime_capped;
  j["reference_max_n"] = rep.reference_max_n;
  j["matches_reference"] = rep.matches_reference;
  if (!rep.matches_reference) {
    j["note"] = "computed decay bound max_n = " + std::to_string(rep.max_n) +
                " differs from the reference estimate " +
                std::to_string(rep.reference_max_n) +
                "; the lifetime bound gives max_n_lifetime = " +
                std::to_string(rep.max_n_lifetime);
  }
  j["positions_n"] = rep.positions_n;
  j["atom_positions_lambda0"] = rep.atom_positions;
  j["atom_couplings_omega0"] = rep.atom_couplings;
  return j;
}

double coupling_from_position(double z, double lambda0, double omega0,
                              double r, double w) {
  if (!(lambda0 > 0.0)) {
    throw std::invalid_argument("lambda0 must be > 0");
  }
  if (!(w > 0.0)) {
    throw std::invalid_argument("waist must be > 0");
  }
  const double radial = std::isinf(w) ? 1.0 : std::exp(-(r * r) / (w * w));
  return omega0 * std::cos(2.0 * M_PI * z / lambda0) * radial;
}

double position_for_ratio(double ratio, double lambda0) {
  if (!(lambda0 > 0.0)) {
    throw std::invalid_argument("lambda0 must be > 0");
  }
  if (!(ratio >= -1.0) || !(ratio <= 1.0)) {
    throw std::domain_error("coupling ratio must lie in [-1, 1]");
  }
  return lambda0 / (2.0 * M_PI) * std::acos(ratio);
}

std::vector<double> atom_positions(int n, double ratio) {
  if (n < 1) {
    throw std::invalid_argument("n must be >= 1");
  }
  std::vector<double> z(n);
  // atom 1 rides offset from the antinode at -(n/2) lambda0 to hit the
  // ratio; the rest sit on successive antinodes
  z[0] = -0.5 * n + position_for_ratio(ratio, 1.0);
  for (int j = 2; j <= n; ++j) {
    z[j - 1] = (j - 1) - 0.5 * n;
  }
  return z;
}

}  // namespace cavitydj
