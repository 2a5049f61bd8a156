#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "enso/bifurcation.hpp"
#include "enso/integrate.hpp"
#include "enso/io.hpp"
#include "enso/manifold.hpp"
#include "enso/mmo.hpp"
#include "enso/model.hpp"
#include "enso/numerics.hpp"
#include "enso/params.hpp"
#include "enso/reduced_flow.hpp"
#include "enso/singular_cycle.hpp"
#include "enso/state.hpp"

namespace {

using enso::DimensionlessParams;
using enso::NumericalError;
using enso::PhysicalParams;
using enso::Trajectory;
using enso::Vec3;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Shared parameter plumbing
// ---------------------------------------------------------------------------

struct ParamSource {
  std::string preset;  ///< preset name or key=value file path
  std::string params;  ///< inline "key=value,..." string

  DimensionlessParams resolve() const {
    if (!preset.empty()) {
      if (enso::is_preset(preset)) return enso::preset_params(preset);
      if (std::filesystem::exists(preset)) return enso::load_params_file(preset);
      throw std::invalid_argument("unknown preset (and no such file): " + preset);
    }
    if (!params.empty()) return enso::parse_params(params);
    return DimensionlessParams{};  // fig4-style defaults
  }

  void attach(CLI::App* app) {
    auto* p = app->add_option("--preset", preset,
                              "Preset name (table1, fig2a/b/c, fig4, fig6, "
                              "fig7) or a key=value parameter file");
    auto* q = app->add_option("--params", params,
                              "Inline parameters, e.g. "
                              "delta=0.1,rho=0.5,a=2.55,c=3.75,k=0.34");
    p->excludes(q);
    q->excludes(p);
  }
};

PhysicalParams parse_phys_params(const std::string& spec) {
  PhysicalParams p;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("physical params: expected key=value, got '" +
                                  item + "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("physical params: bad number '" + val + "'");
    }
    if (used != val.size()) {
      throw std::invalid_argument("physical params: bad number '" + val + "'");
    }
    if (key == "T_r0") p.T_r0 = v;
    else if (key == "T_r") p.T_r = v;
    else if (key == "alpha") p.alpha = v;
    else if (key == "r") p.r = v;
    else if (key == "H") p.H = v;
    else if (key == "z0") p.z0 = v;
    else if (key == "h_star") p.h_star = v;
    else if (key == "mu") p.mu = v;
    else if (key == "epsilon") p.epsilon = v;
    else if (key == "zeta") p.zeta = v;
    else if (key == "bL_over_beta") p.bL_over_beta = v;
    else throw std::invalid_argument("physical params: unknown key '" + key + "'");
  }
  p.validate();
  return p;
}

std::vector<double> parse_double_list(const std::string& spec) {
  std::vector<double> values;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number in list: '" + item + "'");
    }
    if (used != item.size()) {
      throw std::invalid_argument("bad number in list: '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw std::invalid_argument("empty numeric list");
  return values;
}

json params_json(const DimensionlessParams& q) {
  return json{{"delta", q.delta}, {"rho", q.rho}, {"a", q.a},
              {"c", q.c},         {"k", q.k}};
}

json phys_json(const PhysicalParams& p) {
  return json{{"T_r0", p.T_r0},       {"T_r", p.T_r},
              {"alpha", p.alpha},     {"r", p.r},
              {"H", p.H},             {"z0", p.z0},
              {"h_star", p.h_star},   {"mu", p.mu},
              {"epsilon", p.epsilon}, {"zeta", p.zeta},
              {"bL_over_beta", p.bL_over_beta}};
}

json complex_json(const std::complex<double>& v) {
  return json{{"re", v.real()}, {"im", v.imag()}};
}

void write_manifest(const std::string& out, const std::string& command,
                    const std::string& preset, const json& params,
                    const json& options,
                    const std::vector<std::string>& outputs,
                    const json& results = json::object()) {
  json m;
  m["command"] = command;
  m["preset"] = preset.empty() ? json() : json(preset);
  m["params"] = params;
  m["options"] = options;
  m["outputs"] = outputs;
  if (!results.empty()) m["results"] = results;
  m["version"] = enso::kToolVersion;
  enso::write_text_file(enso::manifest_path_for(out), m.dump(2) + "\n");
}

void emit_json(const std::string& out, const json& j) {
  const std::string text = j.dump(2) + "\n";
  enso::write_text_file(out, text);
  std::cout << text;
}

// Trajectory from a dimensionless t,x,y,z CSV (as written by simulate).
Trajectory<3> traj_from_csv(const enso::CsvTable& csv) {
  const std::vector<std::string> expected = {"t", "x", "y", "z"};
  if (csv.columns != expected) {
    throw std::invalid_argument(
        "expected a dimensionless trajectory CSV with columns t,x,y,z");
  }
  Trajectory<3> traj;
  traj.times.reserve(csv.rows.size());
  traj.states.reserve(csv.rows.size());
  for (const auto& row : csv.rows) {
    traj.times.push_back(row[0]);
    traj.states.push_back({row[1], row[2], row[3]});
  }
  return traj;
}

// Max-step policy: tiny δ needs capped steps to resolve the small loops.
double capped_max_step(double requested, double delta) {
  if (delta <= 0.005) {
    const double cap = delta / 2.0;
    return requested > 0.0 ? std::min(requested, cap) : cap;
  }
  return requested;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOpts {
  ParamSource src;
  std::vector<double> tspan{0.0, 400.0};
  std::vector<double> ic{-4.0, -1.0, 0.5};
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = 0.0;
  double transient = 0.0;
  double sample_dt = 0.0;
  bool dimensional = false;
  std::string out = "trajectory.csv";
};

int run_simulate(const SimulateOpts& o) {
  const DimensionlessParams q = o.src.resolve();
  q.validate();

  enso::IntegratorConfig cfg;
  cfg.rel_tol = o.rtol;
  cfg.abs_tol = o.atol;
  cfg.t_begin = o.tspan[0];
  cfg.t_end = o.tspan[1];
  cfg.max_step = capped_max_step(o.max_step, q.delta);
  cfg.transient_discard = o.transient;
  cfg.sample_dt = o.sample_dt;

  auto rhs = [&q](double, const Vec3& u) { return enso::fast_rhs(u, q); };
  const Vec3 u0 = {o.ic[0], o.ic[1], o.ic[2]};
  const Trajectory<3> traj = enso::integrate<3>(rhs, u0, cfg);

  enso::CsvTable table;
  if (o.dimensional) {
    const auto nd = enso::nondimensionalize(PhysicalParams{});
    table.units = "t_days in days; T1,T2 in degC; h1 in m";
    table.columns = {"t_days", "T1", "T2", "h1"};
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const enso::DimlessState u{traj.states[i][0], traj.states[i][1],
                                 traj.states[i][2]};
      const enso::PhysState s =
          enso::from_anomaly(enso::from_dimensionless(u, nd.scales),
                             PhysicalParams{});
      table.rows.push_back({enso::days_from_tau(traj.times[i], nd.scales),
                            s.T1, s.T2, s.h1});
    }
  } else {
    table.units = "t dimensionless (fast time); x,y,z dimensionless";
    table.columns = {"t", "x", "y", "z"};
    for (std::size_t i = 0; i < traj.size(); ++i) {
      table.rows.push_back({traj.times[i], traj.states[i][0],
                            traj.states[i][1], traj.states[i][2]});
    }
  }
  enso::write_csv(o.out, table);

  const json options = {
      {"tspan", o.tspan},       {"ic", o.ic},
      {"rtol", o.rtol},         {"atol", o.atol},
      {"max_step", o.max_step}, {"transient", o.transient},
      {"sample_dt", o.sample_dt}, {"dimensional", o.dimensional}};
  write_manifest(o.out, "simulate", o.src.preset, params_json(q), options,
                 {o.out},
                 {{"samples", traj.size()},
                  {"steps_accepted", traj.steps_accepted},
                  {"steps_rejected", traj.steps_rejected},
                  {"status", to_string(traj.status)}});

  if (!traj.ok()) {
    std::cerr << "integration aborted: " << traj.diagnostic
              << " (partial trajectory written)\n";
    return 3;
  }
  std::cout << "wrote " << o.out << " (" << traj.size() << " samples)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// nondim
// ---------------------------------------------------------------------------

struct NondimOpts {
  std::string preset = "table1";
  std::string phys;
  std::string out = "nondim.json";
};

int run_nondim(const NondimOpts& o) {
  PhysicalParams p;
  if (!o.phys.empty()) {
    p = parse_phys_params(o.phys);
  } else if (o.preset != "table1") {
    throw std::invalid_argument(
        "nondim starts from physical parameters; only preset 'table1' (the "
        "default physical set) applies, or use --phys key=value,...");
  }
  const auto nd = enso::nondimensionalize(p);

  json j;
  j["physical"] = phys_json(p);
  j["params"] = params_json(nd.params);
  j["scales"] = {{"S0", nd.scales.S0},
                 {"T0", nd.scales.T0},
                 {"h0", nd.scales.h0},
                 {"t0_days", nd.scales.t0_days}};
  emit_json(o.out, j);
  write_manifest(o.out, "nondim", o.preset, phys_json(p),
                 {{"phys", o.phys}}, {o.out});
  return 0;
}

// ---------------------------------------------------------------------------
// manifold (stability raster)
// ---------------------------------------------------------------------------

struct ManifoldOpts {
  ParamSource src;
  std::string sheet = "ms";
  std::vector<double> x_range{-8.0, 2.0};
  std::vector<double> z_range{-2.0, 6.0};
  int nx = 161;
  int nz = 161;
  std::string out = "manifold_grid.csv";
};

int run_manifold(const ManifoldOpts& o) {
  const DimensionlessParams q = o.src.resolve();
  q.validate();
  if (o.sheet != "ms" && o.sheet != "m0") {
    throw std::invalid_argument("--sheet must be ms or m0");
  }
  if (o.nx < 2 || o.nz < 2) {
    throw std::invalid_argument("grid needs at least 2 points per axis");
  }

  enso::CsvTable table;
  table.units = (o.sheet == "ms")
                    ? "x,z dimensionless; stability -1 attracting, 0 "
                      "degenerate, +1 repelling"
                    : "y,z dimensionless; stability -1 attracting, 0 "
                      "degenerate, +1 repelling";
  table.columns = {o.sheet == "ms" ? "x" : "y", "z", "stability"};
  for (int i = 0; i < o.nx; ++i) {
    const double u =
        o.x_range[0] + (o.x_range[1] - o.x_range[0]) * i / (o.nx - 1);
    for (int jz = 0; jz < o.nz; ++jz) {
      const double z =
          o.z_range[0] + (o.z_range[1] - o.z_range[0]) * jz / (o.nz - 1);
      const enso::SheetStability s = (o.sheet == "ms")
                                         ? enso::stability_ms(u, z, q)
                                         : enso::stability_m0(u, z, q);
      const double code = s == enso::SheetStability::Attracting   ? -1.0
                          : s == enso::SheetStability::Repelling ? 1.0
                                                                 : 0.0;
      table.rows.push_back({u, z, code});
    }
  }
  enso::write_csv(o.out, table);
  write_manifest(o.out, "manifold", o.src.preset, params_json(q),
                 {{"sheet", o.sheet},
                  {"x_range", o.x_range},
                  {"z_range", o.z_range},
                  {"nx", o.nx},
                  {"nz", o.nz}},
                 {o.out});
  std::cout << "wrote " << o.out << " (" << table.rows.size() << " grid points)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// folds
// ---------------------------------------------------------------------------

struct FoldsOpts {
  ParamSource src;
  double c_override = std::numeric_limits<double>::quiet_NaN();
  double branch_z = std::numeric_limits<double>::quiet_NaN();
  std::string out = "folds.json";
};

int run_folds(const FoldsOpts& o) {
  DimensionlessParams q = o.src.resolve();
  if (!std::isnan(o.c_override)) q.c = o.c_override;
  q.validate();

  const enso::FoldCurves folds = enso::fold_curves(q);
  json j;
  j["c"] = q.c;
  j["has_folds"] = folds.has_folds;
  if (folds.has_folds) {
    j["eta"] = folds.eta;
    j["defining_residual"] = std::abs(q.c * enso::sech2_safe(folds.eta) - 1.0);
    j["eta_bisection"] = enso::eta_bisection(q.c);
    j["curves"] = {{{"name", "L-"}, {"x_plus_z", -folds.eta}},
                   {{"name", "L+"}, {"x_plus_z", folds.eta}}};
  } else {
    j["curves"] = json::array();
    j["note"] = "no folds: c <= 1 leaves the layer linearization one-signed";
  }
  if (!std::isnan(o.branch_z)) {
    const enso::BranchRoots roots = enso::branch_roots(o.branch_z, q);
    j["branch_roots"] = {{"z", o.branch_z},
                         {"roots", roots.roots},
                         {"residuals", roots.residuals},
                         {"ordering_case", roots.ordering_case}};
  }
  emit_json(o.out, j);
  write_manifest(o.out, "folds", o.src.preset, params_json(q),
                 {{"c", q.c},
                  {"branch_z", std::isnan(o.branch_z) ? json() : json(o.branch_z)}},
                 {o.out});
  return 0;
}

// ---------------------------------------------------------------------------
// singularities (folded singularities + reduced equilibria)
// ---------------------------------------------------------------------------

struct SingularitiesOpts {
  ParamSource src;
  std::string out = "singularities.json";
};

int run_singularities(const SingularitiesOpts& o) {
  const DimensionlessParams q = o.src.resolve();
  q.validate();

  json folded = json::array();
  for (const auto& f : enso::find_folded_singularities(q)) {
    folded.push_back({{"x", f.x},
                      {"z", f.z},
                      {"y", f.y},
                      {"side", f.side},
                      {"w", f.w},
                      {"mu_strong", complex_json(f.mu_strong)},
                      {"mu_weak", complex_json(f.mu_weak)},
                      {"kind", enso::to_string(f.kind)},
                      {"stable", f.stable},
                      {"residual", f.residual}});
  }
  json reduced = json::array();
  for (const auto& e : enso::find_reduced_equilibria(q)) {
    reduced.push_back({{"x", e.x},
                       {"z", e.z},
                       {"y", e.y},
                       {"mu1", complex_json(e.mu1)},
                       {"mu2", complex_json(e.mu2)},
                       {"kind", enso::to_string(e.kind)},
                       {"stable", e.stable},
                       {"time_factor", e.time_factor},
                       {"strip_side", e.strip_side}});
  }
  json j;
  j["folded_singularities"] = folded;
  j["reduced_equilibria"] = reduced;
  emit_json(o.out, j);
  write_manifest(o.out, "singularities", o.src.preset, params_json(q),
                 json::object(), {o.out});
  return 0;
}

// ---------------------------------------------------------------------------
// equilibria (full system)
// ---------------------------------------------------------------------------

struct EquilibriaOpts {
  ParamSource src;
  double delta_override = std::numeric_limits<double>::quiet_NaN();
  std::string out = "equilibria.json";
};

int run_equilibria(const EquilibriaOpts& o) {
  DimensionlessParams q = o.src.resolve();
  if (!std::isnan(o.delta_override)) q.delta = o.delta_override;
  q.validate();

  json list = json::array();
  for (const auto& eq : enso::full_equilibria(q)) {
    json fast = json::array(), slow = json::array();
    for (const auto& lam : eq.eig_fast) fast.push_back(complex_json(lam));
    for (const auto& lam : eq.eig_slow) slow.push_back(complex_json(lam));
    list.push_back({{"x", eq.state[0]},
                    {"y", eq.state[1]},
                    {"z", eq.state[2]},
                    {"trivial", eq.trivial},
                    {"saddle_focus", eq.saddle_focus},
                    {"eig_fast", fast},
                    {"eig_slow", slow},
                    {"char_residual", eq.char_residual}});
  }
  json j;
  j["equilibria"] = list;
  j["delta"] = q.delta;
  emit_json(o.out, j);
  write_manifest(o.out, "equilibria", o.src.preset, params_json(q),
                 {{"delta", q.delta}}, {o.out});
  return 0;
}

// ---------------------------------------------------------------------------
// scan-fsn2
// ---------------------------------------------------------------------------

struct ScanOpts {
  ParamSource src;
  double a_lo = 2.0;
  double a_hi = 3.5;
  int n = 401;
  std::string out = "fsn2_scan.csv";
};

int run_scan_fsn2(const ScanOpts& o) {
  const DimensionlessParams q = o.src.resolve();
  q.validate();
  const enso::Fsn2Scan scan = enso::fsn2_scan(q, o.a_lo, o.a_hi, o.n);
  enso::write_text_file(o.out, enso::fsn2_scan_csv(scan));

  json results;
  results["a_star"] = scan.a_star ? json(*scan.a_star) : json();
  results["collision_residual"] = scan.collision_residual;
  results["a_star_closed_form"] = enso::fsn2_closed_form(q);
  write_manifest(o.out, "scan-fsn2", o.src.preset, params_json(q),
                 {{"a_lo", o.a_lo}, {"a_hi", o.a_hi}, {"n", o.n}}, {o.out},
                 results);
  if (scan.a_star) {
    std::cout << "a_star = " << enso::g17(*scan.a_star)
              << " (collision residual " << enso::g17(scan.collision_residual)
              << ")\n";
  } else {
    std::cout << "no transcritical collision in [" << o.a_lo << ", " << o.a_hi
              << "]\n";
  }
  std::cout << "wrote " << o.out << " (" << scan.points.size() << " rows)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// hopf
// ---------------------------------------------------------------------------

struct HopfOpts {
  ParamSource src;
  double delta = 0.1;
  double a_lo = 2.0;
  double a_hi = 3.5;
  int n = 401;
  double a_offset = 0.0;
  std::string im_deltas;  ///< e.g. "0.1,0.05,0.025,0.0125,0.00625"
  std::string out = "hopf.json";
};

int run_hopf(const HopfOpts& o) {
  const DimensionlessParams q = o.src.resolve();
  q.validate();
  const enso::HopfResult hopf =
      enso::hopf_locate(q, o.delta, o.a_lo, o.a_hi, o.n);

  json j;
  j["delta"] = o.delta;
  j["found"] = hopf.found;
  if (hopf.found) {
    j["a_H"] = hopf.a_H;
    j["re_residual"] = hopf.re_residual;
  }
  j["a_star_closed_form"] = enso::fsn2_closed_form(q);
  if (!o.im_deltas.empty()) {
    const auto deltas = parse_double_list(o.im_deltas);
    const enso::ImScalingResult im = enso::im_scaling(q, o.a_offset, deltas);
    j["im_scaling"] = {{"deltas", im.deltas},
                       {"im_values", im.im_values},
                       {"slope", im.slope},
                       {"a_offset", o.a_offset}};
  }
  emit_json(o.out, j);
  write_manifest(o.out, "hopf", o.src.preset, params_json(q),
                 {{"delta", o.delta},
                  {"a_lo", o.a_lo},
                  {"a_hi", o.a_hi},
                  {"n", o.n},
                  {"a_offset", o.a_offset},
                  {"im_deltas", o.im_deltas}},
                 {o.out});
  return 0;
}

// ---------------------------------------------------------------------------
// signature
// ---------------------------------------------------------------------------

struct SignatureOpts {
  std::string input;
  double transient_frac = 0.3;
  double prominence_floor = 1e-4;
  double lao_threshold = -2.0;
  double trough_threshold = -4.0;
  double t0_days = 0.0;
  std::string out = "signature.json";
  std::string peaks_out;
};

int run_signature(const SignatureOpts& o) {
  if (o.transient_frac < 0.0 || o.transient_frac >= 1.0) {
    throw std::invalid_argument("--transient-frac must lie in [0, 1)");
  }
  Trajectory<3> traj = traj_from_csv(enso::read_csv(o.input));
  if (traj.size() < 3) {
    throw std::invalid_argument("trajectory too short for peak analysis");
  }
  if (o.transient_frac > 0.0) {
    const double t_keep =
        traj.times.front() +
        o.transient_frac * (traj.times.back() - traj.times.front());
    std::size_t first = 0;
    while (first < traj.size() && traj.times[first] < t_keep) ++first;
    traj.times.erase(traj.times.begin(),
                     traj.times.begin() + static_cast<std::ptrdiff_t>(first));
    traj.states.erase(traj.states.begin(),
                      traj.states.begin() + static_cast<std::ptrdiff_t>(first));
  }

  enso::PeakOptions popts;
  popts.prominence_floor = o.prominence_floor;
  popts.lao_threshold = o.lao_threshold;
  popts.trough_threshold = o.trough_threshold;

  const enso::MmoSignature sig = enso::signature(traj, popts);
  std::optional<enso::Scales> scales;
  if (o.t0_days > 0.0) scales = enso::Scales{0.0, 0.0, 0.0, o.t0_days};
  const enso::BurstStats stats = enso::burst_stats(traj, popts, scales);
  const auto profiles = enso::sao_profiles(traj, popts);

  json pairs = json::array();
  for (const auto& pr : sig.pairs)
    pairs.push_back({pr.large_count, pr.small_count});
  json shapes = json::array();
  for (const auto& prof : profiles) shapes.push_back(to_string(prof.shape));

  json j;
  j["signature"] = {{"text", sig.text},
                    {"pairs", pairs},
                    {"degenerate", sig.degenerate},
                    {"note", sig.note},
                    {"peak_count", sig.peaks.size()}};
  j["sao_shapes"] = shapes;
  json burst = {{"count", stats.lao_times.size()},
                {"mean_interval", stats.mean_interval},
                {"min_interval", stats.min_interval},
                {"max_interval", stats.max_interval},
                {"trough_values", stats.trough_values}};
  if (stats.mean_interval_days) {
    burst["mean_interval_days"] = *stats.mean_interval_days;
    burst["mean_interval_years"] = *stats.mean_interval_days / 365.25;
  }
  j["burst"] = burst;
  j["thresholds"] = {{"prominence_floor", o.prominence_floor},
                     {"lao_threshold", o.lao_threshold},
                     {"trough_threshold", o.trough_threshold}};
  j["transient_frac"] = o.transient_frac;
  emit_json(o.out, j);

  std::vector<std::string> outputs = {o.out};
  if (!o.peaks_out.empty()) {
    enso::CsvTable table;
    table.units = "t dimensionless; value,prominence dimensionless; "
                  "large 1 if burst peak";
    table.columns = {"index", "t", "value", "prominence", "large"};
    for (const auto& p : sig.peaks) {
      table.rows.push_back({static_cast<double>(p.index), p.t, p.value,
                            p.prominence, p.large ? 1.0 : 0.0});
    }
    enso::write_csv(o.peaks_out, table);
    outputs.push_back(o.peaks_out);
  }
  write_manifest(o.out, "signature", "", json::object(),
                 {{"input", o.input},
                  {"transient_frac", o.transient_frac},
                  {"prominence_floor", o.prominence_floor},
                  {"lao_threshold", o.lao_threshold},
                  {"trough_threshold", o.trough_threshold},
                  {"t0_days", o.t0_days}},
                 outputs);
  return 0;
}

// ---------------------------------------------------------------------------
// singular-cycle
// ---------------------------------------------------------------------------

struct CycleOpts {
  ParamSource src;
  double z_dep = std::numeric_limits<double>::quiet_NaN();
  std::string reference;  ///< trajectory CSV providing min z
  double span = 400.0;
  double rtol = 1e-8;
  double atol = 1e-10;
  std::string out = "cycle.csv";
};

void write_cycle_csv(const std::string& path, const enso::SingularCycle& cycle) {
  std::ostringstream out;
  out << "# units: x,y,z dimensionless; segment/kind are labels\n";
  out << "segment,kind,x,y,z\n";
  for (const auto& seg : cycle.segments) {
    for (const auto& p : seg.points) {
      out << seg.label << ',' << to_string(seg.kind) << ',' << enso::g17(p[0])
          << ',' << enso::g17(p[1]) << ',' << enso::g17(p[2]) << '\n';
    }
  }
  enso::write_text_file(path, out.str());
}

json cycle_results_json(const enso::SingularCycle& cycle) {
  json segs = json::array();
  for (const auto& seg : cycle.segments) {
    segs.push_back({{"label", seg.label},
                    {"kind", to_string(seg.kind)},
                    {"points", seg.points.size()},
                    {"start", seg.points.front()},
                    {"end", seg.points.back()}});
  }
  return json{{"segments", segs},
              {"closure_gap", cycle.closure_gap},
              {"z_dep", cycle.z_dep},
              {"y_dep", cycle.y_dep},
              {"f2_target", cycle.f2_target},
              {"fn", {{"x", cycle.fn.x}, {"z", cycle.fn.z}, {"y", cycle.fn.y}}},
              {"eq", {{"x", cycle.eq.x}, {"z", cycle.eq.z}, {"y", cycle.eq.y}}}};
}

enso::SingularCycle build_cycle_for_cli(const DimensionlessParams& q,
                                        const CycleOpts& o) {
  enso::CycleOptions copts;
  if (!std::isnan(o.z_dep)) {
    copts.z_dep = o.z_dep;
    return enso::build_singular_cycle(q, copts);
  }
  if (!o.reference.empty()) {
    const Trajectory<3> ref = traj_from_csv(enso::read_csv(o.reference));
    return enso::build_singular_cycle(q, ref, copts);
  }
  // Self-contained default: integrate a reference orbit, discard the leading
  // 30%, and take its minimum z as the departure height.
  enso::IntegratorConfig cfg;
  cfg.rel_tol = o.rtol;
  cfg.abs_tol = o.atol;
  cfg.t_begin = 0.0;
  cfg.t_end = o.span;
  cfg.max_step = capped_max_step(0.0, q.delta);
  cfg.transient_discard = 0.3 * o.span;
  auto rhs = [&q](double, const Vec3& u) { return enso::fast_rhs(u, q); };
  const Trajectory<3> ref = enso::integrate<3>(rhs, {-4.0, -1.0, 0.5}, cfg);
  if (!ref.ok()) {
    throw NumericalError("reference orbit failed: " + ref.diagnostic);
  }
  return enso::build_singular_cycle(q, ref, copts);
}

int run_singular_cycle(const CycleOpts& o) {
  const DimensionlessParams q = o.src.resolve();
  q.validate();
  const enso::SingularCycle cycle = build_cycle_for_cli(q, o);
  write_cycle_csv(o.out, cycle);
  write_manifest(o.out, "singular-cycle", o.src.preset, params_json(q),
                 {{"z_dep", std::isnan(o.z_dep) ? json() : json(o.z_dep)},
                  {"reference", o.reference},
                  {"span", o.span},
                  {"rtol", o.rtol},
                  {"atol", o.atol}},
                 {o.out}, cycle_results_json(cycle));
  std::cout << "wrote " << o.out << " (closure gap "
            << enso::g17(cycle.closure_gap) << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

struct CompareOpts {
  ParamSource src;
  std::string orbit;
  double z_dep = std::numeric_limits<double>::quiet_NaN();
  std::string out = "compare.json";
};

int run_compare(const CompareOpts& o) {
  const DimensionlessParams q = o.src.resolve();
  q.validate();
  const Trajectory<3> orbit = traj_from_csv(enso::read_csv(o.orbit));

  enso::CycleOptions copts;
  if (!std::isnan(o.z_dep)) copts.z_dep = o.z_dep;
  const enso::SingularCycle cycle =
      std::isnan(o.z_dep) ? enso::build_singular_cycle(q, orbit, copts)
                          : enso::build_singular_cycle(q, copts);
  const enso::CycleComparison cmp = enso::compare_cycle_to_orbit(cycle, orbit);

  json segs = json::array();
  for (const auto& s : cmp.segments) {
    segs.push_back({{"label", s.label}, {"max_distance", s.max_distance}});
  }
  json j;
  j["segments"] = segs;
  j["overall_max"] = cmp.overall_max;
  j["cycle"] = cycle_results_json(cycle);
  emit_json(o.out, j);
  write_manifest(o.out, "compare", o.src.preset, params_json(q),
                 {{"orbit", o.orbit},
                  {"z_dep", std::isnan(o.z_dep) ? json() : json(o.z_dep)}},
                 {o.out});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Fast-slow analysis toolkit for a three-variable recharge-oscillator "
      "model: simulation, critical-manifold geometry, reduced flows, "
      "bifurcation scans, and mixed-mode-oscillation signatures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", enso::kToolVersion);

  int rc = 0;

  SimulateOpts sim;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Integrate the dimensionless system and write a CSV");
  sim.src.attach(sim_cmd);
  sim_cmd->add_option("--tspan", sim.tspan, "Integration span (t0 t1)")
      ->expected(2);
  sim_cmd->add_option("--ic", sim.ic, "Initial condition (x y z)")->expected(3);
  sim_cmd->add_option("--rtol", sim.rtol, "Relative tolerance");
  sim_cmd->add_option("--atol", sim.atol, "Absolute tolerance");
  sim_cmd->add_option("--max-step", sim.max_step,
                      "Max step (0 = auto; capped at delta/2 for delta <= 0.005)");
  sim_cmd->add_option("--transient", sim.transient,
                      "Leading time span dropped from the output");
  sim_cmd->add_option("--sample-dt", sim.sample_dt,
                      "Uniform output sampling step (0 = accepted steps)");
  sim_cmd->add_flag("--dimensional", sim.dimensional,
                    "Write t_days,T1,T2,h1 using the default physical scales");
  sim_cmd->add_option("--out", sim.out, "Output CSV path");
  sim_cmd->callback([&] { rc = run_simulate(sim); });

  NondimOpts nondim;
  auto* nondim_cmd = app.add_subcommand(
      "nondim", "Nondimensionalize physical parameters and report scales");
  nondim_cmd->add_option("--preset", nondim.preset,
                         "Physical preset (only 'table1')");
  nondim_cmd->add_option("--phys", nondim.phys,
                         "Physical overrides, e.g. mu=0.0026,epsilon=0.11");
  nondim_cmd->add_option("--out", nondim.out, "Output JSON path");
  nondim_cmd->callback([&] { rc = run_nondim(nondim); });

  ManifoldOpts mani;
  auto* mani_cmd = app.add_subcommand(
      "manifold", "Rasterize critical-manifold stability over a grid");
  mani.src.attach(mani_cmd);
  mani_cmd->add_option("--sheet", mani.sheet, "Sheet: ms (x,z) or m0 (y,z)");
  mani_cmd->add_option("--x-range", mani.x_range,
                       "First-axis range (y-range for --sheet m0)")
      ->expected(2);
  mani_cmd->add_option("--z-range", mani.z_range, "z range")->expected(2);
  mani_cmd->add_option("--nx", mani.nx, "Grid points on the first axis");
  mani_cmd->add_option("--nz", mani.nz, "Grid points in z");
  mani_cmd->add_option("--out", mani.out, "Output CSV path");
  mani_cmd->callback([&] { rc = run_manifold(mani); });

  FoldsOpts folds;
  auto* folds_cmd =
      app.add_subcommand("folds", "Fold curves L± and optional branch roots");
  folds.src.attach(folds_cmd);
  folds_cmd->add_option("--c", folds.c_override, "Override the parameter c");
  folds_cmd->add_option("--branch-z", folds.branch_z,
                        "Also report layer rest points along this z");
  folds_cmd->add_option("--out", folds.out, "Output JSON path");
  folds_cmd->callback([&] { rc = run_folds(folds); });

  SingularitiesOpts sing;
  auto* sing_cmd = app.add_subcommand(
      "singularities",
      "Folded singularities and reduced-flow equilibria with classification");
  sing.src.attach(sing_cmd);
  sing_cmd->add_option("--out", sing.out, "Output JSON path");
  sing_cmd->callback([&] { rc = run_singularities(sing); });

  EquilibriaOpts equi;
  auto* equi_cmd = app.add_subcommand(
      "equilibria", "Full-system equilibria with fast/slow spectra");
  equi.src.attach(equi_cmd);
  equi_cmd->add_option("--delta", equi.delta_override, "Override delta");
  equi_cmd->add_option("--out", equi.out, "Output JSON path");
  equi_cmd->callback([&] { rc = run_equilibria(equi); });

  ScanOpts scan;
  auto* scan_cmd = app.add_subcommand(
      "scan-fsn2",
      "Scan a for the transcritical collision of the folded and ordinary "
      "singularities");
  scan.src.attach(scan_cmd);
  scan_cmd->add_option("--a-lo", scan.a_lo, "Scan start");
  scan_cmd->add_option("--a-hi", scan.a_hi, "Scan end");
  scan_cmd->add_option("--n", scan.n, "Grid points");
  scan_cmd->add_option("--out", scan.out, "Output CSV path");
  scan_cmd->callback([&] { rc = run_scan_fsn2(scan); });

  HopfOpts hopf;
  auto* hopf_cmd = app.add_subcommand(
      "hopf", "Locate the Hopf parameter a_H and optional Im-vs-delta scaling");
  hopf.src.attach(hopf_cmd);
  hopf_cmd->add_option("--delta", hopf.delta, "delta for the spectra");
  hopf_cmd->add_option("--a-lo", hopf.a_lo, "Search start");
  hopf_cmd->add_option("--a-hi", hopf.a_hi, "Search end");
  hopf_cmd->add_option("--n", hopf.n, "Pre-scan grid points");
  hopf_cmd->add_option("--a-offset", hopf.a_offset,
                       "a offset from the collision value for the Im scan");
  hopf_cmd->add_option("--im-deltas", hopf.im_deltas,
                       "Comma list of deltas for the Im-scaling fit");
  hopf_cmd->add_option("--out", hopf.out, "Output JSON path");
  hopf_cmd->callback([&] { rc = run_hopf(hopf); });

  SignatureOpts sigo;
  auto* sig_cmd = app.add_subcommand(
      "signature", "Extract the oscillation signature from a trajectory CSV");
  sig_cmd->add_option("input", sigo.input, "Trajectory CSV (t,x,y,z)")
      ->required();
  sig_cmd->add_option("--transient-frac", sigo.transient_frac,
                      "Leading fraction of the span to discard");
  sig_cmd->add_option("--prominence-floor", sigo.prominence_floor,
                      "Minimum peak prominence");
  sig_cmd->add_option("--lao-threshold", sigo.lao_threshold,
                      "Peak value above which a peak counts as a burst");
  sig_cmd->add_option("--trough-threshold", sigo.trough_threshold,
                      "Reference level for deep troughs (reported)");
  sig_cmd->add_option("--t0-days", sigo.t0_days,
                      "Days per dimensionless time unit (0 = skip conversion)");
  sig_cmd->add_option("--out", sigo.out, "Output JSON path");
  sig_cmd->add_option("--peaks-out", sigo.peaks_out,
                      "Optional CSV peak table path");
  sig_cmd->callback([&] { rc = run_signature(sigo); });

  CycleOpts cyc;
  auto* cyc_cmd = app.add_subcommand(
      "singular-cycle", "Construct the five-segment singular cycle");
  cyc.src.attach(cyc_cmd);
  cyc_cmd->add_option("--z-dep", cyc.z_dep,
                      "Departure z from the x=0 sheet (overrides reference)");
  cyc_cmd->add_option("--reference", cyc.reference,
                      "Reference trajectory CSV for the departure z");
  cyc_cmd->add_option("--span", cyc.span,
                      "Span of the self-generated reference orbit");
  cyc_cmd->add_option("--rtol", cyc.rtol, "Reference orbit relative tolerance");
  cyc_cmd->add_option("--atol", cyc.atol, "Reference orbit absolute tolerance");
  cyc_cmd->add_option("--out", cyc.out, "Output CSV path");
  cyc_cmd->callback([&] { rc = run_singular_cycle(cyc); });

  CompareOpts cmp;
  auto* cmp_cmd = app.add_subcommand(
      "compare", "Compare the singular cycle against an orbit CSV");
  cmp.src.attach(cmp_cmd);
  cmp_cmd->add_option("--orbit", cmp.orbit, "Post-transient orbit CSV")
      ->required();
  cmp_cmd->add_option("--z-dep", cmp.z_dep,
                      "Departure z (default: min z of the orbit)");
  cmp_cmd->add_option("--out", cmp.out, "Output JSON path");
  cmp_cmd->callback([&] { rc = run_compare(cmp); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
