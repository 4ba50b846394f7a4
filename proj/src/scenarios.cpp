// Copyright 2026 The Somrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "somrep/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace somrep::scenarios {

using config::Config;
using config::TableWriter;
using entgen::LinkParams;
using spinmech::EffectiveRates;

namespace {

const std::map<std::string, std::string> kNodeDefaults = {
    // Effective spin-cavity rates; frequencies in cycles/s are converted
    // to angular rates, _rel keys are fractions of kappa1.
    {"node.kappa1_hz", "20000"},
    {"node.omega_rel", "0.5"},
    {"node.kappa2_rel", "0.001"},
    {"node.gamma1_rel", "0.001"},
    {"node.gamma2_rel", "0.001"},
    {"node.gamma_s_rel", "0.01"},
};

std::map<std::string, std::string> merged(
    std::initializer_list<std::map<std::string, std::string>> parts) {
  std::map<std::string, std::string> out;
  for (const auto& p : parts) out.insert(p.begin(), p.end());
  return out;
}

const std::map<std::string, std::string> kEntgenDefaults = merged(
    {kNodeDefaults,
     {
         {"link.l0_km", "100"},
         {"link.l_att_km", "22"},
         {"link.eta_d", "1.0"},
         {"link.dark_rate_hz", "10"},
         {"entgen.model", "cavity"},  // cavity | emitter
         {"entgen.tf_kappa1_min", "2"},
         {"entgen.tf_kappa1_max", "20"},
         {"entgen.tf_points", "19"},
     }});

const std::map<std::string, std::string> kReadoutDefaults = {
    {"node.kappa1_hz", "20000"},
    {"node.omega_rel", "0.5"},
    {"node.gamma_s_rel", "0.01"},
    // Thermal cavity occupation at the readout operating point; sets
    // kappa2 and the matching spin flip-flop rates.
    {"readout.thermal_occupation", "0.014"},
    {"readout.period_s", "2e-5"},
    {"readout.gd_rel", "0.35"},
    {"readout.eta_list", "0.05,0.1,0.5"},
    {"readout.max_time_s", "4e-3"},
    {"readout.points", "50"},
    {"readout.dark_rate_hz", "0"},
    {"readout.cavity_levels", "4"},
    {"readout.emit", "curves"},  // curves | histogram
    {"readout.hist_eta", "0.3"},
    {"readout.hist_time_s", "2e-3"},
};

const std::map<std::string, std::string> kRepeaterDefaults = {
    {"repeater.p_emit", "0.9"},
    {"repeater.eta_d", "0.45"},
    {"repeater.l_att_km", "22"},
    {"repeater.gamma_n_hz", "1"},
    {"repeater.f_mp", "0.992"},
    {"repeater.f_nro", "0.999"},
    {"repeater.t_mp_s", "0"},
    {"repeater.t_sw_s", "0"},
    {"repeater.c_mps", "2e8"},
    {"repeater.use_regression_f", "false"},
    {"repeater.fgen_mode", "simulated"},  // simulated | fixed
    {"repeater.fgen_fixed", "0.95"},
    {"fgen.dark_rate_hz", "10"},
    {"fgen.tf_list", "4,6,8,10,12,14"},
    {"dt.rep_rate_hz", "1e10"},
    {"dt.detector_factor", "1.0"},
};

const std::map<std::string, std::string> kRatesDefaults = merged(
    {kNodeDefaults, kRepeaterDefaults,
     {
         {"rates.configs", "8:10,10:10,6:100,8:100"},
         {"rates.l_min_km", "100"},
         {"rates.l_max_km", "800"},
         {"rates.l_step_km", "100"},
     }});

const std::map<std::string, std::string> kSweepDefaults = merged(
    {kNodeDefaults, kRepeaterDefaults,
     {
         {"sweep.m_list", "4,6,8,10,12,14,16"},
         {"sweep.n_list", "1,10,100"},
         {"sweep.l_min_km", "100"},
         {"sweep.l_max_km", "800"},
         {"sweep.l_step_km", "50"},
     }});

const std::map<std::string, std::string> kValidateDefaults = merged(
    {kNodeDefaults,
     {
         {"link.l0_km", "100"},
         {"link.l_att_km", "22"},
         {"link.eta_d", "1.0"},
         {"link.dark_rate_hz", "10"},
         {"validate.mc_trials", "200000"},
     }});

std::vector<std::pair<int, int>> parse_m_n_pairs(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("repeater list entries must be m:N, got: " + item);
    out.emplace_back(std::stoi(item.substr(0, colon)),
                     std::stoi(item.substr(colon + 1)));
  }
  if (out.empty()) throw ConfigError("empty repeater list");
  return out;
}

std::vector<double> tf_grid_from(const Config& cfg) {
  const double lo = cfg.get_double("entgen.tf_kappa1_min");
  const double hi = cfg.get_double("entgen.tf_kappa1_max");
  const int n = cfg.get_int("entgen.tf_points");
  if (!(hi > lo) || n < 1) throw ConfigError("bad t_f grid");
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i)
    grid[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return grid;
}

}  // namespace

const std::map<std::string, std::string>& scenario_defaults(
    const std::string& scenario) {
  if (scenario == "entgen") return kEntgenDefaults;
  if (scenario == "readout") return kReadoutDefaults;
  if (scenario == "rates") return kRatesDefaults;
  if (scenario == "sweep") return kSweepDefaults;
  if (scenario == "validate") return kValidateDefaults;
  throw ConfigError("unknown scenario: " + scenario);
}

EffectiveRates node_rates_from(const Config& cfg) {
  const double kappa1 = kTwoPi * cfg.get_double("node.kappa1_hz");
  return spinmech::effective_rates_direct(
      cfg.get_double("node.omega_rel") * kappa1, kappa1,
      cfg.get_double("node.kappa2_rel") * kappa1,
      cfg.get_double("node.gamma1_rel") * kappa1,
      cfg.get_double("node.gamma2_rel") * kappa1,
      cfg.get_double("node.gamma_s_rel") * kappa1);
}

EffectiveRates readout_rates_from(const Config& cfg) {
  const double kappa1 = kTwoPi * cfg.get_double("node.kappa1_hz");
  const double occ = cfg.get_double("readout.thermal_occupation");
  if (!(occ >= 0.0 && occ < 0.5))
    throw PhysicsValidityError("thermal occupation must be in [0, 0.5)");
  const double kappa2 = occ / (1.0 + occ) * kappa1;
  // lambda = g and n_th >> 1: the spin flip-flop rates equal kappa2.
  return spinmech::effective_rates_direct(
      cfg.get_double("node.omega_rel") * kappa1, kappa1, kappa2, kappa2,
      kappa2, cfg.get_double("node.gamma_s_rel") * kappa1);
}

LinkParams link_from(const Config& cfg) {
  LinkParams link;
  link.l0_km = cfg.get_double("link.l0_km");
  link.l_att_km = cfg.get_double("link.l_att_km");
  link.eta_d = cfg.get_double("link.eta_d");
  link.dark_rate_hz = cfg.get_double("link.dark_rate_hz");
  link.validate();
  return link;
}

repeater::RepeaterConfig repeater_from(const Config& cfg) {
  repeater::RepeaterConfig rc;
  rc.p_emit = cfg.get_double("repeater.p_emit");
  rc.eta_d = cfg.get_double("repeater.eta_d");
  rc.l_att_km = cfg.get_double("repeater.l_att_km");
  rc.gamma_n_hz = cfg.get_double("repeater.gamma_n_hz");
  rc.f_mp = cfg.get_double("repeater.f_mp");
  rc.f_nro = cfg.get_double("repeater.f_nro");
  rc.t_mp_s = cfg.get_double("repeater.t_mp_s");
  rc.t_sw_s = cfg.get_double("repeater.t_sw_s");
  rc.c_mps = cfg.get_double("repeater.c_mps");
  rc.use_regression_f = cfg.get_bool("repeater.use_regression_f");
  return rc;
}

double simulated_f_gen(const EffectiveRates& rates, const LinkParams& link,
                       const std::vector<double>& tf_grid) {
  auto curve = entgen::herald_curve(rates, link, tf_grid,
                                    entgen::NodeKind::EffectiveCavity,
                                    Exec::Serial);
  return entgen::peak_fidelity(curve).f_gen;
}

namespace {

void emit(const TableWriter& table, const std::string& out_path,
          std::ostream& log) {
  if (out_path.empty())
    log << table.str();
  else
    table.write_file(out_path);
}

bool run_entgen(const Config& cfg, const RunOptions& opts, std::ostream& log) {
  const EffectiveRates rates = node_rates_from(cfg);
  const LinkParams link = link_from(cfg);
  const std::string model = cfg.get_string("entgen.model");
  entgen::NodeKind kind;
  if (model == "cavity")
    kind = entgen::NodeKind::EffectiveCavity;
  else if (model == "emitter")
    kind = entgen::NodeKind::IncoherentEmitter;
  else
    throw ConfigError("entgen.model must be cavity or emitter");

  auto curve =
      entgen::herald_curve(rates, link, tf_grid_from(cfg), kind, opts.exec);
  TableWriter table({"kappa1_tf", "tf_s", "eta_gen", "eta_gen_over_eta_t2",
                     "f_gen"},
                    opts.format);
  for (const auto& pt : curve)
    table.add_row(std::vector<double>{pt.kappa1_tf, pt.t_f, pt.eta_gen,
                                      pt.eta_gen_scaled, pt.f_gen});
  emit(table, opts.out_path, log);
  return true;
}

bool run_readout(const Config& cfg, const RunOptions& opts, std::ostream& log) {
  const EffectiveRates rates = readout_rates_from(cfg);
  const double period = cfg.get_double("readout.period_s");
  const double gd = cfg.get_double("readout.gd_rel") * rates.kappa1;
  const int cavity_levels = cfg.get_int("readout.cavity_levels");
  const double dark = cfg.get_double("readout.dark_rate_hz");

  const readout::Brightness pulsed = readout::pulse_brightness(rates, period);
  const readout::Brightness cw =
      readout::continuous_occupation(rates, gd, cavity_levels);

  const std::string emit_kind = cfg.get_string("readout.emit");
  if (emit_kind == "curves") {
    TableWriter table({"scheme", "eta", "time_s", "infidelity", "threshold"},
                      opts.format);
    for (double eta : cfg.get_list("readout.eta_list")) {
      readout::DriveScheme ps{readout::DriveKind::Periodic, 0.0, period, eta};
      auto curve = readout::infidelity_curve(
          rates, ps, pulsed, cfg.get_double("readout.max_time_s"),
          cfg.get_int("readout.points"), dark, opts.exec);
      for (const auto& pt : curve)
        table.add_row({"periodic", config::format_g9(eta),
                       config::format_g9(pt.time_s),
                       config::format_g9(pt.infidelity),
                       std::to_string(pt.threshold)});
      readout::DriveScheme cs{readout::DriveKind::Continuous, gd, 0.0, eta};
      curve = readout::infidelity_curve(rates, cs, cw,
                                        cfg.get_double("readout.max_time_s"),
                                        cfg.get_int("readout.points"), dark,
                                        opts.exec);
      for (const auto& pt : curve)
        table.add_row({"continuous", config::format_g9(eta),
                       config::format_g9(pt.time_s),
                       config::format_g9(pt.infidelity),
                       std::to_string(pt.threshold)});
    }
    emit(table, opts.out_path, log);
    return true;
  }
  if (emit_kind != "histogram")
    throw ConfigError("readout.emit must be curves or histogram");

  const double eta = cfg.get_double("readout.hist_eta");
  const double time = cfg.get_double("readout.hist_time_s");
  TableWriter table({"scheme", "n", "p_signal", "p_background"}, opts.format);
  {
    readout::CountingModel m;
    m.kind = readout::CountingModel::Binomial;
    m.trials = std::max(1, static_cast<int>(std::llround(time / period)));
    m.p_signal = eta * pulsed.bright;
    m.p_background = eta * pulsed.dark;
    m.dark_mean = dark * time;
    const auto ps = m.pmf(true);
    const auto pb = m.pmf(false);
    for (int n = 0; n <= m.trials; ++n)
      table.add_row({"periodic", std::to_string(n), config::format_g9(ps[n]),
                     config::format_g9(pb[n])});
  }
  {
    readout::CountingModel m;
    m.kind = readout::CountingModel::Poisson;
    m.lambda_signal = eta * rates.kappa1 * cw.bright * time;
    m.lambda_background = eta * rates.kappa1 * cw.dark * time;
    m.dark_mean = dark * time;
    const auto ps = m.pmf(true);
    const auto pb = m.pmf(false);
    for (std::size_t n = 0; n < ps.size(); ++n)
      table.add_row({"continuous", std::to_string(n), config::format_g9(ps[n]),
                     config::format_g9(pb[n])});
  }
  emit(table, opts.out_path, log);
  return true;
}

struct FgenMemo {
  const Config& cfg;
  EffectiveRates rates;
  bool simulated = false;
  double fixed = 1.0;
  double eta_d = 0.45;
  std::vector<double> tf_grid;
  std::map<double, double> cache;

  explicit FgenMemo(const Config& c) : cfg(c), rates(node_rates_from(c)) {
    simulated = cfg.get_string("repeater.fgen_mode") == "simulated";
    if (!simulated && cfg.get_string("repeater.fgen_mode") != "fixed")
      throw ConfigError("repeater.fgen_mode must be simulated or fixed");
    fixed = cfg.get_double("repeater.fgen_fixed");
    eta_d = cfg.get_double("repeater.eta_d");
    tf_grid = cfg.get_list("fgen.tf_list");
  }

  double operator()(double l0_km) {
    if (!simulated) return fixed;
    const double key = std::round(l0_km * 1e6) / 1e6;
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    LinkParams link;
    link.l0_km = l0_km;
    link.l_att_km = cfg.get_double("repeater.l_att_km");
    link.eta_d = eta_d;
    link.dark_rate_hz = cfg.get_double("fgen.dark_rate_hz");
    const double f = simulated_f_gen(rates, link, tf_grid);
    cache[key] = f;
    return f;
  }
};

bool run_rates(const Config& cfg, const RunOptions& opts, std::ostream& log) {
  const auto pairs = parse_m_n_pairs(cfg.get_string("rates.configs"));
  const double l_min = cfg.get_double("rates.l_min_km");
  const double l_max = cfg.get_double("rates.l_max_km");
  const double l_step = cfg.get_double("rates.l_step_km");
  const repeater::RepeaterConfig base = repeater_from(cfg);
  const double dt_rate = cfg.get_double("dt.rep_rate_hz");
  const double dt_det = cfg.get_double("dt.detector_factor");

  FgenMemo fgen(cfg);

  // Evaluate the per-link fidelities up front so the grid loop is a
  // cheap closed-form map.
  std::vector<double> unique_l0;
  for (const auto& [m, n] : pairs)
    for (double l = l_min; l <= l_max + 1e-9; l += l_step) {
      const double l0 = l / m;
      bool seen = false;
      for (double u : unique_l0) seen |= std::abs(u - l0) < 1e-9;
      if (!seen) unique_l0.push_back(l0);
    }
  std::vector<double> fvals(unique_l0.size());
  parallel_for(static_cast<std::int64_t>(unique_l0.size()), opts.exec,
               [&](std::int64_t i) { fvals[i] = fgen(unique_l0[i]); });
  for (std::size_t i = 0; i < unique_l0.size(); ++i)
    fgen.cache[std::round(unique_l0[i] * 1e6) / 1e6] = fvals[i];

  TableWriter table(
      {"L_km", "m", "N", "rate_hz", "fidelity", "p0", "crossover_flag"},
      opts.format);
  for (const auto& [m, n] : pairs)
    for (double l = l_min; l <= l_max + 1e-9; l += l_step) {
      repeater::RepeaterConfig rc = base;
      rc.m = m;
      rc.channels = n;
      rc.total_km = l;
      rc.f_gen = fgen(l / m);
      const double t = repeater::distribution_time(rc);
      const double rate = 1.0 / t;
      const bool beats =
          rate >= repeater::rate_direct_transmission(l, dt_rate,
                                                     base.l_att_km, dt_det);
      table.add_row({config::format_g9(l), std::to_string(m),
                     std::to_string(n), config::format_g9(rate),
                     config::format_g9(repeater::overall_fidelity(rc, t)),
                     config::format_g9(rc.p0()), beats ? "1" : "0"});
    }
  emit(table, opts.out_path, log);
  return true;
}

bool run_sweep(const Config& cfg, const RunOptions& opts, std::ostream& log) {
  const repeater::RepeaterConfig base = repeater_from(cfg);
  FgenMemo fgen(cfg);
  auto result = repeater::sweep(
      cfg.get_int_list("sweep.m_list"), cfg.get_int_list("sweep.n_list"),
      cfg.get_double("sweep.l_min_km"), cfg.get_double("sweep.l_max_km"),
      cfg.get_double("sweep.l_step_km"), base,
      [&](double l0) { return fgen(l0); }, cfg.get_double("dt.rep_rate_hz"),
      cfg.get_double("dt.detector_factor"), opts.exec);

  TableWriter table(
      {"L_km", "m", "N", "rate_hz", "fidelity", "p0", "crossover_flag"},
      opts.format);
  for (const auto& pt : result.points)
    table.add_row({config::format_g9(pt.l_km), std::to_string(pt.m),
                   std::to_string(pt.channels), config::format_g9(pt.rate_hz),
                   config::format_g9(pt.fidelity), config::format_g9(pt.p0),
                   pt.beats_dt ? "1" : "0"});

  // Band summary: the argmax-fidelity link count per distance range.
  std::ostringstream bands;
  bands << "[";
  for (std::size_t i = 0; i < result.bands.size(); ++i) {
    const auto& b = result.bands[i];
    bands << (i ? ", " : "") << "{\"N\": " << b.channels << ", \"m\": " << b.m
          << ", \"l_from_km\": " << config::format_g9(b.l_from_km)
          << ", \"l_to_km\": " << config::format_g9(b.l_to_km) << "}";
  }
  bands << "]";
  table.add_annotation("optimal_bands", bands.str());
  emit(table, opts.out_path, log);

  if (!opts.out_path.empty()) {
    std::ofstream bf(opts.out_path + ".bands.json", std::ios::binary);
    bf << "{\"optimal_bands\": " << bands.str() << "}\n";
  }
  return true;
}

}  // namespace

bool run(const RunOptions& opts, std::ostream& log) {
  const Config cfg = opts.overrides.resolve(scenario_defaults(opts.scenario));
  if (opts.scenario == "entgen") return run_entgen(cfg, opts, log);
  if (opts.scenario == "readout") return run_readout(cfg, opts, log);
  if (opts.scenario == "rates") return run_rates(cfg, opts, log);
  if (opts.scenario == "sweep") return run_sweep(cfg, opts, log);
  if (opts.scenario == "validate")
    return run_validate(cfg, opts.seed, opts.exec, log);
  throw ConfigError("unknown scenario: " + opts.scenario);
}

bool run_validate(const Config& cfg, std::uint64_t seed, Exec exec,
                  std::ostream& log) {
  bool all_ok = true;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    log << (ok ? "PASS " : "FAIL ") << name;
    if (!ok && !detail.empty()) log << "  (" << detail << ")";
    log << '\n';
    all_ok &= ok;
  };

  const EffectiveRates rates = node_rates_from(cfg);
  const LinkParams link = link_from(cfg);

  // Trace / Hermiticity / positivity of propagated states.
  {
    spinmech::NodeModel node = spinmech::effective_cavity_node(rates, 2,
                                                               rates.kappa2);
    const Matrix l = node.liouvillian();
    qops::DensityMatrix rho{
        Matrix(node.initial_superposed * node.initial_superposed.adjoint()),
        true};
    double max_tr_err = 0.0, max_herm = 0.0, min_eig = 0.0;
    qops::Propagator step(l, 5.0 / rates.kappa1);
    for (int k = 0; k < 10; ++k) {  // out to kappa1 t = 50
      rho = step.apply(rho);
      max_tr_err = std::max(max_tr_err, std::abs(rho.trace() - 1.0));
      max_herm = std::max(max_herm, (rho.rho - rho.rho.adjoint()).norm());
      min_eig = std::min(min_eig, qops::min_eigenvalue(rho.rho));
    }
    check("trace_preservation", max_tr_err < 1e-9,
          "max drift " + config::format_g9(max_tr_err));
    check("hermiticity", max_herm < 1e-10, config::format_g9(max_herm));
    check("positivity", min_eig >= -1e-8, config::format_g9(min_eig));
  }

  // Linearity of the propagator.
  {
    spinmech::NodeModel node = spinmech::effective_cavity_node(rates);
    const Matrix l = node.liouvillian();
    Vector bright = Vector::Zero(node.dim);
    bright(spinmech::kSpinB * node.aux_dim) = 1.0;
    Vector ground = Vector::Zero(node.dim);
    ground(spinmech::kSpin0 * node.aux_dim) = 1.0;
    qops::DensityMatrix r1{Matrix(bright * bright.adjoint()), true};
    qops::DensityMatrix r2{Matrix(ground * ground.adjoint()), true};
    const double t = 3.0 / rates.kappa1;
    qops::DensityMatrix mix{Matrix(0.3 * r1.rho + 0.7 * r2.rho), true};
    const Matrix lhs = qops::propagate(l, mix, t).rho;
    const Matrix rhs = 0.3 * qops::propagate(l, r1, t).rho +
                       0.7 * qops::propagate(l, r2, t).rho;
    check("linearity", (lhs - rhs).norm() < 1e-10,
          config::format_g9((lhs - rhs).norm()));
  }

  // Bayes optimality of the histogram-crossing threshold.
  {
    readout::CountingModel m;
    m.kind = readout::CountingModel::Binomial;
    m.trials = 100;
    m.p_signal = 0.2802;
    m.p_background = 0.010557;
    m.threshold = readout::threshold_select(m);
    const double f_star = readout::readout_fidelity(m);
    bool optimal = true;
    for (int t = 1; t <= m.trials; ++t) {
      readout::CountingModel alt = m;
      alt.threshold = t;
      if (readout::readout_fidelity(alt) > f_star + 1e-12) optimal = false;
    }
    check("threshold_bayes_optimal", optimal,
          "crossing threshold " + std::to_string(m.threshold));
  }

  // Multiplexing formula reduces to the plain chain time at N = 1.
  {
    repeater::RepeaterConfig rc;
    rc.m = 8;
    rc.total_km = 500;
    rc.channels = 1;
    const double mux = repeater::distribution_time(rc);
    const double plain = repeater::distribution_time_nonmux(rc);
    check("mux_reduces_to_plain_at_n1",
          std::abs(mux - plain) < 1e-9 * plain,
          config::format_g9(mux - plain));
  }

  // Heralding on pure dark counts returns the maximally mixed record.
  {
    LinkParams dead = link;
    dead.eta_d = 1e-12;  // channel closed; only dark counts herald
    EffectiveRates quiet = rates;
    auto set = entgen::conditional_evolve(quiet, quiet, dead,
                                          20.0 / rates.kappa1,
                                          entgen::NodeKind::EffectiveCavity);
    auto ef = entgen::apply_dark_counts(set, dead, rates.dark_rate_th);
    check("noise_floor_quarter", std::abs(ef.f_gen - 0.25) < 5e-3,
          config::format_g9(ef.f_gen));
  }

  // Thermal rate identities of the elimination.
  {
    spinmech::SystemParams p;
    p.lambda = p.g = kTwoPi * 1e5;
    p.delta = kTwoPi * 1e6;
    p.kappa = kTwoPi * 2e4;
    p.gamma_m = 1e-2;
    p.n_th = 2.5;
    p.gamma_s_star = 0.0;
    const EffectiveRates er = spinmech::derive_rates(p);
    const bool ratio_ok =
        std::abs(er.gamma1 / er.gamma2 - (p.n_th + 1.0) / p.n_th) < 1e-12;
    const bool sym_ok = std::abs(er.kappa2 - er.gamma2) < 1e-12 * er.kappa2;
    check("thermal_rate_identities", ratio_ok && sym_ok, "");
  }

  // Monte Carlo vs exact mean attempt count.
  {
    const std::int64_t trials = cfg.get_int("validate.mc_trials");
    bool ok = true;
    std::ostringstream detail;
    for (int x : {2, 4, 8}) {
      const double p0 = 0.05;
      auto mc = repeater::mc_max_attempts(x, p0, trials, seed, exec);
      const double exact = repeater::f_exact(x, p0) / p0;
      if (std::abs(mc.mean - exact) > 3.0 * mc.std_error) {
        ok = false;
        detail << " x=" << x << " dev=" << (mc.mean - exact) / mc.std_error
               << "se";
      }
    }
    check("mc_matches_exact_attempts", ok, detail.str());
  }

  return all_ok;
}

}  // namespace somrep::scenarios
