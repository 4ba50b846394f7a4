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

#pragma once

#include <array>
#include <vector>

#include "somrep/parallel.hpp"
#include "somrep/spinmech.hpp"

namespace somrep::entgen {

// Two-round single-photon heralding (Barrett-Kok) between two nodes.
// The two cavity output fields interfere on a balanced beam splitter;
// detectors '+' (index 0) and '-' (index 1) monitor the two ports. The
// master equation is decomposed into a no-detection generator L0 and the
// two detector collapse channels; a record with exactly one click per
// time bin corresponds to one collapse per bin, evaluated by quadrature
// over the jump time. L0 contains no node-node coupling, so its
// propagator factorizes into the two node propagators and only states
// ever live on the composite space.

struct LinkParams {
  double l0_km = 100.0;       // elementary link length
  double l_att_km = 22.0;     // fiber attenuation length
  double eta_d = 1.0;         // detector efficiency
  double dark_rate_hz = 10.0; // detector dark counts, 1/s per detector

  double eta_t() const { return std::exp(-l0_km / (2.0 * l_att_km)); }
  /// Detection probability of an emitted photon in one arm.
  double eta_arm() const { return eta_t() * eta_d; }
  void validate() const;
};

/// Which detector clicked in the early and late time bins (0 = '+',
/// 1 = '-'). Patterns with zero or two clicks in a bin are excluded by
/// construction; they only re-enter through dark-count substitution.
struct DetectionRecord {
  int early = 0;
  int late = 0;
};

/// All conditional outcomes of one protocol run of total window t_f
/// (two bins of T_d = t_f/2 each). States are unnormalized two-spin
/// matrices (9x9, dressed three-level basis per spin); their traces are
/// the record probabilities.
struct HeraldSet {
  double t_f = 0.0;
  double t_d = 0.0;
  double eta_arm = 0.0;

  std::array<std::array<Matrix, 2>, 2> record;   // [early][late]
  std::array<std::array<double, 2>, 2> weight{};

  std::array<Matrix, 2> early_only;  // click early, none late
  std::array<double, 2> weight_early{};
  std::array<Matrix, 2> late_only;   // none early, click late
  std::array<double, 2> weight_late{};
  Matrix zero;                       // no clicks at all
  double weight_zero = 0.0;

  /// Sum of the four record weights before dark-count augmentation.
  double eta_gen_raw() const;
};

struct QuadratureOptions {
  int min_steps = 200;          // per bin; step also capped at 1/(20*rate)
  bool convergence_check = false;
  double convergence_tol = 1e-6;
};

/// One-jump-per-bin conditional evolution for two (possibly different)
/// node models. Throws NumericalError if the convergence check is
/// requested and halving the step moves any record weight by more than
/// the tolerance.
HeraldSet conditional_evolve(const spinmech::NodeModel& node_a,
                             const spinmech::NodeModel& node_b,
                             double eta_arm, double t_f,
                             const QuadratureOptions& opts = {});

/// Convenience: identical nodes built from effective rates. The thermal
/// cavity excitation kappa2 is removed from the quantum evolution here
/// and re-enters classically through apply_dark_counts.
enum class NodeKind { EffectiveCavity, IncoherentEmitter };

HeraldSet conditional_evolve(const spinmech::EffectiveRates& rates_a,
                             const spinmech::EffectiveRates& rates_b,
                             const LinkParams& link, double t_f,
                             NodeKind kind = NodeKind::EffectiveCavity,
                             const QuadratureOptions& opts = {});

/// Efficiency and fidelity after folding dark counts into the records.
struct EtaFid {
  double eta_gen = 0.0;
  double f_gen = 0.0;
  double p_dark_window = 0.0;       // spurious-click probability per bin
  bool accuracy_warning = false;    // p_dark_window >= 0.1
  std::array<std::array<double, 2>, 2> record_weight{};
  std::array<std::array<double, 2>, 2> record_fidelity{};
};

/// Augments the records with dark-count substituted patterns: a missing
/// click may be supplied by a dark count (detector dark rate plus the
/// thermally induced rate d_th attenuated by the channel), double-click
/// bins are discarded. F_gen is the plain average of the per-record
/// Bell-state fidelities.
EtaFid apply_dark_counts(const HeraldSet& set, const LinkParams& link,
                         double d_th);

/// Closed-form heralding efficiency in the incoherent regime,
/// eta^2/2 * (1 - exp(-t_f R/2))^2. `eta` is the per-arm efficiency.
double eta_bk(double emission_rate, double eta, double t_f);

/// Closed-form heralding fidelity upper bound with pure dephasing only.
double f_bk(double emission_rate, double gamma_s_star, double eta_t,
            double t_f);

/// One point of the efficiency/fidelity-vs-window curve.
struct CurvePoint {
  double kappa1_tf = 0.0;
  double t_f = 0.0;
  double eta_gen = 0.0;
  double f_gen = 0.0;
  double eta_gen_scaled = 0.0;  // eta_gen / eta_t^2
};

/// Sweep of the total window t_f (given in units of 1/kappa1), with dark
/// counts applied at every point. Grid points are independent and run
/// under the requested execution policy.
std::vector<CurvePoint> herald_curve(const spinmech::EffectiveRates& rates,
                                     const LinkParams& link,
                                     const std::vector<double>& kappa1_tf_grid,
                                     NodeKind kind = NodeKind::EffectiveCavity,
                                     Exec exec = Exec::Parallel);

/// Peak fidelity over a kappa1*t_f grid.
struct Peak {
  double kappa1_tf = 0.0;
  double f_gen = 0.0;
  double eta_gen = 0.0;
};
Peak peak_fidelity(const std::vector<CurvePoint>& curve);

/// Bell-state overlap used for the record fidelities: psi_+ for equal
/// detectors, psi_- otherwise.
double bell_overlap(const Matrix& two_spin, bool plus);

}  // namespace somrep::entgen
