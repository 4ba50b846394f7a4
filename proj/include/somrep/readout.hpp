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

#include <vector>

#include "somrep/parallel.hpp"
#include "somrep/spinmech.hpp"

namespace somrep::readout {

// Spin-state readout through the node's emission: the dark ground level
// |D> is driven to the bright level and emits, |0> stays dark up to the
// thermally induced cavity background. Photon counts over many pulses
// (binomial) or a continuous drive window (Poisson) are thresholded to
// classify the spin state.

enum class DriveKind { Periodic, Continuous };
enum class SpinInit { Dark0, DarkD };  // |0> or |D> at the start

struct DriveScheme {
  DriveKind kind = DriveKind::Periodic;
  double g_d = 0.0;       // drive coupling, 1/s (continuous)
  double period_s = 0.0;  // pulse period (periodic)
  double eta = 1.0;       // total detection efficiency per photon
  void validate() const;
};

struct Brightness {
  double bright = 0.0;  // spin |D>: beta_D (periodic) or <a^+a>_D (cw)
  double dark = 0.0;    // spin |0>
};

/// Per-pulse emitted photon number in the periodic scheme, from the
/// incoherent three-level reduction: the pi pulse promotes |D> to |B>,
/// which emits with probability q = 1 - exp(-R T_p). The thermal
/// background adds counts at the classical rate D_th whenever the
/// single-excitation manifold is empty (the truncated space blocks
/// thermal injection while the emitter excitation is present):
///   beta_D = q + D_th (T_p - q/R),  beta_0 = D_th T_p.
Brightness pulse_brightness(const spinmech::EffectiveRates& r, double period_s);

/// Same quantity from propagating the coherent spin-cavity master
/// equation (pi pulse as an instantaneous |D><->|B> unitary). Kept as the
/// cross-check route: at kappa1 ~ 2 Omega the cavity retains the photon
/// for a sizable part of the period and the result falls well below the
/// reduced model.
double pulse_brightness_full(const spinmech::EffectiveRates& r,
                             double period_s, SpinInit init,
                             int steps = 400);

/// Steady cavity occupation under a continuous drive g_d(sigma_+ +
/// sigma_-) resonant with the bright-dark splitting. The |0> manifold is
/// decoupled from the drive, so its occupation is the bare thermal value
/// kappa2/(kappa1 - kappa2). Solved per spin manifold (the node
/// Liouvillian is block diagonal in {|0>} vs {|D>,|B>}).
Brightness continuous_occupation(const spinmech::EffectiveRates& r, double g_d,
                                 int cavity_levels = 4);

/// Bisects g_d so that the bright-manifold steady occupation hits
/// `target`.
double calibrate_drive(const spinmech::EffectiveRates& r, double target,
                       int cavity_levels = 4);

/// Photon-count model for one readout: signal (spin |D>) versus
/// background (spin |0>) distribution plus an integer threshold.
struct CountingModel {
  enum Kind { Binomial, Poisson } kind = Binomial;
  // Binomial: `trials` repetitions with per-trial detection probability.
  int trials = 0;
  double p_signal = 0.0;
  double p_background = 0.0;
  // Poisson: mean detected counts over the readout window.
  double lambda_signal = 0.0;
  double lambda_background = 0.0;
  // Detector dark counts folded in as an additive Poisson mean.
  double dark_mean = 0.0;
  int threshold = 0;

  void validate() const;
  /// P(n) for n = 0..n_max (binomial: n_max = trials).
  std::vector<double> pmf(bool signal) const;
  Eigen::Index pmf_length() const;
};

/// Smallest count with P_signal >= P_background from there on (the
/// integer crossing of the two histograms). Throws NumericalError when
/// the distributions do not separate.
int threshold_select(const CountingModel& model);

/// Equal-prior readout fidelity
/// F = (sum_{n<t} P_bg(n) + sum_{n>=t} P_sig(n)) / 2.
double readout_fidelity(const CountingModel& model);

struct InfidelityPoint {
  double time_s = 0.0;
  double infidelity = 0.0;
  int threshold = 0;
};

/// 1 - F versus total readout time, re-selecting the threshold at every
/// point (the threshold changes produce derivative kinks). For the
/// periodic scheme the time axis is N * T_p with N = 1, 2, ...; for the
/// continuous scheme the Poisson means scale linearly with time.
std::vector<InfidelityPoint> infidelity_curve(
    const spinmech::EffectiveRates& r, const DriveScheme& scheme,
    const Brightness& bright, double max_time_s, int points,
    double dark_rate_hz = 0.0, Exec exec = Exec::Parallel);

}  // namespace somrep::readout
