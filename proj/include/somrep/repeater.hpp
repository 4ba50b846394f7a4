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

#include <cstdint>
#include <functional>
#include <vector>

#include "somrep/common.hpp"
#include "somrep/parallel.hpp"

namespace somrep::repeater {

// Entanglement-distribution time and end-to-end fidelity of an m-link
// chain with N multiplexed channels. All links attempt in parallel; a
// round completes when the slowest link succeeds, so the attempt count
// is the maximum of independent geometric variables.

/// Truncated distribution of the number of attempts until all x parallel
/// links have succeeded (max of x geometrics with success p0).
struct AttemptDistribution {
  int x = 1;
  double p0 = 0.0;
  std::vector<double> pmf;  // pmf[n-1] = P(max = n), n = 1..n_max

  double mean() const;
  double total() const;  // captured mass, >= 1 - tail_tol by construction
};

/// Builds the pmf through the CDF P(max <= n) = (1 - (1-p0)^n)^x,
/// extending the truncation until the tail mass drops below `tail_tol`.
AttemptDistribution attempt_distribution(int x, double p0,
                                         double tail_tol = 1e-9);

/// f(x) = p0 * E[max of x geometrics] at finite p0.
double f_exact(int x, double p0);

/// p0 -> 0 limit of f(x): sum over the survival series collapses to the
/// harmonic number H_x. This is the default factor entering the chain
/// time (the finite-p0 value differs only at O(p0)).
double f_exact_limit(int x);

/// Empirical fit 0.64*log2(x) + 0.83 for x >= 2 (reproduces the exact
/// values to ~0.03 on x = 2..32 but gives 0.83 instead of 1 at x = 1).
double f_regression(double x);

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares refit of f(2^k) ~ slope*k + intercept over k in
/// [k_min, k_max] using the exact values.
RegressionFit refit_regression(int k_min = 1, int k_max = 5);

/// Monte Carlo mean of the max of x geometrics. Deterministic for a
/// fixed seed independent of the execution policy and thread count
/// (trials are split into fixed blocks with per-block generators).
struct McResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};
McResult mc_max_attempts(int x, double p0, std::int64_t trials,
                         std::uint64_t seed, Exec exec = Exec::Parallel);

struct RepeaterConfig {
  int m = 8;               // number of elementary links, even
  double total_km = 800.0; // end-to-end distance
  int channels = 1;        // multiplexing N
  double p_emit = 0.9;     // single-photon emission success
  double eta_d = 0.45;
  double l_att_km = 22.0;
  double t_mp_s = 0.0;     // entanglement-mapping time
  double t_sw_s = 0.0;     // swapping time
  double f_gen = 1.0;      // per-link heralded fidelity
  double f_mp = 0.992;     // mapping (CNOT + readout) fidelity
  double f_nro = 0.999;    // nuclear readout fidelity
  double gamma_n_hz = 1.0; // nuclear memory decoherence
  double c_mps = 2e8;      // light speed in fiber
  bool use_regression_f = false;

  double link_km() const { return total_km / m; }
  /// 0.5 p^2 eta_d^2 exp(-L0/L_att): two photons must survive half a
  /// link each and both detectors must fire.
  double p0() const;
  /// f(m/2) on the selected route; the exact route uses f(1) = 1.
  double f_factor() const;
  /// Per-channel success probability m*p0 / (2 f(m/2)).
  double p_channel() const;
  void validate() const;
};

/// Mean distribution time. The multiplexed form
///   L/c / (1 - (1 - p_t)^N) + T_mp + T_sw
/// reduces exactly to the non-multiplexed expression at N = 1.
double distribution_time(const RepeaterConfig& cfg);

/// Explicit non-multiplexed expression 2 f(m/2) L / (c m p0) + gates.
double distribution_time_nonmux(const RepeaterConfig& cfg);

/// F_gen^m * F_mp^m * F_nro^(m-1) * exp(-gamma_n t).
double overall_fidelity(const RepeaterConfig& cfg, double t_s);

/// Direct-transmission baseline: a 10 GHz single-photon source attenuated
/// over the full distance. The detector factor is configurable and off by
/// default (arriving-photon rate).
double rate_direct_transmission(double l_km, double rep_rate_hz = 1e10,
                                double l_att_km = 22.0,
                                double detector_factor = 1.0);

/// First distance (1 km resolution, bisection) at which the repeater rate
/// exceeds direct transmission; negative when it never does in range.
double crossover_km(const RepeaterConfig& cfg, double l_min_km,
                    double l_max_km, double dt_rep_rate_hz = 1e10,
                    double dt_detector_factor = 1.0);

struct SweepPoint {
  double l_km = 0.0;
  int m = 0;
  int channels = 0;
  double rate_hz = 0.0;
  double fidelity = 0.0;
  double p0 = 0.0;
  bool beats_dt = false;
};

struct OptimalBand {
  int channels = 0;
  int m = 0;
  double l_from_km = 0.0;
  double l_to_km = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<OptimalBand> bands;  // argmax-fidelity configuration per L range
};

/// Grid sweep over (m, N, L). `f_gen_of_link` supplies the per-link
/// heralded fidelity as a function of the elementary link length.
SweepResult sweep(const std::vector<int>& m_list,
                  const std::vector<int>& n_list, double l_min_km,
                  double l_max_km, double l_step_km,
                  const RepeaterConfig& base,
                  const std::function<double(double)>& f_gen_of_link,
                  double dt_rep_rate_hz = 1e10, double dt_detector_factor = 1.0,
                  Exec exec = Exec::Parallel);

}  // namespace somrep::repeater
