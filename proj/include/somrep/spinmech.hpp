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

#include <optional>
#include <vector>

#include "somrep/qops.hpp"

namespace somrep::spinmech {

// One spin-optomechanics node: a dressed three-level electron spin
// {|0>, |D>, |B>} coupled to an optical cavity through a mechanical
// oscillator. |B> is the only level that emits; after adiabatic
// elimination of the oscillator the node reduces to a spin-cavity system
// with effective coupling Omega = lambda*g/delta.

// Dressed-spin level indices used throughout.
inline constexpr Eigen::Index kSpin0 = 0;  // uncoupled ground
inline constexpr Eigen::Index kSpinD = 1;  // dark ground
inline constexpr Eigen::Index kSpinB = 2;  // bright (emitting)
inline constexpr Eigen::Index kSpinDim = 3;

/// sigma_- = |D><B| on the three-level dressed spin.
Matrix spin_lowering();

/// Pure-dephasing operator of the bright level against both ground
/// levels, diag(-1, -1, +1). The |B>-|D> coherence decays at
/// 2*gamma_s_star, matching the Langevin damping of sigma_-; ground-state
/// coherences are untouched, so heralded two-node entanglement stored in
/// {|0>, |D>} does not dephase through this channel.
Matrix spin_dephasing();

/// Inter-round local spin unitary of the two-round heralding protocol:
/// |0> -> |B>, |D> -> |0>, |B> -> |D| (swap the ground pair, then
/// re-excite the new dark level).
Matrix spin_round_flip();

/// Physical rates of one node, all angular frequencies in rad/s (= 1/s).
struct SystemParams {
  double lambda = 0.0;        // spin-mechanics coupling
  double g = 0.0;             // control optomechanical coupling
  double delta = 0.0;         // detuning omega_m - omega_q, > 0
  double kappa = 0.0;         // bare cavity decay
  double gamma_m = 0.0;       // oscillator damping
  double n_th = 0.0;          // thermal phonon number
  double gamma_s_star = 0.0;  // pure spin dephasing
  std::optional<double> omega_m;  // oscillator frequency, rad/s
  std::optional<double> q_m;      // mechanical quality factor

  /// gamma_m, or omega_m/q_m when both optional fields are set.
  double effective_gamma_m() const;

  /// delta >= 5 * max(lambda, g): the oscillator may be eliminated.
  bool adiabatic() const;

  /// delta/omega_m < 0.1 when omega_m is known.
  std::optional<bool> rotating_wave_valid() const;

  void validate() const;
};

/// Effective spin-cavity rates after eliminating the oscillator.
struct EffectiveRates {
  double omega = 0.0;     // effective coupling lambda*g/delta
  double kappa1 = 0.0;    // effective cavity decay
  double kappa2 = 0.0;    // thermal cavity excitation
  double gamma1 = 0.0;    // thermal spin decay
  double gamma2 = 0.0;    // thermal spin excitation
  double gamma_th = 0.0;  // thermal noise rate lambda*g*n_th*gamma_m/delta^2
  double emission_rate = 0.0;  // incoherent-regime transfer rate R
  double dark_rate_th = 0.0;   // kappa1*kappa2/(kappa1-kappa2), counts/s
  double gamma_s_star = 0.0;
  // Second-order level shifts entering the effective Hamiltonian.
  double shift_cavity = 0.0;  // g^2/delta
  double shift_spin = 0.0;    // lambda^2/delta

  /// 2*Omega <= kappa1 + 2*gamma_s_star + 2*Gamma_th.
  bool incoherent_regime() const;
};

/// Effective rates from physical parameters. Refuses (PhysicsValidityError)
/// outside the adiabatic regime. The transfer rate uses the full
/// denominator kappa1 - kappa2 + gamma1 + gamma2 + 2*gamma_s_star.
EffectiveRates derive_rates(const SystemParams& p);

/// Direct constructor for operating points quoted as ratios of kappa1
/// (no oscillator frequency needed). Assumes lambda = g, so
/// gamma_th = kappa2 and the two Hamiltonian shifts equal omega.
EffectiveRates effective_rates_direct(double omega, double kappa1, double kappa2,
                                      double gamma1, double gamma2,
                                      double gamma_s_star);

/// Compact form of the transfer rate, 4*Omega^2/(kappa + 2*gamma_s_star
/// + 2*Gamma_th). Kept alongside the default full-denominator form; the
/// two differ at the percent level for the operating points used here.
double emission_rate_compact(const EffectiveRates& r, double kappa_bare);

/// Full three-mode model (spin (x) phonon (x) cavity with a two-level
/// cavity truncation) in the rotating frame.
struct FullModel {
  Matrix h;
  std::vector<qops::LindbladTerm> terms;
  Eigen::Index phonon_dim = 0;
  Eigen::Index dim = 0;
  Matrix cavity_number;
  Vector initial_bright;  // |B, 0, 0>
  bool cutoff_ok = true;        // thermal weight at the phonon cutoff <= 1e-4
  double cutoff_population = 0.0;
};

FullModel build_full_model(const SystemParams& p, int n_phonon_max);

/// One node after elimination: spin (x) cavity Fock space. The emission
/// channel (kappa1, annihilation operator) is kept separate from the
/// background terms so heralding can split it into detected and
/// undetected parts. `thermal_excitation` is the kappa2 put into the
/// quantum evolution; heralding moves it into classical dark counts and
/// passes 0.
struct NodeModel {
  Eigen::Index spin_dim = kSpinDim;
  Eigen::Index aux_dim = 1;  // cavity Fock levels (1 = bare emitter)
  Eigen::Index dim = kSpinDim;
  Matrix h;
  std::vector<qops::LindbladTerm> background;
  Matrix emission_op;
  double emission_rate = 0.0;
  Matrix round_flip;  // spin flip (x) identity on the cavity
  Matrix number_op;   // cavity photon number (emitter: |B><B|)
  Vector initial_superposed;  // (|0> + |B>)/sqrt(2) (x) vacuum

  Matrix liouvillian() const;  // full generator incl. emission
};

NodeModel effective_cavity_node(const EffectiveRates& r, int cavity_levels = 2,
                                double thermal_excitation = 0.0);

/// Three-level reduction for the incoherent regime: the bright level
/// emits directly at the transfer rate R with no cavity retention.
NodeModel incoherent_emitter_node(const EffectiveRates& r);

/// Cavity state at the start of heralding, diag((k1-2k2)/(k1-k2),
/// k2/(k1-k2)) on a two-level Fock space. Requires kappa1 > 2*kappa2.
qops::DensityMatrix initial_cavity_state(const EffectiveRates& r);

/// Reduced two-population rate equations of the incoherent regime.
struct BlochResult {
  double spin_population = 0.0;    // <sigma_+ sigma_->(t)
  double cavity_population = 0.0;  // <a^+ a>(t)
  bool incoherent_ok = true;
};

BlochResult bloch_populations(const EffectiveRates& r, double spin_pop0,
                              double cavity_pop0, double t);

/// kappa1 * integral_0^T <a^+ a>(t) dt from the rate equations.
double bloch_emission_integral(const EffectiveRates& r, double spin_pop0,
                               double cavity_pop0, double T, int steps = 400);

/// kappa * integral of the cavity population from |B,0,0> in the full
/// three-mode model.
double full_model_emission_integral(const SystemParams& p, double T,
                                    int n_phonon_max = 3, int steps = 400);

/// Same brightness integral in the effective spin-cavity model.
double effective_emission_integral(const EffectiveRates& r, double T,
                                   int steps = 400);

/// Ground-state hyperfine energy (Hz) of the electron-nuclear pair:
/// E = D0 m_s^2 + mu_e B m_s + mu_n B m_I + A m_s m_I.
double hyperfine_level(double b_gauss, double a_hz, int m_s, double m_i);

}  // namespace somrep::spinmech
