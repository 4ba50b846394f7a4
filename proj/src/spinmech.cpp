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

#include "somrep/spinmech.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace somrep::spinmech {

using qops::destroy;
using qops::identity;
using qops::ket_bra;
using qops::kron;
using qops::LindbladTerm;

Matrix spin_lowering() { return ket_bra(kSpinDim, kSpinD, kSpinB); }

Matrix spin_dephasing() {
  Matrix z = -Matrix::Identity(kSpinDim, kSpinDim);
  z(kSpinB, kSpinB) = 1.0;
  return z;
}

Matrix spin_round_flip() {
  Matrix u = Matrix::Zero(kSpinDim, kSpinDim);
  u(kSpinB, kSpin0) = 1.0;
  u(kSpin0, kSpinD) = 1.0;
  u(kSpinD, kSpinB) = 1.0;
  return u;
}

double SystemParams::effective_gamma_m() const {
  if (omega_m && q_m) return *omega_m / *q_m;
  return gamma_m;
}

bool SystemParams::adiabatic() const {
  return delta >= 5.0 * std::max(lambda, g);
}

std::optional<bool> SystemParams::rotating_wave_valid() const {
  if (!omega_m) return std::nullopt;
  return delta / *omega_m < 0.1;
}

void SystemParams::validate() const {
  auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!(nonneg(lambda) && nonneg(g) && nonneg(kappa) &&
        nonneg(effective_gamma_m()) && nonneg(n_th) && nonneg(gamma_s_star)))
    throw PhysicsValidityError("system rates must be finite and non-negative");
  if (!(std::isfinite(delta) && delta > 0.0))
    throw PhysicsValidityError("detuning delta must be positive");
}

bool EffectiveRates::incoherent_regime() const {
  return 2.0 * omega <= kappa1 + 2.0 * gamma_s_star + 2.0 * gamma_th;
}

namespace {

void finish_rates(EffectiveRates& r) {
  r.dark_rate_th =
      r.kappa2 > 0.0 ? r.kappa1 * r.kappa2 / (r.kappa1 - r.kappa2) : 0.0;
  const double denom =
      r.kappa1 - r.kappa2 + r.gamma1 + r.gamma2 + 2.0 * r.gamma_s_star;
  require(denom > 0.0, "transfer-rate denominator must be positive");
  r.emission_rate = 4.0 * r.omega * r.omega / denom;
}

}  // namespace

EffectiveRates derive_rates(const SystemParams& p) {
  p.validate();
  if (!p.adiabatic()) {
    std::ostringstream msg;
    msg << "adiabatic elimination invalid: delta/max(lambda,g) = "
        << p.delta / std::max(p.lambda, p.g) << " < 5";
    throw PhysicsValidityError(msg.str());
  }
  const double gm = p.effective_gamma_m();
  const double d2 = p.delta * p.delta;
  EffectiveRates r;
  r.omega = p.lambda * p.g / p.delta;
  r.kappa1 = p.kappa + p.g * p.g * gm * (p.n_th + 1.0) / d2;
  r.kappa2 = p.g * p.g * p.n_th * gm / d2;
  r.gamma1 = p.lambda * p.lambda * gm * (p.n_th + 1.0) / d2;
  r.gamma2 = p.lambda * p.lambda * p.n_th * gm / d2;
  r.gamma_th = p.lambda * p.g * p.n_th * gm / d2;
  r.gamma_s_star = p.gamma_s_star;
  r.shift_cavity = p.g * p.g / p.delta;
  r.shift_spin = p.lambda * p.lambda / p.delta;
  finish_rates(r);
  return r;
}

EffectiveRates effective_rates_direct(double omega, double kappa1, double kappa2,
                                      double gamma1, double gamma2,
                                      double gamma_s_star) {
  EffectiveRates r;
  r.omega = omega;
  r.kappa1 = kappa1;
  r.kappa2 = kappa2;
  r.gamma1 = gamma1;
  r.gamma2 = gamma2;
  r.gamma_th = kappa2;  // lambda = g
  r.gamma_s_star = gamma_s_star;
  r.shift_cavity = omega;
  r.shift_spin = omega;
  if (!(kappa1 > kappa2 && kappa2 >= 0.0 && gamma1 >= gamma2 && gamma2 >= 0.0))
    throw PhysicsValidityError(
        "effective rates must satisfy kappa1 > kappa2 >= 0, gamma1 >= gamma2 >= 0");
  finish_rates(r);
  return r;
}

double emission_rate_compact(const EffectiveRates& r, double kappa_bare) {
  const double denom = kappa_bare + 2.0 * r.gamma_s_star + 2.0 * r.gamma_th;
  require(denom > 0.0, "compact transfer-rate denominator must be positive");
  return 4.0 * r.omega * r.omega / denom;
}

FullModel build_full_model(const SystemParams& p, int n_phonon_max) {
  p.validate();
  if (n_phonon_max < 2)
    throw PhysicsValidityError("phonon cutoff must be at least 2");

  const Eigen::Index np = n_phonon_max + 1;
  const Eigen::Index nc = 2;
  FullModel m;
  m.phonon_dim = np;
  m.dim = kSpinDim * np * nc;

  const Matrix sp_id = identity(kSpinDim);
  const Matrix ph_id = identity(np);
  const Matrix cv_id = identity(nc);
  const Matrix sm = kron(kron(spin_lowering(), ph_id), cv_id);
  const Matrix b = kron(kron(sp_id, destroy(np)), cv_id);
  const Matrix a = kron(kron(sp_id, ph_id), destroy(nc));
  const Matrix sz = kron(kron(spin_dephasing(), ph_id), cv_id);

  const double gm = p.effective_gamma_m();
  m.h = p.delta * (b.adjoint() * b) +
        p.lambda * (b.adjoint() * sm + b * sm.adjoint()) +
        p.g * (b.adjoint() * a + b * a.adjoint());
  m.terms = {{p.kappa, a},
             {p.gamma_s_star, sz},
             {p.n_th * gm, b.adjoint()},
             {(p.n_th + 1.0) * gm, b}};
  m.cavity_number = a.adjoint() * a;

  m.initial_bright = Vector::Zero(m.dim);
  m.initial_bright(kSpinB * np * nc) = 1.0;  // |B, 0, 0>

  // Thermal weight the truncation throws away, from the closed-form
  // occupation of an untruncated thermal oscillator.
  if (p.n_th > 0.0) {
    m.cutoff_population = std::pow(p.n_th / (p.n_th + 1.0), double(np - 1)) /
                          (p.n_th + 1.0);
    m.cutoff_ok = m.cutoff_population <= 1e-4;
  }
  return m;
}

Matrix NodeModel::liouvillian() const {
  std::vector<LindbladTerm> all = background;
  all.push_back({emission_rate, emission_op});
  return qops::build_liouvillian(h, all);
}

NodeModel effective_cavity_node(const EffectiveRates& r, int cavity_levels,
                                double thermal_excitation) {
  require(cavity_levels >= 2, "cavity needs at least two Fock levels");
  NodeModel n;
  n.aux_dim = cavity_levels;
  n.dim = kSpinDim * cavity_levels;
  const Matrix cv_id = identity(cavity_levels);
  const Matrix sm = kron(spin_lowering(), cv_id);
  const Matrix a = kron(identity(kSpinDim), destroy(cavity_levels));
  const Matrix sz = kron(spin_dephasing(), cv_id);

  n.h = r.shift_spin * (sm.adjoint() * sm) + r.shift_cavity * (a.adjoint() * a) +
        r.omega * (a.adjoint() * sm + a * sm.adjoint());
  n.background = {{r.gamma_s_star, sz}, {r.gamma1, sm}, {r.gamma2, sm.adjoint()}};
  if (thermal_excitation > 0.0)
    n.background.push_back({thermal_excitation, a.adjoint()});
  n.emission_op = a;
  n.emission_rate = r.kappa1;
  n.round_flip = kron(spin_round_flip(), cv_id);
  n.number_op = a.adjoint() * a;

  n.initial_superposed = Vector::Zero(n.dim);
  n.initial_superposed(kSpin0 * cavity_levels) = 1.0 / std::sqrt(2.0);
  n.initial_superposed(kSpinB * cavity_levels) = 1.0 / std::sqrt(2.0);
  return n;
}

NodeModel incoherent_emitter_node(const EffectiveRates& r) {
  NodeModel n;
  n.aux_dim = 1;
  n.dim = kSpinDim;
  n.h = Matrix::Zero(kSpinDim, kSpinDim);
  n.background = {{r.gamma_s_star, spin_dephasing()},
                  {r.gamma1, spin_lowering()},
                  {r.gamma2, spin_lowering().adjoint()}};
  n.emission_op = spin_lowering();
  n.emission_rate = r.emission_rate;
  n.round_flip = spin_round_flip();
  n.number_op = ket_bra(kSpinDim, kSpinB, kSpinB);
  n.initial_superposed = Vector::Zero(kSpinDim);
  n.initial_superposed(kSpin0) = 1.0 / std::sqrt(2.0);
  n.initial_superposed(kSpinB) = 1.0 / std::sqrt(2.0);
  return n;
}

qops::DensityMatrix initial_cavity_state(const EffectiveRates& r) {
  if (!(r.kappa1 > 2.0 * r.kappa2))
    throw PhysicsValidityError(
        "initial cavity state requires kappa1 > 2*kappa2");
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = (r.kappa1 - 2.0 * r.kappa2) / (r.kappa1 - r.kappa2);
  rho(1, 1) = r.kappa2 / (r.kappa1 - r.kappa2);
  return {rho, true};
}

namespace {

// x = (<a^+a>, <s_+s_->); x' = A x + c. The inhomogeneous solution is
// evaluated through the block trick exp([[A, c], [0, 0]] t), which needs
// no invertibility assumptions.
Eigen::Matrix2d rate_matrix(const EffectiveRates& r) {
  const double R = r.emission_rate;
  Eigen::Matrix2d a;
  a << -(R + r.kappa1 - r.kappa2), R, R, -(R + r.gamma1 + r.gamma2);
  return a;
}

Eigen::Vector2d bloch_solution(const EffectiveRates& r, double cavity_pop0,
                               double spin_pop0, double t) {
  Eigen::Matrix3d blk = Eigen::Matrix3d::Zero();
  blk.topLeftCorner<2, 2>() = rate_matrix(r);
  blk(0, 2) = r.kappa2;
  blk(1, 2) = r.gamma2;
  const Eigen::Matrix3d e = (blk * t).exp();
  Eigen::Vector3d x0(cavity_pop0, spin_pop0, 1.0);
  const Eigen::Vector3d xt = e * x0;
  return xt.head<2>();
}

}  // namespace

BlochResult bloch_populations(const EffectiveRates& r, double spin_pop0,
                              double cavity_pop0, double t) {
  BlochResult out;
  out.incoherent_ok = r.incoherent_regime();
  const Eigen::Vector2d x = bloch_solution(r, cavity_pop0, spin_pop0, t);
  out.cavity_population = x(0);
  out.spin_population = x(1);
  return out;
}

double bloch_emission_integral(const EffectiveRates& r, double spin_pop0,
                               double cavity_pop0, double T, int steps) {
  int n = std::max(2, steps);
  if (n % 2) ++n;
  const double h = T / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * bloch_solution(r, cavity_pop0, spin_pop0, k * h)(0);
  }
  return r.kappa1 * sum * h / 3.0;
}

double full_model_emission_integral(const SystemParams& p, double T,
                                    int n_phonon_max, int steps) {
  FullModel m = build_full_model(p, n_phonon_max);
  const Matrix l = qops::build_liouvillian(m.h, m.terms);
  qops::DensityMatrix rho0{
      Matrix(m.initial_bright * m.initial_bright.adjoint()), true};
  return p.kappa *
         qops::integrate_expectation(l, rho0, m.cavity_number, T, steps);
}

double effective_emission_integral(const EffectiveRates& r, double T,
                                   int steps) {
  NodeModel n = effective_cavity_node(r, 2, r.kappa2);
  const Matrix l = n.liouvillian();
  Vector bright = Vector::Zero(n.dim);
  bright(kSpinB * n.aux_dim) = 1.0;
  qops::DensityMatrix rho0{Matrix(bright * bright.adjoint()), true};
  return r.kappa1 * qops::integrate_expectation(l, rho0, n.number_op, T, steps);
}

double hyperfine_level(double b_gauss, double a_hz, int m_s, double m_i) {
  constexpr double kZeroField = 2.87e9;     // Hz
  constexpr double kMuElectron = -2.8e6;    // Hz/Gauss
  constexpr double kMuNuclear = 1.07e3;     // Hz/Gauss
  return kZeroField * m_s * m_s + kMuElectron * b_gauss * m_s +
         kMuNuclear * b_gauss * m_i + a_hz * m_s * m_i;
}

}  // namespace somrep::spinmech
