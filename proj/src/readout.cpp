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

#include "somrep/readout.hpp"

#include <algorithm>
#include <cmath>

namespace somrep::readout {


using spinmech::EffectiveRates;
using spinmech::kSpin0;
using spinmech::kSpinB;
using spinmech::kSpinD;

void DriveScheme::validate() const {
  if (!(eta > 0.0 && eta <= 1.0))
    throw PhysicsValidityError("detection efficiency must be in (0, 1]");
  if (kind == DriveKind::Periodic && !(period_s > 0.0))
    throw PhysicsValidityError("pulse period must be positive");
  if (kind == DriveKind::Continuous && !(g_d >= 0.0))
    throw PhysicsValidityError("drive coupling must be non-negative");
}

Brightness pulse_brightness(const EffectiveRates& r, double period_s) {
  require(period_s > 0.0, "pulse period must be positive");
  const double rate = r.emission_rate;
  const double q = 1.0 - std::exp(-rate * period_s);
  Brightness b;
  b.dark = r.dark_rate_th * period_s;
  const double blocked = rate > 0.0 ? q / rate : period_s;
  b.bright = q + r.dark_rate_th * (period_s - blocked);
  return b;
}

double pulse_brightness_full(const EffectiveRates& r, double period_s,
                             SpinInit init, int steps) {
  spinmech::NodeModel node = spinmech::effective_cavity_node(r, 2, r.kappa2);
  Vector psi = Vector::Zero(node.dim);
  psi((init == SpinInit::DarkD ? kSpinD : kSpin0) * node.aux_dim) = 1.0;
  Matrix rho = psi * psi.adjoint();
  // pi pulse: |D> <-> |B>, |0> untouched.
  Matrix u = Matrix::Identity(node.dim, node.dim);
  for (Eigen::Index c = 0; c < node.aux_dim; ++c) {
    const Eigen::Index d = kSpinD * node.aux_dim + c;
    const Eigen::Index b = kSpinB * node.aux_dim + c;
    u(d, d) = u(b, b) = 0.0;
    u(d, b) = u(b, d) = 1.0;
  }
  rho = u * rho * u.adjoint();
  qops::DensityMatrix rho0{rho, true};
  return r.kappa1 * qops::integrate_expectation(node.liouvillian(), rho0,
                                                node.number_op, period_s,
                                                steps);
}

namespace {

// Liouvillian of the driven {D, B} (x) cavity manifold.
Matrix bright_manifold_liouvillian(const EffectiveRates& r, double g_d,
                                   int cavity_levels) {
  const Matrix cav_id = qops::identity(cavity_levels);
  const Matrix sm2 = qops::kron(qops::ket_bra(2, 0, 1), cav_id);  // |D><B|
  const Matrix a = qops::kron(qops::identity(2), qops::destroy(cavity_levels));
  Matrix sz2 = qops::kron(-qops::ket_bra(2, 0, 0) + qops::ket_bra(2, 1, 1),
                          cav_id);
  const Matrix h = r.shift_spin * (sm2.adjoint() * sm2) +
                   r.shift_cavity * (a.adjoint() * a) +
                   r.omega * (a.adjoint() * sm2 + a * sm2.adjoint()) +
                   g_d * (sm2 + sm2.adjoint());
  std::vector<qops::LindbladTerm> terms = {{r.kappa1, a},
                                           {r.kappa2, a.adjoint()},
                                           {r.gamma_s_star, sz2},
                                           {r.gamma1, sm2},
                                           {r.gamma2, sm2.adjoint()}};
  return qops::build_liouvillian(h, terms);
}

}  // namespace

Brightness continuous_occupation(const EffectiveRates& r, double g_d,
                                 int cavity_levels) {
  Brightness b;
  // |0> manifold: bare thermally driven cavity.
  {
    const Matrix a = qops::destroy(cavity_levels);
    Matrix l = qops::build_liouvillian(
        Matrix::Zero(cavity_levels, cavity_levels),
        {{r.kappa1, a}, {r.kappa2, a.adjoint()}});
    qops::DensityMatrix ss = qops::steady_state(l);
    b.dark = qops::expectation(a.adjoint() * a, ss.rho);
  }
  {
    const Matrix l = bright_manifold_liouvillian(r, g_d, cavity_levels);
    const Matrix num = qops::kron(
        qops::identity(2),
        Matrix(qops::destroy(cavity_levels).adjoint() * qops::destroy(cavity_levels)));
    qops::DensityMatrix ss = qops::steady_state(l);
    b.bright = qops::expectation(num, ss.rho);
  }
  return b;
}

double calibrate_drive(const EffectiveRates& r, double target,
                       int cavity_levels) {
  double lo = 0.0, hi = 4.0 * r.omega;
  auto occ = [&](double g) {
    return continuous_occupation(r, g, cavity_levels).bright;
  };
  require(occ(hi) > target,
          "drive calibration target above the reachable occupation");
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (occ(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void CountingModel::validate() const {
  if (kind == Binomial) {
    if (trials < 1) throw PhysicsValidityError("binomial model needs trials >= 1");
    if (!(p_signal > p_background && p_background >= 0.0 && p_signal <= 1.0))
      throw PhysicsValidityError(
          "binomial model needs 0 <= p_background < p_signal <= 1");
  } else {
    if (!(lambda_signal > lambda_background && lambda_background >= 0.0))
      throw PhysicsValidityError(
          "Poisson model needs 0 <= lambda_background < lambda_signal");
  }
  if (dark_mean < 0.0) throw PhysicsValidityError("dark mean must be >= 0");
}

namespace {

std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> out(n + 1);
  // Stable recurrence from log space.
  double logc = 0.0;  // log C(n, k)
  const double lp = std::log(std::max(p, 1e-300));
  const double lq = std::log1p(-std::min(p, 1.0 - 1e-16));
  for (int k = 0; k <= n; ++k) {
    out[k] = std::exp(logc + k * lp + (n - k) * lq);
    if (k < n) logc += std::log(double(n - k)) - std::log(double(k + 1));
  }
  if (p == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = 1.0;
  }
  return out;
}

std::vector<double> poisson_pmf(double lambda, Eigen::Index len) {
  std::vector<double> out(len);
  for (Eigen::Index k = 0; k < len; ++k) {
    double logp = -lambda + k * std::log(std::max(lambda, 1e-300)) -
                  std::lgamma(double(k) + 1.0);
    out[k] = std::exp(logp);
  }
  if (lambda == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = 1.0;
  }
  return out;
}

std::vector<double> convolve(const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) out[i] += a[j] * b[i - j];
  return out;
}

}  // namespace

Eigen::Index CountingModel::pmf_length() const {
  if (kind == Binomial) {
    double extra = dark_mean > 0.0 ? dark_mean + 10.0 * std::sqrt(dark_mean) + 10.0 : 0.0;
    return trials + 1 + static_cast<Eigen::Index>(std::ceil(extra));
  }
  const double lam = lambda_signal + dark_mean;
  return static_cast<Eigen::Index>(std::ceil(lam + 12.0 * std::sqrt(lam) + 25.0));
}

std::vector<double> CountingModel::pmf(bool signal) const {
  validate();
  const Eigen::Index len = pmf_length();
  std::vector<double> base;
  if (kind == Binomial) {
    base = binomial_pmf(trials, signal ? p_signal : p_background);
    base.resize(len, 0.0);
  } else {
    base = poisson_pmf(signal ? lambda_signal : lambda_background, len);
  }
  if (dark_mean > 0.0) base = convolve(base, poisson_pmf(dark_mean, len));
  return base;
}

int threshold_select(const CountingModel& model) {
  const std::vector<double> ps = model.pmf(true);
  const std::vector<double> pb = model.pmf(false);
  double max_gap = 0.0;
  for (std::size_t n = 0; n < ps.size(); ++n)
    max_gap = std::max(max_gap, std::abs(ps[n] - pb[n]));
  if (max_gap < 1e-15)
    throw NumericalError("signal and background distributions are identical");

  // Smallest t >= 1 with P_sig(n) >= P_bg(n) for every n >= t.
  int t = static_cast<int>(ps.size());
  for (int n = static_cast<int>(ps.size()) - 1; n >= 1; --n) {
    if (ps[n] >= pb[n] || (ps[n] < 1e-300 && pb[n] < 1e-300))
      t = n;
    else
      break;
  }
  if (t >= static_cast<int>(ps.size()))
    throw NumericalError("distributions do not cross; no usable threshold");
  return t;
}

double readout_fidelity(const CountingModel& model) {
  require(model.threshold >= 1, "threshold must be set (>= 1)");
  const std::vector<double> ps = model.pmf(true);
  const std::vector<double> pb = model.pmf(false);
  double below_bg = 0.0, below_sig = 0.0;
  for (int n = 0; n < model.threshold && n < static_cast<int>(pb.size()); ++n) {
    below_bg += pb[n];
    below_sig += ps[n];
  }
  return 0.5 * (below_bg + (1.0 - below_sig));
}

std::vector<InfidelityPoint> infidelity_curve(const EffectiveRates& r,
                                              const DriveScheme& scheme,
                                              const Brightness& bright,
                                              double max_time_s, int points,
                                              double dark_rate_hz, Exec exec) {
  scheme.validate();
  require(points >= 2 && max_time_s > 0.0, "need at least two sweep points");
  std::vector<InfidelityPoint> out(points);
  parallel_for(points, exec, [&](std::int64_t i) {
    CountingModel m;
    double time = 0.0;
    if (scheme.kind == DriveKind::Periodic) {
      const int max_pulses =
          std::max(1, static_cast<int>(max_time_s / scheme.period_s));
      const int pulses = std::max<int>(
          1, static_cast<int>(std::llround((i + 1) * double(max_pulses) /
                                           points)));
      time = pulses * scheme.period_s;
      if (scheme.eta * bright.bright > 1.0)
        throw PhysicsValidityError(
            "eta * brightness exceeds one photon per pulse");
      m.kind = CountingModel::Binomial;
      m.trials = pulses;
      m.p_signal = scheme.eta * bright.bright;
      m.p_background = scheme.eta * bright.dark;
    } else {
      time = (i + 1) * max_time_s / points;
      m.kind = CountingModel::Poisson;
      m.lambda_signal = scheme.eta * r.kappa1 * bright.bright * time;
      m.lambda_background = scheme.eta * r.kappa1 * bright.dark * time;
    }
    m.dark_mean = dark_rate_hz * time;
    m.threshold = threshold_select(m);
    out[i] = {time, 1.0 - readout_fidelity(m), m.threshold};
  });
  return out;
}

}  // namespace somrep::readout
