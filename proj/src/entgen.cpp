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

#include "somrep/entgen.hpp"

#include <cmath>

namespace somrep::entgen {

using spinmech::NodeModel;
using spinmech::kSpin0;
using spinmech::kSpinB;
using spinmech::kSpinD;
using spinmech::kSpinDim;

void LinkParams::validate() const {
  if (!(eta_d > 0.0 && eta_d <= 1.0))
    throw PhysicsValidityError("detector efficiency must be in (0, 1]");
  if (!(l0_km > 0.0 && l_att_km > 0.0))
    throw PhysicsValidityError("link lengths must be positive");
  if (!(dark_rate_hz >= 0.0))
    throw PhysicsValidityError("dark rate must be non-negative");
}

double HeraldSet::eta_gen_raw() const {
  return weight[0][0] + weight[0][1] + weight[1][0] + weight[1][1];
}

namespace {

// Applies a node-local superoperator (column-stacked, d^2 x d^2) to one
// tensor factor of a composite density matrix. The composite state is
// gathered into a matrix whose rows enumerate the addressed node's
// (row, col) index pair so the action is a single GEMM.
class TwoNodePropagator {
 public:
  TwoNodePropagator(Matrix ea, Matrix eb, Eigen::Index da, Eigen::Index db)
      : ea_(std::move(ea)), eb_(std::move(eb)), da_(da), db_(db) {}

  void apply(Matrix& rho) const {
    apply_node(rho, ea_, 0);
    apply_node(rho, eb_, 1);
  }

 private:
  void apply_node(Matrix& rho, const Matrix& e, int which) const {
    const Eigen::Index da = da_, db = db_;
    if (which == 0) {
      Matrix m(da * da, db * db);
      for (Eigen::Index ia = 0; ia < da; ++ia)
        for (Eigen::Index ja = 0; ja < da; ++ja)
          for (Eigen::Index ib = 0; ib < db; ++ib)
            for (Eigen::Index jb = 0; jb < db; ++jb)
              m(ja * da + ia, jb * db + ib) = rho(ia * db + ib, ja * db + jb);
      m = (e * m).eval();
      for (Eigen::Index ia = 0; ia < da; ++ia)
        for (Eigen::Index ja = 0; ja < da; ++ja)
          for (Eigen::Index ib = 0; ib < db; ++ib)
            for (Eigen::Index jb = 0; jb < db; ++jb)
              rho(ia * db + ib, ja * db + jb) = m(ja * da + ia, jb * db + ib);
    } else {
      Matrix m(db * db, da * da);
      for (Eigen::Index ia = 0; ia < da; ++ia)
        for (Eigen::Index ja = 0; ja < da; ++ja)
          for (Eigen::Index ib = 0; ib < db; ++ib)
            for (Eigen::Index jb = 0; jb < db; ++jb)
              m(jb * db + ib, ja * da + ia) = rho(ia * db + ib, ja * db + jb);
      m = (e * m).eval();
      for (Eigen::Index ia = 0; ia < da; ++ia)
        for (Eigen::Index ja = 0; ja < da; ++ja)
          for (Eigen::Index ib = 0; ib < db; ++ib)
            for (Eigen::Index jb = 0; jb < db; ++jb)
              rho(ia * db + ib, ja * db + jb) = m(jb * db + ib, ja * da + ia);
    }
  }

  Matrix ea_, eb_;
  Eigen::Index da_, db_;
};

struct WindowResult {
  std::array<Matrix, 2> clicked;  // exactly one click at detector 0 / 1
  Matrix no_click;
};

// rho_click = integral_0^T exp(L0 (T-s)) S exp(L0 s) rho ds by composite
// Simpson. One forward pass: the accumulator is re-propagated by one
// step before each new jump sample, so the sample taken at s_k ends up
// behind exactly n-k propagator applications.
WindowResult one_jump_window(const Matrix& rho_in,
                             const TwoNodePropagator& step,
                             const std::array<Matrix, 2>& jump_ops, int n,
                             double h) {
  auto simpson_w = [&](int k) {
    if (k == 0 || k == n) return h / 3.0;
    return (k % 2 ? 4.0 : 2.0) * h / 3.0;
  };

  WindowResult out;
  Matrix rho = rho_in;
  std::array<Matrix, 2> acc;
  for (int s = 0; s < 2; ++s)
    acc[s] = simpson_w(0) * (jump_ops[s] * rho * jump_ops[s].adjoint());
  for (int k = 1; k <= n; ++k) {
    step.apply(rho);
    for (int s = 0; s < 2; ++s) {
      step.apply(acc[s]);
      acc[s] += simpson_w(k) * (jump_ops[s] * rho * jump_ops[s].adjoint());
    }
  }
  out.no_click = std::move(rho);
  out.clicked[0] = std::move(acc[0]);
  out.clicked[1] = std::move(acc[1]);
  return out;
}

Matrix node_no_click_generator(const NodeModel& node, double eta_arm) {
  Matrix l = node.liouvillian();
  l -= eta_arm * node.emission_rate *
       qops::sandwich_superop(node.emission_op);
  return l;
}

Matrix two_spin_reduce(const Matrix& rho, Eigen::Index aux_a,
                       Eigen::Index aux_b) {
  // composite index: ((sa*aux_a + ca) * dim_b + sb*aux_b + cb)
  const Eigen::Index db = kSpinDim * aux_b;
  Matrix out = Matrix::Zero(kSpinDim * kSpinDim, kSpinDim * kSpinDim);
  for (Eigen::Index sa = 0; sa < kSpinDim; ++sa)
    for (Eigen::Index sb = 0; sb < kSpinDim; ++sb)
      for (Eigen::Index ta = 0; ta < kSpinDim; ++ta)
        for (Eigen::Index tb = 0; tb < kSpinDim; ++tb) {
          Complex sum = 0.0;
          for (Eigen::Index ca = 0; ca < aux_a; ++ca)
            for (Eigen::Index cb = 0; cb < aux_b; ++cb)
              sum += rho((sa * aux_a + ca) * db + sb * aux_b + cb,
                         (ta * aux_a + ca) * db + tb * aux_b + cb);
          out(sa * kSpinDim + sb, ta * kSpinDim + tb) = sum;
        }
  return out;
}

HeraldSet run_protocol(const NodeModel& na, const NodeModel& nb,
                       double eta_arm, double t_f, int steps) {
  const double t_d = 0.5 * t_f;
  const Eigen::Index da = na.dim, db = nb.dim, d = da * db;
  const int n = steps;
  const double h = t_d / n;

  const Matrix la = node_no_click_generator(na, eta_arm);
  const Matrix lb = node_no_click_generator(nb, eta_arm);
  TwoNodePropagator step(qops::expm(la * h), qops::expm(lb * h), da, db);

  const Matrix em_a =
      std::sqrt(na.emission_rate) * qops::kron(na.emission_op, qops::identity(db));
  const Matrix em_b =
      std::sqrt(nb.emission_rate) * qops::kron(qops::identity(da), nb.emission_op);
  const double amp = std::sqrt(eta_arm / 2.0);
  std::array<Matrix, 2> jumps = {amp * (em_a + em_b), amp * (em_a - em_b)};

  Vector psi0(d);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < db; ++j)
      psi0(i * db + j) = na.initial_superposed(i) * nb.initial_superposed(j);
  Matrix rho0 = psi0 * psi0.adjoint();

  const Matrix flip = qops::kron(na.round_flip, nb.round_flip);
  auto reexcite = [&](Matrix& m) { m = (flip * m * flip.adjoint()).eval(); };

  WindowResult first = one_jump_window(rho0, step, jumps, n, h);
  reexcite(first.clicked[0]);
  reexcite(first.clicked[1]);
  reexcite(first.no_click);

  HeraldSet set;
  set.t_f = t_f;
  set.t_d = t_d;
  set.eta_arm = eta_arm;

  auto reduce = [&](const Matrix& m) {
    return two_spin_reduce(m, na.aux_dim, nb.aux_dim);
  };

  for (int e = 0; e < 2; ++e) {
    WindowResult second = one_jump_window(first.clicked[e], step, jumps, n, h);
    for (int l = 0; l < 2; ++l) {
      set.record[e][l] = reduce(second.clicked[l]);
      set.weight[e][l] = set.record[e][l].trace().real();
    }
    set.early_only[e] = reduce(second.no_click);
    set.weight_early[e] = set.early_only[e].trace().real();
  }

  WindowResult late = one_jump_window(first.no_click, step, jumps, n, h);
  for (int l = 0; l < 2; ++l) {
    set.late_only[l] = reduce(late.clicked[l]);
    set.weight_late[l] = set.late_only[l].trace().real();
  }
  set.zero = reduce(late.no_click);
  set.weight_zero = set.zero.trace().real();
  return set;
}

}  // namespace

HeraldSet conditional_evolve(const NodeModel& node_a, const NodeModel& node_b,
                             double eta_arm, double t_f,
                             const QuadratureOptions& opts) {
  require(t_f > 0.0 && std::isfinite(t_f), "protocol window must be positive");
  require(eta_arm >= 0.0 && eta_arm <= 1.0, "arm efficiency must be in [0, 1]");
  const double t_d = 0.5 * t_f;
  const double rate_scale =
      std::max(node_a.emission_rate, node_b.emission_rate);
  double h = t_d / opts.min_steps;
  if (rate_scale > 0.0) h = std::min(h, 1.0 / (20.0 * rate_scale));
  int n = static_cast<int>(std::ceil(t_d / h));
  n += n % 2;

  HeraldSet fine = run_protocol(node_a, node_b, eta_arm, t_f, n);
  if (opts.convergence_check) {
    int n2 = n / 2;
    n2 += n2 % 2;
    HeraldSet coarse = run_protocol(node_a, node_b, eta_arm, t_f, n2);
    for (int e = 0; e < 2; ++e)
      for (int l = 0; l < 2; ++l)
        if (std::abs(fine.weight[e][l] - coarse.weight[e][l]) >
            opts.convergence_tol)
          throw NumericalError("one-jump quadrature not converged");
  }
  return fine;
}

HeraldSet conditional_evolve(const spinmech::EffectiveRates& rates_a,
                             const spinmech::EffectiveRates& rates_b,
                             const LinkParams& link, double t_f, NodeKind kind,
                             const QuadratureOptions& opts) {
  link.validate();
  if (kind == NodeKind::EffectiveCavity) {
    const NodeModel a = spinmech::effective_cavity_node(rates_a);
    const NodeModel b = spinmech::effective_cavity_node(rates_b);
    return conditional_evolve(a, b, link.eta_arm(), t_f, opts);
  }
  const NodeModel a = spinmech::incoherent_emitter_node(rates_a);
  const NodeModel b = spinmech::incoherent_emitter_node(rates_b);
  return conditional_evolve(a, b, link.eta_arm(), t_f, opts);
}

double bell_overlap(const Matrix& two_spin, bool plus) {
  const Eigen::Index d0 = kSpinD * kSpinDim + kSpin0;  // |D0>
  const Eigen::Index od = kSpin0 * kSpinDim + kSpinD;  // |0D>
  Vector psi = Vector::Zero(kSpinDim * kSpinDim);
  psi(d0) = 1.0 / std::sqrt(2.0);
  psi(od) = (plus ? 1.0 : -1.0) / std::sqrt(2.0);
  return (psi.adjoint() * two_spin * psi)(0, 0).real();
}

EtaFid apply_dark_counts(const HeraldSet& set, const LinkParams& link,
                         double d_th) {
  const double spur_rate = link.dark_rate_hz + d_th * link.eta_arm();
  const double p = 1.0 - std::exp(-spur_rate * set.t_d);
  const double q = 1.0 - p;

  EtaFid out;
  out.p_dark_window = p;
  out.accuracy_warning = p >= 0.1;

  double fid_sum = 0.0;
  for (int e = 0; e < 2; ++e)
    for (int l = 0; l < 2; ++l) {
      Matrix rho = q * q * set.record[e][l] +
                   p * q * q * (set.early_only[e] + set.late_only[l]) +
                   p * p * q * q * set.zero;
      const double w = rho.trace().real();
      out.record_weight[e][l] = w;
      out.eta_gen += w;
      if (w <= 0.0)
        throw PhysicsValidityError("record has zero probability; no herald");
      const double f = bell_overlap(rho, e == l) / w;
      out.record_fidelity[e][l] = f;
      fid_sum += f;
    }
  out.f_gen = 0.25 * fid_sum;
  return out;
}

double eta_bk(double emission_rate, double eta, double t_f) {
  require(emission_rate > 0.0, "emission rate must be positive");
  const double x = 1.0 - std::exp(-0.5 * t_f * emission_rate);
  return 0.5 * eta * eta * x * x;
}

double f_bk(double emission_rate, double gamma_s_star, double eta_t,
            double t_f) {
  const double eta = eta_bk(emission_rate, eta_t, t_f);
  if (eta <= 0.0)
    throw NumericalError("heralding efficiency is zero; fidelity undefined");
  const double r_tot = emission_rate + 2.0 * gamma_s_star;
  const double c =
      eta_t * emission_rate / r_tot * (1.0 - std::exp(-0.5 * t_f * r_tot));
  return 0.5 * (1.0 + c * c / (2.0 * eta));
}

std::vector<CurvePoint> herald_curve(const spinmech::EffectiveRates& rates,
                                     const LinkParams& link,
                                     const std::vector<double>& kappa1_tf_grid,
                                     NodeKind kind, Exec exec) {
  link.validate();
  std::vector<CurvePoint> out(kappa1_tf_grid.size());
  const double eta_t2 = link.eta_t() * link.eta_t();
  parallel_for(static_cast<std::int64_t>(kappa1_tf_grid.size()), exec,
               [&](std::int64_t i) {
                 CurvePoint pt;
                 pt.kappa1_tf = kappa1_tf_grid[i];
                 pt.t_f = pt.kappa1_tf / rates.kappa1;
                 HeraldSet set =
                     conditional_evolve(rates, rates, link, pt.t_f, kind);
                 EtaFid ef = apply_dark_counts(set, link, rates.dark_rate_th);
                 pt.eta_gen = ef.eta_gen;
                 pt.f_gen = ef.f_gen;
                 pt.eta_gen_scaled = ef.eta_gen / eta_t2;
                 out[i] = pt;
               });
  return out;
}

Peak peak_fidelity(const std::vector<CurvePoint>& curve) {
  require(!curve.empty(), "empty curve");
  Peak best;
  best.f_gen = -1.0;
  for (const auto& pt : curve) {
    if (pt.f_gen > best.f_gen) {
      best.f_gen = pt.f_gen;
      best.kappa1_tf = pt.kappa1_tf;
      best.eta_gen = pt.eta_gen;
    }
  }
  return best;
}

}  // namespace somrep::entgen
