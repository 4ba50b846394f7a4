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

#include "somrep/qops.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <sstream>

namespace somrep::qops {

namespace {
constexpr Complex kI{0.0, 1.0};
}

void DensityMatrix::validate(double pos_tol) const {
  const Eigen::Index d = dim();
  require(d >= 1 && rho.cols() == d, "density matrix must be square");
  const double herm = (rho - rho.adjoint()).norm();
  const double scale = std::max(1.0, rho.norm());
  require(herm <= 1e-10 * scale, "density matrix not Hermitian");
  const double tr = trace();
  if (normalized) {
    require(std::abs(tr - 1.0) <= 1e-9, "normalized state must have unit trace");
  } else {
    require(tr >= -1e-9 && tr <= 1.0 + 1e-9,
            "conditional state trace outside [0, 1]");
  }
  require(min_eigenvalue(rho) >= -pos_tol,
          "density matrix has a negative eigenvalue beyond tolerance");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Matrix out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i)
    for (Eigen::Index j = 0; j < ac; ++j)
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

Matrix dissipator_apply(const LindbladTerm& term, const Matrix& rho) {
  require(term.rate >= 0.0 && std::isfinite(term.rate),
          "Lindblad rate must be finite and non-negative");
  require(term.collapse.rows() == rho.rows() && rho.rows() == rho.cols(),
          "dissipator dimension mismatch");
  const Matrix& a = term.collapse;
  const Matrix ada = a.adjoint() * a;
  return term.rate * (a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada));
}

Matrix spre(const Matrix& a) { return kron(identity(a.rows()), a); }

Matrix spost(const Matrix& a) {
  return kron(a.transpose(), identity(a.rows()));
}

Matrix sandwich_superop(const Matrix& a) {
  return kron(a.conjugate(), a);
}

Matrix build_liouvillian(const Matrix& h, const std::vector<LindbladTerm>& terms) {
  const Eigen::Index d = h.rows();
  require(h.cols() == d, "Hamiltonian must be square");
  Matrix l = -kI * (spre(h) - spost(h));
  for (const auto& t : terms) {
    require(t.collapse.rows() == d && t.collapse.cols() == d,
            "collapse operator dimension mismatch");
    const Matrix ada = t.collapse.adjoint() * t.collapse;
    l += t.rate * (sandwich_superop(t.collapse) -
                   0.5 * (spre(ada) + spost(ada)));
  }
  return l;
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index dim) {
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix expm(const Matrix& m) {
  Matrix e = m.exp();
  require(e.allFinite(), "matrix exponential produced non-finite entries");
  return e;
}

Propagator::Propagator(const Matrix& liouvillian, double dt) : dt_(dt) {
  require(dt >= 0.0 && std::isfinite(dt), "propagation time must be >= 0");
  e_ = expm(liouvillian * dt);
}

DensityMatrix Propagator::apply(const DensityMatrix& rho) const {
  DensityMatrix out;
  out.rho = unvec(e_ * vec(rho.rho), rho.dim());
  out.normalized = rho.normalized;
  return out;
}

DensityMatrix propagate(const Matrix& liouvillian, const DensityMatrix& rho0,
                        double t) {
  Propagator p(liouvillian, t);
  return p.apply(rho0);
}

DensityMatrix steady_state(const Matrix& liouvillian, double rank_tol) {
  const Eigen::Index n = liouvillian.rows();
  const Eigen::Index d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(n))));
  require(d * d == n, "superoperator dimension is not a perfect square");

  Eigen::BDCSVD<Matrix> svd(liouvillian, Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double cutoff = rank_tol * std::max(sigma(0), 1e-300);
  Eigen::Index kernel_dim = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) <= cutoff) ++kernel_dim;
  if (kernel_dim != 1) {
    std::ostringstream msg;
    msg << "steady state is not unique: kernel dimension " << kernel_dim;
    throw NumericalError(msg.str());
  }
  Vector null_vec = svd.matrixV().col(n - 1);
  Matrix rho = unvec(null_vec, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  require(std::abs(tr) > 1e-14, "steady-state candidate has zero trace");
  rho /= tr;
  const double residual = (liouvillian * vec(rho)).norm();
  require(residual < 1e-10 * std::max(1.0, liouvillian.norm()),
          "steady-state residual too large");
  DensityMatrix out{rho, true};
  return out;
}

double expectation(const Matrix& obs, const Matrix& rho) {
  return (obs * rho).trace().real();
}

double integrate_expectation(const Matrix& liouvillian, const DensityMatrix& rho0,
                             const Matrix& obs, double T, int steps) {
  require(T >= 0.0, "integration window must be >= 0");
  if (T == 0.0) return 0.0;
  int n = std::max(2, steps);
  if (n % 2) ++n;
  const double h = T / n;
  Propagator step(liouvillian, h);
  Vector v = vec(rho0.rho);
  const Vector obs_vec = vec(Matrix(obs.adjoint()));
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * (obs_vec.dot(v)).real();
    if (k < n) v = step.apply(v);
  }
  return sum * h / 3.0;
}

Matrix partial_trace(const Matrix& rho, Eigen::Index dim_a, Eigen::Index dim_b,
                     int keep) {
  require(rho.rows() == dim_a * dim_b && rho.cols() == rho.rows(),
          "partial trace dimension mismatch");
  if (keep == 0) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        for (Eigen::Index k = 0; k < dim_b; ++k)
          out(i, j) += rho(i * dim_b + k, j * dim_b + k);
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (Eigen::Index i = 0; i < dim_b; ++i)
    for (Eigen::Index j = 0; j < dim_b; ++j)
      for (Eigen::Index k = 0; k < dim_a; ++k)
        out(i, j) += rho(k * dim_b + i, k * dim_b + j);
  return out;
}

double min_eigenvalue(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

Matrix destroy(Eigen::Index dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (Eigen::Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Matrix ket_bra(Eigen::Index dim, Eigen::Index i, Eigen::Index j) {
  Matrix m = Matrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

}  // namespace somrep::qops
