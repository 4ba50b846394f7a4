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

#include "somrep/common.hpp"

namespace somrep::qops {

// Dense complex operator algebra for small Hilbert spaces (dim <= 32,
// superoperators <= 1024x1024). All superoperators use column-stacking
// vectorization, fixed project-wide: vec(rho)[j*d + i] = rho(i, j), so
// vec(A rho B) = (B^T kron A) vec(rho).

/// A (possibly unnormalized) quantum state. `normalized` declares the
/// intent: conditional states produced by heralding carry their herald
/// probability as the trace and are stored unnormalized.
struct DensityMatrix {
  Matrix rho;
  bool normalized = true;

  Eigen::Index dim() const { return rho.rows(); }
  double trace() const { return rho.trace().real(); }

  /// Checks Hermiticity (1e-10), spectrum >= -1e-10 and the trace
  /// condition implied by `normalized`. Throws NumericalError.
  void validate(double pos_tol = 1e-10) const;
};

/// One dissipative channel: rate * D[collapse], D[A]rho = A rho A^+
/// - {A^+A, rho}/2.
struct LindbladTerm {
  double rate = 0.0;  // 1/s, >= 0
  Matrix collapse;
};

/// Tensor product, left factor varying slowest (row-major block order).
Matrix kron(const Matrix& a, const Matrix& b);

/// rate * (A rho A^+ - {A^+A, rho}/2). The result is trace-free.
Matrix dissipator_apply(const LindbladTerm& term, const Matrix& rho);

/// Left/right multiplication superoperators and the sandwich
/// S(rho) = A rho A^+ in vectorized form.
Matrix spre(const Matrix& a);
Matrix spost(const Matrix& a);
Matrix sandwich_superop(const Matrix& a);

/// Column-stacked Liouvillian of rho' = -i[H, rho] + sum_r rate_r D[A_r].
Matrix build_liouvillian(const Matrix& h, const std::vector<LindbladTerm>& terms);

Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index dim);

/// Scaling-and-squaring matrix exponential. Throws NumericalError if the
/// result is not finite (ill-conditioned input rates).
Matrix expm(const Matrix& m);

/// Cached propagator for one fixed (L, dt) pair; repeated stepping reuses
/// the single matrix exponential.
class Propagator {
 public:
  Propagator(const Matrix& liouvillian, double dt);

  /// exp(L dt) applied to a vectorized state.
  Vector apply(const Vector& v) const { return e_ * v; }
  DensityMatrix apply(const DensityMatrix& rho) const;
  const Matrix& matrix() const { return e_; }
  double dt() const { return dt_; }

 private:
  Matrix e_;
  double dt_;
};

/// vec(rho(t)) = exp(L t) vec(rho0), t >= 0.
DensityMatrix propagate(const Matrix& liouvillian, const DensityMatrix& rho0,
                        double t);

/// Normalized kernel element of L. Throws NumericalError when the kernel
/// dimension differs from one (the multiplicity is reported in the
/// message rather than silently picking a state).
DensityMatrix steady_state(const Matrix& liouvillian, double rank_tol = 1e-9);

/// <obs> in state rho (rho may be unnormalized; no division by trace).
double expectation(const Matrix& obs, const Matrix& rho);

/// integral_0^T <obs>(t) dt by composite Simpson on a cached one-step
/// propagator; `steps` is rounded up to the next even count.
double integrate_expectation(const Matrix& liouvillian, const DensityMatrix& rho0,
                             const Matrix& obs, double T, int steps);

/// Partial trace of a state on H_A (x) H_B; keep = 0 keeps A, 1 keeps B.
Matrix partial_trace(const Matrix& rho, Eigen::Index dim_a, Eigen::Index dim_b,
                     int keep);

/// Smallest eigenvalue of the Hermitian part of rho.
double min_eigenvalue(const Matrix& rho);

Matrix identity(Eigen::Index dim);

/// Bosonic annihilation operator on a Fock space truncated at dim-1 quanta.
Matrix destroy(Eigen::Index dim);

/// |i><j| on a dim-dimensional space.
Matrix ket_bra(Eigen::Index dim, Eigen::Index i, Eigen::Index j);

}  // namespace somrep::qops
