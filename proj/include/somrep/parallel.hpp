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

#ifdef SOMREP_HAVE_OPENMP
#include <omp.h>
#endif

namespace somrep {

/// Execution policy for the data-parallel kernels. `Serial` is the
/// reference implementation used to validate the OpenMP path; both must
/// produce identical results because every loop body writes only to its
/// own output slot and reductions are performed in index order afterwards.
enum class Exec { Serial, Parallel };

/// Map `fn(i)` over i in [0, n). With Exec::Parallel the iterations run
/// under OpenMP; bodies must be independent.
template <class Fn>
void parallel_for(std::int64_t n, Exec exec, Fn&& fn) {
#ifdef SOMREP_HAVE_OPENMP
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
#else
  (void)exec;
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    fn(i);
  }
}

inline int max_threads() {
#ifdef SOMREP_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace somrep
