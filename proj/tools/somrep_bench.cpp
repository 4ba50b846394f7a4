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

// Times the data-parallel kernels under the serial reference and the
// OpenMP execution policy and reports the speedup. The two paths must
// agree exactly; the benchmark asserts that while it runs.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "somrep/entgen.hpp"
#include "somrep/repeater.hpp"
#include "somrep/scenarios.hpp"

using namespace somrep;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <class Fn>
double timed(Fn&& fn) {
  const double t0 = now_s();
  fn();
  return now_s() - t0;
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n",
              name, serial_s, parallel_s, serial_s / parallel_s);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", max_threads());

  // Heralding curve over the protocol-window grid.
  {
    const auto rates = spinmech::effective_rates_direct(
        kPi * 2e4, kTwoPi * 2e4, kTwoPi * 20.0, kTwoPi * 20.0, kTwoPi * 20.0,
        kTwoPi * 200.0);
    entgen::LinkParams link;
    std::vector<double> grid;
    for (int i = 0; i < 12; ++i) grid.push_back(3.0 + i);
    std::vector<entgen::CurvePoint> a, b;
    const double ts = timed([&] {
      a = entgen::herald_curve(rates, link, grid,
                               entgen::NodeKind::EffectiveCavity, Exec::Serial);
    });
    const double tp = timed([&] {
      b = entgen::herald_curve(rates, link, grid,
                               entgen::NodeKind::EffectiveCavity,
                               Exec::Parallel);
    });
    double max_dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      max_dev = std::max(max_dev, std::abs(a[i].f_gen - b[i].f_gen));
    report("herald_curve (12 windows)", ts, tp);
    std::printf("  policy agreement: max |df| = %.3g\n", max_dev);
  }

  // Monte Carlo attempt statistics.
  {
    repeater::McResult a, b;
    const double ts = timed(
        [&] { a = repeater::mc_max_attempts(8, 0.01, 4000000, 7, Exec::Serial); });
    const double tp = timed([&] {
      b = repeater::mc_max_attempts(8, 0.01, 4000000, 7, Exec::Parallel);
    });
    report("mc_max_attempts (4e6)", ts, tp);
    std::printf("  policy agreement: |dmean| = %.3g\n",
                std::abs(a.mean - b.mean));
  }

  // Full chain sweep with a closed-form link fidelity.
  {
    repeater::RepeaterConfig base;
    auto fgen = [](double l0) { return 0.97 * std::exp(-l0 / 2000.0); };
    repeater::SweepResult a, b;
    const double ts = timed([&] {
      a = repeater::sweep({4, 6, 8, 10, 12, 14, 16}, {1, 10, 100}, 100, 800,
                          5, base, fgen, 1e10, 1.0, Exec::Serial);
    });
    const double tp = timed([&] {
      b = repeater::sweep({4, 6, 8, 10, 12, 14, 16}, {1, 10, 100}, 100, 800,
                          5, base, fgen, 1e10, 1.0, Exec::Parallel);
    });
    double max_dev = 0.0;
    for (std::size_t i = 0; i < a.points.size(); ++i)
      max_dev = std::max(max_dev,
                         std::abs(a.points[i].fidelity - b.points[i].fidelity));
    report("repeater sweep (grid)", ts, tp);
    std::printf("  policy agreement: max |df| = %.3g\n", max_dev);
  }
  return 0;
}
