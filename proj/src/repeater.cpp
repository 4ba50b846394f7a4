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

#include "somrep/repeater.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace somrep::repeater {

double AttemptDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) m += double(i + 1) * pmf[i];
  return m;
}

double AttemptDistribution::total() const {
  double t = 0.0;
  for (double v : pmf) t += v;
  return t;
}

AttemptDistribution attempt_distribution(int x, double p0, double tail_tol) {
  require(x >= 1, "need at least one link");
  if (!(p0 > 0.0 && p0 < 1.0))
    throw PhysicsValidityError("success probability must be in (0, 1)");
  AttemptDistribution d;
  d.x = x;
  d.p0 = p0;
  const double q = 1.0 - p0;
  // cdf(n) = (1 - q^n)^x; extend until the tail is below tolerance.
  double qn = 1.0;  // q^n
  double cdf_prev = 0.0;
  std::int64_t n = 0;
  const std::int64_t hard_cap = 1 << 28;
  while (true) {
    ++n;
    qn *= q;
    const double cdf = std::pow(1.0 - qn, x);
    d.pmf.push_back(cdf - cdf_prev);
    cdf_prev = cdf;
    if (1.0 - cdf <= tail_tol) break;
    require(n < hard_cap, "attempt distribution failed to converge");
  }
  return d;
}

double f_exact(int x, double p0) {
  require(x >= 1, "need at least one link");
  if (!(p0 > 0.0 && p0 < 1.0))
    throw PhysicsValidityError("success probability must be in (0, 1)");
  // E[max] = sum_{n>=0} (1 - (1 - q^n)^x), summed until the survival
  // term is negligible.
  const double q = 1.0 - p0;
  double qn = 1.0;
  double mean = 0.0;
  const std::int64_t hard_cap = 1 << 28;
  for (std::int64_t n = 0; n < hard_cap; ++n) {
    const double surv = 1.0 - std::pow(1.0 - qn, x);
    mean += surv;
    if (surv < 1e-13 && n > 0) break;
    qn *= q;
  }
  return p0 * mean;
}

double f_exact_limit(int x) {
  require(x >= 1, "need at least one link");
  double h = 0.0;
  for (int k = 1; k <= x; ++k) h += 1.0 / k;
  return h;
}

double f_regression(double x) {
  require(x >= 2.0, "regression fit only covers x >= 2");
  return 0.64 * std::log2(x) + 0.83;
}

RegressionFit refit_regression(int k_min, int k_max) {
  require(k_max > k_min, "need at least two points to fit");
  const int n = k_max - k_min + 1;
  double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double y = f_exact_limit(1 << k);
    sk += k;
    sy += y;
    skk += double(k) * k;
    sky += k * y;
  }
  RegressionFit fit;
  fit.slope = (n * sky - sk * sy) / (n * skk - sk * sk);
  fit.intercept = (sy - fit.slope * sk) / n;
  return fit;
}

namespace {

// splitmix64; fixed per-block seeding keeps the Monte Carlo result
// independent of thread count.
std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
  return std::ldexp(double(splitmix(state) >> 11), -53) + 1e-300;
}

}  // namespace

McResult mc_max_attempts(int x, double p0, std::int64_t trials,
                         std::uint64_t seed, Exec exec) {
  require(x >= 1 && trials > 0, "invalid Monte Carlo request");
  if (!(p0 > 0.0 && p0 < 1.0))
    throw PhysicsValidityError("success probability must be in (0, 1)");
  const std::int64_t blocks = 512;
  std::vector<double> sum(blocks, 0.0), sum2(blocks, 0.0);
  std::vector<std::int64_t> cnt(blocks, 0);
  const double log_q = std::log1p(-p0);

  parallel_for(blocks, exec, [&](std::int64_t b) {
    std::uint64_t state = seed * 0x9e3779b97f4a7c15ULL + 0x1234567ULL + b;
    const std::int64_t lo = b * trials / blocks;
    const std::int64_t hi = (b + 1) * trials / blocks;
    double s = 0.0, s2 = 0.0;
    for (std::int64_t t = lo; t < hi; ++t) {
      double maxed = 0.0;
      for (int link = 0; link < x; ++link) {
        const double u = uniform01(state);
        const double attempts = std::floor(std::log(u) / log_q) + 1.0;
        maxed = std::max(maxed, attempts);
      }
      s += maxed;
      s2 += maxed * maxed;
    }
    sum[b] = s;
    sum2[b] = s2;
    cnt[b] = hi - lo;
  });

  double s = 0.0, s2 = 0.0;
  std::int64_t n = 0;
  for (std::int64_t b = 0; b < blocks; ++b) {
    s += sum[b];
    s2 += sum2[b];
    n += cnt[b];
  }
  McResult out;
  out.trials = n;
  out.mean = s / n;
  const double var = std::max(0.0, s2 / n - out.mean * out.mean);
  out.std_error = std::sqrt(var / n);
  return out;
}

double RepeaterConfig::p0() const {
  return 0.5 * p_emit * p_emit * eta_d * eta_d *
         std::exp(-link_km() / l_att_km);
}

double RepeaterConfig::f_factor() const {
  const int x = m / 2;
  if (use_regression_f && x >= 2) return f_regression(double(x));
  return f_exact_limit(x);
}

double RepeaterConfig::p_channel() const {
  return m * p0() / (2.0 * f_factor());
}

void RepeaterConfig::validate() const {
  if (m < 2 || m % 2 != 0)
    throw PhysicsValidityError("link count m must be even and >= 2");
  if (channels < 1) throw PhysicsValidityError("need at least one channel");
  if (!(total_km > 0.0 && l_att_km > 0.0 && c_mps > 0.0))
    throw PhysicsValidityError("distances and light speed must be positive");
  const double prob = p0();
  if (!(prob > 0.0 && prob < 1.0))
    throw PhysicsValidityError("entanglement generation probability outside (0, 1)");
  for (double f : {f_gen, f_mp, f_nro})
    if (!(f >= 0.0 && f <= 1.0))
      throw PhysicsValidityError("fidelities must be in [0, 1]");
}

double distribution_time(const RepeaterConfig& cfg) {
  cfg.validate();
  double pt = cfg.p_channel();
  if (pt >= 1.0) pt = 1.0;  // formula breaks down; clamp to the light limit
  const double round_s = cfg.total_km * 1e3 / cfg.c_mps;
  const double success = 1.0 - std::pow(1.0 - pt, cfg.channels);
  return round_s / success + cfg.t_mp_s + cfg.t_sw_s;
}

double distribution_time_nonmux(const RepeaterConfig& cfg) {
  cfg.validate();
  const double l_m = cfg.total_km * 1e3;
  return 2.0 * cfg.f_factor() * l_m / (cfg.c_mps * cfg.m * cfg.p0()) +
         cfg.t_mp_s + cfg.t_sw_s;
}

double overall_fidelity(const RepeaterConfig& cfg, double t_s) {
  cfg.validate();
  return std::pow(cfg.f_gen, cfg.m) * std::pow(cfg.f_mp, cfg.m) *
         std::pow(cfg.f_nro, cfg.m - 1) * std::exp(-cfg.gamma_n_hz * t_s);
}

double rate_direct_transmission(double l_km, double rep_rate_hz,
                                double l_att_km, double detector_factor) {
  return rep_rate_hz * std::exp(-l_km / l_att_km) * detector_factor;
}

double crossover_km(const RepeaterConfig& cfg, double l_min_km,
                    double l_max_km, double dt_rep_rate_hz,
                    double dt_detector_factor) {
  auto beats = [&](double l) {
    RepeaterConfig c = cfg;
    c.total_km = l;
    const double rate = 1.0 / distribution_time(c);
    return rate >= rate_direct_transmission(l, dt_rep_rate_hz, cfg.l_att_km,
                                            dt_detector_factor);
  };
  double lo = l_min_km, hi = l_max_km;
  if (beats(lo)) return lo;
  if (!beats(hi)) return -1.0;
  while (hi - lo > 1.0) {
    const double mid = std::floor(0.5 * (lo + hi));
    (beats(mid) ? hi : lo) = mid;
  }
  return hi;
}

SweepResult sweep(const std::vector<int>& m_list, const std::vector<int>& n_list,
                  double l_min_km, double l_max_km, double l_step_km,
                  const RepeaterConfig& base,
                  const std::function<double(double)>& f_gen_of_link,
                  double dt_rep_rate_hz, double dt_detector_factor, Exec exec) {
  require(l_step_km > 0.0 && l_max_km >= l_min_km, "bad sweep grid");
  std::vector<double> l_grid;
  for (double l = l_min_km; l <= l_max_km + 1e-9; l += l_step_km)
    l_grid.push_back(l);

  // Per-link fidelities depend only on L/m; evaluate each unique length
  // once (this is where the heralding simulation cost sits).
  std::map<double, double> fgen_cache;
  std::vector<double> unique_l0;
  for (int m : m_list)
    for (double l : l_grid) {
      const double l0 = l / m;
      if (fgen_cache.emplace(l0, 0.0).second) unique_l0.push_back(l0);
    }
  std::vector<double> fgen_vals(unique_l0.size());
  parallel_for(static_cast<std::int64_t>(unique_l0.size()), exec,
               [&](std::int64_t i) { fgen_vals[i] = f_gen_of_link(unique_l0[i]); });
  for (std::size_t i = 0; i < unique_l0.size(); ++i)
    fgen_cache[unique_l0[i]] = fgen_vals[i];

  SweepResult out;
  out.points.resize(m_list.size() * n_list.size() * l_grid.size());
  std::int64_t idx = 0;
  for (int n : n_list)
    for (int m : m_list)
      for (double l : l_grid) {
        SweepPoint pt;
        pt.l_km = l;
        pt.m = m;
        pt.channels = n;
        RepeaterConfig cfg = base;
        cfg.m = m;
        cfg.channels = n;
        cfg.total_km = l;
        cfg.f_gen = fgen_cache.at(l / m);
        const double t = distribution_time(cfg);
        pt.rate_hz = 1.0 / t;
        pt.fidelity = overall_fidelity(cfg, t);
        pt.p0 = cfg.p0();
        pt.beats_dt =
            pt.rate_hz >= rate_direct_transmission(l, dt_rep_rate_hz,
                                                   base.l_att_km,
                                                   dt_detector_factor);
        out.points[idx++] = pt;
      }

  // Argmax-fidelity configuration per distance, merged into bands.
  for (int n : n_list) {
    OptimalBand band;
    band.channels = n;
    band.m = 0;
    for (double l : l_grid) {
      int best_m = 0;
      double best_f = -1.0;
      for (const auto& pt : out.points)
        if (pt.channels == n && pt.l_km == l && pt.fidelity > best_f) {
          best_f = pt.fidelity;
          best_m = pt.m;
        }
      if (band.m != best_m) {
        if (band.m != 0) out.bands.push_back(band);
        band.m = best_m;
        band.l_from_km = l;
      }
      band.l_to_km = l;
    }
    if (band.m != 0) out.bands.push_back(band);
  }
  return out;
}

}  // namespace somrep::repeater
