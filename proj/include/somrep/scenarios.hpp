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

#include <iosfwd>
#include <string>

#include "somrep/config.hpp"
#include "somrep/entgen.hpp"
#include "somrep/readout.hpp"
#include "somrep/repeater.hpp"

namespace somrep::scenarios {

struct RunOptions {
  std::string scenario;  // entgen | readout | rates | sweep | validate
  config::Config overrides;
  std::string out_path;  // empty -> stdout
  config::TableWriter::Format format = config::TableWriter::Format::Csv;
  std::uint64_t seed = 12345;
  Exec exec = Exec::Parallel;
};

/// Default key set of one scenario (the allowed-key registry).
const std::map<std::string, std::string>& scenario_defaults(
    const std::string& scenario);

/// Effective node rates from a resolved config (`node.*` keys).
spinmech::EffectiveRates node_rates_from(const config::Config& cfg);

/// Node rates of the readout operating point (`readout.thermal_occupation`
/// sets kappa2 = occ/(1+occ) * kappa1 and the matching flip-flop rates).
spinmech::EffectiveRates readout_rates_from(const config::Config& cfg);

entgen::LinkParams link_from(const config::Config& cfg);

repeater::RepeaterConfig repeater_from(const config::Config& cfg);

/// Peak heralded fidelity over the configured window grid for one
/// elementary link length (the quantity entering the chain fidelity).
double simulated_f_gen(const spinmech::EffectiveRates& rates,
                       const entgen::LinkParams& link,
                       const std::vector<double>& tf_grid);

/// Runs one scenario; emits data to opts.out_path (stdout when empty)
/// and human-readable progress/validation lines to `log`. Returns true
/// when every executed check passed (always true for data scenarios).
bool run(const RunOptions& opts, std::ostream& log);

/// The invariant suite behind the `validate` scenario.
bool run_validate(const config::Config& cfg, std::uint64_t seed, Exec exec,
                  std::ostream& log);

}  // namespace somrep::scenarios
