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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "somrep/scenarios.hpp"

#ifdef SOMREP_HAVE_OPENMP
#include <omp.h>
#endif

namespace {

int run_scenario(const std::string& name, const std::string& config_path,
                 const std::vector<std::string>& sets,
                 const std::string& out_path, const std::string& format,
                 std::uint64_t seed, int threads) {
  using namespace somrep;
  scenarios::RunOptions opts;
  opts.scenario = name;
  if (!config_path.empty())
    opts.overrides = config::Config::from_file(config_path);
  for (const auto& s : sets) opts.overrides.set(s);
  opts.out_path = out_path;
  if (format == "csv")
    opts.format = config::TableWriter::Format::Csv;
  else if (format == "json")
    opts.format = config::TableWriter::Format::Json;
  else
    throw ConfigError("--format must be csv or json");
  opts.seed = seed;
  opts.exec = threads == 1 ? Exec::Serial : Exec::Parallel;
#ifdef SOMREP_HAVE_OPENMP
  if (threads > 1) omp_set_num_threads(threads);
#endif
  const bool ok = scenarios::run(opts, std::cout);
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-optomechanics repeater simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv";
  std::vector<std::string> sets;
  std::uint64_t seed = 12345;
  int threads = 0;  // 0 = all cores, 1 = serial reference

  app.add_option("--config", config_path, "parameter file (key = value lines)");
  app.add_option("--set", sets, "override KEY=VALUE (repeatable)")
      ->take_all();
  app.add_option("--out", out_path, "output path (default: stdout)");
  app.add_option("--format", format, "csv|json")->capture_default_str();
  app.add_option("--seed", seed, "random seed for Monte Carlo checks")
      ->capture_default_str();
  app.add_option("--threads", threads,
                 "worker threads (0 = all cores, 1 = serial)")
      ->capture_default_str();

  for (const std::string name : {"entgen", "readout", "rates", "sweep",
                                 "validate"})
    app.add_subcommand(name);

  CLI11_PARSE(app, argc, argv);

  const std::string scenario = app.get_subcommands().front()->get_name();
  try {
    return run_scenario(scenario, config_path, sets, out_path, format, seed,
                        threads);
  } catch (const somrep::ConfigError& e) {
    std::cerr << "error=config reason=\"" << e.what() << "\"\n";
    return 1;
  } catch (const somrep::PhysicsValidityError& e) {
    std::cerr << "error=physics_validity reason=\"" << e.what() << "\"\n";
    return 2;
  } catch (const somrep::NumericalError& e) {
    std::cerr << "error=numerical reason=\"" << e.what() << "\"\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error=internal reason=\"" << e.what() << "\"\n";
    return 3;
  }
}
