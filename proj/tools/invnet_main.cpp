//------------------------------------------------------------------------------
//
//   Copyright 2026 The invnet Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "invnet/commands.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>
#include <string>

int main(int argc, char **argv)
{
  CLI::App app{"Agent-based simulator of trust-driven investment networks"};
  app.require_subcommand(1);

  std::string                  config_path;
  std::string                  out_dir;
  std::optional<std::uint64_t> seed;
  auto *run = app.add_subcommand("run", "Run one simulation and write snapshots");
  run->add_option("--config", config_path, "Key-value config file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Override rng_seed from the config");

  std::string in_dir;
  std::string metrics_file;
  auto *analyze = app.add_subcommand("analyze", "Compute network metrics for every snapshot");
  analyze->add_option("--in", in_dir, "Run directory holding snapshots")->required();
  analyze->add_option("--out", metrics_file, "metrics.csv to write; tailfit.csv goes beside it")
      ->required();

  std::string spec_path;
  std::string sweep_out;
  unsigned    parallel = 1;
  auto *sweep = app.add_subcommand("sweep", "Run a parameter sweep and summarise it");
  sweep->add_option("--spec", spec_path, "Sweep spec file")->required();
  sweep->add_option("--out", sweep_out, "Output directory")->required();
  sweep->add_option("--parallel", parallel, "Concurrent runs")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (*run)
  {
    return invnet::cmd_run(config_path, out_dir, seed, std::cerr);
  }
  if (*analyze)
  {
    return invnet::cmd_analyze(in_dir, metrics_file, std::cerr);
  }
  return invnet::cmd_sweep(spec_path, sweep_out, parallel, std::cerr);
}
