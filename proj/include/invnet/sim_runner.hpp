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

#pragma once

#include "invnet/core_model.hpp"
#include "invnet/project_engine.hpp"
#include "invnet/random_stream.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace invnet {

/// Full parameter set of one simulation. Defaults are the reference
/// experiment: 10^4 investors, 100 initiators, 10^5 steps, threshold 9,
/// x(0) = 1, a = 0.5, gamma = 0.1, beta = 1, q = 0.5. Returns are always
/// drawn uniformly from (-1, 1).
struct SimConfig
{
  std::size_t   num_investors{10000};
  std::size_t   num_initiators{100};
  std::uint64_t num_steps{100000};
  double        threshold{9.0};
  double        invest_proportion{0.5};
  double        initial_budget{1.0};
  double        income{0.5};
  double        memory{0.1};
  double        greediness{1.0};
  std::uint64_t rng_seed{1};
  std::uint64_t snapshot_every{1000};
  StakePolicy   initiator_stake{StakePolicy::outside_threshold};

  bool operator==(SimConfig const &) const = default;
};

/// Throws ContractError naming the first invalid field.
void validate(SimConfig const &config);

struct SimState
{
  std::uint64_t step{0};
  Population    population;
  WeightMatrix  weights;
  SeededStream  rng{0};

  // per-step scratch, indexed by investor
  std::vector<char> in_project;
};

/// One line of the run's event log.
struct StepEvent
{
  std::uint64_t         step{0};  // 1-based number of the step just completed
  std::size_t           initiator{0};
  std::size_t           contacted{0};
  std::size_t           accepted{0};
  double                total_committed{0.0};
  ProjectStatus         status{ProjectStatus::aborted};
  std::optional<double> return_value;
};

struct Snapshot
{
  std::uint64_t             step{0};
  std::vector<double>       investor_budgets;
  std::vector<double>       initiator_budgets;
  ReputationReport          reputations;
  std::vector<WeightedEdge> edges;  // exactly the pairs with w_kj > 0, row-major order
};

SimState initial_state(SimConfig const &config);

/// Advances the state by one time step:
///   1. pick an initiator uniformly,
///   2. solicit investors (form_project),
///   3. if launched, draw r ~ U(-1,1) and settle,
///   4. everybody outside the settled project receives income,
///   5. every weight decays by e^{-gamma} and this step's payoffs are deposited,
///   6. the step counter increments.
StepEvent step(SimState &state, SimConfig const &config, RandomStream &rng);

/// Same as above, drawing from the state's own seeded stream.
StepEvent step(SimState &state, SimConfig const &config);

Snapshot snapshot(SimState const &state);

using SnapshotSink = std::function<void(Snapshot const &)>;
using EventSink    = std::function<void(StepEvent const &)>;

/// Runs config.num_steps steps from a fresh state. A snapshot is emitted every
/// snapshot_every steps and after the final step (once, for num_steps == 0).
SimState run(SimConfig const &config, SnapshotSink const &on_snapshot,
             EventSink const &on_event = {});

struct RunResult
{
  std::vector<Snapshot> snapshots;
  SimState              final_state;
};

/// Convenience for small runs: collects every snapshot in memory.
RunResult run(SimConfig const &config);

}  // namespace invnet
