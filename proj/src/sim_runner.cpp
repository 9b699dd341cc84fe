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

#include "invnet/sim_runner.hpp"

#include <cmath>
#include <string>

namespace invnet {
namespace {

void require(bool ok, char const *what)
{
  if (!ok)
  {
    throw ContractError(what);
  }
}

}  // namespace

void validate(SimConfig const &config)
{
  require(config.num_investors >= 1, "num_investors must be >= 1");
  require(config.num_initiators >= 1, "num_initiators must be >= 1");
  require(std::isfinite(config.threshold) && config.threshold >= 0.0,
          "threshold must be a finite value >= 0");
  require(config.invest_proportion >= 0.0 && config.invest_proportion <= 1.0,
          "invest_proportion must lie in [0,1]");
  require(std::isfinite(config.initial_budget) && config.initial_budget >= 0.0,
          "initial_budget must be a finite value >= 0");
  require(std::isfinite(config.income) && config.income >= 0.0,
          "income must be a finite value >= 0");
  require(config.memory >= 0.0, "memory must be >= 0");
  require(std::isfinite(config.greediness), "greediness must be finite");
  require(config.snapshot_every >= 1, "snapshot_every must be >= 1");
}

SimState initial_state(SimConfig const &config)
{
  validate(config);
  SimState state;
  state.rng = SeededStream{config.rng_seed};

  AgentState investor{config.initial_budget, config.invest_proportion, config.income,
                      Role::investor};
  AgentState initiator = investor;
  initiator.role = Role::initiator;
  state.population.investors.assign(config.num_investors, investor);
  state.population.initiators.assign(config.num_initiators, initiator);
  state.weights = WeightMatrix{config.num_investors, config.num_initiators};
  state.in_project.assign(config.num_investors, 0);
  return state;
}

StepEvent step(SimState &state, SimConfig const &config, RandomStream &rng)
{
  auto &population = state.population;

  std::size_t const initiator = rng.pick(population.initiators.size());
  ProjectOutcome    outcome = form_project(population, state.weights, initiator, config.threshold,
                                           config.greediness, rng, state.step,
                                           config.initiator_stake);
  Project          &project = outcome.project;

  StepEvent event;
  event.step = state.step + 1;
  event.initiator = initiator;
  event.contacted = outcome.contacted;
  event.accepted = outcome.accepted;
  event.total_committed = project.total_committed;

  Settlement settlement;
  bool const launched = project.status == ProjectStatus::launched;
  if (launched)
  {
    settlement = settle_project(population, project, draw_return(rng));
    event.return_value = project.return_value;
  }
  event.status = project.status;

  // income for everyone who did not take part in a settled project
  auto &marks = state.in_project;
  marks.assign(population.investors.size(), 0);
  for (auto const &d : settlement.deposits)
  {
    marks[d.investor] = 1;
  }
  for (std::size_t k = 0; k < population.investors.size(); ++k)
  {
    if (!marks[k])
    {
      population.investors[k].budget += population.investors[k].income;
    }
  }
  for (std::size_t j = 0; j < population.initiators.size(); ++j)
  {
    if (!(launched && j == initiator))
    {
      population.initiators[j].budget += population.initiators[j].income;
    }
  }

  // w <- p + w e^{-gamma} for every pair; p is zero outside this project
  double const decay = std::exp(-config.memory);
  if (decay != 1.0)
  {
    state.weights.scale(decay);
  }
  for (auto const &d : settlement.deposits)
  {
    state.weights(d.investor, initiator) += d.payoff;
  }

  ++state.step;
  return event;
}

StepEvent step(SimState &state, SimConfig const &config)
{
  return step(state, config, state.rng);
}

Snapshot snapshot(SimState const &state)
{
  Snapshot snap;
  snap.step = state.step;
  snap.investor_budgets.reserve(state.population.investors.size());
  for (auto const &a : state.population.investors)
  {
    snap.investor_budgets.push_back(a.budget);
  }
  snap.initiator_budgets.reserve(state.population.initiators.size());
  for (auto const &a : state.population.initiators)
  {
    snap.initiator_budgets.push_back(a.budget);
  }
  snap.reputations = compute_reputations(state.weights);
  for (std::size_t k = 0; k < state.weights.investors(); ++k)
  {
    auto const row = state.weights.row(k);
    for (std::size_t j = 0; j < row.size(); ++j)
    {
      if (row[j] > 0.0)
      {
        snap.edges.push_back({k, j, row[j]});
      }
    }
  }
  return snap;
}

SimState run(SimConfig const &config, SnapshotSink const &on_snapshot, EventSink const &on_event)
{
  SimState state = initial_state(config);
  if (config.num_steps == 0 && on_snapshot)
  {
    on_snapshot(snapshot(state));
  }
  while (state.step < config.num_steps)
  {
    StepEvent const event = step(state, config);
    if (on_event)
    {
      on_event(event);
    }
    bool const due = state.step % config.snapshot_every == 0 || state.step == config.num_steps;
    if (due && on_snapshot)
    {
      on_snapshot(snapshot(state));
    }
  }
  return state;
}

RunResult run(SimConfig const &config)
{
  RunResult result;
  result.final_state = run(config, [&](Snapshot const &s) { result.snapshots.push_back(s); });
  return result;
}

}  // namespace invnet
