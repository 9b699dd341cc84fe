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

#include "scripted_stream.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <set>

using namespace invnet;
using invnet::testing::ScriptedStream;

namespace {

SimConfig small_config()
{
  SimConfig c;
  c.num_investors = 50;
  c.num_initiators = 5;
  c.num_steps = 200;
  c.snapshot_every = 50;
  c.rng_seed = 99;
  return c;
}

double total_budget(Population const &p)
{
  double total = 0.0;
  for (auto const &a : p.investors)
  {
    total += a.budget;
  }
  for (auto const &a : p.initiators)
  {
    total += a.budget;
  }
  return total;
}

}  // namespace

TEST(SimConfig, DefaultsMatchReferenceExperiment)
{
  SimConfig const c;
  EXPECT_EQ(c.num_investors, 10000U);
  EXPECT_EQ(c.num_initiators, 100U);
  EXPECT_EQ(c.num_steps, 100000U);
  EXPECT_EQ(c.threshold, 9.0);
  EXPECT_EQ(c.initial_budget, 1.0);
  EXPECT_EQ(c.income, 0.5);
  EXPECT_EQ(c.memory, 0.1);
  EXPECT_EQ(c.greediness, 1.0);
  EXPECT_NO_THROW(validate(c));
}

TEST(SimConfig, ValidateRejectsBadValues)
{
  SimConfig c = small_config();
  c.num_initiators = 0;
  EXPECT_THROW(validate(c), ContractError);
  c = small_config();
  c.invest_proportion = 1.2;
  EXPECT_THROW(validate(c), ContractError);
  c = small_config();
  c.snapshot_every = 0;
  EXPECT_THROW(validate(c), ContractError);
}

TEST(Step, TwoAgentClosedFormTrace)
{
  // J = 1 makes tau = 1; the threshold sits below the investor's commitment
  SimConfig c;
  c.num_investors = 1;
  c.num_initiators = 1;
  c.threshold = 0.4;
  c.invest_proportion = 0.5;
  c.income = 0.5;
  c.memory = 0.1;
  SimState state = initial_state(c);

  ScriptedStream rng;
  // per step: acceptance draw, then u for r = 2u - 1: r = 0.5, -0.5, 0.25
  rng.units = {0.1, 0.75, 0.1, 0.25, 0.1, 0.625};
  double const expected_budget[] = {1.75, 1.8125, 2.5390625};
  double const decay = std::exp(-0.1);
  double const expected_weight[] = {0.25, -0.4375 + 0.25 * decay,
                                    0.2265625 + (-0.4375 + 0.25 * decay) * decay};
  for (int i = 0; i < 3; ++i)
  {
    auto const e = step(state, c, rng);
    EXPECT_EQ(e.status, ProjectStatus::settled);
    EXPECT_EQ(e.accepted, 1U);
    EXPECT_EQ(state.population.investors[0].budget, expected_budget[i]);
    EXPECT_EQ(state.population.initiators[0].budget, expected_budget[i]);
    EXPECT_DOUBLE_EQ(state.weights(0, 0), expected_weight[i]);
  }
  EXPECT_EQ(state.step, 3U);
  EXPECT_TRUE(rng.units.empty());
  EXPECT_EQ(rng.trace, "puupuupuu");
}

TEST(Step, NoMemoryKeepsOnlyLatestDeposit)
{
  SimConfig c = small_config();
  c.memory = std::numeric_limits<double>::infinity();
  c.threshold = 3.0;
  SimState state = initial_state(c);
  for (int i = 0; i < 100; ++i)
  {
    std::vector<double> before;
    for (auto const &a : state.population.investors)
    {
      before.push_back(a.budget);
    }
    auto const e = step(state, c);
    for (std::size_t k = 0; k < c.num_investors; ++k)
    {
      for (std::size_t j = 0; j < c.num_initiators; ++j)
      {
        double const w = state.weights(k, j);
        if (j != e.initiator || !e.return_value)
        {
          ASSERT_EQ(w, 0.0);
        }
        else if (w != 0.0)
        {
          ASSERT_EQ(w, before[k] * c.invest_proportion * *e.return_value);
        }
      }
    }
  }
}

TEST(Step, DegenerateFixedPoint)
{
  SimConfig c = small_config();
  c.income = 0.0;
  c.invest_proportion = 0.0;
  c.threshold = 1.0;
  auto const result = run(c);
  for (auto const &snap : result.snapshots)
  {
    for (double b : snap.investor_budgets)
    {
      ASSERT_EQ(b, 1.0);
    }
    for (double b : snap.initiator_budgets)
    {
      ASSERT_EQ(b, 1.0);
    }
    EXPECT_TRUE(snap.edges.empty());
  }
  for (double w : result.final_state.weights.entries())
  {
    ASSERT_EQ(w, 0.0);
  }
}

TEST(Run, ZeroStepsGivesOneInitialSnapshot)
{
  SimConfig c = small_config();
  c.num_steps = 0;
  auto const result = run(c);
  ASSERT_EQ(result.snapshots.size(), 1U);
  auto const &s = result.snapshots[0];
  EXPECT_EQ(s.step, 0U);
  EXPECT_EQ(s.investor_budgets, std::vector<double>(50, 1.0));
  EXPECT_EQ(s.initiator_budgets, std::vector<double>(5, 1.0));
  EXPECT_TRUE(s.edges.empty());
}

TEST(Run, SnapshotCadence)
{
  SimConfig c;
  c.num_investors = 1000;
  c.num_initiators = 10;
  c.num_steps = 10000;
  c.snapshot_every = 1000;
  c.invest_proportion = 0.5;
  std::vector<std::uint64_t> steps;
  std::uint64_t              events = 0;
  run(c, [&](Snapshot const &s) { steps.push_back(s.step); }, [&](StepEvent const &) { ++events; });
  ASSERT_EQ(steps.size(), 10U);
  for (std::size_t i = 0; i < steps.size(); ++i)
  {
    EXPECT_EQ(steps[i], 1000 * (i + 1));
  }
  EXPECT_EQ(events, 10000U);

  c.num_steps = 2500;
  steps.clear();
  run(c, [&](Snapshot const &s) { steps.push_back(s.step); });
  EXPECT_EQ(steps, (std::vector<std::uint64_t>{1000, 2000, 2500}));
}

TEST(Run, SameSeedSameResult)
{
  SimConfig const c = small_config();
  auto const      a = run(c);
  auto const      b = run(c);
  ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i)
  {
    EXPECT_EQ(a.snapshots[i].investor_budgets, b.snapshots[i].investor_budgets);
    EXPECT_EQ(a.snapshots[i].initiator_budgets, b.snapshots[i].initiator_budgets);
    EXPECT_EQ(a.snapshots[i].edges, b.snapshots[i].edges);
  }
  EXPECT_EQ(a.final_state.weights, b.final_state.weights);

  SimConfig other = c;
  other.rng_seed = c.rng_seed + 1;
  EXPECT_NE(run(other).final_state.weights, a.final_state.weights);
}

TEST(SnapshotOp, FreshStateHasNoEdges)
{
  auto const s = snapshot(initial_state(small_config()));
  EXPECT_TRUE(s.edges.empty());
  EXPECT_EQ(s.step, 0U);
  EXPECT_EQ(s.reputations.initiator_reputation, std::vector<double>(5, 0.0));
}

TEST(SnapshotOp, PositiveReturnLinksEveryParticipant)
{
  SimConfig c;
  c.num_investors = 5;
  c.num_initiators = 2;
  c.threshold = 1.4;  // three acceptances of 0.5 each
  SimState       state = initial_state(c);
  ScriptedStream rng;
  rng.picks = {1};                         // initiator 1; identity permutation afterwards
  rng.units = {0.9, 0.1, 0.1, 0.9, 0.1, 0.8};  // investors 1, 2, 4 accept; r = 0.6
  auto const e = step(state, c, rng);
  ASSERT_EQ(e.status, ProjectStatus::settled);
  ASSERT_EQ(e.accepted, 3U);

  auto const s = snapshot(state);
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (auto const &edge : s.edges)
  {
    edges.insert({edge.investor, edge.initiator});
    EXPECT_NEAR(edge.weight, 1.0 * 0.5 * 0.6, 1e-15);
  }
  EXPECT_EQ(edges, (std::set<std::pair<std::size_t, std::size_t>>{{1, 1}, {2, 1}, {4, 1}}));
  EXPECT_NEAR(s.reputations.initiator_reputation[1], 3 * 0.3, 1e-15);
  EXPECT_EQ(s.reputations.initiator_reputation[0], 0.0);
}

TEST(SnapshotOp, NegativeReturnLeavesNoEdges)
{
  SimConfig c;
  c.num_investors = 5;
  c.num_initiators = 2;
  c.threshold = 1.4;
  SimState       state = initial_state(c);
  ScriptedStream rng;
  rng.picks = {0};
  rng.units = {0.1, 0.1, 0.1, 0.2};  // r = -0.6
  auto const e = step(state, c, rng);
  ASSERT_EQ(e.status, ProjectStatus::settled);
  EXPECT_TRUE(snapshot(state).edges.empty());
  EXPECT_LT(state.weights(0, 0), 0.0);
}

// ---- properties -------------------------------------------------------------

TEST(RunnerProperties, BudgetsStayPositive)
{
  SimConfig c = small_config();
  c.num_steps = 3000;
  c.invest_proportion = 0.9;
  SimState state = initial_state(c);
  while (state.step < c.num_steps)
  {
    step(state, c);
    for (auto const &a : state.population.investors)
    {
      ASSERT_GT(a.budget, 0.0);
    }
    for (auto const &a : state.population.initiators)
    {
      ASSERT_GT(a.budget, 0.0);
    }
  }
}

TEST(RunnerProperties, WeightsDecayExactlyWithoutProjects)
{
  SimConfig c = small_config();
  SimState  state = initial_state(c);
  for (int i = 0; i < 100; ++i)
  {
    step(state, c);
  }
  SimConfig blocked = c;
  blocked.threshold = 1e300;  // nothing can launch
  double const decay = std::exp(-c.memory);
  for (int i = 0; i < 20; ++i)
  {
    WeightMatrix const before = state.weights;
    auto const         e = step(state, blocked);
    ASSERT_EQ(e.status, ProjectStatus::aborted);
    for (std::size_t n = 0; n < before.entries().size(); ++n)
    {
      ASSERT_EQ(state.weights.entries()[n], before.entries()[n] * decay);
    }
  }
}

TEST(RunnerProperties, MoneyBookkeeping)
{
  SimConfig c = small_config();
  c.num_steps = 2000;
  SimState     state = initial_state(c);
  double const agents = static_cast<double>(c.num_investors + c.num_initiators);
  while (state.step < c.num_steps)
  {
    double const before = total_budget(state.population);
    auto const   e = step(state, c);
    double       expected = agents * c.income;
    if (e.return_value)
    {
      expected += *e.return_value * e.total_committed;
    }
    double const change = total_budget(state.population) - before;
    ASSERT_NEAR(change, expected, 1e-6 * std::max(std::abs(expected), 1.0))
        << "step " << e.step;
  }
}
