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

#include "invnet/project_engine.hpp"

#include "scripted_stream.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace invnet;
using invnet::testing::ScriptedStream;

namespace {

Population uniform_population(std::size_t investors, std::size_t initiators, double budget,
                              double q, double income = 0.5)
{
  Population p;
  p.investors.assign(investors, AgentState{budget, q, income, Role::investor});
  p.initiators.assign(initiators, AgentState{budget, q, income, Role::initiator});
  return p;
}

std::vector<double> random_row(std::mt19937_64 &gen, std::size_t n, double scale)
{
  std::uniform_real_distribution<double> d(-scale, scale);
  std::vector<double>                    row(n);
  for (double &w : row)
  {
    w = d(gen);
  }
  return row;
}

}  // namespace

TEST(AcceptanceProbability, Examples)
{
  std::vector<double> zeros{0.0, 0.0};
  EXPECT_DOUBLE_EQ(acceptance_probability(zeros, 0, 3.7), 0.5);

  std::vector<double> any{1.0, -2.0, 7.5, 0.25, 3.0};
  for (std::size_t j = 0; j < any.size(); ++j)
  {
    EXPECT_DOUBLE_EQ(acceptance_probability(any, j, 0.0), 0.2);
  }

  std::vector<double> two{1.0, 0.0};
  EXPECT_NEAR(acceptance_probability(two, 0, 1.0), 0.7310586, 1e-7);
  EXPECT_NEAR(acceptance_probability(two, 0, 1.0), std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-15);
}

TEST(AcceptanceProbability, HugeWeightsDoNotOverflow)
{
  std::vector<double> row{1e6, 1e6 - 1.0, -1e6};
  double const        tau = acceptance_probability(row, 0, 1.0);
  EXPECT_TRUE(std::isfinite(tau));
  EXPECT_NEAR(tau, std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-12);
  EXPECT_EQ(acceptance_probability(row, 2, 1.0), 0.0);
}

TEST(AcceptanceProbability, Errors)
{
  std::vector<double> bad{0.0, std::nan("")};
  EXPECT_THROW(acceptance_probability(bad, 0, 1.0), ContractError);
  std::vector<double> ok{0.0, 1.0};
  EXPECT_THROW(acceptance_probability(ok, 2, 1.0), ContractError);
}

TEST(Roulette, Examples)
{
  EXPECT_TRUE(roulette_accept(1.0, 0.999));
  EXPECT_FALSE(roulette_accept(0.0, 0.001));
  EXPECT_FALSE(roulette_accept(0.5, 0.5));
  EXPECT_TRUE(roulette_accept(0.5, 0.4999999));
}

TEST(Roulette, RangeChecks)
{
  EXPECT_THROW(roulette_accept(1.1, 0.5), ContractError);
  EXPECT_THROW(roulette_accept(-0.1, 0.5), ContractError);
  EXPECT_THROW(roulette_accept(0.5, 0.0), ContractError);
  EXPECT_THROW(roulette_accept(0.5, 1.0), ContractError);
}

TEST(FormProject, ZeroThresholdLaunchesWithInitiatorOnly)
{
  auto const     pop = uniform_population(5, 2, 1.0, 0.5);
  WeightMatrix   w(5, 2);
  ScriptedStream rng;
  for (auto policy : {StakePolicy::outside_threshold, StakePolicy::counts_toward_threshold})
  {
    auto const out = form_project(pop, w, 1, 0.0, 1.0, rng, 0, policy);
    EXPECT_EQ(out.project.status, ProjectStatus::launched);
    EXPECT_EQ(out.contacted, 0U);
    EXPECT_TRUE(out.project.participants.empty());
    EXPECT_EQ(out.project.size(), 1U);
    EXPECT_EQ(out.project.total_committed, 0.5);
  }
}

TEST(FormProject, StakeCountingPolicyNeedsSeventeenInvestors)
{
  // commitments of 0.5 each; ceil((9 - 0.5) / 0.5) = 17
  auto const     pop = uniform_population(40, 3, 1.0, 0.5);
  WeightMatrix   w(40, 3);
  ScriptedStream rng;
  rng.default_unit = 1e-12;  // every contacted investor accepts
  auto const out = form_project(pop, w, 0, 9.0, 1.0, rng, 0, StakePolicy::counts_toward_threshold);
  EXPECT_EQ(out.project.status, ProjectStatus::launched);
  EXPECT_EQ(out.accepted, 17U);
  EXPECT_EQ(out.contacted, 17U);
  EXPECT_EQ(out.project.total_committed, 9.0);
}

TEST(FormProject, DefaultPolicyRaisesThresholdFromInvestors)
{
  auto const     pop = uniform_population(40, 3, 1.0, 0.5);
  WeightMatrix   w(40, 3);
  ScriptedStream rng;
  rng.default_unit = 1e-12;
  auto const out = form_project(pop, w, 0, 9.0, 1.0, rng);
  EXPECT_EQ(out.project.status, ProjectStatus::launched);
  EXPECT_EQ(out.accepted, 18U);
  EXPECT_EQ(out.project.raised, 9.0);
  EXPECT_EQ(out.project.total_committed, 9.5);
}

TEST(FormProject, ScriptedAbortAfterContactingEveryone)
{
  // identity contact order 0,1,2; tau = 1/2 for all; draws reject, accept, reject
  auto const     pop = uniform_population(3, 2, 1.0, 0.5);
  WeightMatrix   w(3, 2);
  ScriptedStream rng;
  rng.units = {0.9, 0.1, 0.9};
  auto const out = form_project(pop, w, 1, 100.0, 1.0, rng);
  EXPECT_EQ(out.project.status, ProjectStatus::aborted);
  EXPECT_EQ(out.contacted, 3U);
  EXPECT_EQ(out.accepted, 1U);
  ASSERT_EQ(out.project.participants.size(), 1U);
  EXPECT_EQ(out.project.participants[0].investor, 1U);
  EXPECT_EQ(out.project.participants[0].amount, 0.5);
  EXPECT_EQ(out.project.total_committed, 1.0);
}

TEST(FormProject, PermutationDrawsPrecedeAcceptanceDraws)
{
  auto const     pop = uniform_population(6, 2, 1.0, 0.5);
  WeightMatrix   w(6, 2);
  ScriptedStream rng;
  rng.default_unit = 0.9;  // everybody declines
  form_project(pop, w, 0, 100.0, 1.0, rng);
  EXPECT_EQ(rng.trace, "ppppp" "uuuuuu");
}

TEST(FormProject, ContactOrderFollowsPermutation)
{
  auto const     pop = uniform_population(4, 1, 1.0, 0.5);
  WeightMatrix   w(4, 1);
  ScriptedStream rng;
  // i=4: swap(order[3], order[0]) -> 3 1 2 0; i=3,2: identity picks
  rng.picks = {0, 2, 1};
  auto const out = form_project(pop, w, 0, 0.4, 1.0, rng);  // one acceptance suffices
  ASSERT_EQ(out.project.participants.size(), 1U);
  EXPECT_EQ(out.project.participants[0].investor, 3U);
}

TEST(FormProject, NegativeExperienceBlocksAcceptance)
{
  auto const   pop = uniform_population(3, 2, 1.0, 0.5);
  WeightMatrix w(3, 2);
  for (std::size_t k = 0; k < 3; ++k)
  {
    w(k, 0) = -1000.0;  // tau underflows to exactly 0
  }
  SeededStream rng(5);
  auto const   out = form_project(pop, w, 0, 0.1, 1.0, rng);
  EXPECT_EQ(out.project.status, ProjectStatus::aborted);
  EXPECT_EQ(out.accepted, 0U);
  EXPECT_EQ(out.contacted, 3U);
}

TEST(FormProject, Errors)
{
  auto const   pop = uniform_population(3, 2, 1.0, 0.5);
  WeightMatrix w(3, 2);
  SeededStream rng(1);
  EXPECT_THROW(form_project(pop, w, 2, 1.0, 1.0, rng), ContractError);
  EXPECT_THROW(form_project(pop, w, 0, -1.0, 1.0, rng), ContractError);
  WeightMatrix wrong(2, 2);
  EXPECT_THROW(form_project(pop, wrong, 0, 1.0, 1.0, rng), ContractError);
}

TEST(SettleProject, ZeroReturnPaysIncomeOnly)
{
  auto           pop = uniform_population(4, 2, 1.0, 0.5);
  WeightMatrix   w(4, 2);
  ScriptedStream rng;
  rng.default_unit = 1e-9;
  auto out = form_project(pop, w, 0, 0.9, 0.0, rng);
  ASSERT_EQ(out.project.status, ProjectStatus::launched);
  auto const s = settle_project(pop, out.project, 0.0);
  EXPECT_EQ(out.project.status, ProjectStatus::settled);
  for (auto const &d : s.deposits)
  {
    EXPECT_EQ(d.payoff, 0.0);
    EXPECT_EQ(pop.investors[d.investor].budget, 1.5);
  }
  EXPECT_EQ(s.initiator_payoff, 0.0);
  EXPECT_EQ(pop.initiators[0].budget, 1.5);
}

TEST(SettleProject, SingleParticipant)
{
  auto           pop = uniform_population(1, 1, 2.0, 0.5);
  WeightMatrix   w(1, 1);
  ScriptedStream rng;
  auto           out = form_project(pop, w, 0, 0.0, 1.0, rng);
  auto const     s = settle_project(pop, out.project, 1.0);
  EXPECT_EQ(pop.initiators[0].budget, 3.5);
  EXPECT_EQ(s.initiator_payoff, 1.0);
  EXPECT_TRUE(s.deposits.empty());  // no self weight for the initiator
  EXPECT_EQ(pop.investors[0].budget, 2.0);
}

TEST(SettleProject, ThreeParticipantsConserveMoney)
{
  auto           pop = uniform_population(2, 1, 1.0, 0.5);
  WeightMatrix   w(2, 1);
  ScriptedStream rng;
  rng.default_unit = 1e-9;
  auto out = form_project(pop, w, 0, 1.0, 1.0, rng);
  ASSERT_EQ(out.project.size(), 3U);
  ASSERT_EQ(out.project.total_committed, 1.5);

  auto const s = settle_project(pop, out.project, -0.6);
  // oracle: add up each participant's x q r independently
  double oracle = 0.0;
  for (int i = 0; i < 3; ++i)
  {
    oracle += 1.0 * 0.5 * -0.6;
  }
  EXPECT_NEAR(s.payoff_sum, oracle, 1e-15);
  EXPECT_NEAR(s.payoff_sum, -0.6 * 1.5, 1e-15);
  EXPECT_NEAR(s.payoff_sum, -0.9, 1e-15);
}

TEST(SettleProject, RejectsProjectsThatDidNotLaunch)
{
  auto           pop = uniform_population(2, 1, 1.0, 0.5);
  WeightMatrix   w(2, 1);
  ScriptedStream rng;
  rng.default_unit = 0.99;
  auto out = form_project(pop, w, 0, 50.0, 1.0, rng);
  ASSERT_EQ(out.project.status, ProjectStatus::aborted);
  EXPECT_THROW(settle_project(pop, out.project, 0.1), ContractError);

  rng.default_unit = 1e-9;
  auto launched = form_project(pop, w, 0, 0.5, 1.0, rng);
  EXPECT_THROW(settle_project(pop, launched.project, 1.5), ContractError);
  settle_project(pop, launched.project, 0.5);
  EXPECT_THROW(settle_project(pop, launched.project, 0.5), ContractError);
}

// ---- properties -------------------------------------------------------------

TEST(ProjectProperties, SoftmaxSumsToOne)
{
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 2000; ++trial)
  {
    auto const row = random_row(gen, 1 + trial % 40, trial % 2 ? 50.0 : 1.0);
    double const beta = std::uniform_real_distribution<double>(-3.0, 3.0)(gen);
    double       total = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j)
    {
      double const tau = acceptance_probability(row, j, beta);
      ASSERT_GE(tau, 0.0);
      ASSERT_LE(tau, 1.0);
      total += tau;
    }
    ASSERT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(ProjectProperties, ShiftInvariance)
{
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 2000; ++trial)
  {
    auto const   row = random_row(gen, 2 + trial % 20, 5.0);
    double const c = std::uniform_real_distribution<double>(-100.0, 100.0)(gen);
    auto         shifted = row;
    for (double &w : shifted)
    {
      w += c;
    }
    double const beta = std::uniform_real_distribution<double>(0.0, 2.0)(gen);
    for (std::size_t j = 0; j < row.size(); ++j)
    {
      ASSERT_NEAR(acceptance_probability(row, j, beta), acceptance_probability(shifted, j, beta),
                  1e-12);
    }
  }
}

TEST(ProjectProperties, MonotoneInOwnWeight)
{
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 2000; ++trial)
  {
    auto              row = random_row(gen, 2 + trial % 10, 3.0);
    std::size_t const j = trial % row.size();
    double const      beta = std::uniform_real_distribution<double>(0.1, 2.0)(gen);
    double const      before = acceptance_probability(row, j, beta);
    row[j] += std::uniform_real_distribution<double>(0.01, 1.0)(gen);
    ASSERT_GT(acceptance_probability(row, j, beta), before);
  }
}

TEST(ProjectProperties, LaunchIffThresholdReached)
{
  std::mt19937_64 gen(24);
  for (std::uint64_t seed = 0; seed < 300; ++seed)
  {
    std::size_t const n = 1 + seed % 30;
    Population        pop;
    std::uniform_real_distribution<double> budget(0.0, 5.0);
    for (std::size_t k = 0; k < n; ++k)
    {
      pop.investors.push_back({budget(gen), 0.5, 0.5, Role::investor});
    }
    pop.initiators.assign(3, AgentState{budget(gen), 0.5, 0.5, Role::initiator});
    WeightMatrix w(n, 3);
    for (double &e : w.entries())
    {
      e = std::uniform_real_distribution<double>(-2.0, 2.0)(gen);
    }
    double const threshold = std::uniform_real_distribution<double>(0.0, 15.0)(gen);
    auto const   policy = seed % 2 ? StakePolicy::counts_toward_threshold
                                   : StakePolicy::outside_threshold;
    SeededStream rng(seed);
    auto const   out = form_project(pop, w, seed % 3, threshold, 1.0, rng, seed, policy);
    auto const  &p = out.project;

    double const counted =
        policy == StakePolicy::counts_toward_threshold ? p.total_committed : p.raised;
    ASSERT_EQ(p.status == ProjectStatus::launched, counted >= threshold);
    if (p.status == ProjectStatus::aborted)
    {
      ASSERT_EQ(out.contacted, n);
    }
    ASSERT_LE(out.accepted, out.contacted);
    ASSERT_LE(out.contacted, n);

    std::set<std::size_t> seen;
    double                sum = p.initiator_commitment;
    for (auto const &c : p.participants)
    {
      ASSERT_TRUE(seen.insert(c.investor).second) << "duplicate investor";
      sum += c.amount;
    }
    ASSERT_DOUBLE_EQ(sum, p.total_committed);
  }
}

TEST(ProjectProperties, PayoffConservation)
{
  std::mt19937_64 gen(25);
  for (std::uint64_t seed = 0; seed < 500; ++seed)
  {
    std::size_t const                      n = 1 + seed % 25;
    std::uniform_real_distribution<double> budget(0.01, 1000.0);
    Population                             pop;
    for (std::size_t k = 0; k < n; ++k)
    {
      pop.investors.push_back({budget(gen), 0.3 + 0.02 * (k % 10), 0.5, Role::investor});
    }
    pop.initiators.assign(2, AgentState{budget(gen), 0.5, 0.5, Role::initiator});
    WeightMatrix w(n, 2);
    SeededStream rng(seed);
    auto         out = form_project(pop, w, 1, 50.0, 0.0, rng);
    if (out.project.status != ProjectStatus::launched)
    {
      continue;
    }
    double const r = draw_return(rng);
    double const im = out.project.total_committed;
    auto const   s = settle_project(pop, out.project, r);
    ASSERT_NEAR(s.payoff_sum, r * im, 1e-9 * std::abs(r * im) + 1e-300);
  }
}

TEST(ProjectProperties, FirstContactIsUniform)
{
  // one initiator and tau = 1: the first contacted investor always joins
  constexpr std::size_t n = 10;
  constexpr int         trials = 20000;
  auto const            pop = uniform_population(n, 1, 1.0, 0.5);
  WeightMatrix          w(n, 1);
  std::vector<int>      counts(n, 0);
  for (int seed = 0; seed < trials; ++seed)
  {
    SeededStream rng(static_cast<std::uint64_t>(seed));
    auto const   out = form_project(pop, w, 0, 0.1, 1.0, rng);
    ASSERT_EQ(out.contacted, 1U);
    ++counts[out.project.participants.at(0).investor];
  }
  double const expected = static_cast<double>(trials) / n;
  double       chi2 = 0.0;
  for (int c : counts)
  {
    chi2 += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(chi2, 27.88);  // chi-square, 9 dof, p = 0.001
}
