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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace invnet {

std::string to_string(ProjectStatus status)
{
  switch (status)
  {
  case ProjectStatus::collecting:
    return "collecting";
  case ProjectStatus::launched:
    return "launched";
  case ProjectStatus::aborted:
    return "aborted";
  case ProjectStatus::settled:
    return "settled";
  }
  return "unknown";
}

double acceptance_probability(std::span<double const> weight_row, std::size_t initiator,
                              double beta)
{
  if (initiator >= weight_row.size())
  {
    throw ContractError("initiator index out of range");
  }
  if (!std::isfinite(beta))
  {
    throw ContractError("greediness must be finite");
  }
  double shift = -std::numeric_limits<double>::infinity();
  for (double w : weight_row)
  {
    if (!std::isfinite(w))
    {
      throw ContractError("decision weights must be finite");
    }
    shift = std::max(shift, beta * w);
  }
  double denominator = 0.0;
  for (double w : weight_row)
  {
    denominator += std::exp(beta * w - shift);
  }
  return std::exp(beta * weight_row[initiator] - shift) / denominator;
}

bool roulette_accept(double tau, double u)
{
  if (!(tau >= 0.0 && tau <= 1.0))
  {
    throw ContractError("acceptance probability must lie in [0,1]");
  }
  if (!(u > 0.0 && u < 1.0))
  {
    throw ContractError("roulette draw must lie in (0,1)");
  }
  return u < tau;
}

ProjectOutcome form_project(Population const &population, WeightMatrix const &weights,
                            std::size_t initiator, double threshold, double beta,
                            RandomStream &rng, std::uint64_t id, StakePolicy policy)
{
  auto const &investors = population.investors;
  if (initiator >= population.initiators.size())
  {
    throw ContractError("initiator index out of range");
  }
  if (!(threshold >= 0.0) || !std::isfinite(threshold))
  {
    throw ContractError("investment threshold must be a finite value >= 0");
  }
  if (weights.investors() != investors.size() ||
      weights.initiators() != population.initiators.size())
  {
    throw ContractError("weight matrix does not match the population");
  }

  ProjectOutcome outcome;
  Project       &project = outcome.project;
  project.id = id;
  project.initiator = initiator;
  project.threshold = threshold;
  project.initiator_commitment = population.initiators[initiator].commitment();
  project.total_committed = project.initiator_commitment;
  auto const counted = [&] {
    return policy == StakePolicy::counts_toward_threshold ? project.total_committed
                                                          : project.raised;
  };

  // Fisher-Yates over all investors
  std::vector<std::size_t> order(investors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = order.size(); i > 1; --i)
  {
    std::swap(order[i - 1], order[rng.pick(i)]);
  }

  for (std::size_t k : order)
  {
    if (counted() >= threshold)
    {
      break;
    }
    ++outcome.contacted;
    double const tau = acceptance_probability(weights.row(k), initiator, beta);
    if (roulette_accept(tau, rng.open_unit()))
    {
      ++outcome.accepted;
      double const amount = investors[k].commitment();
      project.participants.push_back({k, amount});
      project.raised += amount;
      project.total_committed = project.initiator_commitment + project.raised;
    }
  }

  project.status = counted() >= threshold ? ProjectStatus::launched : ProjectStatus::aborted;
  return outcome;
}

Settlement settle_project(Population &population, Project &project, double ret)
{
  if (project.status != ProjectStatus::launched)
  {
    throw ContractError("only a launched project can be settled");
  }
  if (!(ret >= -1.0 && ret <= 1.0))
  {
    throw ContractError("return must lie in [-1,1]");
  }

  Settlement settlement;
  settlement.initiator = project.initiator;
  settlement.return_value = ret;
  settlement.deposits.reserve(project.participants.size());

  for (auto const &c : project.participants)
  {
    AgentState  &agent = population.investors[c.investor];
    double const payoff = compute_payoff(agent.budget, agent.invest_proportion, ret);
    agent.budget = apply_wealth_update(agent.budget, agent.invest_proportion, ret, agent.income);
    settlement.deposits.push_back({c.investor, payoff});
    settlement.payoff_sum += payoff;
  }

  AgentState &owner = population.initiators[project.initiator];
  settlement.initiator_payoff = compute_payoff(owner.budget, owner.invest_proportion, ret);
  owner.budget = apply_wealth_update(owner.budget, owner.invest_proportion, ret, owner.income);
  settlement.payoff_sum += settlement.initiator_payoff;

  project.return_value = ret;
  project.status = ProjectStatus::settled;
  return settlement;
}

}  // namespace invnet
