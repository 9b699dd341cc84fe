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

#include "invnet/core_model.hpp"

#include <algorithm>
#include <cmath>

namespace invnet {
namespace {

void require_finite(double value, char const *name)
{
  if (!std::isfinite(value))
  {
    throw ContractError(std::string(name) + " must be finite");
  }
}

void require_proportion(double q)
{
  require_finite(q, "invest proportion");
  if (q < 0.0 || q > 1.0)
  {
    throw ContractError("invest proportion must lie in [0,1], got " + std::to_string(q));
  }
}

}  // namespace

std::string to_string(Role role)
{
  return role == Role::investor ? "investor" : "initiator";
}

WeightMatrix::WeightMatrix(std::size_t investors, std::size_t initiators)
  : investors_{investors}
  , initiators_{initiators}
  , entries_(investors * initiators, 0.0)
{}

double WeightMatrix::at(std::size_t k, std::size_t j) const
{
  if (k >= investors_ || j >= initiators_)
  {
    throw ContractError("weight index out of range");
  }
  return (*this)(k, j);
}

void WeightMatrix::scale(double factor)
{
  // plain loop so the compiler vectorises it; this runs over every entry each step
  double *data = entries_.data();
  std::size_t const n = entries_.size();
  for (std::size_t i = 0; i < n; ++i)
  {
    data[i] *= factor;
  }
}

double apply_wealth_update(double budget, double proportion, double ret, double income)
{
  require_finite(budget, "budget");
  require_finite(ret, "return");
  require_finite(income, "income");
  require_proportion(proportion);
  if (budget < 0.0 || income < 0.0)
  {
    throw ContractError("budget and income must be nonnegative");
  }
  if (ret < -1.0 || ret > 1.0)
  {
    throw ContractError("return must lie in [-1,1]");
  }
  return budget * (1.0 + ret * proportion) + income;
}

double compute_payoff(double budget, double proportion, double ret)
{
  require_finite(budget, "budget");
  require_finite(ret, "return");
  require_proportion(proportion);
  return budget * proportion * ret;
}

double decay_and_deposit_weight(double weight, double payoff, double gamma)
{
  require_finite(weight, "weight");
  require_finite(payoff, "payoff");
  if (std::isnan(gamma) || gamma < 0.0)
  {
    throw ContractError("memory must be >= 0");
  }
  return payoff + weight * std::exp(-gamma);
}

double compute_initiator_reputation(WeightMatrix const &weights, std::size_t initiator)
{
  if (initiator >= weights.initiators())
  {
    throw ContractError("initiator index out of range");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < weights.investors(); ++k)
  {
    total += weights(k, initiator);
  }
  return total;
}

double compute_investor_reputation(WeightMatrix const &weights, std::size_t investor)
{
  if (investor >= weights.investors())
  {
    throw ContractError("investor index out of range");
  }
  auto const row = weights.row(investor);
  double     total = 0.0;
  for (double w : row)
  {
    total += w;
  }
  return total;
}

ReputationReport compute_reputations(WeightMatrix const &weights)
{
  ReputationReport report;
  report.initiator_reputation.assign(weights.initiators(), 0.0);
  report.investor_reputation.assign(weights.investors(), 0.0);
  for (std::size_t k = 0; k < weights.investors(); ++k)
  {
    auto const row = weights.row(k);
    double     total = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j)
    {
      total += row[j];
      report.initiator_reputation[j] += row[j];
    }
    report.investor_reputation[k] = total;
  }
  return report;
}

}  // namespace invnet
