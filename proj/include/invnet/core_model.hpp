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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace invnet {

/// Raised when a caller breaks a documented precondition (non-finite input,
/// out-of-range proportion or index, settling a project that never launched).
class ContractError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

enum class Role
{
  investor,
  initiator
};

std::string to_string(Role role);

struct AgentState
{
  double budget{1.0};
  double invest_proportion{0.5};
  double income{0.5};
  Role   role{Role::investor};

  /// Money this agent puts into any project it joins, q * x.
  double commitment() const
  {
    return invest_proportion * budget;
  }
};

struct BehaviorParams
{
  double memory{0.1};      // gamma, per-step decay exponent
  double greediness{1.0};  // beta
};

/// Dense investor x initiator matrix of decision weights, row-major so that
/// one investor's weights towards every initiator are contiguous.
class WeightMatrix
{
public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t investors, std::size_t initiators);

  std::size_t investors() const
  {
    return investors_;
  }
  std::size_t initiators() const
  {
    return initiators_;
  }

  double operator()(std::size_t k, std::size_t j) const
  {
    return entries_[k * initiators_ + j];
  }
  double &operator()(std::size_t k, std::size_t j)
  {
    return entries_[k * initiators_ + j];
  }

  /// Checked access.
  double at(std::size_t k, std::size_t j) const;

  std::span<double const> row(std::size_t k) const
  {
    return {entries_.data() + k * initiators_, initiators_};
  }
  std::span<double> row(std::size_t k)
  {
    return {entries_.data() + k * initiators_, initiators_};
  }

  std::span<double const> entries() const
  {
    return entries_;
  }
  std::span<double> entries()
  {
    return entries_;
  }

  /// Multiplies every entry by factor.
  void scale(double factor);

  bool operator==(WeightMatrix const &) const = default;

private:
  std::size_t         investors_{0};
  std::size_t         initiators_{0};
  std::vector<double> entries_;
};

/// One stored entry of the weight matrix.
struct WeightedEdge
{
  std::size_t investor{0};
  std::size_t initiator{0};
  double      weight{0.0};

  bool operator==(WeightedEdge const &) const = default;
};

struct ReputationReport
{
  std::vector<double> initiator_reputation;  // W_j, column sums
  std::vector<double> investor_reputation;   // W_k, row sums
};

// Budget after one step: x (1 + r q) + a.
double apply_wealth_update(double budget, double proportion, double ret, double income);

// Signed payoff x q r of a participant in a project with return r.
double compute_payoff(double budget, double proportion, double ret);

// Exponentially decayed memory plus the new payoff: p + w e^{-gamma}.
// gamma may be +inf (no memory at all).
double decay_and_deposit_weight(double weight, double payoff, double gamma);

double compute_initiator_reputation(WeightMatrix const &weights, std::size_t initiator);
double compute_investor_reputation(WeightMatrix const &weights, std::size_t investor);

/// Both reputation vectors in one pass over the matrix.
ReputationReport compute_reputations(WeightMatrix const &weights);

}  // namespace invnet
