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
#include "invnet/random_stream.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace invnet {

/// Investors and initiators are disjoint populations; indices are local to each.
struct Population
{
  std::vector<AgentState> investors;
  std::vector<AgentState> initiators;
};

/// Whether the initiator's own stake q_j x_j counts towards the launch
/// threshold. With `outside_threshold` the threshold has to be raised from
/// investors alone; the stake is still invested and settled either way.
enum class StakePolicy
{
  outside_threshold,
  counts_toward_threshold
};

enum class ProjectStatus
{
  collecting,
  launched,
  aborted,
  settled
};

std::string to_string(ProjectStatus status);

struct Commitment
{
  std::size_t investor{0};
  double      amount{0.0};
};

struct Project
{
  std::uint64_t           id{0};
  std::size_t             initiator{0};
  double                  initiator_commitment{0.0};
  std::vector<Commitment> participants;  // in acceptance order, initiator excluded
  double                  raised{0.0};           // investors only
  double                  total_committed{0.0};  // I_m: raised plus the initiator's stake
  double                  threshold{0.0};
  ProjectStatus           status{ProjectStatus::collecting};
  std::optional<double>   return_value;

  /// Participant count including the initiator.
  std::size_t size() const
  {
    return participants.size() + 1;
  }
};

struct ProjectOutcome
{
  Project     project;
  std::size_t contacted{0};
  std::size_t accepted{0};
};

struct PayoffDeposit
{
  std::size_t investor{0};
  double      payoff{0.0};
};

/// What settling a project produced. Deposits cover investor-initiator pairs
/// only; the initiator's own payoff is kept separately.
struct Settlement
{
  std::size_t                initiator{0};
  double                     return_value{0.0};
  std::vector<PayoffDeposit> deposits;
  double                     initiator_payoff{0.0};
  double                     payoff_sum{0.0};  // includes the initiator
};

/// Gibbs acceptance probability tau_kj of one investor's weight row towards
/// initiator j. Exponents are shifted by their maximum so large weights do not
/// overflow.
double acceptance_probability(std::span<double const> weight_row, std::size_t initiator,
                              double beta);

/// Roulette-wheel decision: accept iff u < tau.
bool roulette_accept(double tau, double u);

/// Runs the solicitation phase of a project started by `initiator`.
///
/// The initiator commits q_j x_j up front. Investors are then asked in a fresh
/// uniformly random order (all permutation draws happen before any acceptance
/// draw) until the amount that counts under `policy` reaches `threshold` or
/// every investor has been asked. Budgets are not touched.
ProjectOutcome form_project(Population const &population, WeightMatrix const &weights,
                            std::size_t initiator, double threshold, double beta,
                            RandomStream &rng, std::uint64_t id = 0,
                            StakePolicy policy = StakePolicy::outside_threshold);

/// Applies the return to every participant of a launched project (the
/// initiator included), marks it settled and reports the payoffs that feed
/// the decision weights. Each participant's budget gets its income as part
/// of the same update.
Settlement settle_project(Population &population, Project &project, double ret);

}  // namespace invnet
