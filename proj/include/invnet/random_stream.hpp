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
#include <cstdint>
#include <random>

namespace invnet {

/// Source of the two primitive draws the simulation consumes. Everything
/// stochastic (initiator choice, contact permutation, acceptance, returns)
/// is expressed through these so tests can script the stream.
class RandomStream
{
public:
  virtual ~RandomStream() = default;

  /// Uniform integer in [0, n). n must be positive.
  virtual std::size_t pick(std::size_t n) = 0;

  /// Uniform real in the open interval (0, 1).
  virtual double open_unit() = 0;
};

/// Production stream: 64-bit Mersenne Twister seeded from a single u64.
class SeededStream final : public RandomStream
{
public:
  explicit SeededStream(std::uint64_t seed);

  std::size_t pick(std::size_t n) override;
  double      open_unit() override;

private:
  std::mt19937_64 engine_;
};

/// Return on investment, uniform on (-1, 1).
double draw_return(RandomStream &rng);

}  // namespace invnet
