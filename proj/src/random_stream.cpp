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

#include "invnet/random_stream.hpp"

#include "invnet/core_model.hpp"

namespace invnet {

SeededStream::SeededStream(std::uint64_t seed)
  : engine_{seed}
{}

std::size_t SeededStream::pick(std::size_t n)
{
  if (n == 0)
  {
    throw ContractError("pick() needs a nonempty range");
  }
  std::uniform_int_distribution<std::size_t> dist{0, n - 1};
  return dist(engine_);
}

double SeededStream::open_unit()
{
  // 52 random bits centred in their cell: never 0, never 1, and 2u - 1
  // stays exactly inside (-1, 1)
  constexpr double scale = 1.0 / 4503599627370496.0;  // 2^-52
  return (static_cast<double>(engine_() >> 12) + 0.5) * scale;
}

double draw_return(RandomStream &rng)
{
  return 2.0 * rng.open_unit() - 1.0;
}

}  // namespace invnet
