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

#include "invnet/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace invnet {
namespace {

std::string_view trim(std::string_view s)
{
  auto const first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
  {
    return {};
  }
  auto const last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::string_view origin, ConfigEntry const &entry, std::string const &what)
{
  std::ostringstream out;
  out << origin << ':' << entry.line << ": " << entry.key << ": " << what;
  throw ConfigError(out.str());
}

std::uint64_t to_unsigned(std::string_view origin, ConfigEntry const &entry)
{
  std::uint64_t value = 0;
  auto const   &s = entry.value;
  auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
  {
    fail(origin, entry, "expected a nonnegative integer, got '" + s + "'");
  }
  return value;
}

double to_real(std::string_view origin, ConfigEntry const &entry)
{
  // strtod rather than from_chars so "inf" works for memory
  auto const &s = entry.value;
  char       *end = nullptr;
  double const value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || std::isnan(value))
  {
    fail(origin, entry, "expected a number, got '" + s + "'");
  }
  return value;
}

std::string format_real(double value)
{
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  out << value;
  return out.str();
}

}  // namespace

std::vector<ConfigEntry> parse_entries(std::string_view text, std::string_view origin)
{
  std::vector<ConfigEntry> entries;
  std::size_t              line_no = 0;
  std::size_t              pos = 0;
  while (pos <= text.size())
  {
    auto const  eol = text.find('\n', pos);
    auto        line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (auto const hash = line.find('#'); hash != std::string_view::npos)
    {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty())
    {
      continue;
    }
    auto const eq = line.find('=');
    ConfigEntry entry;
    entry.line = line_no;
    if (eq == std::string_view::npos)
    {
      std::ostringstream out;
      out << origin << ':' << line_no << ": malformed line, expected 'key = value'";
      throw ConfigError(out.str());
    }
    entry.key = trim(line.substr(0, eq));
    entry.value = trim(line.substr(eq + 1));
    if (entry.key.empty())
    {
      std::ostringstream out;
      out << origin << ':' << line_no << ": malformed line, empty key";
      throw ConfigError(out.str());
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

bool apply_entry(SimConfig &config, ConfigEntry const &entry, std::string_view origin)
{
  auto const &key = entry.key;
  auto positive_count = [&](std::size_t &field) {
    auto const v = to_unsigned(origin, entry);
    if (v < 1)
    {
      fail(origin, entry, "must be >= 1");
    }
    field = static_cast<std::size_t>(v);
  };
  auto nonnegative = [&](double &field, bool allow_inf) {
    double const v = to_real(origin, entry);
    if (v < 0.0 || (!allow_inf && !std::isfinite(v)))
    {
      fail(origin, entry, allow_inf ? "must be >= 0" : "must be a finite value >= 0");
    }
    field = v;
  };

  if (key == "num_investors" || key == "N")
  {
    positive_count(config.num_investors);
  }
  else if (key == "num_initiators" || key == "J")
  {
    positive_count(config.num_initiators);
  }
  else if (key == "num_steps" || key == "t")
  {
    config.num_steps = to_unsigned(origin, entry);
  }
  else if (key == "threshold")
  {
    nonnegative(config.threshold, false);
  }
  else if (key == "invest_proportion" || key == "q")
  {
    double const v = to_real(origin, entry);
    if (!(v >= 0.0 && v <= 1.0))
    {
      fail(origin, entry, "must lie in [0,1], got " + entry.value);
    }
    config.invest_proportion = v;
  }
  else if (key == "initial_budget")
  {
    nonnegative(config.initial_budget, false);
  }
  else if (key == "income")
  {
    nonnegative(config.income, false);
  }
  else if (key == "memory" || key == "gamma")
  {
    nonnegative(config.memory, true);
  }
  else if (key == "greediness" || key == "beta")
  {
    double const v = to_real(origin, entry);
    if (!std::isfinite(v))
    {
      fail(origin, entry, "must be finite");
    }
    config.greediness = v;
  }
  else if (key == "rng_seed" || key == "seed")
  {
    config.rng_seed = to_unsigned(origin, entry);
  }
  else if (key == "snapshot_every")
  {
    auto const v = to_unsigned(origin, entry);
    if (v < 1)
    {
      fail(origin, entry, "must be >= 1");
    }
    config.snapshot_every = v;
  }
  else if (key == "initiator_stake_counts")
  {
    if (entry.value == "true")
      config.initiator_stake = StakePolicy::counts_toward_threshold;
    else if (entry.value == "false")
      config.initiator_stake = StakePolicy::outside_threshold;
    else
      fail(origin, entry, "expected true or false");
  }
  else if (key == "return_distribution")
  {
    if (entry.value != "uniform")
    {
      fail(origin, entry, "only 'uniform' (on (-1,1)) is supported");
    }
  }
  else
  {
    return false;
  }
  return true;
}

SimConfig parse_config_text(std::string_view text, std::string_view origin)
{
  SimConfig config;
  for (auto const &entry : parse_entries(text, origin))
  {
    if (!apply_entry(config, entry, origin))
    {
      fail(origin, entry, "unknown key");
    }
  }
  return config;
}

SimConfig parse_config(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw ConfigError(path.string() + ": cannot open config file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

std::string format_config(SimConfig const &config)
{
  std::ostringstream out;
  out << "num_investors = " << config.num_investors << '\n'
      << "num_initiators = " << config.num_initiators << '\n'
      << "num_steps = " << config.num_steps << '\n'
      << "threshold = " << format_real(config.threshold) << '\n'
      << "invest_proportion = " << format_real(config.invest_proportion) << '\n'
      << "initial_budget = " << format_real(config.initial_budget) << '\n'
      << "income = " << format_real(config.income) << '\n'
      << "memory = " << format_real(config.memory) << '\n'
      << "greediness = " << format_real(config.greediness) << '\n'
      << "rng_seed = " << config.rng_seed << '\n'
      << "snapshot_every = " << config.snapshot_every << '\n'
      << "initiator_stake_counts = "
      << (config.initiator_stake == StakePolicy::counts_toward_threshold ? "true" : "false")
      << '\n'
      << "return_distribution = uniform\n";
  return out.str();
}

}  // namespace invnet
