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

#include "invnet/sim_runner.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace invnet {

/// Parse failure with the offending location already in the message,
/// e.g. "run.cfg:3: invest_proportion: must lie in [0,1]".
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// One `key = value` line after comment stripping.
struct ConfigEntry
{
  std::string key;
  std::string value;
  std::size_t line{0};
};

/// Splits key-value text into entries. `#` starts a comment; blank lines are
/// skipped. Throws ConfigError for lines without '=' or with an empty key.
std::vector<ConfigEntry> parse_entries(std::string_view text, std::string_view origin);

/// Applies one entry to a config. Returns false when the key is not a
/// simulation key; throws ConfigError when the value is malformed or out of range.
bool apply_entry(SimConfig &config, ConfigEntry const &entry, std::string_view origin);

/// Keys not given keep their defaults; unknown keys are errors.
SimConfig parse_config_text(std::string_view text, std::string_view origin = "<config>");
SimConfig parse_config(std::filesystem::path const &path);

/// Canonical key-value text; parse_config_text(format_config(c)) == c.
std::string format_config(SimConfig const &config);

}  // namespace invnet
