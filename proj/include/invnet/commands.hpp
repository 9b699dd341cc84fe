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

#include "invnet/config.hpp"
#include "invnet/net_analysis.hpp"
#include "invnet/sim_runner.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace invnet {

struct FileDigest
{
  std::string   name;  // relative to the run directory
  std::string   sha256;
  std::uintmax_t bytes{0};
};

/// Everything needed to repeat a run on the same build.
struct RunManifest
{
  SimConfig               config;
  std::string             build_id;
  std::string             started_at;  // UTC, ISO 8601
  std::string             finished_at;
  std::vector<FileDigest> files;
};

std::string sha256_hex(std::filesystem::path const &file);

std::string manifest_to_json(RunManifest const &manifest);
RunManifest manifest_from_json(std::string const &text);

/// Totals gathered from the event stream of one run.
struct RunStats
{
  std::uint64_t steps{0};
  std::uint64_t launched{0};
  double        committed{0.0};  // sum of I_m over launched projects
};

struct RunReport
{
  RunManifest manifest;
  RunStats    stats;
  Snapshot    final_snapshot;
};

/// Runs a simulation into `out_dir` (created if needed): manifest.json,
/// events.csv and one budgets_<t>.csv / edges_<t>.txt pair per snapshot.
/// On failure every file this call created is removed and the error rethrown.
RunReport execute_run(SimConfig const &config, std::filesystem::path const &out_dir);

/// `run`: exit status 0 on success, 1 with a diagnostic on `err` otherwise.
int cmd_run(std::filesystem::path const &config_path, std::filesystem::path const &out_dir,
            std::optional<std::uint64_t> seed, std::ostream &err);

/// One row of metrics.csv.
struct MetricsRow
{
  std::uint64_t  step{0};
  NetworkMetrics metrics;
};

std::string const &metrics_header();
std::string        format_metrics_row(MetricsRow const &row);

/// `analyze`: reads every snapshot in `in_dir`, writes `out_file` (metrics) and
/// tailfit.csv next to it. Bad snapshots are reported and skipped; the exit
/// status is nonzero if any failed.
int cmd_analyze(std::filesystem::path const &in_dir, std::filesystem::path const &out_file,
                std::ostream &err);

enum class SweepAxis
{
  q,
  J,
  N,
  seed
};

std::string to_string(SweepAxis axis);

struct SweepSpec
{
  SimConfig                base;
  SweepAxis                axis{SweepAxis::q};
  std::vector<std::string> values;
  std::size_t              seeds_per_point{1};
};

/// Key-value text like a config file plus the sweep keys `axis`, `values`
/// (comma separated), `seeds_per_point` and `base_config` (a config file,
/// relative to `base_dir`). Remaining keys override the base config.
SweepSpec parse_sweep_spec_text(std::string_view text, std::string_view origin,
                                std::filesystem::path const &base_dir);
SweepSpec parse_sweep_spec(std::filesystem::path const &path);

struct SweepRun
{
  std::string           value;
  SimConfig             config;
  std::filesystem::path directory;  // relative to the sweep output
};

/// The cartesian set of (axis value x seed), value-major.
std::vector<SweepRun> expand_sweep(SweepSpec const &spec);

/// `sweep`: one run directory per SweepRun, then summary.csv with mean and
/// standard deviation of the final-step metrics per axis value.
int cmd_sweep(std::filesystem::path const &spec_path, std::filesystem::path const &out_dir,
              unsigned parallel, std::ostream &err);

}  // namespace invnet
