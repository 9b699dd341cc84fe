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
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace invnet {

class SnapshotError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Nine significant digits, shortest of fixed/scientific ("%.9g").
std::string format_number(double value);

/// "NA" for an absent value.
std::string format_optional(std::optional<double> value);

std::filesystem::path budgets_path(std::filesystem::path const &dir, std::uint64_t step);
std::filesystem::path edges_path(std::filesystem::path const &dir, std::uint64_t step);

/// Writes a file through a temporary sibling and renames it into place, so a
/// failed write never leaves a partial file under the final name.
void write_file_atomic(std::filesystem::path const &path, std::string const &content);

/// budgets_<t>.csv: header `agent_id,role,budget,reputation`, investors first.
std::string format_budgets(Snapshot const &snap);

/// edges_<t>.txt: one `k j w_kj` line per positive weight.
std::string format_edges(Snapshot const &snap);

/// Writes both snapshot files; returns their paths (budgets, edges).
std::vector<std::filesystem::path> write_snapshot(std::filesystem::path const &dir,
                                                  Snapshot const               &snap);

/// Reads a snapshot back. Budgets and reputations carry nine significant
/// digits. Throws SnapshotError with the file and line of the first problem.
Snapshot read_snapshot(std::filesystem::path const &budgets_file,
                       std::filesystem::path const &edges_file, std::uint64_t step);

struct SnapshotFiles
{
  std::uint64_t                        step{0};
  std::optional<std::filesystem::path> budgets;
  std::optional<std::filesystem::path> edges;
};

/// Every budgets_<t>.csv / edges_<t>.txt in a directory, grouped by step, ascending.
std::vector<SnapshotFiles> find_snapshots(std::filesystem::path const &dir);

/// Streams events.csv: `step,initiator,contacted,accepted,total_committed,status,return_value`.
class EventLogWriter
{
public:
  explicit EventLogWriter(std::filesystem::path path);

  void write(StepEvent const &event);

  /// Flushes and checks the stream; throws SnapshotError on failure.
  void close();

  std::filesystem::path const &path() const
  {
    return path_;
  }

private:
  std::filesystem::path path_;
  std::ofstream         out_;
};

}  // namespace invnet
