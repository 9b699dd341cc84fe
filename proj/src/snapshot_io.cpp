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

#include "invnet/snapshot_io.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <regex>
#include <sstream>

namespace invnet {
namespace {

std::string at_line(std::filesystem::path const &file, std::size_t line)
{
  return file.string() + ":" + std::to_string(line) + ": ";
}

std::vector<std::string> split(std::string const &line, char sep)
{
  std::vector<std::string> fields;
  std::string              field;
  std::istringstream       in(line);
  while (std::getline(in, field, sep))
  {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == sep)
  {
    fields.emplace_back();
  }
  return fields;
}

bool parse_index(std::string const &s, std::size_t &out)
{
  auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_real(std::string const &s, double &out)
{
  if (s.empty())
  {
    return false;
  }
  char *end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

std::ifstream open_input(std::filesystem::path const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw SnapshotError(path.string() + ": cannot open");
  }
  return in;
}

}  // namespace

std::string format_number(double value)
{
  char buf[64];
  auto const res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

std::string format_optional(std::optional<double> value)
{
  return value ? format_number(*value) : std::string{"NA"};
}

std::filesystem::path budgets_path(std::filesystem::path const &dir, std::uint64_t step)
{
  return dir / ("budgets_" + std::to_string(step) + ".csv");
}

std::filesystem::path edges_path(std::filesystem::path const &dir, std::uint64_t step)
{
  return dir / ("edges_" + std::to_string(step) + ".txt");
}

void write_file_atomic(std::filesystem::path const &path, std::string const &content)
{
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw SnapshotError(path.string() + ": cannot open for writing");
    }
    out << content;
    out.flush();
    if (!out)
    {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw SnapshotError(path.string() + ": write failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
  {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw SnapshotError(path.string() + ": " + ec.message());
  }
}

std::string format_budgets(Snapshot const &snap)
{
  std::string out = "agent_id,role,budget,reputation\n";
  for (std::size_t k = 0; k < snap.investor_budgets.size(); ++k)
  {
    out += std::to_string(k) + ",investor," + format_number(snap.investor_budgets[k]) + ',' +
           format_number(snap.reputations.investor_reputation[k]) + '\n';
  }
  for (std::size_t j = 0; j < snap.initiator_budgets.size(); ++j)
  {
    out += std::to_string(j) + ",initiator," + format_number(snap.initiator_budgets[j]) + ',' +
           format_number(snap.reputations.initiator_reputation[j]) + '\n';
  }
  return out;
}

std::string format_edges(Snapshot const &snap)
{
  std::string out;
  out.reserve(snap.edges.size() * 24);
  for (auto const &e : snap.edges)
  {
    out += std::to_string(e.investor);
    out += ' ';
    out += std::to_string(e.initiator);
    out += ' ';
    out += format_number(e.weight);
    out += '\n';
  }
  return out;
}

std::vector<std::filesystem::path> write_snapshot(std::filesystem::path const &dir,
                                                  Snapshot const               &snap)
{
  auto const b = budgets_path(dir, snap.step);
  auto const e = edges_path(dir, snap.step);
  write_file_atomic(b, format_budgets(snap));
  try
  {
    write_file_atomic(e, format_edges(snap));
  }
  catch (...)
  {
    std::error_code ignored;
    std::filesystem::remove(b, ignored);
    throw;
  }
  return {b, e};
}

Snapshot read_snapshot(std::filesystem::path const &budgets_file,
                       std::filesystem::path const &edges_file, std::uint64_t step)
{
  Snapshot snap;
  snap.step = step;

  {
    auto        in = open_input(budgets_file);
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line != "agent_id,role,budget,reputation")
    {
      throw SnapshotError(at_line(budgets_file, 1) + "missing or wrong header");
    }
    while (std::getline(in, line))
    {
      ++line_no;
      if (line.empty())
      {
        continue;
      }
      auto const  fields = split(line, ',');
      std::size_t id = 0;
      double      budget = 0.0;
      double      reputation = 0.0;
      if (fields.size() != 4 || !parse_index(fields[0], id) || !parse_real(fields[2], budget) ||
          !parse_real(fields[3], reputation))
      {
        throw SnapshotError(at_line(budgets_file, line_no) + "malformed row");
      }
      bool const investor = fields[1] == "investor";
      if (!investor && fields[1] != "initiator")
      {
        throw SnapshotError(at_line(budgets_file, line_no) + "unknown role '" + fields[1] + "'");
      }
      auto &budgets = investor ? snap.investor_budgets : snap.initiator_budgets;
      auto &reps = investor ? snap.reputations.investor_reputation
                            : snap.reputations.initiator_reputation;
      if (id != budgets.size())
      {
        throw SnapshotError(at_line(budgets_file, line_no) + "agent ids must be consecutive");
      }
      budgets.push_back(budget);
      reps.push_back(reputation);
    }
  }

  auto const investors = snap.investor_budgets.size();
  auto const initiators = snap.initiator_budgets.size();
  auto       in = open_input(edges_file);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    if (line.empty())
    {
      continue;
    }
    auto const   fields = split(line, ' ');
    WeightedEdge e;
    if (fields.size() != 3 || !parse_index(fields[0], e.investor) ||
        !parse_index(fields[1], e.initiator) || !parse_real(fields[2], e.weight))
    {
      throw SnapshotError(at_line(edges_file, line_no) + "expected 'k j w'");
    }
    if (e.investor >= investors || e.initiator >= initiators)
    {
      throw SnapshotError(at_line(edges_file, line_no) + "endpoint out of range");
    }
    if (!(e.weight > 0.0))
    {
      throw SnapshotError(at_line(edges_file, line_no) + "weight must be positive");
    }
    snap.edges.push_back(e);
  }
  return snap;
}

std::vector<SnapshotFiles> find_snapshots(std::filesystem::path const &dir)
{
  static std::regex const pattern{R"((budgets|edges)_(\d+)\.(csv|txt))"};
  std::map<std::uint64_t, SnapshotFiles> by_step;
  for (auto const &entry : std::filesystem::directory_iterator(dir))
  {
    std::smatch m;
    auto const  name = entry.path().filename().string();
    if (!entry.is_regular_file() || !std::regex_match(name, m, pattern))
    {
      continue;
    }
    bool const budgets = m[1] == "budgets";
    if ((budgets && m[3] != "csv") || (!budgets && m[3] != "txt"))
    {
      continue;
    }
    auto const step = std::stoull(m[2]);
    auto      &files = by_step[step];
    files.step = step;
    (budgets ? files.budgets : files.edges) = entry.path();
  }
  std::vector<SnapshotFiles> out;
  for (auto &[step, files] : by_step)
  {
    out.push_back(files);
  }
  return out;
}

EventLogWriter::EventLogWriter(std::filesystem::path path)
  : path_{std::move(path)}
  , out_{path_, std::ios::binary | std::ios::trunc}
{
  if (!out_)
  {
    throw SnapshotError(path_.string() + ": cannot open for writing");
  }
  out_ << "step,initiator,contacted,accepted,total_committed,status,return_value\n";
}

void EventLogWriter::write(StepEvent const &event)
{
  out_ << event.step << ',' << event.initiator << ',' << event.contacted << ',' << event.accepted
       << ',' << format_number(event.total_committed) << ',' << to_string(event.status) << ','
       << format_optional(event.return_value) << '\n';
}

void EventLogWriter::close()
{
  out_.flush();
  bool const ok = static_cast<bool>(out_);
  out_.close();
  if (!ok)
  {
    throw SnapshotError(path_.string() + ": write failed");
  }
}

}  // namespace invnet
