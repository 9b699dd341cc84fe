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

#include "invnet/commands.hpp"

#include "invnet/snapshot_io.hpp"

#include "json.hpp"
#include <openssl/evp.h>

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#ifndef INVNET_BUILD_ID
#define INVNET_BUILD_ID "unknown"
#endif

namespace invnet {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now()
{
  auto const  now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm     tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string read_text(fs::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw std::runtime_error(path.string() + ": cannot open");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string sha256_hex(fs::path const &file)
{
  std::ifstream in(file, std::ios::binary);
  if (!in)
  {
    throw std::runtime_error(file.string() + ": cannot open for hashing");
  }
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
  {
    throw std::runtime_error("sha256: digest initialisation failed");
  }
  std::vector<char> buf(1 << 16);
  while (in)
  {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0)
    {
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int  len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
  {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::string manifest_to_json(RunManifest const &manifest)
{
  auto const &c = manifest.config;
  json        files = json::array();
  for (auto const &f : manifest.files)
  {
    files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  json doc = {
      {"config",
       {{"num_investors", c.num_investors},
        {"num_initiators", c.num_initiators},
        {"num_steps", c.num_steps},
        {"threshold", c.threshold},
        {"invest_proportion", c.invest_proportion},
        {"initial_budget", c.initial_budget},
        {"income", c.income},
        {"memory", std::isinf(c.memory) ? json("inf") : json(c.memory)},
        {"greediness", c.greediness},
        {"rng_seed", c.rng_seed},
        {"snapshot_every", c.snapshot_every},
        {"initiator_stake_counts", c.initiator_stake == StakePolicy::counts_toward_threshold},
        {"return_distribution", "uniform"}}},
      {"config_text", format_config(c)},
      {"seed", c.rng_seed},
      {"build_id", manifest.build_id},
      {"started_at", manifest.started_at},
      {"finished_at", manifest.finished_at},
      {"files", files},
  };
  return doc.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string const &text)
{
  auto const  doc = json::parse(text);
  RunManifest m;
  m.config = parse_config_text(doc.at("config_text").get<std::string>(), "manifest");
  m.build_id = doc.at("build_id").get<std::string>();
  m.started_at = doc.at("started_at").get<std::string>();
  m.finished_at = doc.at("finished_at").get<std::string>();
  for (auto const &f : doc.at("files"))
  {
    m.files.push_back({f.at("name").get<std::string>(), f.at("sha256").get<std::string>(),
                       f.at("bytes").get<std::uintmax_t>()});
  }
  return m;
}

RunReport execute_run(SimConfig const &config, fs::path const &out_dir)
{
  validate(config);
  fs::create_directories(out_dir);

  RunReport report;
  report.manifest.config = config;
  report.manifest.build_id = INVNET_BUILD_ID;
  report.manifest.started_at = utc_now();

  std::vector<fs::path> created;
  auto const            events_final = out_dir / "events.csv";
  auto                  events_tmp = events_final;
  events_tmp += ".tmp";
  try
  {
    EventLogWriter events(events_tmp);
    created.push_back(events_tmp);

    run(
        config,
        [&](Snapshot const &snap) {
          for (auto &p : write_snapshot(out_dir, snap))
          {
            created.push_back(std::move(p));
          }
          if (snap.step == config.num_steps)
          {
            report.final_snapshot = snap;
          }
        },
        [&](StepEvent const &event) {
          events.write(event);
          ++report.stats.steps;
          if (event.status == ProjectStatus::settled)
          {
            ++report.stats.launched;
            report.stats.committed += event.total_committed;
          }
        });

    events.close();
    fs::rename(events_tmp, events_final);
    created.front() = events_final;

    for (auto const &path : created)
    {
      report.manifest.files.push_back({path.filename().string(), sha256_hex(path),
                                       fs::file_size(path)});
    }
    report.manifest.finished_at = utc_now();
    auto const manifest_path = out_dir / "manifest.json";
    write_file_atomic(manifest_path, manifest_to_json(report.manifest));
  }
  catch (...)
  {
    std::error_code ignored;
    for (auto const &path : created)
    {
      fs::remove(path, ignored);
    }
    fs::remove(events_tmp, ignored);
    throw;
  }
  return report;
}

int cmd_run(fs::path const &config_path, fs::path const &out_dir,
            std::optional<std::uint64_t> seed, std::ostream &err)
{
  try
  {
    SimConfig config = parse_config(config_path);
    if (seed)
    {
      config.rng_seed = *seed;
    }
    execute_run(config, out_dir);
    return 0;
  }
  catch (std::exception const &e)
  {
    err << "run: " << e.what() << '\n';
    return 1;
  }
}

// ---- analyze -----------------------------------------------------------------

std::string const &metrics_header()
{
  static std::string const header =
      "step,V,k_max,avg_degree,l,C_bipartite,C_projected,l_rand,C_rand";
  return header;
}

std::string format_metrics_row(MetricsRow const &row)
{
  auto const &m = row.metrics;
  std::string out = std::to_string(row.step);
  out += ',' + std::to_string(m.links);
  out += ',' + std::to_string(m.max_degree);
  out += ',' + format_number(m.average_degree);
  out += ',' + format_optional(m.avg_path_length);
  out += ',' + format_number(m.clustering_bipartite);
  out += ',' + format_number(m.clustering_projected);
  out += ',' + format_optional(m.l_rand);
  out += ',' + format_number(m.c_rand);
  return out;
}

namespace {

std::string tailfit_row(std::uint64_t step, char const *population,
                        std::vector<double> const &values)
{
  std::string out = std::to_string(step) + ',' + population + ',';
  try
  {
    auto const fit = powerlaw_tail_slope(values, default_tail_fraction);
    out += format_number(fit.slope) + ',' + format_number(fit.intercept) + ',' +
           format_number(fit.r_squared) + ',' + std::to_string(fit.points_used);
  }
  catch (ContractError const &)
  {
    out += "NA,NA,NA,0";
  }
  return out;
}

}  // namespace

int cmd_analyze(fs::path const &in_dir, fs::path const &out_file, std::ostream &err)
{
  std::vector<SnapshotFiles> found;
  try
  {
    found = find_snapshots(in_dir);
  }
  catch (std::exception const &e)
  {
    err << "analyze: " << e.what() << '\n';
    return 1;
  }
  if (found.empty())
  {
    err << "analyze: no snapshots in " << in_dir.string() << '\n';
    return 1;
  }

  bool        any_failed = false;
  std::string metrics = metrics_header() + "\n";
  std::string tails = "step,population,slope,intercept,r_squared,points_used\n";
  for (auto const &files : found)
  {
    if (!files.budgets || !files.edges)
    {
      err << "analyze: snapshot " << files.step << ": missing "
          << (files.budgets ? "edges_" : "budgets_") << files.step << " file\n";
      any_failed = true;
      continue;
    }
    try
    {
      Snapshot const snap = read_snapshot(*files.budgets, *files.edges, files.step);
      auto const     graph = build_graph(snap.investor_budgets.size(),
                                         snap.initiator_budgets.size(), snap.edges);
      metrics += format_metrics_row({files.step, measure_network(graph)}) + "\n";

      std::vector<double> all = snap.investor_budgets;
      all.insert(all.end(), snap.initiator_budgets.begin(), snap.initiator_budgets.end());
      tails += tailfit_row(files.step, "all", all) + "\n";
      tails += tailfit_row(files.step, "investors", snap.investor_budgets) + "\n";
      tails += tailfit_row(files.step, "initiators", snap.initiator_budgets) + "\n";
    }
    catch (std::exception const &e)
    {
      err << "analyze: " << e.what() << '\n';
      any_failed = true;
    }
  }

  try
  {
    if (out_file.has_parent_path())
    {
      fs::create_directories(out_file.parent_path());
    }
    write_file_atomic(out_file, metrics);
    write_file_atomic(out_file.parent_path() / "tailfit.csv", tails);
  }
  catch (std::exception const &e)
  {
    err << "analyze: " << e.what() << '\n';
    return 1;
  }
  return any_failed ? 1 : 0;
}

// ---- sweep ---------------------------------------------------------------------

std::string to_string(SweepAxis axis)
{
  switch (axis)
  {
  case SweepAxis::q:
    return "q";
  case SweepAxis::J:
    return "J";
  case SweepAxis::N:
    return "N";
  case SweepAxis::seed:
    return "seed";
  }
  return "?";
}

namespace {

std::string axis_key(SweepAxis axis)
{
  switch (axis)
  {
  case SweepAxis::q:
    return "invest_proportion";
  case SweepAxis::J:
    return "num_initiators";
  case SweepAxis::N:
    return "num_investors";
  case SweepAxis::seed:
    return "rng_seed";
  }
  return {};
}

std::string sweep_error(std::string_view origin, std::size_t line, std::string const &what)
{
  std::ostringstream out;
  out << origin << ':' << line << ": " << what;
  return out.str();
}

SimConfig with_axis_value(SimConfig config, SweepAxis axis, std::string const &value,
                          std::string_view origin, std::size_t line)
{
  ConfigEntry entry{axis_key(axis), value, line};
  apply_entry(config, entry, origin);
  return config;
}

}  // namespace

SweepSpec parse_sweep_spec_text(std::string_view text, std::string_view origin,
                                fs::path const &base_dir)
{
  auto const entries = parse_entries(text, origin);
  SweepSpec  spec;

  for (auto const &e : entries)
  {
    if (e.key == "base_config")
    {
      fs::path p = e.value;
      if (p.is_relative())
      {
        p = base_dir / p;
      }
      spec.base = parse_config(p);
    }
  }

  bool        have_axis = false;
  std::size_t values_line = 0;
  for (auto const &e : entries)
  {
    if (e.key == "base_config")
    {
      continue;
    }
    if (e.key == "axis")
    {
      if (e.value == "q")
        spec.axis = SweepAxis::q;
      else if (e.value == "J")
        spec.axis = SweepAxis::J;
      else if (e.value == "N")
        spec.axis = SweepAxis::N;
      else if (e.value == "seed")
        spec.axis = SweepAxis::seed;
      else
        throw ConfigError(sweep_error(origin, e.line, "axis: expected one of q, J, N, seed"));
      have_axis = true;
    }
    else if (e.key == "values")
    {
      values_line = e.line;
      std::istringstream in(e.value);
      std::string        item;
      while (std::getline(in, item, ','))
      {
        auto const first = item.find_first_not_of(" \t");
        auto const last = item.find_last_not_of(" \t");
        if (first == std::string::npos)
        {
          throw ConfigError(sweep_error(origin, e.line, "values: empty item"));
        }
        spec.values.push_back(item.substr(first, last - first + 1));
      }
    }
    else if (e.key == "seeds_per_point")
    {
      std::size_t n = 0;
      auto const [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), n);
      if (ec != std::errc{} || ptr != e.value.data() + e.value.size() || n < 1)
      {
        throw ConfigError(sweep_error(origin, e.line, "seeds_per_point: must be an integer >= 1"));
      }
      spec.seeds_per_point = n;
    }
    else if (!apply_entry(spec.base, e, origin))
    {
      throw ConfigError(sweep_error(origin, e.line, e.key + ": unknown key"));
    }
  }

  if (!have_axis)
  {
    throw ConfigError(std::string(origin) + ": missing 'axis'");
  }
  if (spec.values.empty())
  {
    throw ConfigError(std::string(origin) + ": 'values' must list at least one value");
  }
  try
  {
    validate(spec.base);
  }
  catch (ContractError const &e)
  {
    throw ConfigError(std::string(origin) + ": base config: " + e.what());
  }
  // every derived config must be valid; apply_entry range-checks the value
  for (auto const &v : spec.values)
  {
    with_axis_value(spec.base, spec.axis, v, origin, values_line);
  }
  return spec;
}

SweepSpec parse_sweep_spec(fs::path const &path)
{
  std::string text;
  try
  {
    text = read_text(path);
  }
  catch (std::exception const &)
  {
    throw ConfigError(path.string() + ": cannot open sweep spec");
  }
  return parse_sweep_spec_text(text, path.string(), path.parent_path());
}

std::vector<SweepRun> expand_sweep(SweepSpec const &spec)
{
  std::vector<SweepRun> runs;
  for (auto const &value : spec.values)
  {
    SimConfig const point = with_axis_value(spec.base, spec.axis, value, "sweep", 0);
    for (std::size_t i = 0; i < spec.seeds_per_point; ++i)
    {
      SweepRun r;
      r.value = value;
      r.config = point;
      r.config.rng_seed = point.rng_seed + i;
      r.directory = to_string(spec.axis) + "_" + value + "_seed_" + std::to_string(r.config.rng_seed);
      runs.push_back(std::move(r));
    }
  }
  return runs;
}

namespace {

struct RunSummary
{
  bool                                 ok{false};
  std::string                          error;
  std::map<std::string, double>        values;  // absent metrics are simply missing
};

std::vector<std::string> const &summary_metrics()
{
  static std::vector<std::string> const names = {
      "V",         "k_max",       "avg_degree", "l",           "C_projected", "C_rand",
      "tail_slope", "mean_budget", "launch_rate", "committed_per_initiator"};
  return names;
}

RunSummary summarise(RunReport const &report, SimConfig const &config)
{
  RunSummary s;
  s.ok = true;
  auto const &snap = report.final_snapshot;
  auto const  graph = build_graph(snap.investor_budgets.size(), snap.initiator_budgets.size(),
                                  snap.edges);
  auto const  m = measure_network(graph);
  s.values["V"] = static_cast<double>(m.links);
  s.values["k_max"] = static_cast<double>(m.max_degree);
  s.values["avg_degree"] = m.average_degree;
  if (m.avg_path_length)
  {
    s.values["l"] = *m.avg_path_length;
  }
  s.values["C_projected"] = m.clustering_projected;
  s.values["C_rand"] = m.c_rand;

  std::vector<double> budgets = snap.investor_budgets;
  budgets.insert(budgets.end(), snap.initiator_budgets.begin(), snap.initiator_budgets.end());
  try
  {
    s.values["tail_slope"] = powerlaw_tail_slope(budgets).slope;
  }
  catch (ContractError const &)
  {
  }
  double total = 0.0;
  for (double b : budgets)
  {
    total += b;
  }
  s.values["mean_budget"] = total / static_cast<double>(budgets.size());
  if (report.stats.steps > 0)
  {
    s.values["launch_rate"] =
        static_cast<double>(report.stats.launched) / static_cast<double>(report.stats.steps);
  }
  s.values["committed_per_initiator"] =
      report.stats.committed / static_cast<double>(config.num_initiators);
  return s;
}

}  // namespace

int cmd_sweep(fs::path const &spec_path, fs::path const &out_dir, unsigned parallel,
              std::ostream &err)
{
  SweepSpec spec;
  try
  {
    spec = parse_sweep_spec(spec_path);
    fs::create_directories(out_dir);
  }
  catch (std::exception const &e)
  {
    err << "sweep: " << e.what() << '\n';
    return 1;
  }

  auto const              runs = expand_sweep(spec);
  std::vector<RunSummary> results(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++)
    {
      try
      {
        auto const report = execute_run(runs[i].config, out_dir / runs[i].directory);
        results[i] = summarise(report, runs[i].config);
      }
      catch (std::exception const &e)
      {
        results[i].error = e.what();
      }
    }
  };
  unsigned const           threads = std::max(1U, std::min<unsigned>(parallel, runs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t)
  {
    pool.emplace_back(worker);
  }
  worker();
  for (auto &t : pool)
  {
    t.join();
  }

  bool any_failed = false;
  for (std::size_t i = 0; i < runs.size(); ++i)
  {
    if (!results[i].ok)
    {
      err << "sweep: " << runs[i].directory.string() << ": " << results[i].error << '\n';
      any_failed = true;
    }
  }

  std::string summary = "axis,value,runs,failed";
  for (auto const &name : summary_metrics())
  {
    summary += ',' + name + "_mean," + name + "_sd";
  }
  summary += '\n';
  std::size_t i = 0;
  for (auto const &value : spec.values)
  {
    std::size_t                                 ok = 0;
    std::size_t                                 failed = 0;
    std::map<std::string, std::vector<double>> samples;
    for (std::size_t s = 0; s < spec.seeds_per_point; ++s, ++i)
    {
      if (!results[i].ok)
      {
        ++failed;
        continue;
      }
      ++ok;
      for (auto const &[name, v] : results[i].values)
      {
        samples[name].push_back(v);
      }
    }
    summary += to_string(spec.axis) + ',' + value + ',' + std::to_string(ok) + ',' +
               std::to_string(failed);
    for (auto const &name : summary_metrics())
    {
      auto const &xs = samples[name];
      if (xs.empty())
      {
        summary += ",NA,NA";
        continue;
      }
      double mean = 0.0;
      for (double x : xs)
      {
        mean += x;
      }
      mean /= static_cast<double>(xs.size());
      double var = 0.0;
      for (double x : xs)
      {
        var += (x - mean) * (x - mean);
      }
      double const sd = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
      summary += ',' + format_number(mean) + ',' + format_number(sd);
    }
    summary += '\n';
  }

  try
  {
    write_file_atomic(out_dir / "summary.csv", summary);
  }
  catch (std::exception const &e)
  {
    err << "sweep: " << e.what() << '\n';
    return 1;
  }
  return any_failed ? 1 : 0;
}

}  // namespace invnet
