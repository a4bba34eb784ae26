#include "drfsim/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "drfsim/classical_walk.hpp"
#include "drfsim/coherent_analysis.hpp"
#include "drfsim/parallel.hpp"
#include "drfsim/quantum_drf.hpp"
#include "drfsim/tolerances.hpp"
#include "drfsim/version.hpp"

namespace drfsim {

namespace {

constexpr const char* kModule = "harness";

struct CommandName {
  Command command;
  std::string_view name;
};

constexpr std::array<CommandName, 6> kCommandNames{{
    {Command::QuantumEvolve, "quantum-evolve"},
    {Command::ClassicalWalk, "classical-walk"},
    {Command::Compare, "compare"},
    {Command::Trajectories, "trajectories"},
    {Command::CoherentTest, "coherent-test"},
    {Command::Scaling, "scaling"},
}};

int parse_int(std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw UsageError("not an integer: '" + std::string(text) + "'");
  return value;
}

std::string format_int(std::int64_t v) { return std::to_string(v); }

std::int64_t steps_for(const RunConfig& config, SpinLabel j) {
  return config.n_max ? *config.n_max : default_n_max(j);
}

// Runs fn for every spin of the config concurrently; results keep the order
// of config.twice_j.
template <class Result, class Fn>
std::vector<Result> sweep(const RunConfig& config, Fn&& fn) {
  std::vector<Result> results(config.twice_j.size());
  parallel_for(config.twice_j.size(), [&](std::size_t i) { results[i] = fn(SpinLabel(config.twice_j[i])); });
  return results;
}

CsvTable concat(std::vector<std::string> header, std::vector<CsvTable> parts) {
  CsvTable table{std::move(header), {}};
  for (CsvTable& part : parts)
    for (auto& row : part.rows) table.rows.push_back(std::move(row));
  return table;
}

CsvTable quantum_evolve_table(const RunConfig& config) {
  auto parts = sweep<CsvTable>(config, [&](SpinLabel j) {
    const FidelitySeries series = evolve(j, steps_for(config, j));
    CsvTable t;
    for (const FidelityEntry& e : series.entries) {
      const double diff = std::abs(e.map - e.closed);
      if (diff > tol::kOracle) {
        throw ConsistencyError("quantum_drf", "iterated map departs from the closed form at 2j=" +
                                                  std::to_string(j.twice_j()) + ", n=" + std::to_string(e.n));
      }
      t.rows.push_back({format_int(j.twice_j()), format_int(e.n), format_double(e.map),
                        format_double(e.closed), format_double(diff)});
    }
    return t;
  });
  return concat({"twice_j", "n", "F_Q_map", "F_Q_closed", "diff_map_closed"}, std::move(parts));
}

CsvTable classical_walk_table(const RunConfig& config) {
  auto parts = sweep<CsvTable>(config, [&](SpinLabel j) {
    const double alpha = config.alpha ? *config.alpha : fitted_step(j);
    const int l_max = config.l_max ? *config.l_max : default_l_max(j);
    CsvTable t;
    for (const ClassicalFidelityRow& r : classical_fidelity_series(j, alpha, steps_for(config, j), l_max)) {
      t.rows.push_back({format_int(j.twice_j()), format_int(r.n), format_double(alpha),
                        format_double(r.pipeline), format_double(r.closed),
                        format_double(std::abs(r.pipeline - r.closed))});
    }
    return t;
  });
  return concat({"twice_j", "n", "alpha", "F_C", "F_C_closed", "diff"}, std::move(parts));
}

std::vector<NamedTable> compare_tables(const RunConfig& config) {
  auto tables = sweep<CsvTable>(config, [&](SpinLabel j) {
    const auto rows = compare(j, steps_for(config, j), config.alpha, config.l_max);
    CsvTable t;
    std::istringstream header{std::string(kCompareHeader)};
    for (std::string col; std::getline(header, col, ',');) t.header.push_back(col);
    for (const ComparisonRow& r : rows) {
      if (r.diff_map_closed > tol::kOracle) {
        throw ConsistencyError("quantum_drf", "iterated map departs from the closed form at n=" +
                                                  std::to_string(r.n));
      }
      if (!config.alpha && r.diff_qc > tol::kOracle) {
        throw ConsistencyError("classical_walk", "fitted walk departs from the quantum fidelity at n=" +
                                                     std::to_string(r.n));
      }
      t.rows.push_back({format_int(r.n), format_double(r.f_q_map), format_double(r.f_q_closed),
                        format_double(r.f_c), format_double(r.diff_qc), format_double(r.diff_map_closed)});
    }
    check_compare_schema(t);
    return t;
  });
  std::vector<NamedTable> named;
  for (std::size_t i = 0; i < tables.size(); ++i) named.push_back({config.twice_j[i], std::move(tables[i])});
  return named;
}

CsvTable trajectories_table(const RunConfig& config) {
  // Trajectories parallelize internally; spins run one after another.
  CsvTable table{{"twice_j", "n", "samples", "mean_F", "std_error", "F_closed", "z_score"}, {}};
  for (int tj : config.twice_j) {
    const SpinLabel j(tj);
    const std::int64_t n_max = steps_for(config, j);
    const TrajectoryStatistics stats = trajectory_fidelity_statistics(j, n_max, config.seed, config.samples);
    for (std::int64_t n = 0; n <= n_max; ++n) {
      const auto k = static_cast<std::size_t>(n);
      const double closed = closed_form_fidelity(j, n);
      const double se = stats.std_error[k];
      const double z = se > 0.0 ? (stats.mean[k] - closed) / se : 0.0;
      table.rows.push_back({format_int(tj), format_int(n), format_int(config.samples), format_double(stats.mean[k]),
                            format_double(se), format_double(closed), format_double(z)});
    }
  }
  return table;
}

CsvTable coherent_table(const RunConfig& config) {
  auto parts = sweep<CsvTable>(config, [&](SpinLabel j) {
    const int nodes = config.n_nodes ? *config.n_nodes : default_node_count(j);
    CsvTable t;
    for (std::int64_t n = 0; n <= steps_for(config, j); ++n) {
      const RefinementStudy s = convexity_refinement(j, n, nodes);
      if (n == 0 && s.coarse.residual > tol::kOracle) {
        throw ConsistencyError("coherent_analysis", "the initial coherent state was not recovered");
      }
      t.rows.push_back({format_int(j.twice_j()), format_int(n), format_int(s.coarse_nodes),
                        format_double(s.coarse.residual), format_int(s.refined_nodes),
                        format_double(s.refined.residual), format_double(s.relative_change()),
                        format_double(s.coarse.weight_sum_gap), std::string(verdict_name(s.verdict()))});
    }
    return t;
  });
  return concat({"twice_j", "n", "nodes", "residual", "refined_nodes", "refined_residual", "relative_change",
                 "weight_sum_gap", "verdict"},
                std::move(parts));
}

CsvTable scaling_table(const RunConfig& config) {
  CsvTable table{{"twice_j", "half_life", "asymptotic_half_life", "doubling_ratio"}, {}};
  for (int tj : config.twice_j) {
    const SpinLabel j(tj);
    std::string ratio;
    if (tj % 2 == 0 && std::find(config.twice_j.begin(), config.twice_j.end(), tj / 2) != config.twice_j.end()) {
      ratio = format_double(half_life(j) / half_life(SpinLabel(tj / 2)));
    }
    table.rows.push_back({format_int(tj), format_double(half_life(j)), format_double(asymptotic_half_life(j)), ratio});
  }
  return table;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = command_name(c.command);
  j["twice_j"] = c.twice_j;
  j["n_max"] = c.n_max ? nlohmann::ordered_json(*c.n_max) : nlohmann::ordered_json("default");
  j["alpha"] = c.alpha ? nlohmann::ordered_json(*c.alpha) : nlohmann::ordered_json("fitted");
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["l_max"] = c.l_max ? nlohmann::ordered_json(*c.l_max) : nlohmann::ordered_json("default");
  j["nodes"] = c.n_nodes ? nlohmann::ordered_json(*c.n_nodes) : nlohmann::ordered_json("default");
  return j;
}

}  // namespace

std::string_view library_version() { return kVersion; }

std::string_view command_name(Command c) {
  for (const auto& entry : kCommandNames)
    if (entry.command == c) return entry.name;
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& entry : kCommandNames)
    if (entry.name == name) return entry.command;
  return std::nullopt;
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> commands = [] {
    std::vector<Command> v;
    for (const auto& entry : kCommandNames) v.push_back(entry.command);
    return v;
  }();
  return commands;
}

std::vector<int> parse_twice_j_list(std::string_view text) {
  std::vector<int> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, comma - start);
    if (item.empty()) throw UsageError("empty entry in 2j list '" + std::string(text) + "'");
    if (const auto colon = item.find(':'); colon != std::string_view::npos) {
      const int lo = parse_int(item.substr(0, colon));
      const int hi = parse_int(item.substr(colon + 1));
      if (hi < lo) throw UsageError("empty 2j range '" + std::string(item) + "'");
      for (int v = lo; v <= hi; ++v) values.push_back(v);
    } else {
      values.push_back(parse_int(item));
    }
    start = comma + 1;
  }
  return values;
}

void RunConfig::validate() const {
  if (twice_j.empty()) throw UsageError("--twice-j is required");
  for (int tj : twice_j)
    if (tj < 1) throw UsageError("--twice-j values must be >= 1");
  if (n_max && *n_max < 0) throw UsageError("--n-max must be >= 0");
  if (alpha && !(*alpha >= 0.0 && *alpha <= std::numbers::pi)) throw UsageError("--alpha must lie in [0, pi]");
  if (samples < 1) throw UsageError("--samples must be >= 1");
  if (l_max && *l_max < 1) throw UsageError("--l-max must be >= 1");
  if (n_nodes) {
    const int largest = *std::max_element(twice_j.begin(), twice_j.end());
    if (*n_nodes < largest + 1) throw UsageError("--nodes must be at least 2j+1");
  }
}

double half_life(SpinLabel j) {
  if (j.twice_j() < 1) throw DomainError(kModule, "half-life needs j >= 1/2");
  const double d = j.dim();
  return std::numbers::ln2 / -std::log1p(-2.0 / (d * d));
}

double asymptotic_half_life(SpinLabel j) {
  const double d = j.dim();
  return 0.5 * std::numbers::ln2 * d * d;
}

std::int64_t default_n_max(SpinLabel j) { return static_cast<std::int64_t>(std::ceil(5.0 * half_life(j))); }

std::vector<ComparisonRow> compare(SpinLabel j, std::int64_t n_max, std::optional<double> alpha,
                                   std::optional<int> l_max) {
  const FidelitySeries quantum = evolve(j, n_max);
  const double step = alpha ? *alpha : fitted_step(j);
  const auto classical = classical_fidelity_series(j, step, n_max, l_max ? *l_max : default_l_max(j));
  std::vector<ComparisonRow> rows;
  rows.reserve(quantum.entries.size());
  for (std::size_t i = 0; i < quantum.entries.size(); ++i) {
    const FidelityEntry& q = quantum.entries[i];
    const double f_c = classical[i].pipeline;
    rows.push_back({q.n, q.map, q.closed, f_c, std::abs(q.map - f_c), std::abs(q.map - q.closed)});
  }
  return rows;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string CsvTable::to_string() const {
  std::string s;
  auto line = [&s](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) s += ',';
      s += fields[i];
    }
    s += '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return s;
}

void check_compare_schema(const CsvTable& table) {
  std::string header;
  for (std::size_t i = 0; i < table.header.size(); ++i) header += (i ? "," : "") + table.header[i];
  if (header != kCompareHeader) throw ConsistencyError(kModule, "compare header is '" + header + "'");
  std::int64_t expected_n = 0;
  for (const auto& row : table.rows) {
    if (row.size() != 6) throw ConsistencyError(kModule, "compare row with " + std::to_string(row.size()) + " fields");
    if (row[0] != std::to_string(expected_n++)) throw ConsistencyError(kModule, "compare rows out of order");
    double v[5];
    for (int k = 0; k < 5; ++k) {
      const std::string& field = row[k + 1];
      if (field.find('e') == std::string::npos) throw ConsistencyError(kModule, "value not in scientific notation");
      v[k] = std::stod(field);
      if (!std::isfinite(v[k])) throw ConsistencyError(kModule, "non-finite value in compare output");
    }
    if (v[3] < 0.0 || v[4] < 0.0) throw ConsistencyError(kModule, "negative difference column");
  }
}

std::vector<NamedTable> execute(const RunConfig& config) {
  config.validate();
  switch (config.command) {
    case Command::QuantumEvolve: return {{std::nullopt, quantum_evolve_table(config)}};
    case Command::ClassicalWalk: return {{std::nullopt, classical_walk_table(config)}};
    case Command::Compare: return compare_tables(config);
    case Command::Trajectories: return {{std::nullopt, trajectories_table(config)}};
    case Command::CoherentTest: return {{std::nullopt, coherent_table(config)}};
    case Command::Scaling: return {{std::nullopt, scaling_table(config)}};
  }
  throw UsageError("unknown command");
}

std::string output_path(const std::string& out, const NamedTable& table, std::size_t table_count) {
  if (table_count <= 1 || !table.twice_j) return out;
  const std::filesystem::path p(out);
  std::filesystem::path name = p.stem();
  name += "_2j" + std::to_string(*table.twice_j);
  name += p.extension();
  return (p.parent_path() / name).string();
}

std::string manifest_path(const std::string& out) {
  std::filesystem::path p(out);
  p.replace_extension(".manifest.json");
  return p.string();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = utc_timestamp();
  std::vector<NamedTable> tables;
  try {
    tables = execute(config);
  } catch (const UsageError& e) {
    err << "drfsim: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "drfsim: [" << e.module() << "] " << e.what() << '\n';
    return 1;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (!config.out) {
    for (const NamedTable& t : tables) out << t.table.to_string();
    return 0;
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = "drfsim";
  manifest["version"] = library_version();
  manifest["config"] = config_json(config);
  manifest["seed"] = config.seed;
  manifest["started_at"] = started_at;
  manifest["wall_time_seconds"] = wall;
  manifest["threads"] = worker_count();
  manifest["outputs"] = nlohmann::ordered_json::array();
  for (const NamedTable& t : tables) {
    const std::string path = output_path(*config.out, t, tables.size());
    if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(parent, ec);
    }
    std::ofstream file(path, std::ios::binary);
    file << t.table.to_string();
    if (!file) {
      err << "drfsim: [harness] cannot write " << path << '\n';
      return 1;
    }
    manifest["outputs"].push_back({{"path", path}, {"rows", t.table.rows.size()}});
  }
  std::ofstream file(manifest_path(*config.out), std::ios::binary);
  file << manifest.dump(2) << '\n';
  if (!file) {
    err << "drfsim: [harness] cannot write manifest\n";
    return 1;
  }
  return 0;
}

}  // namespace drfsim
