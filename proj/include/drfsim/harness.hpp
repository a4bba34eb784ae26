#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drfsim/angular_momentum.hpp"
#include "drfsim/errors.hpp"

namespace drfsim {

enum class Command { QuantumEvolve, ClassicalWalk, Compare, Trajectories, CoherentTest, Scaling };

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);
const std::vector<Command>& all_commands();

/// Bad command-line input; the CLI maps it to exit status 2.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error("harness", what) {}
};

struct RunConfig {
  Command command = Command::Compare;
  std::vector<int> twice_j;
  std::optional<std::int64_t> n_max;  // default: ceil(5 half_life)
  std::optional<double> alpha;        // default: fitted step
  std::uint64_t seed = 20070131;
  std::int64_t samples = 1000;
  std::optional<int> l_max;
  std::optional<int> n_nodes;
  std::optional<std::string> out;

  /// Throws UsageError.
  void validate() const;
};

/// Parses "10", "1,2,3" or "1:20" (inclusive range) into 2j values.
std::vector<int> parse_twice_j_list(std::string_view text);

/// Steps after which the decaying part of F_Q halves:
/// ln 2 / (-ln(1 - 2/(2j+1)^2)).
double half_life(SpinLabel j);
/// ln 2 (2j+1)^2 / 2, the large-j form of half_life.
double asymptotic_half_life(SpinLabel j);
std::int64_t default_n_max(SpinLabel j);

struct ComparisonRow {
  std::int64_t n;
  double f_q_map;
  double f_q_closed;
  double f_c;
  double diff_qc;
  double diff_map_closed;
};

/// Quantum map, quantum closed form and classical Legendre pipeline side by
/// side. `alpha` defaults to the fitted step.
std::vector<ComparisonRow> compare(SpinLabel j, std::int64_t n_max, std::optional<double> alpha = {},
                                   std::optional<int> l_max = {});

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
};

/// Scientific notation with 17 significant digits.
std::string format_double(double v);

inline constexpr std::string_view kCompareHeader = "n,F_Q_map,F_Q_closed,F_C,diff_QC,diff_map_closed";

/// Column contract for `compare` output; throws ConsistencyError.
void check_compare_schema(const CsvTable& table);

struct NamedTable {
  std::optional<int> twice_j;  // set when a command writes one file per spin
  CsvTable table;
};

/// Runs the computation for a validated config. Throws drfsim::Error.
std::vector<NamedTable> execute(const RunConfig& config);

/// File name for one output table: the --out path itself, or
/// <stem>_2j<k><ext> when a command writes one table per spin.
std::string output_path(const std::string& out, const NamedTable& table, std::size_t table_count);
std::string manifest_path(const std::string& out);

/// Executes, writes CSV files (stdout without --out) and the JSON manifest.
/// Returns the process exit status; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

std::string_view library_version();

}  // namespace drfsim
