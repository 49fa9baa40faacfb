#pragma once

// Self-verification battery.  Each check reproduces a block of reference
// results (printed closed forms, the big benchmark tables, structural
// identities between the independent layers of the library) and reports a
// single pass/fail with a short diagnostic.  The battery backs both the
// command-line `verify` subcommand and the standalone acceptance runner, and
// the table descriptors double as the data source for table emission.

#include <string>
#include <vector>

namespace rpgf {

enum class CheckDepth {
  Quick,  // trimmed grids and sample counts, a few seconds total
  Full,   // the complete battery, several minutes
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // first failure, or a one-line summary when passing
};

// How a printed reference cell is compared against the computed value.
enum class CellKind {
  Exact,       // |computed - printed| <= max(rel*|printed|, quantum/2)
  Order,       // printed is a decade exponent; |log10(computed) - printed| <= quantum
  LowerBound,  // printed bound derived from the sequential column; same band as Exact
  UpperBound,  // likewise
  Zero,        // computed must vanish identically
  Dash,        // quantity undefined in this column; never compared
};

struct TableCell {
  std::string row;
  int n = 0;             // column label (segment count)
  CellKind kind = CellKind::Dash;
  double printed = 0.0;  // printed value, or the decade exponent for Order
  double quantum = 0.0;  // printed resolution, or the decade window for Order
  double rel = 0.0;      // relative half-width of the acceptance band
  double computed = 0.0;
  bool pass = true;
};

struct ReferenceTable {
  int id = 0;  // 2..6
  std::string title;
  std::vector<int> columns;
  std::vector<TableCell> cells;
  bool pass = true;
};

// Computes and evaluates reference table `id` in 2..6: error-parameter
// thresholds (2), sequential per-channel-use (3), optimal per-channel-use (4),
// sequential per-second (5), optimal per-second (6).
ReferenceTable reference_table(int id);

// Renders a cell the way the reference prints it ("35497", "~1e-8", ">0.0064",
// "0", "-"), used by table emission.
std::string printed_cell_text(const TableCell& cell);

// The individual checks, in their fixed reporting order.
CheckResult check_printed_closed_forms();                   // 1
CheckResult check_greedy_equals_global(CheckDepth depth);   // 2
CheckResult check_sequential_table();                       // 3
CheckResult check_optimal_table();                          // 4
CheckResult check_per_second_tables();                      // 5
CheckResult check_error_thresholds();                       // 6
CheckResult check_cutoff_convergence();                     // 7
CheckResult check_simulation_concordance(CheckDepth depth); // 8
CheckResult check_state_algebra();                          // 9
CheckResult check_swap_strategy_orderings();                // 10
CheckResult check_optical_layer();                          // 11

// Runs all checks in order.  Every check is executed even after a failure.
std::vector<CheckResult> run_all_checks(CheckDepth depth);

}  // namespace rpgf
