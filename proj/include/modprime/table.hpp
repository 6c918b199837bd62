#pragma once

// ConvergenceTable: the common output of every experiment and CLI command.
// CSV columns are param,measured,reference,diff,budget; JSON is
// {"meta": {"command", "params", "version"}, "rows": [{...}]} with the same keys.

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace modprime {

inline constexpr const char* kVersion = "1.0.0";

// Empty, a real number, or preformatted text (exact rationals as "p/q").
using Cell = std::variant<std::monostate, double, std::string>;

struct ConvergenceRow {
  std::string param;
  Cell measured;
  Cell reference;
  Cell diff;
  Cell budget;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConvergenceTable {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<ConvergenceRow> rows;
  // Extra top-level JSON members, emitted after "rows".
  std::vector<std::pair<std::string, Cell>> extras;
  std::vector<Check> checks;

  // diff = |measured - reference|.
  void add(std::string param, double measured, double reference, double budget);
  void add_row(ConvergenceRow row) { rows.push_back(std::move(row)); }
  void check(std::string name, bool passed, std::string detail = {});
  bool all_passed() const;

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
  // One line per check: "PASS name: detail".
  void write_summary(std::ostream& out) const;
};

std::string cell_text(const Cell& c);

}  // namespace modprime
