#include "modprime/table.hpp"

#include <cmath>

#include "json.hpp"
#include "modprime/format.hpp"

namespace modprime {

namespace {

nlohmann::ordered_json cell_json(const Cell& c) {
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    if (!std::isfinite(v)) return nullptr;
    return v;
  }
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

std::string cell_text(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_real(std::get<double>(c));
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return {};
}

void ConvergenceTable::add(std::string param, double measured, double reference, double budget) {
  rows.push_back({std::move(param), measured, reference, std::abs(measured - reference), budget});
}

void ConvergenceTable::check(std::string name, bool passed, std::string detail) {
  checks.push_back({std::move(name), passed, std::move(detail)});
}

bool ConvergenceTable::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

void ConvergenceTable::write_csv(std::ostream& out) const {
  out << "param,measured,reference,diff,budget\n";
  for (const auto& r : rows) {
    out << csv_field(r.param) << ',' << csv_field(cell_text(r.measured)) << ',' << csv_field(cell_text(r.reference))
        << ',' << csv_field(cell_text(r.diff)) << ',' << csv_field(cell_text(r.budget)) << '\n';
  }
}

void ConvergenceTable::write_json(std::ostream& out) const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json params_json = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) params_json[k] = v;
  j["meta"] = {{"command", command}, {"params", params_json}, {"version", kVersion}};
  nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"param", r.param},
                         {"measured", cell_json(r.measured)},
                         {"reference", cell_json(r.reference)},
                         {"diff", cell_json(r.diff)},
                         {"budget", cell_json(r.budget)}});
  }
  j["rows"] = rows_json;
  for (const auto& [k, v] : extras) j[k] = cell_json(v);
  out << j.dump(2) << '\n';
}

void ConvergenceTable::write_summary(std::ostream& out) const {
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
}

}  // namespace modprime
