#include "report.hpp"

#include <cmath>
#include <cstdint>

#include <fmt/format.h>

namespace lwdhr::cli {

using nlohmann::json;

void Report::check(const std::string& name, const std::string& anchor, double residual, double tolerance) {
  checks.push_back({name, anchor, residual, tolerance, std::isfinite(residual) && residual <= tolerance});
}

void Report::require(const std::string& name, const std::string& anchor, bool ok) {
  checks.push_back({name, anchor, ok ? 0.0 : 1.0, 0.0, ok});
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::vector<std::string> Report::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.pass) out.push_back(c.name);
  return out;
}

json Report::to_json() const {
  json doc;
  doc["report_version"] = 1;
  doc["command"] = command;
  doc["inputs"] = inputs;
  doc["config"] = config;
  json arr = json::array();
  for (const auto& c : checks) {
    json r;
    r["name"] = c.name;
    r["anchor"] = c.anchor;
    r["residual"] = std::isfinite(c.residual) ? json(c.residual) : json("non-finite");
    r["tolerance"] = c.tolerance;
    r["pass"] = c.pass;
    arr.push_back(r);
  }
  doc["checks"] = arr;
  doc["pass"] = all_pass();
  doc["failures"] = failures();
  if (!verdict.empty()) doc["verdict"] = verdict;
  if (!details.empty()) doc["details"] = details;
  if (seconds) doc["timing"] = {{"seconds", *seconds}};
  return doc;
}

std::string Report::to_table() const {
  std::string out = fmt::format("{} ({})\n", command, inputs.value("category", std::string("-")));
  size_t width = 10;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  out += fmt::format("{:<{}}  {:>11}  {:>9}  {}\n", "check", width, "residual", "tol", "result");
  for (const auto& c : checks)
    out += fmt::format("{:<{}}  {:>11.3e}  {:>9.1e}  {}\n", c.name, width, c.residual, c.tolerance,
                       c.pass ? "pass" : "FAIL");
  if (!verdict.empty()) out += "verdict: " + verdict + "\n";
  if (seconds) out += fmt::format("time: {:.2f} s\n", *seconds);
  return out;
}

std::string digest(const json& doc) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : doc.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace lwdhr::cli
