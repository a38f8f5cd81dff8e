#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace lwdhr::cli {

struct CheckRecord {
  std::string name;
  std::string anchor;  // topic tag, e.g. "fusion.pentagon"
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct Report {
  std::string command;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json config = nlohmann::json::object();
  std::vector<CheckRecord> checks;
  nlohmann::json details = nlohmann::json::object();
  std::string verdict;
  std::optional<double> seconds;  // only with --timing, so that default reports are byte-identical

  // residual <= tolerance
  void check(const std::string& name, const std::string& anchor, double residual, double tolerance);
  // Exact predicate; residual recorded as 0 or 1.
  void require(const std::string& name, const std::string& anchor, bool ok);
  bool all_pass() const;
  std::vector<std::string> failures() const;

  nlohmann::json to_json() const;
  std::string to_table() const;
};

// FNV-1a over the compact dump, as 16 hex digits.
std::string digest(const nlohmann::json& doc);

}  // namespace lwdhr::cli
