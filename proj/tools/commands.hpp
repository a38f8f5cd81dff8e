#pragma once

#include <cstdint>
#include <string>

#include "report.hpp"

namespace lwdhr::cli {

struct RunConfig {
  std::string verb;
  std::string catalog;  // shipped catalog name
  std::string input;    // category or symbol-table document path
  std::string target;   // equiv: second symbol table
  std::string iso;      // equiv: iso document; identity when empty
  std::string out;      // report path; stdout when empty
  std::string table;    // center: symbol table output path
  std::string format = "json";
  double tol = 0.0;     // 0 keeps the pinned per-check tolerances
  int depth = 0;        // 0: 6 for lw-verify, 8 for dhr-compare
  int jobs = 1;
  std::uint64_t seed = 0xC0FFEE;
  std::string flip_f;          // sign flip of one input F entry, catalog key syntax
  std::string corrupt_center;  // dhr-compare: sign flip of one center F entry ("auto" or key)
  bool timing = false;
};

// Throws ConfigError / TruncationError on invalid settings.
void validate(const RunConfig& cfg);

Report cmd_check(const RunConfig& cfg);
Report cmd_center(const RunConfig& cfg);
Report cmd_symbols(const RunConfig& cfg);
Report cmd_lw_verify(const RunConfig& cfg);
Report cmd_dhr_compare(const RunConfig& cfg);
Report cmd_equiv(const RunConfig& cfg);

Report run(const RunConfig& cfg);

// 0 pass, 2 data, 3 decomposition, 4 verification, 5 truncation.
int exit_code_for(const std::string& error_kind);

}  // namespace lwdhr::cli
