#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "lwdhr/errors.hpp"

using namespace lwdhr;

namespace {

std::uint64_t parse_seed(const std::string& s) {
  try {
    return std::stoull(s, nullptr, 16);
  } catch (const std::exception&) {
    throw ConfigError("--seed expects a hex number, got " + s);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levin-Wen sector analysis: fusion data, Drinfeld center, DHR comparison"};
  app.require_subcommand(1);
  cli::RunConfig cfg;
  std::string seed = "C0FFEE";

  auto common = [&](CLI::App* sub, bool category) {
    if (category) {
      sub->add_option("--catalog", cfg.catalog, "shipped catalog entry (vec-z2, vec-z3, fibonacci, ising)");
      sub->add_option("--input", cfg.input, "category document");
      sub->add_option("--flip-f", cfg.flip_f, "fault injection: negate one input F entry (catalog key)");
    }
    sub->add_option("--tol", cfg.tol, "override the pinned tolerances");
    sub->add_option("--depth", cfg.depth, "truncation depth (>= 5)");
    sub->add_option("--jobs", cfg.jobs, "worker threads");
    sub->add_option("--seed", seed, "hex seed");
    sub->add_option("--out", cfg.out, "report path (default stdout)");
    sub->add_option("--format", cfg.format, "json or table");
    sub->add_flag("--timing", cfg.timing, "add wall time to the report");
  };

  auto* check = app.add_subcommand("check", "pentagon, unitarity and dimensions of a category");
  common(check, true);
  auto* center = app.add_subcommand("center", "tube decomposition, half-braidings, center symbol table");
  common(center, true);
  center->add_option("--table", cfg.table, "write the center symbol table here");
  auto* symbols = app.add_subcommand("symbols", "center symbol table with S matrix and twists");
  common(symbols, true);
  auto* lw = app.add_subcommand("lw-verify", "lemma suite of the lattice sector mechanics");
  common(lw, true);
  auto* dhr = app.add_subcommand("dhr-compare", "DHR F and R symbols against the center, equivalence verdict");
  common(dhr, true);
  dhr->add_option("--corrupt-center", cfg.corrupt_center, "fault injection: negate a center F entry (key or auto)");
  auto* equiv = app.add_subcommand("equiv", "equivalence check between two symbol tables");
  common(equiv, false);
  equiv->add_option("--input", cfg.input, "source symbol table")->required();
  equiv->add_option("--target", cfg.target, "target symbol table")->required();
  equiv->add_option("--iso", cfg.iso, "iso document (identity when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.verb = app.get_subcommands().front()->get_name();

  try {
    cfg.seed = parse_seed(seed);
    cli::Report rep = cli::run(cfg);
    const std::string text = cfg.format == "table" ? rep.to_table() : rep.to_json().dump(1) + "\n";
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out);
      if (!out) throw ConfigError("cannot write " + cfg.out);
      out << text;
    }
    return rep.all_pass() ? 0 : 4;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return cli::exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "SchemaError: " << e.what() << "\n";
    return 2;
  }
}
