#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "lwdhr/center.hpp"
#include "lwdhr/dhr_analysis.hpp"
#include "lwdhr/equivalence_kit.hpp"

namespace lwdhr::cli {

using nlohmann::json;

namespace {

double pick(const RunConfig& cfg, double pinned) { return cfg.tol > 0.0 ? cfg.tol : pinned; }

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

struct Loaded {
  json doc;
  CategoryData cat;
};

Loaded load_input(const RunConfig& cfg, Report& rep) {
  if (cfg.catalog.empty() == cfg.input.empty()) throw ConfigError("give exactly one of --catalog and --input");
  json doc = read_json(cfg.catalog.empty() ? cfg.input : catalog_path(cfg.catalog));
  if (!cfg.flip_f.empty()) {
    if (!doc.contains("F") || !doc["F"].contains(cfg.flip_f)) throw SchemaError("no F entry " + cfg.flip_f);
    auto& v = doc["F"][cfg.flip_f];
    if (v.is_array())
      for (auto& x : v) x = -x.get<double>();
    else
      v = -v.get<double>();
  }
  rep.inputs["category"] = cfg.catalog.empty() ? cfg.input : cfg.catalog;
  rep.inputs["digest"] = digest(doc);
  if (!cfg.flip_f.empty()) rep.inputs["flipped_F"] = cfg.flip_f;
  return {doc, load_category(doc)};
}

void stamp(const RunConfig& cfg, Report& rep, int depth) {
  rep.command = cfg.verb;
  rep.config["seed"] = cfg.seed;
  rep.config["jobs"] = cfg.jobs;
  if (cfg.tol > 0.0) rep.config["tol"] = cfg.tol;
  if (depth > 0) rep.config["depth"] = depth;
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json census(CenterCategory& Z) {
  json arr = json::array();
  for (int X = 0; X < Z.size(); ++X) {
    const auto& o = Z.object(X);
    json mult = json::object();
    for (int a = 0; a < Z.base().rank(); ++a)
      if (o.n[a]) mult[Z.base().labels[a]] = o.n[a];
    arr.push_back({{"label", o.label}, {"d", o.d}, {"twist", cplx_json(o.twist)}, {"underlying", mult}});
  }
  return arr;
}

// Tube census, half-braidings and the center table; shared by center, symbols, lw-verify, dhr-compare.
void center_checks(const RunConfig& cfg, HomCalculus& H, CenterCategory& Z, SymbolTable& table, Report& rep) {
  const CategoryData& cat = H.cat();
  TubeAlgebraTable tube = build_tube(H, ObjectWord{{{0, 1}}});
  MatrixUnitSystem units = decompose(tube, cfg.seed);
  std::vector<int> blocks;
  long sum = 0;
  for (const auto& b : units.blocks) blocks.push_back(b.n), sum += static_cast<long>(b.n) * b.n;
  std::sort(blocks.begin(), blocks.end());
  rep.check("tube matrix units", "tube.matrix-units", units.residual, pick(cfg, 1e-9));
  rep.check("tube star compatibility", "tube.matrix-units", units.star_residual, pick(cfg, 1e-9));
  rep.require("tube dimension = sum of squared block sizes", "tube.census", sum == tube.dim);
  rep.details["tube"] = {{"dim", tube.dim}, {"blocks", blocks}};

  double unit_defect = 0.0, naturality = 0.0, unitarity = 0.0;
  for (const auto& o : Z.simples()) {
    HalfBraidingReport hb = check_half_braiding(H, o.hb);
    unit_defect = std::max(unit_defect, hb.unit_defect);
    naturality = std::max(naturality, hb.naturality);
    unitarity = std::max(unitarity, hb.unitarity);
  }
  rep.require("half-braiding on the unit is the identity", "center.half-braiding", unit_defect == 0.0);
  rep.check("half-braiding naturality", "center.half-braiding", naturality, pick(cfg, 1e-9));
  rep.check("half-braiding unitarity", "center.half-braiding", unitarity, pick(cfg, 1e-9));

  CenterReport cr;
  table = center_symbols(Z, &cr);
  rep.check("center pentagon", "center.pentagon", cr.pentagon, pick(cfg, 1e-9));
  rep.check("center hexagon", "center.hexagon", cr.hexagon.first, pick(cfg, 1e-9));
  rep.check("center reverse hexagon", "center.hexagon", cr.hexagon.second, pick(cfg, 1e-9));
  rep.check("center F unitarity", "center.unitarity", cr.f_unitarity, pick(cfg, 1e-9));
  rep.check("center R unitarity", "center.unitarity", cr.r_unitarity, pick(cfg, 1e-9));
  rep.check("S unitarity", "center.modularity", cr.s_unitarity, pick(cfg, 1e-9));
  rep.check("sum of d_X^2 = D^4", "center.dimension", cr.dim_identity, pick(cfg, 1e-8));
  rep.details["center"] = census(Z);
  rep.details["D"] = cat.D;
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.tol < 0.0) throw ConfigError("--tol must be positive");
  if (cfg.jobs < 1) throw ConfigError("--jobs must be at least 1");
  if (cfg.format != "json" && cfg.format != "table") throw ConfigError("--format must be json or table");
  if (cfg.depth != 0 && cfg.depth < 5) throw TruncationError("truncation depth must be at least 5");
}

Report cmd_check(const RunConfig& cfg) {
  Report rep;
  stamp(cfg, rep, 0);
  Loaded in = load_input(cfg, rep);
  const CategoryData& cat = in.cat;
  rep.check("pentagon", "fusion.pentagon", verify_pentagon(cat), pick(cfg, 1e-10));
  rep.check("F unitarity", "fusion.unitarity", f_unitarity_defect(cat), pick(cfg, 1e-10));
  rep.check("dimensions fuse", "fusion.dimensions", dimension_defect(cat, cat.d), pick(cfg, 1e-9));
  json dims = json::object();
  for (int a = 0; a < cat.rank(); ++a) dims[cat.labels[a]] = cat.d[a];
  rep.details = {{"rank", cat.rank()}, {"dimensions", dims}, {"D", cat.D}};
  return rep;
}

Report cmd_center(const RunConfig& cfg) {
  Report rep;
  stamp(cfg, rep, 0);
  Loaded in = load_input(cfg, rep);
  HomCalculus H(in.cat);
  CenterCategory Z(H, cfg.seed);
  SymbolTable table;
  center_checks(cfg, H, Z, table, rep);
  if (!cfg.table.empty()) {
    std::ofstream out(cfg.table);
    if (!out) throw ConfigError("cannot write " + cfg.table);
    out << symbol_table_to_json(table).dump(1) << "\n";
    rep.details["table_path"] = cfg.table;
  }
  return rep;
}

Report cmd_symbols(const RunConfig& cfg) {
  Report rep;
  stamp(cfg, rep, 0);
  Loaded in = load_input(cfg, rep);
  HomCalculus H(in.cat);
  CenterCategory Z(H, cfg.seed);
  CenterReport cr;
  SymbolTable table = center_symbols(Z, &cr);
  rep.check("center pentagon", "center.pentagon", cr.pentagon, pick(cfg, 1e-9));
  rep.check("center hexagon", "center.hexagon", cr.hexagon.worst(), pick(cfg, 1e-9));
  json doc = symbol_table_to_json(table);
  Mat S = s_matrix(Z);
  json s = json::array();
  for (int i = 0; i < S.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < S.cols(); ++j) row.push_back(cplx_json(S(i, j)));
    s.push_back(row);
  }
  json twists = json::object();
  for (int X = 0; X < Z.size(); ++X) twists[Z.object(X).label] = cplx_json(Z.object(X).twist);
  doc["S"] = s;
  doc["twists"] = twists;
  rep.details["table"] = doc;
  return rep;
}

Report cmd_lw_verify(const RunConfig& cfg) {
  const int depth = cfg.depth ? cfg.depth : 6;
  Report rep;
  stamp(cfg, rep, depth);
  Loaded in = load_input(cfg, rep);
  HomCalculus H(in.cat);
  CenterCategory Z(H, cfg.seed);
  FiducialGeometry G(depth);
  validate_bridge(G);
  SectorModel M(Z, G);
  LemmaReport lr = run_lemma_suite(M, cfg.seed, pick(cfg, default_tolerance(in.cat)));
  for (const auto& it : lr.items) rep.check(it.lemma + " [" + it.instance + "]", "sectors." + it.lemma, it.residual, it.tolerance);
  rep.details["instances"] = lr.items.size();
  return rep;
}

Report cmd_dhr_compare(const RunConfig& cfg) {
  const int depth = cfg.depth ? cfg.depth : 8;
  Report rep;
  stamp(cfg, rep, depth);
  Loaded in = load_input(cfg, rep);
  HomCalculus H(in.cat);
  CenterCategory Z(H, cfg.seed);
  SymbolTable center;
  center_checks(cfg, H, Z, center, rep);

  if (!cfg.corrupt_center.empty()) {
    auto target = center.F.end();
    for (auto it = center.F.begin(); it != center.F.end(); ++it) {
      if (cfg.corrupt_center == "auto" ? std::abs(it->second) > 1e-9 : fkey_string(center, it->first) == cfg.corrupt_center)
        target = it;
    }
    if (target == center.F.end()) throw SchemaError("no center F entry " + cfg.corrupt_center);
    rep.inputs["corrupted_center_F"] = fkey_string(center, target->first);
    target->second = -target->second;
    center.finalize();
  }

  FiducialGeometry G(depth);
  SectorModel M(Z, G);
  DhrAnalysis A(M, local_states(M, cfg.seed));
  DhrComparison c = compare_with_center(A, center, cfg.jobs);
  const double t9 = pick(cfg, 1e-9), t11 = pick(cfg, 1e-11);
  int worst_stab = 0;
  for (const auto& [name, N] : c.stabilization) worst_stab = std::max(worst_stab, N);
  rep.require("fusion rules of sectors match the center", "dhr.fusion", c.fusion_rules_match);
  rep.require("stabilization inside the window", "dhr.stabilization", worst_stab <= A.window() - 1);
  rep.check("Phi dagger identity", "dhr.phi", c.dagger, t11);
  rep.check("Phi isometry decomposition", "dhr.phi", c.fusion, t11);
  rep.check("Phi intertwines", "dhr.phi", c.intertwining, t11);
  rep.check("transporter unitarity", "dhr.transporter", c.transporter_unitarity, t11);
  rep.check("braiding identity on bridge", "dhr.braiding", c.crucial, t9);
  rep.check("F trees", "dhr.F", std::max(c.f_tree, c.f_fit), t9);
  rep.check("R identity", "dhr.R", std::max(c.r_identity, c.r_fit), t9);
  rep.check("F against center", "dhr.F", c.f_deviation, t9);
  rep.check("R against center", "dhr.R", c.r_deviation, t9);
  rep.check("DHR pentagon", "dhr.pentagon", c.pentagon, t9);
  rep.check("DHR hexagons", "dhr.hexagon", c.hexagon.worst(), t9);

  EquivalenceReport eq = check_equivalence(center, c.table, identity_iso(center, c.table), t9, pick(cfg, 1e-10));
  rep.check("F-intertwiner diagram", "equivalence.F-diagram", eq.f_intertwiner, t9);
  rep.check("R-intertwiner diagram", "equivalence.R-diagram", eq.r_intertwiner, t9);
  if (eq.built) {
    rep.check("monoidal coherence", "equivalence.monoidal", eq.coherence.monoidal, t9);
    rep.check("braided coherence", "equivalence.braided", eq.coherence.braided, t9);
    rep.check("unitor triangles", "equivalence.unitor", eq.coherence.unitor, t9);
    rep.check("tensorator unitarity", "equivalence.unitarity", std::max(eq.unitarity, eq.orthogonal), pick(cfg, 1e-10));
  } else {
    rep.require("tensorator built", "equivalence.tensorator", false);
  }

  // Full monodromy on pairs with a single fusion channel, both sides.
  json mono = json::array();
  for (int X = 1; X < Z.size(); ++X)
    for (int Y = X + 1; Y < Z.size(); ++Y) {
      int W = -1, channels = 0;
      for (int w = 0; w < Z.size(); ++w)
        if (center.N(X, Y, w)) W = w, channels += center.N(X, Y, w);
      if (channels != 1) continue;
      mono.push_back({{"pair", {Z.object(X).label, Z.object(Y).label}},
                      {"center", cplx_json(center.r_entry(X, Y, W) * center.r_entry(Y, X, W))},
                      {"dhr", cplx_json(c.table.r_entry(X, Y, W) * c.table.r_entry(Y, X, W))}});
    }
  rep.details["monodromy"] = mono;
  json stab = json::object();
  for (const auto& [name, N] : c.stabilization) stab[name] = N;
  rep.details["stabilization"] = stab;
  rep.details["window"] = A.window();
  rep.verdict = rep.all_pass() ? eq.verdict : "FAIL";
  return rep;
}

Report cmd_equiv(const RunConfig& cfg) {
  Report rep;
  stamp(cfg, rep, 0);
  if (cfg.input.empty() || cfg.target.empty()) throw ConfigError("equiv needs --input and --target symbol tables");
  json a = read_json(cfg.input), b = read_json(cfg.target);
  SymbolTable C = symbol_table_from_json(a), D = symbol_table_from_json(b);
  CandidateIso iso = cfg.iso.empty() ? identity_iso(C, D) : iso_from_json(C, D, read_json(cfg.iso));
  rep.inputs = {{"category", cfg.input}, {"source", digest(a)}, {"target", digest(b)}};
  if (!cfg.iso.empty()) rep.inputs["iso"] = digest(read_json(cfg.iso));
  const double t9 = pick(cfg, 1e-9);
  EquivalenceReport eq = check_equivalence(C, D, iso, t9, pick(cfg, 1e-10));
  rep.check("F-intertwiner diagram", "equivalence.F-diagram", eq.f_intertwiner, t9);
  rep.check("R-intertwiner diagram", "equivalence.R-diagram", eq.r_intertwiner, t9);
  if (eq.built) {
    rep.check("tensorator defining equation", "equivalence.tensorator", eq.defining, t9);
    rep.check("monoidal coherence", "equivalence.monoidal", eq.coherence.monoidal, t9);
    rep.check("braided coherence", "equivalence.braided", eq.coherence.braided, t9);
    rep.check("unitor triangles", "equivalence.unitor", eq.coherence.unitor, t9);
    rep.check("tensorator unitarity", "equivalence.unitarity", std::max(eq.unitarity, eq.orthogonal), pick(cfg, 1e-10));
  } else {
    rep.require("tensorator built", "equivalence.tensorator", false);
  }
  rep.verdict = eq.verdict;
  return rep;
}

Report run(const RunConfig& cfg) {
  validate(cfg);
  auto start = std::chrono::steady_clock::now();
  Report rep;
  if (cfg.verb == "check") rep = cmd_check(cfg);
  else if (cfg.verb == "center") rep = cmd_center(cfg);
  else if (cfg.verb == "symbols") rep = cmd_symbols(cfg);
  else if (cfg.verb == "lw-verify") rep = cmd_lw_verify(cfg);
  else if (cfg.verb == "dhr-compare") rep = cmd_dhr_compare(cfg);
  else if (cfg.verb == "equiv") rep = cmd_equiv(cfg);
  else throw ConfigError("unknown command " + cfg.verb);
  if (cfg.timing)
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

int exit_code_for(const std::string& kind) {
  if (kind == "DecompositionError" || kind == "HexagonResidualError") return 3;
  if (kind == "TruncationError") return 5;
  if (kind == "CoherenceError" || kind == "NotIntertwiner" || kind == "NumericalError") return 4;
  return 2;
}

}  // namespace lwdhr::cli
