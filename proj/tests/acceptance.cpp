// Acceptance run: one PASS/FAIL line per criterion; exit status 0 iff all pass.
#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "lwdhr/dhr_analysis.hpp"
#include "lwdhr/equivalence_kit.hpp"
#include "lwdhr/micro_lattice.hpp"

using namespace lwdhr;

namespace {

// Pinned tolerances.
constexpr double kPentagon = 1e-10;
constexpr double kTube = 1e-9;
constexpr double kDimension = 1e-8;
constexpr double kCenter = 1e-9;
constexpr double kPhi = 1e-11;
constexpr double kSymbols = 1e-9;
constexpr double kTau = 1e-10;
constexpr double kMonodromy = 1e-12;
constexpr double kProjector = 1e-12;

const std::vector<std::string> kCatalog = {"vec-z2", "vec-z3", "fibonacci", "ising"};
const std::vector<std::string> kDhr = {"vec-z2", "vec-z3", "fibonacci"};
constexpr int kLemmaDepth = 6;
constexpr int kDhrDepth = 8;

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Line {
  bool pass = true;
  std::vector<std::string> notes;
  void fail(const std::string& why) {
    pass = false;
    notes.push_back("FAIL " + why);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

void print(int n, const std::string& title, const Line& l) {
  fmt::print("criterion {:>2}: {}  {}\n", n, l.pass ? "PASS" : "FAIL", title);
  for (const auto& s : l.notes) fmt::print("               {}\n", s);
  std::fflush(stdout);
}

struct Census {
  int dim = 0;
  std::vector<int> blocks;
  double residual = 0.0;
};

Census tube_census(HomCalculus& H) {
  TubeAlgebraTable T = build_tube(H, ObjectWord{{{0, 1}}});
  MatrixUnitSystem U = decompose(T);
  Census c{T.dim, {}, std::max(U.residual, U.star_residual)};
  for (const auto& b : U.blocks) c.blocks.push_back(b.n);
  std::sort(c.blocks.begin(), c.blocks.end());
  return c;
}

struct DhrRun {
  DhrComparison cmp;
  SymbolTable center;
  EquivalenceReport eq;
  int window = 0;
  double seconds = 0.0;
};

DhrRun run_dhr(const CategoryData& cat, int jobs) {
  auto t0 = Clock::now();
  HomCalculus H(cat);
  CenterCategory Z(H);
  DhrRun r;
  r.center = center_symbols(Z);
  FiducialGeometry G(kDhrDepth);
  SectorModel M(Z, G);
  DhrAnalysis A(M, local_states(M, 0xC0FFEE));
  r.cmp = compare_with_center(A, r.center, jobs);
  r.window = A.window();
  r.eq = check_equivalence(r.center, r.cmp.table, identity_iso(r.center, r.cmp.table), kSymbols, kTau);
  r.seconds = since(t0);
  return r;
}

bool dhr_agrees(const DhrRun& r) {
  return r.cmp.fusion_rules_match && r.cmp.f_deviation <= kSymbols && r.cmp.r_deviation <= kSymbols &&
         r.eq.verdict == "EQUIVALENT (unitary braided)";
}

std::string fmt_blocks(const std::vector<int>& b) {
  std::string s;
  for (size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
  return s;
}

nlohmann::json catalog_doc(const std::string& name) {
  std::ifstream in(catalog_path(name));
  return nlohmann::json::parse(in);
}

}  // namespace

int main() {
  const int jobs = std::max(1u, std::thread::hardware_concurrency());
  bool all = true;
  std::map<std::string, Census> reference_census;

  {  // 1
    Line l;
    for (const auto& name : kCatalog) {
      auto t0 = Clock::now();
      CategoryData c = load_catalog(name);
      const double p = verify_pentagon(c);
      const double s = since(t0);
      l.note(fmt::format("{}: pentagon {:.2e}, {:.3f} s", name, p, s));
      if (p > kPentagon) l.fail(name + " pentagon");
      if (s >= 1.0) l.fail(name + " slower than 1 s");
    }
    print(1, fmt::format("pentagon <= {:.0e} on the catalog", kPentagon), l);
    all &= l.pass;
  }

  {  // 2
    Line l;
    const std::map<std::string, std::pair<int, std::vector<int>>> expected = {
        {"vec-z2", {4, {1, 1, 1, 1}}}, {"fibonacci", {7, {1, 1, 1, 2}}}, {"ising", {-1, {}}}};
    for (const auto& name : kCatalog) {
      auto t0 = Clock::now();
      CategoryData c = load_catalog(name);
      HomCalculus H(c);
      Census cs = tube_census(H);
      reference_census[name] = cs;
      const double s = since(t0);
      long sq = 0;
      for (int b : cs.blocks) sq += static_cast<long>(b) * b;
      l.note(fmt::format("{}: dim {}, blocks {}, matrix units {:.2e}, {:.2f} s", name, cs.dim, fmt_blocks(cs.blocks),
                         cs.residual, s));
      if (cs.residual > kTube) l.fail(name + " matrix units");
      if (sq != cs.dim) l.fail(name + " sum of squares differs from dim");
      if (s >= 10.0) l.fail(name + " slower than 10 s");
      auto it = expected.find(name);
      if (it == expected.end()) continue;
      if (it->second.first >= 0 && (cs.dim != it->second.first || cs.blocks != it->second.second))
        l.fail(name + " census");
      if (name == "ising" && cs.blocks.size() != 9) l.fail("ising block count");
    }
    print(2, fmt::format("tube matrix units <= {:.0e}, block census", kTube), l);
    all &= l.pass;
  }

  {  // 3, 4
    Line l3, l4;
    for (const auto& name : kCatalog) {
      CategoryData c = load_catalog(name);
      HomCalculus H(c);
      CenterCategory Z(H);
      const double D4 = c.D2() * c.D2();
      const double gap = std::abs(Z.total_dim_sq() - D4);
      l3.note(fmt::format("{}: sum d_X^2 = {:.12f}, D^4 = {:.12f}", name, Z.total_dim_sq(), D4));
      if (gap > kDimension) l3.fail(name);

      double unit = 0.0, nat = 0.0;
      for (const auto& o : Z.simples()) {
        HalfBraidingReport hb = check_half_braiding(H, o.hb);
        unit = std::max(unit, hb.unit_defect);
        nat = std::max(nat, hb.naturality);
      }
      SymbolTable t = center_symbols(Z);
      const double pent = verify_pentagon(t);
      const HexagonReport hex = verify_hexagons(t);
      l4.note(fmt::format("{}: sigma_1 defect {:.1e}, naturality {:.2e}, pentagon {:.2e}, hexagons {:.2e} / {:.2e}",
                          name, unit, nat, pent, hex.first, hex.second));
      if (unit != 0.0) l4.fail(name + " sigma_1 != id");
      if (nat > kCenter) l4.fail(name + " naturality");
      if (pent > kCenter || hex.worst() > kCenter) l4.fail(name + " center coherence");
    }
    print(3, fmt::format("sum d_X^2 = D^4 within {:.0e}", kDimension), l3);
    print(4, fmt::format("half-braidings and center pentagon/hexagons <= {:.0e}", kCenter), l4);
    all &= l3.pass && l4.pass;
  }

  {  // 5
    Line l;
    const std::vector<std::string> families = {"dr-multiplicative", "inclusion",  "concatenation",
                                               "concatenation-reversed", "isotopy", "excitation"};
    for (const auto& name : kCatalog) {
      auto t0 = Clock::now();
      CategoryData c = load_catalog(name);
      HomCalculus H(c);
      CenterCategory Z(H);
      FiducialGeometry G(kLemmaDepth);
      SectorModel M(Z, G);
      const double tol = default_tolerance(c);
      LemmaReport r = run_lemma_suite(M, 0xC0FFEE, tol);
      const double s = since(t0);
      l.note(fmt::format("{}: {} instances, worst {:.2e} (tol {:.0e}), {:.1f} s", name, r.items.size(), r.worst(), tol, s));
      if (!r.all_pass()) l.fail(name + " residual above tolerance");
      for (const auto& f : families) {
        bool present = std::any_of(r.items.begin(), r.items.end(), [&](const auto& i) { return i.lemma == f; });
        if (!present) l.fail(name + " has no " + f + " instance");
      }
      if (s >= 120.0) l.fail(name + " slower than 2 min");
    }
    print(5, fmt::format("lemma suite at depth {}", kLemmaDepth), l);
    all &= l.pass;
  }

  std::map<std::string, DhrRun> dhr;
  for (const auto& name : kDhr) dhr.emplace(name, run_dhr(load_catalog(name), jobs));

  {  // 6
    Line l;
    for (const auto& [name, r] : dhr) {
      int worst = 0;
      for (const auto& [fam, N] : r.cmp.stabilization) worst = std::max(worst, N);
      l.note(fmt::format("{}: {} families stabilize by n = {} (window {}), dagger {:.2e}, decomposition {:.2e}", name,
                         r.cmp.stabilization.size(), worst, r.window, r.cmp.dagger, r.cmp.fusion));
      if (worst > r.window - 1) l.fail(name + " stabilization");
      if (r.cmp.dagger > kPhi) l.fail(name + " dagger identity");
      if (r.cmp.fusion > kPhi) l.fail(name + " isometry decomposition");
    }
    print(6, fmt::format("Phi stabilization and dagger/decomposition identities <= {:.0e}", kPhi), l);
    all &= l.pass;
  }

  {  // 7
    Line l;
    for (const auto& [name, r] : dhr) {
      const auto& e = r.eq;
      l.note(fmt::format("{}: F {:.2e}, R {:.2e}, diagrams {:.2e}/{:.2e}/{:.2e}/{:.2e}, tau {:.2e}, {:.1f} s: {}", name,
                         r.cmp.f_deviation, r.cmp.r_deviation, e.f_intertwiner, e.r_intertwiner, e.coherence.monoidal,
                         e.coherence.braided, std::max(e.unitarity, e.orthogonal), r.seconds, e.verdict));
      if (!dhr_agrees(r)) l.fail(name + " symbols or verdict");
      if (name == "fibonacci" && r.seconds >= 600.0) l.fail("fibonacci slower than 10 min");
    }
    print(7, fmt::format("DHR F/R against the center <= {:.0e}, unitary braided equivalence", kSymbols), l);
    all &= l.pass;
  }

  {  // 8
    Line l;
    const DhrRun& r = dhr.at("vec-z2");
    std::vector<int> bosons;
    int eps = -1;
    for (int a = 1; a < r.center.rank(); ++a) {
      cplx self = r.center.r_entry(a, a, 0);
      if (std::abs(self - 1.0) < 1e-9) bosons.push_back(a);
      else eps = a;
    }
    if (bosons.size() != 2 || eps < 0) {
      l.fail("could not identify e, m, epsilon");
    } else {
      const int e = bosons[0], m = bosons[1];
      cplx ctr = r.center.r_entry(e, m, eps) * r.center.r_entry(m, e, eps);
      cplx sec = r.cmp.table.r_entry(e, m, eps) * r.cmp.table.r_entry(m, e, eps);
      l.note(fmt::format("center {:.15f}{:+.1e}i, sectors {:.15f}{:+.1e}i", ctr.real(), ctr.imag(), sec.real(), sec.imag()));
      if (std::abs(ctr + 1.0) > kMonodromy) l.fail("center side");
      if (std::abs(sec + 1.0) > kMonodromy) l.fail("sector side");
    }
    print(8, fmt::format("toric e-m monodromy = -1 within {:.0e} on both sides", kMonodromy), l);
    all &= l.pass;
  }

  {  // 9
    Line l;
    for (const std::string name : {"vec-z2", "vec-z3"}) {
      CategoryData c = load_catalog(name);
      HomCalculus H(c);
      CenterCategory Z(H);
      MicroLattice L(Z);
      int regions = 0, sectors = 0;
      double comm = 0.0, proj = 0.0;
      for (const auto& R : MicroLattice::standard_regions()) {
        MicroReport m = L.analyze(R);
        ++regions;
        for (const auto& cc : m.commutators) comm = std::max(comm, cc.residual);
        proj = std::max(proj, m.projector);
        for (const auto& d : m.dimensions) {
          ++sectors;
          if (d.lattice != d.predicted)
            l.fail(fmt::format("{} {} {}: {} vs {}", name, R.name, d.sector, d.lattice, d.predicted));
        }
      }
      l.note(fmt::format("{}: {} regions, {} sector dimensions, max commutator {:.1e}, max |B^2 - B| {:.1e}", name,
                         regions, sectors, comm, proj));
      if (comm != 0.0) l.fail(name + " commutator not exactly zero");
      if (proj > kProjector) l.fail(name + " projector");
    }
    print(9, "micro-lattice: exact commutation, projectors, sector dimensions", l);
    all &= l.pass;
  }

  {  // 10
    Line l;
    int flips = 0, rejected = 0, by1 = 0, by2 = 0, by7 = 0;
    for (const auto& name : kCatalog) {
      nlohmann::json doc = catalog_doc(name);
      for (const auto& [key, value] : doc["F"].items()) {
        nlohmann::json d = doc;
        for (auto& x : d["F"][key]) x = -x.get<double>();
        ++flips;
        CategoryData c;
        try {
          c = load_category(d);
        } catch (const Error&) {
          ++rejected;
          continue;
        }
        if (verify_pentagon(c) > kPentagon) {
          ++by1;
          continue;
        }
        HomCalculus H(c);
        Census cs;
        try {
          cs = tube_census(H);
        } catch (const Error&) {
          ++by2;
          continue;
        }
        const Census& ref = reference_census.at(name);
        if (cs.residual > kTube || cs.dim != ref.dim || cs.blocks != ref.blocks) {
          ++by2;
          continue;
        }
        bool detected = false;
        if (std::find(kDhr.begin(), kDhr.end(), name) != kDhr.end()) {
          try {
            detected = !dhr_agrees(run_dhr(c, jobs));
          } catch (const Error&) {
            detected = true;
          }
        }
        if (detected) ++by7;
        else l.fail(fmt::format("{} F[{}] sign flip passes criteria 1, 2 and 7", name, key));
      }
    }
    l.note(fmt::format("input F flips: {} total; rejected at load {}, caught by pentagon {}, tube {}, DHR comparison {}", flips,
                       rejected, by1, by2, by7));
    int center_flips = 0, center_caught = 0;
    for (const auto& [name, r] : dhr) {
      for (const auto& [k, v] : r.center.F) {
        if (std::abs(v) < 1e-9) continue;
        SymbolTable bad = r.center;
        bad.F[k] = -v;
        bad.finalize();
        ++center_flips;
        if (check_F_intertwiner(bad, r.cmp.table, identity_iso(bad, r.cmp.table)) > kSymbols) ++center_caught;
        else l.fail(name + " center F flip " + fkey_string(bad, k));
      }
    }
    l.note(fmt::format("center table F flips: {} total; caught by the F-intertwiner {}", center_flips, center_caught));
    print(10, "single F sign flips detected by criteria 1, 2 or 7", l);
    all &= l.pass;
  }

  fmt::print("acceptance: {}\n", all ? "ALL PASS" : "FAILURES PRESENT");
  return all ? 0 : 1;
}
