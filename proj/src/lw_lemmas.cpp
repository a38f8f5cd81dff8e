#include "lwdhr/lw_lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace lwdhr {

bool LemmaReport::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const LemmaInstance& i) { return i.pass(); });
}

double LemmaReport::worst() const {
  double w = 0.0;
  for (const auto& i : items) w = std::max(w, i.residual);
  return w;
}

double LemmaReport::worst(const std::string& lemma) const {
  double w = 0.0;
  for (const auto& i : items)
    if (i.lemma == lemma) w = std::max(w, i.residual);
  return w;
}

double default_tolerance(const CategoryData& cat) {
  for (double d : cat.d)
    if (std::abs(d - 1.0) > 1e-12) return 1e-10;
  return 1e-12;
}

std::vector<State> sector_states(SectorModel& M, const std::vector<int>& punctures,
                                 const std::vector<std::vector<int>>& labels, std::mt19937_64& rng) {
  std::vector<State> out;
  const int n = static_cast<int>(punctures.size());
  std::vector<size_t> idx(n, 0);
  const int o = M.geometry().origin();
  while (true) {
    std::map<int, int> cfg;
    for (int i = 0; i < n; ++i) cfg[punctures[i]] = labels[i][idx[i]];
    for (int c = 0; c < M.center().size(); ++c) {
      cfg[o] = c;
      State s = M.random_state(cfg, rng);
      if (!s.empty()) out.push_back(std::move(s));
    }
    int i = 0;
    while (i < n && ++idx[i] == labels[i].size()) idx[i++] = 0;
    if (i == n) break;
  }
  return out;
}

std::vector<State> local_states(SectorModel& M, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const FiducialGeometry& G = M.geometry();
  CenterCategory& Z = M.center();
  std::vector<State> out{M.vacuum()};
  for (int A = 1; A < Z.size(); ++A)
    for (int p : {G.e(0), G.ep(0)}) out.push_back(M.random_state({{p, A}, {G.origin(), Z.dual(A)}}, rng));
  const int A = Z.size() - 1;
  out.push_back(M.random_state({{G.e(1), A}, {G.origin(), Z.dual(A)}}, rng));
  return out;
}

double op_residual(SectorModel& M, const Op& A, const Op& B, const std::vector<State>& states) {
  double r = 0.0;
  for (const auto& s : states) r = std::max(r, M.distance(A(s), B(s)));
  return r;
}

namespace {

// Punctures strictly between the endpoints of a placement in anchor order that it does not own.
std::vector<int> in_between(const SectorModel& M, const Placement& P) {
  const FiducialGeometry& G = M.geometry();
  std::set<int> own(P.punctures.begin(), P.punctures.end());
  own.insert(P.filled.begin(), P.filled.end());
  std::vector<int> out;
  for (int i = G.position(P.punctures.front()) + 1; i < G.position(P.punctures.back()); ++i)
    if (!own.count(G.order()[i])) out.push_back(G.order()[i]);
  return out;
}

Morphism random_intertwiner(CenterCategory& Z, const std::vector<int>& in, const std::vector<int>& out,
                            std::mt19937_64& rng) {
  std::vector<int> a, b;
  for (int x : in)
    if (x) a.push_back(x);
  for (int x : out)
    if (x) b.push_back(x);
  const auto& basis = Z.hom_basis(a, b);
  Morphism m = Z.hom().zero(Z.word(a), Z.word(b));
  std::normal_distribution<double> g;
  for (const auto& e : basis) m += cplx(g(rng), g(rng)) * e;
  return m;
}

int hom_count(CenterCategory& Z, const std::vector<int>& in, const std::vector<int>& out) {
  std::vector<int> a, b;
  for (int x : in)
    if (x) a.push_back(x);
  for (int x : out)
    if (x) b.push_back(x);
  return static_cast<int>(Z.hom_basis(a, b).size());
}

struct Suite {
  SectorModel& M;
  std::mt19937_64 rng;
  double tol;
  LemmaReport report;

  void add(const std::string& lemma, const std::string& inst, double r) {
    report.items.push_back({lemma, inst, r, tol});
  }

  std::vector<State> link_states(const Placement& P, int X) {
    CenterCategory& Z = M.center();
    const int A = Z.size() - 1, Xb = Z.dual(X);
    std::vector<int> ps = P.punctures;
    std::vector<std::vector<int>> ls(ps.size(), std::vector<int>{0, X, Xb, A});
    for (auto& l : ls) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    for (int r : in_between(M, P)) {
      ps.push_back(r);
      ls.push_back({0, A});
    }
    return sector_states(M, ps, ls, rng);
  }
};

void gate_properties(Suite& S, const std::string& name, const Placement& P) {
  SectorModel& M = S.M;
  CenterCategory& Z = M.center();
  HomCalculus& H = Z.hom();
  for (int X = 1; X < Z.size(); ++X) {
    const std::string inst = name + " X=" + Z.object(X).label;
    auto states = S.link_states(P, X);
    Op u = [&](const State& s) { return M.gate(P, X, s); };
    S.add("gate-unitary", inst, op_residual(M, [&](const State& s) { return u(u(s)); }, [](const State& s) { return s; }, states));
    double sa = 0.0;
    std::vector<State> us;
    for (const auto& s : states) us.push_back(u(s));
    for (size_t i = 0; i < states.size(); ++i)
      for (size_t j = 0; j < states.size(); ++j)
        sa = std::max(sa, std::abs(M.inner(us[i], states[j]) - M.inner(states[i], us[j])));
    S.add("gate-self-adjoint", inst, sa);
    S.add("gate-intertwining", inst + " 11->XX",
          op_residual(M, [&](const State& s) { return u(M.link_projector(P, X, "11", s)); },
                      [&](const State& s) { return M.link_projector(P, X, "XX", u(s)); }, states));
    S.add("gate-intertwining", inst + " 1X->X1",
          op_residual(M, [&](const State& s) { return u(M.link_projector(P, X, "1X", s)); },
                      [&](const State& s) { return M.link_projector(P, X, "X1", u(s)); }, states));
    const int Xb = Z.dual(X);
    Morphism v = Z.pair_creation(X), id = H.identity(Z.word({X}));
    S.add("dr-partial-isometry", inst + " create",
          op_residual(M, [&](const State& s) { return M.dr(P, {X, Xb}, {0, 0}, HomCalculus::dagger(v), M.dr(P, {0, 0}, {X, Xb}, v, s)); },
                      [&](const State& s) { return M.link_projector(P, X, "11", s); }, states));
    S.add("dr-partial-isometry", inst + " annihilate",
          op_residual(M, [&](const State& s) { return M.dr(P, {0, 0}, {X, Xb}, v, M.dr(P, {X, Xb}, {0, 0}, HomCalculus::dagger(v), s)); },
                      [&](const State& s) { return M.link_projector(P, X, "XX", s); }, states));
    S.add("dr-partial-isometry", inst + " hop",
          op_residual(M, [&](const State& s) { return M.dr(P, {0, X}, {X, 0}, id, M.dr(P, {X, 0}, {0, X}, id, s)); },
                      [&](const State& s) { return M.link_projector(P, X, "X1", s); }, states));
    auto outside = [&](const State& s) {
      State t = s;
      for (const char* k : {"11", "XX", "X1", "1X"}) t = SectorModel::axpy(-1.0, M.link_projector(P, X, k, s), t);
      return t;
    };
    S.add("gate-vacuum-component", inst,
          op_residual(M, [&](const State& s) { return u(outside(s)); }, outside, states));
  }
}

void multiplicativity(Suite& S, const std::string& name, const Placement& P) {
  SectorModel& M = S.M;
  CenterCategory& Z = M.center();
  HomCalculus& H = Z.hom();
  const int n = Z.size();
  int made = 0;
  for (int X = 1; X < n && made < 6; ++X)
    for (int Y = 0; Y < n && made < 6; ++Y) {
      std::vector<int> in{X, Y};
      // a middle and an output sector reachable by intertwiners
      for (int A = 0; A < n && made < 6; ++A)
        for (int B = 0; B < n && made < 6; ++B) {
          std::vector<int> mid{A, B}, out{Y, X};
          if (!hom_count(Z, in, mid) || !hom_count(Z, mid, out)) continue;
          Morphism b1 = random_intertwiner(Z, in, mid, S.rng), b2 = random_intertwiner(Z, mid, out, S.rng);
          Morphism b21 = H.compose(b2, b1);
          std::vector<int> ps = P.punctures;
          std::vector<std::vector<int>> ls{{X, A}, {Y, B}};
          for (int r : in_between(M, P)) {
            ps.push_back(r);
            ls.push_back({0, n - 1});
          }
          auto states = sector_states(M, ps, ls, S.rng);
          const std::string inst = name + " (" + std::to_string(X) + "," + std::to_string(Y) + ")->(" +
                                   std::to_string(A) + "," + std::to_string(B) + ")";
          S.add("dr-multiplicative", inst,
                op_residual(M, [&](const State& s) { return M.dr(P, mid, out, b2, M.dr(P, in, mid, b1, s)); },
                            [&](const State& s) { return M.dr(P, in, out, b21, s); }, states));
          double star = 0.0;
          Morphism b1d = HomCalculus::dagger(b1);
          for (const auto& s : states)
            for (const auto& t : states)
              star = std::max(star, std::abs(M.inner(M.dr(P, in, mid, b1, s), t) - M.inner(s, M.dr(P, mid, in, b1d, t))));
          S.add("dr-star", inst, star);
          ++made;
        }
    }
}

Region fill(Region R, const FiducialGeometry& G, const std::vector<int>& punctures) {
  for (int p : punctures) R.edges.insert(G.punctures()[p].edge);
  return R;
}

void inclusion(Suite& S) {
  SectorModel& M = S.M;
  const FiducialGeometry& G = M.geometry();
  CenterCategory& Z = M.center();
  HomCalculus& H = Z.hom();
  const int n = Z.size();
  // D spanning L_3..L_6 with e_4 filled: punctures (e6, e5, e3, e2).
  Region RD = fill(G.link_union({G.L(3), G.L(4), G.L(5), G.L(6)}), G, {G.e(4)});
  Placement D = G.region_placement(RD, {G.e(6), G.e(5), G.e(3), G.e(2)});
  Placement C0 = M.link(G.L(6)), C2 = M.link(G.L(3));
  // D_n = L_n ∪ L_{n+1} with three punctures, on both chains.
  Placement Dn = G.region_placement(G.link_union({G.L(2), G.L(3)}), {G.e(3), G.e(2), G.e(1)});
  Placement Dp = G.region_placement(G.link_union({G.Lp(2), G.Lp(3)}), {G.ep(3), G.ep(2), G.ep(1)});
  const int A = n - 1;
  int count = 0;
  for (int X = 1; X < n && count < 4; ++X)
    for (int Y = 1; Y < n && count < 4; ++Y)
      for (int W = 0; W < n && count < 4; ++W) {
        if (!Z.N(X, Y, W)) continue;
        ++count;
        Morphism beta = random_intertwiner(Z, {X, Y}, {0, W}, S.rng);
        const std::string inst = "(" + std::to_string(X) + "," + std::to_string(Y) + ")->" + std::to_string(W);
        for (int B : {0, A}) {
          int Bb = Z.dual(B);
          // offset 0: acts on (e6, e5); offset 2: acts on (e3, e2)
          std::vector<int> outer{B, Bb};
          Morphism pad_outer = H.tensor(beta, H.identity(Z.word(B ? outer : std::vector<int>{})));
          Morphism pad_inner = H.tensor(H.identity(Z.word(B ? outer : std::vector<int>{})), beta);
          auto st = sector_states(M, {G.e(6), G.e(5), G.e(3), G.e(2)}, {{X}, {Y}, {B}, {Bb}}, S.rng);
          S.add("inclusion", "offset0 " + inst,
                op_residual(M, [&](const State& s) { return M.dr(C0, {X, Y}, {0, W}, beta, M.project(D, {X, Y, B, Bb}, s)); },
                            [&](const State& s) { return M.dr(D, {X, Y, B, Bb}, {0, W, B, Bb}, pad_outer, s); }, st));
          auto st2 = sector_states(M, {G.e(6), G.e(5), G.e(3), G.e(2)}, {{B}, {Bb}, {X}, {Y}}, S.rng);
          S.add("inclusion", "offset2 " + inst,
                op_residual(M, [&](const State& s) { return M.dr(C2, {X, Y}, {0, W}, beta, M.project(D, {B, Bb, X, Y}, s)); },
                            [&](const State& s) { return M.dr(D, {B, Bb, X, Y}, {B, Bb, 0, W}, pad_inner, s); }, st2));
        }
        for (const Placement* DD : {&Dn, &Dp}) {
          const auto& q = DD->punctures;
          Placement first = M.link(DD == &Dn ? G.L(3) : G.Lp(3)), second = M.link(DD == &Dn ? G.L(2) : G.Lp(2));
          std::vector<int> extra{q[0]};
          for (int r : in_between(M, *DD)) extra.push_back(r);
          std::vector<std::vector<int>> ls{{X}, {Y}, {0, A}};
          for (size_t i = 1; i < extra.size(); ++i) ls.push_back({0, A});
          std::vector<int> ps{q[0], q[1], q[2]};
          ps.insert(ps.end(), extra.begin() + 1, extra.end());
          auto st = sector_states(M, ps, ls, S.rng);
          for (int Cc : {0, A}) {
            Morphism padded = H.tensor(beta, H.identity(Z.word(Cc ? std::vector<int>{Cc} : std::vector<int>{})));
            S.add("inclusion", std::string(DD == &Dn ? "D_n" : "D'_n") + " offset0 " + inst,
                  op_residual(M, [&](const State& s) { return M.dr(first, {X, Y}, {0, W}, beta, M.project(*DD, {X, Y, Cc}, s)); },
                              [&](const State& s) { return M.dr(*DD, {X, Y, Cc}, {0, W, Cc}, padded, s); }, st));
          }
          std::vector<std::vector<int>> ls1{{0, A}, {X}, {Y}};
          for (size_t i = 1; i < extra.size(); ++i) ls1.push_back({0, A});
          auto st1 = sector_states(M, ps, ls1, S.rng);
          for (int Cc : {0, A}) {
            Morphism padded = H.tensor(H.identity(Z.word(Cc ? std::vector<int>{Cc} : std::vector<int>{})), beta);
            S.add("inclusion", std::string(DD == &Dn ? "D_n" : "D'_n") + " offset1 " + inst,
                  op_residual(M, [&](const State& s) { return M.dr(second, {X, Y}, {0, W}, beta, M.project(*DD, {Cc, X, Y}, s)); },
                              [&](const State& s) { return M.dr(*DD, {Cc, X, Y}, {Cc, 0, W}, padded, s); }, st1));
          }
        }
      }
  // Filling in the middle puncture: P on the composite link equals P_D with vacuum inserted.
  Placement L32 = M.link(compose_links(G.L(2), G.L(3)));
  auto st = sector_states(M, {G.e(3), G.e(2), G.e(1)}, {{0, 1, A}, {0, 1, A}, {0, 1, A}}, S.rng);
  double r = 0.0;
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      r = std::max(r, op_residual(M, [&](const State& s) { return M.project(L32, {X, Y}, s); },
                                  [&](const State& s) { return M.project(Dn, {X, 0, Y}, s); }, st));
  S.add("fill-in", "L_3^L_2 vs D_2", r);
}

void concatenation(Suite& S, const std::string& name, const Link& first, const Link& second) {
  SectorModel& M = S.M;
  CenterCategory& Z = M.center();
  const int A = Z.size() - 1;
  Placement P1 = M.link(first), P2 = M.link(second), P = M.link(compose_links(first, second));
  const int mid = M.geometry().puncture_at(first.initial());
  for (int X = 1; X < Z.size(); ++X) {
    const int Xb = Z.dual(X);
    std::vector<int> ps{P.punctures[0], mid, P.punctures[1]};
    std::vector<std::vector<int>> ls{{0, X, Xb}, {0, X}, {0, X, Xb, A}};
    for (int r : in_between(M, P))
      if (r != mid) {
        ps.push_back(r);
        ls.push_back({0, A});
      }
    auto states = sector_states(M, ps, ls, S.rng);
    const std::string inst = name + " X=" + Z.object(X).label;
    auto p1q = [&](const State& s) {
      return SectorModel::axpy(1.0, M.link_projector(P, X, "11", s), M.link_projector(P, X, "1X", s));
    };
    S.add("concatenation", inst,
          op_residual(M, [&](const State& s) { return M.gate(P2, X, M.gate(P1, X, p1q(s))); },
                      [&](const State& s) { return M.gate(P, X, p1q(s)); }, states));
    S.add("concatenation-reversed", inst,
          op_residual(M, [&](const State& s) { return M.gate(P1, X, M.gate(P2, X, M.link_projector(P, X, "X1", s))); },
                      [&](const State& s) { return M.gate(P, X, M.link_projector(P, X, "X1", s)); }, states));
  }
}

}  // namespace

double verify_isotopy(SectorModel& M, const Link& L, const Link& Lp, const Region& E, const IsotopyWitness& w,
                      std::uint64_t seed) {
  validate_simple_isotopy(L, Lp, E, w);
  const FiducialGeometry& G = M.geometry();
  CenterCategory& Z = M.center();
  std::mt19937_64 rng(seed);
  Placement PL = M.link(L), PLp = M.link(Lp);
  Placement PE = G.region_placement(E, PL.punctures);
  const int A = Z.size() - 1;
  double r = 0.0;
  for (int X = 1; X < Z.size(); ++X) {
    const int Xb = Z.dual(X);
    std::vector<int> ps = PL.punctures;
    std::vector<std::vector<int>> ls{{0, X, Xb, A}, {0, X, Xb, A}};
    for (int f : PE.filled) {
      ps.push_back(f);
      ls.push_back({0, A});
    }
    auto states = sector_states(M, ps, ls, rng);
    r = std::max(r, op_residual(M, [&](const State& s) { return M.gate(PL, X, M.project_filled(PE, s)); },
                                [&](const State& s) { return M.gate(PLp, X, M.project_filled(PE, s)); }, states));
  }
  return r;
}

double verify_excitation(SectorModel& M, int n, const std::vector<int>& stack, const std::vector<State>& states) {
  const int k = static_cast<int>(stack.size()) - 1;
  const FiducialGeometry& G = M.geometry();
  if (k < 0 || n < 1 || n + k > G.depth())
    throw TruncationError("excitation check needs depth >= n + k (k = " + std::to_string(k) + ")");
  std::vector<Link> links;
  std::vector<int> ps, labels;
  for (int kap = 1; kap <= k; ++kap) links.push_back(G.L(n + kap));
  for (int kap = 1; kap <= k + 1; ++kap) {
    ps.push_back(G.e(n + k - kap + 1));
    labels.push_back(stack[k - kap + 1]);
  }
  Placement D = k == 0 ? Placement{{G.e(n)}, {}, "e_n"} : G.region_placement(G.link_union(links), ps);
  auto U = [&](const State& s) {
    State t = s;
    for (int j = k; j >= 0; --j) t = M.circuit(M.fiducial(n + j), stack[j], t);
    return t;
  };
  return op_residual(M, U, [&](const State& s) { return M.project(D, labels, U(s)); }, states);
}

LemmaReport run_lemma_suite(SectorModel& M, std::uint64_t seed, double tol) {
  Suite S{M, std::mt19937_64(seed), tol, {}};
  const FiducialGeometry& G = M.geometry();
  CenterCategory& Z = M.center();
  const int depth = G.depth();

  gate_properties(S, "L_2", M.link(G.L(2)));
  gate_properties(S, "L'_2", M.link(G.Lp(2)));
  gate_properties(S, "Q_2", M.link(G.Q(2)));
  gate_properties(S, "K_2", M.link(G.K(2)));
  gate_properties(S, "K'_2", M.link(G.Kp(2)));

  // Disjoint footprints commute.
  auto local = local_states(M, seed ^ 0x5eedULL);
  for (int X = 1; X < Z.size(); ++X)
    for (int Y = 1; Y < Z.size(); ++Y) {
      if (X != Y && X != Z.size() - 1) continue;
      Placement a = M.link(G.L(1)), b = M.link(G.L(3)), c = M.link(G.Lp(3));
      for (const Placement* far : {&b, &c}) {
        auto st = S.link_states(*far, Y);
        st.insert(st.end(), local.begin(), local.end());
        S.add("disjoint-commute", "L_1 with " + far->label + " X=" + Z.object(X).label + " Y=" + Z.object(Y).label,
              op_residual(M, [&](const State& s) { return M.gate(a, X, M.gate(*far, Y, s)); },
                          [&](const State& s) { return M.gate(*far, Y, M.gate(a, X, s)); }, st));
      }
    }

  multiplicativity(S, "L_2", M.link(G.L(2)));
  multiplicativity(S, "K'_2", M.link(G.Kp(2)));
  inclusion(S);

  for (int k = 1; k < depth; ++k) concatenation(S, "L_" + std::to_string(k + 1) + "^L_" + std::to_string(k), G.L(k), G.L(k + 1));
  concatenation(S, "L'_3^L'_2", G.Lp(2), G.Lp(3));
  concatenation(S, "Q_3^L_2", G.L(2), G.Q(3));
  concatenation(S, "L'_2^Q_2", G.Q(2), G.Lp(2));

  for (int n = 1; n <= 3; ++n) {
    IsotopyWitness w;
    const Region& E = G.E(n);
    Link K = G.K(n), Kp = G.Kp(n);
    for (const Link* l : {&K, &Kp}) {
      std::set<Face> kf(l->faces().begin(), l->faces().end());
      Region& C = l == &K ? w.C : w.Cp;
      for (const auto& f : E.faces)
        if (!kf.count(f)) C.faces.insert(f);
    }
    S.add("isotopy", "bridge E_" + std::to_string(n), verify_isotopy(M, K, Kp, E, w, seed + n));
  }

  const int n1 = Z.size();
  for (int X1 = 0; X1 < n1; ++X1)
    for (int X0 = 0; X0 < n1; ++X0)
      S.add("excitation", "k=1 (" + Z.object(X1).label + "," + Z.object(X0).label + ")",
            verify_excitation(M, depth - 1, {X0, X1}, local));
  // Each string already present near the origin pushes later creations out by a link, so the
  // two-string stacks use the states excited at e_0 only.
  std::vector<State> near;
  for (const auto& s : local) {
    bool ok = true;
    for (const auto& [c, a] : s.amp) ok = ok && c[G.e(1)] == 0;
    if (ok) near.push_back(s);
  }
  for (int X2 = 1; X2 < n1; ++X2)
    for (int X1 = 1; X1 < n1; X1 += 2)
      S.add("excitation", "k=2 (" + Z.object(X2).label + "," + Z.object(X1).label + "," + Z.object(n1 - 1).label + ")",
            verify_excitation(M, depth - 2, {n1 - 1, X1, X2}, near));
  return S.report;
}

}  // namespace lwdhr
