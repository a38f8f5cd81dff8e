#include <gtest/gtest.h>

#include <random>

#include "lwdhr/lw_lemmas.hpp"

using namespace lwdhr;

namespace {

std::vector<Face> row(int x0, int y, int len) {
  std::vector<Face> f;
  for (int i = 0; i < len; ++i) f.push_back({x0 + i, y});
  return f;
}

struct Fixture {
  CategoryData cat;
  HomCalculus H;
  CenterCategory Z;
  FiducialGeometry G;
  SectorModel M;
  explicit Fixture(const std::string& name, int depth = 6)
      : cat(load_catalog(name)), H(cat), Z(H), G(depth), M(Z, G) {}
};

}  // namespace

TEST(Links, StraightLinkEndpoints) {
  Link L = make_link(row(0, 0, 6));
  EXPECT_EQ(L.initial(), shared_edge({0, 0}, {1, 0}));
  EXPECT_EQ(L.final(), shared_edge({4, 0}, {5, 0}));
  EXPECT_EQ(L.bulk().size(), 2u);
  EXPECT_FALSE(L.region().edges.count(L.initial()));
  EXPECT_FALSE(L.region().edges.count(L.final()));
}

TEST(Links, BentLinkAccepted) {
  // Four collinear faces at each end joined by a corner.
  std::vector<Face> f = row(0, 0, 4);
  f.push_back({3, 1});
  for (int y = 2; y <= 4; ++y) f.push_back({3, y});
  EXPECT_NO_THROW(make_link(f));
}

TEST(Links, ClauseViolationsRejected) {
  EXPECT_THROW(make_link(row(0, 0, 4)), GeometryError);
  // Last four faces not collinear.
  std::vector<Face> hook = row(0, 0, 5);
  hook.push_back({4, 1});
  EXPECT_THROW(make_link(hook), GeometryError);
  // f_0 and f_3 adjacent.
  EXPECT_THROW(make_link({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 2}}), GeometryError);
  std::vector<Face> repeat = row(0, 0, 5);
  repeat.push_back({2, 0});
  EXPECT_THROW(make_link(repeat), GeometryError);
}

TEST(Links, Composition) {
  FiducialGeometry G(4);
  ASSERT_TRUE(composable(G.L(1), G.L(2)));
  Link K = compose_links(G.L(1), G.L(2));
  EXPECT_EQ(K.faces().size(), 14u);
  EXPECT_EQ(K.initial(), G.L(2).initial());
  EXPECT_EQ(K.final(), G.L(1).final());
  EXPECT_THROW(compose_links(G.L(1), G.L(3)), GeometryError);
  EXPECT_EQ(G.chain_segment(1, 3).faces().size(), 20u);
}

TEST(Geometry, FiducialPunctures) {
  FiducialGeometry G(6);
  for (int n = 1; n <= 6; ++n) {
    EXPECT_EQ(G.puncture_at(G.L(n).initial()), G.e(n));
    EXPECT_EQ(G.puncture_at(G.L(n).final()), G.e(n - 1));
    EXPECT_EQ(G.puncture_at(G.Lp(n).initial()), G.ep(n));
  }
  EXPECT_GE(G.origin(), 0);
  EXPECT_THROW(FiducialGeometry(2), TruncationError);
}

TEST(Geometry, BridgeValid) {
  FiducialGeometry G(6);
  EXPECT_NO_THROW(validate_bridge(G));
  Bridge b = fiducial_bridge(G);
  for (const auto& [n, E] : b.E)
    if (b.Q.count(n + 1)) {
      EXPECT_TRUE(E.contains(G.K(n).region()));
      EXPECT_TRUE(E.contains(G.Kp(n).region()));
    }
}

TEST(Geometry, TrivialBridgeRejected) {
  FiducialGeometry G(6);
  Bridge b;
  for (int n = 1; n <= 6; ++n) {
    b.C.emplace(n, G.L(n));
    b.Cp.emplace(n, G.L(n));
    b.Q.emplace(n, G.L(n));
    b.E.emplace(n, G.L(n).region());
  }
  EXPECT_THROW(validate_bridge(b), GeometryError);
}

TEST(Geometry, BridgeClauseFiveEnforced) {
  FiducialGeometry G(6);
  Bridge b = fiducial_bridge(G);
  // Swell E_3 into the first chain link.
  Region big = b.E.at(3);
  Region r = G.L(1).region();
  big.faces.insert(r.faces.begin(), r.faces.end());
  b.E[3] = big;
  EXPECT_THROW(validate_bridge(b), GeometryError);
}

TEST(Geometry, PlacementErrors) {
  FiducialGeometry G(4);
  Link L = G.L(2);
  EXPECT_THROW(G.region_placement(L.region(), {G.e(1), G.e(2)}), PlacementError);
  EXPECT_THROW(G.link_placement(make_link(row(40, 40, 6))), PlacementError);
}

TEST(SectorModel, GatesAreSelfAdjointUnitaries) {
  for (const char* name : {"vec-z2", "fibonacci"}) {
    Fixture f(name);
    auto states = local_states(f.M, 0xC0FFEE);
    std::mt19937_64 rng(7);
    auto around = sector_states(f.M, {f.G.e(2), f.G.e(1)}, {{0, 1, f.Z.size() - 1}, {0, 1}}, rng);
    states.insert(states.end(), around.begin(), around.end());
    Placement L = f.M.link(f.G.L(2));
    for (int X = 0; X < f.Z.size(); ++X)
      for (const auto& s : states) {
        State u = f.M.gate(L, X, s);
        EXPECT_NEAR(f.M.norm(u), f.M.norm(s), 1e-12) << name << " X=" << X;
        EXPECT_LT(f.M.distance(f.M.gate(L, X, u), s), 1e-12) << name << " X=" << X;
      }
  }
}

TEST(SectorModel, VacuumGateIsIdentity) {
  Fixture f("fibonacci");
  auto states = local_states(f.M, 1);
  for (const auto& s : states) EXPECT_EQ(f.M.distance(f.M.gate(f.M.link(f.G.L(1)), 0, s), s), 0.0);
}

TEST(SectorModel, DrinfeldShapeChecked) {
  Fixture f("vec-z2");
  Placement L = f.M.link(f.G.L(1));
  Morphism wrong = f.H.identity(f.Z.word({1}));
  EXPECT_THROW(f.M.dr(L, {0, 0}, {1, 1}, wrong, f.M.vacuum()), ShapeMismatch);
}

TEST(SectorModel, CircuitBeyondWindow) {
  Fixture f("vec-z2", 4);
  EXPECT_NO_THROW(f.M.fiducial(6));
  EXPECT_THROW(f.M.fiducial(7), TruncationError);
  EXPECT_THROW(f.M.right_chain(7), TruncationError);
}

TEST(SectorModel, StringCreatesConjugatePair) {
  Fixture f("vec-z2");
  const int X = 1;
  State s = f.M.circuit(f.M.fiducial(3), X, f.M.vacuum());
  ASSERT_FALSE(s.empty());
  for (const auto& [cfg, a] : s.amp) {
    EXPECT_EQ(cfg[f.G.e(3)], X);
    EXPECT_EQ(cfg[f.G.e(0)], f.Z.dual(X));
    EXPECT_EQ(cfg[f.G.e(1)], 0);
  }
}

class LemmaSuite : public ::testing::TestWithParam<const char*> {};

TEST_P(LemmaSuite, AllInstancesPass) {
  Fixture f(GetParam());
  LemmaReport r = run_lemma_suite(f.M, 0xC0FFEE, default_tolerance(f.cat));
  EXPECT_GT(r.items.size(), 100u);
  for (const auto& it : r.items) EXPECT_TRUE(it.pass()) << it.lemma << " " << it.instance << " " << it.residual;
}

INSTANTIATE_TEST_SUITE_P(Catalogs, LemmaSuite, ::testing::Values("vec-z2", "vec-z3", "fibonacci", "ising"),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (auto& c : s)
                             if (c == '-') c = '_';
                           return s;
                         });

TEST(Lemmas, ExcitationVacuumStack) {
  Fixture f("vec-z2");
  auto states = local_states(f.M, 3);
  EXPECT_EQ(verify_excitation(f.M, 3, {0, 0}, states), 0.0);
  EXPECT_THROW(verify_excitation(f.M, 6, {0, 1}, states), TruncationError);
}

TEST(Lemmas, ToricExcitationTwoStrings) {
  Fixture f("vec-z2");
  std::vector<State> near;
  for (const auto& s : local_states(f.M, 3)) {
    bool ok = true;
    for (const auto& [cfg, a] : s.amp) ok = ok && cfg[f.G.e(1)] == 0;
    if (ok) near.push_back(s);
  }
  for (int X1 = 1; X1 < 4; ++X1)
    for (int X2 = 1; X2 < 4; ++X2) EXPECT_LE(verify_excitation(f.M, 4, {3, X1, X2}, near), 1e-12);
  EXPECT_LE(verify_excitation(f.M, 4, {0, 2, 1}, near), 1e-12);
  for (int X = 0; X < 4; ++X) EXPECT_LE(verify_excitation(f.M, 5, {0, X}, near), 1e-12);
}

TEST(Lemmas, BridgeIsotopyFibonacci) {
  Fixture f("fibonacci");
  for (int n = 1; n <= 3; ++n) {
    IsotopyWitness w;
    Link K = f.G.K(n), Kp = f.G.Kp(n);
    for (const auto& face : f.G.E(n).faces) {
      if (std::find(K.faces().begin(), K.faces().end(), face) == K.faces().end()) w.C.faces.insert(face);
      if (std::find(Kp.faces().begin(), Kp.faces().end(), face) == Kp.faces().end()) w.Cp.faces.insert(face);
    }
    EXPECT_LE(verify_isotopy(f.M, K, Kp, f.G.E(n), w, 11 + n), 1e-10);
  }
}

TEST(Lemmas, IsotopyNeedsSharedEndpoints) {
  FiducialGeometry G(4);
  EXPECT_THROW(validate_simple_isotopy(G.L(1), G.L(2), G.E(1), {}), GeometryError);
}
