#include <gtest/gtest.h>

#include <cmath>

#include "lwdhr/dhr_analysis.hpp"

using namespace lwdhr;

namespace {

struct Analysis {
  CategoryData cat;
  HomCalculus H;
  CenterCategory Z;
  SymbolTable center;
  FiducialGeometry G;
  SectorModel M;
  DhrAnalysis A;
  Analysis(const std::string& name, int depth)
      : cat(load_catalog(name)), H(cat), Z(H), center(center_symbols(Z)), G(depth), M(Z, G),
        A(M, local_states(M, 0xC0FFEE)) {}
};

struct Toric {
  int e = -1, m = -1, eps = -1;
};

Toric identify_toric(CenterCategory& Z) {
  Toric t;
  const int odd = Z.base().index_of("1");
  for (int X = 1; X < Z.size(); ++X) {
    const auto& o = Z.object(X);
    if (std::abs(o.twist - cplx(-1.0)) < 1e-9) t.eps = X;
    else if (o.n[odd] == 1) t.m = X;
    else t.e = X;
  }
  return t;
}

}  // namespace

TEST(Stabilize, ConstantTailFound) {
  Analysis s("vec-z2", 6);
  State psi = s.A.states().back();
  OpFamily late{"late", 1, 5, [&](int n, const State& x) { return n >= 3 ? x : SectorModel::scale(2.0, x); }};
  EXPECT_EQ(stabilize(s.M, late, psi, 1e-11).N, 3);
}

TEST(Stabilize, NoTailIsTruncation) {
  Analysis s("vec-z2", 6);
  State psi = s.A.states().back();
  OpFamily flip{"flip", 1, 5, [&](int n, const State& x) { return SectorModel::scale(n % 2 ? 1.0 : -1.0, x); }};
  EXPECT_THROW(stabilize(s.M, flip, psi, 1e-11), TruncationError);
  OpFamily single{"single", 4, 4, [](int, const State& x) { return x; }};
  EXPECT_THROW(stabilize(s.M, single, psi, 1e-11), TruncationError);
  EXPECT_THROW(Analysis("vec-z2", 4), TruncationError);
}

TEST(Phi, VacuumIsIdentity) {
  Analysis s("fibonacci", 6);
  PhiOperator p = s.A.phi(0, 0, 0, s.A.fusion_morphism(0, 0, 0));
  for (const auto& psi : s.A.states()) EXPECT_LE(s.M.distance(s.A.apply(p.family, psi), psi), 1e-12);
  DaggerResidual r = s.A.verify_phi_dagger(0, 0, 0, p.alpha, p.alpha);
  EXPECT_LE(r.product, 1e-12);
}

TEST(Phi, ToricChannelIsUnitary) {
  Analysis s("vec-z2", 6);
  Toric t = identify_toric(s.Z);
  FusionRuleCheck fr = s.A.fusion_rules(t.e, t.m);
  for (int W = 0; W < s.Z.size(); ++W) EXPECT_EQ(fr.multiplicity[W], W == t.eps ? 1 : 0);
  EXPECT_LE(fr.completeness, 1e-12);
  EXPECT_LE(fr.orthogonality, 1e-12);
  Morphism alpha = s.A.fusion_morphism(t.e, t.m, t.eps);
  DaggerResidual r = s.A.verify_phi_dagger(t.e, t.m, t.eps, alpha, alpha);
  EXPECT_LE(r.product, 1e-12);
  EXPECT_LE(r.reverse, 1e-12);
}

TEST(Phi, AdjointIsDaggerInsertion) {
  Analysis s("fibonacci", 6);
  for (int X = 1; X < s.Z.size(); ++X)
    for (int W = 0; W < s.Z.size(); ++W)
      if (s.Z.N(X, X, W)) EXPECT_LE(s.A.verify_phi_adjoint(X, X, W, s.A.fusion_morphism(X, X, W)), 1e-10);
}

TEST(Phi, DistinctChannelsOrthogonal) {
  Analysis s("fibonacci", 6);
  const int X = s.Z.size() - 1;
  FusionRuleCheck fr = s.A.fusion_rules(X, X);
  EXPECT_LE(fr.orthogonality, 1e-10);
  EXPECT_LE(fr.completeness, 1e-10);
  for (int W = 0; W < s.Z.size(); ++W) EXPECT_EQ(fr.multiplicity[W], s.Z.N(X, X, W));
}

TEST(Phi, ScaledMorphismScalesProduct) {
  // d_Z^{-1} tr(alpha delta^dagger) with delta = 2 alpha gives 2 on the image.
  Analysis s("vec-z3", 6);
  int W = -1;
  for (int w = 0; w < s.Z.size(); ++w)
    if (s.Z.N(1, 2, w)) W = w;
  Morphism alpha = s.A.fusion_morphism(1, 2, W);
  Morphism delta = cplx(2.0) * alpha;
  EXPECT_LE(s.A.verify_phi_dagger(1, 2, W, alpha, delta).product, 1e-12);
}

TEST(Phi, VacuumFusionRules) {
  Analysis s("vec-z3", 6);
  for (int Y = 0; Y < s.Z.size(); ++Y) {
    FusionRuleCheck fr = s.A.fusion_rules(0, Y);
    for (int W = 0; W < s.Z.size(); ++W) EXPECT_EQ(fr.multiplicity[W], W == Y ? 1 : 0);
  }
}

TEST(Phi, IntertwinesStringEndomorphisms) {
  Analysis s("vec-z2", 6);
  Toric t = identify_toric(s.Z);
  EXPECT_LE(s.A.verify_intertwining(t.e, t.m, t.eps, s.A.fusion_morphism(t.e, t.m, t.eps)), 1e-12);
}

TEST(Transporter, VacuumIsIdentity) {
  Analysis s("fibonacci", 8);
  Transporter T = s.A.transporter(0);
  for (const auto& psi : s.A.states()) EXPECT_LE(s.M.distance(s.A.apply(T.T, psi), psi), 1e-12);
}

TEST(Transporter, ToricUnitary) {
  Analysis s("vec-z2", 8);
  for (int X = 1; X < s.Z.size(); ++X) EXPECT_LE(s.A.transporter(X).unitarity, 1e-12);
}

TEST(Braiding, CrucialIdentityFibonacci) {
  Analysis s("fibonacci", 8);
  const int X = s.Z.size() - 1;
  for (int W = 0; W < s.Z.size(); ++W)
    if (s.Z.N(X, X, W)) EXPECT_LE(s.A.crucial_identity(X, X, W, 2, 5 + W), 1e-10);
}

TEST(Braiding, VacuumBraidsTrivially) {
  Analysis s("vec-z2", 8);
  for (int Y = 0; Y < s.Z.size(); ++Y) {
    RCheck r = s.A.r_check(0, Y, Y, &s.center);
    EXPECT_LE(r.identity, 1e-12);
    EXPECT_NEAR(std::abs(r.R(0, 0) - cplx(1.0)), 0.0, 1e-12);
  }
}

TEST(Braiding, ToricMonodromyBothSides) {
  Analysis s("vec-z2", 8);
  Toric t = identify_toric(s.Z);
  cplx dhr = s.A.r_check(t.e, t.m, t.eps, &s.center).R(0, 0) * s.A.r_check(t.m, t.e, t.eps, &s.center).R(0, 0);
  cplx ctr = s.center.r_entry(t.e, t.m, t.eps) * s.center.r_entry(t.m, t.e, t.eps);
  EXPECT_NEAR(std::abs(dhr - cplx(-1.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(ctr - cplx(-1.0)), 0.0, 1e-12);
}

TEST(Braiding, MirroredChiralityDetected) {
  auto cat = load_catalog("vec-z2");
  HomCalculus H(cat);
  CenterCategory Z(H);
  SymbolTable center = center_symbols(Z);
  FiducialGeometry G(8);
  SectorModel M(Z, G, -1);
  DhrAnalysis A(M, local_states(M, 0xC0FFEE));
  Toric t = identify_toric(Z);
  EXPECT_GT(A.r_check(t.e, t.m, t.eps, &center).deviation, 1.0);
}

TEST(Comparison, ToricCodeMatchesCenter) {
  Analysis s("vec-z2", 8);
  DhrComparison c = compare_with_center(s.A, s.center, 1);
  EXPECT_TRUE(c.fusion_rules_match);
  EXPECT_LE(c.f_deviation, 1e-12);
  EXPECT_LE(c.r_deviation, 1e-12);
  EXPECT_LE(c.pentagon, 1e-12);
  EXPECT_LE(c.hexagon.worst(), 1e-12);
  EXPECT_LE(c.crucial, 1e-12);
  EXPECT_LE(c.transporter_unitarity, 1e-12);
  for (const auto& [name, N] : c.stabilization) EXPECT_LE(N, s.A.window() - 1) << name;
}

TEST(Comparison, FibonacciSingleBlock) {
  Analysis s("fibonacci", 8);
  const int X = s.Z.size() - 1;
  FCheck f = s.A.f_check(X, X, X, X, &s.center);
  EXPECT_GT(f.left.size(), 1u);
  EXPECT_LE(f.tree_left, 1e-10);
  EXPECT_LE(f.tree_right, 1e-10);
  EXPECT_LE(f.deviation, 1e-9);
}
