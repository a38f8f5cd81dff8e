#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "lwdhr/center.hpp"

using namespace lwdhr;

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

// Toric code anyons identified by underlying object and twist.
struct Toric {
  int vac, e, m, eps;
};

Toric identify_toric(CenterCategory& Z) {
  Toric t{0, -1, -1, -1};
  const int odd = Z.base().index_of("1");
  for (int X = 1; X < Z.size(); ++X) {
    const auto& o = Z.object(X);
    bool fermion = std::abs(o.twist - cplx(-1.0)) < 1e-9;
    if (fermion) t.eps = X;
    else if (o.n[odd] == 1) t.m = X;
    else t.e = X;
  }
  return t;
}

}  // namespace

TEST(Center, SimpleCensus) {
  auto z2 = load_catalog("vec-z2");
  HomCalculus Hz(z2);
  auto sz = center_simples(Hz);
  ASSERT_EQ(sz.size(), 4u);
  for (const auto& X : sz) EXPECT_NEAR(X.d, 1.0, 1e-12);

  auto z3 = load_catalog("vec-z3");
  HomCalculus H3(z3);
  auto s3 = center_simples(H3);
  ASSERT_EQ(s3.size(), 9u);
  for (const auto& X : s3) EXPECT_NEAR(X.d, 1.0, 1e-12);

  auto fib = load_catalog("fibonacci");
  HomCalculus Hf(fib);
  auto sf = center_simples(Hf);
  ASSERT_EQ(sf.size(), 4u);
  std::vector<double> d;
  for (const auto& X : sf) d.push_back(X.d);
  std::sort(d.begin(), d.end());
  EXPECT_NEAR(d[0], 1.0, 1e-12);
  EXPECT_NEAR(d[1], kGolden, 1e-12);
  EXPECT_NEAR(d[2], kGolden, 1e-12);
  EXPECT_NEAR(d[3], kGolden * kGolden, 1e-12);
}

TEST(Center, VacuumFirstAndTrivial) {
  for (const auto& name : catalog_names()) {
    auto cat = load_catalog(name);
    HomCalculus H(cat);
    auto s = center_simples(H);
    const auto& vac = s.front();
    EXPECT_EQ(vac.label, "Z0");
    ASSERT_EQ(vac.hb.object.summands, std::vector<int>{cat.unit});
    for (int c = 0; c < cat.rank(); ++c) {
      Morphism swap = H.compose(H.tensor(H.identity(simple_word({c})), H.unit_in()),
                                HomCalculus::dagger(H.tensor(H.unit_in(), H.identity(simple_word({c})))));
      EXPECT_LT((vac.hb.sigma[c] - swap).max_abs(), 1e-12) << name;
    }
  }
}

TEST(Center, DimensionSumAndCloaking) {
  for (const auto& name : catalog_names()) {
    auto cat = load_catalog(name);
    HomCalculus H(cat);
    CenterCategory Z(H);
    EXPECT_NEAR(Z.total_dim_sq(), cat.D2() * cat.D2(), 1e-8) << name;
    for (const auto& X : Z.simples()) EXPECT_LT(H.cloaking_residual(X.hb), 1e-9) << name;
  }
}

TEST(Center, DeterministicAcrossSeeds) {
  auto fib = load_catalog("fibonacci");
  HomCalculus H(fib);
  auto a = center_simples(H, 1), b = center_simples(H, 12345);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].n, b[i].n);
    for (int c = 0; c < fib.rank(); ++c) EXPECT_LT((a[i].hb.sigma[c] - b[i].hb.sigma[c]).max_abs(), 1e-9);
  }
}

TEST(Center, ToricFusionSpaces) {
  auto z2 = load_catalog("vec-z2");
  HomCalculus H(z2);
  CenterCategory Z(H);
  Toric t = identify_toric(Z);
  ASSERT_GE(t.e, 0);
  ASSERT_GE(t.m, 0);
  ASSERT_GE(t.eps, 0);
  EXPECT_EQ(Z.hom_basis({t.vac, t.vac}, {t.vac}).size(), 1u);
  EXPECT_EQ(Z.N(t.e, t.m, t.eps), 1);
  EXPECT_EQ(Z.N(t.e, t.e, t.vac), 1);
  EXPECT_EQ(Z.N(t.e, t.e, t.eps), 0);
  // Basis elements are trace-orthonormal.
  const auto& b = Z.hom_basis({t.e, t.m}, {t.eps});
  EXPECT_NEAR(std::abs(H.trace_inner_product(b[0], b[0]) - 1.0), 0.0, 1e-12);
}

TEST(Center, FusionRulesSymmetric) {
  auto ising = load_catalog("ising");
  HomCalculus H(ising);
  CenterCategory Z(H);
  for (int X = 0; X < Z.size(); ++X)
    for (int Y = 0; Y < Z.size(); ++Y)
      for (int W = 0; W < Z.size(); ++W) {
        EXPECT_EQ(Z.N(X, Y, W), Z.N(Y, X, W));
        EXPECT_EQ(Z.N(X, Y, W), Z.N(Z.dual(X), W, Y));
      }
}

TEST(Center, ToricSymbols) {
  auto z2 = load_catalog("vec-z2");
  HomCalculus H(z2);
  CenterCategory Z(H);
  Toric t = identify_toric(Z);
  CenterReport rep;
  SymbolTable s = center_symbols(Z, &rep);
  EXPECT_NEAR(std::abs(s.r_entry(t.e, t.m, t.eps) * s.r_entry(t.m, t.e, t.eps) - cplx(-1.0)), 0.0, 1e-12);
  for (int X = 0; X < Z.size(); ++X) EXPECT_NEAR(std::abs(s.r_entry(0, X, X) - cplx(1.0)), 0.0, 1e-12);
  EXPECT_LT(rep.pentagon, 1e-12);
  EXPECT_LT(rep.hexagon.worst(), 1e-12);
  EXPECT_LT(rep.s_unitarity, 1e-8);
}

TEST(Center, FibonacciAndIsingSymbols) {
  for (const char* name : {"fibonacci", "ising", "vec-z3"}) {
    auto cat = load_catalog(name);
    HomCalculus H(cat);
    CenterCategory Z(H);
    CenterReport rep;
    SymbolTable s = center_symbols(Z, &rep);
    EXPECT_LT(rep.pentagon, 1e-9) << name;
    EXPECT_LT(rep.hexagon.first, 1e-9) << name;
    EXPECT_LT(rep.hexagon.second, 1e-9) << name;
    EXPECT_LT(rep.f_unitarity, 1e-9) << name;
    EXPECT_LT(rep.r_unitarity, 1e-9) << name;
    EXPECT_LT(rep.s_unitarity, 1e-8) << name;
    EXPECT_LT(rep.dim_identity, 1e-8) << name;
    for (int X = 0; X < Z.size(); ++X) EXPECT_NEAR(std::abs(s.r_entry(0, X, X) - cplx(1.0)), 0.0, 1e-10) << name;
  }
}

TEST(Center, TwistFromRMatchesTube) {
  // theta_X = sum_Z (d_Z / d_X) R^{XX}_Z, compared with the tube's Dehn twist.
  for (const auto& name : catalog_names()) {
    auto cat = load_catalog(name);
    HomCalculus H(cat);
    CenterCategory Z(H);
    SymbolTable s = center_symbols(Z);
    for (int X = 0; X < Z.size(); ++X) {
      cplx theta = 0.0;
      for (int W = 0; W < Z.size(); ++W)
        if (s.N(X, X, W)) theta += Z.dim(W) / Z.dim(X) * s.r_entry(X, X, W);
      EXPECT_NEAR(std::abs(theta - Z.object(X).twist), 0.0, 1e-9) << name;
    }
  }
}

TEST(Center, ZetaIsUnitaryIntertwiner) {
  auto fib = load_catalog("fibonacci");
  HomCalculus H(fib);
  CenterCategory Z(H);
  for (int X = 0; X < Z.size(); ++X) {
    HalfBraiding star = Z.dual_object(X);
    auto rep = check_half_braiding(H, star);
    EXPECT_LT(rep.unitarity, 1e-10);
    EXPECT_LT(rep.naturality, 1e-10);
    Morphism z = Z.zeta(X);
    Morphism zz = H.compose(HomCalculus::dagger(z), z);
    EXPECT_LT((zz - H.identity(zz.source)).max_abs(), 1e-10);
  }
}

TEST(Center, JsonRoundTrip) {
  auto fib = load_catalog("fibonacci");
  HomCalculus H(fib);
  CenterCategory Z(H);
  SymbolTable s = center_symbols(Z);
  auto doc = symbol_table_to_json(s);
  ASSERT_TRUE(doc.contains("R"));
  SymbolTable back = symbol_table_from_json(doc);
  EXPECT_EQ(back.labels, s.labels);
  EXPECT_LT(verify_hexagons(back).worst(), 1e-9);
  for (const auto& [k, v] : s.R) EXPECT_EQ(back.r_entry(k[0], k[1], k[2], k[3], k[4]), v);
}
