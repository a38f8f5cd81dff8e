#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lwdhr/tube_algebra.hpp"

using namespace lwdhr;

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

ObjectWord one_point() { return ObjectWord{{{0, 1}}}; }

std::vector<int> block_sizes(const MatrixUnitSystem& m) {
  std::vector<int> out;
  for (const auto& b : m.blocks) out.push_back(b.n);
  std::sort(out.begin(), out.end());
  return out;
}

Vec random_element(const TubeAlgebraTable& T, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Vec v(T.dim);
  for (int i = 0; i < T.dim; ++i) v(i) = cplx(g(rng), g(rng));
  return v;
}

}  // namespace

TEST(TubeAlgebra, Dimensions) {
  auto z2 = load_catalog("vec-z2");
  HomCalculus Hz(z2);
  EXPECT_EQ(build_tube(Hz, one_point()).dim, 4);
  auto fib = load_catalog("fibonacci");
  HomCalculus Hf(fib);
  EXPECT_EQ(build_tube(Hf, one_point()).dim, 7);
  // Empty boundary: one sector per simple.
  auto ising = load_catalog("ising");
  HomCalculus Hi(ising);
  EXPECT_EQ(build_tube(Hi, ObjectWord{}).dim, ising.rank());
}

TEST(TubeAlgebra, AlgebraAxioms) {
  std::mt19937 rng(7);
  for (const char* name : {"vec-z3", "fibonacci", "ising"}) {
    auto cat = load_catalog(name);
    HomCalculus H(cat);
    auto T = build_tube(H, one_point());
    for (int trial = 0; trial < 3; ++trial) {
      Vec a = random_element(T, rng), b = random_element(T, rng), c = random_element(T, rng);
      EXPECT_LT((T.multiply(T.multiply(a, b), c) - T.multiply(a, T.multiply(b, c))).cwiseAbs().maxCoeff(), 1e-9)
          << name;
      EXPECT_LT((T.multiply(T.unit, a) - a).cwiseAbs().maxCoeff(), 1e-10) << name;
      EXPECT_LT((T.multiply(a, T.unit) - a).cwiseAbs().maxCoeff(), 1e-10) << name;
      EXPECT_LT((T.star(T.multiply(a, b)) - T.multiply(T.star(b), T.star(a))).cwiseAbs().maxCoeff(), 1e-9)
          << name;
      EXPECT_LT((T.star(T.star(a)) - a).cwiseAbs().maxCoeff(), 1e-10) << name;
    }
  }
}

TEST(TubeAlgebra, EmptyBoundaryIsCommutative) {
  auto fib = load_catalog("fibonacci");
  HomCalculus H(fib);
  auto T = build_tube(H, ObjectWord{});
  auto m = decompose(T);
  EXPECT_EQ(static_cast<int>(m.blocks.size()), fib.rank());
  for (const auto& b : m.blocks) EXPECT_EQ(b.n, 1);
}

TEST(TubeAlgebra, BlockStructure) {
  auto z2 = load_catalog("vec-z2");
  HomCalculus Hz(z2);
  EXPECT_EQ(block_sizes(decompose(build_tube(Hz, one_point()))), (std::vector<int>{1, 1, 1, 1}));

  auto fib = load_catalog("fibonacci");
  HomCalculus Hf(fib);
  auto mf = decompose(build_tube(Hf, one_point()));
  EXPECT_EQ(block_sizes(mf), (std::vector<int>{1, 1, 1, 2}));
  EXPECT_LT(mf.residual, 1e-9);
  EXPECT_LT(mf.star_residual, 1e-9);

  auto ising = load_catalog("ising");
  HomCalculus Hi(ising);
  auto Ti = build_tube(Hi, one_point());
  auto mi = decompose(Ti);
  EXPECT_EQ(mi.blocks.size(), 9u);
  int total = 0;
  for (auto n : block_sizes(mi)) total += n * n;
  EXPECT_EQ(total, Ti.dim);
}

TEST(TubeAlgebra, DecompositionIsSeedIndependentInShape) {
  auto ising = load_catalog("ising");
  HomCalculus H(ising);
  auto T = build_tube(H, one_point());
  EXPECT_EQ(block_sizes(decompose(T, 1)), block_sizes(decompose(T, 99)));
}

TEST(TubeAlgebra, HalfBraidingsFromBlocks) {
  for (const char* name : {"vec-z2", "fibonacci", "ising"}) {
    auto cat = load_catalog(name);
    HomCalculus H(cat);
    auto T = build_tube(H, one_point());
    auto m = decompose(T);
    double sum_d2 = 0.0;
    for (size_t b = 0; b < m.blocks.size(); ++b) {
      CenterObject X = extract_half_braidings(H, T, m, static_cast<int>(b));
      auto rep = check_half_braiding(H, X.hb);
      EXPECT_EQ(rep.unit_defect, 0.0);
      EXPECT_LT(rep.unitarity, 1e-9) << name;
      EXPECT_LT(rep.naturality, 1e-9) << name;
      EXPECT_NEAR(X.d, X.dim_from_units, 1e-9) << name;
      EXPECT_NEAR(std::abs(X.twist), 1.0, 1e-9) << name;
      sum_d2 += X.d * X.d;
    }
    EXPECT_NEAR(sum_d2, cat.D2() * cat.D2(), 1e-8) << name;
  }
}

TEST(TubeAlgebra, FibonacciDoubletIsOnePlusTau) {
  auto fib = load_catalog("fibonacci");
  HomCalculus H(fib);
  auto T = build_tube(H, one_point());
  auto m = decompose(T);
  int t = fib.index_of("tau");
  bool seen = false;
  for (size_t b = 0; b < m.blocks.size(); ++b) {
    if (m.blocks[b].n != 2) continue;
    auto X = extract_half_braidings(H, T, m, static_cast<int>(b));
    EXPECT_EQ(X.n[fib.unit], 1);
    EXPECT_EQ(X.n[t], 1);
    EXPECT_NEAR(X.d, kGolden * kGolden, 1e-12);
    seen = true;
  }
  EXPECT_TRUE(seen);
}

TEST(TubeAlgebra, UnitSwapIsSigmaOnUnit) {
  auto ising = load_catalog("ising");
  HomCalculus H(ising);
  Leg X{{0, 2}};
  Morphism u = unit_swap(H, X);
  Morphism uu = H.compose(HomCalculus::dagger(u), u);
  EXPECT_LT((uu - H.identity(uu.source)).max_abs(), 1e-14);
}
