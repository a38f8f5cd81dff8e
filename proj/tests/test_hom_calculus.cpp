#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lwdhr/hom_calculus.hpp"

using namespace lwdhr;

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

Morphism random_morphism(HomCalculus& H, const Word& s, const Word& t, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Morphism m = H.zero(s, t);
  for (auto& b : m.blocks)
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) b(i, j) = cplx(g(rng), g(rng));
  return m;
}

// Count of c -> x1 ... xn trees straight from N, as an oracle for hom_dim.
int tree_count(const CategoryData& cat, const std::vector<int>& xs, int c) {
  std::vector<int> cur(cat.rank(), 0);
  cur[cat.unit] = 1;
  for (int x : xs) {
    std::vector<int> next(cat.rank(), 0);
    for (int e = 0; e < cat.rank(); ++e)
      for (int f = 0; f < cat.rank(); ++f) next[f] += cur[e] * cat.N(e, x, f);
    cur = next;
  }
  return cur[c];
}

}  // namespace

TEST(HomCalculus, HomDimensions) {
  auto fib = load_catalog("fibonacci");
  HomCalculus H(fib);
  int t = fib.index_of("tau");
  EXPECT_EQ(H.hom_dim(simple_word({t, t}), simple_word({t, t})), 2);
  EXPECT_EQ(H.hom_dim(Word{}, Word{}), 1);
  EXPECT_EQ(H.hom_dim(ObjectWord{{{t, 1}}}, ObjectWord{{{t, -1}}}), 1);

  auto ising = load_catalog("ising");
  HomCalculus I(ising);
  int s = ising.index_of("sigma");
  EXPECT_EQ(I.hom_dim(simple_word({s, s}), simple_word({s, s})), 2);
  EXPECT_THROW(I.hom_dim(simple_word({7}), simple_word({s})), UnknownLabel);

  std::vector<int> w{s, s, s, s};
  int expect = 0;
  for (int c = 0; c < ising.rank(); ++c) expect += tree_count(ising, w, c) * tree_count(ising, w, c);
  EXPECT_EQ(I.hom_dim(simple_word(w), simple_word(w)), expect);
}

TEST(HomCalculus, IdentityLaws) {
  auto fib = load_catalog("fibonacci");
  HomCalculus H(fib);
  std::mt19937 rng(1);
  int t = fib.index_of("tau");
  Word w = simple_word({t, t, t});
  Morphism f = random_morphism(H, w, w, rng);
  EXPECT_LE((H.compose(H.identity(w), f) - f).max_abs(), 1e-14);
  Morphism g = H.tensor(H.identity({}), f);
  EXPECT_TRUE(g.same_shape(f));
  EXPECT_LE((g - f).max_abs(), 1e-14);
  EXPECT_THROW(H.compose(f, H.identity(simple_word({t}))), ShapeMismatch);
}

TEST(HomCalculus, FibonacciVacuumChannelProjector) {
  auto fib = load_catalog("fibonacci");
  HomCalculus H(fib);
  int t = fib.index_of("tau");
  Morphism v = H.vertex(t, t, fib.unit);
  Morphism P = H.compose(v, HomCalculus::dagger(v));
  EXPECT_LE((HomCalculus::dagger(P) - P).max_abs(), 1e-15);
  EXPECT_LE((H.compose(P, P) - P).max_abs(), 1e-15);
  EXPECT_NEAR(std::abs(H.trace_inner_product(P, P) - 1.0), 0.0, 1e-14);
}

TEST(HomCalculus, TraceInnerProduct) {
  for (const auto& name : catalog_names()) {
    auto cat = load_catalog(name);
    HomCalculus H(cat);
    for (int a = 0; a < cat.rank(); ++a) {
      Morphism id = H.identity(simple_word({a}));
      EXPECT_NEAR(std::abs(H.trace_inner_product(id, id) - cat.d[a]), 0.0, 1e-14);
    }
  }
  auto fib = load_catalog("fibonacci");
  HomCalculus H(fib);
  int t = fib.index_of("tau");
  Morphism v1 = H.vertex(t, t, fib.unit), vt = H.vertex(t, t, t);
  Morphism P1 = H.compose(v1, HomCalculus::dagger(v1));
  Morphism Pt = H.compose(vt, HomCalculus::dagger(vt));
  EXPECT_NEAR(std::abs(H.trace_inner_product(P1, Pt)), 0.0, 1e-15);
}

TEST(HomCalculus, SkeinInnerProduct) {
  auto fib = load_catalog("fibonacci");
  HomCalculus H(fib);
  int t = fib.index_of("tau");
  Morphism id1 = H.identity(simple_word({fib.unit, fib.unit}));
  EXPECT_NEAR(std::abs(H.skein_inner_product(id1, id1) - 1.0), 0.0, 1e-15);
  // tr(id_{tau tau}) = d_1 + d_tau = golden^2, divided by sqrt(d_tau^4) = golden^2.
  Morphism idt = H.identity(simple_word({t, t}));
  double oracle = (1.0 + kGolden) / (kGolden * kGolden);
  EXPECT_NEAR(std::abs(H.skein_inner_product(idt, idt) - oracle), 0.0, 1e-14);
  Morphism v1 = H.vertex(t, t, fib.unit), vt = H.vertex(t, t, t);
  EXPECT_NEAR(std::abs(H.skein_inner_product(H.compose(v1, HomCalculus::dagger(v1)),
                                             H.compose(vt, HomCalculus::dagger(vt)))),
              0.0, 1e-15);
}

TEST(HomCalculus, DottedLineWeights) {
  auto z2 = load_catalog("vec-z2");
  HomCalculus H(z2);
  auto terms = H.dotted_line_expand(0, Word{});
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_DOUBLE_EQ(terms[0].weight, 0.5);
  EXPECT_DOUBLE_EQ(terms[1].weight, 0.5);

  auto fib = load_catalog("fibonacci");
  HomCalculus F(fib);
  auto ft = F.dotted_line_expand(0, Word{});
  double D2 = 1.0 + kGolden * kGolden;
  EXPECT_NEAR(ft[fib.unit].weight, 1.0 / D2, 1e-15);
  EXPECT_NEAR(ft[fib.index_of("tau")].weight, kGolden / D2, 1e-15);
  // Closing the dotted line into a loop: sum of weight * d_a.
  double loop = 0.0;
  for (const auto& term : ft) loop += term.weight * fib.d[term.label];
  EXPECT_NEAR(loop, 1.0, 1e-15);
  EXPECT_THROW(F.dotted_line_expand(3, Word{}), ShapeMismatch);
}

TEST(HomCalculus, ZigzagsAndLoops) {
  for (const auto& name : catalog_names()) {
    auto cat = load_catalog(name);
    HomCalculus H(cat);
    for (int x = 0; x < cat.rank(); ++x) {
      int xb = cat.dual[x];
      Word X = simple_word({x}), Xb = simple_word({xb});
      Morphism z1 = H.compose(H.pad(X, H.ev(x), {}), H.pad({}, H.coev(x), X));
      EXPECT_LE((z1 - H.identity(X)).max_abs(), 1e-12) << name;
      Morphism z2 = H.compose(H.pad({}, H.ev(x), Xb), H.pad(Xb, H.coev(x), {}));
      EXPECT_LE((z2 - H.identity(Xb)).max_abs(), 1e-12) << name;
      Morphism loop = H.compose(H.ev_right(x), H.coev(x));
      EXPECT_NEAR(std::abs(loop.blocks[cat.unit](0, 0) - cat.d[x]), 0.0, 1e-12);
    }
  }
}

TEST(HomCalculusProperties, AssociativityAndDagger) {
  std::mt19937 rng(7);
  auto ising = load_catalog("ising");
  HomCalculus H(ising);
  int s = ising.index_of("sigma"), p = ising.index_of("psi");
  Word w = simple_word({s, s, p});
  for (int trial = 0; trial < 5; ++trial) {
    Morphism f = random_morphism(H, w, w, rng), g = random_morphism(H, w, w, rng),
             h = random_morphism(H, w, w, rng);
    Morphism lhs = H.compose(h, H.compose(g, f)), rhs = H.compose(H.compose(h, g), f);
    EXPECT_LE((lhs - rhs).max_abs(), 1e-10 * (1.0 + lhs.max_abs()));
    Morphism d1 = HomCalculus::dagger(H.compose(g, f));
    Morphism d2 = H.compose(HomCalculus::dagger(f), HomCalculus::dagger(g));
    EXPECT_LE((d1 - d2).max_abs(), 1e-12 * (1.0 + d1.max_abs()));
  }
}

TEST(HomCalculusProperties, GramMatricesPositive) {
  for (const auto& name : catalog_names()) {
    auto cat = load_catalog(name);
    HomCalculus H(cat);
    std::vector<int> letters;
    for (int a = 0; a < cat.rank(); ++a) letters.push_back(a);
    Word w = simple_word(letters);
    // Gram matrix of the elementary basis of End(w).
    std::vector<Morphism> basis;
    for (int c = 0; c < cat.rank(); ++c)
      for (int i = 0; i < H.dim(c, w); ++i)
        for (int j = 0; j < H.dim(c, w); ++j) {
          Morphism e = H.zero(w, w);
          e.blocks[c](i, j) = 1.0;
          basis.push_back(e);
        }
    Mat G(basis.size(), basis.size());
    for (size_t i = 0; i < basis.size(); ++i)
      for (size_t j = 0; j < basis.size(); ++j) G(i, j) = H.trace_inner_product(basis[i], basis[j]);
    Eigen::SelfAdjointEigenSolver<Mat> es(G);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << name;
  }
}

TEST(HomCalculusProperties, TensorIsAssociativeAndFunctorial) {
  std::mt19937 rng(11);
  for (const auto& name : {"fibonacci", "ising"}) {
    auto cat = load_catalog(name);
    HomCalculus H(cat);
    int x = cat.rank() - 1, y = 1;
    Word A = simple_word({x, y}), B = simple_word({y}), C = simple_word({x, x});
    Morphism f = random_morphism(H, A, A, rng), g = random_morphism(H, B, B, rng),
             h = random_morphism(H, C, C, rng);
    Morphism l = H.tensor(H.tensor(f, g), h), r = H.tensor(f, H.tensor(g, h));
    EXPECT_LE((l - r).max_abs(), 1e-10 * (1.0 + l.max_abs())) << name;
    Morphism f2 = random_morphism(H, A, A, rng), g2 = random_morphism(H, B, B, rng);
    Morphism lhs = H.compose(H.tensor(f, g), H.tensor(f2, g2));
    Morphism rhs = H.tensor(H.compose(f, f2), H.compose(g, g2));
    EXPECT_LE((lhs - rhs).max_abs(), 1e-10 * (1.0 + lhs.max_abs())) << name;
    // tr(f (x) g) = tr f tr g
    cplx t1 = H.trace(H.tensor(f, h)), t2 = H.trace(f) * H.trace(h);
    EXPECT_LE(std::abs(t1 - t2), 1e-10 * (1.0 + std::abs(t2))) << name;
    // Semisimple legs behave like direct sums.
    Leg mixed{{0, x}};
    Word M{mixed, simple_leg(x)};
    Morphism m = random_morphism(H, M, M, rng);
    Morphism lm = H.tensor(H.tensor(m, g), f), rm = H.tensor(m, H.tensor(g, f));
    EXPECT_LE((lm - rm).max_abs(), 1e-10 * (1.0 + lm.max_abs())) << name;
  }
}
