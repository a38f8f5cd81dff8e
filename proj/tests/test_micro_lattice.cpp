#include <gtest/gtest.h>

#include "lwdhr/micro_lattice.hpp"

using namespace lwdhr;

namespace {

struct Lattice {
  CategoryData cat;
  HomCalculus H;
  CenterCategory Z;
  MicroLattice L;
  explicit Lattice(const std::string& name) : cat(load_catalog(name)), H(cat), Z(H), L(Z) {}
};

}  // namespace

class MicroRegions : public ::testing::TestWithParam<const char*> {};

TEST_P(MicroRegions, OperatorsAndDimensions) {
  Lattice l(GetParam());
  for (const auto& R : MicroLattice::standard_regions()) {
    MicroReport r = l.L.analyze(R);
    for (const auto& c : r.commutators) EXPECT_EQ(c.residual, 0.0) << R.name << " " << c.first << " " << c.second;
    EXPECT_LE(r.projector, 1e-12) << R.name;
    EXPECT_LE(r.trace_rounding, 1e-8) << R.name;
    EXPECT_LE(r.completeness, 1e-12) << R.name;
    for (const auto& d : r.dimensions) EXPECT_EQ(d.lattice, d.predicted) << R.name << " " << d.sector;
    if (r.holes == 0) EXPECT_LE(r.sigma_unitarity, 1e-12) << R.name;
  }
}

INSTANTIATE_TEST_SUITE_P(Groups, MicroRegions, ::testing::Values("vec-z2", "vec-z3"), [](const auto& info) {
  std::string s = info.param;
  for (auto& c : s)
    if (c == '-') c = '_';
  return s;
});

TEST(MicroLattice, PlaquetteCounts) {
  // N^7 boundary labellings of total charge zero; the empty square adds the N fluxless sectors.
  Lattice l("vec-z3");
  auto regions = MicroLattice::standard_regions();
  MicroReport filled = l.L.analyze(regions[3]);
  ASSERT_EQ(filled.dimensions.size(), 1u);
  EXPECT_EQ(filled.dimensions[0].lattice, 2187);
  MicroReport empty = l.L.analyze(regions[4]);
  EXPECT_EQ(empty.holes, 1);
  EXPECT_EQ(empty.dimensions.back().lattice, 3 * 2187);
  int nonzero = 0;
  for (const auto& d : empty.dimensions)
    if (d.sector != "total" && d.lattice > 0) ++nonzero;
  EXPECT_EQ(nonzero, 3);
}

TEST(MicroLattice, RejectsNonPointed) {
  auto cat = load_catalog("fibonacci");
  HomCalculus H(cat);
  CenterCategory Z(H);
  EXPECT_THROW(MicroLattice{Z}, ConfigError);
}

TEST(MicroLattice, RegionValidation) {
  Lattice l("vec-z2");
  MicroRegion bad{"dangling face", {{0, 0}, {1, 0}}, {{{0, 0}, {1, 0}}}, {{0, 0}}};
  EXPECT_THROW(l.L.analyze(bad), GeometryError);
  MicroRegion diagonal{"diagonal", {{0, 0}, {1, 1}}, {{{0, 0}, {1, 1}}}, {}};
  EXPECT_THROW(l.L.analyze(diagonal), GeometryError);
}
