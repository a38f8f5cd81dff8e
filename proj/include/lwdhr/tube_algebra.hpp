#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lwdhr/hom_calculus.hpp"

namespace lwdhr {

// Sector of the tube: boundary labelings in/out and the strand x wrapping the cylinder.
// Elements of the sector are morphisms (in) (x) x -> x (x) (out).
struct TubeSector {
  int in, out, x;
  Word source, target;
  int offset, size;
};

struct TubeBasisElement {
  int sector;
  int c, row, col;  // block entry of the morphism
};

struct TubeAlgebraTable {
  ObjectWord marked;
  std::vector<std::vector<int>> labelings;  // simple per marked point, orientation already applied
  std::vector<TubeSector> sectors;
  std::vector<TubeBasisElement> basis;
  std::vector<Mat> left;  // left[i](k, j): coefficient of e_k in e_i e_j (e_i glued on top)
  Mat star_matrix;        // column i: coordinates of e_i^*; the involution is antilinear
  Vec unit;
  int dim = 0;

  Vec multiply(const Vec& a, const Vec& b) const;
  Vec star(const Vec& a) const;
  Mat left_matrix(const Vec& a) const;
  Vec basis_vector(int i) const;
  // Sector component of an element as a morphism.
  Morphism component(HomCalculus& H, const Vec& a, int sector) const;
  int find_sector(int in, int out, int x) const;
};

TubeAlgebraTable build_tube(HomCalculus& H, const ObjectWord& marked_points);

struct MatrixUnitBlock {
  int n = 0;
  std::vector<std::pair<int, int>> index;  // (labeling, copy) for each row of the block
  std::vector<std::vector<Vec>> E;         // E[r][s]
  Vec P;
};

struct MatrixUnitSystem {
  std::vector<MatrixUnitBlock> blocks;
  double residual = 0.0;       // worst matrix-unit relation defect
  double star_residual = 0.0;  // worst |E_rs^* - E_sr|
};

// Random self-adjoint central element, eigenvalue clustering, rank-one seeds.
MatrixUnitSystem decompose(const TubeAlgebraTable& table, std::uint64_t seed = 0xC0FFEE,
                           double tol = 1e-9);

// A simple object of the Drinfeld center.
struct CenterObject {
  std::string label;
  std::vector<int> n;  // multiplicity of each simple of C
  HalfBraiding hb;
  double d = 1.0;
  cplx twist = 1.0;
  double dim_from_units = 0.0;  // d_X recovered from the matrix-unit normalization
  double extraction_residual = 0.0;
};

// Half-braiding residuals of a center object.
struct HalfBraidingReport {
  double unit_defect = 0.0;        // |sigma_1 - id|
  double unitarity = 0.0;          // max |sigma_c^dagger sigma_c - 1|
  double naturality = 0.0;         // vertex naturality combined with sigma_{x(x)y} factorization
};

HalfBraidingReport check_half_braiding(HomCalculus& H, const HalfBraiding& hb);

// Requires a single positively oriented marked point; throws HexagonResidualError above tol.
CenterObject extract_half_braidings(HomCalculus& H, const TubeAlgebraTable& table,
                                    const MatrixUnitSystem& units, int block, double tol = 1e-9);

// Unitor identification (X (x) 1 -> 1 (x) X) used as sigma_1.
Morphism unit_swap(HomCalculus& H, const Leg& X);

}  // namespace lwdhr
