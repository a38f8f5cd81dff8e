#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "lwdhr/center.hpp"

namespace lwdhr {

// Explicit lattice Hilbert spaces for Vec(G), G finite abelian with trivial associator.
// Every vertex carries C(a (x) b -> c (x) d) with legs (west, south) in and (north, east) out;
// edges are directed right and up.
struct Vertex {
  int x, y;
  auto operator<=>(const Vertex&) const = default;
};

enum Dir { West = 0, South = 1, North = 2, East = 3 };

struct HalfEdge {
  Vertex v;
  Dir dir;
  auto operator<=>(const HalfEdge&) const = default;
};

struct MicroRegion {
  std::string name;
  std::vector<Vertex> vertices;
  std::vector<std::pair<Vertex, Vertex>> edges;  // (tail, head): head is one step right or up
  std::vector<Vertex> faces;                     // bottom-left corners
};

// Validates the subcomplex clauses (endpoints and face edges present); throws GeometryError.
void validate_region(const MicroRegion& R);

struct CommutatorCheck {
  std::string first, second;
  double residual = 0.0;
};

struct SectorDimension {
  std::string sector;  // "total" for a disk, else the center label on the hole
  long lattice = 0;
  long predicted = 0;
};

struct MicroReport {
  std::string region;
  int holes = 0;
  int boundary_points = 0;
  std::vector<CommutatorCheck> commutators;
  double projector = 0.0;      // max over faces of |B^2 - B| and |B - B^dagger|
  double trace_rounding = 0.0;  // distance of the lattice traces from integers
  double completeness = 0.0;    // |sum_X P^X - 1| on the skein subspace of a region with a hole
  std::vector<SectorDimension> dimensions;
  double sigma_unitarity = -1.0;  // disks only; -1 when not evaluated
  bool dimensions_match() const;
};

class MicroLattice {
 public:
  // Throws ConfigError unless the center comes from Vec(G) with G abelian and trivial F.
  explicit MicroLattice(CenterCategory& Z);

  int order() const { return n_; }
  MicroReport analyze(const MicroRegion& R);

  // Vertices <= 5: a vertex, an edge, an L-shaped path, a filled plaquette, an empty square,
  // a plaquette with a tail and an empty square with a tail.
  static std::vector<MicroRegion> standard_regions();

 private:
  using Labels = std::vector<int>;
  // Operator on an ordered half-edge list: image of a basis labelling as (labelling, coefficient) terms.
  struct LegOp {
    std::string name;
    std::vector<HalfEdge> legs;
    std::function<std::vector<std::pair<Labels, cplx>>(const Labels&)> act;
  };

  LegOp edge_constraint(const std::pair<Vertex, Vertex>& e) const;
  // (1/|G|) sum_g w(g) loop_g times the edge constraints of the square.
  LegOp loop_projector(const Vertex& corner, const std::vector<cplx>& weights, const std::string& name) const;
  // Matrix of `op` on the product basis of `legs`, a superset of op.legs; vertex constraints are not
  // imposed, so identities checked here hold a fortiori on the vertex spaces.
  Eigen::SparseMatrix<cplx> matrix(const LegOp& op, const std::vector<HalfEdge>& legs) const;
  std::vector<HalfEdge> union_legs(const LegOp& a, const LegOp& b) const;

  int mult(int a, int b) const { return mult_[a * n_ + b]; }
  int inv(int a) const { return inv_[a]; }
  // Predicted dim C(s -> R^{(x) k}), R the sum of all simples.
  long hom_count(int s, int k) const;

  CenterCategory& Z_;
  int n_ = 0;
  int unit_ = 0;
  std::vector<int> mult_, inv_;
};

}  // namespace lwdhr
