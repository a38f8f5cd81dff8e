#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lwdhr/errors.hpp"

namespace lwdhr {

// Face of Z^2 labelled by its bottom-left vertex.
struct Face {
  int x, y;
  auto operator<=>(const Face&) const = default;
};

// Edge shared by two adjacent faces: vertical edges sit at x between (x-1,y) and (x,y);
// horizontal edges sit at y between (x,y-1) and (x,y).
struct Edge {
  int x, y;
  bool vertical;
  auto operator<=>(const Edge&) const = default;
};

bool adjacent(const Face& a, const Face& b);
Edge shared_edge(const Face& a, const Face& b);
std::vector<Edge> face_edges(const Face& f);

// A region: faces carrying B_f, plus the edges it contains. Punctures are edges of the lattice
// not contained in the region but bordered by it.
struct Region {
  std::set<Face> faces;
  std::set<Edge> edges;
  bool contains(const Region& other) const;
  bool disjoint(const Region& other) const;
};

class Link {
 public:
  // Validates the link clauses; throws GeometryError naming the first violated one.
  explicit Link(std::vector<Face> faces);

  const std::vector<Face>& faces() const { return faces_; }
  Edge initial() const { return shared_edge(faces_[0], faces_[1]); }
  Edge final() const { return shared_edge(faces_[faces_.size() - 2], faces_.back()); }
  std::vector<Face> bulk() const;
  // The link region: bulk faces and every edge of a link face except the two punctures.
  Region region() const;

 private:
  std::vector<Face> faces_;
};

Link make_link(const std::vector<Face>& faces);
bool composable(const Link& first, const Link& second);
// second ∧ first: runs along `second` and continues into `first`.
Link compose_links(const Link& first, const Link& second);

std::string describe(const Edge& e);

// Punctures known to a geometry, with the data fixing the global anchor.
struct Puncture {
  std::string name;
  Edge edge;
  int depth;     // layer of the anchor tail; deeper tails pass behind shallower ones
  int crossing;  // x at which the tail crosses the fiducial row; sorts the global order
};

// A region with an ordered puncture list (the anchor order) and the punctures it fills in.
struct Placement {
  std::vector<int> punctures;
  std::vector<int> filled;
  std::string label;
};

// The fiducial chain L_n, the right chain L'_n (translated up 2, left 5), the bridge links Q_n
// and the isotopy regions E_n, truncated at a finite depth.
class FiducialGeometry {
 public:
  explicit FiducialGeometry(int depth);

  int depth() const { return depth_; }
  const Link& L(int n) const { return L_.at(n); }
  const Link& Lp(int n) const { return Lp_.at(n); }
  const Link& Q(int n) const { return Q_.at(n); }
  Link K(int n) const { return compose_links(L(n), Q(n + 1)); }
  Link Kp(int n) const { return compose_links(Q(n), Lp(n)); }
  // Composite of L_m..L_n along the fiducial chain.
  Link chain_segment(int m, int n) const;
  const Region& E(int n) const { return E_.at(n); }

  const std::vector<Puncture>& punctures() const { return punctures_; }
  int puncture_at(const Edge& e) const;  // -1 if none
  int e(int k) const { return puncture_at({-6 * k - 1, 0, true}); }
  int ep(int k) const { return puncture_at({-6 * k - 6, 2, true}); }
  int origin() const { return origin_; }
  // Positions in the global anchor order.
  const std::vector<int>& order() const { return order_; }
  int position(int puncture) const { return pos_.at(puncture); }

  // Placement of a link: endpoints in anchor order plus the registered punctures it fills in.
  Placement link_placement(const Link& L) const;
  // Placement of a general region with given punctures in anchor order.
  Placement region_placement(const Region& R, const std::vector<int>& punctures) const;

  Region link_union(const std::vector<Link>& links) const;

 private:
  void add_puncture(const std::string& name, const Edge& e, int depth, int crossing);

  int depth_;
  std::map<int, Link> L_, Lp_, Q_;
  std::map<int, Region> E_;
  std::vector<Puncture> punctures_;
  std::map<Edge, int> by_edge_;
  std::vector<int> order_;
  std::map<int, int> pos_;
  int origin_ = -1;
};

// Simple isotopy support check: both links inside E, same endpoints, E punctured exactly there,
// and explicit gluing witnesses C, C' with E = link region glued to the witness.
struct IsotopyWitness {
  Region C, Cp;
};
void validate_simple_isotopy(const Link& L, const Link& Lp, const Region& E, const IsotopyWitness& w);

// Bridge from a chain C to a chain C': links Q_n with Q_{n+1} ^ L_n and L'_n ^ Q_n isotopic
// inside E_n. Entries from `start` up to the truncation.
struct Bridge {
  std::map<int, Link> C, Cp, Q;
  std::map<int, Region> E;
  int start = 1;
};

// The bridge from the fiducial chain to the right chain.
Bridge fiducial_bridge(const FiducialGeometry& g);

// Bridge clauses 1, 2, 3 and 5 on the truncated window; throws GeometryError.
void validate_bridge(const Bridge& b);
void validate_bridge(const FiducialGeometry& g);

}  // namespace lwdhr
