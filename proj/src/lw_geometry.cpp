#include "lwdhr/lw_geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>

namespace lwdhr {

bool adjacent(const Face& a, const Face& b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y) == 1; }

Edge shared_edge(const Face& a, const Face& b) {
  if (!adjacent(a, b)) throw GeometryError("faces are not adjacent");
  if (a.y == b.y) return {std::max(a.x, b.x), a.y, true};
  return {a.x, std::max(a.y, b.y), false};
}

std::vector<Edge> face_edges(const Face& f) {
  return {{f.x, f.y, true}, {f.x + 1, f.y, true}, {f.x, f.y, false}, {f.x, f.y + 1, false}};
}

bool Region::contains(const Region& o) const {
  return std::includes(faces.begin(), faces.end(), o.faces.begin(), o.faces.end()) &&
         std::includes(edges.begin(), edges.end(), o.edges.begin(), o.edges.end());
}

bool Region::disjoint(const Region& o) const {
  for (const auto& f : o.faces)
    if (faces.count(f)) return false;
  for (const auto& e : o.edges)
    if (edges.count(e)) return false;
  return true;
}

std::string describe(const Edge& e) {
  return std::string(e.vertical ? "v(" : "h(") + std::to_string(e.x) + "," + std::to_string(e.y) + ")";
}

namespace {

bool collinear(const Face& a, const Face& b, const Face& c, const Face& d) {
  return (a.x == b.x && b.x == c.x && c.x == d.x) || (a.y == b.y && b.y == c.y && c.y == d.y);
}

// Region spanned by a face set with the given puncture edges removed; bulk faces are those whose
// four edges all survive.
Region punctured_region(const std::vector<Face>& faces, const std::set<Edge>& holes) {
  Region R;
  for (const auto& f : faces)
    for (const auto& e : face_edges(f))
      if (!holes.count(e)) R.edges.insert(e);
  for (const auto& f : faces) {
    bool all = true;
    for (const auto& e : face_edges(f)) all = all && R.edges.count(e);
    if (all) R.faces.insert(f);
  }
  return R;
}

bool face_connected(const std::set<Face>& S) {
  if (S.empty()) return true;
  std::set<Face> seen{*S.begin()};
  std::queue<Face> q;
  q.push(*S.begin());
  while (!q.empty()) {
    Face f = q.front();
    q.pop();
    for (Face g : {Face{f.x + 1, f.y}, Face{f.x - 1, f.y}, Face{f.x, f.y + 1}, Face{f.x, f.y - 1}})
      if (S.count(g) && seen.insert(g).second) q.push(g);
  }
  return seen.size() == S.size();
}

}  // namespace

Link::Link(std::vector<Face> faces) : faces_(std::move(faces)) {
  const auto n = faces_.size();
  if (n < 5) throw GeometryError("link must consist of at least five faces");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (faces_[i] == faces_[j]) throw GeometryError("link faces must be distinct");
      bool adj = adjacent(faces_[i], faces_[j]);
      if (adj != (j == i + 1)) throw GeometryError("faces f_i, f_j must be adjacent iff |i-j| <= 1");
    }
  if (!collinear(faces_[0], faces_[1], faces_[2], faces_[3]))
    throw GeometryError("first four faces must be collinear");
  if (!collinear(faces_[n - 4], faces_[n - 3], faces_[n - 2], faces_[n - 1]))
    throw GeometryError("last four faces must be collinear");
}

std::vector<Face> Link::bulk() const { return {faces_.begin() + 2, faces_.end() - 2}; }

Region Link::region() const { return punctured_region(faces_, {initial(), final()}); }

Link make_link(const std::vector<Face>& faces) { return Link(faces); }

bool composable(const Link& first, const Link& second) { return first.initial() == second.final(); }

Link compose_links(const Link& first, const Link& second) {
  if (!composable(first, second)) throw GeometryError("links are not composable: initial edge of the first must be the final edge of the second");
  // The two faces around the shared edge appear once.
  std::vector<Face> f = second.faces();
  f.insert(f.end(), first.faces().begin() + 2, first.faces().end());
  return Link(std::move(f));
}

FiducialGeometry::FiducialGeometry(int depth) : depth_(depth) {
  if (depth < 3) throw TruncationError("geometry depth must be at least 3");
  const int top = depth + 2;
  for (int n = 1; n <= top; ++n) {
    std::vector<Face> f, fp, q;
    for (int i = 0; i < 8; ++i) {
      f.push_back({-6 * n - 2 + i, 0});
      fp.push_back({-6 * n - 7 + i, 2});
    }
    L_.emplace(n, Link(f));
    Lp_.emplace(n, Link(fp));
    // Q_n runs from the final puncture of L'_n down to the initial puncture of L_{n-1}.
    const int b = -6 * (n - 1);
    q = {{b - 7, 2}, {b - 6, 2}, {b - 5, 2}, {b - 4, 2}, {b - 4, 1}, {b - 4, 0}, {b - 3, 0}, {b - 2, 0}, {b - 1, 0}};
    Q_.emplace(n, Link(q));
  }
  for (int n = 1; n <= top - 1; ++n) {
    std::vector<Face> faces;
    for (int x = -6 * n - 7; x <= -6 * n + 2; ++x) faces.push_back({x, 2});
    for (int x = -6 * n - 4; x <= -6 * n + 2; ++x) faces.push_back({x, 1});
    for (int x = -6 * n - 4; x <= -6 * n + 5; ++x) faces.push_back({x, 0});
    E_.emplace(n, punctured_region(faces, {Lp(n).initial(), L(n).final()}));
  }
  // Fiducial punctures have straight tails; right-chain tails run east along the corridor to the
  // column where Q_{k+1} descends, then down behind the fiducial row.
  for (int k = 0; k <= top; ++k) {
    Edge e = k < top ? L(k + 1).final() : L(top).initial();
    add_puncture("e" + std::to_string(k), e, 0, e.x);
  }
  for (int k = 0; k <= top; ++k) {
    Edge e = k < top ? Lp(k + 1).final() : Lp(top).initial();
    add_puncture("e'" + std::to_string(k), e, 2, e.x + 2);
  }
  origin_ = static_cast<int>(punctures_.size());
  add_puncture("o", {20, 0, true}, 0, 20);
  order_.resize(punctures_.size());
  for (size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
  std::sort(order_.begin(), order_.end(),
            [&](int a, int b) { return punctures_[a].crossing < punctures_[b].crossing; });
  for (size_t i = 0; i < order_.size(); ++i) pos_[order_[i]] = static_cast<int>(i);
}

void FiducialGeometry::add_puncture(const std::string& name, const Edge& e, int depth, int crossing) {
  by_edge_[e] = static_cast<int>(punctures_.size());
  punctures_.push_back({name, e, depth, crossing});
}

int FiducialGeometry::puncture_at(const Edge& e) const {
  auto it = by_edge_.find(e);
  return it == by_edge_.end() ? -1 : it->second;
}

Link FiducialGeometry::chain_segment(int m, int n) const {
  Link acc = L(m);
  for (int k = m + 1; k <= n; ++k) acc = compose_links(acc, L(k));
  return acc;
}

Placement FiducialGeometry::region_placement(const Region& R, const std::vector<int>& punctures) const {
  Placement P;
  P.punctures = punctures;
  for (size_t i = 0; i + 1 < punctures.size(); ++i)
    if (position(punctures[i]) > position(punctures[i + 1]))
      throw PlacementError("puncture order of the region disagrees with the anchor order");
  for (size_t i = 0; i < punctures_.size(); ++i)
    if (R.edges.count(punctures_[i].edge)) P.filled.push_back(static_cast<int>(i));
  for (int p : punctures)
    if (std::find(P.filled.begin(), P.filled.end(), p) != P.filled.end())
      throw PlacementError("puncture " + punctures_[p].name + " lies inside the region");
  return P;
}

Placement FiducialGeometry::link_placement(const Link& L) const {
  int p = puncture_at(L.initial()), q = puncture_at(L.final());
  if (p < 0 || q < 0) throw PlacementError("link endpoints are not registered punctures");
  Placement P = region_placement(L.region(), {p, q});
  P.label = punctures_[p].name + "->" + punctures_[q].name;
  return P;
}

Region FiducialGeometry::link_union(const std::vector<Link>& links) const {
  Region R;
  for (const auto& L : links) {
    Region r = L.region();
    R.faces.insert(r.faces.begin(), r.faces.end());
    R.edges.insert(r.edges.begin(), r.edges.end());
  }
  return R;
}

void validate_simple_isotopy(const Link& L, const Link& Lp, const Region& E, const IsotopyWitness& w) {
  if (L.initial() != Lp.initial() || L.final() != Lp.final())
    throw GeometryError("isotopic links must share both endpoints");
  if (!E.contains(L.region()) || !E.contains(Lp.region())) throw GeometryError("region must contain both link regions");
  if (E.edges.count(L.initial()) || E.edges.count(L.final())) throw GeometryError("region must be punctured at the link endpoints");
  auto check = [&](const Link& K, const Region& C) {
    std::set<Face> link_faces(K.faces().begin(), K.faces().end());
    for (const auto& f : C.faces) {
      if (link_faces.count(f)) throw GeometryError("witness region overlaps the link");
      if (!E.faces.count(f)) throw GeometryError("witness region leaves E");
    }
    if (!face_connected(C.faces)) throw GeometryError("witness region is not connected");
    for (const auto& f : E.faces)
      if (!link_faces.count(f) && !C.faces.count(f)) throw GeometryError("E is not the link region glued to the witness");
    // The gluing interface: edges shared by the link and the witness form one simple path.
    std::set<Edge> shared;
    for (const auto& f : K.faces())
      for (const auto& g : C.faces)
        if (adjacent(f, g)) shared.insert(shared_edge(f, g));
    std::map<std::pair<int, int>, int> degree;
    for (const auto& e : shared) {
      ++degree[{e.x, e.y}];
      ++degree[e.vertical ? std::make_pair(e.x, e.y + 1) : std::make_pair(e.x + 1, e.y)];
    }
    int ends = 0;
    for (const auto& [v, d] : degree) {
      if (d > 2) throw GeometryError("gluing interface branches");
      ends += d == 1;
    }
    if (shared.empty() || ends != 2 || degree.size() != shared.size() + 1)
      throw GeometryError("gluing interface is not a single dual path");
  };
  check(L, w.C);
  check(Lp, w.Cp);
}

Bridge fiducial_bridge(const FiducialGeometry& g) {
  Bridge b;
  for (int n = 1; n <= g.depth() + 2; ++n) {
    b.C.emplace(n, g.L(n));
    b.Cp.emplace(n, g.Lp(n));
    b.Q.emplace(n, g.Q(n));
    if (n <= g.depth() + 1) b.E.emplace(n, g.E(n));
  }
  return b;
}

void validate_bridge(const Bridge& b) {
  int checked = 0;
  for (int n = b.start;; ++n) {
    if (!b.C.count(n) || !b.Cp.count(n) || !b.Q.count(n) || !b.Q.count(n + 1) || !b.E.count(n)) break;
    const Link &L = b.C.at(n), &Lp = b.Cp.at(n);
    if (!composable(L, b.Q.at(n + 1))) throw GeometryError("bridge clause 1: L_n and Q_{n+1} not composable");
    if (!composable(b.Q.at(n), Lp)) throw GeometryError("bridge clause 2: Q_n and L'_n not composable");
    const Region& E = b.E.at(n);
    Link K = compose_links(L, b.Q.at(n + 1)), Kp = compose_links(b.Q.at(n), Lp);
    auto minus = [&](const Link& k) {
      Region C;
      std::set<Face> kf(k.faces().begin(), k.faces().end());
      for (const auto& f : E.faces)
        if (!kf.count(f)) C.faces.insert(f);
      return C;
    };
    validate_simple_isotopy(K, Kp, E, {minus(K), minus(Kp)});
    for (int k = 1; k <= n - 2; ++k)
      if (!E.disjoint(b.C.at(k).region()) || !E.disjoint(b.Cp.at(k).region()))
        throw GeometryError("bridge clause 5: E_n meets the first n-2 links of a chain");
    ++checked;
  }
  if (checked == 0) throw GeometryError("bridge has no complete step in the window");
}

void validate_bridge(const FiducialGeometry& g) { validate_bridge(fiducial_bridge(g)); }

}  // namespace lwdhr
