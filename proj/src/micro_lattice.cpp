#include "lwdhr/micro_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace lwdhr {

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;

double max_entry(const SpMat& m) {
  double r = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

SpMat identity(int n) {
  SpMat I(n, n);
  I.setIdentity();
  return I;
}

bool unit_step(const Vertex& a, const Vertex& b) {
  return (b.x == a.x + 1 && b.y == a.y) || (b.x == a.x && b.y == a.y + 1);
}

// Half-edges of an edge: the tail's outgoing leg and the head's incoming leg.
std::pair<HalfEdge, HalfEdge> legs_of(const std::pair<Vertex, Vertex>& e) {
  const bool horizontal = e.second.y == e.first.y;
  return {{e.first, horizontal ? East : North}, {e.second, horizontal ? West : South}};
}

std::string describe(const Vertex& v) { return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")"; }

std::string describe(const std::pair<Vertex, Vertex>& e) { return describe(e.first) + "-" + describe(e.second); }

}  // namespace

bool MicroReport::dimensions_match() const {
  return std::all_of(dimensions.begin(), dimensions.end(),
                     [](const SectorDimension& d) { return d.lattice == d.predicted; });
}

void validate_region(const MicroRegion& R) {
  std::set<Vertex> V(R.vertices.begin(), R.vertices.end());
  if (V.size() != R.vertices.size()) throw GeometryError(R.name + ": repeated vertex");
  std::set<std::pair<Vertex, Vertex>> E;
  for (const auto& e : R.edges) {
    if (!unit_step(e.first, e.second)) throw GeometryError(R.name + ": edge " + describe(e) + " is not a unit step right or up");
    if (!V.count(e.first) || !V.count(e.second)) throw GeometryError(R.name + ": edge " + describe(e) + " leaves the region");
    if (!E.insert(e).second) throw GeometryError(R.name + ": repeated edge");
  }
  for (const auto& f : R.faces) {
    const Vertex a = f, b{f.x + 1, f.y}, c{f.x, f.y + 1}, d{f.x + 1, f.y + 1};
    for (const auto& e : {std::make_pair(a, b), std::make_pair(b, d), std::make_pair(c, d), std::make_pair(a, c)})
      if (!E.count(e)) throw GeometryError(R.name + ": face " + describe(f) + " misses edge " + describe(e));
  }
}

MicroLattice::MicroLattice(CenterCategory& Z) : Z_(Z) {
  const CategoryData& cat = Z.base();
  n_ = cat.rank();
  mult_.assign(n_ * n_, -1);
  inv_.assign(n_, -1);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c) {
        const int m = cat.N(a, b, c);
        if (m > 1 || (m == 1 && mult_[a * n_ + b] >= 0))
          throw ConfigError("micro lattice needs a pointed category: " + cat.name);
        if (m == 1) mult_[a * n_ + b] = c;
      }
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) {
      if (mult_[a * n_ + b] < 0) throw ConfigError("micro lattice needs a pointed category: " + cat.name);
      if (mult(a, b) != mult(b, a)) throw ConfigError("micro lattice needs an abelian group: " + cat.name);
    }
  unit_ = -1;
  for (int a = 0; a < n_ && unit_ < 0; ++a) {
    bool u = true;
    for (int b = 0; b < n_; ++b) u = u && mult(a, b) == b;
    if (u) unit_ = a;
  }
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      if (mult(a, b) == unit_) inv_[a] = b;
  for (const auto& [key, value] : cat.F)
    if (std::abs(value - cplx(1.0)) > 1e-12) throw ConfigError("micro lattice needs a trivial associator: " + cat.name);
}

long MicroLattice::hom_count(int s, int k) const {
  // v[c] = number of k-tuples of simples whose product is c.
  std::vector<long> v(n_, 0);
  v[unit_] = 1;
  for (int i = 0; i < k; ++i) {
    std::vector<long> w(n_, 0);
    for (int c = 0; c < n_; ++c)
      for (int a = 0; a < n_; ++a) w[mult(c, a)] += v[c];
    v = std::move(w);
  }
  return v[s];
}

MicroLattice::LegOp MicroLattice::edge_constraint(const std::pair<Vertex, Vertex>& e) const {
  auto [t, h] = legs_of(e);
  return {"A" + describe(e), {t, h}, [](const Labels& l) {
            std::vector<std::pair<Labels, cplx>> out;
            if (l[0] == l[1]) out.push_back({l, 1.0});
            return out;
          }};
}

MicroLattice::LegOp MicroLattice::loop_projector(const Vertex& f, const std::vector<cplx>& w, const std::string& name) const {
  const Vertex a = f, b{f.x + 1, f.y}, c{f.x, f.y + 1}, d{f.x + 1, f.y + 1};
  // bottom, right, top, left; a counterclockwise loop runs along the first two edge directions and
  // against the last two.
  std::vector<HalfEdge> legs;
  for (const auto& e : {std::make_pair(a, b), std::make_pair(b, d), std::make_pair(c, d), std::make_pair(a, c)}) {
    auto [t, h] = legs_of(e);
    legs.push_back(t);
    legs.push_back(h);
  }
  const int n = n_;
  return {name, legs, [this, w, n](const Labels& l) {
            std::vector<std::pair<Labels, cplx>> out;
            for (int e = 0; e < 4; ++e)
              if (l[2 * e] != l[2 * e + 1]) return out;
            for (int g = 0; g < n; ++g) {
              if (std::abs(w[g]) == 0.0) continue;
              Labels m = l;
              for (int e = 0; e < 4; ++e) {
                const int s = e < 2 ? g : inv(g);
                m[2 * e] = mult(l[2 * e], s);
                m[2 * e + 1] = mult(l[2 * e + 1], s);
              }
              out.push_back({m, w[g] / static_cast<double>(n)});
            }
            return out;
          }};
}

std::vector<HalfEdge> MicroLattice::union_legs(const LegOp& a, const LegOp& b) const {
  std::set<HalfEdge> s(a.legs.begin(), a.legs.end());
  s.insert(b.legs.begin(), b.legs.end());
  return {s.begin(), s.end()};
}

SpMat MicroLattice::matrix(const LegOp& op, const std::vector<HalfEdge>& legs) const {
  const int k = static_cast<int>(legs.size());
  long dim = 1;
  for (int i = 0; i < k; ++i) dim *= n_;
  std::vector<int> pos;
  for (const auto& l : op.legs) pos.push_back(static_cast<int>(std::find(legs.begin(), legs.end(), l) - legs.begin()));
  std::vector<Eigen::Triplet<cplx>> trip;
  Labels full(k), sub(op.legs.size());
  for (long idx = 0; idx < dim; ++idx) {
    long r = idx;
    for (int i = k - 1; i >= 0; --i) {
      full[i] = static_cast<int>(r % n_);
      r /= n_;
    }
    for (size_t j = 0; j < pos.size(); ++j) sub[j] = full[pos[j]];
    for (const auto& [img, coef] : op.act(sub)) {
      Labels out = full;
      for (size_t j = 0; j < pos.size(); ++j) out[pos[j]] = img[j];
      long row = 0;
      for (int i = 0; i < k; ++i) row = row * n_ + out[i];
      trip.emplace_back(row, idx, coef);
    }
  }
  SpMat m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

MicroReport MicroLattice::analyze(const MicroRegion& R) {
  validate_region(R);
  MicroReport rep;
  rep.region = R.name;
  const int V = static_cast<int>(R.vertices.size()), E = static_cast<int>(R.edges.size());
  const int F = static_cast<int>(R.faces.size());
  rep.boundary_points = 4 * V - 2 * E;
  rep.holes = E - V + 1 - F;

  std::set<std::pair<Vertex, Vertex>> edge_set(R.edges.begin(), R.edges.end());
  std::set<Vertex> face_set(R.faces.begin(), R.faces.end());
  std::vector<Vertex> holes;
  for (const auto& v : R.vertices) {
    const Vertex b{v.x + 1, v.y}, c{v.x, v.y + 1}, d{v.x + 1, v.y + 1};
    if (!face_set.count(v) && edge_set.count({v, b}) && edge_set.count({b, d}) && edge_set.count({c, d}) &&
        edge_set.count({v, c}))
      holes.push_back(v);
  }
  if (rep.holes < 0 || rep.holes > 1 || static_cast<int>(holes.size()) != rep.holes)
    throw ConfigError(R.name + ": only connected regions with at most one empty unit square are supported");

  // Pairwise commutators and projector identities on the half-edges the two operators touch.
  std::vector<LegOp> ops;
  for (const auto& e : R.edges) ops.push_back(edge_constraint(e));
  const std::vector<cplx> flat(n_, 1.0);
  for (const auto& f : R.faces) ops.push_back(loop_projector(f, flat, "B" + describe(f)));
  for (size_t i = 0; i < ops.size(); ++i)
    for (size_t j = i + 1; j < ops.size(); ++j) {
      auto legs = union_legs(ops[i], ops[j]);
      SpMat a = matrix(ops[i], legs), b = matrix(ops[j], legs);
      SpMat c = a * b - b * a;
      rep.commutators.push_back({ops[i].name, ops[j].name, max_entry(c)});
    }
  for (size_t i = R.edges.size(); i < ops.size(); ++i) {
    SpMat b = matrix(ops[i], ops[i].legs);
    SpMat sq = b * b - b;
    SpMat herm = b - SpMat(b.adjoint());
    rep.projector = std::max({rep.projector, max_entry(sq), max_entry(herm)});
  }

  // Basis of the string-net subspace: vertex labellings (W, S, N) with E fixed by the vertex
  // constraint, and equal labels on both half-edges of every region edge.
  std::map<Vertex, int> vidx;
  for (int i = 0; i < V; ++i) vidx[R.vertices[i]] = i;
  auto flat_pos = [&](const HalfEdge& h) { return 4 * vidx.at(h.v) + static_cast<int>(h.dir); };
  std::vector<std::pair<int, int>> constraints;
  for (const auto& e : R.edges) {
    auto [t, h] = legs_of(e);
    constraints.push_back({flat_pos(t), flat_pos(h)});
  }
  std::vector<Labels> basis;
  Labels cur(4 * V, 0);
  std::function<void(int)> fill = [&](int v) {
    if (v == V) {
      basis.push_back(cur);
      return;
    }
    for (int w = 0; w < n_; ++w)
      for (int s = 0; s < n_; ++s)
        for (int nn = 0; nn < n_; ++nn) {
          cur[4 * v + West] = w;
          cur[4 * v + South] = s;
          cur[4 * v + North] = nn;
          cur[4 * v + East] = mult(mult(w, s), inv(nn));
          bool ok = true;
          for (auto [p, q] : constraints)
            if (p / 4 <= v && q / 4 <= v && (p / 4 == v || q / 4 == v)) ok = ok && cur[p] == cur[q];
          if (ok) fill(v + 1);
        }
  };
  fill(0);
  std::map<Labels, int> index;
  for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);
  const int dimC1 = static_cast<int>(basis.size());

  auto as_matrix = [&](const LegOp& op) {
    std::vector<int> pos;
    for (const auto& l : op.legs) pos.push_back(flat_pos(l));
    std::vector<Eigen::Triplet<cplx>> trip;
    Labels sub(pos.size());
    for (int i = 0; i < dimC1; ++i) {
      for (size_t j = 0; j < pos.size(); ++j) sub[j] = basis[i][pos[j]];
      for (const auto& [img, coef] : op.act(sub)) {
        Labels out = basis[i];
        for (size_t j = 0; j < pos.size(); ++j) out[pos[j]] = img[j];
        auto it = index.find(out);
        if (it == index.end()) throw NumericalError(op.name + " leaves the string-net subspace");
        trip.emplace_back(it->second, i, coef);
      }
    }
    SpMat m(dimC1, dimC1);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
  };
  SpMat P = identity(dimC1);
  for (size_t i = R.edges.size(); i < ops.size(); ++i) P = as_matrix(ops[i]) * P;

  auto lattice_dim = [&](const SpMat& proj) {
    const double t = proj.diagonal().sum().real();
    rep.trace_rounding = std::max(rep.trace_rounding, std::abs(t - std::round(t)));
    return std::lround(t);
  };
  const int k = rep.boundary_points;
  if (rep.holes == 0) {
    rep.dimensions.push_back({"total", lattice_dim(P), hom_count(unit_, k)});
  } else {
    long total_lattice = lattice_dim(P), total_pred = 0;
    SpMat sum = SpMat(dimC1, dimC1);
    for (int X = 0; X < Z_.size(); ++X) {
      const CenterObject& obj = Z_.object(X);
      const CenterObject& dual = Z_.object(Z_.dual(X));
      long pred = 0;
      for (int s = 0; s < n_; ++s) pred += dual.n[s] * hom_count(s, k);
      pred *= obj.n[unit_];
      total_pred += pred;
      long lat = 0;
      if (obj.n[unit_] > 0) {
        // Empty-circle tube idempotent of X: half-braiding phases weight the loops.
        std::vector<cplx> w(n_);
        for (int g = 0; g < n_; ++g) {
          cplx phase = 0.0;
          for (const auto& blk : obj.hb.sigma[g].blocks) phase += blk.sum();
          w[g] = std::conj(phase);
        }
        SpMat p = as_matrix(loop_projector(holes[0], w, "P^" + obj.label)) * P;
        sum += p;
        lat = lattice_dim(p);
      }
      rep.dimensions.push_back({obj.label, lat, pred});
    }
    rep.dimensions.push_back({"total", total_lattice, total_pred});
    rep.completeness = max_entry(sum - P);
  }

  if (rep.holes == 0) {
    // sigma_C: a configuration goes to D^{-|F|} times the diagram of its boundary labelling; with
    // d = 1 and trivial F these diagrams are orthonormal for the ball evaluation.
    std::vector<std::pair<int, int>> dangling;  // (flat position, +1 out / -1 in)
    std::set<int> inner;
    for (auto [p, q] : constraints) inner.insert({p, q});
    for (int v = 0; v < V; ++v)
      for (int d = 0; d < 4; ++d)
        if (!inner.count(4 * v + d)) dangling.push_back({4 * v + d, d >= North ? 1 : -1});
    std::map<Labels, int> rows;
    Labels l(dangling.size(), 0);
    long total = 1;
    for (size_t i = 0; i < dangling.size(); ++i) total *= n_;
    for (long idx = 0; idx < total; ++idx) {
      long r = idx;
      int in = unit_, out = unit_;
      for (size_t i = 0; i < dangling.size(); ++i) {
        l[i] = static_cast<int>(r % n_);
        r /= n_;
        (dangling[i].second > 0 ? out : in) = mult(dangling[i].second > 0 ? out : in, l[i]);
      }
      if (in == out) rows.emplace(l, static_cast<int>(rows.size()));
    }
    const double D = std::sqrt(static_cast<double>(n_));
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int i = 0; i < dimC1; ++i) {
      for (size_t j = 0; j < dangling.size(); ++j) l[j] = basis[i][dangling[j].first];
      trip.emplace_back(rows.at(l), i, std::pow(D, -F));
    }
    SpMat sigma(static_cast<int>(rows.size()), dimC1);
    sigma.setFromTriplets(trip.begin(), trip.end());
    SpMat M = sigma * P;
    SpMat MMd = M * SpMat(M.adjoint()), MdM = SpMat(M.adjoint()) * M;
    rep.sigma_unitarity = std::max(max_entry(MMd - identity(static_cast<int>(rows.size()))), max_entry(MdM - P));
  }
  return rep;
}

std::vector<MicroRegion> MicroLattice::standard_regions() {
  const Vertex a{0, 0}, b{1, 0}, c{0, 1}, d{1, 1}, t{2, 0};
  std::vector<std::pair<Vertex, Vertex>> square{{a, b}, {b, d}, {c, d}, {a, c}};
  std::vector<std::pair<Vertex, Vertex>> square_tail = square;
  square_tail.push_back({b, t});
  return {
      {"vertex", {a}, {}, {}},
      {"edge", {a, b}, {{a, b}}, {}},
      {"path", {a, b, d}, {{a, b}, {b, d}}, {}},
      {"plaquette", {a, b, c, d}, square, {a}},
      {"empty square", {a, b, c, d}, square, {}},
      {"plaquette with tail", {a, b, c, d, t}, square_tail, {a}},
      {"empty square with tail", {a, b, c, d, t}, square_tail, {}},
  };
}

}  // namespace lwdhr
