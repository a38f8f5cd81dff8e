#include "lwdhr/hom_calculus.hpp"

#include <cmath>

namespace lwdhr {

namespace {

std::uint64_t pack(int e, int i, int s, int mu) {
  return (std::uint64_t(e) << 48) | (std::uint64_t(i) << 24) | (std::uint64_t(s) << 12) |
         std::uint64_t(mu);
}

int channel_index(const std::vector<Channel>& chans, int mid, int v1, int v2) {
  for (size_t k = 0; k < chans.size(); ++k)
    if (chans[k].mid == mid && chans[k].v1 == v1 && chans[k].v2 == v2) return static_cast<int>(k);
  return -1;
}

}  // namespace

Leg simple_leg(int a) { return Leg{{a}}; }

Word simple_word(const std::vector<int>& labels) {
  Word w;
  for (int a : labels) w.push_back(simple_leg(a));
  return w;
}

Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

Word to_word(const FusionSystem& sys, const ObjectWord& w) {
  Word out;
  for (auto [label, orient] : w.letters) {
    if (label < 0 || label >= sys.rank()) throw UnknownLabel("label index out of range");
    out.push_back(simple_leg(orient >= 0 ? label : sys.dual[label]));
  }
  return out;
}

int TreeSpace::find(int c, int e, int i, int s, int mu) const {
  auto it = lookup[c].find(pack(e, i, s, mu));
  return it == lookup[c].end() ? -1 : it->second;
}

Morphism& Morphism::operator+=(const Morphism& o) {
  if (!same_shape(o)) throw ShapeMismatch("adding morphisms of different shape");
  for (size_t c = 0; c < blocks.size(); ++c) blocks[c] += o.blocks[c];
  return *this;
}

Morphism& Morphism::operator-=(const Morphism& o) {
  if (!same_shape(o)) throw ShapeMismatch("subtracting morphisms of different shape");
  for (size_t c = 0; c < blocks.size(); ++c) blocks[c] -= o.blocks[c];
  return *this;
}

Morphism& Morphism::operator*=(cplx s) {
  for (auto& b : blocks) b *= s;
  return *this;
}

double Morphism::max_abs() const {
  double m = 0.0;
  for (const auto& b : blocks) m = std::max(m, la::max_abs(b));
  return m;
}

HomCalculus::HomCalculus(const CategoryData& cat) : cat_(cat) {
  if (!cat.multiplicity_free())
    throw ConsistencyError("hom calculus requires a multiplicity-free input category");
  const int r = cat.rank();
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d) {
          if (a != cat.unit && b != cat.unit && c != cat.unit) continue;
          const Mat& m = cat.F_matrix(a, b, c, d);
          if (m.size() && la::max_abs(m - Mat::Identity(m.rows(), m.cols())) > 1e-12)
            throw ConsistencyError("F-symbols with a unit leg must be trivial");
        }
}

const TreeSpace& HomCalculus::space(const Word& w) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = spaces_.find(w);
  if (it != spaces_.end()) return it->second;
  const int r = rank();
  TreeSpace ts;
  ts.basis.assign(r, {});
  ts.lookup.assign(r, {});
  if (w.empty()) {
    ts.basis[cat_.unit].push_back({cat_.unit, 0, 0, 0});
  } else {
    Word shorter(w.begin(), w.end() - 1);
    const TreeSpace& prev = space(shorter);
    const Leg& last = w.back();
    for (int c = 0; c < r; ++c)
      for (int e = 0; e < r; ++e)
        for (int i = 0; i < prev.dim(e); ++i)
          for (int s = 0; s < static_cast<int>(last.summands.size()); ++s)
            for (int mu = 0; mu < cat_.N(e, last.summands[s], c); ++mu)
              ts.basis[c].push_back({e, i, s, mu});
  }
  for (int c = 0; c < r; ++c)
    for (int k = 0; k < ts.dim(c); ++k) {
      const auto& t = ts.basis[c][k];
      ts.lookup[c][pack(t.e, t.i, t.s, t.mu)] = k;
    }
  return spaces_.emplace(w, std::move(ts)).first->second;
}

int HomCalculus::hom_dim(const Word& source, const Word& target) {
  for (const Word* w : {&source, &target})
    for (const auto& leg : *w)
      for (int a : leg.summands)
        if (a < 0 || a >= rank()) throw UnknownLabel("label index out of range");
  int total = 0;
  for (int c = 0; c < rank(); ++c) total += dim(c, source) * dim(c, target);
  return total;
}

int HomCalculus::hom_dim(const ObjectWord& source, const ObjectWord& target) {
  return hom_dim(to_word(cat_, source), to_word(cat_, target));
}

Morphism HomCalculus::zero(const Word& source, const Word& target) {
  Morphism m{source, target, {}};
  for (int c = 0; c < rank(); ++c) m.blocks.push_back(Mat::Zero(dim(c, target), dim(c, source)));
  return m;
}

Morphism HomCalculus::identity(const Word& w) {
  Morphism m{w, w, {}};
  for (int c = 0; c < rank(); ++c) m.blocks.push_back(Mat::Identity(dim(c, w), dim(c, w)));
  return m;
}

Morphism HomCalculus::compose(const Morphism& g, const Morphism& f) const {
  if (!(g.source == f.target)) throw ShapeMismatch("compose: target of f differs from source of g");
  Morphism m{f.source, g.target, {}};
  m.blocks.reserve(g.blocks.size());
  for (size_t c = 0; c < g.blocks.size(); ++c) m.blocks.push_back(g.blocks[c] * f.blocks[c]);
  return m;
}

Morphism HomCalculus::dagger(const Morphism& f) {
  Morphism m{f.target, f.source, {}};
  for (const auto& b : f.blocks) m.blocks.push_back(b.adjoint());
  return m;
}

const HomCalculus::ProductLayout& HomCalculus::layout(const Word& A, const Word& B, int c) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_tuple(A, B, c);
  auto it = layouts_.find(key);
  if (it != layouts_.end()) return it->second;
  const TreeSpace& SA = space(A);
  const TreeSpace& SB = space(B);
  ProductLayout L;
  for (int a = 0; a < rank(); ++a)
    for (int b = 0; b < rank(); ++b)
      for (int mu = 0; mu < cat_.N(a, b, c); ++mu) {
        int size = SA.dim(a) * SB.dim(b);
        if (size == 0) continue;
        L.blocks.push_back({a, b, mu});
        L.offset.push_back(L.total);
        L.total += size;
      }
  return layouts_.emplace(key, std::move(L)).first->second;
}

const Mat& HomCalculus::tensor_map(const Word& A, const Word& B, int c) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_tuple(A, B, c);
  auto it = tmaps_.find(key);
  if (it != tmaps_.end()) return it->second;
  Mat T = build_tensor_map(A, B, c);
  return tmaps_.emplace(key, std::move(T)).first->second;
}

Mat HomCalculus::build_tensor_map(const Word& A, const Word& B, int c) {
  const Word AB = concat(A, B);
  const TreeSpace& SAB = space(AB);
  const TreeSpace& SA = space(A);
  const TreeSpace& SB = space(B);
  const ProductLayout& L = layout(A, B, c);
  Mat T = Mat::Zero(SAB.dim(c), L.total);
  auto product_col = [&](size_t blk, int i, int j) {
    int b = L.blocks[blk][1];
    return L.offset[blk] + i * SB.dim(b) + j;
  };
  if (A.empty() || B.empty()) {
    // Unit on one side: the product basis already is the canonical basis.
    for (size_t blk = 0; blk < L.blocks.size(); ++blk) {
      auto [a, b, mu] = L.blocks[blk];
      for (int i = 0; i < SA.dim(a); ++i)
        for (int j = 0; j < SB.dim(b); ++j) T(A.empty() ? j : i, product_col(blk, i, j)) = 1.0;
    }
    return T;
  }
  if (B.size() == 1) {
    for (size_t blk = 0; blk < L.blocks.size(); ++blk) {
      auto [a, b, mu] = L.blocks[blk];
      for (int i = 0; i < SA.dim(a); ++i)
        for (int j = 0; j < SB.dim(b); ++j) {
          const auto& tb = SB.basis[b][j];
          int row = SAB.find(c, a, i, tb.s, mu);
          T(row, product_col(blk, i, j)) = 1.0;
        }
    }
    return T;
  }
  // B = B' z: move the last vertex out with an inverse F-move, then recurse on (A, B').
  const Word Bp(B.begin(), B.end() - 1);
  const Leg& z = B.back();
  const TreeSpace& SBp = space(Bp);
  for (size_t blk = 0; blk < L.blocks.size(); ++blk) {
    auto [a, b, mu] = L.blocks[blk];
    for (int j = 0; j < SB.dim(b); ++j) {
      const auto& tb = SB.basis[b][j];
      const int bp = tb.e, jp = tb.i, s = tb.s, nu = tb.mu;
      const int zs = z.summands[s];
      const Mat& F = cat_.F_matrix(a, bp, zs, c);
      auto rows = cat_.left_channels(a, bp, zs, c);
      auto cols = cat_.right_channels(a, bp, zs, c);
      int col = channel_index(cols, b, nu, mu);
      for (size_t rr = 0; rr < rows.size(); ++rr) {
        const cplx coef = std::conj(F(rr, col));
        if (coef == cplx(0.0)) continue;
        const int e = rows[rr].mid, m1 = rows[rr].v1, m2 = rows[rr].v2;
        const Mat& Tp = tensor_map(A, Bp, e);
        const ProductLayout& Lp = layout(A, Bp, e);
        int pblk = -1;
        for (size_t q = 0; q < Lp.blocks.size(); ++q)
          if (Lp.blocks[q] == std::array<int, 3>{a, bp, m1}) pblk = static_cast<int>(q);
        if (pblk < 0) continue;
        for (int i = 0; i < SA.dim(a); ++i) {
          int pcol = Lp.offset[pblk] + i * SBp.dim(bp) + jp;
          for (int rcan = 0; rcan < Tp.rows(); ++rcan) {
            cplx v = Tp(rcan, pcol);
            if (v == cplx(0.0)) continue;
            int row = SAB.find(c, e, rcan, s, m2);
            T(row, product_col(blk, i, j)) += coef * v;
          }
        }
      }
    }
  }
  return T;
}

Morphism HomCalculus::tensor(const Morphism& f, const Morphism& g) {
  Morphism m{concat(f.source, g.source), concat(f.target, g.target), {}};
  for (int c = 0; c < rank(); ++c) {
    const Mat& Tin = tensor_map(f.source, g.source, c);
    const Mat& Tout = tensor_map(f.target, g.target, c);
    const ProductLayout& Lin = layout(f.source, g.source, c);
    const ProductLayout& Lout = layout(f.target, g.target, c);
    Mat block = Mat::Zero(Tout.rows(), Tin.rows());
    size_t q = 0;
    for (size_t p = 0; p < Lin.blocks.size(); ++p) {
      auto [a, b, mu] = Lin.blocks[p];
      while (q < Lout.blocks.size() && Lout.blocks[q] < Lin.blocks[p]) ++q;
      if (q >= Lout.blocks.size() || Lout.blocks[q] != Lin.blocks[p]) continue;
      const Mat& Fa = f.blocks[a];
      const Mat& Gb = g.blocks[b];
      if (Fa.size() == 0 || Gb.size() == 0) continue;
      Mat K(Fa.rows() * Gb.rows(), Fa.cols() * Gb.cols());
      for (int r1 = 0; r1 < Fa.rows(); ++r1)
        for (int c1 = 0; c1 < Fa.cols(); ++c1)
          K.block(r1 * Gb.rows(), c1 * Gb.cols(), Gb.rows(), Gb.cols()) = Fa(r1, c1) * Gb;
      block += Tout.middleCols(Lout.offset[q], K.rows()) * K *
               Tin.middleCols(Lin.offset[p], K.cols()).adjoint();
    }
    m.blocks.push_back(std::move(block));
  }
  return m;
}

Morphism HomCalculus::pad(const Word& left, const Morphism& f, const Word& right) {
  Morphism m = f;
  if (!left.empty()) m = tensor(identity(left), m);
  if (!right.empty()) m = tensor(m, identity(right));
  return m;
}

cplx HomCalculus::trace(const Morphism& f) const {
  if (!(f.source == f.target)) throw ShapeMismatch("trace of a non-endomorphism");
  cplx t = 0.0;
  for (int c = 0; c < static_cast<int>(f.blocks.size()); ++c) t += cat_.d[c] * f.blocks[c].trace();
  return t;
}

cplx HomCalculus::trace_inner_product(const Morphism& f, const Morphism& g) const {
  if (!f.same_shape(g)) throw ShapeMismatch("inner product of morphisms of different shape");
  cplx t = 0.0;
  for (int c = 0; c < static_cast<int>(f.blocks.size()); ++c)
    if (f.blocks[c].size()) t += cat_.d[c] * (f.blocks[c].adjoint() * g.blocks[c]).trace();
  return t;
}

cplx HomCalculus::skein_inner_product(const Morphism& phi, const Morphism& psi) const {
  if (!phi.same_shape(psi)) throw ShapeMismatch("skein inner product of different blocks");
  if (phi.source.size() != 2 || phi.target.size() != 2) throw ShapeMismatch("skein inner product needs a (x) b -> c (x) d");
  double norm = 1.0;
  for (const Word* w : {&phi.source, &phi.target})
    for (const auto& leg : *w) {
      if (leg.summands.size() != 1) throw ShapeMismatch("skein inner product needs simple legs");
      norm *= cat_.d[leg.summands[0]];
    }
  return trace_inner_product(phi, psi) / std::sqrt(norm);
}

Morphism HomCalculus::vertex(int a, int b, int c, int mu) {
  Word src = simple_word({c});
  Word tgt = simple_word({a, b});
  Morphism m = zero(src, tgt);
  int row = space(tgt).find(c, a, 0, 0, mu);
  if (row < 0) throw ShapeMismatch("no such fusion vertex");
  m.blocks[c](row, 0) = 1.0;
  return m;
}

Morphism HomCalculus::coev(int x) {
  Morphism m = zero({}, simple_word({x, cat_.dual[x]}));
  int row = space(m.target).find(cat_.unit, x, 0, 0, 0);
  m.blocks[cat_.unit](row, 0) = std::sqrt(cat_.d[x]);
  return m;
}

Morphism HomCalculus::ev(int x) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = ev_cache_.find(x);
  if (it != ev_cache_.end()) return it->second;
  const int xb = cat_.dual[x];
  Morphism m = zero(simple_word({xb, x}), {});
  int col = space(m.source).find(cat_.unit, xb, 0, 0, 0);
  m.blocks[cat_.unit](0, col) = std::sqrt(cat_.d[x]);
  // Fix the phase so that (id_x (x) ev)(coev (x) id_x) = id_x.
  Morphism zig = compose(pad(simple_word({x}), m, {}), pad({}, coev(x), simple_word({x})));
  cplx z = zig.blocks[x](0, 0);
  m *= 1.0 / z;
  ev_cache_.emplace(x, m);
  return m;
}

Morphism HomCalculus::unit_in() {
  Morphism m = zero({}, simple_word({cat_.unit}));
  m.blocks[cat_.unit](0, 0) = 1.0;
  return m;
}

Morphism HomCalculus::inclusion(const Leg& leg, int s) {
  Word src{simple_leg(leg.summands[s])};
  Word tgt{leg};
  Morphism m = zero(src, tgt);
  int c = leg.summands[s];
  m.blocks[c](space(tgt).find(c, cat_.unit, 0, s, 0), 0) = 1.0;
  return m;
}

std::vector<DottedTerm> HomCalculus::dotted_line_expand(int position, const Word& w) const {
  if (position < 0 || position > static_cast<int>(w.size()))
    throw ShapeMismatch("dotted line position outside the word");
  std::vector<DottedTerm> out;
  for (int a = 0; a < rank(); ++a) {
    Word inserted = w;
    inserted.insert(inserted.begin() + position, simple_leg(a));
    out.push_back({a, cat_.d[a] / cat_.D2(), inserted});
  }
  return out;
}

Morphism HomCalculus::sigma_leg(const HalfBraiding& hb, const Leg& leg) {
  Word X{hb.object};
  Morphism out = zero(concat(X, {leg}), concat({leg}, X));
  for (int s = 0; s < static_cast<int>(leg.summands.size()); ++s) {
    Morphism inc = inclusion(leg, s);
    Morphism term = compose(tensor(inc, identity(X)),
                            compose(hb.sigma[leg.summands[s]], tensor(identity(X), dagger(inc))));
    out += term;
  }
  return out;
}

Morphism HomCalculus::sigma_word(const HalfBraiding& hb, const Word& w) {
  Word X{hb.object};
  if (w.empty()) return identity(X);
  Morphism acc = sigma_leg(hb, w[0]);
  Word done{w[0]};
  for (size_t k = 1; k < w.size(); ++k) {
    // X (done) leg -> done X leg -> done leg X
    Morphism step = pad(done, sigma_leg(hb, w[k]), {});
    acc = compose(step, pad({}, acc, {w[k]}));
    done.push_back(w[k]);
  }
  return acc;
}

double HomCalculus::cloaking_residual(const HalfBraiding& hb) {
  Word X{hb.object};
  double worst = 0.0;
  // Closed dotted loop with the X strand laid over it must evaluate to id_X.
  Morphism loop = zero(X, X);
  for (int a = 0; a < rank(); ++a) {
    Word pair = simple_word({a, cat_.dual[a]});
    // sigma_{a abar} (id_X (x) coev_a) = coev_a (x) id_X
    Morphism lhs = compose(sigma_word(hb, pair), tensor(identity(X), coev(a)));
    Morphism rhs = tensor(coev(a), identity(X));
    worst = std::max(worst, (lhs - rhs).max_abs());
    loop += (cat_.d[a] / cat_.D2()) * compose(tensor(ev_right(a), identity(X)), lhs);
  }
  return std::max(worst, (loop - identity(X)).max_abs());
}

}  // namespace lwdhr
