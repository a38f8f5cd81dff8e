#include "lwdhr/tube_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lwdhr {

namespace {

Word labeling_word(const std::vector<int>& lab) { return simple_word(lab); }

void enumerate_labelings(int rank, const FusionSystem& sys, const ObjectWord& marked,
                         std::vector<std::vector<int>>& out) {
  const size_t n = marked.letters.size();
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<int> lab(n);
    for (size_t k = 0; k < n; ++k) lab[k] = marked.letters[k].second >= 0 ? idx[k] : sys.dual[idx[k]];
    out.push_back(lab);
    size_t k = 0;
    while (k < n && ++idx[k] == rank) idx[k++] = 0;
    if (k == n) break;
  }
}

// Coordinates of a morphism in a sector, written into vec.
void write_sector(const TubeSector& sec, const Morphism& m, Vec& vec) {
  int pos = sec.offset;
  for (size_t c = 0; c < m.blocks.size(); ++c)
    for (int r = 0; r < m.blocks[c].rows(); ++r)
      for (int q = 0; q < m.blocks[c].cols(); ++q) vec(pos++) += m.blocks[c](r, q);
}

Morphism elementary(HomCalculus& H, const TubeSector& sec, const TubeBasisElement& b) {
  Morphism m = H.zero(sec.source, sec.target);
  m.blocks[b.c](b.row, b.col) = 1.0;
  return m;
}

}  // namespace

Morphism unit_swap(HomCalculus& H, const Leg& X) {
  Word W{X};
  Morphism to_front = H.tensor(H.unit_in(), H.identity(W));
  Morphism to_back = H.tensor(H.identity(W), H.unit_in());
  return H.compose(to_front, HomCalculus::dagger(to_back));
}

Vec TubeAlgebraTable::multiply(const Vec& a, const Vec& b) const {
  Vec out = Vec::Zero(dim);
  for (int i = 0; i < dim; ++i)
    if (a(i) != cplx(0.0)) out += a(i) * (left[i] * b);
  return out;
}

Mat TubeAlgebraTable::left_matrix(const Vec& a) const {
  Mat out = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    if (a(i) != cplx(0.0)) out += a(i) * left[i];
  return out;
}

Vec TubeAlgebraTable::star(const Vec& a) const { return star_matrix * a.conjugate(); }

Vec TubeAlgebraTable::basis_vector(int i) const {
  Vec v = Vec::Zero(dim);
  v(i) = 1.0;
  return v;
}

int TubeAlgebraTable::find_sector(int in, int out, int x) const {
  for (size_t s = 0; s < sectors.size(); ++s)
    if (sectors[s].in == in && sectors[s].out == out && sectors[s].x == x) return static_cast<int>(s);
  return -1;
}

Morphism TubeAlgebraTable::component(HomCalculus& H, const Vec& a, int sector) const {
  const TubeSector& sec = sectors[sector];
  Morphism m = H.zero(sec.source, sec.target);
  int pos = sec.offset;
  for (auto& blk : m.blocks)
    for (int r = 0; r < blk.rows(); ++r)
      for (int q = 0; q < blk.cols(); ++q) blk(r, q) = a(pos++);
  return m;
}

TubeAlgebraTable build_tube(HomCalculus& H, const ObjectWord& marked_points) {
  const CategoryData& cat = H.cat();
  const int rank = cat.rank();
  TubeAlgebraTable T;
  T.marked = marked_points;
  enumerate_labelings(rank, cat, marked_points, T.labelings);
  const int L = static_cast<int>(T.labelings.size());
  for (int in = 0; in < L; ++in)
    for (int out = 0; out < L; ++out)
      for (int x = 0; x < rank; ++x) {
        TubeSector sec{in, out, x, concat(labeling_word(T.labelings[in]), simple_word({x})),
                       concat(simple_word({x}), labeling_word(T.labelings[out])), T.dim, 0};
        for (int c = 0; c < rank; ++c) sec.size += H.dim(c, sec.source) * H.dim(c, sec.target);
        if (sec.size == 0) continue;
        const int sidx = static_cast<int>(T.sectors.size());
        for (int c = 0; c < rank; ++c)
          for (int r = 0; r < H.dim(c, sec.target); ++r)
            for (int q = 0; q < H.dim(c, sec.source); ++q) T.basis.push_back({sidx, c, r, q});
        T.dim += sec.size;
        T.sectors.push_back(std::move(sec));
      }
  const int dim = T.dim;
  T.left.assign(dim, Mat::Zero(dim, dim));

  // Gluing: (psi^+ (x) id)(id_x (x) T2)(T1 (x) id_y)(id (x) psi), summed over an orthonormal psi.
  std::vector<Morphism> elems;
  elems.reserve(dim);
  for (const auto& b : T.basis) elems.push_back(elementary(H, T.sectors[b.sector], b));
  for (size_t s1 = 0; s1 < T.sectors.size(); ++s1) {
    const TubeSector& A = T.sectors[s1];
    for (size_t s2 = 0; s2 < T.sectors.size(); ++s2) {
      const TubeSector& B = T.sectors[s2];
      if (B.in != A.out) continue;
      const int x = A.x, y = B.x;
      const Word wa = labeling_word(T.labelings[A.in]);
      const Word wc = labeling_word(T.labelings[B.out]);
      for (int z = 0; z < rank; ++z)
        for (int mu = 0; mu < cat.N(x, y, z); ++mu) {
          int target = T.find_sector(A.in, B.out, z);
          if (target < 0) continue;
          Morphism psi = H.vertex(x, y, z, mu);
          Morphism in_map = H.tensor(H.identity(wa), psi);
          Morphism out_map = H.tensor(HomCalculus::dagger(psi), H.identity(wc));
          std::vector<Morphism> lower, upper;
          for (int j = 0; j < A.size; ++j)
            lower.push_back(H.compose(H.tensor(elems[A.offset + j], H.identity(simple_word({y}))), in_map));
          for (int i = 0; i < B.size; ++i)
            upper.push_back(H.compose(out_map, H.tensor(H.identity(simple_word({x})), elems[B.offset + i])));
          for (int i = 0; i < B.size; ++i)
            for (int j = 0; j < A.size; ++j) {
              Morphism prod = H.compose(upper[i], lower[j]);
              Vec col = Vec::Zero(dim);
              write_sector(T.sectors[target], prod, col);
              T.left[B.offset + i].col(A.offset + j) += col;
            }
        }
    }
  }

  // Reflection: bend the dagger around with the right duality of x.
  T.star_matrix = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const TubeBasisElement& b = T.basis[i];
    const TubeSector& sec = T.sectors[b.sector];
    const int x = sec.x, xb = cat.dual[x];
    int target = T.find_sector(sec.out, sec.in, xb);
    if (target < 0) throw DecompositionError("tube involution leaves the sector list");
    const Word wa = labeling_word(T.labelings[sec.in]);
    const Word wb = labeling_word(T.labelings[sec.out]);
    Morphism dag = HomCalculus::dagger(elems[i]);
    Morphism step1 = H.tensor(H.coev_right(x), H.identity(concat(wb, simple_word({xb}))));
    Morphism step2 = H.pad(simple_word({xb}), dag, simple_word({xb}));
    Morphism step3 = H.tensor(H.identity(concat(simple_word({xb}), wa)), H.ev_right(x));
    Morphism st = H.compose(step3, H.compose(step2, step1));
    Vec col = Vec::Zero(dim);
    write_sector(T.sectors[target], st, col);
    T.star_matrix.col(i) = col;
  }

  T.unit = Vec::Zero(dim);
  for (int a = 0; a < L; ++a) {
    int s = T.find_sector(a, a, cat.unit);
    Word wa = labeling_word(T.labelings[a]);
    Morphism to_front = H.tensor(H.unit_in(), H.identity(wa));
    Morphism to_back = H.tensor(H.identity(wa), H.unit_in());
    write_sector(T.sectors[s], H.compose(to_front, HomCalculus::dagger(to_back)), T.unit);
  }
  return T;
}

namespace {

// Idempotent element purification using the algebra product.
Vec purify_element(const TubeAlgebraTable& T, Vec p) {
  for (int it = 0; it < 60; ++it) {
    Vec p2 = T.multiply(p, p);
    if ((p2 - p).cwiseAbs().maxCoeff() < 1e-15) break;
    p = 3.0 * p2 - 2.0 * T.multiply(p2, p);
  }
  return p;
}

int rank_of(const Mat& M, double tol) {
  if (M.size() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(M);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * std::max(1.0, s(0))) ++r;
  return r;
}

// Columns e_i a: dimension of the left ideal A a.
int ideal_dim(const TubeAlgebraTable& T, const Vec& a) {
  Mat R(T.dim, T.dim);
  for (int i = 0; i < T.dim; ++i) R.col(i) = T.left[i] * a;
  return rank_of(R, 1e-8);
}

Vec random_self_adjoint(const TubeAlgebraTable& T, const Mat& span, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec coef(span.cols());
  for (int k = 0; k < coef.size(); ++k) coef(k) = cplx(g(rng), g(rng));
  Vec h = span * coef;
  return h + T.star(h);
}

// Spectral projector of L_h onto eigenvalues near lambda, applied to v.
struct Spectrum {
  Eigen::VectorXcd values;
  Mat V, W;
};

Spectrum spectrum(const Mat& L) {
  Eigen::ComplexEigenSolver<Mat> es(L);
  Spectrum s;
  s.values = es.eigenvalues();
  s.V = es.eigenvectors();
  s.W = s.V.inverse();
  return s;
}

std::vector<std::vector<int>> clusters(const Eigen::VectorXcd& vals, double gap) {
  std::vector<int> order(vals.size());
  for (int i = 0; i < vals.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return vals(a).real() < vals(b).real(); });
  std::vector<std::vector<int>> out;
  for (int k = 0; k < static_cast<int>(order.size()); ++k) {
    if (k == 0 || vals(order[k]).real() - vals(order[k - 1]).real() > gap) out.push_back({});
    out.back().push_back(order[k]);
  }
  return out;
}

Vec apply_projector(const Spectrum& s, const std::vector<int>& cl, const Vec& v) {
  Vec out = Vec::Zero(v.size());
  Vec coeff = s.W * v;
  for (int k : cl) out += s.V.col(k) * coeff(k);
  return out;
}

}  // namespace

MatrixUnitSystem decompose(const TubeAlgebraTable& T, std::uint64_t seed, double tol) {
  const int dim = T.dim;
  std::mt19937_64 rng(seed);
  // Center = commutant of the regular actions.
  Mat M(dim * dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) M.block(j * dim, i, dim, 1) = T.left[i].col(j) - T.left[j].col(i);
  Mat center = la::null_space(M, 1e-9);
  Vec h = random_self_adjoint(T, center, rng);
  Spectrum sp = spectrum(T.left_matrix(h));
  auto groups = clusters(sp.values, 1e-6);

  MatrixUnitSystem out;
  int total = 0;
  for (const auto& cl : groups) {
    MatrixUnitBlock blk;
    blk.P = purify_element(T, apply_projector(sp, cl, T.unit));
    int n2 = ideal_dim(T, blk.P);
    int n = static_cast<int>(std::lround(std::sqrt(double(n2))));
    if (n * n != n2 || n == 0) throw DecompositionError("central projection has non-square rank");
    blk.n = n;
    total += n2;
    // Rank of the block inside each boundary labeling.
    std::vector<Vec> Pa;
    std::vector<int> ra;
    for (size_t a = 0; a < T.labelings.size(); ++a) {
      Vec ua = Vec::Zero(dim);
      for (const auto& sec : T.sectors)
        if (sec.in == static_cast<int>(a) && sec.out == static_cast<int>(a))
          for (int k = 0; k < sec.size; ++k) ua(sec.offset + k) = T.unit(sec.offset + k);
      Vec p = T.multiply(blk.P, ua);
      Pa.push_back(p);
      int r = p.cwiseAbs().maxCoeff() < 1e-10 ? 0 : ideal_dim(T, p) / n;
      ra.push_back(r);
    }
    int seed_label = -1;
    for (size_t a = 0; a < ra.size(); ++a)
      if (ra[a] > 0) {
        seed_label = static_cast<int>(a);
        break;
      }
    if (seed_label < 0) throw DecompositionError("block without boundary support");
    // Rank-one projection inside the seed labeling.
    Vec E0 = Pa[seed_label];
    if (ra[seed_label] > 1) {
      Mat full = Mat::Identity(dim, dim);
      Vec r = random_self_adjoint(T, full, rng);
      Vec q = T.multiply(E0, T.multiply(r, E0));
      Spectrum sq = spectrum(T.left_matrix(q));
      auto cq = clusters(sq.values, 1e-6);
      bool found = false;
      for (const auto& c : cq) {
        if (std::abs(sq.values(c[0])) < 1e-6) continue;
        Vec cand = purify_element(T, apply_projector(sq, c, E0));
        if (cand.cwiseAbs().maxCoeff() > 1e-8 && ideal_dim(T, cand) == n) {
          E0 = cand;
          found = true;
          break;
        }
      }
      if (!found) throw DecompositionError("no rank-one seed found");
    }
    int k0 = 0;
    E0.cwiseAbs().maxCoeff(&k0);
    auto pairing = [&](const Vec& u, const Vec& v) { return T.multiply(T.star(u), v)(k0) / E0(k0); };
    // Partial isometries v_{b,j} with v^* v = E0.
    std::vector<Vec> vs;
    for (size_t b = 0; b < T.labelings.size(); ++b) {
      if (ra[b] == 0) continue;
      std::vector<Vec> found;
      if (static_cast<int>(b) == seed_label) found.push_back(E0);
      for (int i = 0; i < dim && static_cast<int>(found.size()) < ra[b]; ++i) {
        Vec u = T.multiply(Pa[b], T.multiply(T.basis_vector(i), E0));
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& f : found) u -= pairing(f, u) * f;
        cplx nn = pairing(u, u);
        if (std::abs(nn) < 1e-9) continue;
        if (nn.real() < 1e-9 || std::abs(nn.imag()) > 1e-6 * std::abs(nn))
          throw DecompositionError("tube involution is not positive on the block");
        found.push_back(u / std::sqrt(nn.real()));
      }
      if (static_cast<int>(found.size()) != ra[b]) throw DecompositionError("could not span a block row");
      for (int j = 0; j < ra[b]; ++j) {
        blk.index.push_back({static_cast<int>(b), j});
        vs.push_back(found[j]);
      }
    }
    if (static_cast<int>(vs.size()) != n) throw DecompositionError("block size mismatch");
    blk.E.assign(n, std::vector<Vec>(n));
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) blk.E[r][s] = T.multiply(vs[r], T.star(vs[s]));
    out.blocks.push_back(std::move(blk));
  }
  if (total != dim) throw DecompositionError("sum of squared block sizes differs from the tube dimension");

  // Relation residuals.
  Vec sum = Vec::Zero(dim);
  double worst = 0.0, star_worst = 0.0;
  for (size_t X = 0; X < out.blocks.size(); ++X) {
    const auto& B = out.blocks[X];
    for (int r = 0; r < B.n; ++r) {
      sum += B.E[r][r];
      for (int s = 0; s < B.n; ++s) {
        star_worst = std::max(star_worst, (T.star(B.E[r][s]) - B.E[s][r]).cwiseAbs().maxCoeff());
        for (size_t Y = 0; Y < out.blocks.size(); ++Y) {
          const auto& C = out.blocks[Y];
          for (int r2 = 0; r2 < C.n; ++r2)
            for (int s2 = 0; s2 < C.n; ++s2) {
              Vec prod = T.multiply(C.E[r2][s2], B.E[r][s]);
              Vec expect = (X == Y && s2 == r) ? Vec(B.E[r2][s]) : Vec(Vec::Zero(dim));
              worst = std::max(worst, (prod - expect).cwiseAbs().maxCoeff());
            }
        }
      }
    }
  }
  worst = std::max(worst, (sum - T.unit).cwiseAbs().maxCoeff());
  out.residual = worst;
  out.star_residual = star_worst;
  if (worst > tol || star_worst > tol)
    throw DecompositionError("matrix-unit relations violated (residual " + std::to_string(std::max(worst, star_worst)) + ")");
  return out;
}

HalfBraidingReport check_half_braiding(HomCalculus& H, const HalfBraiding& hb) {
  const CategoryData& cat = H.cat();
  HalfBraidingReport rep;
  Word X{hb.object};
  rep.unit_defect = (hb.sigma[cat.unit] - unit_swap(H, hb.object)).max_abs();
  for (int c = 0; c < cat.rank(); ++c) {
    Morphism u = H.compose(HomCalculus::dagger(hb.sigma[c]), hb.sigma[c]);
    rep.unitarity = std::max(rep.unitarity, (u - H.identity(u.source)).max_abs());
  }
  for (int x = 0; x < cat.rank(); ++x)
    for (int y = 0; y < cat.rank(); ++y) {
      Morphism sxy = H.sigma_word(hb, simple_word({x, y}));
      for (int z = 0; z < cat.rank(); ++z)
        for (int mu = 0; mu < cat.N(x, y, z); ++mu) {
          Morphism psi = H.vertex(x, y, z, mu);
          Morphism lhs = H.compose(H.tensor(psi, H.identity(X)), hb.sigma[z]);
          Morphism rhs = H.compose(sxy, H.tensor(H.identity(X), psi));
          rep.naturality = std::max(rep.naturality, (lhs - rhs).max_abs());
        }
    }
  return rep;
}

CenterObject extract_half_braidings(HomCalculus& H, const TubeAlgebraTable& T,
                                    const MatrixUnitSystem& units, int block, double tol) {
  if (T.marked.letters.size() != 1 || T.marked.letters[0].second < 0)
    throw HexagonResidualError("half-braidings are read off the single-strand tube");
  const CategoryData& cat = H.cat();
  const MatrixUnitBlock& B = units.blocks.at(block);
  CenterObject obj;
  obj.n.assign(cat.rank(), 0);
  Leg X;
  std::vector<int> lab;
  for (const auto& [a, j] : B.index) {
    int simple = T.labelings[a][0];
    X.summands.push_back(simple);
    lab.push_back(a);
    obj.n[simple]++;
  }
  obj.hb.object = X;
  // kappa_a: coefficient of the unit-strand component of E_{aa}.
  std::vector<double> kappa(B.n);
  double kappa_defect = 0.0;
  for (int r = 0; r < B.n; ++r) {
    int sec = T.find_sector(lab[r], lab[r], cat.unit);
    Morphism comp = T.component(H, B.E[r][r], sec);
    Morphism ref = unit_swap(H, simple_leg(X.summands[r]));
    int c = X.summands[r];
    cplx k = comp.blocks[c](0, 0) / ref.blocks[c](0, 0);
    kappa[r] = k.real();
    kappa_defect = std::max(kappa_defect, (comp - k * ref).max_abs() + std::abs(k.imag()));
    if (kappa[r] <= 0.0) throw HexagonResidualError("non-positive unit component in matrix unit");
  }
  Word Xw{X};
  obj.hb.sigma.clear();
  for (int x = 0; x < cat.rank(); ++x) {
    Morphism sig = H.zero(concat(Xw, simple_word({x})), concat(simple_word({x}), Xw));
    for (int r = 0; r < B.n; ++r)
      for (int s = 0; s < B.n; ++s) {
        int sec = T.find_sector(lab[s], lab[r], x);
        if (sec < 0) continue;
        Morphism K = T.component(H, B.E[r][s], sec);
        K *= 1.0 / (cat.d[x] * std::sqrt(kappa[r] * kappa[s]));
        Morphism placed = H.compose(H.tensor(H.identity(simple_word({x})), H.inclusion(X, r)),
                                    H.compose(K, H.tensor(HomCalculus::dagger(H.inclusion(X, s)),
                                                          H.identity(simple_word({x})))));
        sig += placed;
      }
    obj.hb.sigma.push_back(sig);
  }
  obj.extraction_residual = std::max(kappa_defect, (obj.hb.sigma[cat.unit] - unit_swap(H, X)).max_abs());
  obj.hb.sigma[cat.unit] = unit_swap(H, X);
  HalfBraidingReport rep = check_half_braiding(H, obj.hb);
  double worst = std::max({obj.extraction_residual, rep.unitarity, rep.naturality});
  if (worst > tol)
    throw HexagonResidualError("extracted half-braiding fails its axioms (residual " + std::to_string(worst) + ")");
  obj.d = 0.0;
  for (int a = 0; a < cat.rank(); ++a) obj.d += obj.n[a] * cat.d[a];
  obj.dim_from_units = cat.D2() * cat.d[X.summands[0]] * kappa[0];
  // Dehn twist: the boundary strand becomes the wrapping strand.
  Vec twist = Vec::Zero(T.dim);
  for (int a = 0; a < cat.rank(); ++a) {
    int sec = T.find_sector(a, a, a);
    if (sec < 0) continue;
    write_sector(T.sectors[sec], H.identity(simple_word({a, a})), twist);
  }
  Vec Pt = T.multiply(B.P, twist);
  // The Dehn element acts by the inverse ribbon twist of the braiding beta_{X,Y} = sigma^X_Y.
  obj.twist = 1.0 / (B.P.dot(Pt) / B.P.dot(B.P));
  return obj;
}

}  // namespace lwdhr
