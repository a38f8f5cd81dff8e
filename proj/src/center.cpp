#include "lwdhr/center.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace lwdhr {

namespace {

constexpr double kTwoPi = 6.283185307179586;

// Canonical identification [1, c] -> [c, 1].
Morphism trivial_sigma(HomCalculus& H, int c) {
  Word w = simple_word({c});
  return H.compose(H.tensor(H.identity(w), H.unit_in()), HomCalculus::dagger(H.tensor(H.unit_in(), H.identity(w))));
}

// Component of sigma_c between summands s (source) and r (target) of the leg.
Morphism sigma_component(HomCalculus& H, const HalfBraiding& hb, int c, int r, int s) {
  Word cw = simple_word({c});
  return H.compose(H.tensor(H.identity(cw), HomCalculus::dagger(H.inclusion(hb.object, r))),
                   H.compose(hb.sigma[c], H.tensor(H.inclusion(hb.object, s), H.identity(cw))));
}

cplx first_entry(const Morphism& m, double tol) {
  for (const auto& b : m.blocks)
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j)
        if (std::abs(b(i, j)) > tol) return b(i, j);
  return 0.0;
}

// Rephase summands 1..n-1 so that the first nonzero sigma entry linking them to summand 0 is positive.
void fix_summand_phases(HomCalculus& H, HalfBraiding& hb) {
  const int n = static_cast<int>(hb.object.summands.size());
  if (n < 2) return;
  Word X{hb.object};
  Morphism U = H.zero(X, X);
  for (int r = 0; r < n; ++r) {
    cplx u = 1.0;
    if (r > 0)
      for (int c = 0; c < H.rank(); ++c) {
        cplx e = first_entry(sigma_component(H, hb, c, r, 0), 1e-8);
        if (e != cplx(0.0)) {
          u = e / std::abs(e);
          break;
        }
      }
    Morphism inc = H.inclusion(hb.object, r);
    U += u * H.compose(inc, HomCalculus::dagger(inc));
  }
  for (int c = 0; c < H.rank(); ++c) {
    Word cw = simple_word({c});
    hb.sigma[c] = H.compose(H.tensor(H.identity(cw), HomCalculus::dagger(U)),
                            H.compose(hb.sigma[c], H.tensor(U, H.identity(cw))));
  }
}

bool is_vacuum(HomCalculus& H, const CenterObject& X) {
  const auto& legs = X.hb.object.summands;
  if (legs.size() != 1 || legs[0] != H.cat().unit) return false;
  for (int c = 0; c < H.rank(); ++c)
    if ((X.hb.sigma[c] - trivial_sigma(H, c)).max_abs() > 1e-8) return false;
  return true;
}

struct SortKey {
  long long d, spin;
  std::vector<int> n;
  std::vector<long long> fingerprint;
  bool operator<(const SortKey& o) const {
    return std::tie(d, spin, n, fingerprint) < std::tie(o.d, o.spin, o.n, o.fingerprint);
  }
};

long long quantize(double v) { return std::llround(v * 1e7); }

SortKey sort_key(HomCalculus& H, const CenterObject& X) {
  SortKey k;
  k.d = quantize(X.d);
  double arg = std::arg(X.twist);
  if (arg < -1e-9) arg += kTwoPi;
  k.spin = quantize(std::abs(arg) < 1e-9 ? 0.0 : arg);
  k.n = X.n;
  const int n = static_cast<int>(X.hb.object.summands.size());
  for (int c = 0; c < H.rank(); ++c)
    for (int r = 0; r < n; ++r) {
      Morphism m = sigma_component(H, X.hb, c, r, r);
      for (const auto& b : m.blocks)
        for (int i = 0; i < b.rows(); ++i)
          for (int j = 0; j < b.cols(); ++j) {
            k.fingerprint.push_back(quantize(b(i, j).real()));
            k.fingerprint.push_back(quantize(b(i, j).imag()));
          }
    }
  return k;
}

Vec flatten(const Morphism& m) {
  int total = 0;
  for (const auto& b : m.blocks) total += static_cast<int>(b.size());
  Vec v(total);
  int pos = 0;
  for (const auto& b : m.blocks)
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) v(pos++) = b(i, j);
  return v;
}

Morphism unflatten(HomCalculus& H, const Word& s, const Word& t, const Vec& v) {
  Morphism m = H.zero(s, t);
  int pos = 0;
  for (auto& b : m.blocks)
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) b(i, j) = v(pos++);
  return m;
}

}  // namespace

std::vector<CenterObject> center_simples(HomCalculus& H, std::uint64_t seed, double tol) {
  TubeAlgebraTable T = build_tube(H, ObjectWord{{{0, 1}}});
  MatrixUnitSystem units = decompose(T, seed, tol);
  std::vector<CenterObject> objs;
  for (size_t b = 0; b < units.blocks.size(); ++b) {
    CenterObject X = extract_half_braidings(H, T, units, static_cast<int>(b), tol);
    fix_summand_phases(H, X.hb);
    objs.push_back(std::move(X));
  }
  std::vector<std::pair<SortKey, int>> keyed;
  int vac = -1;
  for (size_t i = 0; i < objs.size(); ++i) {
    if (vac < 0 && is_vacuum(H, objs[i])) vac = static_cast<int>(i);
    keyed.push_back({sort_key(H, objs[i]), static_cast<int>(i)});
  }
  if (vac < 0) throw DecompositionError("no vacuum block among the tube blocks");
  std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    if ((a.second == vac) != (b.second == vac)) return a.second == vac;
    return a.first < b.first;
  });
  std::vector<CenterObject> out;
  for (const auto& [k, i] : keyed) {
    out.push_back(objs[i]);
    out.back().label = "Z" + std::to_string(out.size() - 1);
  }
  return out;
}

std::vector<Morphism> intertwiner_basis(HomCalculus& H, const Word& source, const std::vector<Morphism>& sigma_source,
                                        const Word& target, const std::vector<Morphism>& sigma_target, double tol) {
  Morphism proto = H.zero(source, target);
  const int params = static_cast<int>(flatten(proto).size());
  if (params == 0) return {};
  std::vector<Vec> cols;
  int rows = 0;
  for (int k = 0; k < params; ++k) {
    Vec e = Vec::Zero(params);
    e(k) = 1.0;
    Morphism f = unflatten(H, source, target, e);
    std::vector<Vec> parts;
    for (int c = 0; c < H.rank(); ++c) {
      Word cw = simple_word({c});
      Morphism lhs = H.compose(H.tensor(H.identity(cw), f), sigma_source[c]);
      Morphism rhs = H.compose(sigma_target[c], H.tensor(f, H.identity(cw)));
      parts.push_back(flatten(lhs - rhs));
    }
    int len = 0;
    for (const auto& p : parts) len += static_cast<int>(p.size());
    Vec col(len);
    int pos = 0;
    for (const auto& p : parts) {
      col.segment(pos, p.size()) = p;
      pos += static_cast<int>(p.size());
    }
    rows = len;
    cols.push_back(col);
  }
  Mat A(rows, params);
  for (int k = 0; k < params; ++k) A.col(k) = cols[k];
  Mat null = la::null_space(A, tol);
  if (null.cols() == 0) return {};
  std::vector<Morphism> raw;
  for (int k = 0; k < null.cols(); ++k) raw.push_back(unflatten(H, source, target, null.col(k)));
  Mat G(raw.size(), raw.size());
  for (size_t i = 0; i < raw.size(); ++i)
    for (size_t j = 0; j < raw.size(); ++j) G(i, j) = H.trace_inner_product(raw[i], raw[j]);
  Mat C = la::orthonormalize(Mat::Identity(raw.size(), raw.size()), G, 1e-12);
  std::vector<Morphism> out;
  for (int k = 0; k < C.cols(); ++k) {
    Morphism m = H.zero(source, target);
    for (size_t i = 0; i < raw.size(); ++i) m += C(i, k) * raw[i];
    out.push_back(std::move(m));
  }
  if (out.size() == 1) {
    Vec v = flatten(out[0]);
    double big = v.cwiseAbs().maxCoeff();
    for (int i = 0; i < v.size(); ++i)
      if (std::abs(v(i)) > big * (1.0 - 1e-9)) {
        out[0] *= std::conj(v(i)) / std::abs(v(i));
        break;
      }
  }
  return out;
}

CenterCategory::CenterCategory(HomCalculus& H, std::uint64_t seed, double tol)
    : CenterCategory(H, center_simples(H, seed, tol)) {}

CenterCategory::CenterCategory(HomCalculus& H, std::vector<CenterObject> simples)
    : H_(H), simples_(std::move(simples)), dual_(simples_.size(), -1) {}

int CenterCategory::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (simples_[i].label == label) return i;
  throw UnknownLabel("no center simple named '" + label + "'");
}

double CenterCategory::total_dim_sq() const {
  double s = 0.0;
  for (const auto& X : simples_) s += X.d * X.d;
  return s;
}

Word CenterCategory::word(const std::vector<int>& objs) const {
  Word w;
  for (int X : objs) w.push_back(simples_.at(X).hb.object);
  return w;
}

Morphism CenterCategory::sigma(const std::vector<int>& objs, int c) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_pair(objs, c);
  auto it = sigma_cache_.find(key);
  if (it != sigma_cache_.end()) return it->second;
  Morphism acc = H_.identity(simple_word({c}));
  for (int k = static_cast<int>(objs.size()) - 1; k >= 0; --k) {
    Word rest = word(std::vector<int>(objs.begin() + k + 1, objs.end()));
    Word head{simples_[objs[k]].hb.object};
    Morphism inner = H_.pad(head, acc, {});
    Morphism outer = H_.pad({}, simples_[objs[k]].hb.sigma[c], rest);
    acc = H_.compose(outer, inner);
  }
  sigma_cache_.emplace(key, acc);
  return acc;
}

Morphism CenterCategory::braiding(int X, int Y) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_pair(X, Y);
  auto it = braid_cache_.find(key);
  if (it != braid_cache_.end()) return it->second;
  return braid_cache_[key] = H_.sigma_leg(simples_.at(X).hb, simples_.at(Y).hb.object);
}

Morphism CenterCategory::monodromy(int X, int Y) { return H_.compose(braiding(Y, X), braiding(X, Y)); }

const std::vector<Morphism>& CenterCategory::hom_basis(const std::vector<int>& src, const std::vector<int>& tgt) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_pair(src, tgt);
  auto it = hom_cache_.find(key);
  if (it != hom_cache_.end()) return it->second;
  std::vector<Morphism> ss, ts;
  for (int c = 0; c < H_.rank(); ++c) {
    ss.push_back(sigma(src, c));
    ts.push_back(sigma(tgt, c));
  }
  auto basis = intertwiner_basis(H_, word(src), ss, word(tgt), ts);
  return hom_cache_.emplace(key, std::move(basis)).first->second;
}

int CenterCategory::N(int X, int Y, int Z) { return static_cast<int>(hom_basis({X, Y}, {Z}).size()); }

Morphism CenterCategory::vertex(int X, int Y, int Z, int mu) {
  const auto& basis = hom_basis({X, Y}, {Z});
  if (mu < 0 || mu >= static_cast<int>(basis.size())) throw ShapeMismatch("no such center fusion channel");
  return std::sqrt(dim(Z)) * HomCalculus::dagger(basis[mu]);
}

int CenterCategory::dual(int X) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (dual_[X] >= 0) return dual_[X];
  for (int Y = 0; Y < size(); ++Y)
    if (N(X, Y, vacuum()) > 0) return dual_[X] = Y;
  throw DecompositionError("center simple without a conjugate");
}

HalfBraiding CenterCategory::dual_object(int X) {
  const HalfBraiding& hb = simples_.at(X).hb;
  const CategoryData& cat = H_.cat();
  HalfBraiding out;
  for (int s : hb.object.summands) out.object.summands.push_back(cat.dual[s]);
  Word Xw{hb.object}, Xs{out.object};
  Morphism coevX = H_.zero({}, concat(Xw, Xs));
  Morphism evX = H_.zero(concat(Xs, Xw), {});
  for (size_t s = 0; s < hb.object.summands.size(); ++s) {
    int x = hb.object.summands[s];
    Morphism i = H_.inclusion(hb.object, static_cast<int>(s));
    Morphism is = H_.inclusion(out.object, static_cast<int>(s));
    coevX += H_.compose(H_.tensor(i, is), H_.coev(x));
    evX += H_.compose(H_.ev(x), H_.tensor(HomCalculus::dagger(is), HomCalculus::dagger(i)));
  }
  for (int c = 0; c < H_.rank(); ++c) {
    Word cw = simple_word({c});
    Morphism open = H_.pad(concat(Xs, cw), coevX, {});
    Morphism cross = H_.pad(Xs, HomCalculus::dagger(hb.sigma[c]), Xs);
    Morphism close = H_.pad({}, evX, concat(cw, Xs));
    out.sigma.push_back(H_.compose(close, H_.compose(cross, open)));
  }
  return out;
}

Morphism CenterCategory::pair_creation(int X) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = pair_cache_.find(X);
  if (it != pair_cache_.end()) return it->second;
  const Leg& leg = simples_.at(X).hb.object;
  Leg star;
  for (int s : leg.summands) star.summands.push_back(H_.cat().dual[s]);
  Morphism coevX = H_.zero({}, Word{leg, star});
  for (size_t s = 0; s < leg.summands.size(); ++s)
    coevX += H_.compose(H_.tensor(H_.inclusion(leg, static_cast<int>(s)), H_.inclusion(star, static_cast<int>(s))),
                        H_.coev(leg.summands[s]));
  Morphism v = H_.compose(H_.pad(Word{leg}, zeta(X), {}), coevX);
  return pair_cache_[X] = (1.0 / std::sqrt(dim(X))) * v;
}

Morphism CenterCategory::zeta(int X) {
  HalfBraiding star = dual_object(X);
  int Xb = dual(X);
  std::vector<Morphism> ts;
  for (int c = 0; c < H_.rank(); ++c) ts.push_back(sigma({Xb}, c));
  auto basis = intertwiner_basis(H_, Word{star.object}, star.sigma, word({Xb}), ts);
  if (basis.size() != 1) throw CoherenceError("dual object is not isomorphic to the conjugate simple");
  Morphism z = basis[0];
  for (auto& b : z.blocks)
    if (b.size() > 0) b = la::polar_unitary(b);
  return z;
}

Mat s_matrix(CenterCategory& Z) {
  const int n = Z.size();
  const double D = std::sqrt(Z.total_dim_sq());
  Mat S(n, n);
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y) S(X, Y) = Z.hom().trace(Z.monodromy(X, Y)) / D;
  return S;
}

SymbolTable center_symbols(CenterCategory& Z, CenterReport* report) {
  HomCalculus& H = Z.hom();
  const int n = Z.size();
  SymbolTable t;
  for (const auto& X : Z.simples()) {
    t.labels.push_back(X.label);
    t.d.push_back(X.d);
  }
  t.unit = Z.vacuum();
  t.dual.resize(n);
  for (int X = 0; X < n; ++X) t.dual[X] = Z.dual(X);
  t.resize_fusion();
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int W = 0; W < n; ++W) t.set_N(X, Y, W, Z.N(X, Y, W));

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          struct Tree {
            int mid, m1, m2;
            Morphism m;
          };
          std::vector<Tree> left, right;
          Word wc = Z.word({c}), wa = Z.word({a});
          for (int e = 0; e < n; ++e)
            for (int m1 = 0; m1 < t.N(a, b, e); ++m1)
              for (int m2 = 0; m2 < t.N(e, c, d); ++m2)
                left.push_back({e, m1, m2, H.compose(H.tensor(Z.vertex(a, b, e, m1), H.identity(wc)), Z.vertex(e, c, d, m2))});
          for (int f = 0; f < n; ++f)
            for (int m3 = 0; m3 < t.N(b, c, f); ++m3)
              for (int m4 = 0; m4 < t.N(a, f, d); ++m4)
                right.push_back({f, m3, m4, H.compose(H.tensor(H.identity(wa), Z.vertex(b, c, f, m3)), Z.vertex(a, f, d, m4))});
          for (const auto& L : left)
            for (const auto& R : right) {
              cplx v = H.trace(H.compose(HomCalculus::dagger(R.m), L.m)) / Z.dim(d);
              t.F[{a, b, c, d, L.mid, R.mid, L.m1, L.m2, R.m1, R.m2}] = v;
            }
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Morphism beta;
      bool have = false;
      for (int c = 0; c < n; ++c)
        for (int mu = 0; mu < t.N(a, b, c); ++mu) {
          if (!have) {
            beta = Z.braiding(a, b);
            have = true;
          }
          Morphism moved = H.compose(beta, Z.vertex(a, b, c, mu));
          for (int nu = 0; nu < t.N(b, a, c); ++nu)
            t.R[{a, b, c, mu, nu}] = H.trace(H.compose(HomCalculus::dagger(Z.vertex(b, a, c, nu)), moved)) / Z.dim(c);
        }
    }
  t.finalize();

  CenterReport rep;
  rep.pentagon = verify_pentagon(t);
  rep.hexagon = verify_hexagons(t);
  rep.f_unitarity = f_unitarity_defect(t);
  rep.r_unitarity = r_unitarity_defect(t);
  rep.s_unitarity = la::unitarity_defect(s_matrix(Z));
  const double D4 = H.cat().D2() * H.cat().D2();
  rep.dim_identity = std::abs(Z.total_dim_sq() - D4);
  if (report) *report = rep;
  const double worst = std::max({rep.pentagon, rep.hexagon.worst(), rep.f_unitarity, rep.r_unitarity});
  if (worst > 1e-6) throw CoherenceError("center symbols fail coherence (residual " + std::to_string(worst) + ")");
  return t;
}

}  // namespace lwdhr
