#include "lwdhr/lw_engine.hpp"

#include <algorithm>
#include <cmath>

namespace lwdhr {

namespace {

constexpr double kPrune = 1e-14;

void accumulate(State& out, const Config& c, const Morphism& a) {
  if (a.max_abs() < kPrune) return;
  auto it = out.amp.find(c);
  if (it == out.amp.end())
    out.amp.emplace(c, a);
  else
    it->second += a;
}

void prune(State& s) {
  for (auto it = s.amp.begin(); it != s.amp.end();)
    it = it->second.max_abs() < kPrune ? s.amp.erase(it) : std::next(it);
}

std::vector<int> nonvacuum(const std::vector<int>& v) {
  std::vector<int> out;
  for (int x : v)
    if (x != 0) out.push_back(x);
  return out;
}

}  // namespace

SectorModel::SectorModel(CenterCategory& Z, const FiducialGeometry& G, int chirality)
    : Z_(Z), G_(G), chirality_(chirality) {
  if (chirality != 1 && chirality != -1) throw ConfigError("chirality must be +1 or -1");
}

Word SectorModel::amplitude_word(const Config& c) const {
  std::vector<int> labels;
  for (int p : G_.order())
    if (c[p] != 0) labels.push_back(c[p]);
  return Z_.word(labels);
}

State SectorModel::vacuum() {
  State s;
  s.amp.emplace(Config(punctures(), 0), Z_.hom().identity({}));
  return s;
}

State SectorModel::random_state(const std::map<int, int>& labels, std::mt19937_64& rng) {
  Config c(punctures(), 0);
  for (auto [p, X] : labels) c.at(p) = X;
  std::vector<int> word;
  for (int p : G_.order())
    if (c[p] != 0) word.push_back(c[p]);
  State s;
  if (word.empty()) {
    s.amp.emplace(c, Z_.hom().identity({}));
    return s;
  }
  const auto& basis = Z_.hom_basis({}, word);
  if (basis.empty()) return s;
  std::normal_distribution<double> g;
  Morphism a = Z_.hom().zero({}, Z_.word(word));
  for (const auto& b : basis) a += cplx(g(rng), g(rng)) * b;
  s.amp.emplace(c, a);
  return scale(1.0 / norm(s), s);
}

cplx SectorModel::inner(const State& a, const State& b) const {
  cplx t = 0.0;
  for (const auto& [c, x] : a.amp) {
    auto it = b.amp.find(c);
    if (it != b.amp.end()) t += Z_.hom().trace_inner_product(x, it->second);
  }
  return t;
}

double SectorModel::norm(const State& a) const { return std::sqrt(std::max(0.0, inner(a, a).real())); }

double SectorModel::distance(const State& a, const State& b) const {
  double t = 0.0;
  for (const auto& [c, x] : a.amp) {
    auto it = b.amp.find(c);
    Morphism d = it == b.amp.end() ? x : x - it->second;
    t += Z_.hom().trace_inner_product(d, d).real();
  }
  for (const auto& [c, y] : b.amp)
    if (!a.amp.count(c)) t += Z_.hom().trace_inner_product(y, y).real();
  return std::sqrt(std::max(0.0, t));
}

State SectorModel::axpy(cplx s, const State& x, const State& y) {
  State out = y;
  for (const auto& [c, a] : x.amp) accumulate(out, c, s * a);
  prune(out);
  return out;
}

State SectorModel::scale(cplx s, const State& x) {
  State out;
  for (const auto& [c, a] : x.amp) out.amp.emplace(c, s * a);
  return out;
}

Morphism SectorModel::strip_vacuum(const Morphism& f, const std::vector<int>& src, const std::vector<int>& tgt) {
  HomCalculus& H = Z_.hom();
  auto ins = [&](const std::vector<int>& labels) {
    Morphism acc = H.identity({});
    for (int x : labels) acc = H.tensor(acc, x == 0 ? H.unit_in() : H.identity(Z_.word({x})));
    return acc;
  };
  return H.compose(HomCalculus::dagger(ins(tgt)), H.compose(f, ins(src)));
}

const Morphism& SectorModel::crossing(const std::vector<int>& labels, int pos, bool left_behind) {
  auto key = std::make_tuple(labels, pos, left_behind);
  auto it = cross_cache_.find(key);
  if (it != cross_cache_.end()) return it->second;
  const int L = labels[pos], R = labels[pos + 1];
  const bool inverse = (left_behind == (chirality_ == 1));
  Morphism core = inverse ? HomCalculus::dagger(Z_.braiding(R, L)) : Z_.braiding(L, R);
  Word left = Z_.word(std::vector<int>(labels.begin(), labels.begin() + pos));
  Word right = Z_.word(std::vector<int>(labels.begin() + pos + 2, labels.end()));
  return cross_cache_[key] = Z_.hom().pad(left, core, right);
}

Morphism SectorModel::transport(const Config& cfg, Morphism a, std::vector<int> from, const std::vector<int>& to) {
  if (from == to) return a;
  const auto& order = G_.order();
  const int lo = G_.position(*std::min_element(from.begin(), from.end(),
                                               [&](int x, int y) { return G_.position(x) < G_.position(y); }));
  std::map<int, int> rank;
  for (size_t i = 0; i < to.size(); ++i) rank[to[i]] = static_cast<int>(i);
  std::vector<int> before, after;
  std::set<int> window(from.begin(), from.end());
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    int p = order[i];
    if (window.count(p) || cfg[p] == 0) continue;
    (i < lo ? before : after).push_back(cfg[p]);
  }
  const auto& P = G_.punctures();
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (size_t j = 0; j + 1 < from.size(); ++j) {
      int A = from[j], B = from[j + 1];
      if (rank[A] < rank[B]) continue;
      if (cfg[A] != 0 && cfg[B] != 0) {
        if (P[A].depth == P[B].depth)
          throw PlacementError("anchor would cross tails of equal depth at " + P[A].name + ", " + P[B].name);
        std::vector<int> labels = before;
        int pos = static_cast<int>(before.size());
        for (size_t k = 0; k < from.size(); ++k) {
          if (k < j && cfg[from[k]] != 0) ++pos;
          if (cfg[from[k]] != 0) labels.push_back(cfg[from[k]]);
        }
        labels.insert(labels.end(), after.begin(), after.end());
        a = Z_.hom().compose(crossing(labels, pos, P[A].depth > P[B].depth), a);
      }
      std::swap(from[j], from[j + 1]);
      swapped = true;
    }
  }
  return a;
}

State SectorModel::dr(const Placement& Pl, const std::vector<int>& in, const std::vector<int>& out,
                      const Morphism& beta, const State& s) {
  if (in.size() != Pl.punctures.size() || out.size() != Pl.punctures.size())
    throw ShapeMismatch("Drinfeld insertion labels do not match the placement");
  const std::vector<int> in_nv = nonvacuum(in), out_nv = nonvacuum(out);
  // Source and target may each carry or omit their vacuum legs.
  const bool src_nv = beta.source == Z_.word(in_nv), tgt_nv = beta.target == Z_.word(out_nv);
  if ((!src_nv && !(beta.source == Z_.word(in))) || (!tgt_nv && !(beta.target == Z_.word(out))))
    throw ShapeMismatch("Drinfeld insertion morphism has the wrong shape");
  Morphism b = src_nv && tgt_nv ? beta : strip_vacuum(beta, src_nv ? in_nv : in, tgt_nv ? out_nv : out);
  const auto& order = G_.order();
  const auto& P = G_.punctures();
  std::set<int> members(Pl.punctures.begin(), Pl.punctures.end());
  members.insert(Pl.filled.begin(), Pl.filled.end());
  int lo = static_cast<int>(order.size()), hi = -1;
  for (int m : members) {
    lo = std::min(lo, G_.position(m));
    hi = std::max(hi, G_.position(m));
  }
  const int first = Pl.punctures.front(), last = Pl.punctures.back();
  std::vector<int> from(order.begin() + lo, order.begin() + hi + 1), west, mid, east;
  for (int p : from) {
    if (members.count(p))
      mid.push_back(p);
    else if (P[p].depth != P[last].depth)
      east.push_back(p);
    else if (P[p].depth != P[first].depth)
      west.push_back(p);
    else
      east.push_back(p);
  }
  std::vector<int> to = west;
  to.insert(to.end(), mid.begin(), mid.end());
  to.insert(to.end(), east.begin(), east.end());

  State res;
  for (const auto& [cfg, a] : s.amp) {
    bool ok = true;
    for (size_t i = 0; i < in.size() && ok; ++i) ok = cfg[Pl.punctures[i]] == in[i];
    for (int f : Pl.filled) ok = ok && cfg[f] == 0;
    if (!ok) continue;
    Morphism a1 = transport(cfg, a, from, to);
    std::vector<int> pre, post;
    for (int i = 0; i < lo; ++i)
      if (cfg[order[i]] != 0) pre.push_back(cfg[order[i]]);
    for (int p : west)
      if (cfg[p] != 0) pre.push_back(cfg[p]);
    for (int p : east)
      if (cfg[p] != 0) post.push_back(cfg[p]);
    for (int i = hi + 1; i < static_cast<int>(order.size()); ++i)
      if (cfg[order[i]] != 0) post.push_back(cfg[order[i]]);
    Morphism a2 = Z_.hom().compose(Z_.hom().pad(Z_.word(pre), b, Z_.word(post)), a1);
    Config cfg2 = cfg;
    for (size_t i = 0; i < out.size(); ++i) cfg2[Pl.punctures[i]] = out[i];
    accumulate(res, cfg2, transport(cfg2, std::move(a2), to, from));
  }
  prune(res);
  return res;
}

State SectorModel::project(const Placement& Pl, const std::vector<int>& labels, const State& s) const {
  State res;
  for (const auto& [cfg, a] : s.amp) {
    bool ok = true;
    for (size_t i = 0; i < labels.size() && ok; ++i) ok = cfg[Pl.punctures[i]] == labels[i];
    for (int f : Pl.filled) ok = ok && cfg[f] == 0;
    if (ok) res.amp.emplace(cfg, a);
  }
  return res;
}

State SectorModel::project_filled(const Placement& Pl, const State& s) const {
  State res;
  for (const auto& [cfg, a] : s.amp) {
    bool ok = true;
    for (int f : Pl.filled) ok = ok && cfg[f] == 0;
    if (ok) res.amp.emplace(cfg, a);
  }
  return res;
}

State SectorModel::link_projector(const Placement& L, int X, const std::string& kind, const State& s) {
  const int Xb = Z_.dual(X);
  if (kind == "11") return project(L, {0, 0}, s);
  if (kind == "X1") return project(L, {X, 0}, s);
  if (kind == "1X") return project(L, {0, X}, s);
  if (kind == "XX") {
    Morphism v = Z_.pair_creation(X);
    return dr(L, {X, Xb}, {X, Xb}, Z_.hom().compose(v, HomCalculus::dagger(v)), s);
  }
  throw ConfigError("unknown link projector " + kind);
}

State SectorModel::gate(const Placement& L, int X, const State& s) {
  if (X == Z_.vacuum()) return s;
  HomCalculus& H = Z_.hom();
  const int Xb = Z_.dual(X);
  Morphism v = Z_.pair_creation(X);
  Morphism idX = H.identity(Z_.word({X}));
  State out = s;
  auto add = [&](const State& t, double sign) { out = axpy(sign, t, out); };
  add(dr(L, {0, 0}, {X, Xb}, v, s), 1);
  add(dr(L, {X, Xb}, {0, 0}, HomCalculus::dagger(v), s), 1);
  add(dr(L, {X, 0}, {0, X}, idX, s), 1);
  add(dr(L, {0, X}, {X, 0}, idX, s), 1);
  add(link_projector(L, X, "11", s), -1);
  add(link_projector(L, X, "XX", s), -1);
  add(link_projector(L, X, "X1", s), -1);
  add(link_projector(L, X, "1X", s), -1);
  return out;
}

State SectorModel::circuit(const std::vector<Placement>& links, int X, const State& s) {
  State t = s;
  for (const auto& L : links) t = gate(L, X, t);
  return t;
}

State SectorModel::circuit_adjoint(const std::vector<Placement>& links, int X, const State& s) {
  State t = s;
  for (auto it = links.rbegin(); it != links.rend(); ++it) t = gate(*it, X, t);
  return t;
}

std::vector<Placement> SectorModel::fiducial(int n) const {
  if (n > G_.depth() + 2) throw TruncationError("fiducial circuit beyond the truncation window");
  std::vector<Placement> out;
  for (int k = 1; k <= n; ++k) out.push_back(link(G_.L(k)));
  return out;
}

std::vector<Placement> SectorModel::right_chain(int n) const {
  if (n > G_.depth() + 2) throw TruncationError("right-chain circuit beyond the truncation window");
  std::vector<Placement> out;
  for (int k = 1; k <= n; ++k) out.push_back(link(G_.Lp(k)));
  return out;
}

}  // namespace lwdhr
