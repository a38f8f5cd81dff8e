#include "lwdhr/dhr_analysis.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

namespace lwdhr {

StableValue stabilize(SectorModel& M, const OpFamily& A, const State& psi, double tol) {
  if (A.last - A.first < 1) throw TruncationError(A.name + ": window holds fewer than two indices");
  StableValue out{A.at(A.last, psi), A.last};
  const double scale = std::max(1.0, M.norm(out.value));
  for (int n = A.last - 1; n >= A.first; --n) {
    if (M.distance(A.at(n, psi), out.value) > tol * scale) break;
    out.N = n;
  }
  if (out.N == A.last)
    throw TruncationError(A.name + " does not stabilize within the truncation window (last index " +
                          std::to_string(A.last) + ")");
  return out;
}

DhrAnalysis::DhrAnalysis(SectorModel& M, std::vector<State> states, double stab_tol)
    : M_(M), states_(std::move(states)), tol_(stab_tol) {
  if (M_.geometry().depth() < 5) throw TruncationError("the sector analysis needs depth >= 5");
}

int DhrAnalysis::window() const { return M_.geometry().depth() - 1; }

const std::vector<Placement>& DhrAnalysis::fid(int n) {
  auto it = fid_.find(n);
  if (it == fid_.end()) it = fid_.emplace(n, M_.fiducial(n)).first;
  return it->second;
}

const std::vector<Placement>& DhrAnalysis::right(int n) {
  auto it = right_.find(n);
  if (it == right_.end()) it = right_.emplace(n, M_.right_chain(n)).first;
  return it->second;
}

Placement DhrAnalysis::pair_region(int n) {
  const FiducialGeometry& G = M_.geometry();
  return G.region_placement(G.link_union({G.L(n + 1), G.L(n + 2)}), {G.e(n + 2), G.e(n + 1), G.e(n)});
}

Morphism DhrAnalysis::fusion_morphism(int X, int Y, int Z, int mu) {
  return HomCalculus::dagger(M_.center().vertex(X, Y, Z, mu));
}

State DhrAnalysis::string_op(int n, int X, const State& s) { return M_.circuit(fid(n), X, s); }

State DhrAnalysis::string_op_adjoint(int n, int X, const State& s) { return M_.circuit_adjoint(fid(n), X, s); }

namespace {

std::string tag(const std::string& head, std::initializer_list<int> labels) {
  std::string s = head + "[";
  bool first = true;
  for (int x : labels) {
    if (!first) s += ",";
    s += std::to_string(x);
    first = false;
  }
  return s + "]";
}

// Prepends k vacuum legs to the source and m to the target.
Morphism with_units(HomCalculus& H, const Morphism& f, int k, int m) {
  auto units = [&](int count, const Word& w) {
    Morphism acc = H.identity({});
    for (int i = 0; i < count; ++i) acc = H.tensor(acc, H.unit_in());
    return H.tensor(acc, H.identity(w));
  };
  return H.compose(units(m, f.target), H.compose(f, HomCalculus::dagger(units(k, f.source))));
}

}  // namespace

OpFamily DhrAnalysis::phi_family(int X, int Y, int Z, const Morphism& alpha) {
  OpFamily f{tag("Phi", {X, Y, Z}), 1, window(), {}};
  f.at = [this, X, Y, Z, alpha = with_units(M_.center().hom(), alpha, 0, 1)](int n, const State& s) {
    State t = string_op(n, Y, string_op(n + 1, X, s));
    t = M_.dr(fid(n + 1).back(), {X, Y}, {0, Z}, alpha, t);
    return string_op_adjoint(n, Z, t);
  };
  return f;
}

OpFamily DhrAnalysis::phi_adjoint_family(int X, int Y, int Z, const Morphism& alpha) {
  OpFamily f{tag("Phi*", {X, Y, Z}), 1, window(), {}};
  Morphism ad = with_units(M_.center().hom(), HomCalculus::dagger(alpha), 1, 0);
  f.at = [this, X, Y, Z, ad](int n, const State& s) {
    State t = M_.dr(fid(n + 1).back(), {0, Z}, {X, Y}, ad, string_op(n, Z, s));
    return string_op_adjoint(n + 1, X, string_op_adjoint(n, Y, t));
  };
  return f;
}

OpFamily DhrAnalysis::pair_family(int X, int Y, const Morphism& g) {
  OpFamily f{tag("Dr-pair", {X, Y}), 1, window(), {}};
  f.at = [this, X, Y, g](int n, const State& s) {
    State t = M_.dr(fid(n + 1).back(), {X, Y}, {X, Y}, g, string_op(n, Y, string_op(n + 1, X, s)));
    return string_op_adjoint(n + 1, X, string_op_adjoint(n, Y, t));
  };
  return f;
}

OpFamily DhrAnalysis::tree_family(int X, int Y, int Z, int W, const Morphism& g) {
  OpFamily f{tag("Dr-tree", {X, Y, Z, W}), 1, window(), {}};
  f.at = [this, X, Y, Z, W, g = with_units(M_.center().hom(), g, 0, 2)](int n, const State& s) {
    State t = string_op(n, Z, string_op(n + 1, Y, string_op(n + 2, X, s)));
    t = M_.dr(pair_region(n), {X, Y, Z}, {0, 0, W}, g, t);
    return string_op_adjoint(n, W, t);
  };
  return f;
}

OpFamily DhrAnalysis::rho_family(int W, const OpFamily& A, int shift) {
  OpFamily f{"rho" + std::to_string(W) + "(" + A.name + ")", A.first, A.last, {}};
  f.at = [this, W, A, shift](int n, const State& s) {
    return string_op_adjoint(n + shift, W, A.at(n, string_op(n + shift, W, s)));
  };
  return f;
}

OpFamily DhrAnalysis::rho_observable(int W, const Op& x, const std::string& name) {
  OpFamily f{"rho" + std::to_string(W) + "(" + name + ")", 1, window(), {}};
  f.at = [this, W, x](int n, const State& s) { return string_op_adjoint(n, W, x(string_op(n, W, s))); };
  return f;
}

OpFamily DhrAnalysis::rho_rho_observable(int X, int Y, const Op& x, const std::string& name) {
  OpFamily f{"rho" + std::to_string(X) + "rho" + std::to_string(Y) + "(" + name + ")", 1, window(), {}};
  f.at = [this, X, Y, x](int n, const State& s) {
    State t = x(string_op(n, Y, string_op(n + 1, X, s)));
    return string_op_adjoint(n + 1, X, string_op_adjoint(n, Y, t));
  };
  return f;
}

State DhrAnalysis::apply(const OpFamily& A, const State& psi) {
  StableValue v = stabilize(M_, A, psi, tol_);
  int& N = stab_[A.name];
  N = std::max(N, v.N);
  return std::move(v.value);
}

PhiOperator DhrAnalysis::phi(int X, int Y, int Z, const Morphism& alpha) {
  PhiOperator p{X, Y, Z, alpha, phi_family(X, Y, Z, alpha), 0};
  for (const auto& s : states_) p.N = std::max(p.N, stabilize(M_, p.family, s, tol_).N);
  return p;
}

DaggerResidual DhrAnalysis::verify_phi_dagger(int X, int Y, int Z, const Morphism& alpha, const Morphism& delta) {
  HomCalculus& H = M_.center().hom();
  const cplx c = H.trace(H.compose(alpha, HomCalculus::dagger(delta))) / M_.center().dim(Z);
  OpFamily pa = phi_family(X, Y, Z, alpha), pd = phi_adjoint_family(X, Y, Z, delta);
  OpFamily pair = pair_family(X, Y, H.compose(HomCalculus::dagger(delta), alpha));
  DaggerResidual r;
  for (const auto& s : states_) {
    r.product = std::max(r.product, M_.distance(apply(pa, apply(pd, s)), SectorModel::scale(c, s)));
    r.reverse = std::max(r.reverse, M_.distance(apply(pd, apply(pa, s)), apply(pair, s)));
  }
  return r;
}

double DhrAnalysis::verify_phi_adjoint(int X, int Y, int Z, const Morphism& alpha) {
  OpFamily pa = phi_family(X, Y, Z, alpha), pd = phi_adjoint_family(X, Y, Z, alpha);
  std::vector<State> a, d;
  for (const auto& s : states_) {
    a.push_back(apply(pa, s));
    d.push_back(apply(pd, s));
  }
  double r = 0.0;
  for (size_t i = 0; i < states_.size(); ++i)
    for (size_t j = 0; j < states_.size(); ++j)
      r = std::max(r, std::abs(M_.inner(states_[i], a[j]) - M_.inner(d[i], states_[j])));
  return r;
}

FusionRuleCheck DhrAnalysis::fusion_rules(int X, int Y) {
  CenterCategory& Z = M_.center();
  struct Channel {
    int W, k;
    OpFamily phi, adj;
  };
  std::vector<Channel> ch;
  for (int W = 0; W < Z.size(); ++W)
    for (int k = 0; k < Z.N(X, Y, W); ++k) {
      Morphism pi = fusion_morphism(X, Y, W, k);
      ch.push_back({W, k, phi_family(X, Y, W, pi), phi_adjoint_family(X, Y, W, pi)});
    }
  FusionRuleCheck r;
  r.multiplicity.assign(Z.size(), 0);
  for (const auto& s : states_) {
    State sum;
    for (const auto& c : ch) sum = SectorModel::axpy(1.0, apply(c.adj, apply(c.phi, s)), sum);
    r.completeness = std::max(r.completeness, M_.distance(sum, s));
    for (const auto& c : ch)
      for (const auto& c2 : ch) {
        State v = apply(c.phi, apply(c2.adj, s));
        const bool same = c.W == c2.W && c.k == c2.k;
        r.orthogonality = std::max(r.orthogonality, M_.distance(v, same ? s : State{}));
      }
  }
  // Multiplicity: rank of the Gram matrix Phi[pi_k] Phi[pi_l]^* evaluated on the vacuum.
  const State vac = M_.vacuum();
  for (int W = 0; W < Z.size(); ++W) {
    std::vector<const Channel*> cw;
    for (const auto& c : ch)
      if (c.W == W) cw.push_back(&c);
    if (cw.empty()) continue;
    Mat G(cw.size(), cw.size());
    for (size_t i = 0; i < cw.size(); ++i)
      for (size_t j = 0; j < cw.size(); ++j) G(i, j) = M_.inner(vac, apply(cw[i]->phi, apply(cw[j]->adj, vac)));
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (G + G.adjoint()));
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) > 0.5) ++r.multiplicity[W];
  }
  return r;
}

namespace {

// Local observables near the origin: gates and projectors on the first links of both chains.
std::vector<std::pair<std::string, Op>> local_observables(SectorModel& M) {
  const FiducialGeometry& G = M.geometry();
  CenterCategory& Z = M.center();
  const int A = Z.size() - 1;
  Placement L1 = M.link(G.L(1)), Lp1 = M.link(G.Lp(1));
  std::vector<std::pair<std::string, Op>> out;
  out.push_back({"u_L1", [&M, L1, A](const State& s) { return M.gate(L1, A, s); }});
  out.push_back({"u_L'1", [&M, Lp1, A](const State& s) { return M.gate(Lp1, A, s); }});
  out.push_back({"P_L1", [&M, L1](const State& s) { return M.project(L1, {0, 0}, s); }});
  Morphism v = Z.pair_creation(A);
  out.push_back({"Dr_L1", [&M, L1, A, v](const State& s) {
                   return M.dr(L1, {0, 0}, {A, M.center().dual(A)}, v, s);
                 }});
  return out;
}

}  // namespace

double DhrAnalysis::verify_intertwining(int X, int Y, int Z, const Morphism& alpha) {
  OpFamily pa = phi_family(X, Y, Z, alpha);
  double r = 0.0;
  for (const auto& [name, x] : local_observables(M_)) {
    OpFamily left = rho_rho_observable(X, Y, x, name), right = rho_observable(Z, x, name);
    for (const auto& s : states_) r = std::max(r, M_.distance(apply(pa, apply(left, s)), apply(right, apply(pa, s))));
  }
  return r;
}

namespace {

// Solves target_j = sum_i c[i][j] basis_i in the least-squares sense over all test states.
// Returns c and the worst per-state residual.
Mat fit_coefficients(SectorModel& M, const std::vector<std::vector<State>>& basis,
                     const std::vector<std::vector<State>>& target, double& residual) {
  const int nb = static_cast<int>(basis.size()), nt = static_cast<int>(target.size());
  Mat G = Mat::Zero(nb, nb), h = Mat::Zero(nb, nt);
  const size_t ns = nb ? basis[0].size() : 0;
  for (size_t s = 0; s < ns; ++s) {
    for (int i = 0; i < nb; ++i) {
      for (int j = 0; j < nb; ++j) G(i, j) += M.inner(basis[i][s], basis[j][s]);
      for (int j = 0; j < nt; ++j) h(i, j) += M.inner(basis[i][s], target[j][s]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (G + G.adjoint()));
  if (nb && es.eigenvalues().minCoeff() < 1e-8)
    throw DecompositionError("test states do not separate the fusion channels");
  Mat c = nb ? Mat(G.ldlt().solve(h)) : Mat::Zero(0, nt);
  residual = 0.0;
  for (size_t s = 0; s < ns; ++s)
    for (int j = 0; j < nt; ++j) {
      State fit = target[j][s];
      for (int i = 0; i < nb; ++i) fit = SectorModel::axpy(-c(i, j), basis[i][s], fit);
      residual = std::max(residual, M.norm(fit));
    }
  return c;
}

}  // namespace

FCheck DhrAnalysis::f_check(int a, int b, int c, int d, const SymbolTable* reference) {
  CenterCategory& Z = M_.center();
  HomCalculus& H = Z.hom();
  const int n = Z.size();
  std::vector<Channel> left, right;
  for (int e = 0; e < n; ++e)
    for (int m1 = 0; m1 < Z.N(a, b, e); ++m1)
      for (int m2 = 0; m2 < Z.N(e, c, d); ++m2) left.push_back({e, m1, m2});
  for (int f = 0; f < n; ++f)
    for (int m3 = 0; m3 < Z.N(b, c, f); ++m3)
      for (int m4 = 0; m4 < Z.N(a, f, d); ++m4) right.push_back({f, m3, m4});
  FCheck r;
  r.left = left;
  r.right = right;
  r.F = Mat::Zero(left.size(), right.size());
  if (left.empty() && right.empty()) return r;
  if (left.size() != right.size()) throw DecompositionError("left and right tree counts differ");

  struct TreeOps {
    OpFamily inner, outer, tree;
  };
  std::vector<TreeOps> lops, rops;
  std::vector<std::pair<OpFamily, OpFamily>> radj;  // right trees' adjoints, outer factor first
  for (const auto& t : left) {
    Morphism eta = fusion_morphism(a, b, t.mid, t.v1), xi = fusion_morphism(t.mid, c, d, t.v2);
    lops.push_back({phi_family(a, b, t.mid, eta), phi_family(t.mid, c, d, xi),
                    tree_family(a, b, c, d, H.compose(xi, H.tensor(eta, H.identity(Z.word({c})))))});
  }
  for (const auto& t : right) {
    Morphism delta = fusion_morphism(b, c, t.mid, t.v1), gamma = fusion_morphism(a, t.mid, d, t.v2);
    rops.push_back({rho_family(a, phi_family(b, c, t.mid, delta), 2), phi_family(a, t.mid, d, gamma),
                    tree_family(a, b, c, d, H.compose(gamma, H.tensor(H.identity(Z.word({a})), delta)))});
    radj.push_back({phi_adjoint_family(a, t.mid, d, gamma), rho_family(a, phi_adjoint_family(b, c, t.mid, delta), 2)});
  }
  // The right trees are coisometries with orthogonal ranges of their adjoints, so the states
  // R_j^* psi separate the channels.
  std::vector<State> probe = states_;
  for (const auto& [outer, inner] : radj) probe.push_back(apply(inner, apply(outer, states_.front())));

  std::vector<std::vector<State>> vl(left.size()), vr(right.size());
  for (size_t i = 0; i < left.size(); ++i)
    for (const auto& s : probe) {
      vl[i].push_back(apply(lops[i].outer, apply(lops[i].inner, s)));
      r.tree_left = std::max(r.tree_left, M_.distance(vl[i].back(), apply(lops[i].tree, s)));
    }
  for (size_t j = 0; j < right.size(); ++j)
    for (const auto& s : probe) {
      vr[j].push_back(apply(rops[j].outer, apply(rops[j].inner, s)));
      r.tree_right = std::max(r.tree_right, M_.distance(vr[j].back(), apply(rops[j].tree, s)));
    }
  Mat coef = fit_coefficients(M_, vr, vl, r.fit);  // coef(j, i): left_i = sum_j coef right_j
  for (size_t i = 0; i < left.size(); ++i)
    for (size_t j = 0; j < right.size(); ++j) {
      r.F(i, j) = std::conj(coef(j, i));
      if (reference) {
        const auto& L = left[i];
        const auto& R = right[j];
        cplx ref = reference->f_entry({a, b, c, d, L.mid, R.mid, L.v1, L.v2, R.v1, R.v2});
        r.deviation = std::max(r.deviation, std::abs(r.F(i, j) - ref));
      }
    }
  return r;
}

Transporter DhrAnalysis::transporter(int X) {
  auto it = transporters_.find(X);
  if (it != transporters_.end()) return it->second;
  const FiducialGeometry& G = M_.geometry();
  validate_bridge(G);
  Transporter T;
  T.X = X;
  T.T = {tag("T", {X}), 1, window(), [this, X, &G](int n, const State& s) {
           State t = M_.gate(M_.link(G.Q(n + 1)), X, string_op(n, X, s));
           return M_.circuit_adjoint(right(n), X, t);
         }};
  T.Tstar = {tag("T*", {X}), 1, window(), [this, X, &G](int n, const State& s) {
               State t = M_.gate(M_.link(G.Q(n + 1)), X, M_.circuit(right(n), X, s));
               return string_op_adjoint(n, X, t);
             }};
  for (const auto& s : states_) {
    StableValue a = stabilize(M_, T.T, s, tol_), b = stabilize(M_, T.Tstar, s, tol_);
    T.N = std::max({T.N, a.N, b.N});
    T.unitarity = std::max(T.unitarity, M_.distance(apply(T.Tstar, a.value), s));
    T.unitarity = std::max(T.unitarity, M_.distance(apply(T.T, b.value), s));
  }
  transporters_.emplace(X, T);
  return T;
}

State DhrAnalysis::braiding(int Y, int X, const State& psi) {
  Transporter T = transporter(X);
  return apply(T.Tstar, apply(rho_family(Y, T.T, 1), psi));
}

State DhrAnalysis::braiding_adjoint(int Y, int X, const State& psi) {
  Transporter T = transporter(X);
  return apply(rho_family(Y, T.Tstar, 1), apply(T.T, psi));
}

double DhrAnalysis::crucial_identity(int X, int Y, int W, int n, std::uint64_t seed) {
  CenterCategory& Z = M_.center();
  HomCalculus& H = Z.hom();
  const FiducialGeometry& G = M_.geometry();
  std::mt19937_64 rng(seed);
  Placement PE = G.region_placement(G.E(n), {G.ep(n), G.e(n - 1)});
  Placement Ln = M_.link(G.L(n)), Lpn = M_.link(G.Lp(n)), Q0 = M_.link(G.Q(n)), Q1 = M_.link(G.Q(n + 1));
  const int A = Z.size() - 1;
  auto states = sector_states(M_, {G.ep(n), G.e(n - 1), G.e(n + 1)}, {{0}, {W}, {0, A}}, rng);
  Morphism bdag = HomCalculus::dagger(Z.braiding(Y, X));
  double r = 0.0;
  for (int mu = 0; mu < Z.N(X, Y, W); ++mu) {
    Morphism gamma = with_units(H, Z.vertex(X, Y, W, mu), 1, 0);
    Morphism moved = H.compose(bdag, gamma);
    for (const auto& s : states) {
      State p = M_.project(PE, {0, W}, s);
      State t = M_.dr(Ln, {0, W}, {X, Y}, gamma, p);
      t = M_.gate(Q0, X, M_.gate(Lpn, X, M_.gate(Ln, Y, M_.gate(Q1, X, t))));
      r = std::max(r, M_.distance(t, M_.dr(Ln, {0, W}, {Y, X}, moved, p)));
    }
  }
  return r;
}

RCheck DhrAnalysis::r_check(int X, int Y, int W, const SymbolTable* reference) {
  CenterCategory& Z = M_.center();
  HomCalculus& H = Z.hom();
  const int nxy = Z.N(X, Y, W), nyx = Z.N(Y, X, W);
  RCheck r;
  r.R = Mat::Zero(nyx, nxy);
  if (!nxy && !nyx) return r;
  Morphism beta = Z.braiding(Y, X);
  std::vector<State> probe = states_;
  for (int mu = 0; mu < nyx; ++mu) probe.push_back(apply(phi_adjoint_family(Y, X, W, fusion_morphism(Y, X, W, mu)), states_.front()));
  std::vector<State> braided;
  for (const auto& s : probe) braided.push_back(braiding(Y, X, s));
  std::vector<std::vector<State>> A(nxy), B(nyx);
  for (int nu = 0; nu < nxy; ++nu) {
    Morphism alpha = fusion_morphism(X, Y, W, nu);
    OpFamily pa = phi_family(X, Y, W, alpha), pb = phi_family(Y, X, W, H.compose(alpha, beta));
    for (size_t i = 0; i < probe.size(); ++i) {
      A[nu].push_back(apply(pa, braided[i]));
      r.identity = std::max(r.identity, M_.distance(A[nu].back(), apply(pb, probe[i])));
    }
  }
  for (int mu = 0; mu < nyx; ++mu) {
    OpFamily pb = phi_family(Y, X, W, fusion_morphism(Y, X, W, mu));
    for (const auto& s : probe) B[mu].push_back(apply(pb, s));
  }
  r.R = fit_coefficients(M_, B, A, r.fit);
  if (reference)
    for (int mu = 0; mu < nyx; ++mu)
      for (int nu = 0; nu < nxy; ++nu)
        r.deviation = std::max(r.deviation, std::abs(r.R(mu, nu) - reference->r_entry(Y, X, W, mu, nu)));
  return r;
}

void DhrAnalysis::merge_stabilization(const std::map<std::string, int>& other) {
  for (const auto& [k, v] : other) stab_[k] = std::max(stab_[k], v);
}

DhrComparison compare_with_center(DhrAnalysis& A, const SymbolTable& center, int jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  CenterCategory& Z = A.model().center();
  const int n = Z.size();
  DhrComparison out;
  SymbolTable& t = out.table;
  t.labels = center.labels;
  t.unit = 0;
  t.resize_fusion();

  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y) {
      FusionRuleCheck fr = A.fusion_rules(X, Y);
      out.fusion = std::max({out.fusion, fr.completeness, fr.orthogonality});
      for (int W = 0; W < n; ++W) {
        t.set_N(X, Y, W, fr.multiplicity[W]);
        if (fr.multiplicity[W] != center.N(X, Y, W)) out.fusion_rules_match = false;
      }
    }
  t.dual.assign(n, -1);
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      if (t.N(X, Y, 0)) t.dual[X] = Y;
  t.d = quantum_dimensions(t).d;

  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int W = 0; W < n; ++W)
        for (int mu = 0; mu < Z.N(X, Y, W); ++mu) {
          Morphism alpha = A.fusion_morphism(X, Y, W, mu);
          DaggerResidual dr = A.verify_phi_dagger(X, Y, W, alpha, alpha);
          out.dagger = std::max({out.dagger, dr.product, dr.reverse});
          for (int nu = 0; nu < Z.N(X, Y, W); ++nu)
            if (nu != mu) {
              DaggerResidual o = A.verify_phi_dagger(X, Y, W, alpha, A.fusion_morphism(X, Y, W, nu));
              out.dagger = std::max({out.dagger, o.product, o.reverse});
            }
          if (X == n - 1 || Y == n - 1) out.intertwining = std::max(out.intertwining, A.verify_intertwining(X, Y, W, alpha));
          out.crucial = std::max(out.crucial, A.crucial_identity(X, Y, W, 2, 0xB41D6E + 97 * X + 13 * Y + W));
        }
  for (int X = 0; X < n; ++X) out.transporter_unitarity = std::max(out.transporter_unitarity, A.transporter(X).unitarity);

  std::vector<std::array<int, 4>> blocks;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) blocks.push_back({a, b, c, d});
  std::vector<FCheck> fchecks(blocks.size());
  jobs = std::clamp(jobs, 1, static_cast<int>(blocks.size()));
  if (jobs == 1) {
    for (size_t i = 0; i < blocks.size(); ++i)
      fchecks[i] = A.f_check(blocks[i][0], blocks[i][1], blocks[i][2], blocks[i][3], &center);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::map<std::string, int>> stabs(jobs);
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&, w] {
        try {
          SectorModel M(Z, A.model().geometry(), A.model().chirality());
          DhrAnalysis local(M, A.states(), A.stabilization_tolerance());
          for (size_t i; (i = next++) < blocks.size();)
            fchecks[i] = local.f_check(blocks[i][0], blocks[i][1], blocks[i][2], blocks[i][3], &center);
          stabs[w] = local.stabilization();
        } catch (...) {
          errors[w] = std::current_exception();
          next = blocks.size();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (const auto& st : stabs) A.merge_stabilization(st);
  }
  for (size_t k = 0; k < blocks.size(); ++k) {
    const auto [a, b, c, d] = blocks[k];
    const FCheck& f = fchecks[k];
    out.f_tree = std::max({out.f_tree, f.tree_left, f.tree_right});
    out.f_fit = std::max(out.f_fit, f.fit);
    out.f_deviation = std::max(out.f_deviation, f.deviation);
    const auto &lc = f.left, &rc = f.right;
    for (size_t i = 0; i < lc.size(); ++i)
      for (size_t j = 0; j < rc.size(); ++j)
        t.F[{a, b, c, d, lc[i].mid, rc[j].mid, lc[i].v1, lc[i].v2, rc[j].v1, rc[j].v2}] = f.F(i, j);
  }
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int W = 0; W < n; ++W) {
        RCheck r = A.r_check(X, Y, W, &center);
        out.r_identity = std::max(out.r_identity, r.identity);
        out.r_fit = std::max(out.r_fit, r.fit);
        out.r_deviation = std::max(out.r_deviation, r.deviation);
        for (int mu = 0; mu < r.R.rows(); ++mu)
          for (int nu = 0; nu < r.R.cols(); ++nu) t.R[{Y, X, W, mu, nu}] = r.R(mu, nu);
      }
  t.finalize();
  out.pentagon = verify_pentagon(t);
  if (t.multiplicity_free()) out.hexagon = verify_hexagons(t);
  out.stabilization = A.stabilization();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace lwdhr
