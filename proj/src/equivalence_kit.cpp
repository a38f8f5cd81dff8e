#include "lwdhr/equivalence_kit.hpp"

#include <Eigen/SVD>
#include <random>
#include <sstream>

namespace lwdhr {

using nlohmann::json;

namespace {

cplx f_of(const FusionSystem& s, int a, int b, int c, int d, const Channel& L, const Channel& R) {
  return s.f_entry({a, b, c, d, L.mid, R.mid, L.v1, L.v2, R.v1, R.v2});
}

// Associator in tree coordinates: rows left channels, columns right channels.
Mat assoc(const FusionSystem& s, int a, int b, int c, int d) {
  auto L = s.left_channels(a, b, c, d);
  auto R = s.right_channels(a, b, c, d);
  Mat m(L.size(), R.size());
  for (size_t i = 0; i < L.size(); ++i)
    for (size_t j = 0; j < R.size(); ++j) m(i, j) = f_of(s, a, b, c, d, L[i], R[j]);
  return m;
}

// Matrix [target channel][source channel] of a two-vertex tree map; `first` and `second` give the vertex
// matrices of the channel's (v1, v2) given its source mid label.
template <class Pair>
Mat tree_map(const std::vector<Channel>& src, const std::vector<Channel>& dst, const std::vector<int>& f, Pair pair) {
  Mat m = Mat::Zero(dst.size(), src.size());
  for (size_t s = 0; s < src.size(); ++s) {
    auto [A, B] = pair(src[s].mid);
    for (size_t t = 0; t < dst.size(); ++t)
      if (dst[t].mid == f[src[s].mid]) m(t, s) = A(dst[t].v1, src[s].v1) * B(dst[t].v2, src[s].v2);
  }
  return m;
}

const Mat& tau_of(const Tensorator& t, int i, int j, int k) {
  return t.tau.at({i, j}).at(k);
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from(const json& v) {
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2) return cplx(v[0].get<double>(), v[1].get<double>());
  throw SchemaError("phi entry must be a number or [re, im]");
}

}  // namespace

Mat CandidateIso::at(const FusionSystem& C, int i, int j, int k) const {
  auto it = phi.find({i, j, k});
  if (it != phi.end()) return it->second;
  return Mat::Identity(C.N(i, j, k), C.N(i, j, k));
}

CandidateIso identity_iso(const FusionSystem& C, const FusionSystem& D) {
  if (C.rank() != D.rank()) throw ShapeMismatch("identity iso needs equal ranks");
  CandidateIso iso;
  for (int a = 0; a < C.rank(); ++a) iso.f.push_back(a);
  validate_iso(C, D, iso);
  return iso;
}

void validate_iso(const FusionSystem& C, const FusionSystem& D, const CandidateIso& iso) {
  const int r = C.rank();
  if (D.rank() != r || static_cast<int>(iso.f.size()) != r) throw ShapeMismatch("bijection size differs from rank");
  std::vector<int> seen(r, 0);
  for (int a = 0; a < r; ++a) {
    if (iso.f[a] < 0 || iso.f[a] >= r || seen[iso.f[a]]++) throw ShapeMismatch("f is not a bijection");
  }
  if (iso.f[C.unit] != D.unit) throw ShapeMismatch("f does not fix the unit");
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k)
        if (C.N(i, j, k) != D.N(iso.f[i], iso.f[j], iso.f[k]))
          throw ShapeMismatch("fusion rules differ at " + C.labels[i] + "," + C.labels[j] + "," + C.labels[k]);
  for (const auto& [key, m] : iso.phi) {
    const int n = C.N(key[0], key[1], key[2]);
    if (m.rows() != n || m.cols() != n)
      throw ShapeMismatch("phi " + C.labels[key[0]] + "," + C.labels[key[1]] + "," + C.labels[key[2]] +
                          " has the wrong shape");
  }
}

json iso_to_json(const FusionSystem& C, const FusionSystem& D, const CandidateIso& iso) {
  json doc;
  json bij = json::object();
  for (int a = 0; a < C.rank(); ++a) bij[C.labels[a]] = D.labels[iso.f[a]];
  doc["bijection"] = bij;
  json phi = json::object();
  for (const auto& [key, m] : iso.phi) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(cplx_json(m(r, c)));
      rows.push_back(row);
    }
    phi[C.labels[key[0]] + "," + C.labels[key[1]] + "," + C.labels[key[2]]] = rows;
  }
  doc["phi"] = phi;
  return doc;
}

CandidateIso iso_from_json(const FusionSystem& C, const FusionSystem& D, const json& doc) {
  if (!doc.contains("bijection") || !doc["bijection"].is_object()) throw SchemaError("iso needs a bijection object");
  CandidateIso iso;
  iso.f.assign(C.rank(), -1);
  for (const auto& [src, dst] : doc["bijection"].items()) iso.f[C.index_of(src)] = D.index_of(dst.get<std::string>());
  for (int a = 0; a < C.rank(); ++a)
    if (iso.f[a] < 0) throw SchemaError("bijection misses label " + C.labels[a]);
  if (doc.contains("phi")) {
    for (const auto& [key, rows] : doc["phi"].items()) {
      std::vector<std::string> parts;
      std::stringstream ss(key);
      for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
      if (parts.size() != 3) throw SchemaError("phi key must be \"i,j,k\": " + key);
      Mat m(rows.size(), rows.empty() ? 0 : rows[0].size());
      for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != static_cast<size_t>(m.cols())) throw SchemaError("ragged phi matrix " + key);
        for (size_t c = 0; c < rows[r].size(); ++c) m(r, c) = cplx_from(rows[r][c]);
      }
      iso.phi[{C.index_of(parts[0]), C.index_of(parts[1]), C.index_of(parts[2])}] = m;
    }
  }
  validate_iso(C, D, iso);
  return iso;
}

double check_F_intertwiner(const FusionSystem& C, const FusionSystem& D, const CandidateIso& iso) {
  validate_iso(C, D, iso);
  const auto& f = iso.f;
  const int r = C.rank();
  double worst = 0.0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k)
        for (int l = 0; l < r; ++l) {
          auto cl = C.left_channels(i, j, k, l), cr = C.right_channels(i, j, k, l);
          if (cl.empty()) continue;
          auto dl = D.left_channels(f[i], f[j], f[k], f[l]), dr = D.right_channels(f[i], f[j], f[k], f[l]);
          // Left tree (m; ij->m, mk->l); right tree (n; jk->n, in->l).
          Mat PL = tree_map(cl, dl, f, [&](int m) { return std::pair{iso.at(C, i, j, m), iso.at(C, m, k, l)}; });
          Mat PR = tree_map(cr, dr, f, [&](int n) { return std::pair{iso.at(C, j, k, n), iso.at(C, i, n, l)}; });
          Mat diff = assoc(D, f[i], f[j], f[k], f[l]) * PR - PL * assoc(C, i, j, k, l);
          worst = std::max(worst, la::max_abs(diff));
        }
  return worst;
}

double check_R_intertwiner(const SymbolTable& C, const SymbolTable& D, const CandidateIso& iso) {
  validate_iso(C, D, iso);
  const auto& f = iso.f;
  double worst = 0.0;
  for (int i = 0; i < C.rank(); ++i)
    for (int j = 0; j < C.rank(); ++j)
      for (int k = 0; k < C.rank(); ++k) {
        if (!C.N(i, j, k)) continue;
        Mat diff = iso.at(C, i, j, k) * C.R_matrix(i, j, k) - D.R_matrix(f[i], f[j], f[k]) * iso.at(C, j, i, k);
        worst = std::max(worst, la::max_abs(diff));
      }
  return worst;
}

Tensorator build_tensorator(const FusionSystem& C, const FusionSystem& D, const CandidateIso& iso, double tol,
                            std::uint64_t seed) {
  const double fres = check_F_intertwiner(C, D, iso);
  if (fres > tol) throw NotIntertwiner("F diagram residual " + std::to_string(fres));
  const int r = C.rank();
  Tensorator t;
  t.f = iso.f;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto dc = quantum_dimensions(C).d, dd = quantum_dimensions(D).d;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) {
        const int n = C.N(i, j, k);
        if (!n) continue;
        const Mat P = iso.at(C, i, j, k);
        Eigen::JacobiSVD<Mat> svd(P);
        const auto& sv = svd.singularValues();
        if (sv(n - 1) < 1e-12 * std::max(1.0, sv(0)))
          throw NotIntertwiner("phi " + C.labels[i] + "," + C.labels[j] + "," + C.labels[k] + " is singular");
        // tau = sum_kappa F(iota_kappa) phi(pi_kappa) over the vertex decomposition of i (x) j.
        Mat T = Mat::Zero(n, n);
        for (int mu = 0; mu < n; ++mu) {
          Vec e = Vec::Zero(n);
          e(mu) = 1.0;
          Vec image = P * e;  // phi(pi_mu) in the target vertex basis
          T.row(mu) = image.transpose();
        }
        t.tau[{i, j}][k] = T;
        // F(g) tau against phi(g) for the basis and one random g; F(g) picks the summand with weights c.
        std::vector<Vec> probes;
        for (int mu = 0; mu < n; ++mu) probes.push_back(Vec::Unit(n, mu));
        Vec g(n);
        for (int mu = 0; mu < n; ++mu) g(mu) = cplx(gauss(rng), gauss(rng));
        probes.push_back(g);
        for (const auto& c : probes) {
          Vec lhs = T.transpose() * c;
          Vec rhs = P * c;
          t.defining = std::max(t.defining, (lhs - rhs).cwiseAbs().maxCoeff());
        }
        t.unitarity = std::max({t.unitarity, la::unitarity_defect(T), la::unitarity_defect(T.adjoint())});
        // phi(pi_mu) phi(pi_nu)^dagger = (P^dagger P)_{nu mu} id under isometric vertex normalization.
        Mat gram = P.adjoint() * P - Mat::Identity(n, n);
        t.orthogonal = std::max({t.orthogonal, la::max_abs(gram), std::abs(dc[k] - dd[iso.f[k]])});
      }
  return t;
}

Mat extend_tensorator(const FusionSystem& C, const Tensorator& t, const std::vector<int>& a,
                      const std::vector<int>& b, int k) {
  const int r = C.rank();
  if (static_cast<int>(a.size()) != r || static_cast<int>(b.size()) != r)
    throw ShapeMismatch("multiplicity vectors must have one entry per simple");
  int size = 0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) size += a[i] * b[j] * C.N(i, j, k);
  Mat out = Mat::Zero(size, size);
  int at = 0;
  for (int i = 0; i < r; ++i)
    for (int x = 0; x < a[i]; ++x)
      for (int j = 0; j < r; ++j)
        for (int y = 0; y < b[j]; ++y) {
          const int n = C.N(i, j, k);
          if (!n) continue;
          out.block(at, at, n, n) = tau_of(t, i, j, k);
          at += n;
        }
  return out;
}

namespace {

Coherence monoidal_part(const FusionSystem& C, const FusionSystem& D, const Tensorator& t) {
  const auto& f = t.f;
  const int r = C.rank();
  Coherence out;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int l = 0; l < r; ++l) {
          auto cl = C.left_channels(a, b, c, l), cr = C.right_channels(a, b, c, l);
          if (cl.empty()) continue;
          auto dl = D.left_channels(f[a], f[b], f[c], f[l]), dr = D.right_channels(f[a], f[b], f[c], f[l]);
          // Components of tau_{ab (x) c}(tau_{ab} (x) id) and tau_{a, bc}(id (x) tau_{bc}) in tree coordinates:
          // rows C channel (summand of F((ab)c) or F(a(bc))), columns D channel.
          Mat TL = Mat::Zero(cl.size(), dl.size());
          for (size_t s = 0; s < cl.size(); ++s)
            for (size_t d = 0; d < dl.size(); ++d)
              if (dl[d].mid == f[cl[s].mid])
                TL(s, d) = tau_of(t, a, b, cl[s].mid)(cl[s].v1, dl[d].v1) * tau_of(t, cl[s].mid, c, l)(cl[s].v2, dl[d].v2);
          Mat TR = Mat::Zero(cr.size(), dr.size());
          for (size_t s = 0; s < cr.size(); ++s)
            for (size_t d = 0; d < dr.size(); ++d)
              if (dr[d].mid == f[cr[s].mid])
                TR(s, d) = tau_of(t, b, c, cr[s].mid)(cr[s].v1, dr[d].v1) * tau_of(t, a, cr[s].mid, l)(cr[s].v2, dr[d].v2);
          // F(alpha^C) after the left path; the right path after alpha^D.
          Mat lhs = assoc(C, a, b, c, l).transpose() * TL;
          Mat rhs = TR * assoc(D, f[a], f[b], f[c], f[l]).transpose();
          out.monoidal = std::max(out.monoidal, la::max_abs(lhs - rhs));
        }
  for (int a = 0; a < r; ++a) {
    out.unitor = std::max(out.unitor, std::abs(tau_of(t, C.unit, a, a)(0, 0) - 1.0));
    out.unitor = std::max(out.unitor, std::abs(tau_of(t, a, C.unit, a)(0, 0) - 1.0));
  }
  return out;
}

}  // namespace

Coherence verify_coherence(const FusionSystem& C, const FusionSystem& D, const Tensorator& t) {
  Coherence out = monoidal_part(C, D, t);
  out.braided = -1.0;
  return out;
}

Coherence verify_coherence(const SymbolTable& C, const SymbolTable& D, const Tensorator& t) {
  Coherence out = monoidal_part(C, D, t);
  const auto& f = t.f;
  for (int a = 0; a < C.rank(); ++a)
    for (int b = 0; b < C.rank(); ++b)
      for (int k = 0; k < C.rank(); ++k) {
        if (!C.N(a, b, k)) continue;
        // Component on the summand k of F(b (x) a): F(beta_{ab}) tau_{ab} against tau_{ba} beta_{fa, fb}.
        Mat lhs = C.R_matrix(a, b, k).transpose() * tau_of(t, a, b, k);
        Mat rhs = tau_of(t, b, a, k) * D.R_matrix(f[a], f[b], f[k]).transpose();
        out.braided = std::max(out.braided, la::max_abs(lhs - rhs));
      }
  return out;
}

EquivalenceReport check_equivalence(const SymbolTable& C, const SymbolTable& D, const CandidateIso& iso, double tol,
                                    double unitary_tol) {
  EquivalenceReport rep;
  rep.f_intertwiner = check_F_intertwiner(C, D, iso);
  rep.r_intertwiner = check_R_intertwiner(C, D, iso);
  if (rep.f_intertwiner > tol) rep.failures.push_back("F-intertwiner diagram");
  if (rep.r_intertwiner > tol) rep.failures.push_back("R-intertwiner diagram");
  bool monoidal = rep.f_intertwiner <= tol, braided = rep.r_intertwiner <= tol, unitary = true;
  try {
    Tensorator t = build_tensorator(C, D, iso, tol);
    rep.built = true;
    rep.defining = t.defining;
    rep.unitarity = t.unitarity;
    rep.orthogonal = t.orthogonal;
    rep.coherence = verify_coherence(C, D, t);
    if (rep.defining > tol) rep.failures.push_back("tensorator defining equation"), monoidal = false;
    if (rep.coherence.monoidal > tol) rep.failures.push_back("monoidal coherence"), monoidal = false;
    if (rep.coherence.unitor > tol) rep.failures.push_back("unitor triangles"), monoidal = false;
    if (rep.coherence.braided > tol) rep.failures.push_back("braided coherence"), braided = false;
    if (rep.unitarity > unitary_tol || rep.orthogonal > unitary_tol) {
      rep.failures.push_back("tensorator unitarity");
      unitary = false;
    }
  } catch (const NotIntertwiner& e) {
    if (rep.failures.empty() || rep.failures.front() != "F-intertwiner diagram")
      rep.failures.insert(rep.failures.begin(), std::string("tensorator: ") + e.what());
    monoidal = false;
  }
  if (!monoidal) rep.verdict = "NOT EQUIVALENT";
  else if (!braided) rep.verdict = unitary ? "EQUIVALENT (unitary monoidal, braiding differs)" : "EQUIVALENT (monoidal)";
  else rep.verdict = unitary ? "EQUIVALENT (unitary braided)" : "EQUIVALENT (braided)";
  return rep;
}

}  // namespace lwdhr
