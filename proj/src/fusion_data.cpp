#include "lwdhr/fusion_data.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#ifndef LWDHR_CATALOG_DIR
#define LWDHR_CATALOG_DIR "catalog"
#endif

namespace lwdhr {

using nlohmann::json;

int FusionSystem::index_of(const std::string& label) const {
  for (int i = 0; i < rank(); ++i)
    if (labels[i] == label) return i;
  throw UnknownLabel("no simple named '" + label + "'");
}

void FusionSystem::resize_fusion() { fusion_.assign(rank() * rank() * rank(), 0); }

void FusionSystem::set_N(int a, int b, int c, int value) {
  fusion_[(a * rank() + b) * rank() + c] = value;
}

cplx FusionSystem::f_entry(const FKey& k) const {
  auto it = F.find(k);
  return it == F.end() ? cplx(0.0) : it->second;
}

std::vector<Channel> FusionSystem::left_channels(int a, int b, int c, int d) const {
  std::vector<Channel> out;
  for (int e = 0; e < rank(); ++e)
    for (int m1 = 0; m1 < N(a, b, e); ++m1)
      for (int m2 = 0; m2 < N(e, c, d); ++m2) out.push_back({e, m1, m2});
  return out;
}

std::vector<Channel> FusionSystem::right_channels(int a, int b, int c, int d) const {
  std::vector<Channel> out;
  for (int f = 0; f < rank(); ++f)
    for (int m3 = 0; m3 < N(b, c, f); ++m3)
      for (int m4 = 0; m4 < N(a, f, d); ++m4) out.push_back({f, m3, m4});
  return out;
}

const Mat& FusionSystem::F_matrix(int a, int b, int c, int d) const {
  auto it = fcache_.find({a, b, c, d});
  if (it != fcache_.end()) return it->second;
  static const Mat empty(0, 0);
  return empty;
}

void FusionSystem::finalize() {
  fcache_.clear();
  const int r = rank();
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d) {
          auto rows = left_channels(a, b, c, d);
          auto cols = right_channels(a, b, c, d);
          if (rows.empty() && cols.empty()) continue;
          Mat m = Mat::Zero(rows.size(), cols.size());
          for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < cols.size(); ++j)
              m(i, j) = f_entry({a, b, c, d, rows[i].mid, cols[j].mid, rows[i].v1, rows[i].v2,
                                 cols[j].v1, cols[j].v2});
          fcache_[{a, b, c, d}] = std::move(m);
        }
}

bool FusionSystem::multiplicity_free() const {
  for (int v : fusion_)
    if (v > 1) return false;
  return true;
}

std::string fkey_string(const FusionSystem& s, const FKey& k) {
  std::ostringstream os;
  os << s.labels[k[0]] << ',' << s.labels[k[1]] << ',' << s.labels[k[2]] << ';'
     << s.labels[k[3]] << ';' << s.labels[k[4]] << ',' << s.labels[k[5]] << ';' << k[6] << ','
     << k[7] << ',' << k[8] << ',' << k[9];
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

int parse_label(const FusionSystem& s, const std::string& tok, const std::string& where) {
  for (int i = 0; i < s.rank(); ++i)
    if (s.labels[i] == tok) return i;
  throw SchemaError("unknown label '" + tok + "' in " + where);
}

int parse_int(const std::string& tok, const std::string& where) {
  try {
    size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw SchemaError("bad integer '" + tok + "' in " + where);
  }
}

void check_rules(const FusionSystem& s) {
  const int r = s.rank();
  const int u = s.unit;
  auto name = [&](int a) { return s.labels[a]; };
  for (int a = 0; a < r; ++a) {
    if (s.dual[s.dual[a]] != a) throw ConsistencyError("dual is not an involution at " + name(a));
    for (int b = 0; b < r; ++b) {
      int want = a == b ? 1 : 0;
      if (s.N(u, a, b) != want || s.N(a, u, b) != want)
        throw ConsistencyError("unit fusion violated at (" + name(a) + "," + name(b) + ")");
      if (s.N(a, b, u) != (b == s.dual[a] ? 1 : 0))
        throw ConsistencyError("duality fusion violated at (" + name(a) + "," + name(b) + ",unit)");
    }
  }
  if (s.dual[u] != u) throw ConsistencyError("dual of the unit is not the unit");
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d) {
          int lhs = 0, rhs = 0;
          for (int e = 0; e < r; ++e) lhs += s.N(a, b, e) * s.N(e, c, d);
          for (int f = 0; f < r; ++f) rhs += s.N(b, c, f) * s.N(a, f, d);
          if (lhs != rhs)
            throw ConsistencyError("fusion associativity fails at (" + name(a) + "," + name(b) +
                                   "," + name(c) + "," + name(d) + ")");
        }
}

}  // namespace

CategoryData load_category(const json& doc) {
  CategoryData cat;
  try {
    if (!doc.is_object()) throw SchemaError("document is not an object");
    for (const char* key : {"simples", "unit", "dual", "fusion", "F"})
      if (!doc.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    cat.name = doc.value("name", std::string("unnamed"));
    cat.unitary = doc.value("unitary", true);
    std::set<std::string> seen;
    for (const auto& s : doc.at("simples")) {
      std::string l = s.get<std::string>();
      if (!seen.insert(l).second) throw SchemaError("duplicate simple '" + l + "'");
      cat.labels.push_back(l);
    }
    if (cat.labels.empty()) throw SchemaError("no simples");
    cat.unit = parse_label(cat, doc.at("unit").get<std::string>(), "unit");
    cat.dual.assign(cat.rank(), -1);
    for (auto it = doc.at("dual").begin(); it != doc.at("dual").end(); ++it)
      cat.dual[parse_label(cat, it.key(), "dual")] =
          parse_label(cat, it.value().get<std::string>(), "dual");
    for (int a = 0; a < cat.rank(); ++a)
      if (cat.dual[a] < 0) throw ConsistencyError("dual missing for " + cat.labels[a]);
    cat.resize_fusion();
    for (auto it = doc.at("fusion").begin(); it != doc.at("fusion").end(); ++it) {
      auto parts = split(it.key(), ',');
      if (parts.size() != 3) throw SchemaError("fusion key '" + it.key() + "' is not a,b,c");
      int v = it.value().get<int>();
      if (v < 0) throw SchemaError("negative fusion multiplicity at '" + it.key() + "'");
      cat.set_N(parse_label(cat, parts[0], "fusion"), parse_label(cat, parts[1], "fusion"),
                parse_label(cat, parts[2], "fusion"), v);
    }
    for (auto it = doc.at("F").begin(); it != doc.at("F").end(); ++it) {
      auto groups = split(it.key(), ';');
      if (groups.size() != 4) throw SchemaError("F key '" + it.key() + "' has wrong shape");
      auto abc = split(groups[0], ','), ef = split(groups[2], ','), ms = split(groups[3], ',');
      if (abc.size() != 3 || ef.size() != 2 || ms.size() != 4)
        throw SchemaError("F key '" + it.key() + "' has wrong shape");
      FKey k{};
      for (int i = 0; i < 3; ++i) k[i] = parse_label(cat, abc[i], "F");
      k[3] = parse_label(cat, groups[1], "F");
      k[4] = parse_label(cat, ef[0], "F");
      k[5] = parse_label(cat, ef[1], "F");
      for (int i = 0; i < 4; ++i) k[6 + i] = parse_int(ms[i], "F key '" + it.key() + "'");
      const auto& v = it.value();
      if (!v.is_array() || v.size() != 2) throw SchemaError("F value at '" + it.key() + "' is not [re,im]");
      cat.F[k] = cplx(v[0].get<double>(), v[1].get<double>());
    }
  } catch (const json::exception& e) {
    throw SchemaError(e.what());
  }
  check_rules(cat);
  // Every admissible key must be present, and nothing else.
  const int r = cat.rank();
  for (const auto& [k, v] : cat.F) {
    bool ok = k[6] >= 0 && k[7] >= 0 && k[8] >= 0 && k[9] >= 0 && k[6] < cat.N(k[0], k[1], k[4]) &&
              k[7] < cat.N(k[4], k[2], k[3]) && k[8] < cat.N(k[1], k[2], k[5]) &&
              k[9] < cat.N(k[0], k[5], k[3]);
    if (!ok) throw ConsistencyError("F key not allowed by fusion rules: " + fkey_string(cat, k));
  }
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d)
          for (const auto& L : cat.left_channels(a, b, c, d))
            for (const auto& R : cat.right_channels(a, b, c, d)) {
              FKey k{a, b, c, d, L.mid, R.mid, L.v1, L.v2, R.v1, R.v2};
              if (!cat.F.count(k)) throw ConsistencyError("missing F key " + fkey_string(cat, k));
            }
  cat.finalize();
  auto dims = quantum_dimensions(cat);
  cat.d = dims.d;
  cat.D = dims.D;
  double defect = dimension_defect(cat, cat.d);
  if (defect > 1e-9) throw ConsistencyError("quantum dimensions inconsistent with fusion rules");
  for (int a = 0; a < r; ++a)
    if (std::abs(cat.d[a] - cat.d[cat.dual[a]]) > 1e-9)
      throw ConsistencyError("d_a != d_abar for " + cat.labels[a]);
  return cat;
}

CategoryData load_category_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("parse error: ") + e.what());
  }
  return load_category(doc);
}

std::vector<std::string> catalog_names() { return {"vec-z2", "vec-z3", "fibonacci", "ising"}; }

std::string catalog_path(const std::string& name) {
  for (const auto& n : catalog_names())
    if (n == name) return std::string(LWDHR_CATALOG_DIR) + "/" + name + ".json";
  throw SchemaError("unknown catalog entry '" + name + "'");
}

CategoryData load_catalog(const std::string& name) { return load_category_file(catalog_path(name)); }

Dimensions quantum_dimensions(const FusionSystem& s) {
  const int r = s.rank();
  Dimensions out;
  out.d.assign(r, 1.0);
  // Power iteration on N_a + 1: the shift removes the periodicity of permutation-like N_a.
  for (int a = 0; a < r; ++a) {
    Eigen::MatrixXd M(r, r);
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) M(b, c) = s.N(a, b, c) + (b == c ? 1.0 : 0.0);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(r) / std::sqrt(double(r));
    double lambda = 0.0;
    bool converged = false;
    for (int it = 0; it < 20000; ++it) {
      Eigen::VectorXd w = M.transpose() * v;
      double next = w.norm();
      w /= next;
      if ((w - v).norm() < 1e-14 && std::abs(next - lambda) < 1e-14) {
        lambda = next;
        converged = true;
        break;
      }
      v = w;
      lambda = next;
    }
    if (!converged) throw NumericalError("Perron-Frobenius iteration did not converge for " + s.labels[a]);
    out.d[a] = lambda - 1.0;
  }
  double D2 = 0.0;
  for (double x : out.d) D2 += x * x;
  out.D = std::sqrt(D2);
  return out;
}

double dimension_defect(const FusionSystem& s, const std::vector<double>& d) {
  double worst = 0.0;
  for (int a = 0; a < s.rank(); ++a)
    for (int b = 0; b < s.rank(); ++b) {
      double sum = 0.0;
      for (int c = 0; c < s.rank(); ++c) sum += s.N(a, b, c) * d[c];
      worst = std::max(worst, std::abs(d[a] * d[b] - sum));
    }
  return worst;
}

double verify_pentagon(const FusionSystem& s) {
  const int r = s.rank();
  double worst = 0.0;
  auto F = [&](int a, int b, int c, int d, int e, int f, int m1, int m2, int m3, int m4) {
    return s.f_entry({a, b, c, d, e, f, m1, m2, m3, m4});
  };
  // Start ((ab)_f c)_g d -> e with vertices al,be,ga; end a(b(cd)_l)_k with ep,et,th.
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d)
          for (int e = 0; e < r; ++e)
            for (int f = 0; f < r; ++f)
              for (int g = 0; g < r; ++g)
                for (int al = 0; al < s.N(a, b, f); ++al)
                  for (int be = 0; be < s.N(f, c, g); ++be)
                    for (int ga = 0; ga < s.N(g, d, e); ++ga)
                      for (int k = 0; k < r; ++k)
                        for (int l = 0; l < r; ++l)
                          for (int ep = 0; ep < s.N(c, d, l); ++ep)
                            for (int et = 0; et < s.N(b, l, k); ++et)
                              for (int th = 0; th < s.N(a, k, e); ++th) {
                                cplx lhs = 0.0;
                                for (int ze = 0; ze < s.N(f, l, e); ++ze)
                                  lhs += F(f, c, d, e, g, l, be, ga, ep, ze) *
                                         F(a, b, l, e, f, k, al, ze, et, th);
                                cplx rhs = 0.0;
                                for (int h = 0; h < r; ++h)
                                  for (int ka = 0; ka < s.N(b, c, h); ++ka)
                                    for (int la = 0; la < s.N(a, h, g); ++la)
                                      for (int mu = 0; mu < s.N(h, d, k); ++mu)
                                        rhs += F(a, b, c, g, f, h, al, be, ka, la) *
                                               F(a, h, d, e, g, k, la, ga, mu, th) *
                                               F(b, c, d, k, h, l, ka, mu, ep, et);
                                worst = std::max(worst, std::abs(lhs - rhs));
                              }
  return worst;
}

double f_unitarity_defect(const FusionSystem& s) {
  double worst = 0.0;
  for (int a = 0; a < s.rank(); ++a)
    for (int b = 0; b < s.rank(); ++b)
      for (int c = 0; c < s.rank(); ++c)
        for (int d = 0; d < s.rank(); ++d) {
          const Mat& m = s.F_matrix(a, b, c, d);
          if (m.rows() != m.cols()) return 1e300;
          worst = std::max(worst, la::unitarity_defect(m));
        }
  return worst;
}

json fusion_to_json(const FusionSystem& s) {
  json doc;
  doc["simples"] = s.labels;
  doc["unit"] = s.labels[s.unit];
  json dual = json::object();
  for (int a = 0; a < s.rank(); ++a) dual[s.labels[a]] = s.labels[s.dual[a]];
  doc["dual"] = dual;
  json fus = json::object();
  for (int a = 0; a < s.rank(); ++a)
    for (int b = 0; b < s.rank(); ++b)
      for (int c = 0; c < s.rank(); ++c)
        if (s.N(a, b, c)) fus[s.labels[a] + "," + s.labels[b] + "," + s.labels[c]] = s.N(a, b, c);
  doc["fusion"] = fus;
  json F = json::object();
  for (const auto& [k, v] : s.F) F[fkey_string(s, k)] = {v.real(), v.imag()};
  doc["F"] = F;
  doc["unitary"] = true;
  return doc;
}

}  // namespace lwdhr
