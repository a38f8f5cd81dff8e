#include "lwdhr/symbol_table.hpp"

#include <sstream>

namespace lwdhr {

using nlohmann::json;

cplx SymbolTable::r_entry(int a, int b, int c, int mu, int nu) const {
  auto it = R.find({a, b, c, mu, nu});
  return it == R.end() ? cplx(0.0) : it->second;
}

Mat SymbolTable::R_matrix(int a, int b, int c) const {
  const int n = N(a, b, c);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = r_entry(a, b, c, i, j);
  return m;
}

namespace {

template <class RFun>
double hexagon_residual(const SymbolTable& t, RFun r) {
  const int n = t.rank();
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int f = 0; f < n; ++f) {
            if (!t.N(b, c, f) || !t.N(a, f, d)) continue;
            for (int g = 0; g < n; ++g) {
              if (!t.N(c, a, g) || !t.N(b, g, d)) continue;
              cplx lhs = r(a, f, d) * t.f_entry({b, c, a, d, f, g, 0, 0, 0, 0});
              cplx rhs = 0.0;
              for (int e = 0; e < n; ++e) {
                if (!t.N(a, b, e) || !t.N(e, c, d)) continue;
                rhs += std::conj(t.f_entry({a, b, c, d, e, f, 0, 0, 0, 0})) * r(a, b, e) *
                       t.f_entry({b, a, c, d, e, g, 0, 0, 0, 0}) * r(a, c, g);
              }
              worst = std::max(worst, std::abs(lhs - rhs));
            }
          }
  return worst;
}

}  // namespace

HexagonReport verify_hexagons(const SymbolTable& t) {
  if (!t.multiplicity_free()) throw CoherenceError("hexagon evaluator needs multiplicity-free fusion");
  HexagonReport rep;
  rep.first = hexagon_residual(t, [&](int a, int b, int c) { return t.r_entry(a, b, c); });
  rep.second = hexagon_residual(t, [&](int a, int b, int c) { return 1.0 / t.r_entry(b, a, c); });
  return rep;
}

double r_unitarity_defect(const SymbolTable& t) {
  double worst = 0.0;
  for (int a = 0; a < t.rank(); ++a)
    for (int b = 0; b < t.rank(); ++b)
      for (int c = 0; c < t.rank(); ++c)
        if (t.N(a, b, c)) worst = std::max(worst, la::unitarity_defect(t.R_matrix(a, b, c)));
  return worst;
}

json symbol_table_to_json(const SymbolTable& t) {
  json doc = fusion_to_json(t);
  json R = json::object();
  for (const auto& [k, v] : t.R) {
    std::ostringstream key;
    key << t.labels[k[0]] << "," << t.labels[k[1]] << ";" << t.labels[k[2]] << ";" << k[3] << "," << k[4];
    R[key.str()] = {v.real(), v.imag()};
  }
  doc["R"] = R;
  json dims = json::object();
  for (int a = 0; a < t.rank(); ++a) dims[t.labels[a]] = t.d[a];
  doc["dimensions"] = dims;
  return doc;
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
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

SymbolTable symbol_table_from_json(const json& doc) {
  CategoryData base = load_category(doc);
  SymbolTable t;
  static_cast<FusionSystem&>(t) = base;
  t.d = base.d;
  if (!doc.contains("R") || !doc["R"].is_object()) throw SchemaError("symbol table needs an \"R\" object");
  for (auto it = doc["R"].begin(); it != doc["R"].end(); ++it) {
    auto parts = split(it.key(), ';');
    if (parts.size() != 3) throw SchemaError("bad R key " + it.key());
    auto ab = split(parts[0], ','), mn = split(parts[2], ',');
    if (ab.size() != 2 || mn.size() != 2) throw SchemaError("bad R key " + it.key());
    const auto& v = it.value();
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw SchemaError("R value must be [re, im]: " + it.key());
    RKey k{t.index_of(ab[0]), t.index_of(ab[1]), t.index_of(parts[1]), std::stoi(mn[0]), std::stoi(mn[1])};
    if (!t.N(k[0], k[1], k[2])) throw ConsistencyError("R entry on a forbidden channel: " + it.key());
    t.R[k] = cplx(v[0].get<double>(), v[1].get<double>());
  }
  for (int a = 0; a < t.rank(); ++a)
    for (int b = 0; b < t.rank(); ++b)
      for (int c = 0; c < t.rank(); ++c)
        for (int m = 0; m < t.N(a, b, c); ++m)
          for (int n = 0; n < t.N(a, b, c); ++n)
            if (!t.R.count({a, b, c, m, n}))
              throw ConsistencyError("missing R entry " + t.labels[a] + "," + t.labels[b] + ";" + t.labels[c]);
  return t;
}

}  // namespace lwdhr
