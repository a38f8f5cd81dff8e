#pragma once

#include <array>
#include <map>
#include <string>

#include "lwdhr/fusion_data.hpp"

namespace lwdhr {

// (a,b,c,mu,nu): beta_{a,b} psi^{ab}_{c,mu} = sum_nu R[a,b,c,mu,nu] psi^{ba}_{c,nu}.
using RKey = std::array<int, 5>;

// Braided fusion data: fusion rules, F-symbols, R-symbols, quantum dimensions.
struct SymbolTable : FusionSystem {
  std::vector<double> d;
  std::map<RKey, cplx> R;

  cplx r_entry(int a, int b, int c, int mu = 0, int nu = 0) const;
  // R^{ab}_c as a matrix over vertex multiplicities.
  Mat R_matrix(int a, int b, int c) const;
};

// Both hexagons; the second one is the first for the reversed braiding. Needs multiplicity-free data.
struct HexagonReport {
  double first = 0.0;
  double second = 0.0;
  double worst() const { return std::max(first, second); }
};
HexagonReport verify_hexagons(const SymbolTable& t);

// Max |R^dagger R - 1| over all R matrices.
double r_unitarity_defect(const SymbolTable& t);

// Category document schema plus an "R" section keyed "a,b;c;mu,nu".
nlohmann::json symbol_table_to_json(const SymbolTable& t);
SymbolTable symbol_table_from_json(const nlohmann::json& doc);

}  // namespace lwdhr
