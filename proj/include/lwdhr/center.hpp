#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "lwdhr/symbol_table.hpp"
#include "lwdhr/tube_algebra.hpp"

namespace lwdhr {

// Simple objects of Z(C) from the single-strand tube, gauge fixed and sorted; vacuum first.
std::vector<CenterObject> center_simples(HomCalculus& H, std::uint64_t seed = 0xC0FFEE, double tol = 1e-9);

// Z(C) as a braided category over a fixed list of simples, with fixed fusion bases.
class CenterCategory {
 public:
  explicit CenterCategory(HomCalculus& H, std::uint64_t seed = 0xC0FFEE, double tol = 1e-9);
  CenterCategory(HomCalculus& H, std::vector<CenterObject> simples);

  HomCalculus& hom() { return H_; }
  const CategoryData& base() const { return H_.cat(); }
  const std::vector<CenterObject>& simples() const { return simples_; }
  const CenterObject& object(int X) const { return simples_.at(X); }
  int size() const { return static_cast<int>(simples_.size()); }
  int vacuum() const { return 0; }
  int dual(int X);
  int index_of(const std::string& label) const;
  double dim(int X) const { return simples_.at(X).d; }
  double total_dim_sq() const;  // sum of d_X^2

  Word word(const std::vector<int>& objs) const;
  // Half-braiding of X1 (x) ... (x) Xn with the simple c: [X1..Xn, c] -> [c, X1..Xn].
  Morphism sigma(const std::vector<int>& objs, int c);
  // beta_{X,Y} : X (x) Y -> Y (x) X, the half-braiding of X evaluated on Y.
  Morphism braiding(int X, int Y);
  Morphism monodromy(int X, int Y);

  // Trace-orthonormal basis of intertwiners src -> tgt; one-dimensional bases have fixed phase.
  const std::vector<Morphism>& hom_basis(const std::vector<int>& src, const std::vector<int>& tgt);
  int N(int X, int Y, int Z);
  // Isometric splitting vertex Z -> X (x) Y: sqrt(d_Z) times the dagger of the fusion basis element.
  Morphism vertex(int X, int Y, int Z, int mu = 0);
  // Unitary zeta_X : X^* -> Xbar, the polar factor of the intertwiner between them.
  Morphism zeta(int X);
  // X^* : dual summands with the mate of the inverse half-braiding.
  HalfBraiding dual_object(int X);
  // Unit vector 1 -> X (x) Xbar: d_X^{-1/2} (id (x) zeta_X) coev_X.
  Morphism pair_creation(int X);

 private:
  HomCalculus& H_;
  std::vector<CenterObject> simples_;
  std::map<std::pair<std::vector<int>, std::vector<int>>, std::vector<Morphism>> hom_cache_;
  std::map<std::pair<std::vector<int>, int>, Morphism> sigma_cache_;
  std::map<std::pair<int, int>, Morphism> braid_cache_;
  std::map<int, Morphism> pair_cache_;
  std::vector<int> dual_;
  std::recursive_mutex mu_;
};

// Intertwiners between composite half-braidings given as (word, sigma per simple).
std::vector<Morphism> intertwiner_basis(HomCalculus& H, const Word& source, const std::vector<Morphism>& sigma_source,
                                        const Word& target, const std::vector<Morphism>& sigma_target,
                                        double tol = 1e-9);

struct CenterReport {
  double pentagon = 0.0;
  HexagonReport hexagon;
  double f_unitarity = 0.0;
  double r_unitarity = 0.0;
  double s_unitarity = 0.0;
  double dim_identity = 0.0;  // |sum d_X^2 - D^4|
};

// F from iterated fusion bases, R from the half-braidings; CoherenceError above 1e-6.
SymbolTable center_symbols(CenterCategory& Z, CenterReport* report = nullptr);

// S_{XY} = tr(monodromy) / sum_X d_X^2.
Mat s_matrix(CenterCategory& Z);

}  // namespace lwdhr
