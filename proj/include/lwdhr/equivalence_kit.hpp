#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "lwdhr/symbol_table.hpp"

namespace lwdhr {

// Bijection f on simple labels (source index -> target index) with f(1) = 1, and maps
// phi_{ij}^k : C(i (x) j -> k) -> D(f i (x) f j -> f k) in the vertex bases. phi(pi_mu) = sum_nu M(nu, mu) pi_nu,
// so rows index target vertices and columns source vertices. Missing entries mean the identity.
struct CandidateIso {
  std::vector<int> f;
  std::map<std::array<int, 3>, Mat> phi;

  Mat at(const FusionSystem& C, int i, int j, int k) const;
};

CandidateIso identity_iso(const FusionSystem& C, const FusionSystem& D);
// Throws ShapeMismatch unless f is a unit-preserving bijection preserving fusion rules and every phi has the
// shape N_C(i,j,k) x N_C(i,j,k).
void validate_iso(const FusionSystem& C, const FusionSystem& D, const CandidateIso& iso);

nlohmann::json iso_to_json(const FusionSystem& C, const FusionSystem& D, const CandidateIso& iso);
CandidateIso iso_from_json(const FusionSystem& C, const FusionSystem& D, const nlohmann::json& doc);

// Max over (i,j,k,l) of |F_D (phi (x) phi) - (phi (x) phi) F_C| on the right-tree basis of C(i (x) (j (x) k) -> l).
double check_F_intertwiner(const FusionSystem& C, const FusionSystem& D, const CandidateIso& iso);
// Max over (i,j,k) of |phi_ij R_C - R_D phi_ji| with R acting by precomposition with the braiding.
double check_R_intertwiner(const SymbolTable& C, const SymbolTable& D, const CandidateIso& iso);

// tau_{ij} = phi_{ij}^{i (x) j}(id), stored per output simple k as the matrix of the component
// F(i (x) j) -> F(k) summands: tau[{i,j}][k](mu, nu) with mu the summand of F(i (x) j), nu the target vertex.
struct Tensorator {
  std::vector<int> f;
  std::map<std::array<int, 2>, std::map<int, Mat>> tau;
  double defining = 0.0;    // max |F(g) tau_{ij} - phi_{ij}^k(g)| over basis and sampled g
  double unitarity = 0.0;   // max |tau^dagger tau - 1| and |tau tau^dagger - 1| per component
  double orthogonal = 0.0;  // phi(pi_k) phi(pi_l)^dagger - delta 1, plus dimension mismatch d_k vs d_{f k}
};

// Throws NotIntertwiner when the F diagram fails at `tol` or some phi is singular.
Tensorator build_tensorator(const FusionSystem& C, const FusionSystem& D, const CandidateIso& iso, double tol = 1e-10,
                            std::uint64_t seed = 0xC0FFEE);

// tau_{a,b} for a = sum_i A_i i and b = sum_j B_j j, restricted to the output simple k, by the extension
// formula over the standard decomposition; rows and columns run over (i, copy, j, copy, vertex).
Mat extend_tensorator(const FusionSystem& C, const Tensorator& t, const std::vector<int>& a,
                      const std::vector<int>& b, int k);

struct Coherence {
  double monoidal = 0.0;  // associativity square through tau, on simple triples
  double braided = 0.0;   // F(beta) tau = tau beta, on simple pairs; -1 when either table has no R
  double unitor = 0.0;    // triangles with the unitor fixed to the identity
};

Coherence verify_coherence(const FusionSystem& C, const FusionSystem& D, const Tensorator& t);
Coherence verify_coherence(const SymbolTable& C, const SymbolTable& D, const Tensorator& t);

struct EquivalenceReport {
  double f_intertwiner = 0.0, r_intertwiner = 0.0;
  double defining = 0.0, unitarity = 0.0, orthogonal = 0.0;
  Coherence coherence;
  bool built = false;
  std::vector<std::string> failures;
  std::string verdict;
};

// Runs every check; tolerance `tol` for diagrams, `unitary_tol` for tau.
EquivalenceReport check_equivalence(const SymbolTable& C, const SymbolTable& D, const CandidateIso& iso,
                                    double tol = 1e-9, double unitary_tol = 1e-10);

}  // namespace lwdhr
