#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lwdhr/lw_lemmas.hpp"

namespace lwdhr {

// Operator sequence n -> A_n on the truncated model, defined for first <= n <= last.
struct OpFamily {
  std::string name;
  int first = 1, last = 1;
  std::function<State(int, const State&)> at;
};

struct StableValue {
  State value;
  int N = 0;
};

// Limit of A_n psi: the smallest N such that A_n psi agrees with A_last psi for all N <= n <= last
// (relative tolerance). At least two agreeing values are required; otherwise TruncationError.
StableValue stabilize(SectorModel& M, const OpFamily& A, const State& psi, double tol);

// Phi^Z_{XY}[alpha] for alpha : X (x) Y -> Z, with its stabilization index over the test states.
struct PhiOperator {
  int X = 0, Y = 0, Z = 0;
  Morphism alpha;
  OpFamily family;
  int N = 0;
};

struct Transporter {
  int X = 0;
  OpFamily T, Tstar;
  int N = 0;
  double unitarity = 0.0;  // max of |T*T psi - psi|, |T T* psi - psi|
};

struct DaggerResidual {
  double product = 0.0;  // Phi[alpha] Phi[delta^dagger] - d_Z^{-1} tr(alpha delta^dagger)
  double reverse = 0.0;  // Phi[delta^dagger] Phi[alpha] against Dr[delta^dagger alpha] conjugated
};

struct FusionRuleCheck {
  std::vector<int> multiplicity;  // over Z
  double completeness = 0.0;      // sum Phi[pi]^* Phi[pi] - 1
  double orthogonality = 0.0;     // Phi[pi] Phi[pi']^* - delta 1
};

struct FCheck {
  double tree_left = 0.0;   // Phi[xi] Phi[eta] against the composite insertion on D_{n+1}
  double tree_right = 0.0;  // Phi[gamma] rho^X(Phi[delta]) against the composite insertion
  double fit = 0.0;         // residual of the left trees expanded in the right trees
  double deviation = 0.0;   // max |F_DHR - F_center| over the block
  Mat F;                    // rows: left channels, columns: right channels
  std::vector<Channel> left, right;  // (e, m1, m2) and (f, m3, m4)
};

struct RCheck {
  double identity = 0.0;   // Phi_{XY}[alpha] b_{Y,X} - Phi_{YX}[alpha beta_{Y,X}]
  double fit = 0.0;
  double deviation = 0.0;  // max |R_DHR - R_center| over the block
  Mat R;                   // R[mu][nu] in the convention of the symbol tables
};

struct DhrComparison {
  SymbolTable table;
  double f_deviation = 0.0, r_deviation = 0.0;
  double f_tree = 0.0, f_fit = 0.0, r_identity = 0.0, r_fit = 0.0;
  double pentagon = 0.0;
  HexagonReport hexagon;
  double dagger = 0.0, fusion = 0.0, intertwining = 0.0, transporter_unitarity = 0.0, crucial = 0.0;
  bool fusion_rules_match = true;
  std::map<std::string, int> stabilization;
  double seconds = 0.0;
};

// Sector-theoretic side of the comparison on the fiducial chain and the right chain.
class DhrAnalysis {
 public:
  DhrAnalysis(SectorModel& M, std::vector<State> states, double stab_tol = 1e-11);

  SectorModel& model() { return M_; }
  const std::vector<State>& states() const { return states_; }
  // Largest n with every footprint inside the truncated geometry.
  int window() const;

  // alpha^{XY}_{Z,mu} : X (x) Y -> Z, the dagger of the isometric vertex.
  Morphism fusion_morphism(int X, int Y, int Z, int mu = 0);

  State string_op(int n, int X, const State& s);
  State string_op_adjoint(int n, int X, const State& s);

  OpFamily phi_family(int X, int Y, int Z, const Morphism& alpha);
  // Phi_n[alpha]^* = (U_{n+1}^X)^* (U_n^Y)^* Dr_{n+1}[alpha^dagger] U_n^Z.
  OpFamily phi_adjoint_family(int X, int Y, int Z, const Morphism& alpha);
  // (U_{n+1}^X)^* (U_n^Y)^* Dr_{n+1}[f] U_n^Y U_{n+1}^X for f : X (x) Y -> X (x) Y.
  OpFamily pair_family(int X, int Y, const Morphism& f);
  // (U_n^W)^* Dr_{D_{n+1}}[f] U_n^Z U_{n+1}^Y U_{n+2}^X for f : X (x) Y (x) Z -> W.
  OpFamily tree_family(int X, int Y, int Z, int W, const Morphism& f);
  // (U_{n+shift}^W)^* A_n U_{n+shift}^W.
  OpFamily rho_family(int W, const OpFamily& A, int shift);
  // (U_n^W)^* x U_n^W and (U_{n+1}^X)^* (U_n^Y)^* x U_n^Y U_{n+1}^X for a fixed observable x.
  OpFamily rho_observable(int W, const Op& x, const std::string& name);
  OpFamily rho_rho_observable(int X, int Y, const Op& x, const std::string& name);

  // Stabilized application; records the index per family name.
  State apply(const OpFamily& A, const State& psi);
  const std::map<std::string, int>& stabilization() const { return stab_; }
  double stabilization_tolerance() const { return tol_; }
  void merge_stabilization(const std::map<std::string, int>& other);

  PhiOperator phi(int X, int Y, int Z, const Morphism& alpha);
  DaggerResidual verify_phi_dagger(int X, int Y, int Z, const Morphism& alpha, const Morphism& delta);
  // max over test-state pairs of |<phi, Phi[alpha] psi> - <Phi[alpha]^* phi, psi>|.
  double verify_phi_adjoint(int X, int Y, int Z, const Morphism& alpha);
  FusionRuleCheck fusion_rules(int X, int Y);
  // Phi[alpha] rho^X rho^Y(x) = rho^Z(x) Phi[alpha] on the test states, x from local gates.
  double verify_intertwining(int X, int Y, int Z, const Morphism& alpha);

  FCheck f_check(int a, int b, int c, int d, const SymbolTable* reference);

  Transporter transporter(int X);
  // b_{Y,X} = (T^X)^* rho^Y(T^X) and its adjoint.
  State braiding(int Y, int X, const State& psi);
  State braiding_adjoint(int Y, int X, const State& psi);
  // Residual of (u_{Q_n}^X)^* (u_{L'_n}^X)^* u_{L_n}^Y u_{Q_{n+1}}^X Dr_{L_n}[gamma] P_{E_n}^{(1,W)}
  // = Dr_{L_n}[beta_{Y,X}^dagger gamma] P_{E_n}^{(1,W)} on sector states around E_n.
  double crucial_identity(int X, int Y, int W, int n, std::uint64_t seed);
  RCheck r_check(int X, int Y, int W, const SymbolTable* reference);

 private:
  const std::vector<Placement>& fid(int n);
  const std::vector<Placement>& right(int n);
  Placement pair_region(int n);  // D_{n+1} = L_{n+1} u L_{n+2} with punctures (e_{n+2}, e_{n+1}, e_n)

  SectorModel& M_;
  std::vector<State> states_;
  double tol_;
  std::map<std::string, int> stab_;
  std::map<int, std::vector<Placement>> fid_, right_;
  std::map<int, Transporter> transporters_;
};

// Full comparison: Phi-layer checks, DHR F and R tensors over all center labels, their own
// pentagon and hexagons, and entrywise deviation from the center table. F blocks are spread over
// `jobs` worker threads, each with its own sector model on the shared center.
DhrComparison compare_with_center(DhrAnalysis& A, const SymbolTable& center, int jobs = 1);

}  // namespace lwdhr
