#pragma once

#include <functional>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "lwdhr/center.hpp"
#include "lwdhr/lw_geometry.hpp"

namespace lwdhr {

// Center label per registered puncture; 0 is the vacuum.
using Config = std::vector<int>;

// Vector of the truncated vacuum sector: for each configuration an amplitude
// 1 -> X_{p_1} (x) ... (x) X_{p_k} over the non-vacuum punctures in anchor order.
struct State {
  std::map<Config, Morphism> amp;
  bool empty() const { return amp.empty(); }
};

using Op = std::function<State(const State&)>;

// Sector mechanics on the fiducial geometry. Tails of deeper punctures pass behind shallower
// ones; `chirality` = -1 mirrors every crossing.
class SectorModel {
 public:
  SectorModel(CenterCategory& Z, const FiducialGeometry& G, int chirality = 1);

  CenterCategory& center() { return Z_; }
  const FiducialGeometry& geometry() const { return G_; }
  int chirality() const { return chirality_; }
  int punctures() const { return static_cast<int>(G_.punctures().size()); }

  State vacuum();
  // Random unit-norm state in the given configuration (labels on named punctures, rest vacuum);
  // empty if the configuration has no vacuum channel.
  State random_state(const std::map<int, int>& labels, std::mt19937_64& rng);
  Word amplitude_word(const Config& c) const;

  cplx inner(const State& a, const State& b) const;
  double norm(const State& a) const;
  double distance(const State& a, const State& b) const;
  static State axpy(cplx s, const State& x, const State& y);  // s x + y
  static State scale(cplx s, const State& x);

  // Dr_C[beta] on a placement: annihilates configurations outside (in) or with non-vacuum filled
  // punctures. beta acts on the words of in/out labels; vacuum legs may be present or omitted.
  State dr(const Placement& P, const std::vector<int>& in, const std::vector<int>& out, const Morphism& beta,
           const State& s);
  // Projector onto the configurations with the given labels and vacuum filled punctures.
  State project(const Placement& P, const std::vector<int>& labels, const State& s) const;
  // Projector onto vacuum filled punctures only.
  State project_filled(const Placement& P, const State& s) const;
  // P_L^{11}, P_L^{X1}, P_L^{1X}, P_L^{X Xbar} on a link placement; kind in {"11","X1","1X","XX"}.
  State link_projector(const Placement& L, int X, const std::string& kind, const State& s);

  // Self-adjoint unitary gate u_L^X.
  State gate(const Placement& L, int X, const State& s);
  // u_{last} ... u_{first} applied in list order, and its adjoint.
  State circuit(const std::vector<Placement>& links, int X, const State& s);
  State circuit_adjoint(const std::vector<Placement>& links, int X, const State& s);

  // Fiducial helpers: U_n^X = u_{L_n} ... u_{L_1}, right chain U'_n, bridge gate u_{Q_n}.
  std::vector<Placement> fiducial(int n) const;
  std::vector<Placement> right_chain(int n) const;
  Placement link(const Link& L) const { return G_.link_placement(L); }

  // Remove the vacuum legs from a morphism between the words of the given labels.
  Morphism strip_vacuum(const Morphism& f, const std::vector<int>& src, const std::vector<int>& tgt);

 private:
  // Move the amplitude between two orderings of the same puncture window.
  Morphism transport(const Config& cfg, Morphism a, std::vector<int> from, const std::vector<int>& to);
  const Morphism& crossing(const std::vector<int>& word_labels, int pos, bool left_behind);

  CenterCategory& Z_;
  const FiducialGeometry& G_;
  int chirality_;
  std::map<std::tuple<std::vector<int>, int, bool>, Morphism> cross_cache_;
  std::map<std::pair<std::vector<int>, int>, Morphism> pad_cache_;
};

}  // namespace lwdhr
