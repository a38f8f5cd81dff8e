#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lwdhr/lw_engine.hpp"

namespace lwdhr {

struct LemmaInstance {
  std::string lemma;
  std::string instance;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass() const { return residual <= tolerance; }
};

struct LemmaReport {
  std::vector<LemmaInstance> items;
  bool all_pass() const;
  double worst() const;
  double worst(const std::string& lemma) const;
};

// 1e-12 for pointed categories, 1e-10 otherwise.
double default_tolerance(const CategoryData& cat);

// Unit-norm states over every label combination on the given punctures (labels from the
// per-puncture lists); the auxiliary origin puncture absorbs the total charge.
std::vector<State> sector_states(SectorModel& M, const std::vector<int>& punctures,
                                 const std::vector<std::vector<int>>& labels, std::mt19937_64& rng);

// Local test states: the vacuum and conjugate pairs between a puncture near the origin and the
// auxiliary puncture.
std::vector<State> local_states(SectorModel& M, std::uint64_t seed);

// max over states of |A psi - B psi|.
double op_residual(SectorModel& M, const Op& A, const Op& B, const std::vector<State>& states);

// Simple isotopy: max over X of |(u_L^X - u_L'^X) P_E| on sector states around E.
double verify_isotopy(SectorModel& M, const Link& L, const Link& Lp, const Region& E, const IsotopyWitness& w,
                      std::uint64_t seed);

// Excitation: U_n^{X_0} ... U_{n+k}^{X_k} psi = P_D^{(X_k..X_0)} U_n^{X_0} ... U_{n+k}^{X_k} psi.
double verify_excitation(SectorModel& M, int n, const std::vector<int>& stack, const std::vector<State>& states);

// All lemma families of the sector mechanics on the fiducial geometry.
LemmaReport run_lemma_suite(SectorModel& M, std::uint64_t seed, double tol);

}  // namespace lwdhr
