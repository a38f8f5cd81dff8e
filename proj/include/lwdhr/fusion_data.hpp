#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lwdhr/errors.hpp"
#include "lwdhr/linalg.hpp"

namespace lwdhr {

// (a,b,c,d,e,f,m1,m2,m3,m4): |(ab)_e c; d> = sum F[.] |a(bc)_f; d>, with
// m1: ab->e, m2: ec->d, m3: bc->f, m4: af->d.
using FKey = std::array<int, 10>;

// One channel index of a three-leaf tree: intermediate label plus two vertex multiplicities.
struct Channel {
  int mid, v1, v2;
};

// Fusion rules plus associator, shared by input categories and computed symbol tables.
class FusionSystem {
 public:
  std::vector<std::string> labels;
  int unit = 0;
  std::vector<int> dual;
  std::map<FKey, cplx> F;

  int rank() const { return static_cast<int>(labels.size()); }
  int index_of(const std::string& label) const;
  int N(int a, int b, int c) const { return fusion_[(a * rank() + b) * rank() + c]; }
  void set_N(int a, int b, int c, int value);
  void resize_fusion();

  cplx f_entry(const FKey& k) const;
  // Channels (e,m1,m2) of the left tree (ab)_e c -> d, in the row order of F_matrix.
  std::vector<Channel> left_channels(int a, int b, int c, int d) const;
  // Channels (f,m3,m4) of the right tree a(bc)_f -> d, in column order.
  std::vector<Channel> right_channels(int a, int b, int c, int d) const;
  // Change-of-basis matrix of C(d -> abc); cached after finalize().
  const Mat& F_matrix(int a, int b, int c, int d) const;
  void finalize();

  bool multiplicity_free() const;

 private:
  std::vector<int> fusion_;
  std::map<std::array<int, 4>, Mat> fcache_;
};

struct CategoryData : FusionSystem {
  std::string name;
  bool unitary = true;
  std::vector<double> d;
  double D = 1.0;

  double D2() const { return D * D; }
};

struct Dimensions {
  std::vector<double> d;
  double D;
};

CategoryData load_category(const nlohmann::json& doc);
CategoryData load_category_file(const std::string& path);
// Shipped catalog entry by name (vec-z2, vec-z3, fibonacci, ising).
CategoryData load_catalog(const std::string& name);
std::vector<std::string> catalog_names();
std::string catalog_path(const std::string& name);

Dimensions quantum_dimensions(const FusionSystem& rules);

// Max |d_a d_b - sum_c N d_c| over all pairs.
double dimension_defect(const FusionSystem& rules, const std::vector<double>& d);
// Max deviation over all pentagon identities; multiplicity aware.
double verify_pentagon(const FusionSystem& sys);
// Max over (a,b,c,d) of |F^dagger F - 1|.
double f_unitarity_defect(const FusionSystem& sys);

nlohmann::json fusion_to_json(const FusionSystem& sys);
std::string fkey_string(const FusionSystem& sys, const FKey& k);

}  // namespace lwdhr
