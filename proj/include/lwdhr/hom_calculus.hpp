#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lwdhr/fusion_data.hpp"

namespace lwdhr {

// A tensor factor given as a direct sum of simples (repeats allowed).
struct Leg {
  std::vector<int> summands;
  bool operator==(const Leg&) const = default;
  auto operator<=>(const Leg&) const = default;
};
using Word = std::vector<Leg>;

Leg simple_leg(int a);
Word simple_word(const std::vector<int>& labels);
Word concat(const Word& a, const Word& b);

// Signed letters; orientation -1 reads the letter as its dual simple.
struct ObjectWord {
  std::vector<std::pair<int, int>> letters;
};
Word to_word(const FusionSystem& sys, const ObjectWord& w);

// Left-nested splitting trees c -> ((x1 x2) x3)...: entry (e, i, s, mu) extends tree i of
// c' = e over the shorter word by summand s of the last leg through vertex mu of e x_s -> c.
struct TreeEntry {
  int e, i, s, mu;
};

struct TreeSpace {
  std::vector<std::vector<TreeEntry>> basis;  // per total charge c
  std::vector<std::unordered_map<std::uint64_t, int>> lookup;
  int dim(int c) const { return static_cast<int>(basis[c].size()); }
  int find(int c, int e, int i, int s, int mu) const;
};

// Blocks indexed by total charge c: columns = trees of c -> source, rows = trees of c -> target.
class Morphism {
 public:
  Word source, target;
  std::vector<Mat> blocks;

  Morphism& operator+=(const Morphism& o);
  Morphism& operator-=(const Morphism& o);
  Morphism& operator*=(cplx s);
  friend Morphism operator+(Morphism a, const Morphism& b) { return a += b; }
  friend Morphism operator-(Morphism a, const Morphism& b) { return a -= b; }
  friend Morphism operator*(cplx s, Morphism a) { return a *= s; }
  double max_abs() const;
  bool same_shape(const Morphism& o) const { return source == o.source && target == o.target; }
};

// X as a leg plus sigma_c : X (x) c -> c (x) X for each simple c.
struct HalfBraiding {
  Leg object;
  std::vector<Morphism> sigma;
};

struct DottedTerm {
  int label;
  double weight;
  Word word;
};

class HomCalculus {
 public:
  explicit HomCalculus(const CategoryData& cat);
  HomCalculus(const HomCalculus&) = delete;
  HomCalculus& operator=(const HomCalculus&) = delete;

  const CategoryData& cat() const { return cat_; }
  int rank() const { return cat_.rank(); }

  const TreeSpace& space(const Word& w);
  int dim(int c, const Word& w) { return space(w).dim(c); }
  int hom_dim(const Word& source, const Word& target);
  int hom_dim(const ObjectWord& source, const ObjectWord& target);

  Morphism zero(const Word& source, const Word& target);
  Morphism identity(const Word& w);
  Morphism compose(const Morphism& g, const Morphism& f) const;
  Morphism tensor(const Morphism& f, const Morphism& g);
  Morphism pad(const Word& left, const Morphism& f, const Word& right);
  static Morphism dagger(const Morphism& f);

  cplx trace(const Morphism& f) const;
  cplx trace_inner_product(const Morphism& f, const Morphism& g) const;
  cplx skein_inner_product(const Morphism& phi, const Morphism& psi) const;

  // Isometric splitting vertex c -> a (x) b (multiplicity mu).
  Morphism vertex(int a, int b, int c, int mu = 0);
  // Coevaluation 1 -> x (x) xbar with coev^dagger coev = d_x; ev : xbar (x) x -> 1 fixed by the zigzag.
  Morphism coev(int x);
  Morphism ev(int x);
  // Right duality x (x) xbar -> 1 and 1 -> xbar (x) x, the daggers of coev and ev.
  Morphism ev_right(int x) { return dagger(coev(x)); }
  Morphism coev_right(int x) { return dagger(ev(x)); }
  // 1 -> unit leg; with tensor() this inserts strict unitors.
  Morphism unit_in();
  // Inclusion of summand s of the leg as a single-simple leg.
  Morphism inclusion(const Leg& leg, int s);

  // Product basis (a, b, mu, i, j) of A (x) B at c mapped to the canonical basis.
  const Mat& tensor_map(const Word& A, const Word& B, int c);

  std::vector<DottedTerm> dotted_line_expand(int position, const Word& w) const;

  // Half-braiding on a general leg and on a word; result X (x) w -> w (x) X.
  Morphism sigma_leg(const HalfBraiding& hb, const Leg& leg);
  Morphism sigma_word(const HalfBraiding& hb, const Word& w);
  // Max residual of transporting the X strand across a dotted loop.
  double cloaking_residual(const HalfBraiding& hb);

 private:
  struct ProductLayout {
    std::vector<int> offset;  // per (a, b, mu) flattened
    std::vector<std::array<int, 3>> blocks;
    int total = 0;
  };
  const ProductLayout& layout(const Word& A, const Word& B, int c);
  Mat build_tensor_map(const Word& A, const Word& B, int c);

  const CategoryData& cat_;
  std::map<Word, TreeSpace> spaces_;
  std::map<std::tuple<Word, Word, int>, Mat> tmaps_;
  std::map<std::tuple<Word, Word, int>, ProductLayout> layouts_;
  std::map<int, Morphism> ev_cache_;
  std::recursive_mutex mu_;
};

}  // namespace lwdhr
