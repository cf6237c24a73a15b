#ifndef QHOPF_ALGEBRA_HPP
#define QHOPF_ALGEBRA_HPP

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "qhopf/expalg.hpp"

namespace qhopf {

/// Exponents (r, s) of a normal-ordered monomial (a^dag)^r f(N) a^s.
struct LegKey {
  int r = 0;
  int s = 0;
  auto operator<=>(const LegKey&) const = default;
  int degree() const { return r - s; }
};

/// Element of A(G(N)) written in the basis (a^dag)^r f(N) a^s, where each
/// coefficient f is an arity-1 ExpPoly in N. Zero coefficients are dropped.
/// The product a^dag a is a basis monomial; it is never rewritten to F(N).
class AlgebraElement {
 public:
  AlgebraElement() = default;

  static AlgebraElement identity();
  static AlgebraElement annihilation();  // a
  static AlgebraElement creation();      // a^dag
  static AlgebraElement number();        // N
  static AlgebraElement function(const ExpPoly& f);
  static AlgebraElement monomial(int r, const ExpPoly& f, int s);

  const std::map<LegKey, ExpPoly>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(LegKey key, const ExpPoly& f);

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(cplx s);
  friend AlgebraElement operator+(AlgebraElement x, const AlgebraElement& y) { return x += y; }
  friend AlgebraElement operator-(AlgebraElement x, const AlgebraElement& y) { return x -= y; }
  friend AlgebraElement operator*(cplx s, AlgebraElement x) { return x *= s; }

  /// Largest number of levels any monomial raises or lowers.
  int max_shift() const;

 private:
  std::map<LegKey, ExpPoly> terms_;
};

/// Element of the 2- or 3-fold tensor power. Each key holds one LegKey per leg
/// and the coefficient is an ExpPoly whose variable j is N on leg j.
class TensorElement {
 public:
  using Key = std::array<LegKey, 3>;

  explicit TensorElement(int legs);

  /// x (x) y.
  static TensorElement tensor(const AlgebraElement& x, const AlgebraElement& y);
  /// t (x) y and x (x) t for a 2-leg t; result has 3 legs.
  static TensorElement tensor(const TensorElement& t, const AlgebraElement& y);
  static TensorElement tensor(const AlgebraElement& x, const TensorElement& t);

  int legs() const { return legs_; }
  const std::map<Key, ExpPoly>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(const Key& key, const ExpPoly& f);

  TensorElement& operator+=(const TensorElement& other);
  TensorElement& operator-=(const TensorElement& other);
  TensorElement& operator*=(cplx s);
  friend TensorElement operator+(TensorElement x, const TensorElement& y) { return x += y; }
  friend TensorElement operator-(TensorElement x, const TensorElement& y) { return x -= y; }
  friend TensorElement operator*(cplx s, TensorElement x) { return x *= s; }

  /// Flip of the two legs, x (x) y -> y (x) x. Requires legs() == 2.
  TensorElement twisted() const;

  /// Total level change if every term shares it.
  std::optional<int> degree() const;
  /// Largest per-leg raise or lower over all terms.
  int max_shift() const;

 private:
  int legs_;
  std::map<Key, ExpPoly> terms_;
};

/// Largest coefficient residual between two elements (see qhopf::residual).
double residual(const AlgebraElement& x, const AlgebraElement& y);
double residual(const TensorElement& x, const TensorElement& y);

/// The single-variable factor of `term` along variable `var`, with coefficient 1.
ExpPoly factor_of(const Term& term, int var);

/// Normal-ordering engine for A(G(N)) with a fixed structure function G.
/// Copies share the reordering cache.
class Algebra {
 public:
  explicit Algebra(ExpPoly g);

  const ExpPoly& g() const { return g_; }

  AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y) const;
  TensorElement multiply(const TensorElement& x, const TensorElement& y) const;
  AlgebraElement power(const AlgebraElement& x, int n) const;
  TensorElement power(const TensorElement& x, int n) const;
  AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y) const;
  TensorElement commutator(const TensorElement& x, const TensorElement& y) const;

  struct Piece {
    LegKey key;
    ExpPoly f;
  };
  /// Normal-ordered (a^dag)^r1 f a^s1 . (a^dag)^r2 g a^s2 as a list of monomials.
  std::vector<Piece> monomial_product(LegKey x, const ExpPoly& f, LegKey y, const ExpPoly& g) const;

 private:
  /// a^s (a^dag)^r = sum_j (a^dag)^{r-j} h_j(N) a^{s-j}; returns h_0..h_min(r,s).
  const std::vector<ExpPoly>& reorder(int s, int r) const;

  struct Cache;
  ExpPoly g_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace qhopf

#endif  // QHOPF_ALGEBRA_HPP
