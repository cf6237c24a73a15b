#ifndef QHOPF_EXPALG_HPP
#define QHOPF_EXPALG_HPP

#include <array>
#include <complex>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhopf {

using cplx = std::complex<double>;

/// Raised when a numeric evaluation would leave the representable range.
class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerances that define the canonical form of an ExpPoly.
struct ExpPolyConfig {
  static constexpr double merge_tolerance = 1e-9;  // |mu - mu'| below which keys merge
  static constexpr double zero_threshold = 1e-12;  // relative to the history scale
  static constexpr double exponent_cap = 50.0;     // max |Re(mu * V)| at evaluation
  static constexpr int max_arity = 3;
};

/// One variable's factor e^{mu V} V^power.
struct Factor {
  cplx mu{0.0, 0.0};
  int power = 0;
};

/// A term c * prod_j e^{mu_j V_j} V_j^{k_j}. Slots beyond the arity are unused.
struct Term {
  std::array<Factor, ExpPolyConfig::max_arity> key{};
  cplx coeff{0.0, 0.0};
};

/// An affine form sum_j coeffs[j] * W_j + offset in the target variables.
struct AffineForm {
  std::array<cplx, ExpPolyConfig::max_arity> coeffs{};
  cplx offset{0.0, 0.0};

  static AffineForm variable(int j, cplx offset = {}) {
    AffineForm f;
    f.coeffs[j] = 1.0;
    f.offset = offset;
    return f;
  }
  static AffineForm constant(cplx value) {
    AffineForm f;
    f.offset = value;
    return f;
  }
};

/// Exponential-polynomial f(V) = sum c * z^V * V^k in one to three formal
/// variables, kept in a canonical form: keys sorted, near-equal exponents
/// merged, coefficients below the zero threshold pruned.
///
/// Every instance remembers the largest coefficient magnitude seen while it
/// was built (its history scale). Pruning and is_zero() are relative to it, so
/// exact cancellations of large intermediates are recognised as zero.
class ExpPoly {
 public:
  ExpPoly() = default;
  explicit ExpPoly(int arity);

  static ExpPoly zero(int arity) { return ExpPoly(arity); }
  static ExpPoly constant(int arity, cplx c);
  /// c * e^{mu V_var} V_var^power.
  static ExpPoly monomial(int arity, int var, cplx mu, int power = 0, cplx c = 1.0);
  /// The linear function V_var.
  static ExpPoly variable(int arity, int var);
  /// Builds the canonical form of an arbitrary term list.
  static ExpPoly from_terms(int arity, std::vector<Term> terms, double scale = 0.0);
  /// Sum of several polynomials, canonicalised once.
  static ExpPoly sum(std::span<const ExpPoly> parts);

  int arity() const { return arity_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  double scale() const { return scale_; }
  double max_coefficient() const;

  ExpPoly operator-() const;
  ExpPoly& operator+=(const ExpPoly& other);
  ExpPoly& operator-=(const ExpPoly& other);
  ExpPoly& operator*=(const ExpPoly& other);
  ExpPoly& operator*=(cplx s);

  friend ExpPoly operator+(ExpPoly f, const ExpPoly& g) { return f += g; }
  friend ExpPoly operator-(ExpPoly f, const ExpPoly& g) { return f -= g; }
  friend ExpPoly operator*(const ExpPoly& f, const ExpPoly& g);
  friend ExpPoly operator*(ExpPoly f, cplx s) { return f *= s; }
  friend ExpPoly operator*(cplx s, ExpPoly f) { return f *= s; }

  /// Canonical-form equality up to the merge tolerance; coefficients are
  /// compared at the zero threshold relative to the larger history scale.
  friend bool operator==(const ExpPoly& f, const ExpPoly& g);

 private:
  int arity_ = 1;
  std::vector<Term> terms_;
  double scale_ = 0.0;

  void canonicalize(double prune_relative);
  friend double residual(const ExpPoly& f, const ExpPoly& g);
  friend ExpPoly substitute(const ExpPoly& f, int target_arity, std::span<const AffineForm> forms);
};

enum class CombineOp { add, mul };

/// f op g; the arities must agree.
ExpPoly combine(const ExpPoly& f, const ExpPoly& g, CombineOp op);

/// f with V_var replaced by V_var + m.
ExpPoly shift(const ExpPoly& f, int var, cplx m);

/// d^order f / dV_var^order.
ExpPoly differentiate(const ExpPoly& f, int var, int order = 1);

/// Numeric value at the given point (one entry per variable).
cplx evaluate(const ExpPoly& f, std::span<const cplx> point);
cplx evaluate(const ExpPoly& f, cplx v);

/// Termwise c -> conj(c), mu -> conj(mu): the complex conjugate of f on the real axis.
ExpPoly real_axis_conjugate(const ExpPoly& f);

bool is_zero(const ExpPoly& f, double relative_tolerance = ExpPolyConfig::zero_threshold);

/// Largest coefficient of f - g (before pruning) relative to the larger
/// history scale of the two. Zero for identical canonical forms.
double residual(const ExpPoly& f, const ExpPoly& g);

/// Replaces source variable i by the affine form forms[i] in target_arity
/// variables: f(V_1..V_n) -> f(L_1(W), ..., L_n(W)).
ExpPoly substitute(const ExpPoly& f, int target_arity, std::span<const AffineForm> forms);

/// Renames variables: source variable i becomes target variable targets[i].
ExpPoly relabel(const ExpPoly& f, int target_arity, std::initializer_list<int> targets);

/// Moves an arity-1 function onto variable `var` of an arity-`arity` space.
ExpPoly lift(const ExpPoly& f, int arity, int var);

/// Solves F(V+1) - F(V) = G(V) with F(0) = 0 inside the class (arity 1).
ExpPoly antidifference(const ExpPoly& g);

std::string to_string(const ExpPoly& f);

}  // namespace qhopf

#endif  // QHOPF_EXPALG_HPP
