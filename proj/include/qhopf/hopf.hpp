#ifndef QHOPF_HOPF_HPP
#define QHOPF_HOPF_HPP

#include <optional>
#include <string>

#include "qhopf/algebra.hpp"
#include "qhopf/expalg.hpp"
#include "qhopf/report.hpp"

namespace qhopf {

enum class Branch { generic, degenerate_kappa, gamma_zero };

const char* to_string(Branch b);

/// Parameter pack (kappa1, kappa2, gamma, G0) with derived quantities.
/// In the gamma_zero branch g0 holds G'(0) instead of G(0).
struct HopfParams {
  cplx kappa1;
  cplx kappa2;
  cplx gamma;
  cplx g0;
  Branch branch = Branch::generic;
  /// gamma = 0 and kappa1 = kappa2 together: G = G'(0) N.
  bool undeformed = false;

  cplx kappa;  // kappa1 - kappa2
  cplx x;      // e^{kappa/2}
  cplx y;      // e^{(kappa1+kappa2)/2}
  std::optional<cplx> lambda_sq;  // -G(0) sinh(kappa/2) / sinh(kappa gamma), generic only

  nlohmann::json to_json() const;
};

inline constexpr double kBranchTolerance = 1e-12;

/// Validates the parameters and detects the branch. Throws std::invalid_argument
/// for g0 = 0 or for a generic set with sinh(kappa gamma) = 0.
HopfParams build_params(cplx kappa1, cplx kappa2, cplx gamma, cplx g0);

/// G(N) for the parameter branch.
ExpPoly g_function(const HopfParams& p);

/// Closed form of F with F(N+1) - F(N) = G(N), F(0) = 0.
ExpPoly structure_function(const HopfParams& p);
/// F(n) = sum_{j<n} G(j).
cplx structure_function(const HopfParams& p, int n);

/// Coefficient functions and constants of the coproduct, counit and antipode.
struct HopfCoefficients {
  ExpPoly c1, c2, c3, c4;  // Delta(a^dag) = a^dag (x) c1 + c2 (x) a^dag, Delta(a) = a (x) c3 + c4 (x) a
  ExpPoly c10, c11;        // S(a^dag) = -c10(N) a^dag, S(a) = -c11(N) a
  cplx c5 = 1.0, c6 = 1.0;  // Delta(N) = c5 N (x) 1 + c6 1 (x) N + gamma
  cplx gamma = 0.0;
  cplx c7 = 0.0, c8 = 0.0, c9 = 0.0;  // counit of a^dag, a, N
  cplx c12 = 1.0, c13 = 0.0;          // S(N) = -c12 N + c13

  /// The solved forms: c_i from exponentials of kappa1, kappa2 shifted by gamma.
  static HopfCoefficients solved(const HopfParams& p);
};

/// A candidate Hopf structure on A(G(N)): the algebra together with the
/// coproduct, counit and antipode built from a coefficient set. Nothing here
/// assumes the axioms hold; check_hopf_axioms decides that.
class HopfStructure {
 public:
  explicit HopfStructure(const HopfParams& p);
  HopfStructure(Algebra algebra, HopfCoefficients coefficients);

  const Algebra& algebra() const { return algebra_; }
  const HopfCoefficients& coefficients() const { return coeff_; }

  TensorElement coproduct(const AlgebraElement& x) const;
  cplx counit(const AlgebraElement& x) const;
  AlgebraElement antipode(const AlgebraElement& x) const;

  /// Delta applied to one leg of a 2-leg element; leg 0 gives (Delta (x) id).
  TensorElement coproduct_on_leg(const TensorElement& t, int leg) const;
  /// counit applied to one leg of a 2-leg element.
  AlgebraElement counit_on_leg(const TensorElement& t, int leg) const;
  /// mu (S (x) id) for leg 0, mu (id (x) S) for leg 1.
  AlgebraElement antipode_on_leg(const TensorElement& t, int leg) const;

 private:
  Algebra algebra_;
  HopfCoefficients coeff_;
  TensorElement delta_adag_;
  TensorElement delta_a_;
  AlgebraElement s_adag_;
  AlgebraElement s_a_;

  TensorElement coproduct_of_function(const ExpPoly& f) const;
  AlgebraElement antipode_of_function(const ExpPoly& f) const;
};

/// C = F(N) - a^dag a.
AlgebraElement casimir(const HopfParams& p);

/// Coassociativity, counit and antipode axioms on a, a^dag, N and sample
/// monomials, plus compatibility of Delta and counit with the relations.
CheckReport check_hopf_axioms(const HopfParams& p);
CheckReport check_hopf_axioms(const HopfStructure& h);

inline constexpr double kSymbolicTolerance = 1e-12;

}  // namespace qhopf

#endif  // QHOPF_HOPF_HPP
