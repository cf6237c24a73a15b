#ifndef QHOPF_CONSTRAINTS_HPP
#define QHOPF_CONSTRAINTS_HPP

#include <optional>
#include <string>

#include "qhopf/hopf.hpp"
#include "qhopf/report.hpp"

namespace qhopf {

/// kappa1 - kappa2 = xi + i eta, gamma = gamma1 + i gamma2, with G(0) (or
/// G'(0) when gamma = 0) given by g0.
struct HermiticityInput {
  double xi = 0.0;
  double eta = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double g0 = 1.0;
};

enum class Family {
  proposition1,  // eta = 0, gamma2 = (2k+1) pi / (2 xi)
  sin_branch,    // eta = 0, gamma2 = k pi / xi, k != 0
  suq2_like,
  suq11_like,
  su2_like,
  su11_like,
  degenerate_kappa_real_gamma,  // gamma real, kappa != 0
  non_hermitian,
  unlisted_hermitian,  // G real but outside every family above
};

const char* to_string(Family f);

struct FamilyVerdict {
  bool hermitian = false;
  Family family = Family::non_hermitian;
  int k = 0;  // proposition1 and sin_branch only
  std::string notes;
  /// Pointwise cross-check: largest |Im G(n)| / |G(n)| over n = 0..20 and where it sits.
  double pointwise_imag = 0.0;
  int pointwise_witness = 0;

  /// "proposition1(k=0)", "non_hermitian", ...
  std::string label() const;
  nlohmann::json to_json() const;
};

/// Oh-Singh parameters: q = e^eps, G(N) = cosh(eps (alpha N + beta + 1/2)) / cosh(eps/2).
struct OhSinghParams {
  double eps = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  int k = 0;

  nlohmann::json to_json() const;
};

inline constexpr double kHermiticityTolerance = 1e-10;
inline constexpr int kPointwiseRange = 20;

/// Conditions on c1..c4, c10, c11 and the constants that the Hopf axioms force:
/// cond1 for A, B <= max_order, cond2 to cond5 as ExpPoly identities.
CheckReport verify_ci_conditions(const HopfParams& p, int max_order = 6);
CheckReport verify_ci_conditions(const HopfCoefficients& c, int max_order = 6);

/// The recursion for G^{(A)}(0), G^{(A)}(gamma) and its closed-form solution,
/// G(-gamma) = 0 and the compatibility condition through c1 c3, c2 c4.
CheckReport verify_g_recursion(const HopfParams& p, int max_order = 8);
/// Same checks for a candidate G against the parameters p.
CheckReport verify_g_recursion(const ExpPoly& g, const HopfParams& p, int max_order = 8);

/// Decides whether G is a real function of N and names its family.
/// Throws std::invalid_argument when the decomposition is undefined (c = d = 0).
FamilyVerdict classify_hermiticity(const HermiticityInput& h);

/// Hermiticity and family of a full parameter pack, with a note on how the Hopf
/// structure relates to Oh-Singh's.
FamilyVerdict classify_family(const HopfParams& p);

/// Largest |Im G(n)| / |G(n)| for n = 0..n_max, evaluated from the closed
/// form with complex sinh. Returns (ratio, n).
std::pair<double, int> pointwise_imaginary_part(const HermiticityInput& h, int n_max = kPointwiseRange);

/// kappa1 = xi/2, kappa2 = -xi/2 (plus kappa_sum/2 on both), xi = alpha eps,
/// gamma = (2 beta + 1)/(2 alpha) + i (2k+1) pi / (2 xi),
/// G(0) = cosh(eps (2 beta + 1)/2) / cosh(eps/2).
HopfParams param_map_oh_singh(const OhSinghParams& o, cplx kappa_sum = 0.0);

/// Inverse in the gauge eps > 0. Throws std::invalid_argument when p is not
/// an Oh-Singh parameter set.
OhSinghParams param_map_oh_singh_inverse(const HopfParams& p);

/// (eps, alpha, beta) and (-eps, -alpha, -beta - 1) give the same algebra;
/// returns the representative with eps > 0.
OhSinghParams canonical_gauge(const OhSinghParams& o);

/// cosh(eps (alpha N + beta + 1/2)) / cosh(eps/2) as an ExpPoly.
ExpPoly oh_singh_g(const OhSinghParams& o);

/// [alpha N + beta + 1]_q - [alpha N + beta]_q with [x]_q = sinh(eps x)/sinh(eps).
ExpPoly q_number_difference(const OhSinghParams& o);

}  // namespace qhopf

#endif  // QHOPF_CONSTRAINTS_HPP
