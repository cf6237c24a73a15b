#ifndef QHOPF_TESTS_SUPPORT_HPP
#define QHOPF_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qhopf/algebra.hpp"
#include "qhopf/expalg.hpp"
#include "qhopf/hopf.hpp"

namespace testing {

using qhopf::cplx;
inline constexpr double pi = std::numbers::pi;

/// Hand-rolled generators on a fixed-seed engine.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  cplx complex(double r) { return {real(-r, r), real(-r, r)}; }

  /// Up to `max_terms` terms c e^{mu V} V^k with |mu| <= mu_r, k <= max_power.
  qhopf::ExpPoly exp_poly(int arity = 1, int max_terms = 3, double mu_r = 0.6, int max_power = 2) {
    std::vector<qhopf::Term> terms;
    const int n = integer(1, max_terms);
    for (int i = 0; i < n; ++i) {
      qhopf::Term t;
      for (int j = 0; j < arity; ++j) {
        t.key[j].mu = complex(mu_r);
        t.key[j].power = integer(0, max_power);
      }
      t.coeff = complex(1.0);
      terms.push_back(t);
    }
    return qhopf::ExpPoly::from_terms(arity, terms);
  }

  /// (a^dag)^r f(N) a^s with r, s <= max_rs.
  qhopf::AlgebraElement monomial(int max_rs = 3) {
    const int r = integer(0, max_rs);
    const int s = integer(0, max_rs);
    return qhopf::AlgebraElement::monomial(r, exp_poly(1, 2, 0.4, 1), s);
  }

  /// Sum of two random monomials.
  qhopf::AlgebraElement element(int max_rs = 3) { return monomial(max_rs) + monomial(max_rs); }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

/// Named parameter sets used across the suites.
inline qhopf::HopfParams cosh_family(double kappa1, double kappa2, double gamma1, int k, double g0) {
  const double xi = kappa1 - kappa2;
  return qhopf::build_params(kappa1, kappa2, cplx(gamma1, (2.0 * k + 1.0) * pi / (2.0 * xi)), g0);
}

inline std::vector<qhopf::HopfParams> cosh_family_sets() {
  return {
      cosh_family(0.3, -0.3, 0.8, 0, 1.0),
      cosh_family(0.5, -0.1, 0.8, 1, 1.0),
      cosh_family(0.5, -0.5, -0.5, -1, 2.0),
      cosh_family(0.2, -0.2, 1.5, 0, 0.5),
      cosh_family(0.45, -0.45, 0.3, 2, 1.3),
  };
}

inline std::vector<qhopf::HopfParams> complex_generic_sets() {
  return {
      qhopf::build_params({0.5, 0.2}, {0.1, -0.1}, {0.7, 0.3}, 1.0),
      qhopf::build_params({-0.3, 0.4}, {0.2, 0.1}, {1.1, -0.6}, {0.8, 0.3}),
      qhopf::build_params({0.6, -0.2}, {-0.25, 0.3}, {-0.4, 1.3}, {1.5, -0.4}),
  };
}

inline qhopf::HopfParams degenerate_set() { return qhopf::build_params(0.3, 0.3, 0.7, 1.0); }
inline qhopf::HopfParams gamma_zero_set() { return qhopf::build_params(0.5, 0.1, 0.0, 1.0); }

}  // namespace testing

#endif  // QHOPF_TESTS_SUPPORT_HPP
