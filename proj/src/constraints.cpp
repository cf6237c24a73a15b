#include "qhopf/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace qhopf {

namespace {

constexpr double kPi = std::numbers::pi;

cplx ipow(cplx base, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

/// |x - y| relative to the larger of the two; 0 when both vanish.
double rel(cplx x, cplx y) {
  const double s = std::max(std::abs(x), std::abs(y));
  return s == 0.0 ? 0.0 : std::abs(x - y) / s;
}

std::vector<ExpPoly> derivatives(const ExpPoly& f, int max_order) {
  std::vector<ExpPoly> out{f};
  for (int j = 1; j <= max_order; ++j) out.push_back(differentiate(out.back(), 0));
  return out;
}

std::vector<cplx> values_at(const std::vector<ExpPoly>& derivs, cplx v) {
  std::vector<cplx> out;
  out.reserve(derivs.size());
  for (const auto& d : derivs) out.push_back(evaluate(d, v));
  return out;
}

std::string ab_witness(int a, int b) { return "A=" + std::to_string(a) + ",B=" + std::to_string(b); }

/// Tracks the worst residual of a family of scalar checks.
struct Worst {
  double value = 0.0;
  std::string where;
  void update(double r, const std::string& w) {
    if (r > value || std::isnan(r)) {
      value = r;
      where = w;
    }
  }
  std::optional<std::string> witness(double tol) const {
    return value > tol ? std::optional(where) : std::nullopt;
  }
};

ExpPoly reflect(const ExpPoly& f, cplx offset) {
  AffineForm form;
  form.coeffs[0] = -1.0;
  form.offset = offset;
  const AffineForm forms[1] = {form};
  return substitute(f, 1, forms);
}

ExpPoly tensor2(const ExpPoly& left, const ExpPoly& right) { return lift(left, 2, 0) * lift(right, 2, 1); }

bool near_zero(double x) { return std::abs(x) < kBranchTolerance; }

void su_label(double slope, bool deformed, Family& family) {
  // Label convention: negative slope of G is the compact real form.
  if (deformed) {
    family = slope < 0 ? Family::suq2_like : Family::suq11_like;
  } else {
    family = slope < 0 ? Family::su2_like : Family::su11_like;
  }
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::proposition1:
      return "proposition1";
    case Family::sin_branch:
      return "sin_branch";
    case Family::suq2_like:
      return "suq2_like";
    case Family::suq11_like:
      return "suq11_like";
    case Family::su2_like:
      return "su2_like";
    case Family::su11_like:
      return "su11_like";
    case Family::degenerate_kappa_real_gamma:
      return "degenerate_kappa_real_gamma";
    case Family::non_hermitian:
      return "non_hermitian";
    case Family::unlisted_hermitian:
      return "unlisted_hermitian";
  }
  return "unknown";
}

std::string FamilyVerdict::label() const {
  std::string s = to_string(family);
  if (family == Family::proposition1 || family == Family::sin_branch) s += "(k=" + std::to_string(k) + ")";
  return s;
}

nlohmann::json FamilyVerdict::to_json() const {
  nlohmann::json j;
  j["hermitian"] = hermitian;
  j["family"] = to_string(family);
  if (family == Family::proposition1 || family == Family::sin_branch) j["k"] = k;
  j["label"] = label();
  j["notes"] = notes;
  j["pointwise_max_rel_imag"] = std::stod(format_number(pointwise_imag));
  j["pointwise_witness_n"] = pointwise_witness;
  return j;
}

nlohmann::json OhSinghParams::to_json() const {
  return {{"eps", eps}, {"q", std::exp(eps)}, {"alpha", alpha}, {"beta", beta}, {"k", k}};
}

// ---------------------------------------------------------------------------
// Conditions on the coefficient functions

CheckReport verify_ci_conditions(const HopfParams& p, int max_order) {
  CheckReport r = verify_ci_conditions(HopfCoefficients::solved(p), max_order);
  r.params = p.to_json();
  return r;
}

CheckReport verify_ci_conditions(const HopfCoefficients& c, int max_order) {
  if (max_order < 0 || max_order > 12) throw std::invalid_argument("max_order must lie in 0..12");
  CheckReport report;
  const double tol = kSymbolicTolerance;
  const cplx g = c.gamma;
  const std::array<const ExpPoly*, 4> ci = {&c.c1, &c.c2, &c.c3, &c.c4};

  for (int i = 0; i < 4; ++i) {
    const std::string name = "c" + std::to_string(i + 1);
    const auto derivs = derivatives(*ci[i], 2 * max_order);
    const auto at_zero = values_at(derivs, 0.0);
    const auto at_gamma = values_at(derivs, g);
    Worst w;
    for (int a = 0; a <= max_order; ++a)
      for (int b = 0; b <= max_order; ++b) w.update(rel(at_zero[a] * at_zero[b], at_gamma[a + b]), ab_witness(a, b));
    report.add("cond1:" + name, w.value, tol, w.witness(tol));

    const cplx at_minus_gamma = evaluate(*ci[i], -g);
    report.add("cond2:" + name, std::abs(at_minus_gamma - 1.0), tol,
               std::abs(at_minus_gamma - 1.0) > tol
                   ? std::optional(name + "(-gamma) = " + format_complex(at_minus_gamma))
                   : std::nullopt);
  }

  // Antipode consistency.
  report.add("cond3:first", residual(reflect(c.c1, 1.0 - 2.0 * g), c.c2 * c.c10), tol);
  report.add("cond3:second", residual(reflect(c.c2, -2.0 * g), shift(c.c1, 0, -1.0) * c.c10), tol);
  report.add("cond4:first", residual(reflect(c.c3, -1.0 - 2.0 * g), c.c4 * c.c11), tol);
  report.add("cond4:second", residual(reflect(c.c4, -2.0 * g), shift(c.c3, 0, 1.0) * c.c11), tol);

  // Compatibility of Delta with [N, a^dag] = a^dag and [N, a] = -a through the
  // relation [a, a^dag] = G(N).
  report.add("cond5:first", residual(tensor2(shift(c.c2, 0, 1.0), c.c3), tensor2(c.c2, shift(c.c3, 0, -1.0))), tol);
  report.add("cond5:second", residual(tensor2(c.c4, shift(c.c1, 0, 1.0)), tensor2(shift(c.c4, 0, -1.0), c.c1)), tol);

  const double gs = std::max(1.0, std::abs(g));
  auto constant = [&](const std::string& name, cplx value, cplx expected, double scale) {
    const double d = std::abs(value - expected) / scale;
    report.add("constants:" + name, d, tol,
               d > tol ? std::optional(name + " = " + format_complex(value))
                       : std::nullopt);
  };
  constant("c5", c.c5, 1.0, 1.0);
  constant("c6", c.c6, 1.0, 1.0);
  constant("c7", c.c7, 0.0, 1.0);
  constant("c8", c.c8, 0.0, 1.0);
  constant("c9", c.c9, -g, gs);
  constant("c12", c.c12, 1.0, 1.0);
  constant("c13", c.c13, -2.0 * g, gs);
  return report;
}

// ---------------------------------------------------------------------------
// Recursion for G

CheckReport verify_g_recursion(const HopfParams& p, int max_order) {
  return verify_g_recursion(g_function(p), p, max_order);
}

CheckReport verify_g_recursion(const ExpPoly& g, const HopfParams& p, int max_order) {
  if (max_order < 0 || max_order > 10) throw std::invalid_argument("max_order must lie in 0..10");
  CheckReport report;
  report.params = p.to_json();
  const double tol = kSymbolicTolerance;
  const cplx kappa = p.kappa;
  const cplx gamma = p.gamma;

  const auto derivs = derivatives(g, max_order);
  const auto g0v = values_at(derivs, 0.0);
  const auto ggv = values_at(derivs, gamma);

  // Two-index recursion with c1 c3 = e^{kappa (N+gamma)}, c2 c4 = e^{-kappa (N+gamma)}.
  {
    Worst w;
    const cplx up = std::exp(kappa * gamma);
    const cplx down = std::exp(-kappa * gamma);
    for (int a = 0; a <= max_order; ++a) {
      for (int b = 0; b <= a; ++b) {
        const cplx t1 = ipow(kappa, b) * up * g0v[a - b];
        const cplx t2 = ipow(-kappa, a - b) * down * g0v[b];
        const cplx rhs = ggv[a];
        const double s = std::max({std::abs(t1), std::abs(t2), std::abs(rhs)});
        w.update(s == 0.0 ? 0.0 : std::abs(t1 + t2 - rhs) / s, ab_witness(a, b));
      }
    }
    report.add("condG", w.value, tol, w.witness(tol));
  }

  // The same condition written through the solved coefficient functions.
  {
    const HopfCoefficients c = HopfCoefficients::solved(p);
    const auto p13 = values_at(derivatives(c.c1 * c.c3, max_order), 0.0);
    const auto p24 = values_at(derivatives(c.c2 * c.c4, max_order), 0.0);
    Worst w;
    for (int a = 0; a <= max_order; ++a) {
      for (int b = 0; b <= a; ++b) {
        const cplx t1 = g0v[a - b] * p13[b];
        const cplx t2 = p24[a - b] * g0v[b];
        const double s = std::max({std::abs(t1), std::abs(t2), std::abs(ggv[a])});
        w.update(s == 0.0 ? 0.0 : std::abs(t1 + t2 - ggv[a]) / s, ab_witness(a, b));
      }
    }
    report.add("cond6", w.value, tol, w.witness(tol));
  }

  // Closed forms of the solution.
  const bool degenerate = p.branch == Branch::degenerate_kappa;
  if (p.branch == Branch::gamma_zero) {
    Worst w;
    for (int a = 0; a <= max_order; ++a) {
      const cplx expected = (a % 2 == 1) ? ipow(kappa, a - 1) * p.g0 : cplx(0.0);
      const double s = std::max({std::abs(expected), std::abs(g0v[a]), std::abs(p.g0)});
      w.update(std::abs(g0v[a] - expected) / s, "A=" + std::to_string(a));
    }
    report.add("GAzero", w.value, tol, w.witness(tol));
    report.add_skipped("GAgamma", "coincides with GAzero at gamma = 0");
    report.add_skipped("Ggamma", "G(0) = 0 at gamma = 0");
  } else {
    const cplx g0 = p.g0;
    Worst wz;
    Worst wg;
    const cplx g_gamma = 2.0 * std::cosh(kappa * gamma) * g0;
    const bool coth2_defined = degenerate || std::abs(std::sinh(2.0 * kappa * gamma)) > kBranchTolerance;
    for (int a = 0; a <= max_order; ++a) {
      cplx at0;
      cplx atg;
      if (degenerate) {
        // Limits kappa -> 0: kappa^A coth(c kappa gamma) -> 1/(c gamma) for A = 1, 0 for odd A >= 3.
        at0 = a == 0 ? g0 : a == 1 ? g0 / gamma : cplx(0.0);
        atg = a == 0 ? g_gamma : a == 1 ? g_gamma / (2.0 * gamma) : cplx(0.0);
      } else if (a % 2 == 0) {
        at0 = ipow(kappa, a) * g0;
        atg = ipow(kappa, a) * g_gamma;
      } else {
        at0 = ipow(kappa, a) / std::tanh(kappa * gamma) * g0;
        atg = coth2_defined ? ipow(kappa, a) / std::tanh(2.0 * kappa * gamma) * g_gamma : cplx(0.0);
      }
      const double s0 = std::max({std::abs(at0), std::abs(g0v[a]), std::abs(g0)});
      wz.update(std::abs(g0v[a] - at0) / s0, "A=" + std::to_string(a));
      if (coth2_defined) {
        const double sg = std::max({std::abs(atg), std::abs(ggv[a]), std::abs(g0)});
        wg.update(std::abs(ggv[a] - atg) / sg, "A=" + std::to_string(a));
      }
    }
    report.add("GAzero", wz.value, tol, wz.witness(tol));
    if (coth2_defined)
      report.add("GAgamma", wg.value, tol, wg.witness(tol));
    else
      report.add_skipped("GAgamma", "sinh(2 kappa gamma) = 0, coth undefined");
    const double r = rel(ggv[0], g_gamma);
    report.add("Ggamma", r, tol,
               r > tol ? std::optional("G(gamma) = " + format_complex(ggv[0]))
                       : std::nullopt);
  }

  {
    const cplx at = evaluate(g, -gamma);
    const double scale = std::max({std::abs(p.g0), std::abs(g0v[0]), g.max_coefficient()});
    const double r = scale == 0.0 ? std::abs(at) : std::abs(at) / scale;
    report.add("cond7", r, tol,
               r > tol ? std::optional("G(-gamma) = " + format_complex(at))
                       : std::nullopt);
  }

  // F(N+1) - F(N) = G(N) for the closed-form structure function of g.
  const ExpPoly f = antidifference(g);
  report.add("difference_equation", residual(shift(f, 0, 1.0) - f, g), tol);
  report.add("F0", std::abs(evaluate(f, 0.0)) / std::max(g.max_coefficient(), 1e-300), tol);
  return report;
}

// ---------------------------------------------------------------------------
// Hermiticity

std::pair<double, int> pointwise_imaginary_part(const HermiticityInput& h, int n_max) {
  const cplx kappa(h.xi, h.eta);
  const cplx gamma(h.gamma1, h.gamma2);
  const bool kappa_zero = std::abs(kappa) < kBranchTolerance;
  const bool gamma_zero = std::abs(gamma) < kBranchTolerance;
  std::vector<cplx> values;
  for (int n = 0; n <= n_max; ++n) {
    const double x = n;
    cplx v;
    if (gamma_zero)
      v = kappa_zero ? h.g0 * x : h.g0 * std::sinh(kappa * x) / kappa;
    else if (kappa_zero)
      v = h.g0 * (1.0 + x / gamma);
    else
      v = h.g0 * std::sinh(kappa * (x + gamma)) / std::sinh(kappa * gamma);
    values.push_back(v);
  }
  double biggest = 0.0;
  for (cplx v : values) biggest = std::max(biggest, std::abs(v));
  double worst = 0.0;
  int where = 0;
  for (int n = 0; n <= n_max; ++n) {
    const double denom = std::max(std::abs(values[n]), 1e-13 * biggest);
    if (denom == 0.0) continue;
    const double r = std::abs(values[n].imag()) / denom;
    if (r > worst) {
      worst = r;
      where = n;
    }
  }
  return {worst, where};
}

FamilyVerdict classify_hermiticity(const HermiticityInput& h) {
  const cplx kappa(h.xi, h.eta);
  const cplx gamma(h.gamma1, h.gamma2);
  const bool kappa_zero = std::abs(kappa) < kBranchTolerance;
  const bool gamma_zero = std::abs(gamma) < kBranchTolerance;
  if (h.g0 == 0.0) throw std::invalid_argument("G(0) must not vanish");

  FamilyVerdict v;
  std::ostringstream notes;

  if (gamma_zero) {
    if (kappa_zero) {
      v.hermitian = true;
      su_label(h.g0, false, v.family);
      notes << "G(N) = G'(0) N";
    } else {
      const ExpPoly g = ExpPoly::monomial(1, 0, kappa, 0, h.g0 / (2.0 * kappa)) +
                        ExpPoly::monomial(1, 0, -kappa, 0, -h.g0 / (2.0 * kappa));
      v.hermitian = residual(real_axis_conjugate(g), g) <= kHermiticityTolerance;
      if (v.hermitian) {
        su_label(h.g0, true, v.family);
        notes << "G(N) = G'(0) sinh(kappa N)/kappa";
      } else {
        v.family = Family::non_hermitian;
        notes << "sinh(kappa N)/kappa is not real for complex kappa with xi, eta both nonzero";
      }
    }
  } else if (kappa_zero) {
    v.hermitian = near_zero(h.gamma2);
    if (v.hermitian) {
      su_label(h.g0 / h.gamma1, false, v.family);
      notes << "gamma real: reduces to the gamma = 0 line G'(0) N by N -> N + gamma";
    } else {
      v.family = Family::non_hermitian;
      notes << "G(0)(1 + N/gamma) is not real for non-real gamma";
    }
  } else {
    // G(N)/G(0) = sinh(A(N) + i B(N)) / (c + i d) with c + i d = sinh(kappa gamma).
    const double c = std::sinh(h.xi * h.gamma1 - h.eta * h.gamma2) * std::cos(h.xi * h.gamma2 + h.eta * h.gamma1);
    const double d = std::cosh(h.xi * h.gamma1 - h.eta * h.gamma2) * std::sin(h.xi * h.gamma2 + h.eta * h.gamma1);
    if (std::hypot(c, d) < kBranchTolerance)
      throw std::invalid_argument("c = d = 0: sinh(kappa gamma) vanishes and G(N) is undefined");

    const ExpPoly s = ExpPoly::monomial(1, 0, kappa, 0, 0.5 * std::exp(kappa * gamma)) +
                      ExpPoly::monomial(1, 0, -kappa, 0, -0.5 * std::exp(-kappa * gamma));
    const ExpPoly s_bar = real_axis_conjugate(s);
    const ExpPoly a = (s + s_bar) * cplx(0.5);
    const ExpPoly b = (s - s_bar) * cplx(0.0, -0.5);
    const ExpPoly beta = (b * cplx(c) - a * cplx(d)) * cplx(1.0 / (c * c + d * d));
    v.hermitian = is_zero(beta, kHermiticityTolerance);

    if (!v.hermitian) {
      v.family = Family::non_hermitian;
      notes << "beta(N) has " << beta.size() << " nonvanishing exponential terms";
    } else if (near_zero(h.gamma2)) {
      v.family = Family::degenerate_kappa_real_gamma;
      notes << "gamma real: reduces to the gamma = 0 case by N -> N + gamma";
    } else {
      const double m = 2.0 * h.xi * h.gamma2 / kPi;
      const double mr = std::round(m);
      if (near_zero(h.eta) && std::abs(m - mr) < 1e-9 && mr != 0.0) {
        const int mi = static_cast<int>(mr);
        if (mi % 2 != 0) {
          v.family = Family::proposition1;
          v.k = static_cast<int>(std::floor((mi - 1) / 2.0));
          notes << "G(N) = G(0) cosh(xi (N + gamma1)) / cosh(xi gamma1)";
        } else {
          v.family = Family::sin_branch;
          v.k = mi / 2;
          notes << "sin-branch gamma2 = k pi / xi: G(N) = G(0) sinh(xi (N + gamma1)) / sinh(xi gamma1), "
                   "the real-gamma function shifted by i k pi / xi";
        }
      } else {
        v.family = Family::unlisted_hermitian;
        notes << "beta(N) vanishes outside the enumerated families";
      }
    }
  }

  const auto [imag, n] = pointwise_imaginary_part(h);
  v.pointwise_imag = imag;
  v.pointwise_witness = n;
  if (v.hermitian != (imag <= kHermiticityTolerance))
    notes << "; pointwise check disagrees (max |Im G(n)|/|G(n)| = " << format_number(imag) << " at n = " << n << ")";
  v.notes = notes.str();
  return v;
}

FamilyVerdict classify_family(const HopfParams& p) {
  HermiticityInput h;
  h.xi = p.kappa.real();
  h.eta = p.kappa.imag();
  h.gamma1 = p.gamma.real();
  h.gamma2 = p.gamma.imag();
  h.g0 = p.g0.real();

  if (std::abs(p.g0.imag()) > kHermiticityTolerance * std::abs(p.g0)) {
    FamilyVerdict v;
    v.family = Family::non_hermitian;
    v.notes = std::string(p.branch == Branch::gamma_zero ? "G'(0)" : "G(0)") + " is not real";
    v.pointwise_imag = 1.0;
    return v;
  }

  FamilyVerdict v = classify_hermiticity(h);
  std::ostringstream extra;
  if (p.branch == Branch::gamma_zero)
    extra << (p.undeformed ? "sl(2)-type algebra" : "sl_q(2)-type algebra");
  const cplx kappa_sum = p.kappa1 + p.kappa2;
  if (v.family == Family::proposition1) {
    if (std::abs(kappa_sum) < kBranchTolerance)
      extra << "Hopf structure coincides with Oh-Singh's";
    else
      extra << "Oh-Singh Hopf structure up to kappa1 + kappa2 = " << format_complex(kappa_sum);
  }
  if (!extra.str().empty()) v.notes += (v.notes.empty() ? "" : "; ") + extra.str();
  return v;
}

// ---------------------------------------------------------------------------
// Oh-Singh parameters

HopfParams param_map_oh_singh(const OhSinghParams& o, cplx kappa_sum) {
  if (o.alpha == 0.0) throw std::invalid_argument("alpha must be nonzero");
  if (o.eps == 0.0) throw std::invalid_argument("eps must be nonzero");
  const double xi = o.alpha * o.eps;
  const double gamma1 = (2.0 * o.beta + 1.0) / (2.0 * o.alpha);
  const double gamma2 = (2.0 * o.k + 1.0) * kPi / (2.0 * xi);
  const double g0 = std::cosh(o.eps * (2.0 * o.beta + 1.0) / 2.0) / std::cosh(o.eps / 2.0);
  return build_params(xi / 2.0 + kappa_sum / 2.0, -xi / 2.0 + kappa_sum / 2.0, cplx(gamma1, gamma2), g0);
}

OhSinghParams param_map_oh_singh_inverse(const HopfParams& p) {
  if (p.branch != Branch::generic) throw std::invalid_argument("Oh-Singh parameters need the generic branch");
  if (std::abs(p.kappa1 + p.kappa2) > 1e-10) throw std::invalid_argument("Oh-Singh parameters need kappa1 = -kappa2");
  if (std::abs(p.kappa.imag()) > 1e-10 || std::abs(p.g0.imag()) > 1e-10)
    throw std::invalid_argument("Oh-Singh parameters need real kappa and G(0)");
  const double xi = p.kappa.real();
  const double gamma1 = p.gamma.real();
  const double g0 = p.g0.real();

  const double m = 2.0 * xi * p.gamma.imag() / kPi;
  const double mr = std::round(m);
  if (std::abs(m - mr) > 1e-8 || static_cast<long long>(mr) % 2 == 0)
    throw std::invalid_argument("Im(gamma) is not (2k+1) pi / (2 xi)");

  // G(0) = cosh(xi gamma1) / cosh(eps/2) fixes |eps|.
  const double ratio = std::cosh(xi * gamma1) / g0;
  if (!(g0 > 0.0) || !(ratio > 1.0))
    throw std::invalid_argument("no real eps > 0 with cosh(eps/2) = cosh(xi gamma1) / G(0)");
  OhSinghParams o;
  o.eps = 2.0 * std::acosh(ratio);
  o.alpha = xi / o.eps;
  o.beta = o.alpha * gamma1 - 0.5;
  o.k = static_cast<int>(std::floor((mr - 1.0) / 2.0));
  return o;
}

OhSinghParams canonical_gauge(const OhSinghParams& o) {
  if (o.eps >= 0.0) return o;
  return {-o.eps, -o.alpha, -o.beta - 1.0, o.k};
}

ExpPoly oh_singh_g(const OhSinghParams& o) {
  const double e = o.eps;
  const cplx pre = 0.5 / std::cosh(e / 2.0);
  return ExpPoly::monomial(1, 0, e * o.alpha, 0, pre * std::exp(e * (o.beta + 0.5))) +
         ExpPoly::monomial(1, 0, -e * o.alpha, 0, pre * std::exp(-e * (o.beta + 0.5)));
}

ExpPoly q_number_difference(const OhSinghParams& o) {
  const double e = o.eps;
  // [alpha N + shift]_q as two exponentials in N.
  auto q_number = [&](double shift) {
    const cplx pre = 0.5 / std::sinh(e);
    return ExpPoly::monomial(1, 0, e * o.alpha, 0, pre * std::exp(e * shift)) +
           ExpPoly::monomial(1, 0, -e * o.alpha, 0, -pre * std::exp(-e * shift));
  };
  return q_number(o.beta + 1.0) - q_number(o.beta);
}

}  // namespace qhopf
