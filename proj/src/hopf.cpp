#include "qhopf/hopf.hpp"

#include <cmath>
#include <sstream>

namespace qhopf {

namespace {

nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx ipow(cplx base, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

std::string key_string(const TensorElement::Key& k, int legs) {
  std::ostringstream os;
  for (int l = 0; l < legs; ++l) os << (l ? "(x)" : "") << "(" << k[l].r << "," << k[l].s << ")";
  return os.str();
}

/// Key with the largest coefficient mismatch, for report witnesses.
std::string worst_key(const TensorElement& x, const TensorElement& y) {
  TensorElement d = x - y;
  double worst = -1.0;
  std::string where = "none";
  for (const auto& [k, f] : d.terms()) {
    if (f.max_coefficient() > worst) {
      worst = f.max_coefficient();
      where = key_string(k, x.legs());
    }
  }
  return where;
}

std::string worst_key(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement d = x - y;
  double worst = -1.0;
  std::string where = "none";
  for (const auto& [k, f] : d.terms()) {
    if (f.max_coefficient() > worst) {
      worst = f.max_coefficient();
      where = "(" + std::to_string(k.r) + "," + std::to_string(k.s) + ")";
    }
  }
  return where;
}

}  // namespace

const char* to_string(Branch b) {
  switch (b) {
    case Branch::generic:
      return "generic";
    case Branch::degenerate_kappa:
      return "degenerate_kappa";
    case Branch::gamma_zero:
      return "gamma_zero";
  }
  return "unknown";
}

nlohmann::json HopfParams::to_json() const {
  nlohmann::json j;
  j["kappa1"] = cjson(kappa1);
  j["kappa2"] = cjson(kappa2);
  j["gamma"] = cjson(gamma);
  j["g0"] = cjson(g0);
  j["branch"] = to_string(branch);
  if (undeformed) j["undeformed"] = true;
  j["X"] = cjson(x);
  j["Y"] = cjson(y);
  if (lambda_sq) j["lambda_sq"] = cjson(*lambda_sq);
  return j;
}

HopfParams build_params(cplx kappa1, cplx kappa2, cplx gamma, cplx g0) {
  if (std::abs(g0) == 0.0) throw std::invalid_argument("G(0) must not vanish");
  HopfParams p;
  p.kappa1 = kappa1;
  p.kappa2 = kappa2;
  p.gamma = gamma;
  p.g0 = g0;
  p.kappa = kappa1 - kappa2;
  p.x = std::exp(p.kappa / 2.0);
  p.y = std::exp((kappa1 + kappa2) / 2.0);

  const bool kappa_zero = std::abs(p.kappa) < kBranchTolerance;
  if (std::abs(gamma) < kBranchTolerance) {
    p.gamma = 0.0;
    p.branch = Branch::gamma_zero;
    p.undeformed = kappa_zero;
  } else if (kappa_zero) {
    p.branch = Branch::degenerate_kappa;
  } else {
    const cplx denom = std::sinh(p.kappa * gamma);
    if (std::abs(denom) < kBranchTolerance)
      throw std::invalid_argument("sinh(kappa*gamma) vanishes: lambda^2 and G(N) are undefined");
    p.branch = Branch::generic;
    p.lambda_sq = -g0 * std::sinh(p.kappa / 2.0) / denom;
  }
  return p;
}

ExpPoly g_function(const HopfParams& p) {
  switch (p.branch) {
    case Branch::generic: {
      // G0 sinh(kappa (N + gamma)) / sinh(kappa gamma)
      const cplx pre = p.g0 / (2.0 * std::sinh(p.kappa * p.gamma));
      return ExpPoly::monomial(1, 0, p.kappa, 0, pre * std::exp(p.kappa * p.gamma)) +
             ExpPoly::monomial(1, 0, -p.kappa, 0, -pre * std::exp(-p.kappa * p.gamma));
    }
    case Branch::degenerate_kappa:
      return ExpPoly::constant(1, p.g0) + ExpPoly::monomial(1, 0, 0.0, 1, p.g0 / p.gamma);
    case Branch::gamma_zero:
      if (p.undeformed) return ExpPoly::monomial(1, 0, 0.0, 1, p.g0);
      return ExpPoly::monomial(1, 0, p.kappa, 0, p.g0 / (2.0 * p.kappa)) +
             ExpPoly::monomial(1, 0, -p.kappa, 0, -p.g0 / (2.0 * p.kappa));
  }
  throw std::logic_error("unknown branch");
}

ExpPoly structure_function(const HopfParams& p) { return antidifference(g_function(p)); }

cplx structure_function(const HopfParams& p, int n) {
  if (n < 0) throw std::invalid_argument("F(n) needs n >= 0");
  const ExpPoly g = g_function(p);
  cplx total = 0.0;
  for (int j = 0; j < n; ++j) total += evaluate(g, static_cast<double>(j));
  return total;
}

HopfCoefficients HopfCoefficients::solved(const HopfParams& p) {
  const cplx k1 = p.kappa1;
  const cplx k2 = p.kappa2;
  const cplx g = p.gamma;
  auto expo = [](cplx mu, cplx c) { return ExpPoly::monomial(1, 0, mu, 0, c); };
  HopfCoefficients c;
  c.c1 = expo(k1, std::exp(k1 * g));
  c.c2 = expo(k2, std::exp(k2 * g));
  c.c3 = expo(-k2, std::exp(-k2 * g));
  c.c4 = expo(-k1, std::exp(-k1 * g));
  c.c10 = expo(-(k1 + k2), std::exp(-(k1 + k2) * g + k1));
  c.c11 = expo(k1 + k2, std::exp((k1 + k2) * g + k2));
  c.gamma = g;
  c.c9 = -g;
  c.c13 = -2.0 * g;
  return c;
}

// ---------------------------------------------------------------------------
// HopfStructure

HopfStructure::HopfStructure(const HopfParams& p)
    : HopfStructure(Algebra(g_function(p)), HopfCoefficients::solved(p)) {}

HopfStructure::HopfStructure(Algebra algebra, HopfCoefficients coefficients)
    : algebra_(std::move(algebra)), coeff_(std::move(coefficients)), delta_adag_(2), delta_a_(2) {
  const LegKey one{};
  const LegKey up{1, 0};
  const LegKey down{0, 1};
  delta_adag_.add_term({up, one, one}, lift(coeff_.c1, 2, 1));
  delta_adag_.add_term({one, up, one}, lift(coeff_.c2, 2, 0));
  delta_a_.add_term({down, one, one}, lift(coeff_.c3, 2, 1));
  delta_a_.add_term({one, down, one}, lift(coeff_.c4, 2, 0));
  s_adag_ = algebra_.multiply(AlgebraElement::function(-coeff_.c10), AlgebraElement::creation());
  s_a_ = AlgebraElement::monomial(0, -coeff_.c11, 1);
}

TensorElement HopfStructure::coproduct_of_function(const ExpPoly& f) const {
  AffineForm form;
  form.coeffs[0] = coeff_.c5;
  form.coeffs[1] = coeff_.c6;
  form.offset = coeff_.gamma;
  const AffineForm forms[1] = {form};
  TensorElement t(2);
  t.add_term({}, substitute(f, 2, forms));
  return t;
}

AlgebraElement HopfStructure::antipode_of_function(const ExpPoly& f) const {
  AffineForm form;
  form.coeffs[0] = -coeff_.c12;
  form.offset = coeff_.c13;
  const AffineForm forms[1] = {form};
  return AlgebraElement::function(substitute(f, 1, forms));
}

TensorElement HopfStructure::coproduct(const AlgebraElement& x) const {
  TensorElement out(2);
  for (const auto& [key, f] : x.terms()) {
    TensorElement term = algebra_.power(delta_adag_, key.r);
    term = algebra_.multiply(term, coproduct_of_function(f));
    term = algebra_.multiply(term, algebra_.power(delta_a_, key.s));
    out += term;
  }
  return out;
}

cplx HopfStructure::counit(const AlgebraElement& x) const {
  cplx total = 0.0;
  for (const auto& [key, f] : x.terms())
    total += ipow(coeff_.c7, key.r) * ipow(coeff_.c8, key.s) * evaluate(f, coeff_.c9);
  return total;
}

AlgebraElement HopfStructure::antipode(const AlgebraElement& x) const {
  AlgebraElement out;
  for (const auto& [key, f] : x.terms()) {
    AlgebraElement term = algebra_.power(s_a_, key.s);
    term = algebra_.multiply(term, antipode_of_function(f));
    term = algebra_.multiply(term, algebra_.power(s_adag_, key.r));
    out += term;
  }
  return out;
}

TensorElement HopfStructure::coproduct_on_leg(const TensorElement& t, int leg) const {
  if (t.legs() != 2 || (leg != 0 && leg != 1)) throw std::invalid_argument("coproduct_on_leg needs 2 legs");
  const int other = 1 - leg;
  TensorElement out(3);
  for (const auto& [key, f] : t.terms()) {
    for (const Term& term : f.terms()) {
      const TensorElement split = coproduct(AlgebraElement::monomial(key[leg].r, factor_of(term, leg), key[leg].s));
      const ExpPoly rest = ExpPoly::constant(1, term.coeff) * factor_of(term, other);
      for (const auto& [dk, df] : split.terms()) {
        if (leg == 0)
          out.add_term({dk[0], dk[1], key[other]}, relabel(df, 3, {0, 1}) * lift(rest, 3, 2));
        else
          out.add_term({key[other], dk[0], dk[1]}, lift(rest, 3, 0) * relabel(df, 3, {1, 2}));
      }
    }
  }
  return out;
}

AlgebraElement HopfStructure::counit_on_leg(const TensorElement& t, int leg) const {
  if (t.legs() != 2 || (leg != 0 && leg != 1)) throw std::invalid_argument("counit_on_leg needs 2 legs");
  const int other = 1 - leg;
  std::vector<AffineForm> forms(2);
  forms[leg] = AffineForm::constant(coeff_.c9);
  forms[other] = AffineForm::variable(0);
  AlgebraElement out;
  for (const auto& [key, f] : t.terms()) {
    const cplx weight = ipow(coeff_.c7, key[leg].r) * ipow(coeff_.c8, key[leg].s);
    if (weight == 0.0) continue;
    out.add_term(key[other], substitute(f, 1, forms) * weight);
  }
  return out;
}

AlgebraElement HopfStructure::antipode_on_leg(const TensorElement& t, int leg) const {
  if (t.legs() != 2 || (leg != 0 && leg != 1)) throw std::invalid_argument("antipode_on_leg needs 2 legs");
  AlgebraElement out;
  for (const auto& [key, f] : t.terms()) {
    for (const Term& term : f.terms()) {
      AlgebraElement left = AlgebraElement::monomial(key[0].r, factor_of(term, 0), key[0].s);
      AlgebraElement right = AlgebraElement::monomial(key[1].r, factor_of(term, 1), key[1].s);
      if (leg == 0)
        left = antipode(left);
      else
        right = antipode(right);
      out += term.coeff * algebra_.multiply(left, right);
    }
  }
  return out;
}

AlgebraElement casimir(const HopfParams& p) {
  return AlgebraElement::function(structure_function(p)) -
         AlgebraElement::monomial(1, ExpPoly::constant(1, 1.0), 1);
}

// ---------------------------------------------------------------------------
// Axiom checks

CheckReport check_hopf_axioms(const HopfParams& p) {
  CheckReport report = check_hopf_axioms(HopfStructure(p));
  report.params = p.to_json();
  return report;
}

CheckReport check_hopf_axioms(const HopfStructure& h) {
  CheckReport report;
  const double tol = kSymbolicTolerance;
  const Algebra& alg = h.algebra();

  const AlgebraElement a = AlgebraElement::annihilation();
  const AlgebraElement adag = AlgebraElement::creation();
  const AlgebraElement n = AlgebraElement::number();
  const std::vector<std::pair<std::string, AlgebraElement>> samples = {
      {"a", a},
      {"a_dag", adag},
      {"N", n},
      // Guards for the multiplicative extension of the maps.
      {"monomial_1", AlgebraElement::monomial(2, ExpPoly::monomial(1, 0, 0.3, 0), 1)},
      {"monomial_2", AlgebraElement::monomial(1, ExpPoly::variable(1, 0), 2)},
  };

  for (const auto& [name, x] : samples) {
    const TensorElement dx = h.coproduct(x);

    const TensorElement left3 = h.coproduct_on_leg(dx, 0);
    const TensorElement right3 = h.coproduct_on_leg(dx, 1);
    const double r_coassoc = residual(left3, right3);
    report.add("coassociativity:" + name, r_coassoc, tol,
               r_coassoc > tol ? std::optional(worst_key(left3, right3)) : std::nullopt);

    for (int leg = 0; leg < 2; ++leg) {
      const std::string side = leg == 0 ? "left" : "right";
      const AlgebraElement eps_x = h.counit_on_leg(dx, leg);
      const double r_counit = residual(eps_x, x);
      report.add("counit_" + side + ":" + name, r_counit, tol,
                 r_counit > tol ? std::optional(worst_key(eps_x, x)) : std::nullopt);

      const AlgebraElement s_x = h.antipode_on_leg(dx, leg);
      const AlgebraElement unit = h.counit(x) * AlgebraElement::identity();
      const double r_anti = residual(s_x, unit);
      report.add("antipode_" + side + ":" + name, r_anti, tol,
                 r_anti > tol ? std::optional(worst_key(s_x, unit)) : std::nullopt);
    }
  }

  // Delta and counit must respect [N, a^dag] = a^dag, [N, a] = -a, [a, a^dag] = G(N).
  const TensorElement da = h.coproduct(a);
  const TensorElement dadag = h.coproduct(adag);
  const TensorElement dn = h.coproduct(n);
  const TensorElement dg = h.coproduct(AlgebraElement::function(alg.g()));

  const TensorElement comm = alg.commutator(da, dadag);
  const double r_comm = residual(comm, dg);
  report.add("homomorphism:delta_commutator", r_comm, tol,
             r_comm > tol ? std::optional(worst_key(comm, dg)) : std::nullopt);
  report.add("homomorphism:delta_N_adag", residual(alg.commutator(dn, dadag), dadag), tol);
  report.add("homomorphism:delta_N_a", residual(alg.commutator(dn, da), cplx(-1.0) * da), tol);

  const cplx ea = h.counit(a);
  const cplx eadag = h.counit(adag);
  const cplx en = h.counit(n);
  const cplx eg = h.counit(AlgebraElement::function(alg.g()));
  const double g_scale = std::max(alg.g().scale(), 1e-300);
  const double r_ecomm = std::abs(ea * eadag - eadag * ea - eg) / g_scale;
  std::ostringstream w;
  w.precision(17);
  w << "counit(G(N)) = G(c9) = " << format_complex(eg);
  report.add("homomorphism:counit_commutator", r_ecomm, tol,
             r_ecomm > tol ? std::optional(w.str()) : std::nullopt);
  report.add("homomorphism:counit_N_adag", std::abs(en * eadag - eadag * en - eadag), tol);
  report.add("homomorphism:counit_N_a", std::abs(en * ea - ea * en + ea), tol);
  return report;
}

}  // namespace qhopf
