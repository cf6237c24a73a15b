#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>

#include "qhopf/expalg.hpp"
#include "support.hpp"

using namespace qhopf;
using testing::Gen;
using testing::rel_err;

namespace {

cplx eval_at(const ExpPoly& f, std::initializer_list<cplx> point) {
  std::vector<cplx> v(point);
  return evaluate(f, std::span<const cplx>(v));
}

/// c e^{mu v} v^k summed directly from the term list.
cplx brute_force(const ExpPoly& f, const std::vector<cplx>& point) {
  cplx total = 0.0;
  for (const Term& t : f.terms()) {
    cplx v = t.coeff;
    for (int j = 0; j < f.arity(); ++j) v *= std::exp(t.key[j].mu * point[j]) * std::pow(point[j], t.key[j].power);
    total += v;
  }
  return total;
}

}  // namespace

TEST_CASE("monomials evaluate to c e^{mu v} v^k") {
  const ExpPoly f = ExpPoly::monomial(1, 0, {0.3, 0.1}, 2, 1.5);
  const cplx v = 1.7;
  CHECK(rel_err(evaluate(f, v), 1.5 * std::exp(cplx(0.3, 0.1) * v) * v * v) < 1e-15);
  CHECK(evaluate(ExpPoly::variable(1, 0), 2.5) == cplx(2.5));
  CHECK(eval_at(ExpPoly::constant(2, 4.0), {2.5, -1.0}) == cplx(4.0));
  CHECK_THROWS_AS(evaluate(ExpPoly::constant(2, 4.0), 2.5), std::invalid_argument);
}

TEST_CASE("canonical form does not depend on term order") {
  Gen gen(11);
  for (int trial = 0; trial < 30; ++trial) {
    const ExpPoly f = gen.exp_poly(2, 5);
    std::vector<Term> terms(f.terms().begin(), f.terms().end());
    std::reverse(terms.begin(), terms.end());
    CHECK(ExpPoly::from_terms(2, terms) == f);
  }
}

TEST_CASE("exponents closer than the merge tolerance merge into one key") {
  Term a;
  a.key[0].mu = 0.4;
  a.coeff = 1.0;
  Term b = a;
  b.key[0].mu = 0.4 + 1e-11;
  b.coeff = 2.0;
  const ExpPoly f = ExpPoly::from_terms(1, {a, b});
  REQUIRE(f.size() == 1);
  CHECK(std::abs(f.terms()[0].coeff - 3.0) < 1e-15);

  b.key[0].mu = 0.4 + 1e-6;
  CHECK(ExpPoly::from_terms(1, {a, b}).size() == 2);
}

TEST_CASE("cancellation is judged against the history scale") {
  const ExpPoly big = ExpPoly::monomial(1, 0, 0.2, 0, 1e6);
  const ExpPoly small = ExpPoly::monomial(1, 0, 0.5, 0, 1.0);
  const ExpPoly f = (small + big) - big;
  CHECK(f == small);
  const ExpPoly noise = ExpPoly::monomial(1, 0, 0.2, 0, 1e6 * (1.0 + 1e-15));
  CHECK(is_zero(noise - big));
  CHECK_FALSE(is_zero(small));
}

TEST_CASE("evaluation is a ring homomorphism") {
  Gen gen(12);
  for (int trial = 0; trial < 100; ++trial) {
    const ExpPoly f = gen.exp_poly();
    const ExpPoly g = gen.exp_poly();
    const cplx v = gen.complex(3.0);
    const cplx fv = evaluate(f, v);
    const cplx gv = evaluate(g, v);
    CHECK(rel_err(evaluate(f + g, v), fv + gv) < 1e-12);
    CHECK(rel_err(evaluate(f - g, v), fv - gv) < 1e-12);
    CHECK(rel_err(evaluate(f * g, v), fv * gv) < 1e-12);
    CHECK(rel_err(evaluate(combine(f, g, CombineOp::mul), v), fv * gv) < 1e-12);
    CHECK(rel_err(evaluate(cplx(0.5, -2.0) * f, v), cplx(0.5, -2.0) * fv) < 1e-12);
  }
}

TEST_CASE("three-variable evaluation agrees with direct summation") {
  Gen gen(13);
  for (int trial = 0; trial < 30; ++trial) {
    const ExpPoly f = gen.exp_poly(3, 4);
    const std::vector<cplx> point = {gen.complex(2.0), gen.complex(2.0), gen.complex(2.0)};
    CHECK(rel_err(evaluate(f, std::span<const cplx>(point)), brute_force(f, point)) < 1e-13);
  }
}

TEST_CASE("shift by m then by -m is the identity") {
  Gen gen(14);
  for (int trial = 0; trial < 50; ++trial) {
    const ExpPoly f = gen.exp_poly(2, 3);
    const cplx m = gen.complex(2.0);
    const int var = gen.integer(0, 1);
    CHECK(residual(shift(shift(f, var, m), var, -m), f) < 1e-12);
    const cplx v0 = gen.complex(1.0), v1 = gen.complex(1.0);
    const cplx moved = var == 0 ? eval_at(f, {v0 + m, v1}) : eval_at(f, {v0, v1 + m});
    CHECK(rel_err(eval_at(shift(f, var, m), {v0, v1}), moved) < 1e-12);
  }
}

TEST_CASE("derivatives match central finite differences") {
  Gen gen(15);
  const double h = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    const ExpPoly f = gen.exp_poly();
    const double v = gen.real(-2.0, 2.0);
    const cplx fd = (evaluate(f, v + h) - evaluate(f, v - h)) / (2.0 * h);
    const cplx exact = evaluate(differentiate(f, 0), v);
    CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("higher derivatives compose") {
  Gen gen(16);
  for (int trial = 0; trial < 20; ++trial) {
    const ExpPoly f = gen.exp_poly();
    CHECK(residual(differentiate(f, 0, 3), differentiate(differentiate(differentiate(f, 0), 0), 0)) < 1e-12);
  }
  CHECK(is_zero(differentiate(ExpPoly::variable(1, 0) * ExpPoly::variable(1, 0), 0, 3)));
}

TEST_CASE("real-axis conjugation is an involution and conjugates values on the real line") {
  Gen gen(17);
  for (int trial = 0; trial < 50; ++trial) {
    const ExpPoly f = gen.exp_poly();
    CHECK(real_axis_conjugate(real_axis_conjugate(f)) == f);
    const double x = gen.real(-3.0, 3.0);
    CHECK(rel_err(evaluate(real_axis_conjugate(f), x), std::conj(evaluate(f, x))) < 1e-13);
  }
}

TEST_CASE("antidifference sums G from 0 to n-1") {
  Gen gen(18);
  for (int trial = 0; trial < 40; ++trial) {
    ExpPoly g = gen.exp_poly(1, 3, 0.8, 2);
    if (trial % 4 == 0) g += ExpPoly::variable(1, 0) * ExpPoly::constant(1, 0.5);  // pure polynomial part
    const ExpPoly f = antidifference(g);
    cplx partial = 0.0;
    for (int n = 0; n <= 12; ++n) {
      CHECK(rel_err(evaluate(f, static_cast<double>(n)), partial) < 1e-10);
      partial += evaluate(g, static_cast<double>(n));
    }
    CHECK(residual(shift(f, 0, 1.0) - f, g) < 1e-10);
  }
}

TEST_CASE("substitution matches evaluation at the affine image") {
  Gen gen(19);
  for (int trial = 0; trial < 30; ++trial) {
    const ExpPoly f = gen.exp_poly(2, 3);
    AffineForm l0;
    l0.coeffs = {gen.complex(1.0), gen.complex(1.0), gen.complex(1.0)};
    l0.offset = gen.complex(1.0);
    const AffineForm l1 = AffineForm::variable(2, gen.complex(1.0));
    const std::array<AffineForm, 2> forms = {l0, l1};
    const ExpPoly h = substitute(f, 3, forms);
    const cplx w0 = gen.complex(1.0), w1 = gen.complex(1.0), w2 = gen.complex(1.0);
    const cplx u0 = l0.coeffs[0] * w0 + l0.coeffs[1] * w1 + l0.coeffs[2] * w2 + l0.offset;
    const cplx u1 = w2 + l1.offset;
    CHECK(rel_err(eval_at(h, {w0, w1, w2}), eval_at(f, {u0, u1})) < 1e-11);
  }
}

TEST_CASE("relabel and lift move variables") {
  const ExpPoly f = ExpPoly::monomial(2, 0, 0.3, 1) * ExpPoly::monomial(2, 1, -0.2, 0);
  const ExpPoly g = relabel(f, 3, {2, 0});
  CHECK(rel_err(eval_at(g, {1.5, 9.0, 0.7}), eval_at(f, {0.7, 1.5})) < 1e-15);
  const ExpPoly one = ExpPoly::monomial(1, 0, 0.4, 2);
  CHECK(rel_err(eval_at(lift(one, 2, 1), {5.0, 1.2}), evaluate(one, 1.2)) < 1e-15);
}

TEST_CASE("evaluation past the exponent cap raises OverflowError") {
  const ExpPoly f = ExpPoly::monomial(1, 0, 30.0);
  CHECK_NOTHROW(evaluate(f, 1.0));
  CHECK_THROWS_AS(evaluate(f, 2.0), OverflowError);
}

TEST_CASE("to_string names every term") {
  const ExpPoly f = ExpPoly::monomial(1, 0, 0.5, 1, 2.0) + ExpPoly::constant(1, 1.0);
  const std::string s = to_string(f);
  CHECK(s.find("V") != std::string::npos);
  CHECK(to_string(ExpPoly::zero(1)) == "0");
}
