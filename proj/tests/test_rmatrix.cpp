#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "qhopf/fockrep.hpp"
#include "support.hpp"

using namespace qhopf;
using testing::rel_err;

namespace {

std::vector<HopfParams> generic_sets() {
  std::vector<HopfParams> sets = testing::complex_generic_sets();
  sets.push_back(testing::cosh_family(0.3, -0.3, 0.8, 0, 1.0));
  sets.push_back(build_params(0.5, 0.1, 0.7, 1.0));
  return sets;
}

OhSinghParams oh_singh(double eps, double alpha, double beta, int k) {
  OhSinghParams o;
  o.eps = eps;
  o.alpha = alpha;
  o.beta = beta;
  o.k = k;
  return o;
}

double max_entry_diff(const SectorOperator& x, const SectorOperator& y, int M_max) {
  double worst = 0.0;
  for (int M = 0; M <= M_max; ++M) worst = std::max(worst, (x.block(M) - y.block(M)).cwiseAbs().maxCoeff());
  return worst;
}

nlohmann::json read_golden(const std::string& name) {
  std::ifstream in(std::string(QHOPF_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("low sectors of R against hand-expanded entries") {
  for (const HopfParams& p : generic_sets()) {
    const SectorOperator r = build_rmatrix(p, 2);
    const cplx k = p.kappa, g = p.gamma;
    CHECK(rel_err(r.block(0)(0, 0), std::exp(-k * g * g)) < 1e-14);

    // Sector 1, basis (1,0), (0,1).
    const Matrix& b1 = r.block(1);
    CHECK(rel_err(b1(0, 0), std::exp(-k * (1.0 + g) * g)) < 1e-14);
    CHECK(rel_err(b1(1, 1), std::exp(-k * g * (1.0 + g))) < 1e-14);
    CHECK(rel_err(b1(1, 0), 2.0 * std::sinh(k * g) * std::exp(-k * g * (1.0 + g))) < 1e-13);
    CHECK(std::abs(b1(0, 1)) == 0.0);

    // <0,2|R|2,0>: the n = 2 term only.
    const cplx f1 = structure_function(p, 1), f2 = structure_function(p, 2);
    const cplx x = p.x, y = p.y, l2 = *p.lambda_sq;
    const cplx coeff2 = (1.0 - x * x) * (1.0 - x * x) / (x + 1.0 / x) / x * y * y / (l2 * l2);
    const cplx amp = f1 * f2 / ((x * y) * (x * y));
    CHECK(rel_err(r.block(2)(2, 0), coeff2 * amp * std::exp(-k * g * (2.0 + g))) < 1e-13);
  }
}

TEST_CASE("R has degree 0 and lower-triangular blocks") {
  const SectorOperator r = build_rmatrix(generic_sets()[0], 6);
  CHECK(r.degree == 0);
  CHECK(r.legs == 2);
  for (int M = 0; M <= 6; ++M) {
    const Matrix& b = r.block(M);
    CHECK(b.rows() == M + 1);
    CHECK(b.cols() == M + 1);
    for (int i = 0; i <= M; ++i)
      for (int j = i + 1; j <= M; ++j) CHECK(b(i, j) == 0.0);
    for (int i = 0; i <= M; ++i) CHECK(std::abs(b(i, i)) > 0.0);
  }
}

TEST_CASE("quasitriangularity and Yang-Baxter on generic sets") {
  for (const HopfParams& p : generic_sets()) {
    const CheckReport qt = check_quasitriangularity(p, 6);
    INFO(qt.summary());
    CHECK(qt.passed());
    CHECK(qt.max_residual() < kSectorTolerance);
    CHECK(qt.find("coproduct_left:sector=06") != nullptr);
    CHECK(qt.find("intertwiner_a:sector=06") != nullptr);
    const CheckReport ybe = check_yang_baxter(p, 6);
    CHECK(ybe.passed());
    CHECK(ybe.max_residual() < kYangBaxterTolerance);
  }
}

TEST_CASE("a 1% change of lambda^2 breaks the intertwiner but not the coproduct relations") {
  const HopfParams p = generic_sets()[0];
  RMatrixOptions perturbed;
  perturbed.lambda_sq_scale = 1.01;
  const CheckReport qt = check_quasitriangularity(p, 6, perturbed);
  CHECK_FALSE(qt.passed());
  CHECK(qt.max_residual("intertwiner_a") > 1e-4);
  CHECK(qt.max_residual("coproduct_left") < kSectorTolerance);
}

TEST_CASE("the series cutoff only matters below M_max") {
  const HopfParams p = generic_sets()[1];
  RMatrixOptions longer;
  longer.series_cutoff = 9;
  CHECK(max_entry_diff(build_rmatrix(p, 5), build_rmatrix(p, 5, longer), 5) == 0.0);
  RMatrixOptions shorter;
  shorter.series_cutoff = 2;
  CHECK(max_entry_diff(build_rmatrix(p, 5), build_rmatrix(p, 5, shorter), 5) > 1e-6);
  CHECK_FALSE(check_quasitriangularity(p, 5, shorter).passed());
}

TEST_CASE("a vanishing X-factorial is reported with its index") {
  // X = e^{i pi / 2}: [2]_X = X + 1/X = 0.
  const HopfParams p = build_params(cplx(0.0, testing::pi / 2), cplx(0.0, -testing::pi / 2), 0.3, 1.0);
  CHECK_NOTHROW(build_rmatrix(p, 1));
  try {
    build_rmatrix(p, 3);
    FAIL("expected std::domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("n = 2") != std::string::npos);
  }
}

TEST_CASE("the R-matrix needs the generic branch") {
  CHECK_THROWS_AS(build_rmatrix(testing::degenerate_set(), 3), std::invalid_argument);
  CHECK_THROWS_AS(build_rmatrix(testing::gamma_zero_set(), 3), std::invalid_argument);
}

TEST_CASE("the Oh-Singh form equals the general R-matrix") {
  for (const OhSinghParams& o : {oh_singh(0.5, 1.2, 0.3, 0), oh_singh(0.8, 1.0, 0.0, 0), oh_singh(0.4, -0.9, 0.2, 1),
                                 oh_singh(0.3, 0.8, 0.0, 1)}) {
    const CheckReport r = check_oh_singh_rmatrix(o, 6);
    INFO(r.summary());
    CHECK(r.passed());
    CHECK(r.max_residual() < kOhSinghTolerance);
    CHECK(check_yang_baxter(build_rmatrix_oh_singh(o, 6), 6).passed());
    CHECK(check_quasitriangularity(param_map_oh_singh(o), 6).passed());
  }
}

TEST_CASE("Oh-Singh R differs once the parameters disagree") {
  const OhSinghParams o = oh_singh(0.5, 1.2, 0.3, 0);
  const SectorOperator a = build_rmatrix_oh_singh(o, 4);
  const SectorOperator b = build_rmatrix(param_map_oh_singh(oh_singh(0.5, 1.2, 0.31, 0)), 4);
  double worst = 0.0;
  for (int M = 0; M <= 4; ++M) worst = std::max(worst, relative_residual(a.block(M), b.block(M)));
  CHECK(worst > 1e-4);
}

TEST_CASE("R blocks match the stored golden files") {
  const nlohmann::json generic = read_golden("rmatrix_generic.json");
  const SectorOperator stored = sector_operator_from_json(generic);
  const HopfParams p = build_params({0.5, 0.2}, {0.1, -0.1}, {0.7, 0.3}, 1.0);
  const SectorOperator built = build_rmatrix(p, stored.max_sector());
  CHECK(stored.max_sector() == 4);
  CHECK(max_entry_diff(stored, built, 4) < 1e-12);

  const SectorOperator stored_os = sector_operator_from_json(read_golden("rmatrix_oh_singh.json"));
  CHECK(max_entry_diff(stored_os, build_rmatrix_oh_singh(oh_singh(0.5, 1.2, 0.3, 0), 4), 4) < 1e-12);
}
