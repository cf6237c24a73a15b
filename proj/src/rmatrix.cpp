#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "qhopf/fockrep.hpp"

namespace qhopf {

namespace {

std::string sector_name(const std::string& relation, int M) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", M);
  return relation + ":sector=" + buf;
}

/// (1-X^2)^n / [n]_X! X^{-n(n-1)/2} Y^n lambda^{-2n} for n = 0..n_max.
std::vector<cplx> series_coefficients(const HopfParams& p, int n_max, cplx lambda_sq) {
  const cplx kappa = p.kappa;
  const cplx x2 = std::exp(kappa);
  const cplx denom = std::sinh(kappa / 2.0);
  std::vector<cplx> c{1.0};
  for (int n = 1; n <= n_max; ++n) {
    const cplx qn = std::sinh(static_cast<double>(n) * kappa / 2.0) / denom;
    if (std::abs(qn) < 1e-13) throw std::domain_error("[n]_X! vanishes at n = " + std::to_string(n));
    c.push_back(c.back() * (1.0 - x2) / qn * std::exp(-kappa * static_cast<double>(n - 1) / 2.0) * p.y / lambda_sq);
  }
  return c;
}

/// Amplitude of (f(N) a)^n on |l>, where f(N) a|m> = f(m-1) sqrt(F(m)) |m-1>.
template <class F>
cplx lowering_power(int l, int n, const FockWindow& w, F weight) {
  cplx v = 1.0;
  for (int j = 0; j < n; ++j) {
    const int m = l - j;
    if (m <= 0) return 0.0;  // sqrt(F(0)) = 0
    v *= weight(m - 1) * w.amplitude(m);
  }
  return v;
}

/// Amplitude of (g(N) a^dag)^n on |l>, where g(N) a^dag|m> = g(m+1) sqrt(F(m+1)) |m+1>.
template <class F>
cplx raising_power(int l, int n, const FockWindow& w, F weight) {
  cplx v = 1.0;
  for (int j = 1; j <= n; ++j) v *= weight(l + j) * w.amplitude(l + j);
  return v;
}

/// Shared sector assembly: R|n1,n2> = sum_n pre(target) c_n low_n(n1) raise_n(n2) |n1-n, n2+n>.
template <class Pre, class Low, class Raise>
SectorOperator assemble(int M_max, int cutoff, const std::vector<cplx>& coeff, Pre prefactor, Low low, Raise raise) {
  SectorOperator op;
  op.legs = 2;
  op.degree = 0;
  for (int M = 0; M <= M_max; ++M) {
    Matrix block = Matrix::Zero(M + 1, M + 1);
    for (int n1 = M; n1 >= 0; --n1) {
      const int n2 = M - n1;
      for (int n = 0; n <= cutoff; ++n) {
        const cplx lowered = low(n1, n);
        if (lowered == 0.0) continue;
        const cplx amp = lowered * raise(n2, n);
        const int t1 = n1 - n;
        const int t2 = n2 + n;
        block(t2, n2) += prefactor(t1, t2) * coeff[n] * amp;
      }
    }
    op.blocks.emplace(M, std::move(block));
  }
  return op;
}

TensorElement scaled(TensorElement t, cplx s) {
  t *= s;
  return t;
}

}  // namespace

SectorOperator build_rmatrix(const HopfParams& p, int M_max, const RMatrixOptions& options) {
  if (p.branch != Branch::generic || !p.lambda_sq) throw std::invalid_argument("the R-matrix needs the generic branch");
  if (M_max < 0) throw std::invalid_argument("M_max must be nonnegative");
  const int cutoff = options.series_cutoff.value_or(M_max);
  if (cutoff < 0) throw std::invalid_argument("series cutoff must be nonnegative");
  const auto coeff = series_coefficients(p, cutoff, *p.lambda_sq * options.lambda_sq_scale);
  const FockWindow w(p, M_max + 2);
  const cplx kappa = p.kappa;
  const cplx kappa1 = p.kappa1;
  const cplx gamma = p.gamma;

  // X^{-2 u v} = e^{-kappa u v}; (XY)^{N+gamma} = e^{kappa1 (N+gamma)}.
  auto prefactor = [&](int t1, int t2) { return std::exp(-kappa * (double(t1) + gamma) * (double(t2) + gamma)); };
  auto up = [&](int m) { return std::exp(kappa1 * (static_cast<double>(m) + gamma)); };
  auto down = [&](int m) { return std::exp(-kappa1 * (static_cast<double>(m) + gamma)); };
  return assemble(
      M_max, cutoff, coeff, prefactor, [&](int l, int n) { return lowering_power(l, n, w, up); },
      [&](int l, int n) { return raising_power(l, n, w, down); });
}

SectorOperator build_rmatrix_oh_singh(const OhSinghParams& o, int M_max) {
  if (o.alpha == 0.0 || o.eps == 0.0) throw std::invalid_argument("alpha and eps must be nonzero");
  const double e = o.eps;
  const double al = o.alpha;
  const double b = o.beta;
  const double theta = (2.0 * o.k + 1.0) * std::numbers::pi / (2.0 * e);  // (2k+1) pi / (2 ln q)

  // F(n) = sum_{j<n} cosh(eps (alpha j + beta + 1/2)) / cosh(eps/2), summed in closed form.
  const double qa = e * al / 2.0;  // ln q^{alpha/2}
  std::vector<cplx> amp(M_max + 3, 0.0);
  for (int n = 1; n <= M_max + 2; ++n) {
    const double f = std::sinh(n * qa) * std::cosh(e * (b + 0.5) + (n - 1) * qa) / (std::sinh(qa) * std::cosh(e / 2.0));
    amp[n] = std::sqrt(cplx(f, 0.0));
  }

  const cplx s(b + 0.5, theta);
  const cplx scalar = std::exp(-e / al * cplx((b + 0.5) * (b + 0.5) - theta * theta, (2.0 * b + 1.0) * theta));
  auto prefactor = [&](int t1, int t2) {
    return scalar * std::exp(-e * al * static_cast<double>(t1) * t2) * std::exp(-e * s * static_cast<double>(t1 + t2));
  };

  const cplx base = cplx(0.0, o.k % 2 == 0 ? 1.0 : -1.0) * (std::exp(e / 2.0) + std::exp(-e / 2.0));
  std::vector<cplx> coeff{1.0};
  cplx factorial = 1.0;
  for (int n = 1; n <= M_max; ++n) {
    const double qn = std::sinh(n * qa) / std::sinh(qa);
    if (std::abs(qn) < 1e-13) throw std::domain_error("[n]! vanishes at n = " + std::to_string(n));
    factorial *= qn;
    coeff.push_back(std::pow(base, n) / factorial * std::exp(-e * al * n * (n - 3) / 4.0));
  }

  auto low = [&](int l, int n) {
    cplx v = 1.0;
    for (int j = 0; j < n; ++j) {
      const int m = l - j;
      if (m <= 0) return cplx(0.0);
      v *= std::exp(qa * (m - 1)) * amp[m];
    }
    return v;
  };
  auto raise = [&](int l, int n) {
    cplx v = 1.0;
    for (int j = 1; j <= n; ++j) v *= std::exp(-qa * (l + j)) * amp[l + j];
    return v;
  };
  return assemble(M_max, M_max, coeff, prefactor, low, raise);
}

// ---------------------------------------------------------------------------
// Quasitriangularity

CheckReport check_quasitriangularity(const HopfParams& p, int M_max, const RMatrixOptions& options) {
  CheckReport report;
  report.params = p.to_json();
  report.params["max_sector"] = M_max;
  if (options.lambda_sq_scale != 1.0)
    report.params["lambda_sq_scale"] = {options.lambda_sq_scale.real(), options.lambda_sq_scale.imag()};

  const SectorOperator r = build_rmatrix(p, M_max, options);
  const HopfStructure hopf(p);
  const Algebra& alg = hopf.algebra();
  const FockWindow w(p, 2 * M_max + 3);
  const auto coeff = series_coefficients(p, M_max, *p.lambda_sq * options.lambda_sq_scale);
  const cplx kappa = p.kappa;
  const cplx gamma = p.gamma;

  // A = (XY)^{N+gamma} a, B = (XY)^{-(N+gamma)} a^dag as algebra elements.
  const AlgebraElement A =
      AlgebraElement::monomial(0, ExpPoly::monomial(1, 0, p.kappa1, 0, std::exp(p.kappa1 * gamma)), 1);
  const AlgebraElement B = alg.multiply(
      AlgebraElement::function(ExpPoly::monomial(1, 0, -p.kappa1, 0, std::exp(-p.kappa1 * gamma))),
      AlgebraElement::creation());

  // (Delta (x) id) R and (id (x) Delta) R, summed term by term on 3-leg sectors.
  TensorElement left(3);
  TensorElement right(3);
  {
    AlgebraElement an = AlgebraElement::identity();
    AlgebraElement bn = AlgebraElement::identity();
    for (int n = 0; n <= M_max; ++n) {
      if (n > 0) {
        an = alg.multiply(an, A);
        bn = alg.multiply(bn, B);
      }
      left += scaled(TensorElement::tensor(hopf.coproduct(an), bn), coeff[n]);
      right += scaled(TensorElement::tensor(an, hopf.coproduct(bn)), coeff[n]);
    }
  }
  SectorOperator lhs_left = represent_tensor(left, w, M_max);
  SectorOperator lhs_right = represent_tensor(right, w, M_max);
  for (auto& [M, b] : lhs_left.blocks) {
    const auto basis = sector_basis(3, M);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto& t = basis[i];
      b.row(static_cast<Eigen::Index>(i)) *= std::exp(-kappa * (double(t[0] + t[1]) + 2.0 * gamma) * (double(t[2]) + gamma));
    }
  }
  for (auto& [M, b] : lhs_right.blocks) {
    const auto basis = sector_basis(3, M);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto& t = basis[i];
      b.row(static_cast<Eigen::Index>(i)) *= std::exp(-kappa * (double(t[0]) + gamma) * (double(t[1] + t[2]) + 2.0 * gamma));
    }
  }

  const SectorOperator r12 = embed(r, 0, 1, M_max);
  const SectorOperator r13 = embed(r, 0, 2, M_max);
  const SectorOperator r23 = embed(r, 1, 2, M_max);
  const SectorOperator rhs_left = compose(r13, r23);
  const SectorOperator rhs_right = compose(r13, r12);
  for (int M = 0; M <= M_max; ++M) {
    report.add(sector_name("coproduct_left", M), relative_residual(lhs_left.block(M), rhs_left.block(M)),
               kSectorTolerance);
    report.add(sector_name("coproduct_right", M), relative_residual(lhs_right.block(M), rhs_right.block(M)),
               kSectorTolerance);
  }

  // tau Delta(h) = R Delta(h) R^{-1}, compared as tau Delta(h) R = R Delta(h):
  // forming R^{-1} costs up to 1/rcond in accuracy on the larger sectors.
  const InverseResult inv = invert(r);
  for (const auto& [M, rc] : inv.rcond) {
    if (!(rc > 1e-14))
      report.add_failure(sector_name("r_invertible", M), "reciprocal condition number " + format_number(rc));
  }
  const std::pair<const char*, AlgebraElement> generators[] = {
      {"a", AlgebraElement::annihilation()},
      {"a_dag", AlgebraElement::creation()},
      {"N", AlgebraElement::number()},
  };
  for (const auto& [name, h] : generators) {
    const TensorElement dh = hopf.coproduct(h);
    const SectorOperator d = represent_tensor(dh, w, M_max);
    const SectorOperator dt = represent_tensor(dh.twisted(), w, M_max);
    const SectorOperator lhs = compose(dt, r);
    const SectorOperator rhs = compose(r, d);
    for (int M = 0; M <= M_max; ++M) {
      const auto it = rhs.blocks.find(M);
      if (it == rhs.blocks.end()) continue;  // target sector beyond M_max
      const double res = relative_residual(lhs.block(M), it->second);
      report.add(sector_name(std::string("intertwiner_") + name, M), res, kSectorTolerance,
                 res > kSectorTolerance ? std::optional("rcond(R) = " + format_number(inv.rcond.at(M)))
                                        : std::nullopt);
    }
  }
  return report;
}

CheckReport check_yang_baxter(const HopfParams& p, int M_max, const RMatrixOptions& options) {
  CheckReport report = check_yang_baxter(build_rmatrix(p, M_max, options), M_max);
  report.params = p.to_json();
  report.params["max_sector"] = M_max;
  return report;
}

CheckReport check_yang_baxter(const SectorOperator& r, int M_max) {
  CheckReport report;
  const SectorOperator r12 = embed(r, 0, 1, M_max);
  const SectorOperator r13 = embed(r, 0, 2, M_max);
  const SectorOperator r23 = embed(r, 1, 2, M_max);
  const SectorOperator lhs = compose(r12, compose(r13, r23));
  const SectorOperator rhs = compose(r23, compose(r13, r12));
  for (int M = 0; M <= M_max; ++M)
    report.add(sector_name("yang_baxter", M), relative_residual(lhs.block(M), rhs.block(M)), kYangBaxterTolerance);
  return report;
}

CheckReport check_oh_singh_rmatrix(const OhSinghParams& o, int M_max) {
  CheckReport report;
  report.params = o.to_json();
  report.params["max_sector"] = M_max;
  const SectorOperator direct = build_rmatrix_oh_singh(o, M_max);
  const SectorOperator general = build_rmatrix(param_map_oh_singh(o), M_max);
  for (int M = 0; M <= M_max; ++M)
    report.add(sector_name("oh_singh_vs_general", M), relative_residual(direct.block(M), general.block(M)),
               kOhSinghTolerance);
  return report;
}

}  // namespace qhopf
