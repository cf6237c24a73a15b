#include "qhopf/fockrep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qhopf {

namespace {

/// Principal square root with roundoff-level imaginary parts dropped first,
/// so equal real F values always get the same root.
cplx clean_sqrt(cplx f) {
  if (std::abs(f.imag()) <= 1e-14 * std::abs(f)) f = cplx(f.real(), 0.0);
  return std::sqrt(f);
}

}  // namespace

// ---------------------------------------------------------------------------
// Window

FockWindow::FockWindow(const HopfParams& p, int dim, FockMode mode) : FockWindow(g_function(p), dim, mode) {}

FockWindow::FockWindow(ExpPoly g, int dim, FockMode mode) : dim_(dim), mode_(mode), g_(std::move(g)) {
  if (dim < 2) throw std::invalid_argument("Fock window needs dim >= 2");
  f_.assign(dim + 1, 0.0);
  for (int n = 1; n <= dim; ++n) f_[n] = f_[n - 1] + evaluate(g_, static_cast<double>(n - 1));

  amp_.assign(dim + 1, 0.0);
  for (int n = 1; n <= dim; ++n) {
    if (mode == FockMode::hermitian) {
      const cplx f = f_[n];
      if (std::abs(f.imag()) > 1e-12 * std::abs(f) || !(f.real() > 0.0))
        throw NonUnitarizableError("non-unitarizable window: F(" + std::to_string(n) + ") = " + format_complex(f));
      amp_[n] = std::sqrt(f.real());
    } else {
      amp_[n] = clean_sqrt(f_[n]);
    }
  }
}

FockMatrices fock_matrices(const FockWindow& w) {
  const int d = w.dim();
  FockMatrices m{Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
  for (int n = 0; n < d; ++n) {
    m.n_op(n, n) = static_cast<double>(n);
    if (n >= 1) m.a(n - 1, n) = w.amplitude(n);
    if (n + 1 < d) m.a_dag(n + 1, n) = w.amplitude(n + 1);
  }
  return m;
}

Matrix represent(const AlgebraElement& x, const FockWindow& w) {
  const int d = w.dim();
  Matrix out = Matrix::Zero(d, d);
  for (const auto& [key, f] : x.terms()) {
    for (int n = key.s; n < d; ++n) {
      const int m = n - key.s;
      const int target = m + key.r;
      if (target >= d) continue;
      cplx v = evaluate(f, static_cast<double>(m));
      for (int j = 0; j < key.s; ++j) v *= w.amplitude(n - j);
      for (int j = 1; j <= key.r; ++j) v *= w.amplitude(m + j);
      out(target, n) += v;
    }
  }
  return out;
}

Matrix interior(const Matrix& m, int margin) {
  const int k = static_cast<int>(m.rows()) - margin;
  if (k <= 0) throw std::invalid_argument("margin exceeds dim");
  return m.topLeftCorner(k, k);
}

// ---------------------------------------------------------------------------
// Sectors

int sector_dim(int legs, int M) {
  if (M < 0) return 0;
  return legs == 2 ? M + 1 : (M + 1) * (M + 2) / 2;
}

std::vector<std::array<int, 3>> sector_basis(int legs, int M) {
  std::vector<std::array<int, 3>> out;
  if (legs == 2) {
    for (int n1 = M; n1 >= 0; --n1) out.push_back({n1, M - n1, 0});
  } else {
    for (int n1 = M; n1 >= 0; --n1)
      for (int n2 = M - n1; n2 >= 0; --n2) out.push_back({n1, n2, M - n1 - n2});
  }
  return out;
}

int sector_index(int legs, const std::array<int, 3>& s) {
  if (legs == 2) return s[1];
  const int rest = s[1] + s[2];  // M - n1
  return rest * (rest + 1) / 2 + s[2];
}

SectorOperator represent_tensor(const TensorElement& t, const FockWindow& w, int M_max) {
  const auto degree = t.degree();
  if (!degree) throw std::invalid_argument("tensor element is not homogeneous in the total level");
  if (M_max + t.max_shift() >= w.dim()) throw std::invalid_argument("margin exceeds dim");
  const int legs = t.legs();

  SectorOperator op;
  op.legs = legs;
  op.degree = *degree;
  for (int M = 0; M <= M_max; ++M) {
    Matrix block = Matrix::Zero(sector_dim(legs, M + *degree), sector_dim(legs, M));
    const auto basis = sector_basis(legs, M);
    for (std::size_t col = 0; col < basis.size(); ++col) {
      const auto& n = basis[col];
      for (const auto& [key, f] : t.terms()) {
        std::array<int, 3> target{};
        std::array<cplx, 3> point{};
        cplx amp = 1.0;
        bool alive = true;
        for (int l = 0; l < legs && alive; ++l) {
          const int m = n[l] - key[l].s;
          if (m < 0) {
            alive = false;
            break;
          }
          for (int j = 0; j < key[l].s; ++j) amp *= w.amplitude(n[l] - j);
          for (int j = 1; j <= key[l].r; ++j) amp *= w.amplitude(m + j);
          point[l] = static_cast<double>(m);
          target[l] = m + key[l].r;
        }
        if (!alive || amp == 0.0) continue;
        const cplx v = amp * evaluate(f, std::span<const cplx>(point.data(), legs));
        block(sector_index(legs, target), static_cast<Eigen::Index>(col)) += v;
      }
    }
    op.blocks.emplace(M, std::move(block));
  }
  return op;
}

SectorOperator compose(const SectorOperator& x, const SectorOperator& y) {
  if (x.legs != y.legs) throw std::invalid_argument("compose: leg count mismatch");
  SectorOperator out;
  out.legs = x.legs;
  out.degree = x.degree + y.degree;
  for (const auto& [M, by] : y.blocks) {
    const auto it = x.blocks.find(M + y.degree);
    if (it == x.blocks.end()) continue;
    out.blocks.emplace(M, it->second * by);
  }
  return out;
}

SectorOperator operator+(const SectorOperator& x, const SectorOperator& y) {
  if (x.legs != y.legs || x.degree != y.degree) throw std::invalid_argument("sum: shape mismatch");
  SectorOperator out;
  out.legs = x.legs;
  out.degree = x.degree;
  for (const auto& [M, bx] : x.blocks) {
    const auto it = y.blocks.find(M);
    if (it != y.blocks.end()) out.blocks.emplace(M, bx + it->second);
  }
  return out;
}

InverseResult invert(const SectorOperator& x) {
  if (x.degree != 0) throw std::invalid_argument("only degree-0 operators are invertible per sector");
  InverseResult r;
  r.inverse.legs = x.legs;
  r.inverse.degree = 0;
  for (const auto& [M, b] : x.blocks) {
    Eigen::PartialPivLU<Matrix> lu(b);
    r.rcond[M] = lu.rcond();
    r.inverse.blocks.emplace(M, lu.inverse());
  }
  return r;
}

SectorOperator embed(const SectorOperator& two_leg, int i, int j, int M_max) {
  if (two_leg.legs != 2 || i < 0 || j > 2 || i >= j) throw std::invalid_argument("embed: bad legs");
  if (two_leg.max_sector() < M_max) throw std::invalid_argument("embed: two-leg operator does not cover M_max");
  const int d = two_leg.degree;
  SectorOperator out;
  out.legs = 3;
  out.degree = d;
  for (int M = 0; M <= M_max; ++M) {
    Matrix block = Matrix::Zero(sector_dim(3, M + d), sector_dim(3, M));
    const auto basis = sector_basis(3, M);
    for (std::size_t col = 0; col < basis.size(); ++col) {
      const auto& n = basis[col];
      const int mp = n[i] + n[j];
      if (mp + d < 0) continue;
      const Matrix& b = two_leg.block(mp);
      const int src = n[j];
      for (Eigen::Index row2 = 0; row2 < b.rows(); ++row2) {
        const cplx v = b(row2, src);
        if (v == 0.0) continue;
        std::array<int, 3> target = n;
        target[j] = static_cast<int>(row2);
        target[i] = mp + d - target[j];
        block(sector_index(3, target), static_cast<Eigen::Index>(col)) += v;
      }
    }
    out.blocks.emplace(M, std::move(block));
  }
  return out;
}

double relative_residual(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw std::invalid_argument("relative_residual: shape mismatch");
  if (x.size() == 0) return 0.0;
  const double s = std::max(x.norm(), y.norm());
  return s == 0.0 ? 0.0 : (x - y).norm() / s;
}

// ---------------------------------------------------------------------------
// Window identities

CheckReport check_fock_identities(const HopfParams& p, const FockWindow& w) {
  CheckReport report;
  report.params = p.to_json();
  report.params["dim"] = w.dim();
  const int d = w.dim();
  const FockMatrices m = fock_matrices(w);
  const ExpPoly f_closed = structure_function(p);

  Matrix g_diag = Matrix::Zero(d, d);
  Matrix f_diag = Matrix::Zero(d, d);
  Matrix f_sum = Matrix::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    g_diag(n, n) = evaluate(w.g(), static_cast<double>(n));
    f_diag(n, n) = evaluate(f_closed, static_cast<double>(n));
    f_sum(n, n) = evaluate(f_closed, static_cast<double>(n + 1)) + evaluate(f_closed, static_cast<double>(n));
  }

  const Matrix comm = m.a * m.a_dag - m.a_dag * m.a;
  report.add("commutator", relative_residual(interior(comm, 1), interior(g_diag, 1)), kFockTolerance);
  report.add("number_operator", relative_residual(represent(AlgebraElement::number(), w), m.n_op), kFockTolerance);
  report.add("a_dag_a", relative_residual(m.a_dag * m.a, f_diag), kFockTolerance);

  // C = F(N) - a^dag a; compared against the scale of F on the window.
  const Matrix c = represent(casimir(p), w);
  const double f_scale = std::max(f_diag.norm(), 1e-300);
  report.add("casimir", c.norm() / f_scale, kFockTolerance);

  const Matrix anti = m.a * m.a_dag + m.a_dag * m.a;
  report.add("anticommutator", relative_residual(interior(anti, 1), interior(f_sum, 1)), kFockTolerance);

  if (w.mode() == FockMode::hermitian) {
    report.add("adjointness", relative_residual(m.a_dag, m.a.adjoint()), kFockTolerance);
    double worst = 0.0;
    for (int n = 0; n < d; ++n) worst = std::max(worst, std::abs(g_diag(n, n).imag()));
    report.add("g_real", worst / std::max(g_diag.norm(), 1e-300), kFockTolerance);
  } else {
    report.add_skipped("adjointness", "non-unitarizable mode");
    report.add_skipped("g_real", "non-unitarizable mode");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Block dump

nlohmann::json sector_operator_to_json(const SectorOperator& op, const nlohmann::json& params) {
  nlohmann::json sectors = nlohmann::json::array();
  for (const auto& [M, b] : op.blocks) {
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c) entries.push_back({b(r, c).real(), b(r, c).imag()});
    sectors.push_back({{"M", M}, {"rows", b.rows()}, {"cols", b.cols()}, {"entries", std::move(entries)}});
  }
  return {{"params", params}, {"legs", op.legs}, {"degree", op.degree}, {"sectors", std::move(sectors)}};
}

SectorOperator sector_operator_from_json(const nlohmann::json& j) {
  SectorOperator op;
  op.legs = j.at("legs").get<int>();
  op.degree = j.at("degree").get<int>();
  for (const auto& s : j.at("sectors")) {
    const auto rows = s.at("rows").get<Eigen::Index>();
    const auto cols = s.at("cols").get<Eigen::Index>();
    const auto& entries = s.at("entries");
    if (static_cast<Eigen::Index>(entries.size()) != rows * cols) throw std::invalid_argument("block size mismatch");
    Matrix b(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) {
        const auto& e = entries[static_cast<std::size_t>(r * cols + c)];
        b(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
      }
    op.blocks.emplace(s.at("M").get<int>(), std::move(b));
  }
  return op;
}

}  // namespace qhopf
