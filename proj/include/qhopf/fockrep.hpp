#ifndef QHOPF_FOCKREP_HPP
#define QHOPF_FOCKREP_HPP

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qhopf/algebra.hpp"
#include "qhopf/constraints.hpp"
#include "qhopf/hopf.hpp"
#include "qhopf/report.hpp"

namespace qhopf {

using Matrix = Eigen::MatrixXcd;

/// hermitian: F(n) must be real and positive on the window, a^dag = a^+.
/// non_unitarizable: principal complex square roots, no adjointness.
enum class FockMode { hermitian, non_unitarizable };

class NonUnitarizableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Levels 0..dim-1 of the Fock-type module with C = 0:
/// a|n> = sqrt(F(n)) |n-1>, a^dag|n> = sqrt(F(n+1)) |n+1>, N|n> = n|n>.
class FockWindow {
 public:
  FockWindow(const HopfParams& p, int dim, FockMode mode = FockMode::non_unitarizable);
  FockWindow(ExpPoly g, int dim, FockMode mode = FockMode::non_unitarizable);

  int dim() const { return dim_; }
  FockMode mode() const { return mode_; }
  const ExpPoly& g() const { return g_; }
  /// F(0..dim) by partial sums of G.
  const std::vector<cplx>& f_values() const { return f_; }
  /// sqrt(F(n)), the matrix element <n-1|a|n>.
  cplx amplitude(int n) const { return amp_.at(n); }

 private:
  int dim_;
  FockMode mode_;
  ExpPoly g_;
  std::vector<cplx> f_;
  std::vector<cplx> amp_;
};

struct FockMatrices {
  Matrix a;
  Matrix a_dag;
  Matrix n_op;
};

FockMatrices fock_matrices(const FockWindow& w);

/// Dense matrix of x on the window. Entries whose intermediate levels leave
/// the window are dropped, so products agree with the algebra only on the
/// interior (see interior()).
Matrix represent(const AlgebraElement& x, const FockWindow& w);

/// The block of levels 0..dim-1-margin.
Matrix interior(const Matrix& m, int margin);

/// Number of product states with total level M.
int sector_dim(int legs, int M);
/// Product states of sector M: descending n1, then descending n2.
std::vector<std::array<int, 3>> sector_basis(int legs, int M);
int sector_index(int legs, const std::array<int, 3>& state);

/// A block map sending sector M to sector M + degree, for M = 0..max_sector().
struct SectorOperator {
  int legs = 2;
  int degree = 0;
  std::map<int, Matrix> blocks;

  int max_sector() const { return blocks.empty() ? -1 : blocks.rbegin()->first; }
  const Matrix& block(int M) const { return blocks.at(M); }
};

/// Sector blocks of a homogeneous tensor element. Throws std::invalid_argument
/// if t has no single degree or if M_max + max shift does not fit the window.
SectorOperator represent_tensor(const TensorElement& t, const FockWindow& w, int M_max);

/// x after y.
SectorOperator compose(const SectorOperator& x, const SectorOperator& y);
SectorOperator operator+(const SectorOperator& x, const SectorOperator& y);

struct InverseResult {
  SectorOperator inverse;
  /// Reciprocal condition number estimate per sector.
  std::map<int, double> rcond;
};
/// Per-sector dense inverse of a degree-0 operator.
InverseResult invert(const SectorOperator& x);

/// A 2-leg operator acting on legs (i, j), i < j, of the 3-fold tensor power,
/// with its first factor on leg i. Covers sectors 0..M_max.
SectorOperator embed(const SectorOperator& two_leg, int i, int j, int M_max);

/// ||x_M - y_M||_F / max(||x_M||_F, ||y_M||_F) for one sector.
double relative_residual(const Matrix& x, const Matrix& y);

struct RMatrixOptions {
  /// Multiplies lambda^2; 1 builds the R-matrix itself, other values give controls.
  cplx lambda_sq_scale = 1.0;
  /// Highest series term kept. Terms n > M vanish on sector M, so any cutoff >= M_max is exact.
  std::optional<int> series_cutoff;
};

/// X^{-2(N+gamma) (x) (N+gamma)} sum_n (1-X^2)^n/[n]_X! X^{-n(n-1)/2} Y^n lambda^{-2n}
///   ((XY)^{N+gamma} a)^n (x) ((XY)^{-(N+gamma)} a^dag)^n
/// on sectors 0..M_max. Generic branch only; throws std::domain_error naming n
/// when [n]_X! vanishes.
SectorOperator build_rmatrix(const HopfParams& p, int M_max, const RMatrixOptions& options = {});

/// The Oh-Singh form of the R-matrix in (q, alpha, beta, k), evaluated
/// directly with the summed form of F(n) = sum_{j<n} G(j).
SectorOperator build_rmatrix_oh_singh(const OhSinghParams& o, int M_max);

/// (Delta (x) id) R = R13 R23, (id (x) Delta) R = R13 R12 and
/// tau Delta(h) = R Delta(h) R^{-1} for h in {a, a^dag, N}, per sector.
CheckReport check_quasitriangularity(const HopfParams& p, int M_max, const RMatrixOptions& options = {});

/// R12 R13 R23 = R23 R13 R12 per 3-leg sector.
CheckReport check_yang_baxter(const HopfParams& p, int M_max, const RMatrixOptions& options = {});
CheckReport check_yang_baxter(const SectorOperator& r, int M_max);

/// Blockwise agreement of build_rmatrix_oh_singh(o) with build_rmatrix(param_map_oh_singh(o)).
CheckReport check_oh_singh_rmatrix(const OhSinghParams& o, int M_max);

/// Commutator, a^dag a = F(N), Casimir, anticommutator and adjointness on the window.
CheckReport check_fock_identities(const HopfParams& p, const FockWindow& w);

inline constexpr double kSectorTolerance = 1e-9;
inline constexpr double kYangBaxterTolerance = 1e-8;
inline constexpr double kOhSinghTolerance = 1e-10;
inline constexpr double kFockTolerance = 1e-10;

/// {params, legs, degree, sectors: [{M, rows, cols, entries: [[re, im], ...]}]}, row-major.
nlohmann::json sector_operator_to_json(const SectorOperator& op, const nlohmann::json& params);
SectorOperator sector_operator_from_json(const nlohmann::json& j);

}  // namespace qhopf

#endif  // QHOPF_FOCKREP_HPP
