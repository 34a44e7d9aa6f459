#include "adiabloch/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "adiabloch/errors.hpp"

namespace adiabloch {

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::spectral: return "spectral";
    case NormKind::trace: return "trace";
    case NormKind::frobenius: return "frobenius";
  }
  return "spectral";
}

std::optional<NormKind> parse_norm_kind(std::string_view name) {
  if (name == "spectral") return NormKind::spectral;
  if (name == "trace") return NormKind::trace;
  if (name == "frobenius") return NormKind::frobenius;
  return std::nullopt;
}

double op_norm(const CMatrix& a, NormKind kind) {
  if (a.size() == 0) return 0.0;
  if (kind == NormKind::frobenius) return a.norm();
  Eigen::VectorXd sv;
  if (a.rows() <= 16 && a.cols() <= 16) {
    sv = Eigen::JacobiSVD<CMatrix>(a).singularValues();
  } else {
    sv = Eigen::BDCSVD<CMatrix>(a).singularValues();
  }
  return kind == NormKind::spectral ? sv(0) : sv.sum();
}

CMatrix expm(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: matrix must be square");
  if (!a.allFinite()) throw std::invalid_argument("expm: non-finite input");
  return a.exp();
}

CMatrix principal_sqrt(const CMatrix& a, double branch_tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("principal_sqrt: matrix must be square");
  const Index n = a.rows();
  if (n == 0) return a;
  Eigen::ComplexSchur<CMatrix> schur(a);
  if (schur.info() != Eigen::Success) throw NumericalError("principal_sqrt: Schur decomposition failed");
  const CMatrix& t = schur.matrixT();
  const CMatrix& q = schur.matrixU();

  CMatrix r = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const cplx lam = t(i, i);
    const double scale = std::max(1.0, std::abs(lam));
    if (std::abs(lam.imag()) <= branch_tol * scale && lam.real() <= branch_tol * scale) {
      std::ostringstream msg;
      msg << "principal_sqrt: eigenvalue " << lam << " on the closed negative real axis";
      throw BranchCutError(msg.str());
    }
    r(i, i) = std::sqrt(lam);
  }
  for (Index j = 1; j < n; ++j) {
    for (Index i = j - 1; i >= 0; --i) {
      cplx s = t(i, j);
      for (Index k = i + 1; k < j; ++k) s -= r(i, k) * r(k, j);
      r(i, j) = s / (r(i, i) + r(j, j));
    }
  }
  return q * r * q.adjoint();
}

CMatrix solve_linear(const CMatrix& a, const CMatrix& y, double rcond_min) {
  if (a.rows() != a.cols() || a.rows() != y.rows())
    throw std::invalid_argument("solve_linear: dimension mismatch");
  if (a.rows() == 0) return y;
  Eigen::PartialPivLU<CMatrix> lu(a);
  // rcond() can report 1 on an exact zero pivot, so the pivot ratio is checked too.
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double rc = std::min(lu.rcond(), pivots.maxCoeff() > 0.0 ? pivots.minCoeff() / pivots.maxCoeff() : 0.0);
  if (!(rc > rcond_min)) {
    std::ostringstream msg;
    msg << "solve_linear: matrix is singular to working precision (condition estimate "
        << (rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity()) << ")";
    throw SingularMatrixError(msg.str(), rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity());
  }
  return lu.solve(y);
}

double triangular_separation(const CMatrix& ta, const CMatrix& tb) {
  double sep = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < ta.rows(); ++i)
    for (Index j = 0; j < tb.rows(); ++j) sep = std::min(sep, std::abs(ta(i, i) - tb(j, j)));
  return sep;
}

CMatrix solve_sylvester_triangular(const CMatrix& ta, const CMatrix& tb, const CMatrix& y) {
  const Index m = ta.rows();
  const Index n = tb.rows();
  CMatrix x(m, n);
  // Column j: (TA - tb_jj) x_j = y_j + sum_{k<j} tb_kj x_k, back substitution.
  for (Index j = 0; j < n; ++j) {
    CVector rhs = y.col(j);
    for (Index k = 0; k < j; ++k) rhs += tb(k, j) * x.col(k);
    const cplx shift = tb(j, j);
    for (Index i = m - 1; i >= 0; --i) {
      cplx s = rhs(i);
      for (Index k = i + 1; k < m; ++k) s -= ta(i, k) * x(k, j);
      x(i, j) = s / (ta(i, i) - shift);
    }
  }
  return x;
}

CMatrix solve_sylvester(const CMatrix& a, const CMatrix& b, const CMatrix& y, double sep_tol) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || y.rows() != a.rows() || y.cols() != b.rows())
    throw std::invalid_argument("solve_sylvester: dimension mismatch");
  if (y.size() == 0) return y;
  Eigen::ComplexSchur<CMatrix> sa(a), sb(b);
  const CMatrix& ta = sa.matrixT();
  const CMatrix& tb = sb.matrixT();
  const double sep = triangular_separation(ta, tb);
  const double scale = std::max({1.0, ta.cwiseAbs().maxCoeff(), tb.cwiseAbs().maxCoeff()});
  if (!(sep > sep_tol * scale)) {
    std::ostringstream msg;
    msg << "solve_sylvester: spectra overlap (separation " << sep << ")";
    throw SpectraOverlapError(msg.str(), sep);
  }
  const CMatrix f = sa.matrixU().adjoint() * y * sb.matrixU();
  return sa.matrixU() * solve_sylvester_triangular(ta, tb, f) * sb.matrixU().adjoint();
}

}  // namespace adiabloch
