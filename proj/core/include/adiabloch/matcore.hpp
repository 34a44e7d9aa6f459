#pragma once

#include <complex>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace adiabloch {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class NormKind { spectral, trace, frobenius };

std::string_view to_string(NormKind kind);
std::optional<NormKind> parse_norm_kind(std::string_view name);

double op_norm(const CMatrix& a, NormKind kind = NormKind::spectral);

// Scaling and squaring with Pade approximants up to degree 13.
CMatrix expm(const CMatrix& a);

// Schur method. Throws BranchCutError when an eigenvalue sits within
// branch_tol * max(1, |lambda|) of the closed negative real axis.
CMatrix principal_sqrt(const CMatrix& a, double branch_tol = 1e-12);

// Solves A X = Y. Throws SingularMatrixError when the reciprocal condition
// estimate drops below rcond_min.
CMatrix solve_linear(const CMatrix& a, const CMatrix& y, double rcond_min = 1e-14);

// Solves A X - X B = Y. Throws SpectraOverlapError when
// min |a_i - b_j| <= sep_tol * max(1, ||A||, ||B||).
CMatrix solve_sylvester(const CMatrix& a, const CMatrix& b, const CMatrix& y,
                        double sep_tol = 1e-13);

// Same equation with A and B already upper triangular.
CMatrix solve_sylvester_triangular(const CMatrix& ta, const CMatrix& tb, const CMatrix& y);

// Smallest |a_i - b_j| over the diagonals of two triangular matrices.
double triangular_separation(const CMatrix& ta, const CMatrix& tb);

inline CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

// Commutator A B - B A.
inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

}  // namespace adiabloch
