#pragma once

#include <string>
#include <vector>

#include "adiabloch/matcore.hpp"
#include "adiabloch/spectral.hpp"

namespace adiabloch {

enum class Orientation { right, left };

// right: sum_{n < n_l} S^n A N^n; left: sum_{n < n_l} N^n A S^n.
CMatrix bracket(const SpectralDecomposition& dec, std::size_t l, const CMatrix& a,
                Orientation orientation = Orientation::right);

enum class SolveMethod { fixed_point, newton };

std::string_view to_string(SolveMethod method);

struct SolveOptions {
  SolveMethod method = SolveMethod::newton;
  double tol = 1e-12;  // residual tolerance, scaled by max(1, ||C|| ||P||)
  int max_iter = 100;  // Newton; fixed point uses 50x this
  double relaxation = 1.0;  // fixed point only; values != 1 are uncertified
  bool enforce_ball = true;
  NormKind norm = NormKind::spectral;
};

struct KantorovichReport {
  std::size_t block = 0;
  NormKind norm = NormKind::spectral;
  double mu = 0.0;
  double beta = 0.0;
  double nu = 0.0;
  double lipschitz = 0.0;
  double h = 0.0;
  double theta = 0.0;
  double xi = 0.0;
  double gamma_min = 0.0;
  bool solvable = false;   // h <= 1/2
  bool quadratic = false;  // h < 1/2
};

KantorovichReport kantorovich_report(const SpectralDecomposition& dec, const CMatrix& c, double gamma,
                                     std::size_t l, NormKind norm = NormKind::spectral);

struct SolveDiagnostics {
  SolveMethod method = SolveMethod::newton;
  int iterations = 0;
  double residual = 0.0;
  // Inside the Kantorovich existence regime and every iterate stayed in the
  // uniqueness ball. For the Omega equations this rests on the U-equation
  // ball transported through U = P - S Omega / gamma.
  bool certified = false;
  bool kantorovich_warning = false;  // h > 1/2
  std::vector<double> residual_history;
};

struct BlockSolve {
  CMatrix value;
  SolveDiagnostics diagnostics;
};

BlockSolve solve_omega(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                       const SolveOptions& opts = {});
BlockSolve solve_omega_conjugate(const SpectralDecomposition& dec, const CMatrix& c, double gamma,
                                 std::size_t l, const SolveOptions& opts = {});
BlockSolve solve_U(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                   const SolveOptions& opts = {});
BlockSolve solve_Ut(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                    const SolveOptions& opts = {});

// Residual matrices of the four quadratic equations.
CMatrix omega_equation(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                       const CMatrix& omega);
CMatrix omega_conjugate_equation(const SpectralDecomposition& dec, const CMatrix& c, double gamma,
                                 std::size_t l, const CMatrix& omega_t);
CMatrix u_equation(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                   const CMatrix& u);
CMatrix ut_equation(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                    const CMatrix& ut);

CMatrix omega_to_U(const SpectralDecomposition& dec, std::size_t l, const CMatrix& omega, double gamma);
CMatrix U_to_omega(const SpectralDecomposition& dec, const CMatrix& c, std::size_t l, const CMatrix& u,
                   double gamma);
CMatrix omega_conjugate_to_Ut(const SpectralDecomposition& dec, std::size_t l, const CMatrix& omega_t,
                              double gamma);
CMatrix Ut_to_omega_conjugate(const SpectralDecomposition& dec, const CMatrix& c, std::size_t l,
                              const CMatrix& ut, double gamma);

struct BlochResiduals {
  double omega = 0.0;
  double omega_conjugate = 0.0;
  double u = 0.0;
  double ut = 0.0;
  double omega_constraint = 0.0;            // ||Omega (1 - P)||
  double omega_conjugate_constraint = 0.0;  // ||(1 - P) Omega~||
  double u_consistency = 0.0;               // ||U - (P - S Omega / gamma)||
  double ut_consistency = 0.0;

  double max() const;
};

struct BlochSolution {
  std::size_t block = 0;
  CMatrix Omega;
  CMatrix OmegaT;
  CMatrix U;
  CMatrix Ut;
  BlochResiduals residuals;
  SolveMethod method = SolveMethod::newton;
  int iterations = 0;
  bool certified = false;
  KantorovichReport kantorovich;
};

// Solves both Omega equations, derives U and U~, and cross-checks against
// the direct U solves.
BlochSolution solve_block(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                          const SolveOptions& opts = {});

// All blocks, concurrently.
std::vector<BlochSolution> solve_all(const SpectralDecomposition& dec, const CMatrix& c, double gamma,
                                     const SolveOptions& opts = {});

enum class SeriesKind { D_series, K_series, Omega_series };

struct SeriesCoefficients {
  std::size_t block = 0;
  SeriesKind kind = SeriesKind::D_series;
  int order = 0;
  std::vector<CMatrix> coeffs;  // coefficient of gamma^{-j}

  // sum_{j <= upto} coeffs[j] / gamma^j; upto < 0 means all.
  CMatrix partial_sum(double gamma, int upto = -1) const;
};

SeriesCoefficients perturbative_omega(const SpectralDecomposition& dec, const CMatrix& c, std::size_t l,
                                      int order);
SeriesCoefficients perturbative_omega_conjugate(const SpectralDecomposition& dec, const CMatrix& c,
                                                std::size_t l, int order);
SeriesCoefficients perturbative_D(const SpectralDecomposition& dec, const CMatrix& c, std::size_t l,
                                  int order);

enum class KSeriesMode { closed_form, power_series };

// closed_form supports order <= 3; power_series composes the Omega and
// Omega~ series through (U~U)^{1/2}(gamma B_l + D_l)(U~U)^{-1/2} - gamma B_l.
SeriesCoefficients perturbative_K(const SpectralDecomposition& dec, const CMatrix& c, std::size_t l,
                                  int order, KSeriesMode mode = KSeriesMode::closed_form);

struct GSeriesResult {
  CMatrix G;
  int terms = 0;
  double last_increment = 0.0;
  double pgp_defect = 0.0;  // ||P G P||
  bool converged = false;
  double threshold = 0.0;   // max{1, [||S||(||C|| + ||D|| + ||N||)]^{n_l}}
};

// Partial sums of sum_j (-1)^j gamma^{-j} Kmap^j(C - D) with
// Kmap(A) = C S A - S A D - gamma S A N. Throws PreconditionError when gamma
// does not exceed the convergence threshold.
GSeriesResult sum_G_series(const SpectralDecomposition& dec, const CMatrix& c, const CMatrix& d_l,
                           double gamma, std::size_t l, int n_max = 500, double tol = 1e-15);

}  // namespace adiabloch
