#include <random>

#include <gtest/gtest.h>

#include "adiabloch/bloch.hpp"
#include "adiabloch/errors.hpp"
#include "adiabloch/models.hpp"
#include "support.hpp"

using namespace adiabloch;

namespace {

struct System {
  CMatrix b, c;
  SpectralDecomposition dec;
};

System lambda_system() {
  const LindbladModel m = lambda_model({}, 10.0);
  System s{build_superop(m, Part::strong).matrix, build_superop(m, Part::weak).matrix, {}};
  s.dec = decompose(s.b);
  return s;
}

System qubit_system() {
  const LindbladModel m = qubit_model(10.0);
  System s{build_superop(m, Part::strong).matrix, build_superop(m, Part::weak).matrix, {}};
  s.dec = decompose(s.b);
  return s;
}

std::size_t nilpotent_block(const SpectralDecomposition& dec) {
  for (std::size_t l = 0; l < dec.blocks.size(); ++l)
    if (dec.blocks[l].index > 1) return l;
  throw std::runtime_error("no nilpotent block");
}

}  // namespace

TEST(Bracket, Cases) {
  const System lam = lambda_system();
  std::mt19937_64 rng(31);
  const CMatrix a = random_complex(rng, 25, 25);
  EXPECT_LT(op_norm(bracket(lam.dec, 0, a) - a), 1e-15);
  EXPECT_EQ(op_norm(bracket(lam.dec, 0, CMatrix::Zero(25, 25))), 0.0);

  const System q = qubit_system();
  const std::size_t l = nilpotent_block(q.dec);
  const CMatrix x = random_complex(rng, 4, 4);
  const auto& blk = q.dec.blocks[l];
  EXPECT_LT(op_norm(bracket(q.dec, l, x) - (x + blk.reduced_resolvent * x * blk.nilpotent)), 1e-14);
  EXPECT_LT(op_norm(bracket(q.dec, l, x, Orientation::left) - (x + blk.nilpotent * x * blk.reduced_resolvent)),
            1e-14);
}

TEST(Solve, ZeroCoupling) {
  const System lam = lambda_system();
  const CMatrix zero = CMatrix::Zero(25, 25);
  for (std::size_t l = 0; l < lam.dec.blocks.size(); ++l) {
    EXPECT_EQ(op_norm(solve_omega(lam.dec, zero, 10.0, l).value), 0.0);
    EXPECT_EQ(op_norm(solve_omega_conjugate(lam.dec, zero, 10.0, l).value), 0.0);
    EXPECT_LT(op_norm(solve_U(lam.dec, zero, 10.0, l).value - lam.dec.blocks[l].projection), 1e-15);
  }
}

TEST(Solve, LambdaResidualsAndConstraints) {
  const System lam = lambda_system();
  for (std::size_t l = 0; l < lam.dec.blocks.size(); ++l) {
    const BlochSolution s = solve_block(lam.dec, lam.c, 10.0, l);
    const CMatrix& p = lam.dec.blocks[l].projection;
    const CMatrix q = identity(25) - p;
    EXPECT_LT(s.residuals.max(), 1e-10);
    EXPECT_LT(op_norm(omega_conjugate_equation(lam.dec, lam.c, 10.0, l, s.OmegaT)), 1e-12);
    EXPECT_LT(op_norm(s.Omega * q), 1e-12);
    EXPECT_LT(op_norm(q * s.OmegaT), 1e-12);
    EXPECT_LT(op_norm(s.U * p - s.U) + op_norm(p * s.U - p), 1e-12);
    EXPECT_LT(op_norm(p * s.Ut - s.Ut) + op_norm(s.Ut * p - p), 1e-12);
    // Direct U solve agrees with the one derived from Omega.
    EXPECT_LT(op_norm(solve_U(lam.dec, lam.c, 10.0, l).value - omega_to_U(lam.dec, l, s.Omega, 10.0)), 1e-10);
    EXPECT_LT(op_norm(U_to_omega(lam.dec, lam.c, l, s.U, 10.0) - s.Omega), 1e-11);
  }
}

TEST(Solve, QubitRoundtripWithNilpotent) {
  const System q = qubit_system();
  const std::size_t l = nilpotent_block(q.dec);
  const BlochSolution s = solve_block(q.dec, q.c, 10.0, l);
  EXPECT_LT(op_norm(U_to_omega(q.dec, q.c, l, omega_to_U(q.dec, l, s.Omega, 10.0), 10.0) - s.Omega), 1e-11);
  EXPECT_LT(op_norm(Ut_to_omega_conjugate(q.dec, q.c, l, omega_conjugate_to_Ut(q.dec, l, s.OmegaT, 10.0), 10.0) -
                    s.OmegaT),
            1e-11);
}

TEST(Solve, ConversionOfProjection) {
  const System lam = lambda_system();
  const CMatrix& p = lam.dec.blocks[0].projection;
  EXPECT_LT(op_norm(omega_to_U(lam.dec, 0, CMatrix::Zero(25, 25), 10.0) - p), 1e-15);
  // With U = P: Omega = C P - (1 - P) P (...) = C P.
  EXPECT_LT(op_norm(U_to_omega(lam.dec, lam.c, 0, p, 10.0) - lam.c * p), 1e-12);
}

TEST(Solve, FixedPointMatchesNewton) {
  std::mt19937_64 rng(32);
  const auto dm = fixtures::draw_model(rng, {}, 4.0);
  SolveOptions fp;
  fp.method = SolveMethod::fixed_point;
  for (std::size_t l = 0; l < dm.dec.blocks.size(); ++l) {
    const BlockSolve a = solve_omega(dm.dec, dm.c, dm.gamma, l);
    const BlockSolve b = solve_omega(dm.dec, dm.c, dm.gamma, l, fp);
    EXPECT_LT(op_norm(a.value - b.value), 1e-9);
    EXPECT_TRUE(a.diagnostics.certified);
  }
}

TEST(Solve, UnitaryConjugateIsMinusAdjoint) {
  std::mt19937_64 rng(33);
  RandomModelOptions opts;
  opts.unitary = true;
  const auto dm = fixtures::draw_model(rng, opts, 4.0);
  for (std::size_t l = 0; l < dm.dec.blocks.size(); ++l) {
    const BlochSolution s = solve_block(dm.dec, dm.c, dm.gamma, l);
    EXPECT_LT(op_norm(s.OmegaT + s.Omega.adjoint()), 1e-10);
    EXPECT_LT(op_norm(s.Ut - s.U.adjoint()), 1e-10);
  }
}

TEST(Solve, NewtonConvergesQuadraticallyOnLambda) {
  const System lam = lambda_system();
  const double gamma = 4.0 * fixtures::max_gamma_l(lam.dec, lam.c);
  for (std::size_t l = 0; l < lam.dec.blocks.size(); ++l) {
    const KantorovichReport kr = kantorovich_report(lam.dec, lam.c, gamma, l);
    EXPECT_TRUE(kr.quadratic);
    const BlockSolve s = solve_U(lam.dec, lam.c, gamma, l);
    const auto& h = s.diagnostics.residual_history;
    // Residual exponent roughly doubles once the iteration is in the
    // contraction regime.
    for (std::size_t k = 2; k < h.size(); ++k) {
      if (h[k] < 1e-14 || h[k - 1] > 1e-2) continue;
      EXPECT_LT(h[k], 10.0 * h[k - 1] * h[k - 1] / h[k - 2] + 1e-14);
    }
    EXPECT_LE(op_norm(s.value - lam.dec.blocks[l].projection), kr.theta);
  }
}

TEST(Kantorovich, Constants) {
  const System lam = lambda_system();
  const double gamma = 100.0;
  for (std::size_t l = 0; l < lam.dec.blocks.size(); ++l) {
    const KantorovichReport kr = kantorovich_report(lam.dec, lam.c, gamma, l);
    const auto& blk = lam.dec.blocks[l];
    EXPECT_DOUBLE_EQ(kr.mu, 1.0);  // no nilpotent
    const double scp = op_norm(blk.reduced_resolvent) * op_norm(lam.c) * op_norm(blk.projection);
    EXPECT_NEAR(kr.gamma_min, 4.0 * scp, 1e-12 * kr.gamma_min);
    EXPECT_NEAR(kr.lipschitz, 2.0 * scp / gamma, 1e-14);
    EXPECT_EQ(kr.solvable, gamma >= kr.gamma_min);
    if (kr.solvable) {
      const double bl = kr.beta * kr.lipschitz;
      EXPECT_NEAR(kr.theta * kr.xi, 2.0 * kr.nu / bl, 1e-10 * kr.nu / bl);
      EXPECT_LE(kr.theta, kr.xi);
    }
  }
}

TEST(Kantorovich, QubitGeometricFactor) {
  const System q = qubit_system();
  const std::size_t l = nilpotent_block(q.dec);
  const auto& blk = q.dec.blocks[l];
  const double sn = op_norm(blk.reduced_resolvent) * op_norm(blk.nilpotent);
  const KantorovichReport kr = kantorovich_report(q.dec, q.c, 10.0, l);
  EXPECT_NEAR(kr.mu, 1.0 + sn, 1e-12);
}

TEST(Kantorovich, UnitaryThreshold) {
  std::mt19937_64 rng(34);
  RandomModelOptions opts;
  opts.unitary = true;
  const auto dm = fixtures::draw_model(rng, opts, 4.0);
  double eta = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dm.dec.blocks.size(); ++k)
    for (std::size_t j = k + 1; j < dm.dec.blocks.size(); ++j)
      eta = std::min(eta, std::abs(dm.dec.blocks[k].eigenvalue - dm.dec.blocks[j].eigenvalue));
  for (std::size_t l = 0; l < dm.dec.blocks.size(); ++l) {
    const KantorovichReport kr = kantorovich_report(dm.dec, dm.c, dm.gamma, l);
    EXPECT_NEAR(kr.gamma_min, 4.0 * op_norm(dm.dec.blocks[l].reduced_resolvent) * op_norm(dm.c), 1e-9 * kr.gamma_min);
    EXPECT_LE(kr.gamma_min, 4.0 * op_norm(dm.c) / eta * (1.0 + 1e-12));
  }
}

TEST(Solve, KantorovichViolationStillReported) {
  const System lam = lambda_system();
  const KantorovichReport kr = kantorovich_report(lam.dec, lam.c, 0.1, 0);
  EXPECT_FALSE(kr.solvable);
}

TEST(Series, DMatchesClosedForms) {
  const System lam = lambda_system();
  std::mt19937_64 rng(35);
  const auto js = fixtures::jordan_system(rng);
  const SpectralDecomposition jdec = decompose_from_user(js.b, js.similarity, js.layout);
  for (const auto* sys : {&lam}) {
    for (std::size_t l = 0; l < sys->dec.blocks.size(); ++l) {
      const auto d = perturbative_D(sys->dec, sys->c, l, 3);
      for (int j = 0; j <= 3; ++j)
        EXPECT_LT(op_norm(d.coeffs[j] - fixtures::closed_form_D(sys->dec, sys->c, l, j)), 1e-12);
    }
  }
  for (std::size_t l = 0; l < jdec.blocks.size(); ++l) {
    const auto d = perturbative_D(jdec, js.c, l, 3);
    const auto om = perturbative_omega(jdec, js.c, l, 3);
    for (int j = 0; j <= 3; ++j) {
      EXPECT_LT(op_norm(d.coeffs[j] - fixtures::closed_form_D(jdec, js.c, l, j)), 1e-11);
      EXPECT_LT(op_norm(d.coeffs[j] - jdec.blocks[l].projection * om.coeffs[j]), 1e-14);
    }
  }
}

TEST(Series, OmegaPartialSumsApproachSolution) {
  const System lam = lambda_system();
  const double gamma = 8.0 * fixtures::max_gamma_l(lam.dec, lam.c);
  for (std::size_t l = 0; l < lam.dec.blocks.size(); ++l) {
    const BlockSolve exact = solve_omega(lam.dec, lam.c, gamma, l);
    const auto series = perturbative_omega(lam.dec, lam.c, l, 6);
    double previous = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 6; ++j) {
      const double err = op_norm(series.partial_sum(gamma, j) - exact.value);
      if (err < 1e-12) break;
      EXPECT_LT(err, 0.5 * previous);
      previous = err;
    }
  }
}

TEST(Series, KClosedFormsAgainstPowerSeries) {
  const System q = qubit_system();
  for (std::size_t l = 0; l < q.dec.blocks.size(); ++l) {
    const auto kc = perturbative_K(q.dec, q.c, l, 3, KSeriesMode::closed_form);
    const auto kp = perturbative_K(q.dec, q.c, l, 3, KSeriesMode::power_series);
    EXPECT_LT(op_norm(kc.coeffs[0] - q.dec.blocks[l].projection * q.c * q.dec.blocks[l].projection), 1e-14);
    for (int j = 0; j <= 3; ++j) EXPECT_LT(op_norm(kc.coeffs[j] - kp.coeffs[j]), 1e-11);
  }
}

TEST(Series, UnitaryKIsSkewHermitian) {
  std::mt19937_64 rng(36);
  RandomModelOptions opts;
  opts.unitary = true;
  const auto dm = fixtures::draw_model(rng, opts, 4.0);
  for (std::size_t l = 0; l < dm.dec.blocks.size(); ++l) {
    const auto k = perturbative_K(dm.dec, dm.c, l, 3);
    for (const auto& m : k.coeffs) EXPECT_LT(op_norm(m + m.adjoint()), 1e-11);
  }
}

TEST(GSeries, Cases) {
  const System lam = lambda_system();
  const double gamma = 4.0 * fixtures::max_gamma_l(lam.dec, lam.c);
  const CMatrix zero = CMatrix::Zero(25, 25);
  const GSeriesResult z = sum_G_series(lam.dec, zero, zero, gamma, 0);
  EXPECT_EQ(op_norm(z.G), 0.0);
  for (std::size_t l = 0; l < lam.dec.blocks.size(); ++l) {
    const CMatrix& p = lam.dec.blocks[l].projection;
    const BlockSolve om = solve_omega(lam.dec, lam.c, gamma, l);
    const GSeriesResult g = sum_G_series(lam.dec, lam.c, p * om.value * p, gamma, l);
    EXPECT_TRUE(g.converged);
    EXPECT_LT(g.pgp_defect, 1e-9);
    const CMatrix q = identity(25) - p;
    EXPECT_LT(op_norm(q * g.G * p - q * om.value * p), 1e-9);
  }
  EXPECT_THROW(sum_G_series(lam.dec, lam.c, zero, 1e-3, 0), PreconditionError);
}
