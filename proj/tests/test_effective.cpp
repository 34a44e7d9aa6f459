#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "adiabloch/effective.hpp"
#include "adiabloch/models.hpp"
#include "support.hpp"

using namespace adiabloch;

namespace {

CMatrix pauli_x() {
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

LindbladModel strong_only(const LindbladModel& m) {
  LindbladModel out = m;
  out.weak.hamiltonian = CMatrix::Zero(m.dim, m.dim);
  out.weak.dissipators.clear();
  return out;
}

}  // namespace

TEST(Effective, ZeroCouplingIsTrivial) {
  const LindbladModel m = strong_only(lambda_model({}, 10.0));
  const Pipeline pl = run_pipeline(m, 10.0);
  const Index n = pl.B.rows();
  EXPECT_EQ(op_norm(pl.gen.D.matrix), 0.0);
  EXPECT_EQ(op_norm(pl.gen.Dt.matrix), 0.0);
  EXPECT_LT(op_norm(pl.gen.K.matrix), 1e-14);
  EXPECT_LT(op_norm(pl.gen.U - identity(n)), 1e-14);
  EXPECT_LT(op_norm(pl.gen.Ut - identity(n)), 1e-14);
  EXPECT_LT(op_norm(pl.gen.W - identity(n)), 1e-14);
  for (std::size_t l = 0; l < pl.dec.blocks.size(); ++l)
    EXPECT_LT(op_norm(pl.gen.per_block[l].Ptilde - pl.dec.blocks[l].projection), 1e-14);
  const SimilarityReport r = verify_similarity(pl.gen, pl.dec, pl.B, pl.C, 10.0);
  EXPECT_LT(r.max_residual(), 1e-12);
  const BoundReport br = eternal_bound(pl.dec, pl.C, 10.0);
  EXPECT_EQ(br.loose_bound, 0.0);
  EXPECT_EQ(br.tight_bound_D, 0.0);
  EXPECT_EQ(br.tight_bound_K, 0.0);
}

class QubitK : public ::testing::TestWithParam<double> {};

TEST_P(QubitK, MatchesClosedForm) {
  const double gamma = GetParam();
  const Pipeline pl = run_pipeline(qubit_model(gamma), gamma);
  const double coeff = 0.5 * (std::sqrt(gamma * gamma + 4.0 * gamma + 8.0) - gamma);
  const CMatrix expected = lindblad_matrix(coeff * pauli_x(), {});
  EXPECT_LT(op_norm(pl.gen.K.matrix - expected), 1e-10);
  EXPECT_LT(verify_similarity(pl.gen, pl.dec, pl.B, pl.C, gamma).max_residual(), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Gammas, QubitK, ::testing::Values(10.0, 20.0, 50.0));

TEST(Effective, LambdaProjectionsAndSimilarity) {
  const double gamma = 10.0;
  const Pipeline pl = run_pipeline(lambda_model({}, gamma), gamma);
  const CMatrix total = pl.total();
  for (std::size_t l = 0; l < pl.dec.blocks.size(); ++l) {
    const auto& blk = pl.gen.per_block[l];
    EXPECT_LT(op_norm(blk.Ptilde * blk.Ptilde - blk.Ptilde), 1e-10);
    EXPECT_LT(op_norm(commutator(total, blk.Ptilde)), 1e-9);
    EXPECT_NEAR(blk.Ptilde.trace().real(), static_cast<double>(pl.dec.blocks[l].rank), 1e-9);
    EXPECT_LT(op_norm(perturbed_projection(pl.dec, l, blk.U, blk.Ut) - blk.Ptilde), 1e-12);
    const CMatrix& p = pl.dec.blocks[l].projection;
    EXPECT_LT(op_norm(commutator(pl.gen.K.matrix, p)), 1e-10);
    EXPECT_LT(op_norm(commutator(pl.gen.D.matrix, p)), 1e-10);
  }
  const SimilarityReport r = verify_similarity(pl.gen, pl.dec, pl.B, pl.C, gamma);
  EXPECT_LT(r.max_residual(), 1e-9);
  EXPECT_LT(r.spectrum.max_distance, 1e-8);
  for (const Superoperator* op : {&pl.gen.D, &pl.gen.Dt, &pl.gen.K}) {
    EXPECT_TRUE(check_tp(*op, 1e-10).pass);
    EXPECT_TRUE(check_hp(*op, 1e-10).pass);
  }
}

TEST(Effective, WDistanceBound) {
  std::mt19937_64 rng(41);
  const auto dm = fixtures::draw_model(rng, {}, 4.0);
  const Pipeline pl = run_pipeline(dm.model, dm.gamma, dm.dec);
  double bound = 0.0;
  for (const auto& s : pl.solutions) {
    const double th = s.kantorovich.theta;
    bound += std::sqrt((1.0 + th) / (1.0 - th)) - 1.0;
  }
  EXPECT_LE(op_norm(pl.gen.W - identity(pl.B.rows())), bound);
}

TEST(Effective, DNormBound) {
  std::mt19937_64 rng(42);
  const auto dm = fixtures::draw_model(rng, {}, 4.0);
  const Pipeline pl = run_pipeline(dm.model, dm.gamma, dm.dec);
  const double nc = op_norm(pl.C);
  for (std::size_t l = 0; l < pl.dec.blocks.size(); ++l) {
    const double gl = pl.solutions[l].kantorovich.gamma_min;
    const double np = op_norm(pl.dec.blocks[l].projection);
    EXPECT_LE(op_norm(pl.gen.per_block[l].D), 2.0 * nc * np * np / (1.0 + std::sqrt(1.0 - gl / dm.gamma)) * (1 + 1e-12));
  }
}

TEST(Effective, SeriesTruncationsApproachK) {
  const double gamma = 40.0;
  const Pipeline pl = run_pipeline(lambda_model({}, gamma), gamma);
  const auto series = effective_series(pl.dec, pl.C, 3);
  ASSERT_EQ(series.size(), 4u);
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 3; ++k) {
    const double err = op_norm(truncated_generator(series, gamma, k) - pl.gen.K.matrix);
    EXPECT_LT(err, previous);
    previous = err;
  }
}

TEST(Effective, LambdaFirstOrderRates) {
  LambdaParams p;
  p.delta = 0.0;
  const LindbladModel m = lambda_model(p, 10.0);
  const CMatrix c = build_superop(m, Part::weak).matrix;
  const SpectralDecomposition dec = decompose(build_superop(m, Part::strong).matrix);
  const auto series = effective_series(dec, c, 1);
  const GKLSForm k0 = gkls_decompose({m.dim, series[0], SuperTag::custom});
  EXPECT_TRUE(k0.verdicts.ccp);
  const GKLSForm k1 = gkls_decompose({m.dim, series[1], SuperTag::custom});
  ASSERT_GE(k1.rates.size(), 2u);
  EXPECT_NEAR(k1.rates.front(), 0.25, 1e-10);
  EXPECT_NEAR(k1.rates.back(), -0.25, 1e-10);
}

TEST(Effective, UnitaryKIsSkewHermitian) {
  std::mt19937_64 rng(43);
  RandomModelOptions opts;
  opts.unitary = true;
  const auto dm = fixtures::draw_model(rng, opts, 4.0);
  const Pipeline pl = run_pipeline(dm.model, dm.gamma, dm.dec);
  EXPECT_LT(op_norm(pl.gen.K.matrix + pl.gen.K.matrix.adjoint()), 1e-10);
  const BoundReport br = eternal_bound(pl.dec, pl.C, dm.gamma, NormKind::spectral, true);
  ASSERT_TRUE(br.unitary_bound.has_value());
  EXPECT_GT(*br.unitary_bound, 0.0);
}

TEST(Bound, TightDBelowTightK) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 5; ++trial) {
    const auto dm = fixtures::draw_model(rng, {}, 2.0 + trial);
    const BoundReport br = eternal_bound(dm.dec, dm.c, dm.gamma);
    EXPECT_TRUE(br.applicable);
    EXPECT_TRUE(br.tight_valid);
    EXPECT_LE(br.tight_bound_D, br.tight_bound_K);
    EXPECT_GT(br.loose_bound, 0.0);
  }
}

TEST(Bound, LooseBoundFormula) {
  const LindbladModel m = lambda_model({}, 10.0);
  const CMatrix c = build_superop(m, Part::weak).matrix;
  const SpectralDecomposition dec = decompose(build_superop(m, Part::strong).matrix);
  const BoundReport br = eternal_bound(dec, c, 7.0);
  double sum = 0.0;
  for (std::size_t l = 0; l < dec.blocks.size(); ++l) sum += br.gamma_l[l] * br.projection_norms[l];
  EXPECT_NEAR(br.loose_bound, sum / 7.0, 1e-12 * sum);
  EXPECT_EQ(br.applicable, 7.0 >= 2.0 * *std::max_element(br.gamma_l.begin(), br.gamma_l.end()));
}
