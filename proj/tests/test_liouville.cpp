#include <random>

#include <gtest/gtest.h>

#include "adiabloch/effective.hpp"
#include "adiabloch/liouville.hpp"
#include "adiabloch/models.hpp"

using namespace adiabloch;

namespace {

// Direct GKLS evaluation on a density matrix.
CMatrix apply_gkls(const GeneratorPart& part, const CMatrix& rho) {
  const cplx i(0.0, 1.0);
  CMatrix out = -i * (part.hamiltonian * rho - rho * part.hamiltonian);
  for (const auto& d : part.dissipators) {
    const CMatrix ll = d.jump.adjoint() * d.jump;
    out += d.rate * (d.jump * rho * d.jump.adjoint() - 0.5 * (ll * rho + rho * ll));
  }
  return out;
}

CMatrix random_density(std::mt19937_64& rng, Index d) {
  const CMatrix a = random_complex(rng, d, d);
  const CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

CVector sorted_eigs(const CMatrix& m) {
  CVector e = eigenvalues(m);
  std::sort(e.data(), e.data() + e.size(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return e;
}

}  // namespace

TEST(BuildSuperop, LambdaStrongSpectrum) {
  const LindbladModel m = lambda_model({}, 10.0);
  const CMatrix b = build_superop(m, Part::strong).matrix;
  // The superoperator is triangular in the |a><c| basis: eigenvalues
  // -(w_a + w_c) - i(e_a - e_c) with w = kappa0 / 2 on level 4 only.
  std::vector<cplx> expected;
  const double e[5] = {0, 0, 0, 1, 2};
  const double w[5] = {0, 0, 0, 0, 0.5};
  for (int a = 0; a < 5; ++a)
    for (int c = 0; c < 5; ++c) expected.push_back(cplx(-(w[a] + w[c]), -(e[a] - e[c])));
  CVector exp_v(25);
  for (int k = 0; k < 25; ++k) exp_v(k) = expected[k];
  EXPECT_LT(match_spectra(eigenvalues(b), exp_v).max_distance, 1e-10);
  EXPECT_TRUE(check_tp(build_superop(m, Part::strong), 1e-13).pass);
}

TEST(BuildSuperop, Zero) {
  LindbladModel m;
  m.dim = 3;
  m.strong.hamiltonian = m.weak.hamiltonian = CMatrix::Zero(3, 3);
  EXPECT_EQ(op_norm(build_superop(m, Part::total).matrix), 0.0);
}

TEST(BuildSuperop, MatchesDirectEvaluation) {
  std::mt19937_64 rng(11);
  RandomModelOptions opts;
  opts.dim = 3;
  opts.strong_jumps = 2;
  const LindbladModel m = random_model(rng, opts, 2.5);
  const CMatrix b = build_superop(m, Part::strong).matrix;
  const CMatrix total = build_superop(m, Part::total).matrix;
  for (int k = 0; k < 5; ++k) {
    const CMatrix rho = random_density(rng, 3);
    EXPECT_LT((unvectorize(b * vectorize(rho), 3) - apply_gkls(m.strong, rho)).norm(), 1e-13);
    const CMatrix direct = 2.5 * apply_gkls(m.strong, rho) + apply_gkls(m.weak, rho);
    EXPECT_LT((unvectorize(total * vectorize(rho), 3) - direct).norm(), 1e-12);
  }
}

TEST(BuildSuperop, ValidateRejectsNegativeRate) {
  LindbladModel m = qubit_model(1.0);
  m.weak.dissipators.push_back({-1.0, identity(2)});
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(Coherence, UnitaryQubitIsRotation) {
  CMatrix z = CMatrix::Zero(2, 2);
  z.diagonal() << 1.0, -1.0;
  const Superoperator op{2, lindblad_matrix(z, {}), SuperTag::custom};
  const CoherenceRep rep = coherence_rep(op);
  EXPECT_EQ(rep.hp_defect, 0.0);
  EXPECT_LT((rep.real_part + rep.real_part.transpose()).norm(), 1e-14);
  EXPECT_LT(rep.real_part.row(0).norm() + rep.real_part.col(0).norm(), 1e-14);
}

TEST(Coherence, InjectedDefect) {
  const LindbladModel m = qubit_model(1.0);
  Superoperator op = build_superop(m, Part::strong);
  const double eps = 1e-3;
  // i eps on the coherence matrix element (tau_1 | . | tau_1).
  const auto basis = hermitian_basis(2);
  const CVector t1 = vectorize(basis[1]);
  op.matrix += cplx(0.0, eps) * t1 * t1.adjoint() / t1.squaredNorm();
  const CheckResult hp = check_hp(op, 1e-9);
  EXPECT_FALSE(hp.pass);
  EXPECT_NEAR(hp.defect, eps, 1e-12);
}

TEST(Coherence, Homomorphism) {
  std::mt19937_64 rng(12);
  const LindbladModel m = random_model(rng, {}, 1.0);
  const Superoperator a = build_superop(m, Part::strong), b = build_superop(m, Part::weak);
  const Superoperator ab{3, a.matrix * b.matrix, SuperTag::custom};
  EXPECT_LT((coherence_rep(ab).real_part - coherence_rep(a).real_part * coherence_rep(b).real_part).norm(),
            1e-11);
  EXPECT_LT(coherence_rep(build_superop(lambda_model({}, 10.0), Part::total)).hp_defect, 1e-12);
}

TEST(CheckTp, Violation) {
  const LindbladModel m = qubit_model(1.0);
  Superoperator op = build_superop(m, Part::total);
  EXPECT_LT(check_tp(op, 1e-13).defect, 1e-13);
  op.matrix(0, 0) += 0.1;  // population of |0> grows
  EXPECT_FALSE(check_tp(op, 1e-9).pass);
}

TEST(Gkls, PureHamiltonian) {
  std::mt19937_64 rng(13);
  const CMatrix h = random_hermitian(rng, 3);
  const GKLSForm f = gkls_decompose({3, lindblad_matrix(h, {}), SuperTag::custom});
  EXPECT_LT(op_norm(f.kossakowski), 1e-12);
  EXPECT_LT(op_norm(f.hamiltonian - (h - h.trace() / 3.0 * identity(3))), 1e-12);
  EXPECT_TRUE(f.verdicts.ccp);
  EXPECT_TRUE(check_ccp(f, 1e-12).pass);
}

TEST(Gkls, RoundtripRandom) {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 5; ++k) {
    RandomModelOptions opts;
    opts.dim = 2 + k % 3;
    opts.weak_jumps = 3;
    const Superoperator op = build_superop(random_model(rng, opts), Part::weak);
    const GKLSForm f = gkls_decompose(op);
    EXPECT_LT(op_norm(reassemble(f) - op.matrix), 1e-10);
    EXPECT_TRUE(f.verdicts.hp && f.verdicts.tp && f.verdicts.ccp);
    EXPECT_LT((f.kossakowski - f.kossakowski.adjoint()).norm(), 1e-12);
    EXPECT_TRUE(std::is_sorted(f.rates.rbegin(), f.rates.rend()));
    for (const auto& l : f.jumps) EXPECT_LT(std::abs(l.trace()), 1e-12);
  }
}

TEST(Gkls, RejectsNonHermiticityPreserving) {
  Superoperator op = build_superop(qubit_model(1.0), Part::strong);
  op.matrix *= cplx(0.0, 1.0);
  EXPECT_THROW(gkls_decompose(op), std::invalid_argument);
}

TEST(Gkls, LambdaKRatesAndTotalNegativity) {
  const Pipeline pl = run_pipeline(lambda_model({}, 10.0), 10.0);
  const GKLSForm k = gkls_decompose(pl.gen.K);
  ASSERT_GE(k.rates.size(), 5u);
  EXPECT_NEAR(k.rates[0], 1.000, 5e-4);
  EXPECT_NEAR(k.rates[1], 0.995, 5e-4);
  EXPECT_NEAR(k.rates.back(), -0.025, 5e-4);
  EXPECT_FALSE(k.verdicts.ccp);
  EXPECT_TRUE(check_tp(pl.gen.K, 1e-10).pass);
  EXPECT_TRUE(check_hp(pl.gen.K, 1e-10).pass);
  const GKLSForm tot = gkls_decompose({5, 10.0 * pl.B + pl.gen.K.matrix, SuperTag::custom});
  const CcpResult ccp = check_ccp(tot, 1e-9);
  EXPECT_FALSE(ccp.pass);
  EXPECT_NEAR(ccp.min_rate, -6.22e-5, 1e-7);
}

TEST(Gkls, ZenoGeneratorIsCp) {
  const LindbladModel m = lambda_model({}, 10.0);
  const CMatrix b = build_superop(m, Part::strong).matrix;
  const CMatrix c = build_superop(m, Part::weak).matrix;
  const auto k0 = effective_series(decompose(b), c, 0).front();
  const GKLSForm f = gkls_decompose({5, k0, SuperTag::custom});
  EXPECT_TRUE(check_ccp(f, 1e-12).pass);
  // Two decays at rate kappa = 1.
  EXPECT_NEAR(f.rates[0], 1.0, 1e-12);
  EXPECT_NEAR(f.rates[1], 1.0, 1e-12);
  EXPECT_NEAR(f.rates[2], 0.0, 1e-12);
}

TEST(Gkls, ZeroKossakowski) {
  GKLSForm f;
  f.dim = 2;
  f.rates = {0.0, 0.0, 0.0};
  const CcpResult r = check_ccp(f, 0.0);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.min_rate, 0.0);
}
