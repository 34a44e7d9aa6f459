#include "adiabloch/effective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "adiabloch/errors.hpp"
#include "adiabloch/parallel.hpp"

namespace adiabloch {

namespace {

CMatrix zeros(Index n) { return CMatrix::Zero(n, n); }

// (1 + Omega~ S^2 Omega / gamma^2), the block form of U~ U completed by the
// identity on the complement.
CMatrix gram(const CMatrix& s, const CMatrix& omega, const CMatrix& omega_t, double gamma) {
  return identity(s.rows()) + omega_t * s * s * omega / (gamma * gamma);
}

}  // namespace

CMatrix perturbed_projection(const SpectralDecomposition& dec, std::size_t l, const CMatrix& u,
                             const CMatrix& ut) {
  const CMatrix& p = dec.blocks.at(l).projection;
  const CMatrix id = identity(dec.dim);
  return u * solve_linear(CMatrix(id - p + ut * u), p) * ut;
}

EffectiveGenerators build_effective(const SpectralDecomposition& dec, double gamma,
                                    const std::vector<BlochSolution>& solutions) {
  if (solutions.size() != dec.blocks.size()) {
    throw std::invalid_argument("build_effective: one solution per spectral block is required");
  }
  const Index n = dec.dim;
  std::vector<EffectiveBlock> blocks(dec.blocks.size());
  parallel_for(dec.blocks.size(), [&](std::size_t l) {
    const auto& blk = dec.blocks[l];
    const auto& sol = solutions[l];
    const CMatrix& p = blk.projection;
    EffectiveBlock& eb = blocks[l];
    eb.U = sol.U;
    eb.Ut = sol.Ut;
    eb.D = p * sol.Omega * p;
    eb.Dt = p * sol.OmegaT * p;
    const CMatrix inv = solve_linear(gram(blk.reduced_resolvent, sol.Omega, sol.OmegaT, gamma), identity(n));
    eb.pseudo_inverse = inv * p;
    const CMatrix half_inv = principal_sqrt(inv) * p;
    eb.W = sol.U * half_inv;
    eb.Winv = half_inv * sol.Ut;
    eb.Ptilde = sol.U * eb.pseudo_inverse * sol.Ut;
    // Equivalent to P (W^-1 (gamma B + C) W - gamma B_l) P, but written as
    // M^(1/2) D M^(-1/2) + gamma [M^(1/2) - 1, N] M^(-1/2) with M = U~U so that
    // nothing of order gamma cancels numerically.
    const CMatrix half_minus_one = principal_sqrt(gram(blk.reduced_resolvent, sol.Omega, sol.OmegaT, gamma)) -
                                   identity(n);
    const CMatrix& nil = blk.nilpotent;
    const CMatrix conj_d = eb.D + half_minus_one * eb.D;
    eb.K = p * (conj_d * half_inv + gamma * commutator(half_minus_one, nil) * half_inv) * p;
  });

  EffectiveGenerators gen;
  gen.D = {0, zeros(n), SuperTag::effective_D};
  gen.Dt = {0, zeros(n), SuperTag::effective_Dt};
  gen.K = {0, zeros(n), SuperTag::effective_K};
  gen.U = gen.Ut = gen.W = gen.Winv = zeros(n);
  for (const auto& eb : blocks) {
    gen.D.matrix += eb.D;
    gen.Dt.matrix += eb.Dt;
    gen.K.matrix += eb.K;
    gen.U += eb.U;
    gen.Ut += eb.Ut;
    gen.W += eb.W;
    gen.Winv += eb.Winv;
  }
  const Index d = static_cast<Index>(std::lround(std::sqrt(static_cast<double>(n))));
  gen.D.dim = gen.Dt.dim = gen.K.dim = d * d == n ? d : 0;
  gen.per_block = std::move(blocks);
  return gen;
}

std::vector<CMatrix> effective_series(const SpectralDecomposition& dec, const CMatrix& c, int order,
                                      KSeriesMode mode) {
  std::vector<CMatrix> out(order + 1, zeros(dec.dim));
  std::vector<SeriesCoefficients> per(dec.blocks.size());
  parallel_for(dec.blocks.size(), [&](std::size_t l) { per[l] = perturbative_K(dec, c, l, order, mode); });
  for (const auto& s : per) {
    for (int j = 0; j <= order; ++j) out[j] += s.coeffs[j];
  }
  return out;
}

CMatrix truncated_generator(const std::vector<CMatrix>& k_series, double gamma, int order) {
  if (order < 0 || order >= static_cast<int>(k_series.size())) {
    throw std::invalid_argument("truncated_generator: order outside the available series");
  }
  CMatrix acc = zeros(k_series[0].rows());
  double scale = 1.0;
  for (int j = 0; j <= order; ++j) {
    acc += scale * k_series[j];
    scale /= gamma;
  }
  return acc;
}

CVector eigenvalues(const CMatrix& a) {
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
  return es.eigenvalues();
}

SpectrumMatch match_spectra(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("match_spectra: size mismatch");
  auto sorted = [](const CVector& v) {
    std::vector<cplx> out(v.data(), v.data() + v.size());
    std::sort(out.begin(), out.end(), [](cplx x, cplx y) {
      return x.real() != y.real() ? x.real() > y.real() : x.imag() < y.imag();
    });
    return out;
  };
  const auto sa = sorted(a);
  const auto sb = sorted(b);
  std::vector<bool> used(sb.size(), false);
  SpectrumMatch m;
  for (const cplx x : sa) {
    std::size_t best = sb.size();
    std::size_t best_any = sb.size();
    double dist = std::numeric_limits<double>::infinity();
    double dist_any = dist;
    for (std::size_t j = 0; j < sb.size(); ++j) {
      const double dj = std::abs(x - sb[j]);
      if (dj < dist_any) {
        dist_any = dj;
        best_any = j;
      }
      if (!used[j] && dj < dist) {
        dist = dj;
        best = j;
      }
    }
    if (best != best_any) m.collision = true;
    used[best] = true;
    m.max_distance = std::max(m.max_distance, dist);
  }
  return m;
}

double SimilarityReport::max_residual() const {
  return std::max({u_intertwining, ut_intertwining, w_intertwining, w_inverse, block_structure,
                   ptilde_idempotency, ptilde_commutation, w_intertwining_blocks, direct_rotation, conjugation,
                   spectrum.max_distance});
}

SimilarityReport verify_similarity(const EffectiveGenerators& gen, const SpectralDecomposition& dec,
                                   const CMatrix& b, const CMatrix& c, double gamma) {
  SimilarityReport r;
  const Index n = dec.dim;
  const CMatrix total = gamma * b + c;
  const CMatrix gb = gamma * b;
  const CMatrix id = identity(n);
  for (std::size_t l = 0; l < dec.blocks.size(); ++l) {
    const auto& blk = dec.blocks[l];
    const auto& eb = gen.per_block[l];
    const CMatrix& p = blk.projection;
    r.u_intertwining = std::max(r.u_intertwining, op_norm(total * eb.U - eb.U * (gb + eb.D)));
    r.ut_intertwining = std::max(r.ut_intertwining, op_norm(eb.Ut * total - (gb + eb.Dt) * eb.Ut));
    for (const CMatrix* x : {&gen.D.matrix, &gen.Dt.matrix, &gen.K.matrix}) {
      r.block_structure = std::max(r.block_structure, op_norm(commutator(*x, p)));
    }
    r.ptilde_idempotency = std::max(r.ptilde_idempotency, op_norm(eb.Ptilde * eb.Ptilde - eb.Ptilde));
    r.ptilde_commutation = std::max(r.ptilde_commutation, op_norm(commutator(total, eb.Ptilde)));
    r.w_intertwining_blocks = std::max(
        {r.w_intertwining_blocks, op_norm(eb.W - eb.W * p), op_norm(eb.W - eb.Ptilde * eb.W)});
    r.direct_rotation = std::max(r.direct_rotation, op_norm(eb.W * eb.W - eb.Ptilde * p));

    const CMatrix gram_full = id + eb.Ut * eb.U - p;
    const CMatrix half = principal_sqrt(gram_full);
    const CMatrix k_alt =
        p * (half * (gb + eb.D) * solve_linear(half, id) - gamma * dec.block_generator(l)) * p;
    r.conjugation = std::max(r.conjugation, op_norm(k_alt - eb.K));
  }
  r.w_intertwining = op_norm(total * gen.W - gen.W * (gb + gen.K.matrix));
  r.w_inverse = op_norm(gen.Winv * gen.W - id);
  r.spectrum = match_spectra(eigenvalues(total), eigenvalues(gb + gen.K.matrix));
  return r;
}

BoundReport eternal_bound(const SpectralDecomposition& dec, const CMatrix& c, double gamma, NormKind norm,
                          bool unitary, double semigroup_bound) {
  if (!(gamma > 0.0)) throw std::invalid_argument("eternal_bound: gamma must be positive");
  BoundReport r;
  r.gamma = gamma;
  r.norm = norm;
  r.semigroup_bound = semigroup_bound;
  double gmax = 0.0;
  for (std::size_t l = 0; l < dec.blocks.size(); ++l) {
    const double gl = kantorovich_report(dec, c, gamma, l, norm).gamma_min;
    const double pn = op_norm(dec.blocks[l].projection, norm);
    r.gamma_l.push_back(gl);
    r.projection_norms.push_back(pn);
    r.loose_bound += gl * pn / gamma;
    gmax = std::max(gmax, gl);
  }
  r.applicable = gamma >= 2.0 * gmax;
  r.tight_valid = gamma > gmax;
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (r.tight_valid) {
    for (std::size_t l = 0; l < r.gamma_l.size(); ++l) {
      const double x = r.gamma_l[l] / gamma;
      const double root = std::sqrt(1.0 - x);
      r.tight_bound_D += (1.0 / root - 1.0) * r.projection_norms[l];
      r.tight_bound_K += (1.0 / root + 1.0) * (1.0 / std::sqrt(root) - 1.0) * r.projection_norms[l];
    }
    r.tight_bound_D *= semigroup_bound;
    r.tight_bound_K *= semigroup_bound;
  } else {
    r.tight_bound_D = r.tight_bound_K = inf;
  }

  r.distinct_eigenvalues = dec.blocks.size();
  double gap = inf;
  for (std::size_t k = 0; k < dec.blocks.size(); ++k) {
    for (std::size_t l = k + 1; l < dec.blocks.size(); ++l) {
      gap = std::min(gap, std::abs(dec.blocks[k].eigenvalue - dec.blocks[l].eigenvalue));
    }
  }
  r.spectral_gap = gap;
  if (unitary) {
    const double x = dec.blocks.size() > 1 ? 4.0 * op_norm(c, NormKind::spectral) / (gamma * gap) : 0.0;
    r.unitary_bound = x < 1.0 ? 2.0 * std::sqrt(static_cast<double>(r.distinct_eigenvalues)) *
                                    (1.0 / std::pow(1.0 - x, 0.25) - 1.0)
                              : inf;
  }
  return r;
}

Pipeline run_pipeline(const LindbladModel& model, double gamma, SpectralDecomposition dec,
                      const SolveOptions& solve_opts) {
  model.validate();
  Pipeline pl;
  pl.model = model;
  pl.gamma = gamma;
  pl.B = build_superop(model, Part::strong).matrix;
  pl.C = build_superop(model, Part::weak).matrix;
  pl.dec = std::move(dec);
  pl.solutions = solve_all(pl.dec, pl.C, gamma, solve_opts);
  pl.gen = build_effective(pl.dec, gamma, pl.solutions);
  return pl;
}

Pipeline run_pipeline(const LindbladModel& model, double gamma, const SolveOptions& solve_opts,
                      const DecomposeOptions& dec_opts) {
  model.validate();
  return run_pipeline(model, gamma, decompose(build_superop(model, Part::strong).matrix, dec_opts),
                      solve_opts);
}

}  // namespace adiabloch
