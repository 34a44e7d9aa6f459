#pragma once

#include <optional>
#include <vector>

#include "adiabloch/bloch.hpp"
#include "adiabloch/liouville.hpp"
#include "adiabloch/spectral.hpp"

namespace adiabloch {

struct EffectiveBlock {
  CMatrix D;
  CMatrix Dt;
  CMatrix K;
  CMatrix U;
  CMatrix Ut;
  CMatrix W;
  CMatrix Winv;
  CMatrix Ptilde;
  CMatrix pseudo_inverse;  // (U~ U)^{-1} on the block
};

struct EffectiveGenerators {
  Superoperator D;
  Superoperator Dt;
  Superoperator K;
  CMatrix U;
  CMatrix Ut;
  CMatrix W;
  CMatrix Winv;
  std::vector<EffectiveBlock> per_block;
  // Global coefficients sum_l K_l^(j), filled by attach_series.
  std::vector<CMatrix> k_series;
};

// Assembles D, D~, K and the transforms from converged per-block solutions.
EffectiveGenerators build_effective(const SpectralDecomposition& dec, double gamma,
                                    const std::vector<BlochSolution>& solutions);

// U (U~ U)^{-1} U~ for one block.
CMatrix perturbed_projection(const SpectralDecomposition& dec, std::size_t l, const CMatrix& u,
                             const CMatrix& ut);

// Global series coefficients sum_l K_l^(j) for j <= order.
std::vector<CMatrix> effective_series(const SpectralDecomposition& dec, const CMatrix& c, int order,
                                      KSeriesMode mode = KSeriesMode::closed_form);

// sum_{j <= order} K^(j) / gamma^j.
CMatrix truncated_generator(const std::vector<CMatrix>& k_series, double gamma, int order);

struct SpectrumMatch {
  double max_distance = 0.0;
  bool collision = false;  // some target eigenvalue was nearest to two sources
};

// Greedy nearest-neighbour pairing after sorting both lists by (Re, Im).
SpectrumMatch match_spectra(const CVector& a, const CVector& b);

CVector eigenvalues(const CMatrix& a);

struct SimilarityReport {
  double u_intertwining = 0.0;     // max ||(gB + C) U_l - U_l (gB + D_l)||
  double ut_intertwining = 0.0;    // max ||U~_l (gB + C) - (gB + D~_l) U~_l||
  double w_intertwining = 0.0;     // ||(gB + C) W - W (gB + K)||
  double w_inverse = 0.0;          // ||W^{-1} W - 1||
  double block_structure = 0.0;    // max ||[X, P_l]|| over X in {D, D~, K}
  double ptilde_idempotency = 0.0;
  double ptilde_commutation = 0.0;  // ||[gB + C, P~_l]||
  double w_intertwining_blocks = 0.0;  // ||W_l - W_l P_l||, ||W_l - P~_l W_l||
  double direct_rotation = 0.0;    // ||W_l W_l - P~_l P_l||
  double conjugation = 0.0;        // K_l against (U~U)^{1/2} (gB + D_l) (U~U)^{-1/2} - g B_l
  SpectrumMatch spectrum;          // eig(gB + C) against eig(gB + K)

  double max_residual() const;
};

SimilarityReport verify_similarity(const EffectiveGenerators& gen, const SpectralDecomposition& dec,
                                   const CMatrix& b, const CMatrix& c, double gamma);

struct BoundReport {
  double gamma = 0.0;
  NormKind norm = NormKind::spectral;
  std::vector<double> gamma_l;
  std::vector<double> projection_norms;
  double loose_bound = 0.0;      // (1/gamma) sum gamma_l ||P_l||
  bool applicable = false;       // gamma >= 2 max gamma_l
  bool tight_valid = false;      // gamma > max gamma_l
  double semigroup_bound = 1.0;  // M
  double tight_bound_D = 0.0;
  double tight_bound_K = 0.0;
  std::optional<double> unitary_bound;
  std::size_t distinct_eigenvalues = 0;
  double spectral_gap = 0.0;
};

// semigroup_bound is the constant M multiplying the tight bounds.
BoundReport eternal_bound(const SpectralDecomposition& dec, const CMatrix& c, double gamma,
                          NormKind norm = NormKind::spectral, bool unitary = false,
                          double semigroup_bound = 1.0);

struct Pipeline {
  LindbladModel model;
  double gamma = 0.0;
  CMatrix B;
  CMatrix C;
  SpectralDecomposition dec;
  std::vector<BlochSolution> solutions;
  EffectiveGenerators gen;

  CMatrix total() const { return gamma * B + C; }
};

// decompose, solve every block, assemble.
Pipeline run_pipeline(const LindbladModel& model, double gamma, const SolveOptions& solve_opts = {},
                      const DecomposeOptions& dec_opts = {});

// Same with a precomputed decomposition of the strong part.
Pipeline run_pipeline(const LindbladModel& model, double gamma, SpectralDecomposition dec,
                      const SolveOptions& solve_opts = {});

}  // namespace adiabloch
