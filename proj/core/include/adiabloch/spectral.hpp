#pragma once

#include <vector>

#include "adiabloch/matcore.hpp"

namespace adiabloch {

struct EigenspaceData {
  cplx eigenvalue;
  CMatrix projection;
  CMatrix nilpotent;
  Index index = 1;  // smallest k with nilpotent^k = 0
  CMatrix reduced_resolvent;
  Index rank = 0;
};

struct SpectralResiduals {
  double idempotency_defect = 0.0;     // max ||P^2 - P||
  double identity_defect = 0.0;        // ||sum P - 1||
  double commut_defect = 0.0;          // max ||P_k P_l|| (k != l) and ||[B, P_l]||
  double resolvent_defect = 0.0;       // max ||(B - b)S - (1 - P)||, ||S(B - b) - (1 - P)||
  double nilpotent_defect = 0.0;       // max ||N^n||
  double reconstruction_defect = 0.0;  // ||B - sum(b P + N)||
  bool index_consistent = true;        // rank-based cross-check of the nilpotent index

  double max() const;
};

struct SpectralDecomposition {
  Index dim = 0;
  std::vector<EigenspaceData> blocks;
  SpectralResiduals residuals;
  double cluster_tol = 0.0;

  // Reassembled sum of b P + N.
  CMatrix reconstruct() const;
  // b_l P_l + N_l.
  CMatrix block_generator(std::size_t l) const;
};

struct DecomposeOptions {
  // Absolute clustering threshold; negative selects 1e-6 * max(1, ||B||).
  double cluster_tol = -1.0;
  // Relative threshold (times ||B||) for zeroing nilpotent entries and
  // detecting the nilpotent index.
  double nil_tol = 1e-9;
};

SpectralDecomposition decompose(const CMatrix& b, const DecomposeOptions& opts = {});

SpectralResiduals validate(const SpectralDecomposition& dec, const CMatrix& b);

struct JordanBlock {
  cplx eigenvalue;
  Index size = 1;
};

// B = R J R^{-1} with J assembled from the listed Jordan blocks in column
// order of R. Blocks sharing an eigenvalue form one spectral block.
SpectralDecomposition decompose_from_user(const CMatrix& b, const CMatrix& similarity,
                                          const std::vector<JordanBlock>& layout);

// Same data transposed, i.e. the decomposition of B^T.
SpectralDecomposition transposed(const SpectralDecomposition& dec);

}  // namespace adiabloch
