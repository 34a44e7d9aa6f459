#pragma once

#include <random>
#include <vector>

#include "adiabloch/liouville.hpp"
#include "adiabloch/spectral.hpp"

namespace adiabloch {

// Five-level system with a Lambda configuration on levels 1, 2, 3, strong
// decay 4 -> 2 and weak decays 0 -> 1, 0 -> 2. Frequencies are in units of
// the weak coupling scale; kappa0 multiplies gamma.
struct LambdaParams {
  double omega = 1.0;
  double delta = 1.0;
  cplx g1{1.0, 0.0};
  cplx g2{1.0, 0.0};
  double kappa = 1.0;
  double kappa0 = 1.0;
};

LindbladModel lambda_model(const LambdaParams& params, double gamma);

// Qubit whose strong part -i/2 [X, .] + (Z . Z - .) has a nilpotent on the
// eigenvalue -1; weak part -i [X + Y, .].
LindbladModel qubit_model(double gamma);
CMatrix qubit_similarity();
std::vector<JordanBlock> qubit_layout();

// Three-level unitary strong part with 7 spectral blocks and a dissipative
// weak part built from the swap of levels 0 and 2.
LindbladModel counterexample_model(double gamma);
// Permutation to the basis |00|, |11|, |22|, |1><0|, |0><1|, |2><1|, |1><2|,
// |2><0|, |0><2|.
CMatrix counterexample_similarity();
std::vector<JordanBlock> counterexample_layout();

struct RandomModelOptions {
  Index dim = 3;
  bool unitary = false;  // no dissipators in either part
  int strong_jumps = 1;
  int weak_jumps = 1;
  double weak_scale = 1.0;
};

LindbladModel random_model(std::mt19937_64& rng, const RandomModelOptions& opts, double gamma = 1.0);

CMatrix random_hermitian(std::mt19937_64& rng, Index dim);
CMatrix random_complex(std::mt19937_64& rng, Index rows, Index cols);

}  // namespace adiabloch
