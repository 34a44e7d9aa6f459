#pragma once

// Shared helpers for the Bloch solvers and the perturbative series.

#include "adiabloch/spectral.hpp"

namespace adiabloch::detail {

struct BlockOps {
  CMatrix p;
  CMatrix s;
  CMatrix nil;
  Index index = 1;
};

// Block l of dec, optionally with every operator transposed. The conjugate
// equations are the plain ones for transposed data.
BlockOps block_ops(const SpectralDecomposition& dec, std::size_t l, bool transpose);

// sum_{n < index} S^n A N^n, the inverse of A -> A - S A N.
CMatrix neumann_right(const BlockOps& b, const CMatrix& a);
// sum_{n < index} N^n A S^n.
CMatrix neumann_left(const BlockOps& b, const CMatrix& a);

}  // namespace adiabloch::detail
