#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <algorithm>
#include <random>
#include <vector>

#include "adiabloch/bloch.hpp"
#include "adiabloch/effective.hpp"
#include "adiabloch/errors.hpp"
#include "adiabloch/liouville.hpp"
#include "adiabloch/models.hpp"
#include "adiabloch/spectral.hpp"

namespace adiabloch::fixtures {

struct DrawnModel {
  LindbladModel model;
  CMatrix b;
  CMatrix c;
  SpectralDecomposition dec;
  double gamma_max = 0.0;  // max over blocks of the Kantorovich threshold
  double gamma = 0.0;
};

inline double max_gamma_l(const SpectralDecomposition& dec, const CMatrix& c) {
  double g = 0.0;
  for (std::size_t l = 0; l < dec.blocks.size(); ++l) {
    g = std::max(g, kantorovich_report(dec, c, 1.0, l).gamma_min);
  }
  return g;
}

// Random model at gamma = factor * max gamma_l. Draws whose strong part has
// nearly coincident eigenvalues are redrawn.
inline DrawnModel draw_model(std::mt19937_64& rng, const RandomModelOptions& opts, double factor) {
  for (;;) {
    DrawnModel out;
    out.model = random_model(rng, opts);
    out.b = build_superop(out.model, Part::strong).matrix;
    out.c = build_superop(out.model, Part::weak).matrix;
    try {
      out.dec = decompose(out.b);
    } catch (const ClusterAmbiguityError&) {
      continue;
    }
    out.gamma_max = max_gamma_l(out.dec, out.c);
    out.gamma = factor * out.gamma_max;
    out.model.gamma = out.gamma;
    return out;
  }
}

// Generic (non-Lindblad) test system whose strong part has Jordan blocks of
// sizes 2 and 3 next to simple eigenvalues.
struct JordanSystem {
  CMatrix b;
  CMatrix c;
  CMatrix similarity;
  std::vector<JordanBlock> layout;
};

inline JordanSystem jordan_system(std::mt19937_64& rng, double weak_scale = 0.3) {
  JordanSystem s;
  s.layout = {{cplx(-1.0, 0.5), 2}, {cplx(-2.0, -1.0), 3}, {cplx(0.0, 0.0), 1}, {cplx(-0.5, 2.0), 1}};
  Index n = 0;
  for (const auto& jb : s.layout) n += jb.size;
  CMatrix j = CMatrix::Zero(n, n);
  Index at = 0;
  for (const auto& jb : s.layout) {
    for (Index k = 0; k < jb.size; ++k) {
      j(at + k, at + k) = jb.eigenvalue;
      if (k + 1 < jb.size) j(at + k, at + k + 1) = 1.0;
    }
    at += jb.size;
  }
  s.similarity = identity(n) + 0.3 * random_complex(rng, n, n);
  s.b = s.similarity * j * solve_linear(s.similarity, identity(n));
  s.c = weak_scale * random_complex(rng, n, n);
  return s;
}

// Perturbative D_l^(j) written out term by term, j <= 3.
inline CMatrix closed_form_D(const SpectralDecomposition& dec, const CMatrix& c, std::size_t l, int j) {
  const auto& blk = dec.blocks[l];
  const CMatrix& p = blk.projection;
  const CMatrix& s = blk.reduced_resolvent;
  const CMatrix s2 = s * s;
  const CMatrix s3 = s2 * s;
  const auto br = [&](const CMatrix& a) { return bracket(dec, l, a); };
  const CMatrix bc = br(c);
  switch (j) {
    case 0:
      return p * c * p;
    case 1:
      return -p * c * s * bc * p;
    case 2:
      return p * c * s * br(c * s * bc) * p - p * c * s2 * br(bc * p * c) * p;
    case 3:
      return -p * c * s * br(c * s * br(c * s * bc)) * p + p * c * s * br(c * s2 * br(bc * p * c)) * p +
             p * c * s2 * br(bc * p * c * s * bc) * p + p * c * s2 * br(br(c * s * bc) * p * c) * p -
             p * c * s3 * br(br(bc * p * c) * p * c) * p;
    default:
      return CMatrix();
  }
}

}  // namespace adiabloch::fixtures
