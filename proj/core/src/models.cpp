#include "adiabloch/models.hpp"

#include <cmath>

namespace adiabloch {

namespace {

CMatrix ket_bra(Index i, Index j, Index d) {
  CMatrix m = CMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

constexpr cplx kI{0.0, 1.0};

}  // namespace

LindbladModel lambda_model(const LambdaParams& p, double gamma) {
  constexpr Index d = 5;
  LindbladModel m;
  m.dim = d;
  m.gamma = gamma;
  m.strong.hamiltonian = CMatrix::Zero(d, d);
  m.strong.hamiltonian(3, 3) = 1.0;
  m.strong.hamiltonian(4, 4) = 2.0;
  m.strong.dissipators.push_back({p.kappa0, ket_bra(2, 4, d)});

  CMatrix h = CMatrix::Zero(d, d);
  h(0, 0) = p.omega;
  h(1, 1) = -p.delta / 2.0;
  h(2, 2) = p.delta / 2.0;
  h(1, 3) = std::conj(p.g1) / 2.0;
  h(2, 3) = std::conj(p.g2) / 2.0;
  h(3, 1) = p.g1 / 2.0;
  h(3, 2) = p.g2 / 2.0;
  m.weak.hamiltonian = h;
  m.weak.dissipators.push_back({p.kappa, ket_bra(1, 0, d)});
  m.weak.dissipators.push_back({p.kappa, ket_bra(2, 0, d)});
  return m;
}

LindbladModel qubit_model(double gamma) {
  LindbladModel m;
  m.dim = 2;
  m.gamma = gamma;
  CMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -kI, kI, 0;
  z << 1, 0, 0, -1;
  m.strong.hamiltonian = x / 2.0;
  m.strong.dissipators.push_back({1.0, z});
  m.weak.hamiltonian = x + y;
  return m;
}

CMatrix qubit_similarity() {
  CMatrix r(4, 4);
  r << 0, kI, 0, 1,
      -kI, 1, -1, 0,
      -kI, -1, 1, 0,
      0, -kI, 0, 1;
  return r;
}

std::vector<JordanBlock> qubit_layout() { return {{-2.0, 1}, {-1.0, 2}, {0.0, 1}}; }

LindbladModel counterexample_model(double gamma) {
  constexpr Index d = 3;
  LindbladModel m;
  m.dim = d;
  m.gamma = gamma;
  m.strong.hamiltonian = CMatrix::Zero(d, d);
  m.strong.hamiltonian(1, 1) = 1.0 / 3.0;
  m.strong.hamiltonian(2, 2) = 1.0;
  m.weak.hamiltonian = CMatrix::Zero(d, d);
  m.weak.dissipators.push_back({1.0, CMatrix(ket_bra(0, 2, d) + ket_bra(2, 0, d))});
  return m;
}

CMatrix counterexample_similarity() {
  constexpr Index d = 3;
  const Index order[9][2] = {{0, 0}, {1, 1}, {2, 2}, {1, 0}, {0, 1}, {2, 1}, {1, 2}, {2, 0}, {0, 2}};
  CMatrix r = CMatrix::Zero(d * d, d * d);
  for (Index col = 0; col < 9; ++col) r(vec_index(order[col][0], order[col][1], d), col) = 1.0;
  return r;
}

std::vector<JordanBlock> counterexample_layout() {
  std::vector<JordanBlock> out(3, JordanBlock{0.0, 1});
  for (const double e : {1.0 / 3.0, 2.0 / 3.0, 1.0}) {
    out.push_back({cplx(0.0, -e), 1});
    out.push_back({cplx(0.0, e), 1});
  }
  return out;
}

CMatrix random_complex(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      m(i, j) = cplx(re, normal(rng));
    }
  }
  return m;
}

CMatrix random_hermitian(std::mt19937_64& rng, Index dim) {
  const CMatrix a = random_complex(rng, dim, dim);
  return (a + a.adjoint()) / 2.0;
}

LindbladModel random_model(std::mt19937_64& rng, const RandomModelOptions& opts, double gamma) {
  std::uniform_real_distribution<double> rate(0.2, 1.0);
  const Index d = opts.dim;
  LindbladModel m;
  m.dim = d;
  m.gamma = gamma;
  m.strong.hamiltonian = random_hermitian(rng, d);
  m.weak.hamiltonian = opts.weak_scale * random_hermitian(rng, d);
  if (!opts.unitary) {
    for (int k = 0; k < opts.strong_jumps; ++k) {
      const double r = rate(rng);
      m.strong.dissipators.push_back({r, random_complex(rng, d, d) / std::sqrt(2.0 * d)});
    }
    for (int k = 0; k < opts.weak_jumps; ++k) {
      const double r = opts.weak_scale * rate(rng);
      m.weak.dissipators.push_back({r, random_complex(rng, d, d) / std::sqrt(2.0 * d)});
    }
  }
  return m;
}

}  // namespace adiabloch
