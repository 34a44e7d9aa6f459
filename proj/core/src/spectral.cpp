#include "adiabloch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "adiabloch/errors.hpp"

namespace adiabloch {

double SpectralResiduals::max() const {
  return std::max({idempotency_defect, identity_defect, commut_defect, resolvent_defect,
                   nilpotent_defect, reconstruction_defect});
}

CMatrix SpectralDecomposition::block_generator(std::size_t l) const {
  const auto& blk = blocks.at(l);
  return blk.eigenvalue * blk.projection + blk.nilpotent;
}

CMatrix SpectralDecomposition::reconstruct() const {
  CMatrix out = CMatrix::Zero(dim, dim);
  for (std::size_t l = 0; l < blocks.size(); ++l) out += block_generator(l);
  return out;
}

namespace {

// Swaps diagonal entries k and k+1 of the upper triangular t with a plane
// rotation, updating the unitary factor q so that q t q^H is unchanged.
void swap_adjacent(CMatrix& t, CMatrix& q, Index k) {
  const Index n = t.rows();
  const cplx t11 = t(k, k);
  const cplx t22 = t(k + 1, k + 1);
  const cplx f = t(k, k + 1);
  const cplx g = t22 - t11;
  if (g == cplx(0.0)) return;
  double c;
  cplx s;
  const double af = std::abs(f);
  const double r = std::hypot(af, std::abs(g));
  if (af == 0.0) {
    c = 0.0;
    s = std::conj(g) / std::abs(g);
  } else {
    c = af / r;
    s = (f / af) * std::conj(g) / r;
  }
  for (Index j = 0; j < n; ++j) {
    const cplx x = t(k, j);
    const cplx y = t(k + 1, j);
    t(k, j) = c * x + s * y;
    t(k + 1, j) = -std::conj(s) * x + c * y;
  }
  for (Index i = 0; i < n; ++i) {
    const cplx x = t(i, k);
    const cplx y = t(i, k + 1);
    t(i, k) = c * x + std::conj(s) * y;
    t(i, k + 1) = -s * x + c * y;
    const cplx qx = q(i, k);
    const cplx qy = q(i, k + 1);
    q(i, k) = c * qx + std::conj(s) * qy;
    q(i, k + 1) = -s * qx + c * qy;
  }
  t(k + 1, k) = 0.0;
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
}

// Single-linkage clustering of eigenvalues.
std::vector<int> cluster_labels(const std::vector<cplx>& ev, double tol, int& count) {
  const std::size_t n = ev.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(ev[i] - ev[j]) <= tol) {
        const int a = find(static_cast<int>(i));
        const int b = find(static_cast<int>(j));
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
  std::vector<int> label(n, -1), root_label(n, -1);
  count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int r = find(static_cast<int>(i));
    if (root_label[static_cast<std::size_t>(r)] < 0) root_label[static_cast<std::size_t>(r)] = count++;
    label[i] = root_label[static_cast<std::size_t>(r)];
  }
  return label;
}

// Deterministic block order: descending real part, then ascending imaginary part.
void sort_blocks(std::vector<EigenspaceData>& blocks, double tol) {
  std::stable_sort(blocks.begin(), blocks.end(), [tol](const EigenspaceData& a, const EigenspaceData& b) {
    const double dr = a.eigenvalue.real() - b.eigenvalue.real();
    if (std::abs(dr) > tol) return dr > 0;
    return a.eigenvalue.imag() < b.eigenvalue.imag() - tol;
  });
}

Index nilpotent_index(CMatrix& nil, double thresh, Index max_index) {
  nil = nil.unaryExpr([thresh](const cplx& z) { return std::abs(z) <= thresh ? cplx(0.0) : z; });
  CMatrix power = nil;
  Index k = 1;
  while (op_norm(power) > thresh && k < max_index + 1) {
    power = power * nil;
    ++k;
  }
  if (k == 1) nil.setZero();
  return k;
}

void fill_resolvents(std::vector<EigenspaceData>& blocks, Index dim) {
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    CMatrix s = CMatrix::Zero(dim, dim);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      if (k == l) continue;
      const cplx delta = blocks[k].eigenvalue - blocks[l].eigenvalue;
      const CMatrix step = -blocks[k].nilpotent / delta;
      CMatrix term = blocks[k].projection;
      CMatrix acc = term;
      for (Index m = 1; m < blocks[k].index; ++m) {
        term = step * term;
        acc += term;
      }
      s += acc / delta;
    }
    blocks[l].reduced_resolvent = s;
  }
}

Index numerical_rank(const CMatrix& a, double thresh) {
  if (a.size() == 0) return 0;
  const Eigen::VectorXd sv = Eigen::BDCSVD<CMatrix>(a).singularValues();
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++r;
  return r;
}

}  // namespace

SpectralDecomposition decompose(const CMatrix& b, const DecomposeOptions& opts) {
  if (b.rows() != b.cols()) throw std::invalid_argument("decompose: matrix must be square");
  if (!b.allFinite()) throw std::invalid_argument("decompose: non-finite input");
  const Index n = b.rows();
  const double bnorm = std::max(1.0, op_norm(b));
  const double ctol = opts.cluster_tol >= 0.0 ? opts.cluster_tol : 1e-6 * bnorm;

  Eigen::ComplexSchur<CMatrix> schur(b);
  if (schur.info() != Eigen::Success) throw NumericalError("decompose: Schur decomposition failed");
  const CMatrix t0 = schur.matrixT();
  const CMatrix q0 = schur.matrixU();

  std::vector<cplx> ev(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = t0(i, i);
  int nclusters = 0;
  const auto labels = cluster_labels(ev, ctol, nclusters);

  // Cluster means and the ambiguity check.
  std::vector<cplx> mean(static_cast<std::size_t>(nclusters), cplx(0.0));
  std::vector<Index> mult(static_cast<std::size_t>(nclusters), 0);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    mean[static_cast<std::size_t>(labels[i])] += ev[i];
    ++mult[static_cast<std::size_t>(labels[i])];
  }
  for (int c = 0; c < nclusters; ++c) mean[static_cast<std::size_t>(c)] /= static_cast<double>(mult[static_cast<std::size_t>(c)]);
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = 0; j < ev.size(); ++j)
      if (labels[i] != labels[j]) {
        const double gap = std::abs(ev[i] - ev[j]);
        if (gap <= 10.0 * ctol) {
          std::ostringstream msg;
          msg << "decompose: eigenvalue clusters " << ev[i] << " and " << ev[j]
              << " are separated by only " << gap << " (cluster tolerance " << ctol << ")";
          throw ClusterAmbiguityError(msg.str(), gap);
        }
      }

  SpectralDecomposition dec;
  dec.dim = n;
  dec.cluster_tol = ctol;
  const double nil_thresh = opts.nil_tol * bnorm;

  for (int c = 0; c < nclusters; ++c) {
    CMatrix t = t0;
    CMatrix q = q0;
    std::vector<int> lab = labels;
    // Bubble members of cluster c to the leading positions.
    Index filled = 0;
    for (Index i = 0; i < n; ++i) {
      if (lab[static_cast<std::size_t>(i)] != c) continue;
      for (Index k = i - 1; k >= filled; --k) {
        swap_adjacent(t, q, k);
        std::swap(lab[static_cast<std::size_t>(k)], lab[static_cast<std::size_t>(k + 1)]);
      }
      ++filled;
    }
    const Index m = filled;
    CMatrix ps = CMatrix::Zero(n, n);
    ps.topLeftCorner(m, m).setIdentity();
    if (m < n) {
      const CMatrix t11 = t.topLeftCorner(m, m);
      const CMatrix t22 = t.bottomRightCorner(n - m, n - m);
      const CMatrix x = solve_sylvester_triangular(t11, t22, -t.topRightCorner(m, n - m));
      ps.topRightCorner(m, n - m) = -x;
    }
    EigenspaceData blk;
    blk.eigenvalue = mean[static_cast<std::size_t>(c)];
    blk.projection = q * ps * q.adjoint();
    blk.rank = static_cast<Index>(std::llround(blk.projection.trace().real()));
    blk.nilpotent = (b - blk.eigenvalue * identity(n)) * blk.projection;
    blk.index = nilpotent_index(blk.nilpotent, nil_thresh, m);
    dec.blocks.push_back(std::move(blk));
  }
  sort_blocks(dec.blocks, ctol);
  fill_resolvents(dec.blocks, n);
  dec.residuals = validate(dec, b);
  return dec;
}

SpectralResiduals validate(const SpectralDecomposition& dec, const CMatrix& b) {
  SpectralResiduals r;
  const Index n = dec.dim;
  const CMatrix id = identity(n);
  CMatrix sum = CMatrix::Zero(n, n);
  const double bnorm = std::max(1.0, op_norm(b));
  for (std::size_t l = 0; l < dec.blocks.size(); ++l) {
    const auto& blk = dec.blocks[l];
    const CMatrix& p = blk.projection;
    sum += p;
    r.idempotency_defect = std::max(r.idempotency_defect, op_norm(p * p - p));
    r.commut_defect = std::max(r.commut_defect, op_norm(commutator(b, p)));
    for (std::size_t k = 0; k < dec.blocks.size(); ++k)
      if (k != l) r.commut_defect = std::max(r.commut_defect, op_norm(dec.blocks[k].projection * p));
    const CMatrix shifted = b - blk.eigenvalue * id;
    const CMatrix& s = blk.reduced_resolvent;
    r.resolvent_defect = std::max({r.resolvent_defect, op_norm(shifted * s - (id - p)),
                                   op_norm(s * shifted - (id - p))});
    CMatrix power = id;
    for (Index k = 0; k < blk.index; ++k) power = power * blk.nilpotent;
    r.nilpotent_defect = std::max(r.nilpotent_defect, op_norm(power));
    // Rank cross-check: N^(n-1) must have nonzero rank when n > 1.
    if (blk.index > 1) {
      CMatrix lower = id;
      for (Index k = 0; k + 1 < blk.index; ++k) lower = lower * blk.nilpotent;
      if (numerical_rank(lower, 1e-9 * bnorm) == 0) r.index_consistent = false;
    }
    if (numerical_rank(blk.nilpotent, 1e-7 * bnorm) > 0 && blk.index == 1) r.index_consistent = false;
  }
  r.identity_defect = op_norm(sum - id);
  r.reconstruction_defect = op_norm(b - dec.reconstruct());
  return r;
}

SpectralDecomposition decompose_from_user(const CMatrix& b, const CMatrix& similarity,
                                          const std::vector<JordanBlock>& layout) {
  const Index n = b.rows();
  if (b.cols() != n || similarity.rows() != n || similarity.cols() != n)
    throw std::invalid_argument("decompose_from_user: dimension mismatch");
  Index total = 0;
  for (const auto& jb : layout) {
    if (jb.size < 1) throw std::invalid_argument("decompose_from_user: Jordan block size must be positive");
    total += jb.size;
  }
  if (total != n) throw std::invalid_argument("decompose_from_user: Jordan layout does not cover the space");
  const CMatrix rinv = solve_linear(similarity, identity(n));

  // Group Jordan blocks by exactly equal eigenvalue.
  std::vector<cplx> values;
  std::vector<int> group;
  for (const auto& jb : layout) {
    auto it = std::find(values.begin(), values.end(), jb.eigenvalue);
    if (it == values.end()) {
      group.push_back(static_cast<int>(values.size()));
      values.push_back(jb.eigenvalue);
    } else {
      group.push_back(static_cast<int>(it - values.begin()));
    }
  }

  SpectralDecomposition dec;
  dec.dim = n;
  dec.cluster_tol = 0.0;
  for (std::size_t g = 0; g < values.size(); ++g) {
    CMatrix e = CMatrix::Zero(n, n);
    CMatrix nil = CMatrix::Zero(n, n);
    Index offset = 0;
    Index index = 1;
    Index rank = 0;
    for (std::size_t k = 0; k < layout.size(); ++k) {
      const Index sz = layout[k].size;
      if (group[k] == static_cast<int>(g)) {
        for (Index i = 0; i < sz; ++i) e(offset + i, offset + i) = 1.0;
        for (Index i = 0; i + 1 < sz; ++i) nil(offset + i, offset + i + 1) = 1.0;
        index = std::max(index, sz);
        rank += sz;
      }
      offset += sz;
    }
    EigenspaceData blk;
    blk.eigenvalue = values[g];
    blk.projection = similarity * e * rinv;
    blk.nilpotent = index > 1 ? CMatrix(similarity * nil * rinv) : CMatrix(CMatrix::Zero(n, n));
    blk.index = index;
    blk.rank = rank;
    dec.blocks.push_back(std::move(blk));
  }
  sort_blocks(dec.blocks, 0.0);
  fill_resolvents(dec.blocks, n);
  dec.residuals = validate(dec, b);
  return dec;
}

SpectralDecomposition transposed(const SpectralDecomposition& dec) {
  SpectralDecomposition out = dec;
  for (auto& blk : out.blocks) {
    blk.projection.transposeInPlace();
    blk.nilpotent.transposeInPlace();
    blk.reduced_resolvent.transposeInPlace();
  }
  return out;
}

}  // namespace adiabloch
