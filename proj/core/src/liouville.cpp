#include "adiabloch/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace adiabloch {

namespace {

Index dim_of(const Superoperator& op) {
  if (op.dim > 0) return op.dim;
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(op.matrix.rows()))));
  return d;
}

void check_part(const GeneratorPart& part, Index d, const char* name, double herm_tol) {
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument(std::string("model ") + name + " part: " + what);
  };
  if (part.hamiltonian.rows() != d || part.hamiltonian.cols() != d) fail("Hamiltonian has wrong shape");
  if (!part.hamiltonian.allFinite()) fail("Hamiltonian has non-finite entries");
  const double herm = (part.hamiltonian - part.hamiltonian.adjoint()).cwiseAbs().maxCoeff();
  if (herm > herm_tol * std::max(1.0, part.hamiltonian.cwiseAbs().maxCoeff()))
    fail("Hamiltonian is not Hermitian");
  for (const auto& dis : part.dissipators) {
    if (!(dis.rate >= 0.0) || !std::isfinite(dis.rate)) fail("negative or non-finite rate");
    if (dis.jump.rows() != d || dis.jump.cols() != d) fail("jump operator has wrong shape");
    if (!dis.jump.allFinite()) fail("jump operator has non-finite entries");
  }
}

}  // namespace

void LindbladModel::validate(double herm_tol) const {
  if (dim <= 0) throw std::invalid_argument("model: dimension must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("model: gamma must be positive");
  check_part(strong, dim, "strong", herm_tol);
  check_part(weak, dim, "weak", herm_tol);
}

CMatrix lindblad_matrix(const CMatrix& hamiltonian, const std::vector<Dissipator>& dissipators) {
  const Index d = hamiltonian.rows();
  const CMatrix id = identity(d);
  const cplx i(0.0, 1.0);
  CMatrix out = -i * (Eigen::kroneckerProduct(id, hamiltonian).eval() -
                      Eigen::kroneckerProduct(hamiltonian.transpose(), id).eval());
  for (const auto& dis : dissipators) {
    if (dis.rate == 0.0) continue;
    const CMatrix ll = dis.jump.adjoint() * dis.jump;
    out += dis.rate * (Eigen::kroneckerProduct(dis.jump.conjugate(), dis.jump).eval() -
                       0.5 * Eigen::kroneckerProduct(id, ll).eval() -
                       0.5 * Eigen::kroneckerProduct(ll.transpose(), id).eval());
  }
  return out;
}

Superoperator build_superop(const LindbladModel& model, Part part) {
  model.validate();
  Superoperator op;
  op.dim = model.dim;
  switch (part) {
    case Part::strong:
      op.matrix = lindblad_matrix(model.strong.hamiltonian, model.strong.dissipators);
      op.tag = SuperTag::strong_B;
      break;
    case Part::weak:
      op.matrix = lindblad_matrix(model.weak.hamiltonian, model.weak.dissipators);
      op.tag = SuperTag::weak_C;
      break;
    case Part::total:
      op.matrix = model.gamma * lindblad_matrix(model.strong.hamiltonian, model.strong.dissipators) +
                  lindblad_matrix(model.weak.hamiltonian, model.weak.dissipators);
      op.tag = SuperTag::total;
      break;
  }
  return op;
}

std::vector<CMatrix> hermitian_basis(Index d) {
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<std::size_t>(d * d));
  basis.push_back(identity(d));
  const cplx i(0.0, 1.0);
  for (Index j = 0; j < d; ++j)
    for (Index k = j + 1; k < d; ++k) {
      CMatrix m = CMatrix::Zero(d, d);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      basis.push_back(m);
    }
  for (Index j = 0; j < d; ++j)
    for (Index k = j + 1; k < d; ++k) {
      CMatrix m = CMatrix::Zero(d, d);
      m(j, k) = -i;
      m(k, j) = i;
      basis.push_back(m);
    }
  for (Index l = 1; l < d; ++l) {
    CMatrix m = CMatrix::Zero(d, d);
    const double c = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (Index j = 0; j < l; ++j) m(j, j) = c;
    m(l, l) = -c * static_cast<double>(l);
    basis.push_back(m);
  }
  return basis;
}

CVector vectorize(const CMatrix& rho) {
  return Eigen::Map<const CVector>(rho.data(), rho.size());
}

CMatrix unvectorize(const CVector& v, Index d) {
  return Eigen::Map<const CMatrix>(v.data(), d, d);
}

CoherenceRep coherence_rep(const Superoperator& op) {
  const Index d = dim_of(op);
  const auto basis = hermitian_basis(d);
  const Index n = d * d;
  CMatrix vb(n, n);
  for (Index k = 0; k < n; ++k) vb.col(k) = vectorize(basis[static_cast<std::size_t>(k)]);
  // Rows of the dual basis: conj(tau_i) / tr(tau_i^2).
  CMatrix dual = vb.adjoint();
  dual.row(0) /= static_cast<double>(d);
  dual.bottomRows(n - 1) /= 2.0;
  const CMatrix m = dual * op.matrix * vb;
  CoherenceRep rep;
  rep.real_part = m.real();
  rep.hp_defect = m.size() ? m.imag().cwiseAbs().maxCoeff() : 0.0;
  return rep;
}

CheckResult check_tp(const Superoperator& op, double tol) {
  const Index d = dim_of(op);
  const CVector vid = vectorize(identity(d));
  const double defect = (vid.adjoint() * op.matrix).norm();
  return {defect <= tol, defect};
}

CheckResult check_hp(const Superoperator& op, double tol) {
  const double defect = coherence_rep(op).hp_defect;
  return {defect <= tol, defect};
}

namespace {

// Deterministic phase: first component above threshold made real positive.
void fix_phase(CVector& v) {
  const double thresh = 1e-10 * v.cwiseAbs().maxCoeff();
  for (Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > thresh) {
      v *= std::conj(v(k)) / std::abs(v(k));
      return;
    }
  }
}

}  // namespace

GKLSForm gkls_decompose(const Superoperator& op, double tol) {
  const Index d = dim_of(op);
  const Index n = d * d;
  if (op.matrix.rows() != n || op.matrix.cols() != n)
    throw std::invalid_argument("gkls_decompose: superoperator shape does not match dimension");
  const auto hp = check_hp(op, tol);
  const auto tp = check_tp(op, tol);
  if (!hp.pass || !tp.pass) {
    std::ostringstream msg;
    msg << "gkls_decompose: input must be HP and TP (HP defect " << hp.defect << ", TP defect "
        << tp.defect << ")";
    throw std::invalid_argument(msg.str());
  }

  // Orthonormal operator basis F_0 = 1/sqrt(d), F_k = tau_k / sqrt(2).
  auto basis = hermitian_basis(d);
  basis[0] /= std::sqrt(static_cast<double>(d));
  for (Index k = 1; k < n; ++k) basis[static_cast<std::size_t>(k)] /= std::sqrt(2.0);

  // Process matrix: op = sum_ij c_ij conj(F_j) kron F_i, so
  // c_ij = <conj(F_j) kron F_i, op>_HS. Evaluated without forming the Kronecker
  // products: tr((conj(F_j) kron F_i)^dag M) = sum over the d x d blocks of M.
  CMatrix c(n, n);
  for (Index i = 0; i < n; ++i) {
    const CMatrix& fi = basis[static_cast<std::size_t>(i)];
    // T_i(a, b) = sum_{p,q} conj(F_i(p, q)) M(p + a d, q + b d)
    CMatrix t(d, d);
    for (Index a = 0; a < d; ++a)
      for (Index b = 0; b < d; ++b)
        t(a, b) = (fi.conjugate().cwiseProduct(op.matrix.block(a * d, b * d, d, d))).sum();
    for (Index j = 0; j < n; ++j) c(i, j) = (basis[static_cast<std::size_t>(j)].cwiseProduct(t)).sum();
  }

  GKLSForm form;
  form.dim = d;
  CMatrix a = c.bottomRightCorner(n - 1, n - 1);
  a = 0.5 * (a + a.adjoint()).eval();
  form.kossakowski = a;

  CMatrix f = CMatrix::Zero(d, d);
  for (Index i = 1; i < n; ++i) f += c(i, 0) * basis[static_cast<std::size_t>(i)];
  f /= std::sqrt(static_cast<double>(d));
  const cplx iu(0.0, 1.0);
  CMatrix h = (f.adjoint() - f) / (2.0 * iu);
  h = 0.5 * (h + h.adjoint()).eval();
  h -= (h.trace() / static_cast<double>(d)) * identity(d);
  form.hamiltonian = h;

  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  const Index m = n - 1;
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return es.eigenvalues()(x) > es.eigenvalues()(y); });
  for (Index idx : order) {
    CVector u = es.eigenvectors().col(idx);
    fix_phase(u);
    CMatrix jump = CMatrix::Zero(d, d);
    for (Index k = 0; k < m; ++k) jump += u(k) * basis[static_cast<std::size_t>(k + 1)];
    form.rates.push_back(es.eigenvalues()(idx));
    form.jumps.push_back(jump);
  }
  form.verdicts.hp = hp.pass;
  form.verdicts.tp = tp.pass;
  form.verdicts.ccp = check_ccp(form, tol).pass;
  return form;
}

CcpResult check_ccp(const GKLSForm& form, double tol) {
  if (form.rates.empty()) return {true, 0.0};
  const double mn = *std::min_element(form.rates.begin(), form.rates.end());
  return {mn >= -tol, mn};
}

CMatrix reassemble(const GKLSForm& form) {
  std::vector<Dissipator> dis;
  dis.reserve(form.jumps.size());
  for (std::size_t k = 0; k < form.jumps.size(); ++k) {
    // lindblad_matrix skips zero rates; negative rates are legitimate here.
    dis.push_back({form.rates[k], form.jumps[k]});
  }
  return lindblad_matrix(form.hamiltonian, dis);
}

CMatrix shift_hamiltonian(const CMatrix& hamiltonian, Index ref) {
  return hamiltonian - hamiltonian(ref, ref) * identity(hamiltonian.rows());
}

}  // namespace adiabloch
