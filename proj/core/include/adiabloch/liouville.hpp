#pragma once

#include <vector>

#include "adiabloch/matcore.hpp"

namespace adiabloch {

struct Dissipator {
  double rate = 0.0;
  CMatrix jump;
};

// One half of a model: Hamiltonian plus weighted jump operators.
struct GeneratorPart {
  CMatrix hamiltonian;
  std::vector<Dissipator> dissipators;
};

struct LindbladModel {
  Index dim = 0;
  GeneratorPart strong;
  GeneratorPart weak;
  double gamma = 1.0;

  // Throws std::invalid_argument on shape, Hermiticity or rate violations.
  void validate(double herm_tol = 1e-12) const;
};

enum class Part { strong, weak, total };

enum class SuperTag { strong_B, weak_C, total, effective_D, effective_Dt, effective_K, custom };

// Column-stacking convention: vec(A rho B) = (B^T kron A) vec(rho).
struct Superoperator {
  Index dim = 0;
  CMatrix matrix;
  SuperTag tag = SuperTag::custom;
};

// -i[H, .] + sum_i rate_i (L_i . L_i^dag - 1/2 {L_i^dag L_i, .}).
CMatrix lindblad_matrix(const CMatrix& hamiltonian, const std::vector<Dissipator>& dissipators);

Superoperator build_superop(const LindbladModel& model, Part part);

// Identity followed by generalized Gell-Mann matrices (symmetric,
// antisymmetric, diagonal), normalized so tr(tau_i tau_j) = 2 delta_ij.
std::vector<CMatrix> hermitian_basis(Index d);

struct CoherenceRep {
  RMatrix real_part;
  double hp_defect = 0.0;  // max |Im| over all elements
};

CoherenceRep coherence_rep(const Superoperator& op);

struct CheckResult {
  bool pass = false;
  double defect = 0.0;
};

CheckResult check_tp(const Superoperator& op, double tol);
CheckResult check_hp(const Superoperator& op, double tol);

struct GKLSVerdicts {
  bool hp = false;
  bool tp = false;
  bool ccp = false;
};

struct GKLSForm {
  Index dim = 0;
  CMatrix hamiltonian;      // traceless
  CMatrix kossakowski;      // in the orthonormal traceless basis tau_i / sqrt(2)
  std::vector<double> rates;  // descending; rates for unit Hilbert-Schmidt norm jumps
  std::vector<CMatrix> jumps;
  GKLSVerdicts verdicts;
};

// Throws std::invalid_argument if the input is not HP and TP within tol.
GKLSForm gkls_decompose(const Superoperator& op, double tol = 1e-9);

struct CcpResult {
  bool pass = false;
  double min_rate = 0.0;
};

CcpResult check_ccp(const GKLSForm& form, double tol);

// Superoperator matrix rebuilt from a GKLS form.
CMatrix reassemble(const GKLSForm& form);

// H - H(ref, ref) * 1, the gauge where the reference level has zero energy.
CMatrix shift_hamiltonian(const CMatrix& hamiltonian, Index ref);

// Flattened index of rho(i, j) under column stacking.
inline Index vec_index(Index i, Index j, Index d) { return i + j * d; }

CVector vectorize(const CMatrix& rho);
CMatrix unvectorize(const CVector& v, Index d);

}  // namespace adiabloch
