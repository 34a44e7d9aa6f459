#include "adiabloch/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "adiabloch/errors.hpp"
#include "adiabloch/parallel.hpp"
#include "bloch_internal.hpp"

namespace adiabloch {

namespace detail {

BlockOps block_ops(const SpectralDecomposition& dec, std::size_t l, bool transpose) {
  const auto& blk = dec.blocks.at(l);
  BlockOps b;
  if (transpose) {
    b.p = blk.projection.transpose();
    b.s = blk.reduced_resolvent.transpose();
    b.nil = blk.nilpotent.transpose();
  } else {
    b.p = blk.projection;
    b.s = blk.reduced_resolvent;
    b.nil = blk.nilpotent;
  }
  b.index = blk.index;
  return b;
}

CMatrix neumann_right(const BlockOps& b, const CMatrix& a) {
  CMatrix term = a;
  CMatrix acc = a;
  for (Index k = 1; k < b.index; ++k) {
    term = b.s * term * b.nil;
    acc += term;
  }
  return acc;
}

CMatrix neumann_left(const BlockOps& b, const CMatrix& a) {
  CMatrix term = a;
  CMatrix acc = a;
  for (Index k = 1; k < b.index; ++k) {
    term = b.nil * term * b.s;
    acc += term;
  }
  return acc;
}

}  // namespace detail

using detail::BlockOps;
using detail::block_ops;

CMatrix bracket(const SpectralDecomposition& dec, std::size_t l, const CMatrix& a, Orientation orientation) {
  const BlockOps b = block_ops(dec, l, false);
  return orientation == Orientation::right ? detail::neumann_right(b, a) : detail::neumann_left(b, a);
}

std::string_view to_string(SolveMethod method) {
  return method == SolveMethod::newton ? "newton" : "fixed_point";
}

double BlochResiduals::max() const {
  return std::max({omega, omega_conjugate, u, ut, omega_constraint, omega_conjugate_constraint,
                   u_consistency, ut_consistency});
}

namespace {

enum class Equation { omega, u };

CMatrix omega_residual(const BlockOps& b, const CMatrix& c, double g, const CMatrix& om) {
  const CMatrix som = b.s * om;
  return som * om / g - om - c * som / g + som * b.nil + c * b.p;
}

CMatrix u_residual(const BlockOps& b, const CMatrix& c, double g, const CMatrix& u) {
  const CMatrix cu = c * u;
  return u - b.s * u * b.nil + b.s * (cu - u * cu) / g - b.p;
}

CMatrix residual(Equation eq, const BlockOps& b, const CMatrix& c, double g, const CMatrix& x) {
  return eq == Equation::omega ? omega_residual(b, c, g, x) : u_residual(b, c, g, x);
}

CMatrix fixed_point_map(Equation eq, const BlockOps& b, const CMatrix& c, double g, const CMatrix& x) {
  if (eq == Equation::omega) {
    const CMatrix sx = b.s * x;
    return c * b.p + sx * b.nil - c * sx / g + sx * x / g;
  }
  const CMatrix cx = c * x;
  return b.p + b.s * x * b.nil - b.s * (cx - x * cx) / g;
}

// P = V W with W V = 1 on the range.
struct RangeBasis {
  CMatrix v;
  CMatrix w;
};

RangeBasis range_basis(const CMatrix& p, Index rank) {
  Eigen::JacobiSVD<CMatrix> svd(p, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RangeBasis rb;
  rb.v = svd.matrixU().leftCols(rank) * svd.singularValues().head(rank).asDiagonal();
  rb.w = svd.matrixV().leftCols(rank).adjoint();
  return rb;
}

// Newton correction A = At W for X = X P, solving F'(X)[At W] V = -F(X) V.
CMatrix newton_step(Equation eq, const BlockOps& b, const CMatrix& c, double g, const CMatrix& x,
                    const CMatrix& fx, const RangeBasis& rb) {
  const Index n = b.p.rows();
  const Index r = rb.v.cols();
  const CMatrix id_n = identity(n);
  const CMatrix id_r = identity(r);
  const CMatrix nil_r = rb.w * b.nil * rb.v;
  CMatrix jac;
  if (eq == Equation::omega) {
    // -A - C S A / g + S A N + S (X A + A X) / g
    const CMatrix x_r = rb.w * x * rb.v;
    jac = Eigen::kroneckerProduct(id_r, CMatrix(-id_n - c * b.s / g + b.s * x / g)).eval();
    jac += Eigen::kroneckerProduct(nil_r.transpose(), b.s).eval();
    jac += Eigen::kroneckerProduct(x_r.transpose(), CMatrix(b.s / g)).eval();
  } else {
    // A - S A N + S (C A - X C A - A C X) / g
    const CMatrix cx_r = rb.w * c * x * rb.v;
    jac = Eigen::kroneckerProduct(id_r, CMatrix(id_n + b.s * c / g - b.s * x * c / g)).eval();
    jac -= Eigen::kroneckerProduct(nil_r.transpose(), b.s).eval();
    jac -= Eigen::kroneckerProduct(cx_r.transpose(), CMatrix(b.s / g)).eval();
  }
  const CMatrix rhs = -fx * rb.v;
  const CMatrix sol = solve_linear(jac, Eigen::Map<const CMatrix>(rhs.data(), rhs.size(), 1), 1e-15);
  const CMatrix at = Eigen::Map<const CMatrix>(sol.data(), n, r);
  return at * rb.w;
}

double ball_distance(Equation eq, const BlockOps& b, double g, const CMatrix& x, NormKind norm) {
  if (eq == Equation::omega) return op_norm(b.s * x, norm) / g;
  return op_norm(x - b.p, norm);
}

BlockSolve solve_generic(Equation eq, const BlockOps& b, const CMatrix& c, double g, Index rank,
                         const KantorovichReport& kr, const SolveOptions& opts) {
  if (!(g > 0.0)) throw std::invalid_argument("Bloch solver: gamma must be positive");
  BlockSolve out;
  auto& diag = out.diagnostics;
  diag.method = opts.method;
  diag.kantorovich_warning = !kr.solvable;
  const bool ball = opts.enforce_ball && kr.solvable && std::isfinite(kr.xi);
  const double scale = std::max(1.0, op_norm(c) * op_norm(b.p));
  const double target = opts.tol * scale;

  CMatrix x = eq == Equation::omega ? detail::neumann_right(b, c * b.p) : b.p;
  RangeBasis rb;
  if (opts.method == SolveMethod::newton) rb = range_basis(b.p, rank);
  const int max_iter = opts.method == SolveMethod::newton ? opts.max_iter : 50 * opts.max_iter;

  for (int it = 0;; ++it) {
    const CMatrix fx = residual(eq, b, c, g, x);
    const double res = op_norm(fx);
    diag.residual_history.push_back(res);
    diag.residual = res;
    diag.iterations = it;
    if (!std::isfinite(res) || res > 1e150) {
      throw ConvergenceError("Bloch solver diverged", res, it);
    }
    if (res <= target) break;
    if (it >= max_iter) {
      std::ostringstream msg;
      msg << "Bloch solver: no convergence after " << it << " iterations (residual " << res << ")";
      throw ConvergenceError(msg.str(), res, it);
    }
    if (opts.method == SolveMethod::newton) {
      x += newton_step(eq, b, c, g, x, fx, rb);
    } else {
      const CMatrix fx_map = fixed_point_map(eq, b, c, g, x);
      x = opts.relaxation == 1.0 ? fx_map : CMatrix((1.0 - opts.relaxation) * x + opts.relaxation * fx_map);
    }
    if (ball) {
      const double dist = ball_distance(eq, b, g, x, kr.norm);
      if (!(dist < kr.xi)) {
        std::ostringstream msg;
        msg << "Bloch solver: iterate left the uniqueness ball (distance " << dist << ", radius " << kr.xi
            << ")";
        throw BranchEscapeError(msg.str());
      }
    }
  }
  diag.certified = kr.solvable && opts.relaxation == 1.0;
  out.value = x;
  return out;
}

BlockSolve solve_dispatch(Equation eq, bool transpose, const SpectralDecomposition& dec, const CMatrix& c,
                          double gamma, std::size_t l, const SolveOptions& opts) {
  const BlockOps b = block_ops(dec, l, transpose);
  const KantorovichReport kr = kantorovich_report(dec, c, gamma, l, opts.norm);
  const CMatrix& cc = transpose ? CMatrix(c.transpose()) : c;
  BlockSolve out = solve_generic(eq, b, cc, gamma, dec.blocks.at(l).rank, kr, opts);
  if (transpose) out.value.transposeInPlace();
  return out;
}

}  // namespace

BlockSolve solve_omega(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                       const SolveOptions& opts) {
  return solve_dispatch(Equation::omega, false, dec, c, gamma, l, opts);
}

BlockSolve solve_omega_conjugate(const SpectralDecomposition& dec, const CMatrix& c, double gamma,
                                 std::size_t l, const SolveOptions& opts) {
  return solve_dispatch(Equation::omega, true, dec, c, gamma, l, opts);
}

BlockSolve solve_U(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                   const SolveOptions& opts) {
  return solve_dispatch(Equation::u, false, dec, c, gamma, l, opts);
}

BlockSolve solve_Ut(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                    const SolveOptions& opts) {
  return solve_dispatch(Equation::u, true, dec, c, gamma, l, opts);
}

CMatrix omega_equation(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                       const CMatrix& omega) {
  return omega_residual(block_ops(dec, l, false), c, gamma, omega);
}

CMatrix omega_conjugate_equation(const SpectralDecomposition& dec, const CMatrix& c, double gamma,
                                 std::size_t l, const CMatrix& omega_t) {
  const auto& blk = dec.blocks.at(l);
  const CMatrix& s = blk.reduced_resolvent;
  const CMatrix id = identity(dec.dim);
  return omega_t * omega_t * s / gamma - omega_t * (id + s * c / gamma) + blk.nilpotent * omega_t * s +
         blk.projection * c;
}

CMatrix u_equation(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                   const CMatrix& u) {
  return u_residual(block_ops(dec, l, false), c, gamma, u);
}

CMatrix ut_equation(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                    const CMatrix& ut) {
  const auto& blk = dec.blocks.at(l);
  const CMatrix& s = blk.reduced_resolvent;
  return ut - blk.nilpotent * ut * s + (ut * c - ut * c * ut) * s / gamma - blk.projection;
}

CMatrix omega_to_U(const SpectralDecomposition& dec, std::size_t l, const CMatrix& omega, double gamma) {
  const auto& blk = dec.blocks.at(l);
  return blk.projection - blk.reduced_resolvent * omega / gamma;
}

CMatrix U_to_omega(const SpectralDecomposition& dec, const CMatrix& c, std::size_t l, const CMatrix& u,
                   double gamma) {
  const auto& blk = dec.blocks.at(l);
  const CMatrix cu = c * u;
  return cu - (identity(dec.dim) - blk.projection) * u * (cu + gamma * blk.nilpotent);
}

CMatrix omega_conjugate_to_Ut(const SpectralDecomposition& dec, std::size_t l, const CMatrix& omega_t,
                              double gamma) {
  const auto& blk = dec.blocks.at(l);
  return blk.projection - omega_t * blk.reduced_resolvent / gamma;
}

CMatrix Ut_to_omega_conjugate(const SpectralDecomposition& dec, const CMatrix& c, std::size_t l,
                              const CMatrix& ut, double gamma) {
  const auto& blk = dec.blocks.at(l);
  const CMatrix utc = ut * c;
  return utc - (utc + gamma * blk.nilpotent) * ut * (identity(dec.dim) - blk.projection);
}

KantorovichReport kantorovich_report(const SpectralDecomposition& dec, const CMatrix& c, double gamma,
                                     std::size_t l, NormKind norm) {
  const auto& blk = dec.blocks.at(l);
  KantorovichReport kr;
  kr.block = l;
  kr.norm = norm;
  const double ns = op_norm(blk.reduced_resolvent, norm);
  const double nn = op_norm(blk.nilpotent, norm);
  const double nc = op_norm(c, norm);
  const double np = op_norm(blk.projection, norm);
  const double x = ns * nn;
  double mu = 0.0;
  double term = 1.0;
  for (Index k = 0; k < blk.index; ++k) {
    mu += term;
    term *= x;
  }
  kr.mu = mu;
  const double a = mu * ns * nc * np;
  kr.gamma_min = 4.0 * a;
  kr.lipschitz = 2.0 * ns * nc * np / gamma;
  const double denom = 1.0 - 2.0 * a / gamma;
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (!(denom > 0.0)) {
    kr.beta = kr.nu = kr.h = inf;
    kr.theta = kr.xi = inf;
    kr.solvable = kr.quadratic = false;
    return kr;
  }
  kr.beta = mu / denom;
  kr.nu = (a / gamma) / denom;
  kr.h = kr.beta * kr.lipschitz * kr.nu;
  kr.solvable = kr.h <= 0.5;
  kr.quadratic = kr.h < 0.5;
  if (!kr.solvable) {
    kr.theta = kr.xi = inf;
    return kr;
  }
  const double bl = kr.beta * kr.lipschitz;
  const double root = std::sqrt(std::max(0.0, 1.0 - 2.0 * kr.h));
  if (bl == 0.0) {
    kr.theta = 0.0;
    kr.xi = inf;
  } else {
    kr.theta = (1.0 - root) / bl;
    kr.xi = (1.0 + root) / bl;
  }
  return kr;
}

BlochSolution solve_block(const SpectralDecomposition& dec, const CMatrix& c, double gamma, std::size_t l,
                          const SolveOptions& opts) {
  BlochSolution sol;
  sol.block = l;
  sol.method = opts.method;
  sol.kantorovich = kantorovich_report(dec, c, gamma, l, opts.norm);
  const BlockSolve om = solve_omega(dec, c, gamma, l, opts);
  const BlockSolve omt = solve_omega_conjugate(dec, c, gamma, l, opts);
  sol.Omega = om.value;
  sol.OmegaT = omt.value;
  sol.U = omega_to_U(dec, l, sol.Omega, gamma);
  sol.Ut = omega_conjugate_to_Ut(dec, l, sol.OmegaT, gamma);
  sol.iterations = om.diagnostics.iterations + omt.diagnostics.iterations;
  sol.certified = om.diagnostics.certified && omt.diagnostics.certified;

  const BlockSolve ud = solve_U(dec, c, gamma, l, opts);
  const BlockSolve utd = solve_Ut(dec, c, gamma, l, opts);
  const CMatrix& p = dec.blocks[l].projection;
  const CMatrix q = identity(dec.dim) - p;
  auto& r = sol.residuals;
  r.omega = op_norm(omega_equation(dec, c, gamma, l, sol.Omega));
  r.omega_conjugate = op_norm(omega_conjugate_equation(dec, c, gamma, l, sol.OmegaT));
  r.u = op_norm(u_equation(dec, c, gamma, l, sol.U));
  r.ut = op_norm(ut_equation(dec, c, gamma, l, sol.Ut));
  r.omega_constraint = op_norm(sol.Omega * q);
  r.omega_conjugate_constraint = op_norm(q * sol.OmegaT);
  r.u_consistency = op_norm(ud.value - sol.U);
  r.ut_consistency = op_norm(utd.value - sol.Ut);
  return sol;
}

std::vector<BlochSolution> solve_all(const SpectralDecomposition& dec, const CMatrix& c, double gamma,
                                     const SolveOptions& opts) {
  std::vector<BlochSolution> out(dec.blocks.size());
  parallel_for(dec.blocks.size(), [&](std::size_t l) { out[l] = solve_block(dec, c, gamma, l, opts); });
  return out;
}

GSeriesResult sum_G_series(const SpectralDecomposition& dec, const CMatrix& c, const CMatrix& d_l,
                           double gamma, std::size_t l, int n_max, double tol) {
  const auto& blk = dec.blocks.at(l);
  const CMatrix& s = blk.reduced_resolvent;
  const CMatrix& nil = blk.nilpotent;
  GSeriesResult out;
  const double base = op_norm(s) * (op_norm(c) + op_norm(d_l) + op_norm(nil));
  out.threshold = std::max(1.0, std::pow(base, static_cast<double>(blk.index)));
  if (!(gamma > out.threshold)) {
    std::ostringstream msg;
    msg << "G series: gamma = " << gamma << " does not exceed the convergence threshold "
        << out.threshold;
    throw PreconditionError(msg.str());
  }
  CMatrix term = c - d_l;
  out.G = term;
  for (int j = 1; j <= n_max; ++j) {
    const CMatrix st = s * term;
    term = -(c * st - st * d_l - gamma * st * nil) / gamma;
    out.G += term;
    out.terms = j;
    out.last_increment = op_norm(term);
    if (out.last_increment <= tol * std::max(1.0, op_norm(out.G))) {
      out.converged = true;
      break;
    }
  }
  out.pgp_defect = op_norm(blk.projection * out.G * blk.projection);
  return out;
}

}  // namespace adiabloch
