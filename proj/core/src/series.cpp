#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adiabloch/bloch.hpp"
#include "bloch_internal.hpp"

namespace adiabloch {

using detail::BlockOps;
using detail::block_ops;
using detail::neumann_left;
using detail::neumann_right;

CMatrix SeriesCoefficients::partial_sum(double gamma, int upto) const {
  if (coeffs.empty()) throw std::invalid_argument("partial_sum: empty series");
  const int last = upto < 0 ? static_cast<int>(coeffs.size()) - 1
                            : std::min(upto, static_cast<int>(coeffs.size()) - 1);
  CMatrix acc = CMatrix::Zero(coeffs[0].rows(), coeffs[0].cols());
  double scale = 1.0;
  for (int j = 0; j <= last; ++j) {
    acc += coeffs[j] * scale;
    scale /= gamma;
  }
  return acc;
}

namespace {

std::vector<CMatrix> omega_coefficients(const BlockOps& b, const CMatrix& c, int order) {
  std::vector<CMatrix> om;
  om.reserve(order + 1);
  om.push_back(neumann_right(b, c * b.p));
  for (int j = 1; j <= order; ++j) {
    CMatrix quad = CMatrix::Zero(c.rows(), c.cols());
    for (int i = 0; i < j; ++i) quad += om[j - i - 1] * om[i];
    om.push_back(neumann_right(b, CMatrix(-c * b.s * om[j - 1] + b.s * quad)));
  }
  return om;
}

void check_order(int order) {
  if (order < 0) throw std::invalid_argument("series order must be nonnegative");
}

// Truncated power series in 1/gamma with matrix coefficients.
using Series = std::vector<CMatrix>;

Series mul(const Series& a, const Series& b, int len) {
  Series out(len, CMatrix::Zero(a[0].rows(), a[0].cols()));
  for (int i = 0; i < len && i < static_cast<int>(a.size()); ++i) {
    for (int j = 0; i + j < len && j < static_cast<int>(b.size()); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// (P + Y)^alpha on the range of P, where Y has no terms below order 2.
Series block_power(const CMatrix& p, const Series& y, double alpha, int len) {
  Series out(len, CMatrix::Zero(p.rows(), p.cols()));
  out[0] = p;
  Series ym = y;
  double coef = 1.0;
  for (int m = 1; 2 * m < len; ++m) {
    coef *= (alpha - (m - 1)) / m;
    for (int k = 0; k < len; ++k) out[k] += coef * ym[k];
    ym = mul(ym, y, len);
  }
  return out;
}

CMatrix k_closed_form(const BlockOps& b, const CMatrix& c, int j) {
  const CMatrix& p = b.p;
  const CMatrix& s = b.s;
  auto rb = [&](const CMatrix& a) { return neumann_right(b, a); };
  auto lb = [&](const CMatrix& a) { return neumann_left(b, a); };
  const CMatrix rc = rb(c);
  const CMatrix lc = lb(c);
  const CMatrix s2 = s * s;
  switch (j) {
    case 0:
      return p * c * p;
    case 1:
      return -0.5 * (p * c * s * rc * p + p * lc * s * c * p);
    case 2:
      return 0.5 * (p * c * s * rb(CMatrix(c * s * rc)) * p + p * lb(CMatrix(lc * s * c)) * s * c * p) -
             0.5 * (p * c * s2 * rb(CMatrix(rc * p * c)) * p + p * lb(CMatrix(c * p * lc)) * s2 * c * p);
    case 3: {
      const CMatrix s3 = s2 * s;
      const CMatrix csrc = c * s * rc;
      const CMatrix lcsc = lc * s * c;
      const CMatrix rcpc = rc * p * c;
      const CMatrix cplc = c * p * lc;
      CMatrix k = -0.5 * (p * c * s * rb(CMatrix(c * s * rb(csrc))) * p +
                          p * lb(CMatrix(lb(lcsc) * s * c)) * s * c * p);
      k += 0.5 * (p * c * s * rb(CMatrix(c * s2 * rb(rcpc))) * p + p * lb(CMatrix(lb(cplc) * s2 * c)) * s * c * p);
      k += 0.5 * (p * c * s2 * rb(CMatrix(rc * p * csrc)) * p + p * lb(CMatrix(lcsc * p * lc)) * s2 * c * p);
      k += 0.5 * (p * c * s2 * rb(CMatrix(rb(csrc) * p * c)) * p + p * lb(CMatrix(c * p * lb(lcsc))) * s2 * c * p);
      k -= 0.5 * (p * c * s3 * rb(CMatrix(rb(rcpc) * p * c)) * p + p * lb(CMatrix(c * p * lb(cplc))) * s3 * c * p);
      const CMatrix m = lc * s2 * rc;
      k += -0.125 * (b.nil * m * p * m * p + p * m * p * m * b.nil) + 0.25 * (p * m * b.nil * m * p);
      return k;
    }
    default:
      throw std::invalid_argument("closed-form K is available up to order 3");
  }
}

}  // namespace

SeriesCoefficients perturbative_omega(const SpectralDecomposition& dec, const CMatrix& c, std::size_t l,
                                      int order) {
  check_order(order);
  SeriesCoefficients out;
  out.block = l;
  out.kind = SeriesKind::Omega_series;
  out.order = order;
  out.coeffs = omega_coefficients(block_ops(dec, l, false), c, order);
  return out;
}

SeriesCoefficients perturbative_omega_conjugate(const SpectralDecomposition& dec, const CMatrix& c,
                                                std::size_t l, int order) {
  check_order(order);
  SeriesCoefficients out;
  out.block = l;
  out.kind = SeriesKind::Omega_series;
  out.order = order;
  out.coeffs = omega_coefficients(block_ops(dec, l, true), c.transpose(), order);
  for (auto& m : out.coeffs) m.transposeInPlace();
  return out;
}

SeriesCoefficients perturbative_D(const SpectralDecomposition& dec, const CMatrix& c, std::size_t l,
                                  int order) {
  SeriesCoefficients out = perturbative_omega(dec, c, l, order);
  out.kind = SeriesKind::D_series;
  const CMatrix& p = dec.blocks.at(l).projection;
  for (auto& m : out.coeffs) m = p * m;
  return out;
}

SeriesCoefficients perturbative_K(const SpectralDecomposition& dec, const CMatrix& c, std::size_t l,
                                  int order, KSeriesMode mode) {
  check_order(order);
  SeriesCoefficients out;
  out.block = l;
  out.kind = SeriesKind::K_series;
  out.order = order;
  const BlockOps b = block_ops(dec, l, false);
  if (mode == KSeriesMode::closed_form) {
    for (int j = 0; j <= order; ++j) out.coeffs.push_back(k_closed_form(b, c, j));
    return out;
  }

  // K = M^{1/2} D M^{-1/2} + gamma (M^{1/2} N M^{-1/2} - N) with
  // M = U~ U = P + Omega~ S^2 Omega / gamma^2 on the block.
  const int len = order + 2;
  const Series om = perturbative_omega(dec, c, l, len).coeffs;
  const Series omt = perturbative_omega_conjugate(dec, c, l, len).coeffs;
  const CMatrix s2 = b.s * b.s;
  const Index n = c.rows();
  Series y(len, CMatrix::Zero(n, n));
  for (int k = 2; k < len; ++k) {
    for (int a = 0; a <= k - 2; ++a) y[k] += omt[a] * s2 * om[k - 2 - a];
  }
  const Series half = block_power(b.p, y, 0.5, len);
  const Series half_inv = block_power(b.p, y, -0.5, len);
  Series d(len);
  for (int k = 0; k < len; ++k) d[k] = b.p * om[k];
  const Series dk = mul(mul(half, d, len), half_inv, len);
  const Series nk = mul(mul(half, Series{b.nil}, len), half_inv, len);
  for (int j = 0; j <= order; ++j) out.coeffs.push_back(dk[j] + nk[j + 1]);
  return out;
}

}  // namespace adiabloch
