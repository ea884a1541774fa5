#pragma once

// Gaussian state construction and phase-space function evaluation.

#include <cmath>
#include <utility>
#include <vector>

#include "akscan/phase_space.hpp"
#include "akscan/types.hpp"

namespace akscan {

// Pure single-mode preparation: displacement (q, p), squeezing r along an
// axis rotated by theta. theta is wrapped to [0, 2*pi).
struct SystemParams {
  Real q = 0;
  Real p = 0;
  Real theta = 0;
  Real r = 0;

  SystemParams() = default;
  SystemParams(Real q_, Real p_, Real theta_, Real r_)
      : q(q_), p(p_), theta(wrap_angle(theta_)), r(r_) {
    if (!std::isfinite(q) || !std::isfinite(p) || !std::isfinite(theta) ||
        !std::isfinite(r))
      throw std::invalid_argument("SystemParams: parameters must be finite");
  }

  static Real wrap_angle(Real t) {
    if (!std::isfinite(t))
      throw std::invalid_argument("SystemParams: theta must be finite");
    Real w = std::fmod(t, 2 * pi);
    if (w < 0) w += 2 * pi;
    return w;
  }
};

struct GaussianState {
  Vec mean;
  CovarianceMatrix cov;

  GaussianState(Vec mean_, CovarianceMatrix cov_)
      : mean(std::move(mean_)), cov(std::move(cov_)) {
    if (mean.size() != cov.dim())
      throw std::invalid_argument("GaussianState: mean/covariance size mismatch");
  }

  int modes() const { return cov.modes(); }
};

inline GaussianState pure_single_mode(const SystemParams& sp) {
  const Real c = std::cos(sp.theta), s = std::sin(sp.theta);
  const Real em = std::exp(-sp.r), ep = std::exp(sp.r);
  Vec mean(2);
  mean << sp.q * em * c + sp.p * ep * s, -sp.q * em * s + sp.p * ep * c;

  const Real ch = std::cosh(2 * sp.r), sh = std::sinh(2 * sp.r);
  const Real c2 = std::cos(2 * sp.theta), s2 = std::sin(2 * sp.theta);
  // Off-diagonal sin(2 theta) sinh(2 r) is what keeps det = 1 for every
  // (theta, r); the diagonal interpolates e^{-2r} <-> e^{2r}.
  Mat cov(2, 2);
  cov << ch - c2 * sh, s2 * sh, s2 * sh, ch + c2 * sh;
  return {std::move(mean), CovarianceMatrix(std::move(cov))};
}

// Single-mode detector squeezed by ratio v: variances (v/2, 2/v).
inline GaussianState squeezed_detector(Real v) {
  if (!(v > 0) || !std::isfinite(v))
    throw std::invalid_argument("squeezed_detector: ratio must be positive and finite");
  Mat cov(2, 2);
  cov << v / 2, 0, 0, 2 / v;
  return {Vec::Zero(2), CovarianceMatrix(std::move(cov))};
}

inline GaussianState tensor(const std::vector<GaussianState>& states) {
  if (states.empty())
    throw std::invalid_argument("tensor: need at least one state");
  int dim = 0;
  for (const auto& st : states) dim += st.cov.dim();
  Vec mean = Vec::Zero(dim);
  Mat cov = Mat::Zero(dim, dim);
  int off = 0;
  for (const auto& st : states) {
    const int d = st.cov.dim();
    mean.segment(off, d) = st.mean;
    cov.block(off, off, d, d) = st.cov.matrix();
    off += d;
  }
  return {std::move(mean), CovarianceMatrix(std::move(cov))};
}

// chi(xi) = exp(-1/2 xi^T Omega sigma Omega^T xi - i (Omega mean)^T xi)
inline Complex characteristic(const GaussianState& st, const Vec& xi) {
  if (xi.size() != st.cov.dim())
    throw std::invalid_argument("characteristic: argument dimension mismatch");
  const Mat omega = symplectic_form(st.modes());
  const Vec oxi = omega.transpose() * xi;
  const Real quad = oxi.dot(st.cov.matrix() * oxi);
  const Real phase = (omega * st.mean).dot(xi);
  return std::exp(Complex(-quad / 2, -phase));
}

inline Real wigner(const GaussianState& st, const Vec& point) {
  if (point.size() != st.cov.dim())
    throw std::invalid_argument("wigner: argument dimension mismatch");
  Eigen::LDLT<Mat> ldlt(st.cov.matrix());
  Real det = 1;
  for (int i = 0; i < st.cov.dim(); ++i) det *= ldlt.vectorD()(i);
  if (ldlt.info() != Eigen::Success || !(det > 0) || !std::isfinite(det))
    throw numeric_error("wigner: covariance matrix is singular");
  const Vec d = point - st.mean;
  const Real quad = d.dot(ldlt.solve(d));
  return std::exp(-quad / 2) /
         (std::pow(2 * pi, st.modes()) * std::sqrt(det));
}

inline Real purity(const GaussianState& st) {
  const Real det = st.cov.matrix().determinant();
  if (!(det > 0) || !std::isfinite(det))
    throw numeric_error("purity: covariance matrix is singular");
  return 1 / std::sqrt(det);
}

}  // namespace akscan
