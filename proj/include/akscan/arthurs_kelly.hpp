#pragma once

// Simultaneous position/momentum measurement model: two detector modes
// coupled to one system mode through a symplectic interaction, with an
// optional squeezing-balance override for the detector pair.

#include <cmath>
#include <optional>
#include <utility>

#include "akscan/gaussian_states.hpp"
#include "akscan/phase_space.hpp"
#include "akscan/types.hpp"

namespace akscan {

struct MeasurementConfig {
  SystemParams system;
  Real alpha1 = 1;
  Real alpha2 = 1;
  // Detector squeezing ratio; nullopt selects the product-minimizing value.
  std::optional<Real> balance;
};

// Balance minimizing the added-noise product: sqrt(dq^2 / dp^2) of the
// system mode.
inline Real optimal_balance(const SystemParams& sp) {
  const Real ch = std::cosh(2 * sp.r);
  const Real cs = std::cos(2 * sp.theta) * std::sinh(2 * sp.r);
  return std::sqrt((ch - cs) / (ch + cs));
}

// Heisenberg-picture map on (x1, p1, x2, p2, x3, p3): detector 1 reads the
// system position, detector 2 the momentum, with the cross-coupling the
// simultaneous readout forces.
inline Mat ak_symplectic(Real alpha1, Real alpha2) {
  if (!std::isfinite(alpha1) || !std::isfinite(alpha2))
    throw std::invalid_argument("ak_symplectic: couplings must be finite");
  const Real c = alpha1 * alpha2 / 2;
  Mat s = Mat::Identity(6, 6);
  s(0, 3) = c;
  s(0, 4) = alpha1;
  s(2, 1) = -c;
  s(2, 5) = alpha2;
  s(4, 3) = alpha2;
  s(5, 1) = -alpha1;
  return s;
}

// Post-interaction three-mode state (detector 1, detector 2, system).
inline GaussianState evolve(const MeasurementConfig& cfg) {
  const Real b = cfg.balance ? *cfg.balance : optimal_balance(cfg.system);
  if (!(b > 0) || !std::isfinite(b))
    throw std::invalid_argument("evolve: balance must be positive and finite");
  const GaussianState initial = tensor({squeezed_detector(b),
                                        squeezed_detector(1 / b),
                                        pure_single_mode(cfg.system)});
  const Mat s = ak_symplectic(cfg.alpha1, cfg.alpha2);
  Vec mean = s * initial.mean;
  Mat cov = s * initial.cov.matrix() * s.transpose();
  return {std::move(mean), CovarianceMatrix(std::move(cov))};
}

// Covariance with the focus mode moved to the front (see bipartition_order).
inline CovarianceMatrix bipartition_cm(const GaussianState& st,
                                       BipartitionId id) {
  if (st.modes() != 3)
    throw std::invalid_argument("bipartition_cm: need a three-mode state");
  const auto order = bipartition_order(id);
  return permute_modes(st.cov, {order[0], order[1], order[2]});
}

// Closed-form post-interaction covariance at unit couplings and optimal
// balance. Written block by block, independently of evolve(), so the two
// construction routes can cross-check each other.
inline CovarianceMatrix closed_form_cm(const SystemParams& sp) {
  const Real ch = std::cosh(2 * sp.r), sh = std::sinh(2 * sp.r);
  const Real c2 = std::cos(2 * sp.theta), s2 = std::sin(2 * sp.theta);
  const Real dq3 = ch - c2 * sh;
  const Real dp3 = ch + c2 * sh;
  const Real cov3 = s2 * sh;
  const Real b = std::sqrt(dq3 / dp3);
  const Real dq1 = b / 2, dp1 = 2 / b;
  const Real dq2 = 1 / (2 * b), dp2 = 2 * b;

  Mat m = Mat::Zero(6, 6);
  m(0, 0) = dq1 + dp2 / 4 + dq3;
  m(1, 1) = dp1;
  m(2, 2) = dq2 + dp1 / 4 + dp3;
  m(3, 3) = dp2;
  m(4, 4) = dp2 + dq3;
  m(5, 5) = dp1 + dp3;
  m(4, 5) = cov3;

  m(0, 2) = cov3;
  m(0, 3) = dp2 / 2;
  m(1, 2) = -dp1 / 2;

  m(0, 4) = dp2 / 2 + dq3;
  m(0, 5) = cov3;
  m(1, 5) = -dp1;

  m(2, 4) = cov3;
  m(2, 5) = dp1 / 2 + dp3;
  m(3, 4) = dp2;

  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) m(j, i) = m(i, j);
  return CovarianceMatrix(std::move(m));
}

// Added-noise split of the readout variances at unit couplings and optimal
// balance: dx1'^2 = eta1 + dq3^2-term, dx2'^2 = eta2 + dp3^2-term, where
// eta1 * eta2 = 1 is the detector contribution.
struct NoiseDecomposition {
  Real dx1p_sq;
  Real dx2p_sq;
  Real eta1;
  Real eta2;
};

inline NoiseDecomposition noise_decomposition(const SystemParams& sp) {
  const Real ch = std::cosh(2 * sp.r);
  const Real cs = std::cos(2 * sp.theta) * std::sinh(2 * sp.r);
  const Real dq3 = ch - cs, dp3 = ch + cs;
  const Real b = std::sqrt(dq3 / dp3);
  NoiseDecomposition nd{dq3 + b, dp3 + 1 / b, b, 1 / b};

  const Mat cov = evolve(MeasurementConfig{sp}).cov.matrix();
  const Real scale = std::max<Real>(1, std::max(nd.dx1p_sq, nd.dx2p_sq));
  if (std::abs(cov(0, 0) - nd.dx1p_sq) > 1e-12L * scale ||
      std::abs(cov(2, 2) - nd.dx2p_sq) > 1e-12L * scale)
    throw numeric_error(
        "noise_decomposition: closed-form terms disagree with the evolved covariance");
  return nd;
}

}  // namespace akscan
