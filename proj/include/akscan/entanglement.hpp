#pragma once

// Entanglement analysis of pure three-mode Gaussian states: PPT spectra,
// separability classification, and the Renyi-2 hierarchy driven by the
// three local symplectic invariants (a1, a2, a3).

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "akscan/phase_space.hpp"
#include "akscan/types.hpp"

namespace akscan {

// Local invariants a_k = sqrt(det sigma_k) of a pure three-mode state. They
// obey the triangle condition |a_j - a_k| + 1 <= a_i <= a_j + a_k - 1.
struct LocalInvariants {
  Real a1;
  Real a2;
  Real a3;

  std::array<Real, 3> as_array() const { return {a1, a2, a3}; }
};

inline void validate_invariants(const LocalInvariants& inv) {
  const std::array<Real, 3> a = inv.as_array();
  const Real tol = 1e-9L * std::max<Real>(1, a[0] + a[1] + a[2]);
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(a[i]) || a[i] < 1 - tol)
      throw std::domain_error("local invariants must satisfy a_k >= 1");
    const Real aj = a[(i + 1) % 3], ak = a[(i + 2) % 3];
    if (a[i] + tol < std::abs(aj - ak) + 1 || a[i] > aj + ak - 1 + tol)
      throw std::domain_error("local invariants violate the triangle condition");
  }
}

inline LocalInvariants local_invariants(const CovarianceMatrix& cm) {
  if (cm.modes() != 3)
    throw std::invalid_argument("local_invariants: need a three-mode state");
  auto a = [&](int k) {
    return std::sqrt(cm.matrix().block<2, 2>(2 * k, 2 * k).determinant());
  };
  return {a(0), a(1), a(2)};
}

// Invariants of the post-interaction state at unit couplings and optimal
// balance. X = dq3 * dp3 is evaluated as sqrt(1 + sin^2(2 theta)
// sinh^2(2 r)): algebraically identical to sqrt(cosh^2 - cos^2 sinh^2) but
// free of the cancellation that form suffers near theta = n pi / 2.
inline LocalInvariants closed_form_invariants(const SystemParams& sp) {
  const Real s2 = std::sin(2 * sp.theta);
  const Real sh = std::sinh(2 * sp.r);
  const Real x = std::sqrt(1 + s2 * s2 * sh * sh);
  const Real a = std::sqrt(2 + 2 * x);
  return {a, a, std::sqrt(5 + 4 * x)};
}

// Symplectic spectrum of the partial transpose on the focus mode, sorted
// descending: values[2] < 1 certifies entanglement across the split.
struct PptSpectrum {
  std::array<Real, 3> values;
  Real pairing_defect = 0;
};

inline PptSpectrum ppt_spectrum(const CovarianceMatrix& cm, BipartitionId id) {
  if (cm.modes() != 3)
    throw std::invalid_argument("ppt_spectrum: need a three-mode state");
  const auto order = bipartition_order(id);
  const CovarianceMatrix arranged =
      permute_modes(cm, {order[0], order[1], order[2]});
  const SymplecticSpectrum s =
      symplectic_eigenvalues(partial_transpose(arranged, {0}));
  return {{s.values[2], s.values[1], s.values[0]}, s.pairing_defect};
}

// Separability pattern across the three one-vs-two splits, labeled by how
// many of them are PPT.
enum class GiedkeLabel {
  fully_inseparable,   // no split separable
  one_separable,
  two_separable,
  fully_separable,     // all three splits PPT
};

inline const char* to_string(GiedkeLabel label) {
  switch (label) {
    case GiedkeLabel::fully_inseparable: return "C1";
    case GiedkeLabel::one_separable: return "C2";
    case GiedkeLabel::two_separable: return "C3";
    case GiedkeLabel::fully_separable: return "C4/C5";
  }
  throw std::invalid_argument("to_string: bad GiedkeLabel");
}

struct GiedkeClass {
  GiedkeLabel label;
  std::array<bool, 3> split_separable;  // indexed by focus - 1
};

inline GiedkeLabel giedke_label_from_count(int n_separable) {
  switch (n_separable) {
    case 0: return GiedkeLabel::fully_inseparable;
    case 1: return GiedkeLabel::one_separable;
    case 2: return GiedkeLabel::two_separable;
    case 3: return GiedkeLabel::fully_separable;
  }
  throw std::invalid_argument("giedke_label_from_count: count must be 0..3");
}

inline GiedkeClass classify(const CovarianceMatrix& cm, Real tol = 1e-9L) {
  if (!(tol >= 0))
    throw std::invalid_argument("classify: tolerance must be >= 0");
  if (!is_physical(cm, tol))
    throw std::invalid_argument("classify: covariance matrix is not physical");
  GiedkeClass out{};
  int count = 0;
  for (int f = 1; f <= 3; ++f) {
    const bool sep = ppt_spectrum(cm, {f}).values[2] >= 1 - tol;
    out.split_separable[f - 1] = sep;
    count += sep;
  }
  out.label = giedke_label_from_count(count);
  return out;
}

// Renyi-2 g-factor of the reduced two-mode state (a_i, a_j), third mode
// a_k. Three regimes, keyed by where a_k sits relative to
// sqrt(a_i^2 + a_j^2 - 1) and the threshold alpha_k below.
struct GFactor {
  Real value;
  int branch;  // 1, 2 or 3
};

inline const char* g_branch_name(int branch) {
  switch (branch) {
    case 1: return "unit";
    case 2: return "beta";
    case 3: return "ratio";
  }
  throw std::invalid_argument("g_branch_name: branch must be 1, 2 or 3");
}

inline GFactor g_factor(Real ai, Real aj, Real ak) {
  validate_invariants({ai, aj, ak});
  const Real ai2 = ai * ai, aj2 = aj * aj, ak2 = ak * ak;

  if (ak >= std::sqrt(ai2 + aj2 - 1)) return {1, 1};

  const Real s = ai2 + aj2, d = ai2 - aj2;
  const Real alpha =
      std::sqrt((2 * s + d * d + std::abs(d) * std::sqrt(d * d + 8 * s)) /
                (2 * s));
  if (ak > alpha) {
    // delta is a product of (a_i +- a_j +- a_k)^2 - 1 factors; it vanishes
    // on the triangle boundary, so tiny negative rounding is clamped.
    Real delta = 1;
    for (const Real s1 : {Real(1), Real(-1)})
      for (const Real s2 : {Real(1), Real(-1)}) {
        const Real t = ai + s1 * aj + s2 * ak;
        delta *= t * t - 1;
      }
    if (delta < 0) {
      if (delta < -1e-10L)
        throw std::domain_error("g_factor: discriminant negative beyond rounding");
      delta = 0;
    }
    const Real beta = 2 * (ai2 + aj2 + ak2) +
                      2 * (ai2 * aj2 + ai2 * ak2 + aj2 * ak2) - ai2 * ai2 -
                      aj2 * aj2 - ak2 * ak2 - std::sqrt(delta) - 1;
    return {beta / (8 * ak2), 2};
  }

  if (ak2 - 1 == 0) {
    // (a, a, 1) corner: the ratio expression is 0/0 and its continuous
    // limit equals a_i * a_j, which is also where the middle branch lands.
    if (std::abs(ai - aj) <= 1e-12L * std::max(ai, aj)) return {ai * aj, 2};
    throw std::domain_error("g_factor: ratio branch singular at a_k = 1");
  }
  const Real ratio = (ai2 - aj2) / (ak2 - 1);
  return {ratio * ratio, 3};
}

// Renyi-2 entanglement (nats) of the (i, j) reduction of the pure
// three-mode state; i, j are 1-based and distinct.
inline Real renyi2_reduced(const LocalInvariants& inv, int i, int j) {
  if (i < 1 || i > 3 || j < 1 || j > 3 || i == j)
    throw std::invalid_argument("renyi2_reduced: need distinct indices in 1..3");
  const std::array<Real, 3> a = inv.as_array();
  const int k = 6 - i - j;
  const GFactor g = g_factor(a[i - 1], a[j - 1], a[k - 1]);
  return std::max<Real>(0, std::log(g.value) / 2);
}

// Renyi-2 entanglement of the focus mode against the other two; equals
// log a_focus for a pure state.
inline Real renyi2_global(const LocalInvariants& inv, BipartitionId id) {
  validate_invariants(inv);
  return std::log(inv.as_array()[bipartition_order(id)[0]]);
}

inline Real residual_tripartite(const LocalInvariants& inv, BipartitionId id) {
  const auto order = bipartition_order(id);
  const int f = order[0] + 1, u = order[1] + 1, v = order[2] + 1;
  return renyi2_global(inv, id) - renyi2_reduced(inv, f, u) -
         renyi2_reduced(inv, f, v);
}

// residual_tripartite plus the monogamy assertion that it is nonnegative.
inline Real monogamy_residual(const LocalInvariants& inv, BipartitionId id) {
  const Real res = residual_tripartite(inv, id);
  if (res < -1e-10L)
    throw std::domain_error("monogamy_residual: negative residual");
  return res;
}

// Full hierarchy for one state. reduced[i][j] is the (i+1, j+1) pairwise
// entry; g_value[k] / g_branch[k] describe the pair that excludes mode k+1.
struct Renyi2Report {
  std::array<std::array<Real, 3>, 3> reduced{};
  std::array<Real, 3> global{};
  std::array<Real, 3> residual{};
  std::array<Real, 3> g_value{};
  std::array<int, 3> g_branch{};
};

inline Renyi2Report renyi2_report(const LocalInvariants& inv) {
  validate_invariants(inv);
  const std::array<Real, 3> a = inv.as_array();
  Renyi2Report rep;
  for (int k = 0; k < 3; ++k) {
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    const GFactor g = g_factor(a[i], a[j], a[k]);
    rep.g_value[k] = g.value;
    rep.g_branch[k] = g.branch;
    const Real e = std::max<Real>(0, std::log(g.value) / 2);
    rep.reduced[i][j] = rep.reduced[j][i] = e;
  }
  for (int f = 0; f < 3; ++f) {
    rep.global[f] = std::log(a[f]);
    rep.residual[f] = rep.global[f] - rep.reduced[f][(f + 1) % 3] -
                      rep.reduced[f][(f + 2) % 3];
  }
  return rep;
}

// Standard-form covariance of the pure three-mode state with the given
// invariants: diagonal blocks a_k I, off-diagonal blocks diag(b+, b-).
inline CovarianceMatrix standard_form(const LocalInvariants& inv) {
  validate_invariants(inv);
  const std::array<Real, 3> a = inv.as_array();
  Mat m = Mat::Zero(6, 6);
  for (int k = 0; k < 3; ++k) m(2 * k, 2 * k) = m(2 * k + 1, 2 * k + 1) = a[k];

  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const int k = 3 - i - j;
      // Both radicands vanish somewhere on the pure-state manifold; clamp
      // rounding-level negatives like the g-factor discriminant.
      auto radical = [&](Real u) {
        Real f = (u - (a[k] - 1) * (a[k] - 1)) * (u - (a[k] + 1) * (a[k] + 1));
        if (f < 0) {
          if (f < -1e-10L)
            throw std::domain_error("standard_form: radicand negative beyond rounding");
          f = 0;
        }
        return std::sqrt(f);
      };
      const Real dm = a[i] - a[j], dp = a[i] + a[j];
      const Real rm = radical(dm * dm), rp = radical(dp * dp);
      const Real denom = 4 * std::sqrt(a[i] * a[j]);
      m(2 * i, 2 * j) = m(2 * j, 2 * i) = (rm + rp) / denom;
      m(2 * i + 1, 2 * j + 1) = m(2 * j + 1, 2 * i + 1) = (rm - rp) / denom;
    }
  return CovarianceMatrix(std::move(m));
}

}  // namespace akscan
