#pragma once

// Symplectic phase-space primitives for N-mode Gaussian states in hbar = 2
// units (vacuum variance 1), quadrature ordering (x1, p1, ..., xN, pN).

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "akscan/types.hpp"

namespace akscan {

inline Mat symplectic_form(int n_modes) {
  if (n_modes < 1)
    throw std::invalid_argument("symplectic_form: n_modes must be >= 1");
  Mat omega = Mat::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1;
    omega(2 * k + 1, 2 * k) = -1;
  }
  return omega;
}

// Matrix of symmetrized second moments. Construction enforces shape and
// symmetry; physicality is a separate, tolerance-dependent question.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Mat m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 2 || m_.rows() % 2 != 0)
      throw std::invalid_argument(
          "CovarianceMatrix: need a 2N x 2N matrix with N >= 1");
    if ((m_ - m_.transpose()).norm() > 1e-12L * m_.norm())
      throw std::invalid_argument("CovarianceMatrix: matrix is not symmetric");
  }

  int modes() const { return static_cast<int>(m_.rows()) / 2; }
  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  Real operator()(int i, int j) const { return m_(i, j); }

 private:
  Mat m_;
};

// Symplectic eigenvalues, ascending. The moduli of the eigenvalues of
// i*Omega*sigma come in equal pairs; pairing_defect records the worst gap
// between the two members of a pair and should sit at rounding level.
struct SymplecticSpectrum {
  std::vector<Real> values;
  Real pairing_defect = 0;
};

inline SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& cm) {
  Eigen::LLT<Mat> llt(cm.matrix());
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(
        "symplectic_eigenvalues: matrix is not positive definite");
  const int n = cm.modes();
  const CMat iwm =
      Complex(0, 1) * (symplectic_form(n) * cm.matrix()).cast<Complex>();
  Eigen::ComplexEigenSolver<CMat> solver(iwm, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw numeric_error("symplectic_eigenvalues: eigensolver did not converge");

  std::vector<Real> mods(2 * n);
  for (int i = 0; i < 2 * n; ++i) mods[i] = std::abs(solver.eigenvalues()(i));
  // Sorting by modulus and collapsing adjacent entries is the greedy
  // nearest-modulus pairing: the +/- partners of one eigenvalue have equal
  // modulus up to rounding, so they end up next to each other.
  std::sort(mods.begin(), mods.end());
  SymplecticSpectrum spectrum;
  spectrum.values.resize(n);
  for (int j = 0; j < n; ++j) {
    spectrum.values[j] = (mods[2 * j] + mods[2 * j + 1]) / 2;
    spectrum.pairing_defect =
        std::max(spectrum.pairing_defect, mods[2 * j + 1] - mods[2 * j]);
  }
  return spectrum;
}

inline bool is_physical(const CovarianceMatrix& cm, Real tol = 1e-9L) {
  if (!(tol >= 0))
    throw std::invalid_argument("is_physical: tolerance must be >= 0");
  const SymplecticSpectrum spectrum = symplectic_eigenvalues(cm);
  return spectrum.values.front() >= 1 - tol;
}

namespace detail {

inline void check_mode_set(const CovarianceMatrix& cm,
                           const std::vector<int>& modes, const char* who) {
  std::vector<bool> seen(cm.modes(), false);
  for (int m : modes) {
    if (m < 0 || m >= cm.modes())
      throw std::invalid_argument(std::string(who) + ": mode index out of range");
    if (seen[m])
      throw std::invalid_argument(std::string(who) + ": duplicate mode index");
    seen[m] = true;
  }
}

}  // namespace detail

// Transposes the state on the given modes: flips the sign of their momentum
// rows and columns. Exact involution (sign flips only, no arithmetic).
inline CovarianceMatrix partial_transpose(const CovarianceMatrix& cm,
                                          const std::vector<int>& modes) {
  detail::check_mode_set(cm, modes, "partial_transpose");
  Mat m = cm.matrix();
  for (int mode : modes) {
    m.row(2 * mode + 1) *= -1;
    m.col(2 * mode + 1) *= -1;
  }
  return CovarianceMatrix(std::move(m));
}

// Reorders modes so that new block k holds old block order[k].
inline CovarianceMatrix permute_modes(const CovarianceMatrix& cm,
                                      const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != cm.modes())
    throw std::invalid_argument("permute_modes: order must list every mode once");
  detail::check_mode_set(cm, order, "permute_modes");
  const int d = cm.dim();
  std::vector<int> idx(d);
  for (int k = 0; k < cm.modes(); ++k) {
    idx[2 * k] = 2 * order[k];
    idx[2 * k + 1] = 2 * order[k] + 1;
  }
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cm(idx[i], idx[j]);
  return CovarianceMatrix(std::move(m));
}

// Principal submatrix on the kept modes, in the order given.
inline CovarianceMatrix reduce_modes(const CovarianceMatrix& cm,
                                     const std::vector<int>& keep) {
  if (keep.empty())
    throw std::invalid_argument("reduce_modes: must keep at least one mode");
  detail::check_mode_set(cm, keep, "reduce_modes");
  const int d = 2 * static_cast<int>(keep.size());
  std::vector<int> idx(d);
  for (size_t k = 0; k < keep.size(); ++k) {
    idx[2 * k] = 2 * keep[k];
    idx[2 * k + 1] = 2 * keep[k] + 1;
  }
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cm(idx[i], idx[j]);
  return CovarianceMatrix(std::move(m));
}

// Second symplectic invariant: the sum of the determinants of every 2x2
// mode block (off-diagonal pairs enter twice via their transposes). Equals
// N for a pure N-mode state.
inline Real quadratic_invariant(const CovarianceMatrix& cm) {
  const int n = cm.modes();
  Real sum = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      sum += cm.matrix().block<2, 2>(2 * i, 2 * j).determinant();
  return sum;
}

// One of the three one-vs-two splits of a three-mode state, labeled by the
// singled-out mode (1-based). bipartition_order puts the focus mode first
// and keeps the other two in cyclic order.
struct BipartitionId {
  int focus = 1;
};

inline std::array<int, 3> bipartition_order(BipartitionId id) {
  if (id.focus < 1 || id.focus > 3)
    throw std::invalid_argument("bipartition_order: focus must be 1, 2 or 3");
  const int f = id.focus - 1;
  return {f, (f + 1) % 3, (f + 2) % 3};
}

}  // namespace akscan
