#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "akscan/akscan.hpp"
#include "test_util.hpp"

using namespace akscan;

TEST_CASE("symplectic form") {
  const Mat w1 = symplectic_form(1);
  REQUIRE(w1(0, 0) == 0);
  REQUIRE(w1(0, 1) == 1);
  REQUIRE(w1(1, 0) == -1);
  REQUIRE(w1(1, 1) == 0);

  const Mat w3 = symplectic_form(3);
  REQUIRE(w3.rows() == 6);
  REQUIRE((w3 + w3.transpose()).norm() == 0);
  REQUIRE((w3 * w3 + Mat::Identity(6, 6)).norm() == 0);

  REQUIRE_THROWS_AS(symplectic_form(0), std::invalid_argument);
}

TEST_CASE("covariance matrix validation") {
  REQUIRE_NOTHROW(CovarianceMatrix(Mat::Identity(4, 4)));
  REQUIRE_THROWS_AS(CovarianceMatrix(Mat::Identity(3, 3)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(CovarianceMatrix(Mat::Identity(3, 4)),
                    std::invalid_argument);

  Mat skew = Mat::Identity(2, 2);
  skew(0, 1) = 0.25;
  REQUIRE_THROWS_AS(CovarianceMatrix(skew), std::invalid_argument);

  const CovarianceMatrix cm(Mat::Identity(6, 6));
  REQUIRE(cm.modes() == 3);
  REQUIRE(cm.dim() == 6);
}

TEST_CASE("symplectic eigenvalues of simple states") {
  const SymplecticSpectrum vac = symplectic_eigenvalues(
      CovarianceMatrix(Mat::Identity(6, 6)));
  REQUIRE(vac.values.size() == 3);
  for (const Real v : vac.values) REQUIRE(std::abs(v - 1) <= 1e-14L);
  REQUIRE(vac.pairing_defect <= 1e-12L);

  Mat thermal = Mat::Zero(4, 4);
  thermal.diagonal() << 5, 5, 3, 3;
  const SymplecticSpectrum th =
      symplectic_eigenvalues(CovarianceMatrix(thermal));
  REQUIRE(std::abs(th.values[0] - 3) <= 1e-14L);
  REQUIRE(std::abs(th.values[1] - 5) <= 1e-14L);

  Mat squeezed(2, 2);
  squeezed << std::exp(2.0L), 0, 0, std::exp(-2.0L);
  REQUIRE(std::abs(
              symplectic_eigenvalues(CovarianceMatrix(squeezed)).values[0] -
              1) <= 1e-14L);

  Mat indefinite = Mat::Identity(2, 2);
  indefinite(1, 1) = -1;
  REQUIRE_THROWS_AS(symplectic_eigenvalues(CovarianceMatrix(indefinite)),
                    std::invalid_argument);
}

TEST_CASE("symplectic spectrum is a congruence invariant") {
  for (int trial = 0; trial < 25; ++trial) {
    const Mat s = testutil::random_symplectic3();
    const Mat omega = symplectic_form(3);
    REQUIRE((s * omega * s.transpose() - omega).norm() <= 1e-14L * s.norm() *
                                                              s.norm());

    Mat thermal = Mat::Zero(6, 6);
    const Real n1 = testutil::uniform(1, 4);
    const Real n2 = testutil::uniform(1, 4);
    const Real n3 = testutil::uniform(1, 4);
    thermal.diagonal() << n1, n1, n2, n2, n3, n3;
    const SymplecticSpectrum spec = symplectic_eigenvalues(
        CovarianceMatrix(s * thermal * s.transpose()));

    std::vector<Real> expected{n1, n2, n3};
    std::sort(expected.begin(), expected.end());
    for (int k = 0; k < 3; ++k)
      REQUIRE(std::abs(spec.values[k] - expected[k]) <= 1e-10L);
    REQUIRE(spec.pairing_defect <= 1e-10L);
  }
}

TEST_CASE("physicality threshold") {
  REQUIRE(is_physical(CovarianceMatrix(Mat::Identity(2, 2))));
  REQUIRE_FALSE(is_physical(CovarianceMatrix(0.5L * Mat::Identity(2, 2))));
  REQUIRE(is_physical(CovarianceMatrix(0.5L * Mat::Identity(2, 2)), 0.6L));
  REQUIRE_THROWS_AS(is_physical(CovarianceMatrix(Mat::Identity(2, 2)), -1),
                    std::invalid_argument);
}

TEST_CASE("partial transpose") {
  const CovarianceMatrix tms(testutil::two_mode_squeezed_cov(1));
  REQUIRE(is_physical(tms));

  const CovarianceMatrix pt = partial_transpose(tms, {1});
  // momentum rows/columns of mode 1 change sign, the rest is untouched
  REQUIRE(pt(0, 2) == tms(0, 2));
  REQUIRE(pt(1, 3) == -tms(1, 3));
  REQUIRE(pt(3, 3) == tms(3, 3));

  // exact involution: sign flips only, no arithmetic
  const CovarianceMatrix back = partial_transpose(pt, {1});
  REQUIRE((back.matrix() - tms.matrix()).norm() == 0);

  // the transposed two-mode squeezed state is unphysical, and its spectrum
  // carries the squeezing factors
  REQUIRE_FALSE(is_physical(pt));
  const SymplecticSpectrum spec = symplectic_eigenvalues(pt);
  REQUIRE(std::abs(spec.values[0] - std::exp(-2.0L)) <= 1e-13L);
  REQUIRE(std::abs(spec.values[1] - std::exp(2.0L)) <= 1e-13L);

  REQUIRE_THROWS_AS(partial_transpose(tms, {2}), std::invalid_argument);
  REQUIRE_THROWS_AS(partial_transpose(tms, {0, 0}), std::invalid_argument);
}

TEST_CASE("mode permutation and reduction") {
  Mat labeled(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) labeled(i, j) = 10.0L * (i + 1) + (j + 1);
  labeled = ((labeled + labeled.transpose()) / 2).eval();
  const CovarianceMatrix cm(labeled);

  const CovarianceMatrix perm = permute_modes(cm, {1, 2, 0});
  for (int bi = 0; bi < 3; ++bi)
    for (int bj = 0; bj < 3; ++bj) {
      const std::array<int, 3> src{1, 2, 0};
      REQUIRE((perm.matrix().block<2, 2>(2 * bi, 2 * bj) -
               cm.matrix().block<2, 2>(2 * src[bi], 2 * src[bj]))
                  .norm() == 0);
    }

  // cycling three times returns the original, exactly
  const CovarianceMatrix thrice =
      permute_modes(permute_modes(perm, {1, 2, 0}), {1, 2, 0});
  REQUIRE((thrice.matrix() - cm.matrix()).norm() == 0);

  const CovarianceMatrix kept = reduce_modes(cm, {2, 0});
  REQUIRE(kept.modes() == 2);
  REQUIRE((kept.matrix().block<2, 2>(0, 0) -
           cm.matrix().block<2, 2>(4, 4)).norm() == 0);
  REQUIRE((kept.matrix().block<2, 2>(0, 2) -
           cm.matrix().block<2, 2>(4, 0)).norm() == 0);

  const CovarianceMatrix all = reduce_modes(cm, {0, 1, 2});
  REQUIRE((all.matrix() - cm.matrix()).norm() == 0);

  REQUIRE_THROWS_AS(permute_modes(cm, {0, 1}), std::invalid_argument);
  REQUIRE_THROWS_AS(permute_modes(cm, {0, 1, 1}), std::invalid_argument);
  REQUIRE_THROWS_AS(permute_modes(cm, {0, 1, 3}), std::invalid_argument);
  REQUIRE_THROWS_AS(reduce_modes(cm, {}), std::invalid_argument);
  REQUIRE_THROWS_AS(reduce_modes(cm, {3}), std::invalid_argument);
}

TEST_CASE("quadratic invariant") {
  REQUIRE(quadratic_invariant(CovarianceMatrix(Mat::Identity(6, 6))) == 3);

  // pure two-mode squeezed state plus a vacuum mode: still pure, invariant 3
  Mat m = Mat::Identity(6, 6);
  m.block<4, 4>(0, 0) = testutil::two_mode_squeezed_cov(1.3L);
  const CovarianceMatrix cm(m);
  REQUIRE(std::abs(quadratic_invariant(cm) - 3) <= 1e-15L);

  // permutation invariance
  const Real base = quadratic_invariant(cm);
  REQUIRE(std::abs(quadratic_invariant(permute_modes(cm, {2, 0, 1})) - base) <=
          1e-15L);
}

TEST_CASE("bipartition ordering") {
  REQUIRE(bipartition_order({1}) == std::array<int, 3>{0, 1, 2});
  REQUIRE(bipartition_order({2}) == std::array<int, 3>{1, 2, 0});
  REQUIRE(bipartition_order({3}) == std::array<int, 3>{2, 0, 1});
  REQUIRE_THROWS_AS(bipartition_order({0}), std::invalid_argument);
  REQUIRE_THROWS_AS(bipartition_order({4}), std::invalid_argument);
}
