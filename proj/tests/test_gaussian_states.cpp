#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "akscan/akscan.hpp"
#include "test_util.hpp"

using namespace akscan;

TEST_CASE("system parameter validation and angle wrapping") {
  const SystemParams sp(0, 0, -pi / 2, 0);
  REQUIRE(std::abs(sp.theta - 3 * pi / 2) <= 1e-15L);
  REQUIRE(std::abs(SystemParams(0, 0, 5 * pi, 0).theta - pi) <= 1e-14L);
  REQUIRE(SystemParams(0, 0, 0.25L, 0).theta == 0.25L);

  const Real inf = std::numeric_limits<Real>::infinity();
  REQUIRE_THROWS_AS(SystemParams(inf, 0, 0, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(SystemParams(0, 0, 0, std::nanl("")),
                    std::invalid_argument);
}

TEST_CASE("pure single-mode state") {
  SECTION("axis-aligned squeezing") {
    const GaussianState st = pure_single_mode({1.5L, -0.5L, 0, 1});
    REQUIRE(std::abs(st.cov(0, 0) - std::exp(-2.0L)) <= 1e-17L);
    REQUIRE(std::abs(st.cov(1, 1) - std::exp(2.0L)) <= 1e-15L);
    REQUIRE(st.cov(0, 1) == 0);
    REQUIRE(std::abs(st.mean(0) - 1.5L * std::exp(-1.0L)) <= 1e-17L);
    REQUIRE(std::abs(st.mean(1) + 0.5L * std::exp(1.0L)) <= 1e-16L);
  }

  SECTION("rotated squeezing keeps det = 1 and the trace identity") {
    for (int trial = 0; trial < 10000; ++trial) {
      const SystemParams sp = testutil::random_params();
      const GaussianState st = pure_single_mode(sp);
      const Real det = st.cov(0, 0) * st.cov(1, 1) - st.cov(0, 1) * st.cov(1, 0);
      REQUIRE(std::abs(det - 1) <= 1e-10L);
      const Real trace = st.cov(0, 0) + st.cov(1, 1);
      REQUIRE(std::abs(trace - 2 * std::cosh(2 * sp.r)) <=
              1e-12L * (1 + trace));
    }
  }

  SECTION("covariance has period pi in theta") {
    for (int trial = 0; trial < 100; ++trial) {
      const SystemParams sp = testutil::random_params();
      const GaussianState a = pure_single_mode(sp);
      const GaussianState b =
          pure_single_mode({sp.q, sp.p, sp.theta + pi, sp.r});
      REQUIRE((a.cov.matrix() - b.cov.matrix()).cwiseAbs().maxCoeff() <=
              1e-12L * (1 + a.cov.matrix().cwiseAbs().maxCoeff()));
    }
  }

  SECTION("off-diagonal term at theta = pi/4") {
    const GaussianState st = pure_single_mode({0, 0, pi / 4, 1});
    REQUIRE(std::abs(st.cov(0, 1) - std::sinh(2.0L)) <= 1e-14L);
    REQUIRE(std::abs(st.cov(0, 0) - std::cosh(2.0L)) <= 1e-14L);
  }
}

TEST_CASE("squeezed detector mode") {
  const GaussianState det = squeezed_detector(3);
  REQUIRE(det.cov(0, 0) == 1.5L);
  REQUIRE(det.cov(1, 1) == 2.0L / 3);
  REQUIRE(det.mean.norm() == 0);

  // ratio 2 is the vacuum
  REQUIRE((squeezed_detector(2).cov.matrix() - Mat::Identity(2, 2)).norm() ==
          0);

  REQUIRE_THROWS_AS(squeezed_detector(0), std::invalid_argument);
  REQUIRE_THROWS_AS(squeezed_detector(-1), std::invalid_argument);
}

TEST_CASE("tensor product stacks means and covariance blocks") {
  const GaussianState a = pure_single_mode({1, 2, 0.3L, 0.7L});
  const GaussianState b = squeezed_detector(4);
  const GaussianState ab = tensor({a, b});
  REQUIRE(ab.modes() == 2);
  REQUIRE((ab.mean.segment(0, 2) - a.mean).norm() == 0);
  REQUIRE((ab.mean.segment(2, 2) - b.mean).norm() == 0);
  REQUIRE((ab.cov.matrix().block<2, 2>(0, 0) - a.cov.matrix()).norm() == 0);
  REQUIRE((ab.cov.matrix().block<2, 2>(2, 2) - b.cov.matrix()).norm() == 0);
  REQUIRE(ab.cov.matrix().block<2, 2>(0, 2).norm() == 0);
  REQUIRE_THROWS_AS(tensor({}), std::invalid_argument);
}

TEST_CASE("characteristic function") {
  const GaussianState vac(Vec::Zero(2), CovarianceMatrix(Mat::Identity(2, 2)));

  REQUIRE(characteristic(vac, Vec::Zero(2)) == Complex(1, 0));

  Vec xi(2);
  xi << 0.7L, -0.4L;
  REQUIRE(std::abs(std::abs(characteristic(vac, xi)) -
                   std::exp(-xi.squaredNorm() / 2)) <= 1e-17L);

  // displacement shows up as a linear phase
  Vec d(2);
  d << 1.25L, -2.0L;
  const GaussianState disp(d, CovarianceMatrix(Mat::Identity(2, 2)));
  const Complex chi = characteristic(disp, xi);
  const Real expected_phase = -(symplectic_form(1) * d).dot(xi);
  REQUIRE(std::abs(std::arg(chi) - expected_phase) <= 1e-15L);

  REQUIRE_THROWS_AS(characteristic(vac, Vec::Zero(4)), std::invalid_argument);
}

TEST_CASE("wigner function") {
  const GaussianState vac(Vec::Zero(2), CovarianceMatrix(Mat::Identity(2, 2)));
  REQUIRE(std::abs(wigner(vac, Vec::Zero(2)) - 1 / (2 * pi)) <= 1e-18L);

  SECTION("normalization by trapezoid quadrature") {
    const GaussianState st = pure_single_mode({0.5L, -0.25L, 0.6L, 0.8L});
    const int n = 161;
    const Real lo = -9, hi = 9, h = (hi - lo) / (n - 1);
    Real sum = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec pt(2);
        pt << lo + i * h, lo + j * h;
        const Real wgt = ((i == 0 || i == n - 1) ? 0.5L : 1.0L) *
                         ((j == 0 || j == n - 1) ? 0.5L : 1.0L);
        sum += wgt * wigner(st, pt);
      }
    REQUIRE(std::abs(sum * h * h - 1) <= 1e-3L);
  }

  SECTION("consistency with the characteristic function") {
    // W(R) = (2 pi)^{-2} Int chi(xi) exp(i (Omega R) . xi) d^2 xi
    const GaussianState st(Vec::Zero(2),
                           CovarianceMatrix(Mat::Identity(2, 2)));
    Vec R(2);
    R << 0.3L, -0.4L;
    const Vec oR = symplectic_form(1) * R;
    const int n = 161;
    const Real lo = -8, hi = 8, h = (hi - lo) / (n - 1);
    Complex sum = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec xi(2);
        xi << lo + i * h, lo + j * h;
        const Real wgt = ((i == 0 || i == n - 1) ? 0.5L : 1.0L) *
                         ((j == 0 || j == n - 1) ? 0.5L : 1.0L);
        sum += wgt * characteristic(st, xi) *
               std::exp(Complex(0, oR.dot(xi)));
      }
    const Real integral = (sum * h * h).real() / (4 * pi * pi);
    REQUIRE(std::abs(integral - wigner(st, R)) <= 1e-3L);
  }

  REQUIRE_THROWS_AS(wigner(vac, Vec::Zero(4)), std::invalid_argument);
}

TEST_CASE("purity") {
  const GaussianState vac(Vec::Zero(2), CovarianceMatrix(Mat::Identity(2, 2)));
  REQUIRE(purity(vac) == 1);

  const GaussianState thermal(Vec::Zero(2),
                              CovarianceMatrix(2 * Mat::Identity(2, 2)));
  REQUIRE(std::abs(purity(thermal) - 0.5L) <= 1e-18L);

  Mat m = Mat::Identity(4, 4);
  m(0, 0) = m(1, 1) = 3;
  const GaussianState mixed(Vec::Zero(4), CovarianceMatrix(m));
  REQUIRE(std::abs(purity(mixed) - 1.0L / 3) <= 1e-17L);

  // entries reach cosh(10), so the determinant carries ~1e-11 of rounding
  for (int trial = 0; trial < 200; ++trial) {
    const GaussianState st = pure_single_mode(testutil::random_params());
    REQUIRE(std::abs(purity(st) - 1) <= 1e-10L);
  }
}
