#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include "nam/special_functions.hpp"
#include "test_support.hpp"

using namespace nam;
using boost::multiprecision::cpp_bin_float_50;

TEST_SUITE("special_functions") {

TEST_CASE("digamma at one is minus the Euler-Mascheroni constant") {
  const double frozen = -0.5772156649015329;
  const auto oracle = boost::math::digamma(cpp_bin_float_50(1));
  CHECK(std::abs(static_cast<double>(oracle) - frozen) < 1e-16);
  CHECK(digamma(1.0) == doctest::Approx(frozen).epsilon(1e-15));
}

TEST_CASE("digamma identities") {
  CHECK(digamma(2.0) - digamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(digamma(0.5) - digamma(1.0) == doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("digamma matches a 50-digit oracle across its range") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logx(std::log(1e-6), std::log(1e6));
  for (int i = 0; i < 2000; ++i) {
    const double x = std::exp(logx(rng));
    const double oracle = static_cast<double>(boost::math::digamma(cpp_bin_float_50(x)));
    INFO("x = " << x);
    // Relative near the positive root of psi would be ill-posed.
    CHECK(std::abs(digamma(x) - oracle) < 1e-13 * std::max(1.0, std::abs(oracle)));
  }
}

TEST_CASE("digamma recurrence holds on random arguments") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unif(1e-3, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = unif(rng);
    CHECK(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-10);
  }
}

TEST_CASE("digamma runs in extended precision") {
  const cpp_bin_float_50 x("3.25");
  const cpp_bin_float_50 ours = digamma(x);
  const cpp_bin_float_50 oracle = boost::math::digamma(x);
  CHECK(static_cast<double>(abs(ours - oracle)) < 1e-12);
}

TEST_CASE("digamma rejects nonpositive arguments") {
  CHECK_THROWS_AS(digamma(0.0), DomainError);
  CHECK_THROWS_AS(digamma(-1.5), DomainError);
  CHECK_THROWS_AS(digamma(std::nan("")), DomainError);
}

TEST_CASE("expected log stick") {
  CHECK(expected_log_stick(1.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  const double oracle = static_cast<double>(boost::math::digamma(cpp_bin_float_50(2)) -
                                            boost::math::digamma(cpp_bin_float_50(5)));
  CHECK(testing::rel_diff(expected_log_stick(2.0, 3.0), oracle) < 1e-14);
  const double a = 0.7, b = 2.9;
  CHECK(expected_log_stick(a, b) + expected_log_stick(b, a) ==
        doctest::Approx(digamma(a) + digamma(b) - 2.0 * digamma(a + b)).epsilon(1e-14));
  CHECK_THROWS_AS(expected_log_stick(0.0, 1.0), DomainError);
}

TEST_CASE("SpdMatrix validation") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(SpdMatrix{asym}, DomainError);
  CHECK_THROWS_AS(SpdMatrix{Eigen::MatrixXd::Zero(2, 3)}, DomainError);
  CHECK_THROWS_AS(SpdMatrix{Eigen::MatrixXd(0, 0)}, DomainError);
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(SpdMatrix{indefinite}, NumericalFault);
  Eigen::MatrixXd nonfinite = Eigen::MatrixXd::Identity(2, 2);
  nonfinite(0, 0) = std::nan("");
  CHECK_THROWS_AS(SpdMatrix{nonfinite}, NumericalFault);
}

TEST_CASE("Cholesky round trip and quadratic form") {
  std::mt19937_64 rng(13);
  for (Index d = 1; d <= 8; ++d) {
    const Eigen::MatrixXd a = testing::random_spd_matrix(d, rng);
    const SpdMatrix m(a);
    const Eigen::MatrixXd l = m.lower();
    CHECK((l * l.transpose() - a).norm() / a.norm() < 1e-10);
    const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(d, -1.0, 2.0);
    CHECK(m.quadratic_form(v) == doctest::Approx(v.dot(a * v)).epsilon(1e-12));
  }
}

TEST_CASE("logdet_spd") {
  CHECK(logdet_spd(SpdMatrix::identity(5)) == doctest::Approx(0.0));
  CHECK(logdet_spd(SpdMatrix(2.0 * Eigen::MatrixXd::Identity(3, 3))) ==
        doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-14));
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + trial % 10;
    const Eigen::MatrixXd a = testing::random_spd_matrix(d, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    const double oracle = eig.eigenvalues().array().log().sum();
    CHECK(logdet_spd(SpdMatrix(a)) == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(std::abs(logdet_spd(SpdMatrix(a)) + logdet_spd(spd_inverse(SpdMatrix(a)))) < 1e-8);
  }
}

TEST_CASE("spd_inverse") {
  CHECK((spd_inverse(SpdMatrix::identity(3)).matrix() - Eigen::MatrixXd::Identity(3, 3)).norm() ==
        0.0);
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag.diagonal() << 2.0, 4.0;
  const Eigen::MatrixXd inv = spd_inverse(SpdMatrix(diag)).matrix();
  CHECK(inv(0, 0) == doctest::Approx(0.5));
  CHECK(inv(1, 1) == doctest::Approx(0.25));
  CHECK(inv(0, 1) == doctest::Approx(0.0));
  std::mt19937_64 rng(15);
  const Eigen::MatrixXd a = testing::random_spd_matrix(3, rng);
  const Eigen::MatrixXd residual = a * spd_inverse(SpdMatrix(a)).matrix() - Eigen::MatrixXd::Identity(3, 3);
  CHECK(residual.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("log_multigamma reduces to lgamma in dimension one") {
  for (double a : {0.7, 1.0, 3.5, 40.0}) {
    CHECK(log_multigamma(a, 1) == doctest::Approx(std::lgamma(a)).epsilon(1e-14));
  }
  // Gamma_2(a) = sqrt(pi) Gamma(a) Gamma(a - 1/2)
  const double a = 2.3;
  CHECK(log_multigamma(a, 2) ==
        doctest::Approx(0.5 * std::log(std::numbers::pi) + std::lgamma(a) + std::lgamma(a - 0.5))
            .epsilon(1e-14));
}

TEST_CASE("Wishart normalizer in dimension one is the chi-square normalizer") {
  // Wishart([s], df) is Gamma(df/2, scale 2s), whose density normalizer is
  // 1 / (Gamma(df/2) (2s)^(df/2)).
  for (double s : {1.0, 0.4, 3.0}) {
    for (double df : {1.0, 2.5, 9.0}) {
      const SpdMatrix scale(Eigen::MatrixXd::Constant(1, 1, s));
      const double oracle = -std::lgamma(df / 2.0) - df / 2.0 * std::log(2.0 * s);
      CHECK(wishart_log_norm(scale, df) == doctest::Approx(oracle).epsilon(1e-13));
    }
  }
  CHECK(std::isfinite(wishart_log_norm(SpdMatrix::identity(5), 10.0)));
  CHECK_THROWS_AS(wishart_log_norm(SpdMatrix::identity(3), 1.5), DomainError);
}

TEST_CASE("Wishart density integrates to one in dimension two") {
  // Quadrature over the Cholesky parametrization Lambda = L L^T with
  // Jacobian 4 l11^2 l22.
  Eigen::MatrixXd s(2, 2);
  s << 0.5, 0.1, 0.1, 0.3;
  const SpdMatrix scale(s);
  const double df = 5.0;
  const int n = 90;
  const double top = 3.2;
  const double h = top / n;
  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    const double l11 = (a + 0.5) * h;
    for (int b = 0; b < 2 * n; ++b) {
      const double l21 = -top + (b + 0.5) * h;
      for (int c = 0; c < n; ++c) {
        const double l22 = (c + 0.5) * h;
        Eigen::MatrixXd lam(2, 2);
        lam << l11 * l11, l11 * l21, l11 * l21, l21 * l21 + l22 * l22;
        total += std::exp(wishart_log_density(SpdMatrix(lam), scale, df)) * 4.0 * l11 * l11 * l22;
      }
    }
  }
  CHECK(total * h * h * h == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("Wishart expected log determinant") {
  // Dimension one: E[log Gamma(k, theta)] = psi(k) + log theta.
  const SpdMatrix scale(Eigen::MatrixXd::Constant(1, 1, 0.8));
  CHECK(wishart_expected_logdet(scale, 3.0) ==
        doctest::Approx(digamma(1.5) + std::log(1.6)).epsilon(1e-14));
}

TEST_CASE("Wishart entropy") {
  // Dimension one against the Gamma(k, theta) entropy
  // k + log theta + lgamma(k) + (1 - k) psi(k).
  for (double df : {1.0, 3.0, 12.0}) {
    const double s = 0.7;
    const SpdMatrix scale(Eigen::MatrixXd::Constant(1, 1, s));
    const double k = df / 2.0, theta = 2.0 * s;
    const double oracle = k + std::log(theta) + std::lgamma(k) + (1.0 - k) * digamma(k);
    const double h = wishart_entropy(scale, df, wishart_expected_logdet(scale, df));
    CHECK(h == doctest::Approx(oracle).epsilon(1e-13));
  }
  // Direct substitution into -log B - (c - d - 1)/2 l + c d / 2.
  const SpdMatrix id2 = SpdMatrix::identity(2);
  const double l = 0.25;
  CHECK(wishart_entropy(id2, 4.0, l) ==
        doctest::Approx(-wishart_log_norm(id2, 4.0) - 0.5 * (4.0 - 3.0) * l + 4.0).epsilon(1e-14));
  // At a fixed mean E[Lambda] = I, more diffuse as the degrees of freedom
  // fall toward the dimension. Below about dim + 1 the mass piles up near
  // singular matrices and the differential entropy turns down again.
  double previous = -1e300;
  for (double df = 12.0; df > 2.95; df -= 0.25) {
    const SpdMatrix scale(Eigen::MatrixXd::Identity(2, 2) / df);
    const double h = wishart_entropy(scale, df, wishart_expected_logdet(scale, df));
    CHECK(h > previous);
    previous = h;
  }
}

}  // TEST_SUITE
