#include <cmath>
#include <random>
#include <set>

#include <doctest.h>

#include "nam/simulation.hpp"
#include "test_support.hpp"

using namespace nam;

TEST_SUITE("simulation") {

TEST_CASE("shapes of the default scenario") {
  SimScenario sc;
  sc.J = 20;
  sc.n = 15;
  sc.p = 3;
  sc.q = 4;
  const auto [data, truth] = simulate(sc);
  CHECK(data.groups() == 20);
  CHECK(data.total_obs() == 300);
  CHECK(data.p() == 3);
  CHECK(data.q() == 4);
  CHECK(truth.s_true.size() == 20);
  CHECK(truth.m_true.size() == 20);
  CHECK(truth.m_true[7].size() == 15);
  CHECK(truth.pi.size() == 4);
  CHECK(truth.omega.rows() == 3);
  CHECK(truth.omega.cols() == 4);
  CHECK(truth.pi.sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((truth.omega.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-14);
  for (int s : truth.s_true) {
    CHECK(s >= 1);
    CHECK(s <= 4);
  }
  for (const auto& labels : truth.m_true) {
    for (int m : labels) {
      CHECK(m >= 1);
      CHECK(m <= 3);
    }
  }
  CHECK(truth.alpha > 0.0);
  CHECK(truth.beta > 0.0);
  CHECK(data.x.allFinite());
  CHECK(data.y.allFinite());
}

TEST_CASE("simulation is deterministic in its seed") {
  SimScenario sc;
  sc.J = 10;
  sc.n = 10;
  const auto a = simulate(sc);
  const auto b = simulate(sc);
  CHECK(a.first.x == b.first.x);
  CHECK(a.first.y == b.first.y);
  CHECK(a.second.m_true == b.second.m_true);
  sc.seed = 2;
  CHECK(simulate(sc).first.y != a.first.y);
}

TEST_CASE("fixed concentrations are used verbatim") {
  SimScenario sc;
  sc.J = 5;
  sc.n = 5;
  sc.alpha_sim = 3.5;
  sc.beta_sim = 0.25;
  const auto [data, truth] = simulate(sc);
  CHECK(truth.alpha == 3.5);
  CHECK(truth.beta == 0.25);
}

TEST_CASE("one true group cluster") {
  SimScenario sc;
  sc.J = 30;
  sc.n = 5;
  sc.K_true = 1;
  sc.L_true = 1;
  const auto [data, truth] = simulate(sc);
  for (int s : truth.s_true) CHECK(s == 1);
  for (const auto& labels : truth.m_true) {
    for (int m : labels) CHECK(m == 1);
  }
}

TEST_CASE("group labels follow the cluster weights") {
  SimScenario sc;
  sc.J = 20000;
  sc.n = 1;
  sc.p = 1;
  sc.q = 1;
  sc.K_true = 3;
  sc.L_true = 2;
  sc.seed = 5;
  const auto [data, truth] = simulate(sc);
  const double n = static_cast<double>(sc.J);
  for (int k = 1; k <= 3; ++k) {
    const double hits =
        static_cast<double>(std::count(truth.s_true.begin(), truth.s_true.end(), k));
    const double p = truth.pi(k - 1);
    const double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(hits / n - p) < 4.0 * se);
  }
}

TEST_CASE("Wishart draws have mean df times scale") {
  std::mt19937_64 rng(41);
  Eigen::MatrixXd psi(2, 2);
  psi << 0.8, 0.3, 0.3, 0.5;
  const SpdMatrix scale(psi);
  const double df = 6.0;
  const int draws = 20000;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(2, 2);
  for (int i = 0; i < draws; ++i) {
    const Eigen::MatrixXd w = sample_wishart(scale, df, rng).matrix();
    sum += w;
    sum_sq += w.cwiseProduct(w);
  }
  const Eigen::MatrixXd mean = sum / draws;
  const Eigen::MatrixXd var = sum_sq / draws - mean.cwiseProduct(mean);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      const double se = std::sqrt(var(i, j) / draws);
      CHECK(std::abs(mean(i, j) - df * psi(i, j)) < 3.0 * se);
      // Var(W_ij) = df (psi_ij^2 + psi_ii psi_jj)
      const double exact_var = df * (psi(i, j) * psi(i, j) + psi(i, i) * psi(j, j));
      CHECK(var(i, j) == doctest::Approx(exact_var).epsilon(0.05));
    }
  }
  CHECK_THROWS_AS(sample_wishart(scale, 0.5, rng), DomainError);
}

TEST_CASE("Normal-Wishart mean draws are centered with the right spread") {
  std::mt19937_64 rng(42);
  const Eigen::VectorXd mu0 = Eigen::Vector2d(1.0, -2.0);
  const int draws = 20000;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (int i = 0; i < draws; ++i) sum += sample_normal_wishart(mu0, 2.0, 6.0, SpdMatrix::identity(2), rng).first;
  // Marginal covariance of mu is (lambda (nu - d - 1))^-1 Psi^-1 = I / 6.
  const double se = std::sqrt(1.0 / 6.0 / draws);
  CHECK(std::abs(sum(0) / draws - 1.0) < 3.0 * se);
  CHECK(std::abs(sum(1) / draws + 2.0) < 3.0 * se);
}

TEST_CASE("symmetric Dirichlet draws") {
  std::mt19937_64 rng(43);
  const int draws = 20000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(4);
  for (int i = 0; i < draws; ++i) {
    const Eigen::VectorXd w = sample_symmetric_dirichlet(4, 0.5, rng);
    CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-14));
    sum += w;
  }
  // Var(w_i) = (1/4)(3/4) / (2 + 1)
  const double se = std::sqrt(0.25 * 0.75 / 3.0 / draws);
  for (Index i = 0; i < 4; ++i) CHECK(std::abs(sum(i) / draws - 0.25) < 3.0 * se);
  CHECK_THROWS_AS(sample_symmetric_dirichlet(0, 1.0, rng), DomainError);
}

TEST_CASE("omitting group-level coordinates") {
  SimScenario sc;
  sc.J = 8;
  sc.n = 3;
  sc.q = 5;
  sc.omit_r = 2;
  const auto [data, truth] = simulate(sc);
  CHECK(data.q() == 3);
  REQUIRE(truth.kept_x_columns.size() == 3);
  CHECK(std::is_sorted(truth.kept_x_columns.begin(), truth.kept_x_columns.end()));
  CHECK(std::set<Index>(truth.kept_x_columns.begin(), truth.kept_x_columns.end()).size() == 3);
}

TEST_CASE("Student-t kernel has heavier tails") {
  SimScenario sc;
  sc.J = 200;
  sc.n = 50;
  sc.p = 1;
  sc.q = 1;
  sc.K_true = 1;
  sc.L_true = 1;
  auto kurtosis = [](const Eigen::VectorXd& v) {
    const Eigen::ArrayXd c = v.array() - v.mean();
    const double m2 = c.square().mean();
    return c.pow(4).mean() / (m2 * m2);
  };
  const double gaussian = kurtosis(simulate(sc).first.y.col(0));
  sc.kernel = Kernel::StudentT;
  sc.df = 5.0;
  const double student = kurtosis(simulate(sc).first.y.col(0));
  CHECK(gaussian == doctest::Approx(3.0).epsilon(0.1));
  CHECK(student > 4.0);
}

TEST_CASE("invalid scenarios") {
  SimScenario sc;
  sc.J = 0;
  CHECK_THROWS_AS(simulate(sc), DomainError);
  sc = SimScenario{};
  sc.omit_r = 3;
  CHECK_THROWS_AS(simulate(sc), DomainError);
  sc = SimScenario{};
  sc.kernel = Kernel::StudentT;
  sc.df = 0.0;
  CHECK_THROWS_AS(simulate(sc), DomainError);
}

}  // TEST_SUITE
