#include "nam/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nam {

namespace {

constexpr int kMaxRedraws = 100;

// Draw from N(mean, (scale * Lambda)^-1) given the Cholesky factor of Lambda.
Eigen::VectorXd gaussian_with_precision(const Eigen::VectorXd& mean, const SpdMatrix& precision,
                                        double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(mean.size());
  for (Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  // L^T w = z gives Cov(w) = (L L^T)^-1.
  const Eigen::VectorXd w = precision.llt().matrixU().solve(z);
  return mean + w / std::sqrt(scale);
}

int draw_categorical(const Eigen::VectorXd& weights, std::mt19937_64& rng) {
  std::discrete_distribution<int> dist(weights.data(), weights.data() + weights.size());
  return dist(rng);
}

}  // namespace

void SimScenario::validate() const {
  if (J < 1 || n < 1 || p < 1 || q < 1) {
    throw DomainError("SimScenario: J, n, p and q must be positive");
  }
  if (K_true < 1 || L_true < 1) {
    throw DomainError("SimScenario: K_true and L_true must be at least 1");
  }
  if (omit_r < 0 || omit_r > q) {
    throw DomainError("SimScenario: omit_r must lie in [0, q]");
  }
  if ((alpha_sim && !(*alpha_sim > 0.0)) || (beta_sim && !(*beta_sim > 0.0))) {
    throw DomainError("SimScenario: concentrations must be positive");
  }
  if (kernel == Kernel::StudentT && !(df > 0.0)) {
    throw DomainError("SimScenario: Student-t degrees of freedom must be positive");
  }
}

SpdMatrix sample_wishart(const SpdMatrix& scale, double df, std::mt19937_64& rng) {
  const Index d = scale.dim();
  if (!(df > static_cast<double>(d) - 1.0)) {
    throw DomainError("sample_wishart: degrees of freedom must exceed dim - 1");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(d, d);
    for (Index i = 0; i < d; ++i) {
      std::chi_squared_distribution<double> chi2(df - static_cast<double>(i));
      bartlett(i, i) = std::sqrt(chi2(rng));
      for (Index j = 0; j < i; ++j) bartlett(i, j) = normal(rng);
    }
    const Eigen::MatrixXd factor = scale.lower() * bartlett;
    try {
      return SpdMatrix(factor * factor.transpose());
    } catch (const NumericalFault&) {
      // degenerate draw; retry
    }
  }
  throw NumericalFault("sample_wishart: no SPD draw after repeated attempts");
}

std::pair<Eigen::VectorXd, SpdMatrix> sample_normal_wishart(const Eigen::VectorXd& mu0,
                                                            double lambda0, double nu0,
                                                            const SpdMatrix& psi0,
                                                            std::mt19937_64& rng) {
  if (!(lambda0 > 0.0) || mu0.size() != psi0.dim()) {
    throw DomainError("sample_normal_wishart: invalid parameters");
  }
  SpdMatrix precision = sample_wishart(psi0, nu0, rng);
  Eigen::VectorXd mean = gaussian_with_precision(mu0, precision, lambda0, rng);
  return {std::move(mean), std::move(precision)};
}

Eigen::VectorXd sample_symmetric_dirichlet(Index size, double concentration,
                                           std::mt19937_64& rng) {
  if (size < 1 || !(concentration > 0.0)) {
    throw DomainError("sample_symmetric_dirichlet: invalid parameters");
  }
  std::gamma_distribution<double> gamma(concentration, 1.0);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Eigen::VectorXd w(size);
    for (Index i = 0; i < size; ++i) w(i) = gamma(rng);
    const double total = w.sum();
    if (total > 0.0) return w / total;
  }
  throw NumericalFault("sample_symmetric_dirichlet: all Gamma variates underflowed");
}

std::pair<NestedDataset, GroundTruth> simulate(const SimScenario& sc) {
  sc.validate();
  std::mt19937_64 rng(sc.seed);
  std::gamma_distribution<double> concentration_prior(25.0, 1.0);

  GroundTruth truth;
  truth.alpha = sc.alpha_sim ? *sc.alpha_sim : concentration_prior(rng);
  truth.beta = sc.beta_sim ? *sc.beta_sim : concentration_prior(rng);

  truth.pi = sample_symmetric_dirichlet(sc.K_true, truth.alpha / static_cast<double>(sc.K_true), rng);
  const SpdMatrix id_q = SpdMatrix::identity(sc.q);
  std::vector<SpdMatrix> prec_x;
  for (Index k = 0; k < sc.K_true; ++k) {
    auto [mu, lambda] = sample_normal_wishart(Eigen::VectorXd::Zero(sc.q), 0.05,
                                              static_cast<double>(sc.q) + 5.0, id_q, rng);
    truth.mu_x.push_back(mu);
    truth.lambda_x.push_back(lambda.matrix());
    prec_x.push_back(std::move(lambda));
  }
  truth.omega.resize(sc.L_true, sc.K_true);
  for (Index k = 0; k < sc.K_true; ++k) {
    truth.omega.col(k) =
        sample_symmetric_dirichlet(sc.L_true, truth.beta / static_cast<double>(sc.L_true), rng);
  }
  const SpdMatrix id_p = SpdMatrix::identity(sc.p);
  std::vector<SpdMatrix> prec_y;
  for (Index l = 0; l < sc.L_true; ++l) {
    auto [mu, lambda] = sample_normal_wishart(Eigen::VectorXd::Zero(sc.p), 0.05,
                                              5.0 + static_cast<double>(sc.p), id_p, rng);
    truth.mu_y.push_back(mu);
    truth.lambda_y.push_back(lambda.matrix());
    prec_y.push_back(std::move(lambda));
  }

  std::chi_squared_distribution<double> chi2(sc.kernel == Kernel::StudentT ? sc.df : 1.0);
  auto kernel_draw = [&](const Eigen::VectorXd& mean, const SpdMatrix& precision) {
    if (sc.kernel == Kernel::Gaussian) {
      return gaussian_with_precision(mean, precision, 1.0, rng);
    }
    const Eigen::VectorXd centered =
        gaussian_with_precision(Eigen::VectorXd::Zero(mean.size()), precision, 1.0, rng);
    return Eigen::VectorXd(mean + centered * std::sqrt(sc.df / chi2(rng)));
  };

  Eigen::MatrixXd x_full(sc.J, sc.q);
  std::vector<Eigen::MatrixXd> y_blocks;
  y_blocks.reserve(sc.J);
  for (Index j = 0; j < sc.J; ++j) {
    const int k = draw_categorical(truth.pi, rng);
    truth.s_true.push_back(k + 1);
    x_full.row(j) = kernel_draw(truth.mu_x[k], prec_x[k]).transpose();
    Eigen::MatrixXd block(sc.n, sc.p);
    std::vector<int> labels;
    labels.reserve(sc.n);
    const Eigen::VectorXd weights = truth.omega.col(k);
    for (Index i = 0; i < sc.n; ++i) {
      const int l = draw_categorical(weights, rng);
      labels.push_back(l + 1);
      block.row(i) = kernel_draw(truth.mu_y[l], prec_y[l]).transpose();
    }
    truth.m_true.push_back(std::move(labels));
    y_blocks.push_back(std::move(block));
  }

  std::vector<Index> columns(sc.q);
  std::iota(columns.begin(), columns.end(), Index{0});
  if (sc.omit_r > 0) {
    std::shuffle(columns.begin(), columns.end(), rng);
    columns.resize(sc.q - sc.omit_r);
    std::sort(columns.begin(), columns.end());
  }
  Eigen::MatrixXd x(sc.J, static_cast<Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) x.col(c) = x_full.col(columns[c]);
  truth.kept_x_columns = columns;

  return {NestedDataset::from_blocks(std::move(x), y_blocks), std::move(truth)};
}

}  // namespace nam
