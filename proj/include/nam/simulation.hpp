#ifndef NAM_SIMULATION_HPP
#define NAM_SIMULATION_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nam/model.hpp"

namespace nam {

enum class Kernel { Gaussian, StudentT };

struct SimScenario {
  Index J = 100;
  Index n = 100;  // observations per group
  Index p = 2;
  Index q = 2;
  Index K_true = 4;
  Index L_true = 3;
  // Fixed concentrations; when unset they are drawn from Gamma(25, 1).
  std::optional<double> alpha_sim;
  std::optional<double> beta_sim;
  Kernel kernel = Kernel::Gaussian;
  double df = 3.0;  // Student-t degrees of freedom
  Index omit_r = 0;  // group-level coordinates dropped after generation
  std::uint64_t seed = 1;

  void validate() const;
};

struct GroundTruth {
  std::vector<int> s_true;               // 1-based, J
  std::vector<std::vector<int>> m_true;  // 1-based, ragged
  double alpha = 0.0;
  double beta = 0.0;
  Eigen::VectorXd pi;              // K_true group-cluster weights
  Eigen::MatrixXd omega;           // L_true x K_true observation weights
  std::vector<Eigen::VectorXd> mu_x;
  std::vector<Eigen::MatrixXd> lambda_x;
  std::vector<Eigen::VectorXd> mu_y;
  std::vector<Eigen::MatrixXd> lambda_y;
  std::vector<Index> kept_x_columns;  // original indices of retained x coordinates
};

// (mean, precision) from NW(mu0, lambda0, nu0, Psi0): the precision by the
// Bartlett decomposition, the mean from N(mu0, (lambda0 Lambda)^-1).
std::pair<Eigen::VectorXd, SpdMatrix> sample_normal_wishart(const Eigen::VectorXd& mu0,
                                                            double lambda0, double nu0,
                                                            const SpdMatrix& psi0,
                                                            std::mt19937_64& rng);

// Wishart(scale, df) draw via the Bartlett decomposition.
SpdMatrix sample_wishart(const SpdMatrix& scale, double df, std::mt19937_64& rng);

// Symmetric Dirichlet(concentration) as normalized Gamma variates.
Eigen::VectorXd sample_symmetric_dirichlet(Index size, double concentration,
                                           std::mt19937_64& rng);

std::pair<NestedDataset, GroundTruth> simulate(const SimScenario& scenario);

}  // namespace nam

#endif  // NAM_SIMULATION_HPP
