#ifndef NAM_CAVI_HPP
#define NAM_CAVI_HPP

#include <cstdint>
#include <random>

#include "nam/model.hpp"

namespace nam {

enum class InitStrategy {
  // rho and xi rows ~ Dirichlet(1); the global factors are then derived
  // from them by one pass of the stick, Normal-Wishart and Gamma updates.
  RandomResponsibility,
  // rho and xi rows ~ Dirichlet(1); sticks at (1, prior concentration mean);
  // Normal-Wishart factors at the prior with their means jittered by one
  // empirical standard deviation of the data.
  PerturbedPrior,
};

struct CaviConfig {
  double tol = 1e-5;
  int max_iter = 10000;
  std::uint64_t seed = 0;
  InitStrategy init = InitStrategy::PerturbedPrior;
  // Converge on |delta| / |ELBO| instead of the absolute difference.
  bool relative_tol = false;
  // Debug mode: evaluate the ELBO after each of the eight updates and keep
  // the values in FitResult::step_elbos.
  bool per_step_elbo = false;

  void validate() const;
};

// Individual ELBO contributions. `log_p_*` are the expected log-joint terms,
// `log_q_*` the expected log variational densities (negated entropies).
struct ElboTerms {
  double log_p_y = 0.0;        // observation likelihood
  double log_p_x = 0.0;        // group-level likelihood (NAM only)
  double log_p_m = 0.0;        // observation assignments given S, u
  double log_p_s = 0.0;        // group assignments given v
  double log_p_v = 0.0;        // group sticks given alpha
  double log_p_u = 0.0;        // observation sticks given beta
  double log_p_alpha = 0.0;
  double log_p_beta = 0.0;
  double log_p_nw_y = 0.0;     // Normal-Wishart prior, observation level
  double log_p_nw_x = 0.0;     // Normal-Wishart prior, group level (NAM only)
  double log_q_s = 0.0;
  double log_q_m = 0.0;
  double log_q_v = 0.0;
  double log_q_u = 0.0;
  double log_q_nw_x = 0.0;     // NAM only
  double log_q_nw_y = 0.0;
  double log_q_alpha = 0.0;
  double log_q_beta = 0.0;

  double total() const;
};

VariationalState initialize_state(const NestedDataset& data, const Hyperparameters& hyper,
                                  InitStrategy init, std::mt19937_64& rng);

// The eight coordinate updates, in the order they run within a sweep.
void update_group_assignments(VariationalState& state, const NestedDataset& data,
                              const Hyperparameters& hyper);
void update_obs_assignments(VariationalState& state, const NestedDataset& data,
                            const Hyperparameters& hyper);
void update_obs_sticks(VariationalState& state, const Hyperparameters& hyper);
void update_group_sticks(VariationalState& state, const Hyperparameters& hyper);
// No-op under the CAM variant.
void update_nw_x(VariationalState& state, const NestedDataset& data,
                 const Hyperparameters& hyper);
void update_nw_y(VariationalState& state, const NestedDataset& data,
                 const Hyperparameters& hyper);
void update_alpha(VariationalState& state, const Hyperparameters& hyper);
void update_beta(VariationalState& state, const Hyperparameters& hyper);

ElboTerms compute_elbo_terms(const VariationalState& state, const NestedDataset& data,
                             const Hyperparameters& hyper);
double compute_elbo(const VariationalState& state, const NestedDataset& data,
                    const Hyperparameters& hyper);

// Runs sweeps of the eight updates until the ELBO gain drops below
// config.tol or config.max_iter sweeps have run. elbo_trace[0] is the ELBO
// of the initial state. Throws NumericalFault on a non-finite ELBO.
FitResult fit(const NestedDataset& data, const Hyperparameters& hyper,
              const CaviConfig& config);

// Single fit from a caller-supplied initial state.
FitResult fit_from(VariationalState state, const NestedDataset& data,
                   const Hyperparameters& hyper, const CaviConfig& config);

// Half the expected Gaussian log-likelihood without the 2 pi constant,
// 0.5 * (E log|Lambda_c| - d/t_c - c_c (z - m_c)^T D_c (z - m_c)), for each
// row z of `points` (n x d) and each component c. Returns n x C.
Eigen::MatrixXd half_expected_loglik(const Eigen::Ref<const Eigen::MatrixXd>& points,
                                     const std::vector<NormalWishart>& components);

}  // namespace nam

#endif  // NAM_CAVI_HPP
