#ifndef NAM_MODEL_HPP
#define NAM_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nam/special_functions.hpp"

namespace nam {

using Eigen::Index;

// Nested data: one group-level vector x_j (dim q) and n_j observation-level
// vectors y_ji (dim p) per group. Observations of all groups are stored
// contiguously in `y`; group j owns rows [offsets[j], offsets[j+1]).
struct NestedDataset {
  Eigen::MatrixXd x;             // J x q
  Eigen::MatrixXd y;             // N x p
  std::vector<Index> offsets;    // J + 1 entries, offsets[0] = 0
  std::vector<std::string> group_ids;

  static NestedDataset from_blocks(Eigen::MatrixXd x,
                                   const std::vector<Eigen::MatrixXd>& y_blocks,
                                   std::vector<std::string> group_ids = {});

  Index groups() const { return x.rows(); }
  Index q() const { return x.cols(); }
  Index p() const { return y.cols(); }
  Index total_obs() const { return y.rows(); }
  Index group_size(Index j) const { return offsets[j + 1] - offsets[j]; }
  auto block(Index j) const { return y.middleRows(offsets[j], group_size(j)); }

  // Throws DomainError when a structural invariant fails.
  void validate() const;
};

enum class Variant { NAM, CAM };

// Normal-Wishart prior NW(mean, lambda, nu, scale):
// Lambda ~ Wishart(scale, nu), mu | Lambda ~ N(mean, (lambda Lambda)^-1).
struct NormalWishartPrior {
  Eigen::VectorXd mean;
  double lambda = 0.05;
  double nu = 0.0;
  SpdMatrix scale;
  SpdMatrix scale_inverse;

  static NormalWishartPrior make(Eigen::VectorXd mean, double lambda, double nu,
                                 const SpdMatrix& scale);
  // NW(0, 0.05, dim + 5, I).
  static NormalWishartPrior standard(Index dim);
  void validate(const char* who) const;
};

struct Hyperparameters {
  NormalWishartPrior x_prior;
  NormalWishartPrior y_prior;
  double a_alpha = 1.0;
  double b_alpha = 1.0;
  double a_beta = 1.0;
  double b_beta = 1.0;
  Index K = 30;
  Index L = 30;
  Variant variant = Variant::NAM;

  // Standard NW priors per level, Gamma(1, 1) concentration hyperpriors.
  static Hyperparameters defaults(Index q, Index p, Index K = 30, Index L = 30,
                                  Variant variant = Variant::NAM);
  void validate() const;
};

// Variational Normal-Wishart factor NW(m, t, c, D).
struct NormalWishart {
  Eigen::VectorXd mean;
  double t = 1.0;
  double c = 1.0;
  SpdMatrix scale;

  // E[log |Lambda|] (the l^(1) quantity of the CAVI updates).
  double expected_logdet() const { return wishart_expected_logdet(scale, c); }
};

struct GammaParams {
  double shape = 1.0;
  double rate = 1.0;
  double mean() const { return shape / rate; }
  // E[log x] = psi(shape) - log(rate)
  double expected_log() const;
};

// Full set of variational parameters.
struct VariationalState {
  Eigen::MatrixXd rho;              // J x K, q(S_j = k)
  std::vector<Eigen::MatrixXd> xi;  // per group n_j x L, q(M_ji = l)
  Eigen::VectorXd v_a, v_b;         // K - 1 group-stick Beta parameters
  Eigen::MatrixXd u_a, u_b;         // (L - 1) x K observation-stick Beta parameters
  std::vector<NormalWishart> nw_x;  // K
  std::vector<NormalWishart> nw_y;  // L
  GammaParams alpha;                // q(alpha) = Gamma(s1, s2)
  GammaParams beta;                 // q(beta) = Gamma(r1, r2)

  Index K() const { return rho.cols(); }
  Index L() const { return xi.empty() ? 0 : xi.front().cols(); }
};

// Throws DomainError describing the first violated invariant.
void validate_state(const VariationalState& state, const NestedDataset& data,
                    const Hyperparameters& hyper);

// Truncated stick-breaking: K-1 sticks in (0, 1) to K weights; the last weight
// is the residual product so the result sums to one.
Eigen::VectorXd sticks_to_weights(const Eigen::VectorXd& v);

// E[log pi_k] under independent Beta(a_k, b_k) sticks, k < K, with the K-th
// stick fixed at one:
//   E[log pi_k] = g(a_k, b_k) + sum_{r<k} g(b_r, a_r).
Eigen::VectorXd expected_log_weights(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Index of the largest entry; ties go to the lowest index.
Index argmax_lowest(const Eigen::Ref<const Eigen::RowVectorXd>& row);

// Hard assignments, 1-based (labels are truncation indices).
struct Assignments {
  std::vector<int> s_hat;               // J
  std::vector<std::vector<int>> m_hat;  // ragged, n_j per group
};

Assignments extract_assignments(const VariationalState& state);

enum class FitStatus { Converged, MaxIterations };

struct FitResult {
  std::vector<double> elbo_trace;
  bool converged = false;
  FitStatus status = FitStatus::MaxIterations;
  int iterations = 0;
  std::vector<int> s_hat;
  std::vector<std::vector<int>> m_hat;
  int n_gc = 0;
  int n_oc = 0;
  // Largest 1-based index that was some row's argmax after any sweep.
  int max_gc_index = 0;
  int max_oc_index = 0;
  // The same for the final hard assignments only.
  int final_max_gc_index = 0;
  int final_max_oc_index = 0;
  VariationalState final_state;
  // Populated only when per-step ELBO checking is enabled: ELBO after each
  // individual update, eight entries per iteration.
  std::vector<double> step_elbos;
};

}  // namespace nam

#endif  // NAM_MODEL_HPP
