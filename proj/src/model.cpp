#include "nam/model.hpp"

#include <cmath>
#include <string>

namespace nam {

namespace {

constexpr double kRowSumTolerance = 1e-9;

void check_stochastic(const Eigen::MatrixXd& m, const std::string& what) {
  if (!m.allFinite() || (m.array() < 0.0).any()) {
    throw DomainError(what + ": entries must be finite and nonnegative");
  }
  const Eigen::VectorXd sums = m.rowwise().sum();
  for (Index r = 0; r < sums.size(); ++r) {
    if (std::abs(sums(r) - 1.0) > kRowSumTolerance) {
      throw DomainError(what + ": row " + std::to_string(r) + " sums to " +
                        std::to_string(sums(r)));
    }
  }
}

void check_positive(const Eigen::MatrixXd& m, const std::string& what) {
  if (!m.allFinite() || (m.array() <= 0.0).any()) {
    throw DomainError(what + ": parameters must be finite and positive");
  }
}

void check_nw(const NormalWishart& nw, Index dim, const std::string& what) {
  if (nw.mean.size() != dim || nw.scale.dim() != dim) {
    throw DomainError(what + ": dimension mismatch");
  }
  if (!nw.mean.allFinite() || !(nw.t > 0.0) ||
      !(nw.c > static_cast<double>(dim) - 1.0)) {
    throw DomainError(what + ": invalid Normal-Wishart parameters");
  }
  // Re-factor to confirm the stored scale is still SPD.
  SpdMatrix check(nw.scale.matrix());
  (void)check;
}

}  // namespace

NestedDataset NestedDataset::from_blocks(Eigen::MatrixXd x,
                                         const std::vector<Eigen::MatrixXd>& y_blocks,
                                         std::vector<std::string> group_ids) {
  if (static_cast<Index>(y_blocks.size()) != x.rows()) {
    throw DomainError("NestedDataset: one observation block per group required");
  }
  NestedDataset data;
  const Index p = y_blocks.empty() ? 0 : y_blocks.front().cols();
  Index total = 0;
  data.offsets.push_back(0);
  for (const auto& block : y_blocks) {
    if (block.cols() != p) {
      throw DomainError("NestedDataset: observation dimension differs across groups");
    }
    total += block.rows();
    data.offsets.push_back(total);
  }
  data.y.resize(total, p);
  for (std::size_t j = 0; j < y_blocks.size(); ++j) {
    data.y.middleRows(data.offsets[j], y_blocks[j].rows()) = y_blocks[j];
  }
  data.x = std::move(x);
  if (group_ids.empty()) {
    for (Index j = 0; j < data.x.rows(); ++j) {
      group_ids.push_back(std::to_string(j + 1));
    }
  }
  data.group_ids = std::move(group_ids);
  data.validate();
  return data;
}

void NestedDataset::validate() const {
  const Index J = groups();
  if (J < 1) {
    throw DomainError("NestedDataset: at least one group is required");
  }
  if (static_cast<Index>(offsets.size()) != J + 1 || offsets.front() != 0 ||
      offsets.back() != total_obs()) {
    throw DomainError("NestedDataset: group offsets do not cover the observations");
  }
  for (Index j = 0; j < J; ++j) {
    if (group_size(j) < 1) {
      throw DomainError("NestedDataset: group " + std::to_string(j + 1) +
                        " has no observations");
    }
  }
  if (static_cast<Index>(group_ids.size()) != J) {
    throw DomainError("NestedDataset: one group id per group required");
  }
  if (p() < 1) {
    throw DomainError("NestedDataset: observation dimension must be positive");
  }
  if (q() < 1) {
    throw DomainError("NestedDataset: group-level dimension must be positive");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw DomainError("NestedDataset: non-finite values");
  }
}

NormalWishartPrior NormalWishartPrior::make(Eigen::VectorXd mean, double lambda,
                                            double nu, const SpdMatrix& scale) {
  NormalWishartPrior prior;
  prior.mean = std::move(mean);
  prior.lambda = lambda;
  prior.nu = nu;
  prior.scale = scale;
  prior.scale_inverse = spd_inverse(scale);
  prior.validate("NormalWishartPrior");
  return prior;
}

NormalWishartPrior NormalWishartPrior::standard(Index dim) {
  return make(Eigen::VectorXd::Zero(dim), 0.05, static_cast<double>(dim) + 5.0,
              SpdMatrix::identity(dim));
}

void NormalWishartPrior::validate(const char* who) const {
  const Index d = mean.size();
  if (scale.dim() != d || scale_inverse.dim() != d) {
    throw DomainError(std::string(who) + ": dimension mismatch");
  }
  if (!(lambda > 0.0) || !(nu > static_cast<double>(d) - 1.0) || !mean.allFinite()) {
    throw DomainError(std::string(who) + ": require lambda > 0 and nu > dim - 1");
  }
}

Hyperparameters Hyperparameters::defaults(Index q, Index p, Index K, Index L,
                                          Variant variant) {
  Hyperparameters h;
  h.x_prior = NormalWishartPrior::standard(q);
  h.y_prior = NormalWishartPrior::standard(p);
  h.K = K;
  h.L = L;
  h.variant = variant;
  h.validate();
  return h;
}

void Hyperparameters::validate() const {
  x_prior.validate("Hyperparameters x prior");
  y_prior.validate("Hyperparameters y prior");
  if (!(a_alpha > 0.0) || !(b_alpha > 0.0) || !(a_beta > 0.0) || !(b_beta > 0.0)) {
    throw DomainError("Hyperparameters: gamma hyperparameters must be positive");
  }
  if (K < 2 || L < 2) {
    throw DomainError("Hyperparameters: truncation levels K and L must be at least 2");
  }
}

double GammaParams::expected_log() const { return digamma(shape) - std::log(rate); }

void validate_state(const VariationalState& s, const NestedDataset& data,
                    const Hyperparameters& hyper) {
  const Index J = data.groups();
  const Index K = hyper.K;
  const Index L = hyper.L;
  if (s.rho.rows() != J || s.rho.cols() != K) {
    throw DomainError("state: rho must be J x K");
  }
  check_stochastic(s.rho, "state rho");
  if (static_cast<Index>(s.xi.size()) != J) {
    throw DomainError("state: one xi block per group required");
  }
  for (Index j = 0; j < J; ++j) {
    if (s.xi[j].rows() != data.group_size(j) || s.xi[j].cols() != L) {
      throw DomainError("state: xi block " + std::to_string(j) + " must be n_j x L");
    }
    check_stochastic(s.xi[j], "state xi[" + std::to_string(j) + "]");
  }
  if (s.v_a.size() != K - 1 || s.v_b.size() != K - 1) {
    throw DomainError("state: K - 1 group sticks required");
  }
  check_positive(s.v_a, "state v_a");
  check_positive(s.v_b, "state v_b");
  if (s.u_a.rows() != L - 1 || s.u_a.cols() != K || s.u_b.rows() != L - 1 ||
      s.u_b.cols() != K) {
    throw DomainError("state: observation sticks must be (L - 1) x K");
  }
  check_positive(s.u_a, "state u_a");
  check_positive(s.u_b, "state u_b");
  if (static_cast<Index>(s.nw_x.size()) != K || static_cast<Index>(s.nw_y.size()) != L) {
    throw DomainError("state: K x-side and L y-side Normal-Wishart factors required");
  }
  for (Index k = 0; k < K; ++k) check_nw(s.nw_x[k], data.q(), "state nw_x");
  for (Index l = 0; l < L; ++l) check_nw(s.nw_y[l], data.p(), "state nw_y");
  if (!(s.alpha.shape > 0.0) || !(s.alpha.rate > 0.0) || !(s.beta.shape > 0.0) ||
      !(s.beta.rate > 0.0)) {
    throw DomainError("state: concentration Gamma parameters must be positive");
  }
}

Eigen::VectorXd sticks_to_weights(const Eigen::VectorXd& v) {
  const Index K = v.size() + 1;
  Eigen::VectorXd w(K);
  double remaining = 1.0;
  for (Index k = 0; k + 1 < K; ++k) {
    if (!(v(k) >= 0.0 && v(k) <= 1.0)) {
      throw DomainError("sticks_to_weights: stick values must lie in [0, 1]");
    }
    w(k) = v(k) * remaining;
    remaining *= 1.0 - v(k);
  }
  w(K - 1) = remaining;
  return w;
}

Eigen::VectorXd expected_log_weights(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Index K = a.size() + 1;
  Eigen::VectorXd out(K);
  double tail = 0.0;  // sum_{r<k} g(b_r, a_r)
  for (Index k = 0; k + 1 < K; ++k) {
    const double psi_ab = digamma(a(k) + b(k));
    out(k) = digamma(a(k)) - psi_ab + tail;
    tail += digamma(b(k)) - psi_ab;
  }
  out(K - 1) = tail;
  return out;
}

Index argmax_lowest(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  Index best = 0;
  for (Index k = 1; k < row.size(); ++k) {
    if (row(k) > row(best)) best = k;
  }
  return best;
}

Assignments extract_assignments(const VariationalState& state) {
  Assignments out;
  out.s_hat.reserve(state.rho.rows());
  for (Index j = 0; j < state.rho.rows(); ++j) {
    out.s_hat.push_back(static_cast<int>(argmax_lowest(state.rho.row(j))) + 1);
  }
  out.m_hat.reserve(state.xi.size());
  for (const auto& block : state.xi) {
    std::vector<int> labels;
    labels.reserve(block.rows());
    for (Index i = 0; i < block.rows(); ++i) {
      labels.push_back(static_cast<int>(argmax_lowest(block.row(i))) + 1);
    }
    out.m_hat.push_back(std::move(labels));
  }
  return out;
}

}  // namespace nam
