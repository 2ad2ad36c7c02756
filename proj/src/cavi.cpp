#include "nam/cavi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "quadratic_design.hpp"

namespace nam {

namespace {

constexpr double kLogFloor = 1e-300;
// Log responsibilities are floored at this many nats below the row maximum,
// which keeps subnormal values out of the downstream products.
constexpr double kLogitCutoff = -500.0;
// Below this effective count a Normal-Wishart factor is reset to its prior.
constexpr double kEmptyComponent = 1e-200;

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

double log_beta_norm(double a, double b) {
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
}

double log_gamma_norm(double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape);
}

// Sum of m .* log(max(m, floor)); the floor makes 0 log 0 vanish.
double sum_m_log_m(const Eigen::MatrixXd& m) {
  return (m.array() * m.array().max(kLogFloor).log()).sum();
}

// Softmax over each row of `logits`, in place, after subtracting the row max.
// Returns sum m log m of the result, computed from the shifted logits.
double normalize_log_rows(Eigen::MatrixXd& logits, const char* who) {
  if (!logits.allFinite()) {
    throw NumericalFault(std::string(who) + ": non-finite log responsibility");
  }
  const Eigen::VectorXd row_max = logits.rowwise().maxCoeff();
  logits.colwise() -= row_max;
  logits = logits.array().max(kLogitCutoff).matrix();
  Eigen::MatrixXd probs = logits.array().exp().matrix();
  const Eigen::ArrayXd sums = probs.rowwise().sum().array();
  probs.array().colwise() /= sums;
  const double entropy_sum =
      probs.cwiseProduct(logits).sum() - sums.log().sum();
  logits = std::move(probs);
  return entropy_sum;
}

// Column sums of each group's xi block, J x L.
Eigen::MatrixXd group_xi_totals(const VariationalState& state) {
  const Index J = static_cast<Index>(state.xi.size());
  Eigen::MatrixXd totals(J, state.L());
  for (Index j = 0; j < J; ++j) totals.row(j) = state.xi[j].colwise().sum();
  return totals;
}

// E[log omega_lk], L x K.
Eigen::MatrixXd expected_log_omega(const VariationalState& state) {
  const Index K = state.K();
  Eigen::MatrixXd out(state.L(), K);
  for (Index k = 0; k < K; ++k) {
    out.col(k) = expected_log_weights(state.u_a.col(k), state.u_b.col(k));
  }
  return out;
}

// Conjugate Normal-Wishart update for component c from its weighted moments.
NormalWishart posterior_nw(const detail::QuadraticDesign::Moments& moments, Index c,
                           const NormalWishartPrior& prior) {
  const double count = moments.counts(c);
  NormalWishart nw;
  if (!(count > kEmptyComponent)) {
    nw.mean = prior.mean;
    nw.t = prior.lambda;
    nw.c = prior.nu;
    nw.scale = prior.scale;
    return nw;
  }
  const Eigen::VectorXd shift = moments.means.col(c) - prior.mean;
  nw.t = prior.lambda + count;
  nw.c = prior.nu + count;
  nw.mean = (prior.lambda * prior.mean + count * moments.means.col(c)) / nw.t;
  const Eigen::MatrixXd precision_scale =
      prior.scale_inverse.matrix() +
      (prior.lambda * count / (prior.lambda + count)) * shift * shift.transpose() +
      moments.scatter[c];
  nw.scale = spd_inverse(SpdMatrix(precision_scale));
  return nw;
}

// E_q[log p(mu, Lambda)] under the Normal-Wishart prior, summed over factors.
double nw_prior_term(const std::vector<NormalWishart>& comps,
                     const std::vector<double>& expected_logdets,
                     const NormalWishartPrior& prior) {
  const double d = static_cast<double>(prior.mean.size());
  const double count = static_cast<double>(comps.size());
  double sum_logdet = 0.0;
  double sum_trace = 0.0;
  double sum_gauss = 0.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& nw = comps[c];
    sum_logdet += expected_logdets[c];
    sum_trace += nw.c * (prior.scale_inverse.matrix().cwiseProduct(nw.scale.matrix())).sum();
    const Eigen::VectorXd diff = nw.mean - prior.mean;
    sum_gauss += d * std::log(prior.lambda / (2.0 * std::numbers::pi)) + expected_logdets[c] -
                 d * prior.lambda / nw.t - prior.lambda * nw.c * nw.scale.quadratic_form(diff);
  }
  return count * wishart_log_norm(prior.scale, prior.nu) +
         0.5 * (prior.nu - d - 1.0) * sum_logdet - 0.5 * sum_trace + 0.5 * sum_gauss;
}

// E_q[log q(mu, Lambda)], summed over factors.
double nw_entropy_term(const std::vector<NormalWishart>& comps,
                       const std::vector<double>& expected_logdets) {
  double out = 0.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& nw = comps[c];
    const double d = static_cast<double>(nw.mean.size());
    const double wishart_h = wishart_entropy(nw.scale, nw.c, expected_logdets[c]);
    out += 0.5 * expected_logdets[c] +
           0.5 * d * (std::log(nw.t / (2.0 * std::numbers::pi)) - 1.0) - wishart_h;
  }
  return out;
}

std::vector<double> expected_logdets(const std::vector<NormalWishart>& comps) {
  std::vector<double> out;
  out.reserve(comps.size());
  for (const auto& nw : comps) out.push_back(nw.expected_logdet());
  return out;
}

// One CAVI sweep over a state, caching the expected log-likelihood matrices
// between updates that do not change the Normal-Wishart factors.
class Sweep {
 public:
  // `data` may be null for the updates that only touch global factors.
  Sweep(VariationalState& state, const NestedDataset* data, const Hyperparameters& hyper)
      : state_(state), data_ptr_(data), hyper_(hyper) {}

  void group_assignments() {
    const Eigen::VectorXd elog_pi = expected_log_weights(state_.v_a, state_.v_b);
    const Eigen::MatrixXd elog_omega = expected_log_omega(state_);
    Eigen::MatrixXd logits = group_xi_totals(state_) * elog_omega;
    logits.rowwise() += elog_pi.transpose();
    if (hyper_.variant == Variant::NAM) logits += loglik_x();
    rho_entropy_ = normalize_log_rows(logits, "update_group_assignments");
    state_.rho = std::move(logits);
  }

  void obs_assignments() {
    const Eigen::MatrixXd elog_omega = expected_log_omega(state_);
    // Row j: sum_k rho_jk E[log omega_lk].
    const Eigen::MatrixXd prior_term = state_.rho * elog_omega.transpose();
    const Eigen::MatrixXd& lik = loglik_y();
    double entropy = 0.0;
    for (Index j = 0; j < data().groups(); ++j) {
      Eigen::MatrixXd logits = lik.middleRows(data().offsets[j], data().group_size(j));
      logits.rowwise() += prior_term.row(j);
      entropy += normalize_log_rows(logits, "update_obs_assignments");
      state_.xi[j] = std::move(logits);
    }
    xi_entropy_ = entropy;
  }

  void obs_sticks() {
    const Index L = hyper_.L;
    // weighted_l_k = sum_j rho_jk sum_i xi_jil
    const Eigen::MatrixXd weighted = group_xi_totals(state_).transpose() * state_.rho;
    const double beta_mean = state_.beta.mean();
    Eigen::RowVectorXd tail = Eigen::RowVectorXd::Zero(hyper_.K);
    for (Index l = L - 1; l >= 1; --l) {
      tail += weighted.row(l);
      state_.u_a.row(l - 1) = (1.0 + weighted.row(l - 1).array()).matrix();
      state_.u_b.row(l - 1) = (beta_mean + tail.array()).matrix();
    }
  }

  void group_sticks() {
    const Index K = hyper_.K;
    const Eigen::VectorXd counts = state_.rho.colwise().sum().transpose();
    const double alpha_mean = state_.alpha.mean();
    double tail = 0.0;
    for (Index k = K - 1; k >= 1; --k) {
      tail += counts(k);
      state_.v_a(k - 1) = 1.0 + counts(k - 1);
      state_.v_b(k - 1) = alpha_mean + tail;
    }
  }

  void nw_x() {
    if (hyper_.variant == Variant::CAM) return;
    const auto moments = design_x().moments(state_.rho);
    for (Index k = 0; k < hyper_.K; ++k) {
      state_.nw_x[k] = posterior_nw(moments, k, hyper_.x_prior);
    }
    loglik_x_.reset();
  }

  void nw_y() {
    const auto moments = design_y().moments(state_.xi, data().offsets);
    for (Index l = 0; l < hyper_.L; ++l) {
      state_.nw_y[l] = posterior_nw(moments, l, hyper_.y_prior);
    }
    loglik_y_.reset();
  }

  void alpha() {
    double sum = 0.0;
    for (Index k = 0; k + 1 < hyper_.K; ++k) {
      sum += expected_log_stick(state_.v_b(k), state_.v_a(k));
    }
    state_.alpha.shape = hyper_.a_alpha + static_cast<double>(hyper_.K - 1);
    state_.alpha.rate = hyper_.b_alpha - sum;
  }

  void beta() {
    double sum = 0.0;
    for (Index k = 0; k < hyper_.K; ++k) {
      for (Index l = 0; l + 1 < hyper_.L; ++l) {
        sum += expected_log_stick(state_.u_b(l, k), state_.u_a(l, k));
      }
    }
    state_.beta.shape = hyper_.a_beta + static_cast<double>(hyper_.K * (hyper_.L - 1));
    state_.beta.rate = hyper_.b_beta - sum;
  }

  ElboTerms elbo() {
    const bool nam = hyper_.variant == Variant::NAM;
    const Index K = hyper_.K;
    const Index L = hyper_.L;
    const double p = static_cast<double>(data().p());
    const double q = static_cast<double>(data().q());
    ElboTerms t;

    const Eigen::MatrixXd& lik_y = loglik_y();
    for (Index j = 0; j < data().groups(); ++j) {
      const auto lik = lik_y.middleRows(data().offsets[j], data().group_size(j));
      t.log_p_y += state_.xi[j].cwiseProduct(lik).sum();
    }
    t.log_p_y -= 0.5 * p * kLog2Pi * static_cast<double>(data().total_obs());
    if (nam) {
      t.log_p_x = state_.rho.cwiseProduct(loglik_x()).sum() -
                  0.5 * q * kLog2Pi * static_cast<double>(data().groups());
    }

    const Eigen::VectorXd elog_pi = expected_log_weights(state_.v_a, state_.v_b);
    const Eigen::MatrixXd elog_omega = expected_log_omega(state_);
    const Eigen::MatrixXd xi_totals = group_xi_totals(state_);
    t.log_p_m = state_.rho.cwiseProduct(xi_totals * elog_omega).sum();
    t.log_p_s = (state_.rho * elog_pi).sum();

    const double elog_alpha = state_.alpha.expected_log();
    const double elog_beta = state_.beta.expected_log();
    double sum_v = 0.0;
    double log_q_v = 0.0;
    for (Index k = 0; k + 1 < K; ++k) {
      const double a = state_.v_a(k);
      const double b = state_.v_b(k);
      const double g_ab = expected_log_stick(a, b);
      const double g_ba = expected_log_stick(b, a);
      sum_v += g_ba;
      log_q_v += log_beta_norm(a, b) + (a - 1.0) * g_ab + (b - 1.0) * g_ba;
    }
    double sum_u = 0.0;
    double log_q_u = 0.0;
    for (Index k = 0; k < K; ++k) {
      for (Index l = 0; l + 1 < L; ++l) {
        const double a = state_.u_a(l, k);
        const double b = state_.u_b(l, k);
        const double g_ab = expected_log_stick(a, b);
        const double g_ba = expected_log_stick(b, a);
        sum_u += g_ba;
        log_q_u += log_beta_norm(a, b) + (a - 1.0) * g_ab + (b - 1.0) * g_ba;
      }
    }
    t.log_p_v = static_cast<double>(K - 1) * elog_alpha + (state_.alpha.mean() - 1.0) * sum_v;
    t.log_p_u = static_cast<double>(K * (L - 1)) * elog_beta + (state_.beta.mean() - 1.0) * sum_u;
    t.log_q_v = log_q_v;
    t.log_q_u = log_q_u;

    t.log_p_alpha = log_gamma_norm(hyper_.a_alpha, hyper_.b_alpha) +
                    (hyper_.a_alpha - 1.0) * elog_alpha - hyper_.b_alpha * state_.alpha.mean();
    t.log_p_beta = log_gamma_norm(hyper_.a_beta, hyper_.b_beta) +
                   (hyper_.a_beta - 1.0) * elog_beta - hyper_.b_beta * state_.beta.mean();
    t.log_q_alpha = log_gamma_norm(state_.alpha.shape, state_.alpha.rate) +
                    (state_.alpha.shape - 1.0) * elog_alpha - state_.alpha.shape;
    t.log_q_beta = log_gamma_norm(state_.beta.shape, state_.beta.rate) +
                   (state_.beta.shape - 1.0) * elog_beta - state_.beta.shape;

    const auto logdet_y = expected_logdets(state_.nw_y);
    t.log_p_nw_y = nw_prior_term(state_.nw_y, logdet_y, hyper_.y_prior);
    t.log_q_nw_y = nw_entropy_term(state_.nw_y, logdet_y);
    if (nam) {
      const auto logdet_x = expected_logdets(state_.nw_x);
      t.log_p_nw_x = nw_prior_term(state_.nw_x, logdet_x, hyper_.x_prior);
      t.log_q_nw_x = nw_entropy_term(state_.nw_x, logdet_x);
    }

    t.log_q_s = rho_entropy_ ? *rho_entropy_ : sum_m_log_m(state_.rho);
    if (xi_entropy_) {
      t.log_q_m = *xi_entropy_;
    } else {
      for (const auto& block : state_.xi) t.log_q_m += sum_m_log_m(block);
    }
    return t;
  }

 private:
  const detail::QuadraticDesign& design_x() {
    if (!design_x_) design_x_.emplace(data().x);
    return *design_x_;
  }

  const detail::QuadraticDesign& design_y() {
    if (!design_y_) design_y_.emplace(data().y);
    return *design_y_;
  }

  const Eigen::MatrixXd& loglik_x() {
    if (!loglik_x_) loglik_x_ = design_x().half_expected_loglik(state_.nw_x);
    return *loglik_x_;
  }

  const Eigen::MatrixXd& loglik_y() {
    if (!loglik_y_) loglik_y_ = design_y().half_expected_loglik(state_.nw_y);
    return *loglik_y_;
  }

  const NestedDataset& data() const {
    if (data_ptr_ == nullptr) throw DomainError("CAVI update requires the dataset");
    return *data_ptr_;
  }

  VariationalState& state_;
  const NestedDataset* data_ptr_;
  const Hyperparameters& hyper_;
  std::optional<detail::QuadraticDesign> design_x_;
  std::optional<detail::QuadraticDesign> design_y_;
  std::optional<Eigen::MatrixXd> loglik_x_;
  std::optional<Eigen::MatrixXd> loglik_y_;
  // sum m log m of the responsibilities, known after an assignment update
  std::optional<double> rho_entropy_;
  std::optional<double> xi_entropy_;
};

Eigen::MatrixXd dirichlet_one_rows(Index rows, Index cols, std::mt19937_64& rng) {
  std::exponential_distribution<double> exp1(1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = exp1(rng);
    m.row(r) /= m.row(r).sum();
  }
  return m;
}

std::vector<NormalWishart> jittered_prior(const NormalWishartPrior& prior,
                                          const Eigen::MatrixXd& points, Index count,
                                          std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index d = prior.mean.size();
  Eigen::VectorXd sd = Eigen::VectorXd::Ones(d);
  if (points.rows() > 1) {
    const Eigen::RowVectorXd mean = points.colwise().mean();
    sd = ((points.rowwise() - mean).array().square().colwise().sum() /
          static_cast<double>(points.rows() - 1))
             .sqrt()
             .transpose();
    for (Index i = 0; i < d; ++i) {
      if (!(sd(i) > 0.0)) sd(i) = 1.0;
    }
  }
  std::vector<NormalWishart> out(count);
  for (auto& nw : out) {
    nw.mean = prior.mean;
    for (Index i = 0; i < d; ++i) nw.mean(i) += sd(i) * normal(rng);
    nw.t = prior.lambda;
    nw.c = prior.nu;
    nw.scale = prior.scale;
  }
  return out;
}

void check_finite_elbo(double elbo) {
  if (!std::isfinite(elbo)) throw NumericalFault("ELBO is not finite");
}

// Largest 0-based column that is the (lowest-index) argmax of some row.
Index max_argmax_column(const Eigen::MatrixXd& m) {
  Index best = 0;
  for (Index i = 0; i < m.rows(); ++i) {
    Index idx = 0;
    m.row(i).maxCoeff(&idx);
    best = std::max(best, idx);
  }
  return best;
}

int max_occupied(const VariationalState& state, bool group_level) {
  Index best = 0;
  if (group_level) {
    best = max_argmax_column(state.rho);
  } else {
    for (const auto& block : state.xi) best = std::max(best, max_argmax_column(block));
  }
  return static_cast<int>(best) + 1;
}

int count_distinct(const std::vector<int>& labels, int upper) {
  std::vector<char> seen(static_cast<std::size_t>(upper) + 1, 0);
  int n = 0;
  for (int label : labels) {
    if (!seen[label]) {
      seen[label] = 1;
      ++n;
    }
  }
  return n;
}

}  // namespace

void CaviConfig::validate() const {
  if (!(tol > 0.0)) throw DomainError("CaviConfig: tol must be positive");
  if (max_iter < 1) throw DomainError("CaviConfig: max_iter must be at least 1");
}

double ElboTerms::total() const {
  const double log_p = log_p_y + log_p_x + log_p_m + log_p_s + log_p_v + log_p_u +
                       log_p_alpha + log_p_beta + log_p_nw_y + log_p_nw_x;
  const double log_q = log_q_s + log_q_m + log_q_v + log_q_u + log_q_nw_x + log_q_nw_y +
                       log_q_alpha + log_q_beta;
  return log_p - log_q;
}

Eigen::MatrixXd half_expected_loglik(const Eigen::Ref<const Eigen::MatrixXd>& points,
                                     const std::vector<NormalWishart>& components) {
  const Index n = points.rows();
  const Index C = static_cast<Index>(components.size());
  const double d = static_cast<double>(points.cols());
  Eigen::MatrixXd out(n, C);
  for (Index c = 0; c < C; ++c) {
    const auto& nw = components[c];
    const Eigen::MatrixXd lower = nw.scale.lower();
    // Row i of `projected` is ((z_i - m)^T L), so its squared norm is the
    // quadratic form (z_i - m)^T D (z_i - m).
    const Eigen::MatrixXd projected = (points.rowwise() - nw.mean.transpose()) * lower;
    const double constant = nw.expected_logdet() - d / nw.t;
    out.col(c) = 0.5 * (constant - nw.c * projected.rowwise().squaredNorm().array());
  }
  return out;
}

VariationalState initialize_state(const NestedDataset& data, const Hyperparameters& hyper,
                                  InitStrategy init, std::mt19937_64& rng) {
  data.validate();
  hyper.validate();
  if (data.q() != hyper.x_prior.mean.size() || data.p() != hyper.y_prior.mean.size()) {
    throw DomainError("initialize_state: prior dimensions do not match the data");
  }
  const Index J = data.groups();
  const Index K = hyper.K;
  const Index L = hyper.L;
  VariationalState state;
  state.rho = dirichlet_one_rows(J, K, rng);
  state.xi.reserve(J);
  for (Index j = 0; j < J; ++j) {
    state.xi.push_back(dirichlet_one_rows(data.group_size(j), L, rng));
  }
  state.alpha = {hyper.a_alpha, hyper.b_alpha};
  state.beta = {hyper.a_beta, hyper.b_beta};
  state.v_a = Eigen::VectorXd::Ones(K - 1);
  state.v_b = Eigen::VectorXd::Constant(K - 1, state.alpha.mean());
  state.u_a = Eigen::MatrixXd::Ones(L - 1, K);
  state.u_b = Eigen::MatrixXd::Constant(L - 1, K, state.beta.mean());
  state.nw_x = jittered_prior(hyper.x_prior, data.x, K, rng);
  state.nw_y = jittered_prior(hyper.y_prior, data.y, L, rng);

  if (init == InitStrategy::RandomResponsibility) {
    Sweep sweep(state, &data, hyper);
    sweep.obs_sticks();
    sweep.group_sticks();
    sweep.nw_x();
    sweep.nw_y();
    sweep.alpha();
    sweep.beta();
  }
  return state;
}

void update_group_assignments(VariationalState& state, const NestedDataset& data,
                              const Hyperparameters& hyper) {
  Sweep(state, &data, hyper).group_assignments();
}

void update_obs_assignments(VariationalState& state, const NestedDataset& data,
                            const Hyperparameters& hyper) {
  Sweep(state, &data, hyper).obs_assignments();
}

void update_obs_sticks(VariationalState& state, const Hyperparameters& hyper) {
  Sweep(state, nullptr, hyper).obs_sticks();
}

void update_group_sticks(VariationalState& state, const Hyperparameters& hyper) {
  Sweep(state, nullptr, hyper).group_sticks();
}

void update_nw_x(VariationalState& state, const NestedDataset& data,
                 const Hyperparameters& hyper) {
  Sweep(state, &data, hyper).nw_x();
}

void update_nw_y(VariationalState& state, const NestedDataset& data,
                 const Hyperparameters& hyper) {
  Sweep(state, &data, hyper).nw_y();
}

void update_alpha(VariationalState& state, const Hyperparameters& hyper) {
  Sweep(state, nullptr, hyper).alpha();
}

void update_beta(VariationalState& state, const Hyperparameters& hyper) {
  Sweep(state, nullptr, hyper).beta();
}

ElboTerms compute_elbo_terms(const VariationalState& state, const NestedDataset& data,
                             const Hyperparameters& hyper) {
  // Sweep only reads the state when evaluating the ELBO.
  return Sweep(const_cast<VariationalState&>(state), &data, hyper).elbo();
}

double compute_elbo(const VariationalState& state, const NestedDataset& data,
                    const Hyperparameters& hyper) {
  const double elbo = compute_elbo_terms(state, data, hyper).total();
  check_finite_elbo(elbo);
  return elbo;
}

FitResult fit(const NestedDataset& data, const Hyperparameters& hyper,
              const CaviConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  return fit_from(initialize_state(data, hyper, config.init, rng), data, hyper, config);
}

FitResult fit_from(VariationalState state, const NestedDataset& data,
                   const Hyperparameters& hyper, const CaviConfig& config) {
  config.validate();
  FitResult result;
  Sweep sweep(state, &data, hyper);
  double previous = sweep.elbo().total();
  check_finite_elbo(previous);
  result.elbo_trace.push_back(previous);

  auto checkpoint = [&]() {
    if (config.per_step_elbo) {
      const double value = sweep.elbo().total();
      check_finite_elbo(value);
      result.step_elbos.push_back(value);
    }
  };

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    sweep.group_assignments();
    checkpoint();
    sweep.obs_assignments();
    checkpoint();
    sweep.obs_sticks();
    checkpoint();
    sweep.group_sticks();
    checkpoint();
    sweep.nw_x();
    checkpoint();
    sweep.nw_y();
    checkpoint();
    sweep.alpha();
    checkpoint();
    sweep.beta();
    checkpoint();

    const double current = sweep.elbo().total();
    check_finite_elbo(current);
    result.elbo_trace.push_back(current);
    result.iterations = iter;
    result.max_gc_index = std::max(result.max_gc_index, max_occupied(state, true));
    result.max_oc_index = std::max(result.max_oc_index, max_occupied(state, false));

    const double delta = current - previous;
    const double gain = config.relative_tol ? delta / std::abs(current) : delta;
    previous = current;
    if (gain < config.tol) {
      result.converged = true;
      result.status = FitStatus::Converged;
      break;
    }
  }

  Assignments hard = extract_assignments(state);
  std::vector<int> pooled;
  for (const auto& labels : hard.m_hat) pooled.insert(pooled.end(), labels.begin(), labels.end());
  result.final_max_gc_index = *std::max_element(hard.s_hat.begin(), hard.s_hat.end());
  result.final_max_oc_index = *std::max_element(pooled.begin(), pooled.end());
  result.n_gc = count_distinct(hard.s_hat, static_cast<int>(hyper.K));
  result.n_oc = count_distinct(pooled, static_cast<int>(hyper.L));
  result.s_hat = std::move(hard.s_hat);
  result.m_hat = std::move(hard.m_hat);
  result.final_state = std::move(state);
  return result;
}

}  // namespace nam
