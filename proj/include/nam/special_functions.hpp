#ifndef NAM_SPECIAL_FUNCTIONS_HPP
#define NAM_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "nam/errors.hpp"

namespace nam {

// Digamma function psi(x) for x > 0.
//
// The argument is shifted upward with psi(x) = psi(x + 1) - 1/x until it
// reaches 10, then the asymptotic expansion in 1/x^2 is summed through the
// x^-14 Bernoulli term. Truncation error at x = 10 is below 5e-17.
template <typename Scalar>
Scalar digamma(Scalar x) {
  using std::log;
  if (!(x > Scalar(0))) {
    throw DomainError("digamma: argument must be positive, got " +
                      std::to_string(static_cast<double>(x)));
  }
  Scalar shift(0);
  while (x < Scalar(10)) {
    shift -= Scalar(1) / x;
    x += Scalar(1);
  }
  const Scalar inv2 = Scalar(1) / (x * x);
  // B_2n / (2n) for n = 1..7, evaluated by Horner in 1/x^2.
  const Scalar series =
      inv2 * (Scalar(1) / 12 -
      inv2 * (Scalar(1) / 120 -
      inv2 * (Scalar(1) / 252 -
      inv2 * (Scalar(1) / 240 -
      inv2 * (Scalar(1) / 132 -
      inv2 * (Scalar(691) / 32760 -
      inv2 * (Scalar(1) / 12)))))));
  return shift + log(x) - Scalar(0.5) / x - series;
}

// g(a, b) = psi(a) - psi(a + b) = E[log v] for v ~ Beta(a, b).
template <typename Scalar>
Scalar expected_log_stick(Scalar a, Scalar b) {
  if (!(a > Scalar(0)) || !(b > Scalar(0))) {
    throw DomainError("expected_log_stick: Beta parameters must be positive");
  }
  return digamma(a) - digamma(a + b);
}

// Symmetric positive-definite matrix with its Cholesky factor cached.
//
// Construction symmetrizes the input as (M + M^T) / 2 and factors it. Inputs
// that are grossly asymmetric (beyond round-off) are rejected with
// DomainError; a Cholesky breakdown raises NumericalFault.
class SpdMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(const Eigen::MatrixXd& m);

  static SpdMatrix identity(Eigen::Index dim);

  Eigen::Index dim() const { return mat_.rows(); }
  const Eigen::MatrixXd& matrix() const { return mat_; }
  const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }
  Eigen::MatrixXd lower() const { return llt_.matrixL(); }

  // v^T M v via the Cholesky factor.
  double quadratic_form(const Eigen::Ref<const Eigen::VectorXd>& v) const;

 private:
  Eigen::MatrixXd mat_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// log det M = 2 sum log diag(chol(M)).
double logdet_spd(const SpdMatrix& m);

SpdMatrix spd_inverse(const SpdMatrix& m);

// log of the multivariate gamma function Gamma_d(a).
double log_multigamma(double a, Eigen::Index dim);

// E[log |Lambda|] for Lambda ~ Wishart(scale, df):
//   sum_{i=1}^{d} psi((df - i + 1)/2) + d log 2 + log |scale|.
double wishart_expected_logdet(const SpdMatrix& scale, double df);

// log B(scale, df), where B is the inverse normalizing constant of the
// Wishart density B |Lambda|^{(df-d-1)/2} exp(-tr(scale^{-1} Lambda) / 2).
double wishart_log_norm(const SpdMatrix& scale, double df);

// Entropy of Wishart(scale, df) given E[log |Lambda|]:
//   -log B(scale, df) - (df - d - 1)/2 * expected_logdet + df d / 2.
double wishart_entropy(const SpdMatrix& scale, double df,
                       double expected_logdet);

// log density of Wishart(scale, df) at an SPD point.
double wishart_log_density(const SpdMatrix& lambda, const SpdMatrix& scale,
                           double df);

}  // namespace nam

#endif  // NAM_SPECIAL_FUNCTIONS_HPP
