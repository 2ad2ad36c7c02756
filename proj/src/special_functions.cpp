#include "nam/special_functions.hpp"

#include <cmath>
#include <numbers>

namespace nam {

namespace {

constexpr double kAsymmetryTolerance = 1e-8;

void require_df(double df, Eigen::Index dim, const char* who) {
  if (!(df > static_cast<double>(dim) - 1.0) || !std::isfinite(df)) {
    throw DomainError(std::string(who) + ": degrees of freedom must exceed dim - 1");
  }
}

}  // namespace

SpdMatrix::SpdMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw DomainError("SpdMatrix: matrix is not square");
  }
  if (m.rows() == 0) {
    throw DomainError("SpdMatrix: empty matrix");
  }
  if (!m.allFinite()) {
    throw NumericalFault("SpdMatrix: non-finite entries");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kAsymmetryTolerance * scale) {
    throw DomainError("SpdMatrix: matrix is not symmetric");
  }
  mat_ = 0.5 * (m + m.transpose());
  llt_.compute(mat_);
  if (llt_.info() != Eigen::Success) {
    throw NumericalFault("SpdMatrix: Cholesky factorization failed");
  }
  const auto diag = llt_.matrixLLT().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0.0) || !std::isfinite(diag(i))) {
      throw NumericalFault("SpdMatrix: non-positive Cholesky pivot");
    }
  }
}

SpdMatrix SpdMatrix::identity(Eigen::Index dim) {
  return SpdMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

double SpdMatrix::quadratic_form(const Eigen::Ref<const Eigen::VectorXd>& v) const {
  // v^T L L^T v = |L^T v|^2
  const Eigen::VectorXd w = llt_.matrixU() * v;
  return w.squaredNorm();
}

double logdet_spd(const SpdMatrix& m) {
  return 2.0 * m.llt().matrixLLT().diagonal().array().log().sum();
}

SpdMatrix spd_inverse(const SpdMatrix& m) {
  const Eigen::Index d = m.dim();
  return SpdMatrix(m.llt().solve(Eigen::MatrixXd::Identity(d, d)));
}

double log_multigamma(double a, Eigen::Index dim) {
  const double d = static_cast<double>(dim);
  double out = 0.25 * d * (d - 1.0) * std::log(std::numbers::pi);
  for (Eigen::Index i = 1; i <= dim; ++i) {
    out += std::lgamma(a + 0.5 * (1.0 - static_cast<double>(i)));
  }
  return out;
}

double wishart_expected_logdet(const SpdMatrix& scale, double df) {
  require_df(df, scale.dim(), "wishart_expected_logdet");
  const Eigen::Index d = scale.dim();
  double out = static_cast<double>(d) * std::numbers::ln2 + logdet_spd(scale);
  for (Eigen::Index i = 1; i <= d; ++i) {
    out += digamma(0.5 * (df - static_cast<double>(i) + 1.0));
  }
  return out;
}

double wishart_log_norm(const SpdMatrix& scale, double df) {
  require_df(df, scale.dim(), "wishart_log_norm");
  const double d = static_cast<double>(scale.dim());
  return -0.5 * df * logdet_spd(scale) - 0.5 * df * d * std::numbers::ln2 -
         log_multigamma(0.5 * df, scale.dim());
}

double wishart_entropy(const SpdMatrix& scale, double df, double expected_logdet) {
  const double d = static_cast<double>(scale.dim());
  return -wishart_log_norm(scale, df) - 0.5 * (df - d - 1.0) * expected_logdet +
         0.5 * df * d;
}

double wishart_log_density(const SpdMatrix& lambda, const SpdMatrix& scale, double df) {
  if (lambda.dim() != scale.dim()) {
    throw DomainError("wishart_log_density: dimension mismatch");
  }
  const double d = static_cast<double>(scale.dim());
  const double trace = scale.llt().solve(lambda.matrix()).trace();
  return wishart_log_norm(scale, df) + 0.5 * (df - d - 1.0) * logdet_spd(lambda) -
         0.5 * trace;
}

}  // namespace nam
