#include "quadratic_design.hpp"

namespace nam::detail {

QuadraticDesign::QuadraticDesign(const Eigen::Ref<const Eigen::MatrixXd>& points)
    : dim_(points.cols()), pairs_(points.cols() * (points.cols() + 1) / 2) {
  const Index n = points.rows();
  center_ = n > 0 ? Eigen::VectorXd(points.colwise().mean().transpose())
                  : Eigen::VectorXd::Zero(dim_);
  const Eigen::MatrixXd centered = points.rowwise() - center_.transpose();
  features_.resize(n, pairs_ + dim_);
  Index col = 0;
  for (Index a = 0; a < dim_; ++a) {
    for (Index b = a; b < dim_; ++b) {
      features_.col(col++) = centered.col(a).cwiseProduct(centered.col(b));
    }
  }
  features_.rightCols(dim_) = centered;
}

Eigen::MatrixXd QuadraticDesign::half_expected_loglik(
    const std::vector<NormalWishart>& components) const {
  const Index C = static_cast<Index>(components.size());
  const double d = static_cast<double>(dim_);
  // loglik = features * coef + 1 * offset^T
  Eigen::MatrixXd coef(pairs_ + dim_, C);
  Eigen::RowVectorXd offset(C);
  for (Index c = 0; c < C; ++c) {
    const NormalWishart& nw = components[c];
    const Eigen::MatrixXd& D = nw.scale.matrix();
    const Eigen::VectorXd shifted = nw.mean - center_;
    const Eigen::VectorXd d_m = D * shifted;
    Index row = 0;
    for (Index a = 0; a < dim_; ++a) {
      for (Index b = a; b < dim_; ++b) {
        const double weight = a == b ? D(a, a) : 2.0 * D(a, b);
        coef(row++, c) = -0.5 * nw.c * weight;
      }
    }
    // -0.5 c (-2 z^T D m) = c z^T D m
    coef.col(c).tail(dim_) = nw.c * d_m;
    offset(c) = 0.5 * (nw.expected_logdet() - d / nw.t - nw.c * shifted.dot(d_m));
  }
  Eigen::MatrixXd out = features_ * coef;
  out.rowwise() += offset;
  return out;
}

QuadraticDesign::Moments QuadraticDesign::moments(
    const Eigen::Ref<const Eigen::MatrixXd>& weights) const {
  return finish(features_.transpose() * weights, weights.colwise().sum().transpose());
}

QuadraticDesign::Moments QuadraticDesign::moments(
    const std::vector<Eigen::MatrixXd>& weight_blocks, const std::vector<Index>& offsets) const {
  const Index C = weight_blocks.empty() ? 0 : weight_blocks.front().cols();
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(pairs_ + dim_, C);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(C);
  for (std::size_t b = 0; b < weight_blocks.size(); ++b) {
    const auto& w = weight_blocks[b];
    raw.noalias() += features_.middleRows(offsets[b], w.rows()).transpose() * w;
    counts += w.colwise().sum().transpose();
  }
  return finish(raw, counts);
}

QuadraticDesign::Moments QuadraticDesign::finish(const Eigen::MatrixXd& raw,
                                                 const Eigen::VectorXd& counts) const {
  const Index C = raw.cols();
  Moments m;
  m.counts = counts;
  m.means.resize(dim_, C);
  m.scatter.assign(C, Eigen::MatrixXd::Zero(dim_, dim_));
  for (Index c = 0; c < C; ++c) {
    const double n = counts(c);
    if (!(n > 0.0)) {
      m.means.col(c) = center_;
      continue;
    }
    const Eigen::VectorXd mean_centered = raw.col(c).tail(dim_) / n;
    Eigen::MatrixXd& s = m.scatter[c];
    Index row = 0;
    for (Index a = 0; a < dim_; ++a) {
      for (Index b = a; b < dim_; ++b) {
        s(a, b) = raw(row++, c) - n * mean_centered(a) * mean_centered(b);
        s(b, a) = s(a, b);
      }
    }
    m.means.col(c) = mean_centered + center_;
  }
  return m;
}

}  // namespace nam::detail
