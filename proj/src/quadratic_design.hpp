#ifndef NAM_SRC_QUADRATIC_DESIGN_HPP
#define NAM_SRC_QUADRATIC_DESIGN_HPP

#include <vector>

#include <Eigen/Dense>

#include "nam/model.hpp"

namespace nam::detail {

// Points centered at their mean, augmented with all pairwise products
// z_a z_b (a <= b) followed by the coordinates themselves:
//   features = [ z_a z_b ... | z_1 ... z_d ].
// Gaussian quadratic forms and weighted second moments against every
// component then reduce to one matrix product each.
class QuadraticDesign {
 public:
  QuadraticDesign() = default;
  explicit QuadraticDesign(const Eigen::Ref<const Eigen::MatrixXd>& points);

  Index dim() const { return dim_; }
  Index rows() const { return features_.rows(); }

  // 0.5 * (E log|Lambda_c| - d/t_c - c_c (z - m_c)^T D_c (z - m_c)), n x C.
  Eigen::MatrixXd half_expected_loglik(const std::vector<NormalWishart>& components) const;

  struct Moments {
    Eigen::VectorXd counts;              // C
    Eigen::MatrixXd means;               // d x C, in original coordinates
    std::vector<Eigen::MatrixXd> scatter;  // d x d about each weighted mean
  };

  // Weighted moments for each column of `weights` (n x C).
  Moments moments(const Eigen::Ref<const Eigen::MatrixXd>& weights) const;

  // Moments accumulated over consecutive row blocks of the points, one
  // weight matrix per block (block b covers rows [offsets[b], offsets[b+1])).
  Moments moments(const std::vector<Eigen::MatrixXd>& weight_blocks,
                  const std::vector<Index>& offsets) const;

 private:
  Moments finish(const Eigen::MatrixXd& raw, const Eigen::VectorXd& counts) const;

  Index dim_ = 0;
  Index pairs_ = 0;
  Eigen::VectorXd center_;
  Eigen::MatrixXd features_;  // n x (pairs + dim)
};

}  // namespace nam::detail

#endif  // NAM_SRC_QUADRATIC_DESIGN_HPP
