#ifndef NAM_EVALUATION_HPP
#define NAM_EVALUATION_HPP

#include <cstdint>
#include <vector>

namespace nam {

// Labels over a shared index set. Label values are arbitrary integers.
using Partition = std::vector<std::int64_t>;

// Hubert-Arabie adjusted Rand index from the pairwise contingency table.
// All pair counts are accumulated in exact integer arithmetic; the single
// division happens at the end. When the chance-corrected denominator is
// zero (both partitions all-singleton or both all-constant) the result is 1
// if the partitions coincide and 0 otherwise.
// Throws DomainError on length mismatch or fewer than two elements.
double adjusted_rand_index(const Partition& a, const Partition& b);

template <typename Label>
Partition to_partition(const std::vector<Label>& labels) {
  return Partition(labels.begin(), labels.end());
}

struct OcAriSummary {
  std::vector<double> per_group;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (0 when J = 1)
};

// ARI computed independently within each group.
OcAriSummary per_group_oc_ari(const std::vector<std::vector<int>>& estimate,
                              const std::vector<std::vector<int>>& truth);

// One ARI over all observations concatenated in group order, so that label
// sharing across groups counts.
double overall_oc_ari(const std::vector<std::vector<int>>& estimate,
                      const std::vector<std::vector<int>>& truth);

int count_clusters(const Partition& labels);

}  // namespace nam

#endif  // NAM_EVALUATION_HPP
