#include "nam/evaluation.hpp"

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "nam/errors.hpp"

namespace nam {

namespace {

using Wide = __int128;

Wide choose2(std::int64_t n) { return static_cast<Wide>(n) * (n - 1) / 2; }

Wide sum_choose2(const std::unordered_map<std::int64_t, std::int64_t>& counts) {
  Wide out = 0;
  for (const auto& [label, n] : counts) out += choose2(n);
  return out;
}

}  // namespace

double adjusted_rand_index(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) {
    throw DomainError("adjusted_rand_index: partitions have different lengths (" +
                      std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  if (a.size() < 2) {
    throw DomainError("adjusted_rand_index: at least two elements required");
  }
  std::unordered_map<std::int64_t, std::int64_t> rows, cols;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> cells;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++rows[a[i]];
    ++cols[b[i]];
    ++cells[{a[i], b[i]}];
  }
  Wide index = 0;
  for (const auto& [key, n] : cells) index += choose2(n);
  const Wide sa = sum_choose2(rows);
  const Wide sb = sum_choose2(cols);
  const Wide total = choose2(static_cast<std::int64_t>(a.size()));

  // ARI = (index - sa sb / total) / ((sa + sb) / 2 - sa sb / total), scaled
  // through by 2 * total.
  const Wide numerator = 2 * (index * total - sa * sb);
  const Wide denominator = (sa + sb) * total - 2 * sa * sb;
  if (denominator == 0) {
    return (index == sa && index == sb) ? 1.0 : 0.0;
  }
  return static_cast<double>(static_cast<long double>(numerator) /
                             static_cast<long double>(denominator));
}

OcAriSummary per_group_oc_ari(const std::vector<std::vector<int>>& estimate,
                              const std::vector<std::vector<int>>& truth) {
  if (estimate.size() != truth.size()) {
    throw DomainError("per_group_oc_ari: group counts differ");
  }
  if (estimate.empty()) {
    throw DomainError("per_group_oc_ari: no groups");
  }
  OcAriSummary out;
  out.per_group.reserve(estimate.size());
  for (std::size_t j = 0; j < estimate.size(); ++j) {
    out.per_group.push_back(
        adjusted_rand_index(to_partition(estimate[j]), to_partition(truth[j])));
  }
  double sum = 0.0;
  for (double v : out.per_group) sum += v;
  out.mean = sum / static_cast<double>(out.per_group.size());
  if (out.per_group.size() > 1) {
    double ss = 0.0;
    for (double v : out.per_group) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(out.per_group.size() - 1));
  }
  return out;
}

double overall_oc_ari(const std::vector<std::vector<int>>& estimate,
                      const std::vector<std::vector<int>>& truth) {
  if (estimate.size() != truth.size()) {
    throw DomainError("overall_oc_ari: group counts differ");
  }
  Partition a, b;
  for (std::size_t j = 0; j < estimate.size(); ++j) {
    if (estimate[j].size() != truth[j].size()) {
      throw DomainError("overall_oc_ari: group " + std::to_string(j + 1) +
                        " has mismatched observation counts");
    }
    a.insert(a.end(), estimate[j].begin(), estimate[j].end());
    b.insert(b.end(), truth[j].begin(), truth[j].end());
  }
  return adjusted_rand_index(a, b);
}

int count_clusters(const Partition& labels) {
  return static_cast<int>(std::set<std::int64_t>(labels.begin(), labels.end()).size());
}

}  // namespace nam
