#include <algorithm>
#include <random>

#include <doctest.h>

#include "nam/errors.hpp"
#include "nam/evaluation.hpp"

using namespace nam;

namespace {

// Pair-counting ARI over all O(n^2) pairs:
// 2 (n11 n00 - n10 n01) / ((n11 + n10)(n10 + n00) + (n11 + n01)(n01 + n00)).
double brute_force_ari(const Partition& a, const Partition& b) {
  long double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const bool same_a = a[i] == a[j];
      const bool same_b = b[i] == b[j];
      if (same_a && same_b) ++n11;
      else if (same_a) ++n10;
      else if (same_b) ++n01;
      else ++n00;
    }
  }
  const long double den = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00);
  if (den == 0) return n10 == 0 && n01 == 0 ? 1.0 : 0.0;
  return static_cast<double>(2 * (n11 * n00 - n10 * n01) / den);
}

Partition random_partition(std::size_t n, int labels, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, labels - 1);
  Partition p(n);
  for (auto& v : p) v = pick(rng);
  return p;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("reference values") {
  CHECK(adjusted_rand_index({0, 0, 0, 1, 1, 1}, {0, 0, 1, 1, 2, 2}) ==
        doctest::Approx(0.24242424242424243).epsilon(1e-15));
  CHECK(adjusted_rand_index({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(adjusted_rand_index({1, 1, 2, 2, 3, 3, 3}, {5, 5, 5, 6, 6, 7, 7}) ==
        doctest::Approx(0.2125).epsilon(1e-15));
}

TEST_CASE("agrees with brute-force pair counting") {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<std::size_t> length(2, 12);
  std::uniform_int_distribution<int> labels(1, 6);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = length(rng);
    const Partition a = random_partition(n, labels(rng), rng);
    const Partition b = random_partition(n, labels(rng), rng);
    INFO("trial " << trial);
    CHECK(std::abs(adjusted_rand_index(a, b) - brute_force_ari(a, b)) < 1e-12);
  }
}

TEST_CASE("identity and relabeling invariance") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const Partition a = random_partition(12, 4, rng);
    const Partition b = random_partition(12, 3, rng);
    CHECK(adjusted_rand_index(a, a) == 1.0);
    // Any bijection of the label values.
    std::vector<std::int64_t> map = {17, -3, 1000000000000LL, 5};
    std::shuffle(map.begin(), map.end(), rng);
    Partition relabeled(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) relabeled[i] = map[a[i]];
    CHECK(adjusted_rand_index(relabeled, b) == adjusted_rand_index(a, b));
    CHECK(adjusted_rand_index(a, relabeled) == 1.0);
    CHECK(adjusted_rand_index(a, b) == adjusted_rand_index(b, a));
  }
}

TEST_CASE("degenerate partitions") {
  CHECK(adjusted_rand_index({1, 1, 1}, {2, 2, 2}) == 1.0);
  CHECK(adjusted_rand_index({1, 2, 3}, {3, 1, 2}) == 1.0);
  CHECK(adjusted_rand_index({1, 1, 1}, {1, 2, 3}) == 0.0);
  CHECK(adjusted_rand_index({1, 2}, {1, 1}) == 0.0);
  CHECK_THROWS_AS(adjusted_rand_index({1}, {1}), DomainError);
  CHECK_THROWS_AS(adjusted_rand_index({1, 2}, {1, 2, 3}), DomainError);
}

TEST_CASE("per-group and overall observation ARI") {
  const std::vector<std::vector<int>> truth = {{1, 1, 2, 2}, {1, 2, 2}};
  // Group 1 relabeled, group 2 exact: per-group ARI is 1 for both, but the
  // overall ARI sees that label 5 in group 1 and label 1 in group 2 differ.
  const std::vector<std::vector<int>> estimate = {{5, 5, 1, 1}, {1, 2, 2}};
  const OcAriSummary s = per_group_oc_ari(estimate, truth);
  CHECK(s.per_group == std::vector<double>{1.0, 1.0});
  CHECK(s.mean == 1.0);
  CHECK(s.sd == 0.0);
  const double overall = overall_oc_ari(estimate, truth);
  CHECK(overall < 1.0);
  CHECK(overall == doctest::Approx(brute_force_ari({5, 5, 1, 1, 1, 2, 2}, {1, 1, 2, 2, 1, 2, 2})));
  CHECK(overall_oc_ari(truth, truth) == 1.0);

  const std::vector<std::vector<int>> mixed = {{1, 1, 2, 2}, {1, 1, 1}};
  const OcAriSummary m = per_group_oc_ari(mixed, truth);
  CHECK(m.per_group[1] == 0.0);
  CHECK(m.mean == 0.5);
  CHECK(m.sd == doctest::Approx(std::sqrt(0.5)));

  CHECK_THROWS_AS(per_group_oc_ari({{1, 2}}, truth), DomainError);
  CHECK_THROWS_AS(overall_oc_ari({{1, 2}, {1, 2, 3}}, truth), DomainError);
}

TEST_CASE("cluster counts") {
  CHECK(count_clusters({4, 4, 9, 1, 9}) == 3);
  CHECK(count_clusters({}) == 0);
}

}  // TEST_SUITE
