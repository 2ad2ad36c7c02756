#ifndef NAM_PRIOR_ANALYTICS_HPP
#define NAM_PRIOR_ANALYTICS_HPP

#include <cstddef>
#include <cstdint>
#include <random>

namespace nam {

// Concentrations and base-measure masses H^x(A), H^y(A) of a Borel set A.
// The closed forms accept alpha, beta >= 0 so the degenerate limits can be
// evaluated directly.
struct PriorSpec {
  double alpha = 1.0;
  double beta = 1.0;
  double hx = 0.5;
  double hy = 0.5;

  double q1() const { return 1.0 / (1.0 + alpha); }
  double q2() const { return 1.0 / (1.0 + beta); }
  double q3() const { return 1.0 / (1.0 + 2.0 * beta); }
  void validate() const;
};

double prior_mean(const PriorSpec& spec);
double prior_variance(const PriorSpec& spec);

struct CoclusteringProbs {
  double group = 0.0;        // P[G_j = G_j']
  double observation = 0.0;  // P[z_ji = z_j'i'] for j != j'
};

CoclusteringProbs coclustering_probs(double alpha, double beta);

// Correlation of G_j(A) and G_j'(A). For hy = 1 the continuous limit is
// used: q1 when hx < 1, and the common-atoms value when hx = 1.
double prior_correlation(const PriorSpec& spec);

// Common-atoms correlation 1 - alpha beta / ((1 + 2 beta)(1 + alpha)).
double cam_correlation(double alpha, double beta);

// One joint draw of two random measures G_j, G_j' sharing the same Q,
// evaluated on a set A with H^x(A) = hx and H^y(A) = hy. Atom locations
// enter only through Bernoulli indicators of membership in A.
struct NamMeasureDraw {
  double g_j = 0.0;
  double g_jp = 0.0;
  int group_atom_j = 0;   // k for G_j, 0-based
  int group_atom_jp = 0;  // k' for G_j'
  int obs_atom_j = 0;     // l drawn from omega_k
  int obs_atom_jp = 0;    // l' drawn from omega_k'
};

// Sticks are generated on demand up to `truncation` atoms per level; the
// sequence is closed early once the unallocated stick mass drops below
// 1e-12, and the residual mass is folded into the last atom.
NamMeasureDraw sample_nam_measure(double alpha, double beta, double hx, double hy,
                                  int truncation, std::mt19937_64& rng);

struct McEstimate {
  double value = 0.0;
  double se = 0.0;
};

struct PriorMonteCarlo {
  std::size_t draws = 0;
  McEstimate mean;
  McEstimate variance;
  McEstimate group_coclustering;
  McEstimate obs_coclustering;
  McEstimate correlation;
};

// Monte-Carlo estimates with asymptotic (influence-function) standard errors.
PriorMonteCarlo monte_carlo_prior(const PriorSpec& spec, std::size_t draws,
                                  std::uint64_t seed, int truncation = 1000);

struct TruncationSpec {
  double alpha = 1.0;
  double beta = 1.0;
  long K = 30;
  long L = 30;
  long J = 1;
  long N = 1;  // total observation count n_1 + ... + n_J

  void validate() const;
};

// 4 [1 - {1 - (alpha/(1+alpha))^(K-1)}^J {1 - (beta/(1+beta))^(L-1)}^N],
// evaluated through log1p/expm1.
double truncation_bound(const TruncationSpec& spec);

}  // namespace nam

#endif  // NAM_PRIOR_ANALYTICS_HPP
