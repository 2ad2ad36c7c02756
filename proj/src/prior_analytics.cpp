#include "nam/prior_analytics.hpp"

#include <cmath>
#include <map>
#include <vector>

#include "nam/errors.hpp"

namespace nam {

namespace {

constexpr double kResidualCutoff = 1e-12;

void check_probability(double h, const char* name) {
  if (!(h >= 0.0 && h <= 1.0)) {
    throw DomainError(std::string("PriorSpec: ") + name + " must lie in [0, 1]");
  }
}

void check_concentration(double c, const char* name) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw DomainError(std::string(name) + " must be finite and nonnegative");
  }
}

// GEM(concentration) weights generated on demand.
class LazySticks {
 public:
  LazySticks(double concentration, int cap) : concentration_(concentration), cap_(cap) {}

  double weight(std::size_t k, std::mt19937_64& rng) {
    while (weights_.size() <= k && !closed_) extend(rng);
    return k < weights_.size() ? weights_[k] : 0.0;
  }

  std::size_t size() const { return weights_.size(); }

  // Index drawn from the weights, generating sticks as the walk needs them.
  std::size_t draw(std::mt19937_64& rng) {
    const double u = uniform_(rng);
    double cumulative = 0.0;
    for (std::size_t k = 0;; ++k) {
      cumulative += weight(k, rng);
      if (u < cumulative || (closed_ && k + 1 >= weights_.size())) return k;
    }
  }

  void close(std::mt19937_64& rng) {
    while (!closed_) extend(rng);
  }

  const std::vector<double>& weights() const { return weights_; }

 private:
  void extend(std::mt19937_64& rng) {
    if (static_cast<int>(weights_.size()) + 1 >= cap_ || residual_ < kResidualCutoff) {
      weights_.push_back(residual_);
      residual_ = 0.0;
      closed_ = true;
      return;
    }
    // Beta(1, c) by inversion: 1 - U^(1/c).
    double v = 1.0;
    if (concentration_ > 0.0) {
      v = -std::expm1(std::log(1.0 - uniform_(rng)) / concentration_);
    }
    weights_.push_back(residual_ * v);
    residual_ *= 1.0 - v;
  }

  double concentration_;
  int cap_;
  std::vector<double> weights_;
  double residual_ = 1.0;
  bool closed_ = false;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Bernoulli(h) membership indicators, shared across every random measure
// that references the same atoms.
class Memberships {
 public:
  explicit Memberships(double h) : h_(h) {}
  bool operator()(std::size_t k, std::mt19937_64& rng) {
    while (bits_.size() <= k) bits_.push_back(uniform_(rng) < h_);
    return bits_[k];
  }

 private:
  double h_;
  std::vector<bool> bits_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

void PriorSpec::validate() const {
  check_concentration(alpha, "alpha");
  check_concentration(beta, "beta");
  check_probability(hx, "hx");
  check_probability(hy, "hy");
}

double prior_mean(const PriorSpec& spec) {
  spec.validate();
  return spec.hx * spec.hy;
}

double prior_variance(const PriorSpec& spec) {
  spec.validate();
  const double q2 = spec.q2();
  return spec.hx * spec.hy * (q2 + spec.hy - q2 * spec.hy - spec.hx * spec.hy);
}

CoclusteringProbs coclustering_probs(double alpha, double beta) {
  check_concentration(alpha, "alpha");
  check_concentration(beta, "beta");
  const double q1 = 1.0 / (1.0 + alpha);
  return {q1, q1 * (1.0 / (1.0 + beta) + alpha / (2.0 * beta + 1.0))};
}

double cam_correlation(double alpha, double beta) {
  check_concentration(alpha, "alpha");
  check_concentration(beta, "beta");
  return 1.0 - alpha * beta / ((1.0 + 2.0 * beta) * (1.0 + alpha));
}

double prior_correlation(const PriorSpec& spec) {
  spec.validate();
  const double q1 = spec.q1();
  const double q2 = spec.q2();
  const double q3 = spec.q3();
  if (spec.hy == 1.0) {
    return spec.hx == 1.0 ? q1 + q3 * (1.0 - q1) / q2 : q1;
  }
  const double odds_y = spec.hy / (1.0 - spec.hy);
  return q1 + q3 * (1.0 - q1) * spec.hx / (q2 + odds_y * (1.0 - spec.hx));
}

NamMeasureDraw sample_nam_measure(double alpha, double beta, double hx, double hy,
                                  int truncation, std::mt19937_64& rng) {
  PriorSpec{alpha, beta, hx, hy}.validate();
  if (truncation < 2) throw DomainError("sample_nam_measure: truncation must be >= 2");

  LazySticks pi(alpha, truncation);
  Memberships in_x(hx);
  Memberships in_y(hy);
  std::map<std::size_t, LazySticks> omega;

  auto measure_of = [&](std::size_t k) {
    auto it = omega.try_emplace(k, beta, truncation).first;
    LazySticks& w = it->second;
    w.close(rng);
    double gy = 0.0;
    for (std::size_t l = 0; l < w.size(); ++l) {
      if (in_y(l, rng)) gy += w.weights()[l];
    }
    return std::pair<double, LazySticks*>(in_x(k, rng) ? gy : 0.0, &w);
  };

  NamMeasureDraw draw;
  const std::size_t k = pi.draw(rng);
  const std::size_t kp = pi.draw(rng);
  auto [g_j, w_j] = measure_of(k);
  draw.g_j = g_j;
  draw.obs_atom_j = static_cast<int>(w_j->draw(rng));
  auto [g_jp, w_jp] = measure_of(kp);
  draw.g_jp = g_jp;
  draw.obs_atom_jp = static_cast<int>(w_jp->draw(rng));
  draw.group_atom_j = static_cast<int>(k);
  draw.group_atom_jp = static_cast<int>(kp);
  return draw;
}

PriorMonteCarlo monte_carlo_prior(const PriorSpec& spec, std::size_t draws,
                                  std::uint64_t seed, int truncation) {
  spec.validate();
  if (draws < 2) throw DomainError("monte_carlo_prior: at least two draws required");
  std::mt19937_64 rng(seed);
  std::vector<double> g(draws), gp(draws);
  std::size_t same_group = 0;
  std::size_t same_obs = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    const NamMeasureDraw d = sample_nam_measure(spec.alpha, spec.beta, spec.hx, spec.hy,
                                                truncation, rng);
    g[i] = d.g_j;
    gp[i] = d.g_jp;
    same_group += d.group_atom_j == d.group_atom_jp;
    same_obs += d.obs_atom_j == d.obs_atom_jp;
  }
  const double n = static_cast<double>(draws);
  PriorMonteCarlo out;
  out.draws = draws;

  const double m = mean_of(g);
  out.mean = {m, sd_of(g) / std::sqrt(n)};

  std::vector<double> sq(draws);
  for (std::size_t i = 0; i < draws; ++i) sq[i] = (g[i] - m) * (g[i] - m);
  const double var = mean_of(sq) * n / (n - 1.0);
  out.variance = {var, sd_of(sq) / std::sqrt(n)};

  auto proportion = [n](std::size_t hits) {
    const double p = static_cast<double>(hits) / n;
    return McEstimate{p, std::sqrt(p * (1.0 - p) / n)};
  };
  out.group_coclustering = proportion(same_group);
  out.obs_coclustering = proportion(same_obs);

  // Pearson correlation with the influence-function standard error
  //   IF_i = xs_i ys_i - r (xs_i^2 + ys_i^2) / 2 on standardized values.
  const double mp = mean_of(gp);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    sxx += (g[i] - m) * (g[i] - m);
    syy += (gp[i] - mp) * (gp[i] - mp);
    sxy += (g[i] - m) * (gp[i] - mp);
  }
  if (sxx > 0.0 && syy > 0.0) {
    const double r = sxy / std::sqrt(sxx * syy);
    const double sx = std::sqrt(sxx / n);
    const double sy = std::sqrt(syy / n);
    std::vector<double> influence(draws);
    for (std::size_t i = 0; i < draws; ++i) {
      const double xs = (g[i] - m) / sx;
      const double ys = (gp[i] - mp) / sy;
      influence[i] = xs * ys - 0.5 * r * (xs * xs + ys * ys);
    }
    out.correlation = {r, sd_of(influence) / std::sqrt(n)};
  } else {
    out.correlation = {std::nan(""), std::nan("")};
  }
  return out;
}

void TruncationSpec::validate() const {
  check_concentration(alpha, "alpha");
  check_concentration(beta, "beta");
  if (K < 2 || L < 2) throw DomainError("TruncationSpec: K and L must be at least 2");
  if (J < 1 || N < J) throw DomainError("TruncationSpec: require J >= 1 and N >= J");
}

double truncation_bound(const TruncationSpec& spec) {
  spec.validate();
  const double ra = std::pow(spec.alpha / (1.0 + spec.alpha), static_cast<double>(spec.K - 1));
  const double rb = std::pow(spec.beta / (1.0 + spec.beta), static_cast<double>(spec.L - 1));
  const double log_keep = static_cast<double>(spec.J) * std::log1p(-ra) +
                          static_cast<double>(spec.N) * std::log1p(-rb);
  return -4.0 * std::expm1(log_keep);
}

}  // namespace nam
