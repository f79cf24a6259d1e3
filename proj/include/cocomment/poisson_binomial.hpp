#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cocomment {

// Running moment sums of a Poisson Binomial variable: mean, variance and
// third central moment of a sum of independent Bernoulli(p) trials.
struct PbMoments {
  double mu = 0.0;
  double var = 0.0;
  double m3 = 0.0;
  std::size_t count = 0;  // number of trials

  void add(double p, std::size_t multiplicity = 1) {
    const double m = static_cast<double>(multiplicity);
    const double q = p * (1.0 - p);
    mu += m * p;
    var += m * q;
    m3 += m * q * (1.0 - 2.0 * p);
    count += multiplicity;
  }
};

PbMoments pb_moments(std::span<const double> params);

inline constexpr std::size_t kDefaultExactCap = 2048;

// Probability mass function by sequential convolution, O(n^2).
std::vector<double> pb_pmf_exact(std::span<const double> params);

// Exact P(X <= k). Refuses (std::length_error) vectors longer than `cap`;
// this path is an oracle, not the production percentile.
double pb_cdf_exact(std::span<const double> params, std::int64_t k, std::size_t cap = kDefaultExactCap);

// Refined normal approximation of P(X <= k):
//   x = (k + 0.5 - mu) / sigma
//   F = Phi(x) + skew * (1 - x^2) * phi(x) / 6,  skew = m3 / sigma^3
// clamped to [0, 1]. With var == 0 the distribution is a point mass at mu
// and the exact step function is returned.
double pb_cdf_rna(double mu, double var, double m3, double k);
inline double pb_cdf_rna(const PbMoments& m, double k) { return pb_cdf_rna(m.mu, m.var, m.m3, k); }

// Smallest integer k with CDF(k) >= q, for 0 < q < 1.
class PbPercentile {
 public:
  explicit PbPercentile(double q);

  double level() const { return q_; }

  // RNA search starting from ceil(mu + sigma * z_q), scanning locally.
  // The result never exceeds the trial count.
  std::uint32_t rna(const PbMoments& m) const;

  // Exact search on the explicit parameter vector. Only the low tail of the
  // pmf up to the answer is materialised.
  std::uint32_t exact(std::span<const double> params) const;

 private:
  double q_;
  double z_;
};

enum class PercentileMethod { kRna, kExact };

std::uint32_t pb_percentile(std::span<const double> params, double q,
                            PercentileMethod method = PercentileMethod::kRna);

}  // namespace cocomment
