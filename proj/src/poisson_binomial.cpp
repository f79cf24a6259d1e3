#include "cocomment/poisson_binomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/normal.hpp>

namespace cocomment {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  static const double kNorm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return kNorm * std::exp(-0.5 * x * x);
}

void check_params(std::span<const double> params) {
  for (double p : params)
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("Poisson Binomial parameter outside [0, 1]");
}

// pmf[0..limit] of the sum; entries above `limit` are never needed because
// adding a trial only moves mass upward.
std::vector<double> truncated_pmf(std::span<const double> params, std::size_t limit) {
  limit = std::min(limit, params.size());
  std::vector<double> pmf(limit + 1, 0.0);
  pmf[0] = 1.0;
  std::size_t top = 0;
  for (double p : params) {
    const double q = 1.0 - p;
    top = std::min(top + 1, limit);
    for (std::size_t j = top; j > 0; --j) pmf[j] = pmf[j] * q + pmf[j - 1] * p;
    pmf[0] *= q;
  }
  return pmf;
}

}  // namespace

PbMoments pb_moments(std::span<const double> params) {
  PbMoments m;
  for (double p : params) m.add(p);
  return m;
}

std::vector<double> pb_pmf_exact(std::span<const double> params) {
  check_params(params);
  return truncated_pmf(params, params.size());
}

double pb_cdf_exact(std::span<const double> params, std::int64_t k, std::size_t cap) {
  if (params.size() > cap)
    throw std::length_error("exact Poisson Binomial CDF refused: " + std::to_string(params.size()) +
                            " parameters exceed the cap of " + std::to_string(cap));
  check_params(params);
  if (k < 0) return 0.0;
  if (static_cast<std::size_t>(k) >= params.size()) return 1.0;
  const auto pmf = truncated_pmf(params, static_cast<std::size_t>(k));
  double cdf = 0.0;
  for (double v : pmf) cdf += v;
  return std::clamp(cdf, 0.0, 1.0);
}

double pb_cdf_rna(double mu, double var, double m3, double k) {
  if (var < 0.0) throw std::invalid_argument("negative variance");
  if (var == 0.0) return k + 1e-9 >= std::round(mu) ? 1.0 : 0.0;
  const double sigma = std::sqrt(var);
  const double skew = m3 / (var * sigma);
  const double x = (k + 0.5 - mu) / sigma;
  const double f = normal_cdf(x) + skew * (1.0 - x * x) * normal_pdf(x) / 6.0;
  return std::clamp(f, 0.0, 1.0);
}

PbPercentile::PbPercentile(double q) : q_(q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("percentile level must lie in (0, 1)");
  z_ = boost::math::quantile(boost::math::normal_distribution<double>(), q);
}

std::uint32_t PbPercentile::rna(const PbMoments& m) const {
  const auto n = static_cast<std::int64_t>(m.count);
  if (n == 0) return 0;
  if (m.var <= 0.0) return static_cast<std::uint32_t>(std::clamp<std::int64_t>(std::llround(m.mu), 0, n));
  auto cdf = [&](std::int64_t k) { return k >= n ? 1.0 : pb_cdf_rna(m.mu, m.var, m.m3, static_cast<double>(k)); };
  auto k = static_cast<std::int64_t>(std::ceil(m.mu + std::sqrt(m.var) * z_));
  k = std::clamp<std::int64_t>(k, 0, n);
  if (cdf(k) >= q_) {
    while (k > 0 && cdf(k - 1) >= q_) --k;
  } else {
    while (k < n && cdf(k) < q_) ++k;
  }
  return static_cast<std::uint32_t>(k);
}

std::uint32_t PbPercentile::exact(std::span<const double> params) const {
  check_params(params);
  const PbMoments m = pb_moments(params);
  std::size_t limit = static_cast<std::size_t>(std::ceil(m.mu + 12.0 * std::sqrt(m.var))) + 8;
  for (;;) {
    limit = std::min(limit, params.size());
    const auto pmf = truncated_pmf(params, limit);
    double cdf = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      cdf += pmf[k];
      if (cdf >= q_) return static_cast<std::uint32_t>(k);
    }
    if (limit == params.size()) return static_cast<std::uint32_t>(params.size());
    limit *= 2;
  }
}

std::uint32_t pb_percentile(std::span<const double> params, double q, PercentileMethod method) {
  const PbPercentile solver(q);
  if (method == PercentileMethod::kExact) return solver.exact(params);
  check_params(params);
  return solver.rna(pb_moments(params));
}

}  // namespace cocomment
