#include "mcp/stats.hpp"

#include <algorithm>
#include <cmath>

#include "mcp/errors.hpp"
#include "mcp/rng.hpp"

namespace mcp {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DimensionError("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value_1pct(std::size_t n) {
  return 1.628 / std::sqrt(static_cast<double>(n));
}

double binomial_std_error(double p, std::size_t trials) {
  if (trials == 0) return 0.0;
  p = std::clamp(p, 0.0, 1.0);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

bool within_slack(double freq, double p, std::size_t trials, double k) {
  const double pc = std::clamp(p, 0.0, 1.0);
  return freq <= pc + k * binomial_std_error(pc, trials);
}

SampleMoments sample_moments(const std::vector<double>& v) {
  if (v.size() < 2) throw DimensionError("sample_moments: need two samples");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, var / static_cast<double>(v.size() - 1)};
}

ChiFrequencies chi_square_frequencies(int d, double tau, std::size_t trials,
                                      std::uint64_t seed) {
  if (d < 1 || trials == 0) throw DomainError("chi_square_frequencies: empty run");
  Rng rng(seed, Stream::kMonteCarlo, static_cast<std::uint32_t>(d));
  std::size_t lower = 0, upper = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      const double z = rng.normal();
      s += z * z;
    }
    lower += s < d * (1.0 - tau) ? 1 : 0;
    upper += s > d * (1.0 + tau) ? 1 : 0;
  }
  const double t = static_cast<double>(trials);
  return {static_cast<double>(lower) / t, static_cast<double>(upper) / t};
}

std::vector<double> gaussian_projection_samples(int n, std::size_t count,
                                                std::uint64_t seed) {
  if (n < 1) throw DomainError("gaussian_projection_samples: n must be positive");
  Rng rng(seed, Stream::kMonteCarlo, 0x4c33u);
  std::vector<double> out(count);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : out) {
    double norm = 0.0;
    for (auto& xi : x) {
      xi = rng.normal();
      norm += xi * xi;
    }
    double dot = 0.0;
    for (double xi : x) dot += xi * rng.normal();
    v = dot / std::sqrt(norm);
  }
  return out;
}

}  // namespace mcp
