#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace mcp {

double normal_cdf(double x);

// sup_x |F_n(x) - F(x)| for the empirical law of the samples.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);
// Asymptotic 1% critical value 1.628 / sqrt(n).
double ks_critical_value_1pct(std::size_t n);

double binomial_std_error(double p, std::size_t trials);
// One-sided check freq <= p + k * sqrt(p(1-p)/trials) with p clamped to [0,1].
bool within_slack(double freq, double p, std::size_t trials, double k = 3.0);

struct SampleMoments {
  double mean;
  double variance;
};
SampleMoments sample_moments(const std::vector<double>& v);

// Frequencies of chi2_d < d(1 - tau) and chi2_d > d(1 + tau) over
// independent draws from the Monte Carlo stream of the seed.
struct ChiFrequencies {
  double lower;
  double upper;
};
ChiFrequencies chi_square_frequencies(int d, double tau, std::size_t trials,
                                      std::uint64_t seed);

// X^T Y / ||X||_2 for independent standard Gaussian X, Y of length n.
std::vector<double> gaussian_projection_samples(int n, std::size_t count,
                                                std::uint64_t seed);

}  // namespace mcp
