#pragma once

#include <functional>
#include <span>
#include <vector>

namespace meneuron::stats {

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // unbiased

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct KsResult {
    double statistic = 0.0;
    double pvalue = 1.0;
};

/// One-sample KS against a continuous CDF (Stephens small-n correction).
KsResult ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf);

/// One-sample KS against Exp(mean).
KsResult ks_exponential(std::span<const double> x, double mean);

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

std::vector<double> ranks(std::span<const double> x);

}  // namespace meneuron::stats
