#ifndef BURRCE_GOF_HPP
#define BURRCE_GOF_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <utility>

#include "burrce/ce.hpp"
#include "burrce/fit_result.hpp"
#include "burrce/random.hpp"

namespace burrce {

struct KsResult {
  double statistic = 0.0;  // two-sided D in [0,1]
  double p_value = 1.0;
  std::size_t n = 0;
};

/// Two-sided one-sample Kolmogorov-Smirnov distance:
///   D = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n)
/// over the sorted sample. The cdf callback must be monotone.
double ks_statistic(std::span<const double> sample,
                    const std::function<double(double)>& cdf);

/// Asymptotic tail probability Q(lambda) = 2 sum_{j>=1} (-1)^(j-1)
/// exp(-2 j^2 lambda^2) with the finite-n adjustment
/// lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) D; the series is truncated
/// once terms drop below 1e-12.
double ks_pvalue(double d, std::size_t n);

KsResult ks_test(std::span<const double> sample,
                 const std::function<double(double)>& cdf);

/// CE maximum-likelihood Burr XII fit of a complete sample followed by a
/// K-S test of the sample against the fitted cdf. Because the parameters
/// are estimated from the same sample, the returned p-value is post-fit
/// and approximate (biased upward); at least 5 observations are
/// required.
std::pair<FitResult, KsResult> fit_and_test(std::span<const double> sample,
                                            const CeConfig& cfg,
                                            RandomStream& rng);

}  // namespace burrce

#endif  // BURRCE_GOF_HPP
