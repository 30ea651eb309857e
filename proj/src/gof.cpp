#include "burrce/gof.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "burrce/burr.hpp"
#include "burrce/errors.hpp"

namespace burrce {

double ks_statistic(std::span<const double> sample,
                    const std::function<double(double)>& cdf) {
  if (sample.empty()) throw EmptySampleError("ks_statistic: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::fmax(d, std::fmax(hi, lo));
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  if (!(d >= 0.0 && d <= 1.0)) throw DomainError("ks_pvalue: D must be in [0,1]");
  if (n < 1) throw DomainError("ks_pvalue: n must be >= 1");
  if (d == 0.0) return 1.0;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  const double a = -2.0 * lambda * lambda;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(a * j * j);
    sum += sign * term;
    if (term < 1e-12) {
      const double p = 2.0 * sum;
      return std::fmin(1.0, std::fmax(0.0, p));
    }
    sign = -sign;
  }
  // Terms decay too slowly only when lambda is tiny, where Q -> 1.
  return 1.0;
}

KsResult ks_test(std::span<const double> sample,
                 const std::function<double(double)>& cdf) {
  const double d = ks_statistic(sample, cdf);
  return {d, ks_pvalue(d, sample.size()), sample.size()};
}

std::pair<FitResult, KsResult> fit_and_test(std::span<const double> sample,
                                            const CeConfig& cfg,
                                            RandomStream& rng) {
  if (sample.size() < 5) {
    throw SampleTooSmallError(
        "fit_and_test: at least 5 observations are required for a "
        "two-parameter fit");
  }
  const Observations obs = Observations::complete(sample);
  const FitResult fit = fit_mle(obs, cfg, rng);
  const BurrParams fitted(fit.c, fit.k);
  const KsResult ks =
      ks_test(sample, [&fitted](double x) { return cdf(fitted, x); });
  return {fit, ks};
}

}  // namespace burrce
