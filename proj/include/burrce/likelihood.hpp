#ifndef BURRCE_LIKELIHOOD_HPP
#define BURRCE_LIKELIHOOD_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "burrce/burr.hpp"

namespace burrce {

enum class ObsStatus { Exact, Censored };

struct Observation {
  double value;
  ObsStatus status;
};

/// A lifetime sample mixing exact failure times and right-censored
/// times. Values must be positive and finite; the sample may not be
/// empty. Log-values are cached on construction (every likelihood pass
/// needs them).
class Observations {
 public:
  explicit Observations(std::vector<Observation> items);

  /// All-exact sample.
  static Observations complete(std::span<const double> values);

  std::size_t size() const { return items_.size(); }
  std::size_t exact_count() const { return exact_count_; }
  std::size_t censored_count() const { return items_.size() - exact_count_; }
  bool is_complete() const { return exact_count_ == items_.size(); }

  const std::vector<Observation>& items() const { return items_; }
  double log_value(std::size_t i) const { return log_values_[i]; }
  double min_value() const { return min_value_; }

 private:
  std::vector<Observation> items_;
  std::vector<double> log_values_;
  std::size_t exact_count_ = 0;
  double min_value_ = 0.0;
};

/// Multiply-censored log-likelihood:
///   sum_Exact [ln k + ln c + (c-1) ln x_i - (k+1) ln(1+x_i^c)]
///   - k sum_Censored ln(1+x_j^c).
/// With no censored items this equals sum of log_pdf. Well defined even
/// when all observations are censored (estimators reject that case, not
/// this function). Terms are reduced by pairwise summation, so the
/// result is bit-stable for a given observation order.
double loglik(const BurrParams& p, const Observations& obs);

struct Score {
  double dc;
  double dk;
};

/// Analytic gradient of loglik in (c, k). The x^c/(1+x^c) factors are
/// evaluated as sigmoid(c ln x) so large x^c cannot overflow.
Score score(const BurrParams& p, const Observations& obs);

/// Closed-form conditional maximizer of loglik over k at fixed c:
///   k = r / sum_{i=1..n} ln(1+x_i^c)
/// summing over all n observations, exact and censored.
double profile_k(double c, const Observations& obs);

}  // namespace burrce

#endif  // BURRCE_LIKELIHOOD_HPP
