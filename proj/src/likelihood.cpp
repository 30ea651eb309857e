#include "burrce/likelihood.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "burrce/errors.hpp"
#include "burrce/math_utils.hpp"

namespace burrce {

Observations::Observations(std::vector<Observation> items)
    : items_(std::move(items)) {
  if (items_.empty()) {
    throw DomainError("Observations: sample must not be empty");
  }
  log_values_.reserve(items_.size());
  min_value_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const double v = items_[i].value;
    if (!(std::isfinite(v) && v > 0.0)) {
      throw DomainError("Observations: value at index " + std::to_string(i) +
                        " must be positive and finite");
    }
    log_values_.push_back(std::log(v));
    min_value_ = std::fmin(min_value_, v);
    if (items_[i].status == ObsStatus::Exact) ++exact_count_;
  }
}

Observations Observations::complete(std::span<const double> values) {
  std::vector<Observation> items;
  items.reserve(values.size());
  for (double v : values) items.push_back({v, ObsStatus::Exact});
  return Observations(std::move(items));
}

double loglik(const BurrParams& p, const Observations& obs) {
  const double log_ck = std::log(p.k) + std::log(p.c);
  PairwiseSum sum;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double lx = obs.log_value(i);
    const double l1p = softplus(p.c * lx);  // ln(1 + x^c)
    if (obs.items()[i].status == ObsStatus::Exact) {
      sum.push(log_ck + (p.c - 1.0) * lx - (p.k + 1.0) * l1p);
    } else {
      sum.push(-p.k * l1p);
    }
  }
  return sum.value();
}

Score score(const BurrParams& p, const Observations& obs) {
  PairwiseSum dc_terms;
  PairwiseSum dk_terms;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double lx = obs.log_value(i);
    const double w = sigmoid(p.c * lx) * lx;  // (x^c ln x)/(1+x^c)
    const double l1p = softplus(p.c * lx);
    if (obs.items()[i].status == ObsStatus::Exact) {
      dc_terms.push(lx - (p.k + 1.0) * w);
    } else {
      dc_terms.push(-p.k * w);
    }
    dk_terms.push(l1p);
  }
  const double r = static_cast<double>(obs.exact_count());
  return {r / p.c + dc_terms.value(), r / p.k - dk_terms.value()};
}

double profile_k(double c, const Observations& obs) {
  if (!(c > 0.0)) throw DomainError("profile_k: c must be > 0");
  if (obs.exact_count() == 0) {
    throw NoExactObservationsError(
        "profile_k: no exact observations; profile maximizer degenerates");
  }
  PairwiseSum denom;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    denom.push(softplus(c * obs.log_value(i)));
  }
  return static_cast<double>(obs.exact_count()) / denom.value();
}

}  // namespace burrce
