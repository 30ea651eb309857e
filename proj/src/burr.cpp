#include "burrce/burr.hpp"

#include <cmath>
#include <string>

#include "burrce/errors.hpp"
#include "burrce/math_utils.hpp"

namespace burrce {

BurrParams::BurrParams(double c_in, double k_in) : c(c_in), k(k_in) {
  if (!(std::isfinite(c) && std::isfinite(k) && c > 0.0 && k > 0.0)) {
    throw DomainError("BurrParams: c and k must be finite and > 0 (got c=" +
                      std::to_string(c_in) + ", k=" + std::to_string(k_in) +
                      ")");
  }
}

double pdf(const BurrParams& p, double x) {
  if (!(x >= 0.0)) throw DomainError("pdf: x must be >= 0");
  if (x == 0.0) {
    if (p.c > 1.0) return 0.0;
    if (p.c == 1.0) return p.k;
    throw SingularDensityError("pdf: density unbounded at x = 0 for c < 1");
  }
  return std::exp(log_pdf(p, x));
}

double log_pdf(const BurrParams& p, double x) {
  if (!(x > 0.0)) throw DomainError("log_pdf: x must be > 0");
  const double lx = std::log(x);
  return std::log(p.k) + std::log(p.c) + (p.c - 1.0) * lx -
         (p.k + 1.0) * softplus(p.c * lx);
}

double cdf(const BurrParams& p, double x) {
  if (!(x >= 0.0)) throw DomainError("cdf: x must be >= 0");
  return -std::expm1(-p.k * log1p_pow(x, p.c));
}

double log_survival(const BurrParams& p, double x) {
  if (!(x >= 0.0)) throw DomainError("log_survival: x must be >= 0");
  return -p.k * log1p_pow(x, p.c);
}

double quantile(const BurrParams& p, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile: u must be in (0,1)");
  // ln x = ln((1-u)^(-1/k) - 1) / c, kept in log space end to end so
  // neither the inner expm1 nor x^c can overflow.
  return std::exp(log_expm1(-std::log1p(-u) / p.k) / p.c);
}

double sample_from_uniform(const BurrParams& p, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("sample_from_uniform: u must be in (0,1)");
  }
  return std::exp(log_expm1(-std::log(u) / p.k) / p.c);
}

std::vector<double> sample(const BurrParams& p, std::size_t count,
                           RandomStream& rng) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(sample_from_uniform(p, rng.uniform()));
  }
  return out;
}

namespace {

// k Gamma(k - m/c) Gamma(1 + m/c) / Gamma(k + 1) in log-gamma arithmetic;
// Gamma(k+1) alone would overflow for k beyond ~170.
double raw_moment(const BurrParams& p, double m) {
  return std::exp(std::log(p.k) + std::lgamma(p.k - m / p.c) +
                  std::lgamma(1.0 + m / p.c) - std::lgamma(p.k + 1.0));
}

}  // namespace

double mean(const BurrParams& p) {
  if (!(p.c * p.k > 1.0)) {
    throw MomentUndefinedError("mean: requires c*k > 1");
  }
  return raw_moment(p, 1.0);
}

double std_dev(const BurrParams& p) {
  if (!(p.c * p.k > 2.0)) {
    throw MomentUndefinedError("std_dev: requires c*k > 2");
  }
  const double m1 = raw_moment(p, 1.0);
  const double m2 = raw_moment(p, 2.0);
  return std::sqrt(m2 - m1 * m1);
}

}  // namespace burrce
