#ifndef BURRCE_BURR_HPP
#define BURRCE_BURR_HPP

#include <cstddef>
#include <vector>

#include "burrce/random.hpp"

namespace burrce {

/// Two-parameter Burr XII shape pair. Both parameters must be finite
/// and strictly positive.
struct BurrParams {
  double c;
  double k;

  BurrParams(double c_in, double k_in);
};

/// Density k c x^(c-1) (1+x^c)^-(k+1), x >= 0.
/// At x = 0 the density is 0 for c > 1 and k for c = 1; for c < 1 it is
/// unbounded and SingularDensityError is thrown.
double pdf(const BurrParams& p, double x);

/// ln pdf(x) for x > 0, finite for any positive finite x even where x^c
/// overflows.
double log_pdf(const BurrParams& p, double x);

/// Distribution function 1 - (1+x^c)^-k, x >= 0.
double cdf(const BurrParams& p, double x);

/// ln(1 - cdf(x)) = -k ln(1+x^c), computed without overflow.
double log_survival(const BurrParams& p, double x);

/// Inverse cdf: x = ((1-u)^(-1/k) - 1)^(1/c) for u in (0,1).
double quantile(const BurrParams& p, double u);

/// Inverse-method kernel mapping one uniform to one variate through the
/// survival function: x = (u^(-1/k) - 1)^(1/c). Distributionally
/// identical to quantile(1-u).
double sample_from_uniform(const BurrParams& p, double u);

/// Draw `count` variates from the stream.
std::vector<double> sample(const BurrParams& p, std::size_t count,
                           RandomStream& rng);

/// First moment k B(k - 1/c, 1 + 1/c); requires c k > 1.
double mean(const BurrParams& p);

/// Standard deviation from raw moments; requires c k > 2.
double std_dev(const BurrParams& p);

}  // namespace burrce

#endif  // BURRCE_BURR_HPP
