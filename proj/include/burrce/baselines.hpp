#ifndef BURRCE_BASELINES_HPP
#define BURRCE_BASELINES_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "burrce/fit_result.hpp"
#include "burrce/likelihood.hpp"
#include "burrce/random.hpp"

namespace burrce {

/// Newton-Raphson settings for the 1-D profile score equation
/// g(c) = d/dc loglik(c, profile_k(c)) = 0. c_init empty means Auto: a
/// log-spaced scan of g over [1e-2, 1e2] locates a sign change before
/// Newton starts (the iteration is sensitive to its starting point).
struct NrConfig {
  double tol = 1e-10;  // on |g|
  int max_iter = 200;
  std::optional<double> c_init;

  void validate() const;
};

/// Profile-score Newton solve; k is recovered as profile_k(c). Falls
/// back to bracketed bisection on [1e-3, 1e3] when Newton fails and a
/// sign change exists; throws NoRootError when neither succeeds.
FitResult nr_fit(const Observations& obs, const NrConfig& cfg = {});

/// Density of X given X > d:
///   k c (1+d^c)^k x^(c-1) / (1+x^c)^(k+1),  x > d.
double em_conditional_density(const BurrParams& p, double d, double x);

/// ln of the variate mapping one uniform through the conditional
/// survival: P(X > x | X > d) = u solves to
/// ln(1+x^c) = ln(1+d^c) - ln(u)/k. Returned in log form because every
/// consumer needs ln x.
double em_truncated_log_quantile(const BurrParams& p, double d, double u);

/// x = ((S(d) u)^(-1/k) - 1)^(1/c), u ~ Uniform(0,1); every value
/// strictly exceeds d.
std::vector<double> em_truncated_sample(const BurrParams& p, double d,
                                        std::size_t count, RandomStream& rng);

struct EmConfig {
  int mc_samples = 1000;  // E-step Monte Carlo size per censored point
  double tol = 1e-6;      // on max(|dc|, |dk|) between iterations
  int max_iter = 500;

  void validate() const;
};

/// Per-iteration EM diagnostics for convergence/monotonicity checks.
struct EmIterationStats {
  double c;             // parameters leaving this iteration
  double k;
  double q_incoming;    // Q of the incoming parameters under this E-step
  double q_maximized;   // Q after the M-step, same E-step draws
  double q_se;          // Monte Carlo standard error of Q
};

/// Monte-Carlo EM: the E-step replaces the censored conditional
/// expectations with sample averages over mc_samples conditional
/// variates per censored point; the M-step maximizes the resulting Q
/// over c by golden-section search on [1e-3, 1e3] with k profiled in
/// closed form (k = n / (sum_Exact ln(1+x_i^c) + sum_Cens E[ln(1+x^c)])).
/// One set of uniforms is drawn up front and reused across M-step
/// candidates and across iterations (common random numbers); this makes
/// the iteration a deterministic fixed point so the parameter-change
/// stopping rule is attainable.
FitResult em_fit(const Observations& obs, const EmConfig& cfg,
                 RandomStream& rng,
                 std::vector<EmIterationStats>* trace = nullptr);

}  // namespace burrce

#endif  // BURRCE_BASELINES_HPP
