#ifndef BURRCE_CE_HPP
#define BURRCE_CE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "burrce/fit_result.hpp"
#include "burrce/likelihood.hpp"
#include "burrce/random.hpp"

namespace burrce {

/// Cross-entropy hyperparameters. Defaults follow the standard
/// continuous-CE recipe for this problem: elite quantile 0.1, mean
/// smoothing 0.8, std smoothing 0.6, stop threshold 0.005, proposal
/// initialized at mean 0 / std 10 on both coordinates.
struct CeConfig {
  int population = 100;
  double elite_fraction = 0.1;
  double mean_smoothing = 0.8;   // alpha, applied to the proposal means
  double std_smoothing = 0.6;    // beta, applied to the proposal stds
  double stop_threshold = 0.005; // epsilon on max(sigma_c, sigma_k)
  double init_mean = 0.0;
  double init_std = 10.0;
  int max_iterations = 500;

  int elite_count() const {
    return static_cast<int>(
        std::ceil(elite_fraction * static_cast<double>(population)));
  }

  /// Throws DomainError on an invalid combination (elite_count() must be
  /// at least 2 so elite variances are computable).
  void validate() const;
};

struct Candidate {
  double c;
  double k;
};

struct ScoredCandidate {
  Candidate point;
  double objective;
};

struct BestPoint {
  double c = 0.0;
  double k = 0.0;
  double objective = -std::numeric_limits<double>::infinity();
};

/// Evolving proposal: independent left-truncated normals on c and k.
struct CeState {
  double mu_c;
  double mu_k;
  double sigma_c;
  double sigma_k;
  int iteration = 0;
  BestPoint best;

  static CeState initial(const CeConfig& cfg) {
    return {cfg.init_mean, cfg.init_mean, cfg.init_std, cfg.init_std, 0, {}};
  }
};

/// One variate from a normal(mu, sigma^2) truncated to (0, inf), by
/// inverse cdf: u ~ Uniform(Phi(-mu/sigma), 1), value = mu +
/// sigma * Phi^-1(u). Always strictly positive.
double truncated_normal_positive(double mu, double sigma, RandomStream& rng);

/// N candidate pairs; per candidate, c is drawn before k, so the stream
/// consumption order is part of the determinism contract.
std::vector<Candidate> draw_candidates(const CeState& state,
                                       const CeConfig& cfg, RandomStream& rng);

/// Indices of the elite_count() largest finite objectives, ties broken
/// by lower index. Candidates with non-finite objective are never
/// selected; if every objective is non-finite, throws AllInfeasibleError.
std::vector<std::size_t> select_elites(std::span<const double> objectives,
                                       const CeConfig& cfg);

/// Elite means / population standard deviations (divide by the elite
/// count), then convex smoothing against the previous state. Updates
/// best-so-far from the top elite.
CeState update_state(const CeState& state, std::span<const ScoredCandidate> elites,
                     const CeConfig& cfg);

struct MaximizeResult {
  double c = 0.0;
  double k = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(double c, double k)>;
using IterationObserver = std::function<void(const CeState&)>;

/// Draw -> evaluate -> select -> update until max(sigma_c, sigma_k)
/// drops below the stop threshold or max_iterations expires. Returns the
/// best point ever sampled, not the terminal proposal mean. Non-finite
/// objective values are treated as -inf for selection.
MaximizeResult maximize(const Objective& objective, const CeConfig& cfg,
                        RandomStream& rng,
                        const IterationObserver& observer = nullptr);

/// Maximum-likelihood fit of a Burr XII sample (complete or multiply
/// censored) by CE on the log-likelihood.
FitResult fit_mle(const Observations& obs, const CeConfig& cfg,
                  RandomStream& rng);

}  // namespace burrce

#endif  // BURRCE_CE_HPP
