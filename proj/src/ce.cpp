#include "burrce/ce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "burrce/errors.hpp"
#include "burrce/math_utils.hpp"

namespace burrce {

void CeConfig::validate() const {
  if (population < 1) throw DomainError("CeConfig: population must be >= 1");
  if (!(elite_fraction > 0.0 && elite_fraction < 1.0)) {
    throw DomainError("CeConfig: elite_fraction must be in (0,1)");
  }
  if (elite_count() < 2) {
    throw DomainError(
        "CeConfig: ceil(elite_fraction * population) must be >= 2");
  }
  if (!(mean_smoothing >= 0.0 && mean_smoothing <= 1.0)) {
    throw DomainError("CeConfig: mean_smoothing must be in [0,1]");
  }
  if (!(std_smoothing >= 0.0 && std_smoothing <= 1.0)) {
    throw DomainError("CeConfig: std_smoothing must be in [0,1]");
  }
  if (!(stop_threshold > 0.0)) {
    throw DomainError("CeConfig: stop_threshold must be > 0");
  }
  if (!(init_std > 0.0)) throw DomainError("CeConfig: init_std must be > 0");
  if (max_iterations < 1) {
    throw DomainError("CeConfig: max_iterations must be >= 1");
  }
}

double truncated_normal_positive(double mu, double sigma, RandomStream& rng) {
  const double lo = normal_cdf(-mu / sigma);
  const double v = rng.uniform();
  double u = lo + v * (1.0 - lo);
  if (u >= 1.0) u = std::nextafter(1.0, 0.0);
  const double x = mu + sigma * normal_quantile(u);
  // Rounding can land exactly on the truncation boundary; the contract
  // is strict positivity.
  return x > 0.0 ? x : std::numeric_limits<double>::min();
}

std::vector<Candidate> draw_candidates(const CeState& state,
                                       const CeConfig& cfg,
                                       RandomStream& rng) {
  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(cfg.population));
  for (int i = 0; i < cfg.population; ++i) {
    const double c = truncated_normal_positive(state.mu_c, state.sigma_c, rng);
    const double k = truncated_normal_positive(state.mu_k, state.sigma_k, rng);
    out.push_back({c, k});
  }
  return out;
}

std::vector<std::size_t> select_elites(std::span<const double> objectives,
                                       const CeConfig& cfg) {
  std::vector<std::size_t> finite;
  finite.reserve(objectives.size());
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    if (std::isfinite(objectives[i])) finite.push_back(i);
  }
  if (finite.empty()) {
    throw AllInfeasibleError("select_elites: no finite objective values");
  }
  const std::size_t n_elite =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.elite_count()),
                            finite.size());
  auto better = [&](std::size_t a, std::size_t b) {
    if (objectives[a] != objectives[b]) return objectives[a] > objectives[b];
    return a < b;
  };
  std::partial_sort(finite.begin(), finite.begin() + static_cast<long>(n_elite),
                    finite.end(), better);
  finite.resize(n_elite);
  return finite;
}

CeState update_state(const CeState& state,
                     std::span<const ScoredCandidate> elites,
                     const CeConfig& cfg) {
  const double n = static_cast<double>(elites.size());
  double mc = 0.0, mk = 0.0;
  for (const auto& e : elites) {
    mc += e.point.c;
    mk += e.point.k;
  }
  mc /= n;
  mk /= n;
  double vc = 0.0, vk = 0.0;
  for (const auto& e : elites) {
    vc += (e.point.c - mc) * (e.point.c - mc);
    vk += (e.point.k - mk) * (e.point.k - mk);
  }
  const double sc = std::sqrt(vc / n);  // population std, not sample
  const double sk = std::sqrt(vk / n);

  CeState next = state;
  next.mu_c = cfg.mean_smoothing * mc + (1.0 - cfg.mean_smoothing) * state.mu_c;
  next.mu_k = cfg.mean_smoothing * mk + (1.0 - cfg.mean_smoothing) * state.mu_k;
  next.sigma_c =
      cfg.std_smoothing * sc + (1.0 - cfg.std_smoothing) * state.sigma_c;
  next.sigma_k =
      cfg.std_smoothing * sk + (1.0 - cfg.std_smoothing) * state.sigma_k;
  next.iteration = state.iteration + 1;
  for (const auto& e : elites) {
    if (e.objective > next.best.objective) {
      next.best = {e.point.c, e.point.k, e.objective};
    }
  }
  return next;
}

MaximizeResult maximize(const Objective& objective, const CeConfig& cfg,
                        RandomStream& rng, const IterationObserver& observer) {
  cfg.validate();
  CeState state = CeState::initial(cfg);
  bool converged = false;
  while (state.iteration < cfg.max_iterations) {
    const auto candidates = draw_candidates(state, cfg, rng);
    std::vector<double> objectives(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double v = objective(candidates[i].c, candidates[i].k);
      objectives[i] =
          std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
    }
    const auto elite_idx = select_elites(objectives, cfg);
    std::vector<ScoredCandidate> elites;
    elites.reserve(elite_idx.size());
    for (std::size_t idx : elite_idx) {
      elites.push_back({candidates[idx], objectives[idx]});
    }
    state = update_state(state, elites, cfg);
    if (observer) observer(state);
    if (std::fmax(state.sigma_c, state.sigma_k) < cfg.stop_threshold) {
      converged = true;
      break;
    }
  }
  return {state.best.c, state.best.k, state.best.objective, state.iteration,
          converged};
}

FitResult fit_mle(const Observations& obs, const CeConfig& cfg,
                  RandomStream& rng) {
  if (obs.exact_count() == 0) {
    throw NoExactObservationsError(
        "fit_mle: at least one exact observation is required");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = maximize(
      [&obs](double c, double k) { return loglik(BurrParams(c, k), obs); },
      cfg, rng);
  const auto t1 = std::chrono::steady_clock::now();

  FitResult fit;
  fit.c = res.c;
  fit.k = res.k;
  fit.loglik = res.objective;
  fit.iterations = res.iterations;
  fit.converged = res.converged;
  fit.seconds = std::chrono::duration<double>(t1 - t0).count();
  fit.wingo_warning = !(obs.min_value() < 1.0);
  return fit;
}

}  // namespace burrce
