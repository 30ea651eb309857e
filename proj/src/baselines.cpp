#include "burrce/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "burrce/errors.hpp"
#include "burrce/math_utils.hpp"

namespace burrce {

void NrConfig::validate() const {
  if (!(tol > 0.0)) throw DomainError("NrConfig: tol must be > 0");
  if (max_iter < 1) throw DomainError("NrConfig: max_iter must be >= 1");
  if (c_init && !(std::isfinite(*c_init) && *c_init > 0.0)) {
    throw DomainError("NrConfig: c_init must be finite and > 0");
  }
}

void EmConfig::validate() const {
  if (mc_samples < 10) throw DomainError("EmConfig: mc_samples must be >= 10");
  if (!(tol > 0.0)) throw DomainError("EmConfig: tol must be > 0");
  if (max_iter < 1) throw DomainError("EmConfig: max_iter must be >= 1");
}

namespace {

// d/dc of the profiled log-likelihood. At k = profile_k(c) the k-score
// vanishes, so the total derivative reduces to the partial in c.
double profile_score(double c, const Observations& obs) {
  const double k = profile_k(c, obs);
  return score(BurrParams(c, k), obs).dc;
}

struct Bracket {
  double lo;
  double hi;
};

// First sign change of g over a log-spaced grid on [lo, hi].
std::optional<Bracket> scan_for_sign_change(const Observations& obs, double lo,
                                            double hi, int points) {
  double prev_c = lo;
  double prev_g = profile_score(lo, obs);
  for (int i = 1; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    const double c = lo * std::pow(hi / lo, t);
    const double g = profile_score(c, obs);
    if (std::isfinite(prev_g) && std::isfinite(g) &&
        ((prev_g <= 0.0 && g >= 0.0) || (prev_g >= 0.0 && g <= 0.0))) {
      return Bracket{prev_c, c};
    }
    prev_c = c;
    prev_g = g;
  }
  return std::nullopt;
}

bool score_small(const BurrParams& p, const Observations& obs) {
  const Score s = score(p, obs);
  return std::isfinite(s.dc) && std::isfinite(s.dk) && std::fabs(s.dc) < 1e-5 &&
         std::fabs(s.dk) < 1e-5;
}

}  // namespace

FitResult nr_fit(const Observations& obs, const NrConfig& cfg) {
  cfg.validate();
  if (obs.exact_count() == 0) {
    throw NoExactObservationsError(
        "nr_fit: at least one exact observation is required");
  }
  const auto t0 = std::chrono::steady_clock::now();

  double c;
  if (cfg.c_init) {
    c = *cfg.c_init;
  } else {
    const auto bracket = scan_for_sign_change(obs, 1e-2, 1e2, 81);
    c = bracket ? std::sqrt(bracket->lo * bracket->hi) : 1.0;
  }

  int iters = 0;
  for (; iters < cfg.max_iter; ++iters) {
    const double g = profile_score(c, obs);
    if (!std::isfinite(g)) break;
    if (std::fabs(g) < cfg.tol) break;
    const double h = std::fmin(1e-6 * std::fmax(1.0, c), 0.5 * c);
    const double gp =
        (profile_score(c + h, obs) - profile_score(c - h, obs)) / (2.0 * h);
    if (!std::isfinite(gp) || gp == 0.0) break;
    double cn = c - g / gp;
    if (!std::isfinite(cn)) break;
    if (!(cn > 0.0)) cn = 0.5 * c;
    const bool stalled =
        std::fabs(cn - c) <= 1e-15 * std::fmax(1.0, std::fabs(c));
    c = cn;
    if (stalled) break;
  }

  double k = profile_k(c, obs);
  if (!score_small(BurrParams(c, k), obs)) {
    // Newton wandered: bisection on a bracketing sign change, if any.
    const auto bracket = scan_for_sign_change(obs, 1e-3, 1e3, 241);
    if (!bracket) {
      throw NoRootError(
          "nr_fit: profile score has no sign change in [1e-3, 1e3] and "
          "Newton iteration failed");
    }
    double lo = bracket->lo, hi = bracket->hi;
    double g_lo = profile_score(lo, obs);
    for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i, ++iters) {
      const double mid = 0.5 * (lo + hi);
      const double g_mid = profile_score(mid, obs);
      if ((g_lo <= 0.0) == (g_mid <= 0.0)) {
        lo = mid;
        g_lo = g_mid;
      } else {
        hi = mid;
      }
    }
    c = 0.5 * (lo + hi);
    k = profile_k(c, obs);
    if (!score_small(BurrParams(c, k), obs)) {
      throw NoRootError("nr_fit: bisection did not reach a stationary point");
    }
  }

  const auto t1 = std::chrono::steady_clock::now();
  FitResult fit;
  fit.c = c;
  fit.k = k;
  fit.loglik = loglik(BurrParams(c, k), obs);
  fit.iterations = iters;
  fit.converged = true;
  fit.seconds = std::chrono::duration<double>(t1 - t0).count();
  fit.wingo_warning = !(obs.min_value() < 1.0);
  return fit;
}

double em_conditional_density(const BurrParams& p, double d, double x) {
  if (!(d > 0.0)) throw DomainError("em_conditional_density: d must be > 0");
  if (!(x > d)) throw DomainError("em_conditional_density: x must exceed d");
  const double lx = std::log(x);
  return std::exp(std::log(p.k) + std::log(p.c) + p.k * log1p_pow(d, p.c) +
                  (p.c - 1.0) * lx - (p.k + 1.0) * softplus(p.c * lx));
}

double em_truncated_log_quantile(const BurrParams& p, double d, double u) {
  if (!(d > 0.0)) {
    throw DomainError("em_truncated_log_quantile: d must be > 0");
  }
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("em_truncated_log_quantile: u must be in (0,1)");
  }
  const double target = log1p_pow(d, p.c) - std::log(u) / p.k;
  return log_expm1(target) / p.c;
}

std::vector<double> em_truncated_sample(const BurrParams& p, double d,
                                        std::size_t count, RandomStream& rng) {
  std::vector<double> out;
  out.reserve(count);
  const double floor = std::nextafter(d, std::numeric_limits<double>::max());
  for (std::size_t i = 0; i < count; ++i) {
    const double x = std::exp(em_truncated_log_quantile(p, d, rng.uniform()));
    out.push_back(std::fmax(x, floor));
  }
  return out;
}

namespace {

struct EmData {
  std::vector<double> exact_logx;
  std::vector<double> censor_logd;  // ln d_j per censored point
  double exact_logx_sum = 0.0;
  std::size_t n = 0;
};

EmData split_observations(const Observations& obs) {
  EmData data;
  data.n = obs.size();
  PairwiseSum s;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (obs.items()[i].status == ObsStatus::Exact) {
      data.exact_logx.push_back(obs.log_value(i));
      s.push(obs.log_value(i));
    } else {
      data.censor_logd.push_back(obs.log_value(i));
    }
  }
  data.exact_logx_sum = s.value();
  return data;
}

// Golden-section maximizer on [lo, hi]; f must be unimodal there.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double width_tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > width_tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FitResult em_fit(const Observations& obs, const EmConfig& cfg,
                 RandomStream& rng, std::vector<EmIterationStats>* trace) {
  cfg.validate();
  if (obs.exact_count() == 0) {
    throw NoExactObservationsError(
        "em_fit: at least one exact observation is required");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const EmData data = split_observations(obs);
  const std::size_t n_cens = data.censor_logd.size();
  const std::size_t mc = static_cast<std::size_t>(cfg.mc_samples);
  const double n = static_cast<double>(data.n);

  // One uniform per (censored point, Monte Carlo draw), from
  // per-observation substreams; reused across M-step candidates and
  // across iterations so the fixed-point iteration is deterministic.
  const std::uint64_t base_seed = rng.next_u64();
  std::vector<double> uniforms(n_cens * mc);
  for (std::size_t j = 0; j < n_cens; ++j) {
    RandomStream sub(derive_seed(base_seed, j, 0));
    for (std::size_t s = 0; s < mc; ++s) uniforms[j * mc + s] = sub.uniform();
  }

  double c = 1.0;
  double k = profile_k(c, obs);
  std::vector<double> draw_logx(n_cens * mc);  // E-step imputations (log)
  std::vector<double> mean_logx(n_cens);
  std::vector<double> var_logx(n_cens);

  bool converged = false;
  int iter = 0;
  for (; iter < cfg.max_iter && !converged; ++iter) {
    // E-step: impute censored points under the current parameters.
    const double inv_k = 1.0 / k;
    for (std::size_t j = 0; j < n_cens; ++j) {
      const double base = softplus(c * data.censor_logd[j]);
      PairwiseSum m1, m2;
      for (std::size_t s = 0; s < mc; ++s) {
        const double target = base - std::log(uniforms[j * mc + s]) * inv_k;
        const double lx = log_expm1(target) / c;
        draw_logx[j * mc + s] = lx;
        m1.push(lx);
        m2.push(lx * lx);
      }
      mean_logx[j] = m1.value() / static_cast<double>(mc);
      var_logx[j] = std::fmax(
          0.0, m2.value() / static_cast<double>(mc) - mean_logx[j] * mean_logx[j]);
    }
    PairwiseSum a_sum;
    a_sum.push(data.exact_logx_sum);
    for (std::size_t j = 0; j < n_cens; ++j) a_sum.push(mean_logx[j]);
    const double a_total = a_sum.value();  // E[sum ln x_i]

    // B(cand) = sum_Exact ln(1+x^cand) + sum_Cens mean_s ln(1+x_s^cand).
    auto b_of = [&](double cand) {
      PairwiseSum b;
      for (double lx : data.exact_logx) b.push(softplus(cand * lx));
      for (std::size_t j = 0; j < n_cens; ++j) {
        PairwiseSum bj;
        for (std::size_t s = 0; s < mc; ++s) {
          bj.push(softplus(cand * draw_logx[j * mc + s]));
        }
        b.push(bj.value() / static_cast<double>(mc));
      }
      return b.value();
    };
    auto q_of = [&](double cand_c, double cand_k, double b) {
      return n * (std::log(cand_c) + std::log(cand_k)) +
             (cand_c - 1.0) * a_total - (cand_k + 1.0) * b;
    };
    auto q_profiled = [&](double cand) {
      const double b = b_of(cand);
      return q_of(cand, n / b, b);
    };

    // M-step: 1-D search in c with k profiled from dQ/dk = 0.
    const double c_next = golden_max(q_profiled, 1e-3, 1e3, 1e-9);
    const double b_next = b_of(c_next);
    const double k_next = n / b_next;

    if (trace) {
      const double q_in = q_of(c, k, b_of(c));
      const double q_max = q_of(c_next, k_next, b_next);
      // Var(Q) from the per-point Monte Carlo variances at the maximizer.
      double var_q = 0.0;
      for (std::size_t j = 0; j < n_cens; ++j) {
        PairwiseSum m1, m2;
        for (std::size_t s = 0; s < mc; ++s) {
          const double l1p = softplus(c_next * draw_logx[j * mc + s]);
          m1.push(l1p);
          m2.push(l1p * l1p);
        }
        const double mu = m1.value() / static_cast<double>(mc);
        const double v =
            std::fmax(0.0, m2.value() / static_cast<double>(mc) - mu * mu);
        var_q += (c_next - 1.0) * (c_next - 1.0) * var_logx[j] /
                     static_cast<double>(mc) +
                 (k_next + 1.0) * (k_next + 1.0) * v / static_cast<double>(mc);
      }
      trace->push_back({c_next, k_next, q_in, q_max, std::sqrt(var_q)});
    }

    const double delta = std::fmax(std::fabs(c_next - c), std::fabs(k_next - k));
    c = c_next;
    k = k_next;
    if (delta < cfg.tol) converged = true;
  }

  const auto t1 = std::chrono::steady_clock::now();
  FitResult fit;
  fit.c = c;
  fit.k = k;
  fit.loglik = loglik(BurrParams(c, k), obs);
  fit.iterations = iter;
  fit.converged = converged;
  fit.seconds = std::chrono::duration<double>(t1 - t0).count();
  fit.wingo_warning = !(obs.min_value() < 1.0);
  return fit;
}

}  // namespace burrce
