#ifndef BURRCE_SIMULATE_HPP
#define BURRCE_SIMULATE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "burrce/baselines.hpp"
#include "burrce/ce.hpp"
#include "burrce/likelihood.hpp"

#include <json.hpp>

namespace burrce {

/// One experiment cell: true parameters, sample size, censoring level,
/// replication count and the estimators to run on each replication.
struct BenchmarkCell {
  double c;
  double k;
  int n;
  double cl;  // censoring level in [0,1)
  int replications;
  std::vector<Method> methods;
};

struct BenchmarkSpec {
  std::uint64_t master_seed = 0;
  std::vector<BenchmarkCell> cells;
  CeConfig ce;
  NrConfig nr;
  EmConfig em;
  /// When false (default) the wall-clock column is left absent so the
  /// emitted report is byte-identical across runs and thread counts.
  bool timing = false;
};

/// Censoring kernel: the first r values are kept exact, each remaining
/// value y is replaced by y*u with its paired uniform u and flagged
/// censored. raw.size() = n, u.size() = n - r.
std::vector<Observation> apply_multiple_censoring(std::span<const double> raw,
                                                  std::span<const double> u,
                                                  std::size_t r);

/// Multiply-censored sample generator: n Burr draws, r = round(n(1-cl))
/// kept exact, the rest scaled by fresh uniforms and flagged censored.
/// Stream order: all n Burr draws first, then the n-r uniforms.
Observations generate_censored(const BurrParams& params, int n, double cl,
                               RandomStream& rng);

/// Aggregates for one (cell, method) pair. Statistics are over converged
/// replications only; absent when no (std: fewer than two) replication
/// converged. mean_seconds is absent when timing was off.
struct MethodStats {
  Method method;
  std::optional<double> c_mean, c_std, c_abs_bias;
  std::optional<double> k_mean, k_std, k_abs_bias;
  std::optional<double> mean_seconds;
  double convergence_rate = 0.0;
};

struct CellReport {
  BenchmarkCell cell;
  std::vector<MethodStats> methods;  // canonical order ce, nr, em
  bool failed = false;               // cell-level fatal error
  std::string failure;
};

struct BenchmarkReport {
  std::vector<CellReport> cells;  // spec order
};

/// Runs every cell x replication x method. Replication seeds derive from
/// (master_seed, cell index, replication index) via derive_seed, and the
/// same generated dataset is shared by all methods within a replication,
/// so the report is independent of `jobs`. Replications that fail to
/// converge (or throw) count against convergence_rate and are excluded
/// from the moment aggregates; a data-generation error fails the whole
/// cell without aborting the others.
BenchmarkReport run_benchmark(const BenchmarkSpec& spec, int jobs = 1);

/// Serializes a report. format is "csv" (columns: method, c_true,
/// k_true, n, CL, replications, c_mean, c_std, c_abs_bias, k_mean,
/// k_std, k_abs_bias, mean_seconds, convergence_rate; one row per
/// (cell, method); absent statistics emit as empty fields) or "json"
/// (same fields, absent as null). Anything else throws
/// UnsupportedFormatError.
std::string emit_report(const BenchmarkReport& report,
                        std::string_view format);

/// Parses and validates a benchmark spec document; throws
/// SpecValidationError carrying the JSON pointer of the first offending
/// field.
BenchmarkSpec parse_spec(const nlohmann::json& doc);

}  // namespace burrce

#endif  // BURRCE_SIMULATE_HPP
