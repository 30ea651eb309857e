// burrfit: Burr XII maximum-likelihood estimation from the command line.
//
// Subcommands:
//   fit        estimate (c, k) from a value,status CSV
//   sample     generate complete or multiply censored synthetic data
//   benchmark  run a replication study from a JSON spec
//
// Exit codes: 0 success, 1 input/config error, 2 numerical non-convergence.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "burrce/baselines.hpp"
#include "burrce/burr.hpp"
#include "burrce/ce.hpp"
#include "burrce/errors.hpp"
#include "burrce/gof.hpp"
#include "burrce/simulate.hpp"

namespace {

using namespace burrce;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// --seed wins; BURRFIT_SEED is the fallback; otherwise 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("BURRFIT_SEED")) {
    const std::string_view sv(env);
    std::uint64_t v = 0;
    const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (res.ec == std::errc() && res.ptr == sv.data() + sv.size()) return v;
    throw DomainError("BURRFIT_SEED is not a valid unsigned integer");
  }
  return 0;
}

struct ParsedData {
  std::vector<Observation> items;
  bool has_status_column = false;
};

ParsedData read_data_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open input file '" + path + "'");
  ParsedData data;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!saw_header) {
      saw_header = true;
      if (fields.empty() || fields[0] != "value" || fields.size() > 2 ||
          (fields.size() == 2 && fields[1] != "status")) {
        throw DomainError("line " + std::to_string(line_no) +
                          ": expected header 'value' or 'value,status'");
      }
      data.has_status_column = fields.size() == 2;
      continue;
    }
    if (fields.size() != (data.has_status_column ? 2u : 1u)) {
      throw DomainError("line " + std::to_string(line_no) +
                        ": wrong number of fields");
    }
    double value = 0.0;
    const auto res = std::from_chars(
        fields[0].data(), fields[0].data() + fields[0].size(), value);
    if (res.ec != std::errc() ||
        res.ptr != fields[0].data() + fields[0].size()) {
      throw DomainError("line " + std::to_string(line_no) +
                        ": cannot parse value '" + fields[0] + "'");
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw DomainError("line " + std::to_string(line_no) +
                        ": values must be positive and finite");
    }
    ObsStatus status = ObsStatus::Exact;
    if (data.has_status_column) {
      if (fields[1] == "1") {
        status = ObsStatus::Exact;
      } else if (fields[1] == "0") {
        status = ObsStatus::Censored;
      } else {
        throw DomainError("line " + std::to_string(line_no) +
                          ": status must be 0 or 1, got '" + fields[1] + "'");
      }
    }
    data.items.push_back({value, status});
  }
  return data;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open output file '" + path + "'");
  f << text;
}

struct FitFlags {
  std::string input;
  bool censored = false;
  std::string method = "ce";
  std::optional<std::uint64_t> seed;
  std::string format = "text";
  CeConfig ce;
  NrConfig nr;
  EmConfig em;
};

int run_fit(const FitFlags& flags) {
  const ParsedData data = read_data_csv(flags.input);
  if (data.items.empty()) throw DomainError("no observations");
  if (flags.censored && !data.has_status_column) {
    throw DomainError("--censored was given but the file has no status column");
  }
  const Observations obs(data.items);
  flags.ce.validate();
  flags.nr.validate();
  flags.em.validate();

  FitResult fit;
  if (flags.method == "ce") {
    RandomStream rng(resolve_seed(flags.seed));
    fit = fit_mle(obs, flags.ce, rng);
  } else if (flags.method == "nr") {
    fit = nr_fit(obs, flags.nr);
  } else {
    RandomStream rng(resolve_seed(flags.seed));
    fit = em_fit(obs, flags.em, rng);
  }

  // Post-fit K-S on the exact failure times against the fitted cdf.
  std::vector<double> exact;
  for (const Observation& o : obs.items()) {
    if (o.status == ObsStatus::Exact) exact.push_back(o.value);
  }
  const BurrParams fitted(fit.c, fit.k);
  const KsResult ks =
      ks_test(exact, [&fitted](double x) { return cdf(fitted, x); });

  if (flags.format == "json") {
    nlohmann::json j;
    j["method"] = flags.method;
    j["n"] = obs.size();
    j["exact"] = obs.exact_count();
    j["censored"] = obs.censored_count();
    j["c"] = fit.c;
    j["k"] = fit.k;
    j["loglik"] = fit.loglik;
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    j["seconds"] = fit.seconds;
    j["wingo_warning"] = fit.wingo_warning;
    j["ks"] = {{"statistic", ks.statistic},
               {"p_value", ks.p_value},
               {"note", "post-fit, approximate"}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "method: " << flags.method << "\n"
              << "observations: " << obs.size() << " (exact "
              << obs.exact_count() << ", censored " << obs.censored_count()
              << ")\n"
              << "c: " << format_double(fit.c) << "\n"
              << "k: " << format_double(fit.k) << "\n"
              << "loglik: " << format_double(fit.loglik) << "\n"
              << "iterations: " << fit.iterations << "\n"
              << "converged: " << (fit.converged ? "yes" : "no") << "\n"
              << "seconds: " << format_double(fit.seconds) << "\n"
              << "ks_statistic: " << format_double(ks.statistic) << "\n"
              << "ks_pvalue: " << format_double(ks.p_value)
              << " (post-fit, approximate)\n";
    if (fit.wingo_warning) {
      std::cout << "warning: no observation below 1; the Burr XII MLE may "
                   "not exist (Wingo condition)\n";
    }
  }
  return fit.converged ? kExitOk : kExitNotConverged;
}

struct SampleFlags {
  double c = 0.0;
  double k = 0.0;
  int n = 0;
  double cl = 0.0;
  std::optional<std::uint64_t> seed;
  std::string out = "-";
};

int run_sample(const SampleFlags& flags) {
  if (!(flags.cl >= 0.0 && flags.cl < 1.0)) {
    throw DomainError("--cl must lie in [0,1)");
  }
  if (flags.n < 1) throw DomainError("--n must be >= 1");
  const BurrParams params(flags.c, flags.k);
  RandomStream rng(resolve_seed(flags.seed));
  std::string csv = "value,status\n";
  if (flags.cl == 0.0) {
    for (double x : sample(params, static_cast<std::size_t>(flags.n), rng)) {
      csv += format_double(x);
      csv += ",1\n";
    }
  } else {
    const Observations obs = generate_censored(params, flags.n, flags.cl, rng);
    for (const Observation& o : obs.items()) {
      csv += format_double(o.value);
      csv += (o.status == ObsStatus::Exact) ? ",1\n" : ",0\n";
    }
  }
  write_text(flags.out, csv);
  return kExitOk;
}

struct BenchmarkFlags {
  std::string spec_path;
  std::string out = "-";
  int jobs = 1;
  std::string format = "csv";
  bool timing = false;
};

int run_benchmark_cmd(const BenchmarkFlags& flags) {
  std::ifstream in(flags.spec_path);
  if (!in) throw DomainError("cannot open spec file '" + flags.spec_path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError("spec is not valid JSON: " + std::string(e.what()));
  }
  BenchmarkSpec spec = parse_spec(doc);
  if (flags.timing) spec.timing = true;
  const BenchmarkReport report = run_benchmark(spec, flags.jobs);
  write_text(flags.out, emit_report(report, flags.format));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Burr XII maximum-likelihood estimation via the cross-entropy "
               "method, with Newton-Raphson and Monte-Carlo-EM baselines"};
  app.require_subcommand(1);

  FitFlags fit_flags;
  CLI::App* fit = app.add_subcommand("fit", "Fit Burr XII parameters to a CSV");
  fit->add_option("input", fit_flags.input, "CSV with header value[,status]")
      ->required();
  fit->add_flag("--censored", fit_flags.censored,
                "Require a status column (1 exact, 0 right-censored)");
  fit->add_option("--method", fit_flags.method, "Estimator")
      ->check(CLI::IsMember({"ce", "nr", "em"}));
  std::optional<std::uint64_t> fit_seed;
  fit->add_option("--seed", fit_seed, "RNG seed (default: $BURRFIT_SEED or 0)");
  fit->add_option("--format", fit_flags.format, "Report format")
      ->check(CLI::IsMember({"text", "json"}));
  fit->add_option("--ce-population", fit_flags.ce.population);
  fit->add_option("--ce-elite-fraction", fit_flags.ce.elite_fraction);
  fit->add_option("--ce-mean-smoothing", fit_flags.ce.mean_smoothing);
  fit->add_option("--ce-std-smoothing", fit_flags.ce.std_smoothing);
  fit->add_option("--ce-stop-threshold", fit_flags.ce.stop_threshold);
  fit->add_option("--ce-init-mean", fit_flags.ce.init_mean);
  fit->add_option("--ce-init-std", fit_flags.ce.init_std);
  fit->add_option("--ce-max-iterations", fit_flags.ce.max_iterations);
  fit->add_option("--nr-tol", fit_flags.nr.tol);
  fit->add_option("--nr-max-iter", fit_flags.nr.max_iter);
  std::optional<double> c_init;
  fit->add_option("--c-init", c_init,
                  "Newton-Raphson starting c (default: auto scan)");
  fit->add_option("--em-mc-samples", fit_flags.em.mc_samples);
  fit->add_option("--em-tol", fit_flags.em.tol);
  fit->add_option("--em-max-iter", fit_flags.em.max_iter);

  SampleFlags sample_flags;
  CLI::App* smp = app.add_subcommand("sample", "Generate synthetic data");
  smp->add_option("--c", sample_flags.c, "Shape c")->required();
  smp->add_option("--k", sample_flags.k, "Shape k")->required();
  smp->add_option("--n", sample_flags.n, "Sample size")->required();
  smp->add_option("--cl", sample_flags.cl, "Censoring level in [0,1)");
  std::optional<std::uint64_t> sample_seed;
  smp->add_option("--seed", sample_seed,
                  "RNG seed (default: $BURRFIT_SEED or 0)");
  smp->add_option("--out", sample_flags.out, "Output path ('-' = stdout)");

  BenchmarkFlags bench_flags;
  CLI::App* bench =
      app.add_subcommand("benchmark", "Run a replication study from JSON");
  bench->add_option("spec", bench_flags.spec_path, "Benchmark spec JSON")
      ->required();
  bench->add_option("--out", bench_flags.out, "Output path ('-' = stdout)");
  bench->add_option("--jobs", bench_flags.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  bench->add_option("--format", bench_flags.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
  bench->add_flag("--timing", bench_flags.timing,
                  "Measure wall-clock per fit (makes output run-dependent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (*fit) {
      fit_flags.seed = fit_seed;
      if (c_init) fit_flags.nr.c_init = *c_init;
      return run_fit(fit_flags);
    }
    if (*smp) {
      sample_flags.seed = sample_seed;
      return run_sample(sample_flags);
    }
    return run_benchmark_cmd(bench_flags);
  } catch (const NoRootError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const AllInfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
