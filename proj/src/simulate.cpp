#include "burrce/simulate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <optional>
#include <thread>
#include <utility>

#include "burrce/errors.hpp"
#include "burrce/math_utils.hpp"

namespace burrce {

std::vector<Observation> apply_multiple_censoring(std::span<const double> raw,
                                                  std::span<const double> u,
                                                  std::size_t r) {
  if (r > raw.size() || u.size() != raw.size() - r) {
    throw DomainError("apply_multiple_censoring: size mismatch");
  }
  std::vector<Observation> out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i < r) {
      out.push_back({raw[i], ObsStatus::Exact});
    } else {
      out.push_back({raw[i] * u[i - r], ObsStatus::Censored});
    }
  }
  return out;
}

Observations generate_censored(const BurrParams& params, int n, double cl,
                               RandomStream& rng) {
  if (n < 1) throw DomainError("generate_censored: n must be >= 1");
  if (!(cl >= 0.0 && cl < 1.0)) {
    throw DomainError("generate_censored: cl must lie in [0,1)");
  }
  const auto r = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * (1.0 - cl)));
  if (r < 1) {
    throw DegenerateSpecError(
        "generate_censored: censoring level leaves no exact observations");
  }
  const std::vector<double> raw = sample(params, static_cast<std::size_t>(n), rng);
  std::vector<double> u(static_cast<std::size_t>(n) - r);
  for (double& v : u) v = rng.uniform();
  return Observations(apply_multiple_censoring(raw, u, r));
}

namespace {

constexpr std::array<Method, 3> kMethodOrder = {Method::Ce, Method::Nr,
                                                Method::Em};

int method_slot(Method m) { return static_cast<int>(m); }

struct RepOutcome {
  bool attempted = false;
  bool converged = false;
  double c = 0.0;
  double k = 0.0;
  double seconds = 0.0;
};

struct RepState {
  std::array<RepOutcome, 3> by_method;
  bool data_failed = false;
  std::string failure;
};

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkSpec& spec, int jobs) {
  spec.ce.validate();
  spec.nr.validate();
  spec.em.validate();
  if (jobs < 1) jobs = 1;

  struct Task {
    std::size_t cell;
    int rep;
  };
  std::vector<Task> tasks;
  std::vector<std::vector<RepState>> slots(spec.cells.size());
  for (std::size_t ci = 0; ci < spec.cells.size(); ++ci) {
    slots[ci].resize(static_cast<std::size_t>(spec.cells[ci].replications));
    for (int rep = 0; rep < spec.cells[ci].replications; ++rep) {
      tasks.push_back({ci, rep});
    }
  }

  auto run_task = [&](const Task& task) {
    const BenchmarkCell& cell = spec.cells[task.cell];
    RepState& state = slots[task.cell][static_cast<std::size_t>(task.rep)];
    const auto rep = static_cast<std::uint64_t>(task.rep);
    std::optional<Observations> obs;
    try {
      RandomStream data_rng(derive_seed(spec.master_seed, task.cell, rep, 0));
      obs.emplace(generate_censored(BurrParams(cell.c, cell.k), cell.n,
                                    cell.cl, data_rng));
    } catch (const Error& e) {
      state.data_failed = true;
      state.failure = e.what();
      return;
    }
    for (Method m : cell.methods) {
      RepOutcome& out = state.by_method[static_cast<std::size_t>(method_slot(m))];
      out.attempted = true;
      try {
        FitResult fit;
        switch (m) {
          case Method::Ce: {
            RandomStream rng(derive_seed(spec.master_seed, task.cell, rep, 1));
            fit = fit_mle(*obs, spec.ce, rng);
            break;
          }
          case Method::Nr:
            fit = nr_fit(*obs, spec.nr);
            break;
          case Method::Em: {
            RandomStream rng(derive_seed(spec.master_seed, task.cell, rep, 2));
            fit = em_fit(*obs, spec.em, rng);
            break;
          }
        }
        out.converged = fit.converged;
        out.c = fit.c;
        out.k = fit.k;
        out.seconds = fit.seconds;
      } catch (const Error&) {
        out.converged = false;  // counted against the convergence rate
      }
    }
  };

  if (jobs == 1 || tasks.size() <= 1) {
    for (const Task& t : tasks) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        run_task(tasks[i]);
      }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), tasks.size());
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Sequential aggregation in (cell, method, replication) order keeps the
  // report identical at any parallelism level.
  BenchmarkReport report;
  for (std::size_t ci = 0; ci < spec.cells.size(); ++ci) {
    const BenchmarkCell& cell = spec.cells[ci];
    CellReport cr;
    cr.cell = cell;
    for (const RepState& state : slots[ci]) {
      if (state.data_failed) {
        cr.failed = true;
        cr.failure = state.failure;
        break;
      }
    }
    for (Method m : kMethodOrder) {
      if (std::find(cell.methods.begin(), cell.methods.end(), m) ==
          cell.methods.end()) {
        continue;
      }
      MethodStats stats;
      stats.method = m;
      if (!cr.failed) {
        const auto slot = static_cast<std::size_t>(method_slot(m));
        PairwiseSum c_sum, k_sum, sec_sum;
        std::size_t converged = 0, attempted = 0;
        for (const RepState& state : slots[ci]) {
          const RepOutcome& out = state.by_method[slot];
          if (!out.attempted) continue;
          ++attempted;
          if (spec.timing) sec_sum.push(out.seconds);
          if (!out.converged) continue;
          ++converged;
          c_sum.push(out.c);
          k_sum.push(out.k);
        }
        stats.convergence_rate =
            static_cast<double>(converged) /
            static_cast<double>(cell.replications);
        if (converged >= 1) {
          const double cm = c_sum.value() / static_cast<double>(converged);
          const double km = k_sum.value() / static_cast<double>(converged);
          stats.c_mean = cm;
          stats.k_mean = km;
          stats.c_abs_bias = std::fabs(cm - cell.c);
          stats.k_abs_bias = std::fabs(km - cell.k);
          if (converged >= 2) {
            PairwiseSum c_sq, k_sq;
            for (const RepState& state : slots[ci]) {
              const RepOutcome& out = state.by_method[slot];
              if (!out.attempted || !out.converged) continue;
              c_sq.push((out.c - cm) * (out.c - cm));
              k_sq.push((out.k - km) * (out.k - km));
            }
            stats.c_std =
                std::sqrt(c_sq.value() / static_cast<double>(converged - 1));
            stats.k_std =
                std::sqrt(k_sq.value() / static_cast<double>(converged - 1));
          }
        }
        if (spec.timing && attempted > 0) {
          stats.mean_seconds = sec_sum.value() / static_cast<double>(attempted);
        }
      }
      cr.methods.push_back(stats);
    }
    report.cells.push_back(std::move(cr));
  }
  return report;
}

namespace {

const char* kCsvHeader =
    "method,c_true,k_true,n,CL,replications,c_mean,c_std,c_abs_bias,k_mean,"
    "k_std,k_abs_bias,mean_seconds,convergence_rate";

void append_opt(std::string& out, const std::optional<double>& v) {
  out.push_back(',');
  if (v) out += format_double(*v);
}

}  // namespace

std::string emit_report(const BenchmarkReport& report,
                        std::string_view format) {
  if (format == "csv") {
    std::string out = kCsvHeader;
    out.push_back('\n');
    for (const CellReport& cr : report.cells) {
      for (const MethodStats& ms : cr.methods) {
        out += method_name(ms.method);
        out.push_back(',');
        out += format_double(cr.cell.c);
        out.push_back(',');
        out += format_double(cr.cell.k);
        out.push_back(',');
        out += std::to_string(cr.cell.n);
        out.push_back(',');
        out += format_double(cr.cell.cl);
        out.push_back(',');
        out += std::to_string(cr.cell.replications);
        append_opt(out, ms.c_mean);
        append_opt(out, ms.c_std);
        append_opt(out, ms.c_abs_bias);
        append_opt(out, ms.k_mean);
        append_opt(out, ms.k_std);
        append_opt(out, ms.k_abs_bias);
        append_opt(out, ms.mean_seconds);
        out.push_back(',');
        out += format_double(ms.convergence_rate);
        out.push_back('\n');
      }
    }
    return out;
  }
  if (format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const CellReport& cr : report.cells) {
      for (const MethodStats& ms : cr.methods) {
        nlohmann::json row;
        row["method"] = std::string(method_name(ms.method));
        row["c_true"] = cr.cell.c;
        row["k_true"] = cr.cell.k;
        row["n"] = cr.cell.n;
        row["CL"] = cr.cell.cl;
        row["replications"] = cr.cell.replications;
        auto put = [&row](const char* key, const std::optional<double>& v) {
          if (v) {
            row[key] = *v;
          } else {
            row[key] = nullptr;
          }
        };
        put("c_mean", ms.c_mean);
        put("c_std", ms.c_std);
        put("c_abs_bias", ms.c_abs_bias);
        put("k_mean", ms.k_mean);
        put("k_std", ms.k_std);
        put("k_abs_bias", ms.k_abs_bias);
        put("mean_seconds", ms.mean_seconds);
        row["convergence_rate"] = ms.convergence_rate;
        if (cr.failed) row["failure"] = cr.failure;
        rows.push_back(std::move(row));
      }
    }
    return nlohmann::json{{"rows", rows}}.dump(2) + "\n";
  }
  throw UnsupportedFormatError("emit_report: unknown format '" +
                               std::string(format) + "'");
}

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw SpecValidationError(pointer, what);
}

double require_number(const json& j, const std::string& ptr) {
  if (!j.is_number()) fail(ptr, "expected a number");
  return j.get<double>();
}

std::int64_t require_int(const json& j, const std::string& ptr) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    fail(ptr, "expected an integer");
  }
  return j.get<std::int64_t>();
}

void check_keys(const json& obj, const std::string& ptr,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (std::string_view a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(ptr + "/" + key, "unknown field");
  }
}

}  // namespace

BenchmarkSpec parse_spec(const nlohmann::json& doc) {
  if (!doc.is_object()) fail("", "spec must be a JSON object");
  check_keys(doc, "", {"master_seed", "cells", "ce", "nr", "em", "timing"});

  BenchmarkSpec spec;
  if (doc.contains("master_seed")) {
    const json& ms = doc["master_seed"];
    if (!ms.is_number_integer() && !ms.is_number_unsigned()) {
      fail("/master_seed", "expected an integer");
    }
    spec.master_seed = ms.get<std::uint64_t>();
  }

  if (!doc.contains("cells")) fail("/cells", "required field is missing");
  const json& cells = doc["cells"];
  if (!cells.is_array() || cells.empty()) {
    fail("/cells", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string ptr = "/cells/" + std::to_string(i);
    const json& jc = cells[i];
    if (!jc.is_object()) fail(ptr, "expected an object");
    check_keys(jc, ptr, {"c", "k", "n", "cl", "replications", "methods"});
    for (const char* key : {"c", "k", "n", "cl", "replications", "methods"}) {
      if (!jc.contains(key)) {
        fail(ptr + "/" + key, "required field is missing");
      }
    }
    BenchmarkCell cell;
    cell.c = require_number(jc["c"], ptr + "/c");
    cell.k = require_number(jc["k"], ptr + "/k");
    if (!(std::isfinite(cell.c) && cell.c > 0.0)) {
      fail(ptr + "/c", "must be finite and > 0");
    }
    if (!(std::isfinite(cell.k) && cell.k > 0.0)) {
      fail(ptr + "/k", "must be finite and > 0");
    }
    const std::int64_t n = require_int(jc["n"], ptr + "/n");
    if (n < 1) fail(ptr + "/n", "must be >= 1");
    cell.n = static_cast<int>(n);
    cell.cl = require_number(jc["cl"], ptr + "/cl");
    if (!(cell.cl >= 0.0 && cell.cl < 1.0)) {
      fail(ptr + "/cl", "must lie in [0,1)");
    }
    const std::int64_t reps = require_int(jc["replications"], ptr + "/replications");
    if (reps < 1) fail(ptr + "/replications", "must be >= 1");
    cell.replications = static_cast<int>(reps);
    if (std::llround(static_cast<double>(cell.n) * (1.0 - cell.cl)) < 1) {
      fail(ptr + "/cl", "censoring level leaves no exact observations");
    }
    const json& jm = jc["methods"];
    if (!jm.is_array() || jm.empty()) {
      fail(ptr + "/methods", "expected a non-empty array");
    }
    std::array<bool, 3> seen{};
    for (std::size_t j = 0; j < jm.size(); ++j) {
      const std::string mptr = ptr + "/methods/" + std::to_string(j);
      if (!jm[j].is_string()) fail(mptr, "expected a string");
      const std::string name = jm[j].get<std::string>();
      if (name == "ce") {
        seen[0] = true;
      } else if (name == "nr") {
        seen[1] = true;
      } else if (name == "em") {
        seen[2] = true;
      } else {
        fail(mptr, "unknown method '" + name + "' (expected ce, nr or em)");
      }
    }
    for (std::size_t j = 0; j < kMethodOrder.size(); ++j) {
      if (seen[j]) cell.methods.push_back(kMethodOrder[j]);
    }
    spec.cells.push_back(std::move(cell));
  }

  if (doc.contains("ce")) {
    const json& jce = doc["ce"];
    if (!jce.is_object()) fail("/ce", "expected an object");
    check_keys(jce, "/ce",
               {"population", "elite_fraction", "mean_smoothing",
                "std_smoothing", "stop_threshold", "init_mean", "init_std",
                "max_iterations"});
    if (jce.contains("population")) {
      spec.ce.population =
          static_cast<int>(require_int(jce["population"], "/ce/population"));
    }
    if (jce.contains("elite_fraction")) {
      spec.ce.elite_fraction =
          require_number(jce["elite_fraction"], "/ce/elite_fraction");
    }
    if (jce.contains("mean_smoothing")) {
      spec.ce.mean_smoothing =
          require_number(jce["mean_smoothing"], "/ce/mean_smoothing");
    }
    if (jce.contains("std_smoothing")) {
      spec.ce.std_smoothing =
          require_number(jce["std_smoothing"], "/ce/std_smoothing");
    }
    if (jce.contains("stop_threshold")) {
      spec.ce.stop_threshold =
          require_number(jce["stop_threshold"], "/ce/stop_threshold");
    }
    if (jce.contains("init_mean")) {
      spec.ce.init_mean = require_number(jce["init_mean"], "/ce/init_mean");
    }
    if (jce.contains("init_std")) {
      spec.ce.init_std = require_number(jce["init_std"], "/ce/init_std");
    }
    if (jce.contains("max_iterations")) {
      spec.ce.max_iterations = static_cast<int>(
          require_int(jce["max_iterations"], "/ce/max_iterations"));
    }
    try {
      spec.ce.validate();
    } catch (const DomainError& e) {
      fail("/ce", e.what());
    }
  }

  if (doc.contains("nr")) {
    const json& jnr = doc["nr"];
    if (!jnr.is_object()) fail("/nr", "expected an object");
    check_keys(jnr, "/nr", {"tol", "max_iter", "c_init"});
    if (jnr.contains("tol")) {
      spec.nr.tol = require_number(jnr["tol"], "/nr/tol");
    }
    if (jnr.contains("max_iter")) {
      spec.nr.max_iter =
          static_cast<int>(require_int(jnr["max_iter"], "/nr/max_iter"));
    }
    if (jnr.contains("c_init")) {
      spec.nr.c_init = require_number(jnr["c_init"], "/nr/c_init");
    }
    try {
      spec.nr.validate();
    } catch (const DomainError& e) {
      fail("/nr", e.what());
    }
  }

  if (doc.contains("em")) {
    const json& jem = doc["em"];
    if (!jem.is_object()) fail("/em", "expected an object");
    check_keys(jem, "/em", {"mc_samples", "tol", "max_iter"});
    if (jem.contains("mc_samples")) {
      spec.em.mc_samples =
          static_cast<int>(require_int(jem["mc_samples"], "/em/mc_samples"));
    }
    if (jem.contains("tol")) {
      spec.em.tol = require_number(jem["tol"], "/em/tol");
    }
    if (jem.contains("max_iter")) {
      spec.em.max_iter =
          static_cast<int>(require_int(jem["max_iter"], "/em/max_iter"));
    }
    try {
      spec.em.validate();
    } catch (const DomainError& e) {
      fail("/em", e.what());
    }
  }

  if (doc.contains("timing")) {
    if (!doc["timing"].is_boolean()) fail("/timing", "expected a boolean");
    spec.timing = doc["timing"].get<bool>();
  }
  return spec;
}

}  // namespace burrce
