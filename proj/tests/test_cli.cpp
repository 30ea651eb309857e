#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBinary = BURRFIT_PATH;

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("burrfit_test_" + name);
}

RunResult run(const std::string& args) {
  const fs::path out = temp_file("stdout.txt");
  const fs::path err = temp_file("stderr.txt");
  const std::string cmd =
      kBinary + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

}  // namespace

TEST_CASE("sample writes a deterministic complete CSV") {
  const fs::path f1 = temp_file("s1.csv"), f2 = temp_file("s2.csv");
  CHECK(run("sample --c 2 --k 5 --n 100 --cl 0 --seed 7 --out " + f1.string())
            .exit_code == 0);
  CHECK(run("sample --c 2 --k 5 --n 100 --cl 0 --seed 7 --out " + f2.string())
            .exit_code == 0);
  const std::string a = slurp(f1);
  CHECK(a == slurp(f2));
  std::istringstream in(a);
  std::string line;
  int rows = 0, exact = 0;
  std::getline(in, line);
  CHECK(line == "value,status");
  while (std::getline(in, line)) {
    ++rows;
    if (line.ends_with(",1")) ++exact;
  }
  CHECK(rows == 100);
  CHECK(exact == 100);
}

TEST_CASE("sample honors the censoring level exactly") {
  const fs::path f = temp_file("s3.csv");
  REQUIRE(run("sample --c 2 --k 5 --n 100 --cl 0.2 --seed 8 --out " + f.string())
              .exit_code == 0);
  std::istringstream in(slurp(f));
  std::string line;
  std::getline(in, line);
  int exact = 0, censored = 0;
  while (std::getline(in, line)) {
    if (line.ends_with(",1")) ++exact;
    if (line.ends_with(",0")) ++censored;
  }
  CHECK(exact == 80);
  CHECK(censored == 20);
}

TEST_CASE("sample rejects bad flags") {
  CHECK(run("sample --c 2 --k 5 --n 100 --cl 1.5").exit_code == 1);
  CHECK(run("sample --c -2 --k 5 --n 100").exit_code == 1);
  CHECK(run("sample --c 2 --k 5").exit_code == 1);  // missing --n
}

TEST_CASE("fit recovers parameters from generated data") {
  const fs::path f = temp_file("fit_data.csv");
  REQUIRE(run("sample --c 2 --k 5 --n 1000 --cl 0 --seed 11 --out " + f.string())
              .exit_code == 0);
  const RunResult res =
      run("fit " + f.string() + " --method ce --seed 42 --format json");
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.out);
  CHECK(j["method"] == "ce");
  CHECK(j["converged"] == true);
  const double c = j["c"].get<double>();
  CHECK(c > 1.9);
  CHECK(c < 2.1);
  CHECK(j["ks"]["p_value"].get<double>() >= 0.0);
  CHECK(j["wingo_warning"] == false);
}

TEST_CASE("fit with the nr method reports the profiled k on a unit point") {
  const fs::path f = temp_file("one.csv");
  write_file(f, "value,status\n1.0,1\n");
  const RunResult res =
      run("fit " + f.string() + " --method nr --c-init 1 --format json");
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.out);
  CHECK(std::fabs(j["k"].get<double>() - 1.0 / std::log(2.0)) < 1e-9);
  CHECK(j["wingo_warning"] == true);
}

TEST_CASE("fit reports censored counts and accepts --censored") {
  const fs::path f = temp_file("cens.csv");
  REQUIRE(run("sample --c 2 --k 5 --n 200 --cl 0.2 --seed 5 --out " + f.string())
              .exit_code == 0);
  const RunResult res = run("fit " + f.string() +
                            " --censored --method em --seed 11 --format json");
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.out);
  CHECK(j["exact"] == 160);
  CHECK(j["censored"] == 40);
}

TEST_CASE("fit fails cleanly on bad inputs") {
  const fs::path empty = temp_file("empty.csv");
  write_file(empty, "");
  RunResult res = run("fit " + empty.string());
  CHECK(res.exit_code == 1);
  CHECK(res.err.find("no observations") != std::string::npos);

  const fs::path header_only = temp_file("header.csv");
  write_file(header_only, "value,status\n");
  res = run("fit " + header_only.string());
  CHECK(res.exit_code == 1);
  CHECK(res.err.find("no observations") != std::string::npos);

  const fs::path malformed = temp_file("malformed.csv");
  write_file(malformed, "value,status\nfoo,1\n");
  res = run("fit " + malformed.string());
  CHECK(res.exit_code == 1);
  CHECK(res.err.find("line 2") != std::string::npos);

  const fs::path nonpositive = temp_file("nonpos.csv");
  write_file(nonpositive, "value,status\n1.0,1\n-3.0,1\n");
  res = run("fit " + nonpositive.string());
  CHECK(res.exit_code == 1);
  CHECK(res.err.find("line 3") != std::string::npos);

  const fs::path no_status = temp_file("nostatus.csv");
  write_file(no_status, "value\n1.0\n0.5\n");
  res = run("fit " + no_status.string() + " --censored");
  CHECK(res.exit_code == 1);

  CHECK(run("fit /nonexistent/path.csv").exit_code == 1);
}

TEST_CASE("fit without a status column treats everything as exact") {
  const fs::path f = temp_file("plain.csv");
  write_file(f, "value\n0.5\n0.8\n1.2\n0.9\n0.4\n1.1\n0.7\n2.0\n");
  const RunResult res = run("fit " + f.string() + " --method nr --format json");
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.out);
  CHECK(j["exact"] == 8);
  CHECK(j["censored"] == 0);
}

TEST_CASE("fit estimates are deterministic for a fixed seed") {
  const fs::path f = temp_file("det.csv");
  REQUIRE(run("sample --c 2 --k 5 --n 150 --cl 0.1 --seed 3 --out " + f.string())
              .exit_code == 0);
  const std::string cmd = "fit " + f.string() + " --method ce --seed 9 --format json";
  const json a = json::parse(run(cmd).out);
  const json b = json::parse(run(cmd).out);
  CHECK(a["c"] == b["c"]);
  CHECK(a["k"] == b["k"]);
  CHECK(a["loglik"] == b["loglik"]);
  CHECK(a["iterations"] == b["iterations"]);
}

TEST_CASE("benchmark produces identical bytes at any --jobs") {
  const fs::path spec = temp_file("spec.json");
  write_file(spec, R"({
    "master_seed": 314,
    "cells": [
      {"c": 2, "k": 5, "n": 60, "cl": 0.0, "replications": 8,
       "methods": ["ce", "nr"]},
      {"c": 2, "k": 5, "n": 60, "cl": 0.2, "replications": 8,
       "methods": ["ce"]}
    ]
  })");
  const fs::path out1 = temp_file("r1.csv"), out4 = temp_file("r4.csv");
  REQUIRE(run("benchmark " + spec.string() + " --jobs 1 --out " + out1.string())
              .exit_code == 0);
  REQUIRE(run("benchmark " + spec.string() + " --jobs 4 --out " + out4.string())
              .exit_code == 0);
  const std::string a = slurp(out1);
  CHECK(!a.empty());
  CHECK(a == slurp(out4));
}

TEST_CASE("benchmark rejects invalid specs with a JSON pointer") {
  const fs::path spec = temp_file("bad_spec.json");
  write_file(spec, R"({
    "cells": [
      {"c": 2, "k": 5, "n": 60, "cl": 0.0, "replications": 0,
       "methods": ["ce"]}
    ]
  })");
  const RunResult res = run("benchmark " + spec.string());
  CHECK(res.exit_code == 1);
  CHECK(res.err.find("/cells/0/replications") != std::string::npos);

  const fs::path garbage = temp_file("garbage.json");
  write_file(garbage, "{not json");
  CHECK(run("benchmark " + garbage.string()).exit_code == 1);
}

TEST_CASE("unknown subcommands and flags exit with code 1") {
  CHECK(run("frobnicate").exit_code == 1);
  CHECK(run("sample --c 2 --k 5 --n 10 --bogus").exit_code == 1);
}
