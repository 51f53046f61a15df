/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "icevertex/asm_matrix.hpp"
#include "icevertex/counting.hpp"
#include "icevertex/detform.hpp"
#include "icevertex/errors.hpp"
#include "icevertex/lattice.hpp"
#include "icevertex/rng.hpp"
#include "icevertex/suite.hpp"
#include "icevertex/weights.hpp"
#include "json.hpp"

namespace {

using icevertex::Complex;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitSizeDomain = 2;
constexpr int kExitIo = 3;
constexpr int kExitPole = 4;
constexpr int kExitIntegrality = 5;

/// Filesystem problem (unreadable input, unwritable output).
struct IoFailure {
  std::string message;
};

/// Writes `text` to `outPath`, or to stdout when the path is empty.
void write_text(const std::string& text, const std::string& outPath) {
  if (outPath.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(outPath);
  if (!out) throw IoFailure{"cannot open \"" + outPath + "\" for writing"};
  out << text;
  out.flush();
  if (!out) throw IoFailure{"failed while writing \"" + outPath + "\""};
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw icevertex::DomainError(what + " must be a number or an [re, im] pair");
}

/// Reads model parameters from a JSON file:
///   {"gamma": [re,im], "zeta": ..., "phi": ..., "lambda": [...], "mu": [...]}
/// gamma and lambda are required; zeta defaults to 0, phi to 1, mu to [].
/// Optional "n"/"m" fields must agree with the lambda/mu lengths.
icevertex::ModelParams params_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure{"cannot open \"" + path + "\" for reading"};
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw icevertex::ParseError(std::string("params file: ") + e.what(), 1, 1);
  }
  if (!doc.is_object()) {
    throw icevertex::DomainError("params file must hold a JSON object");
  }
  if (!doc.contains("gamma") || !doc.contains("lambda")) {
    throw icevertex::DomainError(
        "params file needs at least \"gamma\" and \"lambda\"");
  }
  icevertex::ModelParams p;
  p.gamma = complex_from_json(doc["gamma"], "gamma");
  p.zeta = doc.contains("zeta") ? complex_from_json(doc["zeta"], "zeta")
                                : Complex{0.0, 0.0};
  p.phi = doc.contains("phi") ? complex_from_json(doc["phi"], "phi")
                              : Complex{1.0, 0.0};
  if (!doc["lambda"].is_array()) {
    throw icevertex::DomainError("\"lambda\" must be an array");
  }
  for (const auto& item : doc["lambda"]) {
    p.lambdas.push_back(complex_from_json(item, "lambda entry"));
  }
  if (doc.contains("mu")) {
    if (!doc["mu"].is_array()) {
      throw icevertex::DomainError("\"mu\" must be an array");
    }
    for (const auto& item : doc["mu"]) {
      p.mus.push_back(complex_from_json(item, "mu entry"));
    }
  }
  if (doc.contains("n") && doc["n"].get<int>() != p.n()) {
    throw icevertex::DomainError(
        "declared \"n\" disagrees with the lambda length");
  }
  if (doc.contains("m") && doc["m"].get<int>() != p.m()) {
    throw icevertex::DomainError(
        "declared \"m\" disagrees with the mu length");
  }
  icevertex::require_valid_size(p.size());
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---------------------------------------------------------------- enumerate

struct EnumerateOpts {
  int n = 0;
  int m = 0;
  std::string kind = "state";
  bool force = false;
  std::string out;
};

int run_enumerate(const EnumerateOpts& o) {
  icevertex::require_valid_size({o.n, o.m});
  if (o.n > 5 && !o.force) {
    std::cerr << "error: n = " << o.n
              << " exceeds the enumeration guard rail (n <= 5); pass --force"
                 " to override\n";
    return kExitSizeDomain;
  }
  std::ofstream file;
  std::ostream* stream = &std::cout;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw IoFailure{"cannot open \"" + o.out + "\" for writing"};
    stream = &file;
  }
  const auto t0 = std::chrono::steady_clock::now();
  long count = 0;
  if (o.kind == "state") {
    for (const auto& state : icevertex::enumerate_states({o.n, o.m})) {
      Json line;
      line["state"] = icevertex::serialize_state(state);
      *stream << line.dump() << '\n';
      ++count;
    }
  } else {
    for (const auto& mat : icevertex::enumerate_matrices({o.n, o.m})) {
      Json line;
      line["matrix"] = icevertex::serialize_matrix(mat);
      *stream << line.dump() << '\n';
      ++count;
    }
  }
  if (stream == &file) {
    file.flush();
    if (!file) throw IoFailure{"failed while writing \"" + o.out + "\""};
  }
  Json summary;
  summary["count"] = count;
  summary["elapsed"] = seconds_since(t0);
  std::cout << summary.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- partition

struct PartitionOpts {
  int n = -1;
  int m = 0;
  std::uint64_t seed = 1;
  std::string paramsFile;
  std::string method = "both";
  bool force = false;
  std::string out;
};

int run_partition(const PartitionOpts& o) {
  icevertex::ModelParams params;
  if (!o.paramsFile.empty()) {
    if (o.n >= 0) {
      throw icevertex::DomainError("pass either --params or --n/--m, not both");
    }
    params = params_from_file(o.paramsFile);
  } else {
    if (o.n < 0) {
      throw icevertex::DomainError(
          "partition needs --params FILE or --n (with optional --m, --seed)");
    }
    icevertex::require_valid_size({o.n, o.m});
    icevertex::Rng rng(o.seed, "cli-partition");
    params = icevertex::sample_generic({o.n, o.m}, rng);
  }
  const bool wantBrute = o.method != "det";
  const bool wantDet = o.method != "brute";
  if (wantBrute && params.n() > 5 && !o.force) {
    std::cerr << "error: the state sum is guarded at n <= 5; pass --force or"
                 " --method det\n";
    return kExitSizeDomain;
  }
  Json report;
  Complex brute{};
  Complex det{};
  if (wantBrute) {
    brute = icevertex::partition_brute_parallel(params,
                                                icevertex::worker_count());
    report["brute"] = complex_json(brute);
  }
  if (wantDet) {
    det = icevertex::det_partition(params).value;
    report["det"] = complex_json(det);
  }
  if (wantBrute && wantDet) {
    report["relDiff"] =
        std::abs(brute - det) / std::max(std::abs(brute), 1e-300);
  }
  write_text(report.dump() + "\n", o.out);
  return kExitOk;
}

// -------------------------------------------------------------------- count

struct CountOpts {
  int n = 0;
  int m = 0;
  int k = -1;
  std::string method = "wilson";
  std::string format = "json";
  std::string out;
};

int run_count(const CountOpts& o) {
  std::vector<long> hist;
  if (o.method == "brute") {
    if (o.n > 4) {
      std::cerr << "error: method brute enumerates states and supports"
                   " n <= 4\n";
      return kExitSizeDomain;
    }
    icevertex::require_valid_size({o.n, o.m});
    hist.assign(static_cast<std::size_t>(o.m) + 1, 0);
    for (const auto& state : icevertex::enumerate_states({o.n, o.m})) {
      ++hist[static_cast<std::size_t>(
          icevertex::state_stats(state).nu(icevertex::TurnKind::KPlus))];
    }
  }
  const auto one = [&](int k) -> icevertex::BigInt {
    if (o.method == "wilson") return icevertex::count_Nk(o.n, o.m, k);
    if (o.method == "hypersum") {
      return icevertex::count_Nk_hypersum(o.n, o.m, k);
    }
    if (k < 0 || k > o.m) {
      throw icevertex::DomainError("counts need 0 <= k <= m <= n");
    }
    return icevertex::BigInt(hist[static_cast<std::size_t>(k)]);
  };

  std::vector<int> ks;
  if (o.k >= 0) {
    ks.push_back(o.k);
  } else {
    for (int k = 0; k <= o.m; ++k) ks.push_back(k);
  }
  std::vector<icevertex::BigInt> values;
  icevertex::BigInt total = 0;
  for (const int k : ks) {
    values.push_back(one(k));
    total += values.back();
  }

  std::string payload;
  if (o.format == "json") {
    Json report;
    report["n"] = o.n;
    report["m"] = o.m;
    if (o.k >= 0) {
      report["k"] = o.k;
      report["N"] = values.front().get_str();
    } else {
      Json arr = Json::array();
      for (const auto& v : values) arr.push_back(v.get_str());
      report["N"] = arr;
      report["total"] = total.get_str();
    }
    payload = report.dump() + "\n";
  } else if (o.format == "csv") {
    payload = "n,m,k,N\n";
    for (std::size_t i = 0; i < ks.size(); ++i) {
      payload += std::to_string(o.n) + "," + std::to_string(o.m) + "," +
                 std::to_string(ks[i]) + "," + values[i].get_str() + "\n";
    }
  } else {
    for (std::size_t i = 0; i < ks.size(); ++i) {
      payload += "N_" + std::to_string(ks[i]) + "(" + std::to_string(o.n) +
                 "," + std::to_string(o.m) + ") = " + values[i].get_str() +
                 "\n";
    }
    if (o.k < 0) payload += "total = " + total.get_str() + "\n";
  }
  write_text(payload, o.out);
  return kExitOk;
}

// ------------------------------------------------------------------- verify

struct VerifyOpts {
  std::string check = "all";
  int n = 3;
  int m = -1;
  std::uint64_t seed = 1;
  std::vector<std::string> tolSpecs;
  std::string format = "json";
  std::string out;
};

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

int run_verify(const VerifyOpts& o) {
  icevertex::SuiteConfig cfg;
  cfg.n = o.n;
  cfg.m = o.m;
  cfg.seed = o.seed;
  for (const auto& spec : o.tolSpecs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw icevertex::DomainError("--tol expects NAME=VALUE, got \"" + spec +
                                   "\"");
    }
    const std::string name = spec.substr(0, eq);
    icevertex::default_tolerance(name);  // rejects unknown keys
    double value = 0.0;
    std::size_t used = 0;
    try {
      value = std::stod(spec.substr(eq + 1), &used);
    } catch (const std::exception&) {
      throw icevertex::DomainError("--tol value in \"" + spec +
                                   "\" is not a number");
    }
    if (used != spec.size() - eq - 1) {
      throw icevertex::DomainError("--tol value in \"" + spec +
                                   "\" is not a number");
    }
    if (!(value > 0.0)) {
      throw icevertex::DomainError("tolerance overrides must be positive");
    }
    cfg.tolerances[name] = value;
  }

  std::vector<std::string> names;
  if (o.check == "all") {
    names = icevertex::check_names();
  } else {
    names.push_back(o.check);
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = icevertex::run_suite(names, cfg);
  const double elapsed = seconds_since(t0);
  const bool allPass =
      std::all_of(results.begin(), results.end(),
                  [](const icevertex::CheckResult& r) { return r.pass; });

  std::string payload;
  if (o.format == "json") {
    Json doc;
    Json checks = Json::array();
    for (const auto& r : results) {
      Json c;
      c["name"] = r.name;
      c["draws"] = r.draws;
      c["maxResidual"] = r.maxResidual;
      c["tolerance"] = r.tolerance;
      c["pass"] = r.pass;
      if (!r.note.empty()) c["note"] = r.note;
      checks.push_back(c);
    }
    doc["checks"] = checks;
    doc["allPass"] = allPass;
    doc["elapsed"] = elapsed;
    payload = doc.dump(2) + "\n";
  } else if (o.format == "csv") {
    payload = "name,draws,maxResidual,tolerance,pass,note\n";
    for (const auto& r : results) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.12g,%.12g", r.maxResidual,
                    r.tolerance);
      payload += r.name + "," + std::to_string(r.draws) + "," + buf + "," +
                 (r.pass ? "true" : "false") + "," + csv_quote(r.note) + "\n";
    }
  } else {
    for (const auto& r : results) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%-16s %s  draws=%-4d max=%.3e tol=%.1e",
                    r.name.c_str(), r.pass ? "PASS" : "FAIL", r.draws,
                    r.maxResidual, r.tolerance);
      payload += buf;
      if (!r.note.empty()) payload += "  " + r.note;
      payload += "\n";
    }
    payload += allPass ? "all checks passed\n" : "SOME CHECKS FAILED\n";
  }
  write_text(payload, o.out);
  return allPass ? kExitOk : kExitVerifyFailure;
}

// -------------------------------------------------------------------- main

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitIo;
  } catch (const icevertex::PoleError& e) {
    std::cerr << "error: pole: " << e.what() << "\n";
    return kExitPole;
  } catch (const icevertex::NonIntegerResult& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIntegrality;
  } catch (const icevertex::Error& e) {
    // SizeError, DomainError, ParseError and the remaining library errors
    // are all bad requests or bad input data.
    std::cerr << "error: " << e.what() << "\n";
    return kExitSizeDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSizeDomain;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "icevertex: exact and numeric tools for the six-vertex model with"
      " domain walls and one partially reflecting end"};
  app.require_subcommand(1);
  int rc = kExitOk;

  EnumerateOpts eo;
  auto* enumerateCmd = app.add_subcommand(
      "enumerate", "List every admissible state (or matrix) as JSON lines");
  enumerateCmd->add_option("--n", eo.n, "number of double rows")->required();
  enumerateCmd->add_option("--m", eo.m, "number of vertical lines")
      ->required();
  enumerateCmd->add_option("--kind", eo.kind, "object kind (default state)")
      ->check(CLI::IsMember({"state", "asm"}));
  enumerateCmd->add_flag("--force", eo.force,
                         "override the n <= 5 guard rail");
  enumerateCmd->add_option("--out", eo.out, "stream destination (default"
                                            " stdout)");
  enumerateCmd->callback([&] { rc = guarded([&] { return run_enumerate(eo); }); });

  PartitionOpts po;
  auto* partitionCmd = app.add_subcommand(
      "partition",
      "Evaluate the partition function by state sum and determinant");
  partitionCmd->add_option("--n", po.n, "double rows (seeded generic draw)");
  partitionCmd->add_option("--m", po.m, "vertical lines (default 0)");
  partitionCmd->add_option("--seed", po.seed, "seed for the generic draw");
  partitionCmd->add_option("--params", po.paramsFile,
                           "JSON file with gamma/zeta/phi/lambda/mu");
  partitionCmd->add_option("--method", po.method, "both, brute or det")
      ->check(CLI::IsMember({"both", "brute", "det"}));
  partitionCmd->add_flag("--force", po.force,
                         "override the n <= 5 state-sum guard");
  partitionCmd->add_option("--out", po.out, "report destination");
  partitionCmd->callback([&] { rc = guarded([&] { return run_partition(po); }); });

  CountOpts co;
  auto* countCmd = app.add_subcommand(
      "count", "Exact state counts refined by the positive-turn number");
  countCmd->add_option("--n", co.n, "number of double rows")->required();
  countCmd->add_option("--m", co.m, "number of vertical lines")->required();
  countCmd->add_option("--k", co.k, "single positive-turn count (default"
                                    " all)");
  countCmd->add_option("--method", co.method,
                       "wilson (determinant), hypersum or brute")
      ->check(CLI::IsMember({"wilson", "hypersum", "brute"}));
  countCmd->add_option("--format", co.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  countCmd->add_option("--out", co.out, "report destination");
  countCmd->callback([&] { rc = guarded([&] { return run_count(co); }); });

  VerifyOpts vo;
  auto* verifyCmd = app.add_subcommand(
      "verify", "Run the verification suite and report residuals");
  verifyCmd->add_option("--check", vo.check,
                        "check name or \"all\" (default all)");
  verifyCmd->add_option("--n", vo.n, "largest double-row count (default 3)");
  verifyCmd->add_option("--m", vo.m,
                        "restrict to one line count (default: sweep)");
  verifyCmd->add_option("--seed", vo.seed, "PRNG seed (default 1)");
  verifyCmd->add_option("--tol", vo.tolSpecs,
                        "override NAME=VALUE (repeatable)");
  verifyCmd->add_option("--format", vo.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  verifyCmd->add_option("--out", vo.out, "report destination");
  verifyCmd->callback([&] { rc = guarded([&] { return run_verify(vo); }); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSizeDomain;
  }
  return rc;
}
