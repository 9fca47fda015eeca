// Copyright 2026 The hereditary-mms Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hmms/hmms.hpp"

namespace hmms::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kDeskCap = 3 };

/// Run-wide numeric settings shared by the subcommands.
struct RunConfig {
  std::string alpha = "11/30";
  std::string delta = "1/16";
  std::string epsilon = "1/10000000";
  std::uint64_t seed = 1;
  std::size_t mms_cap = 12;
  std::size_t naive_cap = 16;
  bool decimal = false;
};

namespace detail {

struct UsageError : Error {
  using Error::Error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

inline Rational rational_flag(const std::string& text, const char* name) {
  try {
    return Rational::parse(text);
  } catch (const InputError&) {
    throw UsageError(std::string("--") + name + ": malformed rational '" + text + "'");
  }
}

inline std::string show(const Rational& r, bool decimal) {
  return decimal ? r.str() + " (~" + r.decimal() + ")" : r.str();
}

inline void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

inline std::string partition_text(const Partition& p) {
  std::string s;
  for (std::size_t k = 0; k < p.parts.size(); ++k) {
    if (k != 0) s += " | ";
    s += p.parts[k].str();
  }
  return s;
}

}  // namespace detail

/// Phase histogram of a trace: ordinary phases keyed by cardinality,
/// MinimalSet bundles keyed separately by their size.
struct PhaseHistogram {
  std::map<std::size_t, std::size_t> phases;
  std::map<std::size_t, std::size_t> minimal_sets;
};

inline PhaseHistogram phase_histogram(const Allocation& a) {
  PhaseHistogram h;
  for (const auto& e : a.trace) (e.minimal_set ? h.minimal_sets : h.phases)[e.phase]++;
  return h;
}

/// Runs the command line; documents go to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Approximate maximin-share allocation over hereditary set systems", "hmms"};
  app.require_subcommand(1);
  app.add_flag("--decimal", cfg.decimal, "Also print decimal approximations (display only)");

  // gen
  auto* gen = app.add_subcommand("gen", "Write an instance document");
  gen->require_subcommand(1);
  std::string gen_out;
  std::size_t table_n = 330;
  std::size_t foot_agents = 1;
  std::size_t rnd_m = 6, rnd_n = 2;
  std::string rnd_family = "free";
  ValueRange range;
  auto* gen_table = gen->add_subcommand("table1", "Six-class partition-matroid instance (n multiple of 330)");
  gen_table->add_option("--n", table_n, "Number of agents")->capture_default_str();
  auto* gen_foot = gen->add_subcommand("footnote", "Three-item non-submodular instance");
  gen_foot->add_option("--agents", foot_agents, "Number of identical agents")->capture_default_str();
  auto* gen_rand = gen->add_subcommand("random", "Seeded random instance");
  gen_rand->add_option("--seed", cfg.seed)->capture_default_str();
  gen_rand->add_option("--m", rnd_m, "Item count")->capture_default_str();
  gen_rand->add_option("--n", rnd_n, "Agent count")->capture_default_str();
  gen_rand->add_option("--family", rnd_family, "free | explicit | capacity")->capture_default_str();
  gen_rand->add_option("--min-num", range.min_numerator)->capture_default_str();
  gen_rand->add_option("--max-num", range.max_numerator)->capture_default_str();
  gen_rand->add_option("--max-den", range.max_denominator)->capture_default_str();
  for (auto* sub : {gen_table, gen_foot, gen_rand}) sub->add_option("-o,--output", gen_out, "Output path (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Allocate bundles for an instance");
  std::string solve_file, solve_out, solve_trace;
  bool solve_naive = false;
  solve->add_option("FILE", solve_file, "Instance document")->required();
  solve->add_option("--alpha", cfg.alpha)->capture_default_str();
  solve->add_option("--delta", cfg.delta)->capture_default_str();
  solve->add_flag("--naive", solve_naive, "Run the exhaustive reference procedure at target alpha");
  solve->add_option("--desk-cap", cfg.naive_cap, "Item/block cap for --naive")->capture_default_str();
  solve->add_option("--trace", solve_trace, "Write trace records to PATH");
  solve->add_option("-o,--output", solve_out, "Allocation document path (default stdout)");

  // mms
  auto* mms = app.add_subcommand("mms", "Maximin share of one agent");
  std::string mms_file;
  std::size_t mms_agent = 0;
  std::size_t mms_parts = 0;
  mms->add_option("FILE", mms_file, "Instance document")->required();
  mms->add_option("--agent", mms_agent, "Agent index")->capture_default_str();
  mms->add_option("--agents", mms_parts, "Number of parts (default: the instance's n)");
  mms->add_option("--cap", cfg.mms_cap, "Largest item count for the exact search")->capture_default_str();

  // verify
  auto* verify = app.add_subcommand("verify", "Check an allocation against per-agent floors");
  std::string ver_alloc, ver_inst, floor_mode = "mu";
  verify->add_option("ALLOC", ver_alloc, "Allocation document")->required();
  verify->add_option("INSTANCE", ver_inst, "Instance document")->required();
  verify->add_option("--floor-mode", floor_mode, "mu | exact-mms")
      ->check(CLI::IsMember({"mu", "exact-mms"}))
      ->capture_default_str();
  verify->add_option("--cap", cfg.mms_cap, "Largest item count for exact-mms floors")->capture_default_str();

  // repro-upper-bound
  auto* repro = app.add_subcommand("repro-upper-bound", "Run the six-class instance just above 40/107");
  std::size_t repro_n = 330;
  std::string repro_trace;
  bool repro_naive = false;
  repro->add_option("--n", repro_n, "Number of agents (multiple of 330)")->capture_default_str();
  repro->add_option("--epsilon", cfg.epsilon, "Target is 40/107 + epsilon")->capture_default_str();
  repro->add_option("--trace", repro_trace, "Write trace records to PATH");
  repro->add_flag("--naive", repro_naive, "Use the exhaustive procedure instead of the estimate-based one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*gen) {
      Instance inst;
      if (*gen_table) {
        inst = table1_instance(table_n);
      } else if (*gen_foot) {
        inst = with_identical_agents(footnote_instance(), foot_agents);
      } else {
        inst = random_instance(cfg.seed, rnd_m, rnd_n, parse_family(rnd_family), range);
      }
      detail::emit(out, gen_out, serialize_instance(inst));
      return kOk;
    }

    if (*solve) {
      Instance inst = parse_instance(detail::read_file(solve_file));
      AllocatorOptions opts;
      opts.naive_desk_cap = cfg.naive_cap;
      AllocationDocument doc;
      doc.instance_name = inst.name;
      doc.alpha = detail::rational_flag(cfg.alpha, "alpha");
      if (doc.alpha->sign() <= 0) throw detail::UsageError("--alpha must be positive");
      if (solve_naive) {
        doc.method = "naive";
        doc.allocation = allocate_naive(inst, *doc.alpha, opts);
      } else {
        doc.method = "fair_divide";
        doc.delta = detail::rational_flag(cfg.delta, "delta");
        if (!(doc.delta->sign() > 0 && *doc.delta < Rational(1))) throw detail::UsageError("--delta must lie in (0, 1)");
        FairDivision fd = fair_divide(inst, *doc.alpha, *doc.delta, opts);
        doc.allocation = std::move(fd.allocation);
        doc.mu = std::move(fd.mu);
        doc.iterations = fd.iterations;
      }
      detail::emit(out, solve_out, serialize_allocation(doc));
      if (!solve_trace.empty()) detail::write_file(solve_trace, trace_text(doc.allocation));
      err << doc.method << ": allocated " << doc.allocation.allocated_count() << " of " << inst.n()
          << " agents, unallocated " << doc.allocation.unallocated.size();
      if (doc.method == "fair_divide") err << ", iterations " << doc.iterations;
      err << "\n";
      return kOk;
    }

    if (*mms) {
      Instance inst = parse_instance(detail::read_file(mms_file));
      if (mms_agent >= inst.n()) throw detail::UsageError("--agent out of range");
      std::size_t parts = mms_parts == 0 ? inst.n() : mms_parts;
      const Valuation& v = inst.valuations[mms_agent];
      if (inst.m() <= cfg.mms_cap) {
        MmsResult r = mms_exact(inst.spec, v, parts, {cfg.mms_cap});
        out << "mms " << detail::show(r.value, cfg.decimal) << "\n";
        out << "witness " << detail::partition_text(r.witness) << "\n";
      } else {
        MmsResult r = mms_bounds(singleton_values(inst.spec, v), parts, inst.m());
        out << "exact search skipped: " << inst.m() << " items exceeds cap " << cfg.mms_cap << "\n";
        out << "lower " << detail::show(r.lower, cfg.decimal) << "\n";
        out << "upper " << detail::show(r.upper, cfg.decimal) << "\n";
      }
      return kOk;
    }

    if (*verify) {
      AllocationDocument doc = parse_allocation(detail::read_file(ver_alloc));
      Instance inst = parse_instance(detail::read_file(ver_inst));
      std::vector<Rational> floors;
      if (floor_mode == "mu") {
        if (!doc.alpha || doc.mu.size() != inst.n()) {
          throw detail::UsageError("--floor-mode mu needs an allocation document carrying alpha and mu");
        }
        for (const auto& x : doc.mu) floors.push_back(*doc.alpha * x);
      } else {
        if (inst.m() > cfg.mms_cap) {
          throw SizeError("exact-mms floors need the exact search: " + std::to_string(inst.m()) + " items exceeds cap " +
                          std::to_string(cfg.mms_cap));
        }
        Rational alpha = doc.alpha.value_or(Rational(BigInt(11), BigInt(30)));
        Rational keep = Rational(1) - doc.delta.value_or(Rational(0));
        for (const auto& v : inst.valuations) {
          floors.push_back(keep * alpha * mms_exact(inst.spec, v, inst.n(), {cfg.mms_cap}).value);
        }
      }
      VerificationReport rep = verify_allocation(inst, doc.allocation, floors);
      for (const auto& viol : rep.violations) {
        out << "violation " << violation_kind_name(viol.kind) << " agent=" << viol.agent << ": " << viol.message << "\n";
      }
      out << (rep.ok() ? "ok" : "FAILED") << " (" << rep.violations.size() << " violations, floor-mode " << floor_mode
          << ")\n";
      return rep.ok() ? kOk : kVerificationFailed;
    }

    if (*repro) {
      Instance inst = table1_instance(repro_n);
      Rational alpha = Rational(BigInt(40), BigInt(107)) + detail::rational_flag(cfg.epsilon, "epsilon");
      Allocation a;
      if (repro_naive) {
        a = allocate_naive(inst, alpha);
      } else {
        std::vector<Rational> mu(inst.n(), Rational(1));
        a = allocate_from_estimates(inst, mu, alpha);
      }
      PhaseHistogram h = phase_histogram(a);
      out << "target " << detail::show(alpha, cfg.decimal) << "\n";
      for (const auto& [tau, count] : h.phases) out << "phase " << tau << ": " << count << "\n";
      for (const auto& [size, count] : h.minimal_sets) out << "minimal-set " << size << "-item: " << count << "\n";
      out << "allocated " << a.allocated_count() << "\n";
      out << "unallocated " << a.unallocated.size() << "\n";
      if (!repro_trace.empty()) detail::write_file(repro_trace, trace_text(a));
      return a.unallocated.size() == repro_n / 330 ? kOk : kVerificationFailed;
    }
  } catch (const SizeError& e) {
    err << "size error: " << e.what() << "\n";
    return kDeskCap;
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace hmms::cli
