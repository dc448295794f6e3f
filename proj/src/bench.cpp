// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/bench.hpp"

#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "spaceswitch/bgv.hpp"
#include "spaceswitch/clear_eval.hpp"
#include "spaceswitch/params.hpp"
#include "spaceswitch/serialize.hpp"

namespace spaceswitch {

namespace {

double run_lt(Evaluator& ev, ExtractionStrategy strategy) {
  CipherHandle a = ev.encode_vector({0});
  CipherHandle b = ev.encode_vector({1});
  ev.ledger().reset();
  CompareOptions opt;
  opt.strategy = strategy;
  auto t0 = std::chrono::steady_clock::now();
  compare(ev, CmpOp::lt, a, b, opt);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BenchRow measure_row(u32 bitwidth, const std::string& label, u64 p, u32 r,
                     ExtractionStrategy strategy, const std::string& backend, u64 seed) {
  BenchRow row;
  row.bitwidth = bitwidth;
  row.strategy = label;
  row.p = p;
  row.r = r;
  row.modulus = checked_pow(p, r);

  // Cleartext dry run under a ceiling no pipeline reaches, to learn counts
  // and the true depth.
  ParamSet ps;
  ps.p = p;
  ps.r = r;
  ps.levels = 200;
  ps.slots = 1;
  ps.seed = seed;
  ClearEval dry(ps);
  double wall = run_lt(dry, strategy);
  row.report = make_cost_report(dry, wall);

  if (backend == "bgv") {
    ps.levels = dry.ledger().max_depth_consumed() + 2;
    BgvEval real(ps);
    wall = run_lt(real, strategy);
    row.report = make_cost_report(real, wall);
  }
  return row;
}

nlohmann::json row_json(const BenchRow& row) {
  nlohmann::json j = nlohmann::json::parse(row.report.to_json());
  j["bitwidth"] = row.bitwidth;
  j["strategy"] = row.strategy;
  j["p"] = row.p;
  j["r"] = row.r;
  j["modulus"] = row.modulus;
  return j;
}

}  // namespace

BenchTable run_bench(const std::vector<u32>& bitwidths, const std::vector<std::string>& strategies,
                     const std::string& backend, u64 seed) {
  require(backend == "clear" || backend == "bgv", Errc::invalid_argument,
          "unknown backend: " + backend);
  BenchTable table;
  for (u32 bw : bitwidths) {
    std::vector<CandidateCost> candidates = rank_candidates(bw);
    std::optional<CandidateCost> tower, direct;
    for (const CandidateCost& c : candidates) {
      if (c.r >= 2 && !tower) tower = c;
      if (c.r == 1 && !direct) direct = c;
    }
    for (const std::string& strat : strategies) {
      if (strat == "direct") {
        if (!direct) {
          table.skipped.push_back(
              {bw, strat,
               "no single-digit prime fits " + std::to_string(bw) +
                   "-bit comparisons within the desk-scale table"});
          continue;
        }
        table.rows.push_back(measure_row(bw, strat, direct->p, 1,
                                         ExtractionStrategy::SpaceSwitch, backend, seed));
      } else {
        ExtractionStrategy s = strategy_from_name(strat);  // rejects unknown names
        if (!tower) {
          table.skipped.push_back(
              {bw, strat, "no (p, r >= 2) tower fits " + std::to_string(bw) + "-bit comparisons"});
          continue;
        }
        table.rows.push_back(measure_row(bw, strat, tower->p, tower->r, s, backend, seed));
      }
    }
  }
  return table;
}

std::string BenchTable::to_json() const {
  nlohmann::json j;
  j["schema"] = 1;
  j["rows"] = nlohmann::json::array();
  for (const BenchRow& row : rows) j["rows"].push_back(row_json(row));
  j["skipped"] = nlohmann::json::array();
  for (const BenchSkip& sk : skipped)
    j["skipped"].push_back({{"bitwidth", sk.bitwidth}, {"strategy", sk.strategy}, {"note", sk.note}});
  return j.dump(2);
}

std::string BenchTable::to_csv() const {
  std::ostringstream out;
  out << "bitwidth,strategy,p,r,modulus,nonscalar,scalar,additions,depth,"
         "reduction,digit_compare,aggregation,raise,arithmetic,wall_seconds\n";
  for (const BenchRow& row : rows) {
    const CostReport& rep = row.report;
    out << row.bitwidth << ',' << row.strategy << ',' << row.p << ',' << row.r << ','
        << row.modulus << ',' << rep.totals.nonscalar_mults << ',' << rep.totals.scalar_mults
        << ',' << rep.totals.additions << ',' << rep.depth;
    for (const char* s : kStageNames) out << ',' << rep.stages.at(s).nonscalar_mults;
    char wall[32];
    std::snprintf(wall, sizeof wall, ",%.6f", rep.wall_seconds);
    out << wall << '\n';
  }
  for (const BenchSkip& sk : skipped)
    out << "# bitwidth " << sk.bitwidth << ", " << sk.strategy << ": skipped: " << sk.note << '\n';
  return out.str();
}

std::string BenchTable::to_text() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-9s %-13s %-12s %10s %6s %10s %14s %12s %6s %11s\n",
                "bitwidth", "strategy", "(p, r)", "nonscalar", "depth", "reduction",
                "digit-compare", "aggregation", "raise", "arithmetic");
  out << line;
  for (const BenchRow& row : rows) {
    char pr[24];
    std::snprintf(pr, sizeof pr, "(%llu, %u)", static_cast<unsigned long long>(row.p), row.r);
    std::snprintf(line, sizeof line, "%-9u %-13s %-12s %10llu %6u %10llu %14llu %12llu %6llu %11llu\n",
                  row.bitwidth, row.strategy.c_str(), pr,
                  static_cast<unsigned long long>(row.report.totals.nonscalar_mults),
                  row.report.depth,
                  static_cast<unsigned long long>(row.report.stages.at("reduction").nonscalar_mults),
                  static_cast<unsigned long long>(
                      row.report.stages.at("digit-compare").nonscalar_mults),
                  static_cast<unsigned long long>(
                      row.report.stages.at("aggregation").nonscalar_mults),
                  static_cast<unsigned long long>(row.report.stages.at("raise").nonscalar_mults),
                  static_cast<unsigned long long>(
                      row.report.stages.at("arithmetic").nonscalar_mults));
    out << line;
  }
  for (const BenchSkip& sk : skipped)
    out << "bitwidth " << sk.bitwidth << ", " << sk.strategy << ": skipped: " << sk.note << '\n';
  return out.str();
}

}  // namespace spaceswitch
