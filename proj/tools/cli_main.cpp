// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Subcommands map onto the library one-to-one:
// parameter selection, table ingestion, encrypted filter+aggregate queries,
// single comparisons, digit extraction, the verification harness, strategy
// benchmarks, and interpolation-polynomial dumps.
//
// Exit codes: 0 success, 2 a checked result disagreed with its oracle,
// 3 no parameter choice fits the request, 4 file or format trouble,
// 1 anything else (bad flags, malformed values).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spaceswitch/bench.hpp"
#include "spaceswitch/bgv.hpp"
#include "spaceswitch/clear_eval.hpp"
#include "spaceswitch/compare.hpp"
#include "spaceswitch/interp.hpp"
#include "spaceswitch/params.hpp"
#include "spaceswitch/ps_eval.hpp"
#include "spaceswitch/query.hpp"
#include "spaceswitch/reduce.hpp"
#include "spaceswitch/ring.hpp"
#include "spaceswitch/serialize.hpp"
#include "spaceswitch/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spaceswitch;

namespace {

constexpr const char* kBanner =
    "*** INSECURE TOY PARAMETERS: correctness experiments only, not secure ***";

using ull = unsigned long long;

struct Global {
  u64 p = 0;  // 0 means "pick for me"
  u32 r = 0;
  std::string backend = "clear";
  u64 seed = 1;
  bool json_out = false;
};

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::verification: return 2;
    case Errc::infeasible_params: return 3;
    case Errc::io: return 4;
    case Errc::invalid_argument: return 1;
  }
  return 1;
}

std::unique_ptr<Evaluator> make_backend(const std::string& name, const ParamSet& ps) {
  if (name == "clear") return std::make_unique<ClearEval>(ps);
  if (name == "bgv") return std::make_unique<BgvEval>(ps);
  fail(Errc::invalid_argument, "unknown backend '" + name + "' (expected clear or bgv)");
}

void check_pair_flags(const Global& g) {
  require((g.p == 0) == (g.r == 0), Errc::invalid_argument, "--p and --r go together");
}

// (p, r) from the global flags when given, else the subcommand's default
// pair. Levels come from the depth estimate plus headroom so one compare
// or one query fits without hand-tuning.
ParamSet explicit_or_default(const Global& g, u64 dp, u32 dr, u32 headroom, std::size_t slots) {
  check_pair_flags(g);
  ParamSet ps;
  ps.p = g.p != 0 ? g.p : dp;
  ps.r = g.p != 0 ? g.r : dr;
  require(ps.p >= 3 && ps.p % 2 == 1 && is_prime(ps.p), Errc::invalid_argument,
          "p must be an odd prime, got " + std::to_string(ps.p));
  checked_pow(ps.p, ps.r);
  ps.levels = estimate_depth(ps.p, ps.r) + headroom;
  ps.seed = g.seed;
  ps.slots = slots;
  return ps;
}

// Explicit pair when given (with a feasibility gate for the bit-width),
// otherwise ranked selection.
ParamSet pick_params(const Global& g, u32 bitwidth, u32 headroom, std::size_t slots) {
  check_pair_flags(g);
  if (g.p == 0) {
    ParamSet ps = select_params(bitwidth, headroom, g.seed);
    ps.seed = g.seed;
    ps.slots = slots;
    return ps;
  }
  require(params_feasible(g.p, g.r, bitwidth), Errc::infeasible_params,
          "(p, r) = (" + std::to_string(g.p) + ", " + std::to_string(g.r) + ") cannot hold " +
              std::to_string(bitwidth) + "-bit comparisons; needs p^r >= 2^" +
              std::to_string(bitwidth + 1));
  return explicit_or_default(g, g.p, g.r, headroom, slots);
}

void emit(std::string text) {
  if (text.empty() || text.back() != '\n') text += '\n';
  std::cout << text;
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

u64 parse_u64(const std::string& s, const std::string& what) {
  std::string t = trimmed(s);
  require(!t.empty(), Errc::invalid_argument, what + ": empty number");
  u64 v = 0;
  for (char ch : t) {
    require(ch >= '0' && ch <= '9', Errc::invalid_argument,
            what + ": '" + t + "' is not an unsigned integer");
    require(v <= (~u64{0} - (ch - '0')) / 10, Errc::invalid_argument, what + ": '" + t + "' overflows");
    v = v * 10 + (ch - '0');
  }
  return v;
}

std::vector<std::string> split_list(const std::string& s, char extra_sep = '\0') {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || (extra_sep != '\0' && ch == extra_sep)) {
      if (!trimmed(cur).empty()) out.push_back(trimmed(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trimmed(cur).empty()) out.push_back(trimmed(cur));
  return out;
}

std::vector<u32> parse_u32_list(const std::string& s, const std::string& what) {
  std::vector<u32> out;
  for (const std::string& part : split_list(s)) {
    u64 v = parse_u64(part, what);
    require(v >= 1 && v <= 63, Errc::invalid_argument,
            what + ": " + part + " is out of range (1..63)");
    out.push_back(static_cast<u32>(v));
  }
  require(!out.empty(), Errc::invalid_argument, what + ": empty list");
  return out;
}

const char* op_symbol(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::gt: return ">";
    case CmpOp::ge: return ">=";
    case CmpOp::eq: return "==";
    case CmpOp::neq: return "!=";
  }
  return "?";
}

bool int_cmp(CmpOp op, u64 a, u64 b) {
  switch (op) {
    case CmpOp::lt: return a < b;
    case CmpOp::le: return a <= b;
    case CmpOp::gt: return a > b;
    case CmpOp::ge: return a >= b;
    case CmpOp::eq: return a == b;
    case CmpOp::neq: return a != b;
  }
  return false;
}

// "quantity<24", "date >= 90". Two-character operators are tried first so
// "<=" never parses as "<" with a stray '='.
Predicate parse_where(const std::string& text) {
  static const struct {
    const char* sym;
    CmpOp op;
  } kOps[] = {{"<=", CmpOp::le}, {">=", CmpOp::ge}, {"==", CmpOp::eq},
              {"!=", CmpOp::neq}, {"<", CmpOp::lt}, {">", CmpOp::gt}};
  for (const auto& cand : kOps) {
    std::size_t at = text.find(cand.sym);
    if (at == std::string::npos) continue;
    Predicate pr;
    pr.column = trimmed(text.substr(0, at));
    pr.op = cand.op;
    pr.constant = parse_u64(text.substr(at + std::strlen(cand.sym)), "--where constant");
    require(!pr.column.empty(), Errc::invalid_argument, "--where '" + text + "': missing column");
    return pr;
  }
  fail(Errc::invalid_argument,
       "--where '" + text + "': expected <column><op><integer> with op one of < <= > >= == !=");
}

QueryPlan plan_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io, "cannot open plan file: " + path);
  json j;
  try {
    in >> j;
    QueryPlan plan;
    for (const json& jp : j.at("predicates")) {
      Predicate pr;
      pr.column = jp.at("column").get<std::string>();
      pr.op = cmp_op_from_name(jp.at("op").get<std::string>());
      pr.constant = jp.at("constant").get<u64>();
      plan.predicates.push_back(std::move(pr));
    }
    for (const json& jc : j.at("sum")) plan.aggregate_columns.push_back(jc.get<std::string>());
    return plan;
  } catch (const json::exception& e) {
    fail(Errc::io, "plan file " + path + ": " + e.what());
  }
}

std::string plan_filter_text(const QueryPlan& plan) {
  if (plan.predicates.empty()) return "(all rows)";
  std::string out;
  for (std::size_t i = 0; i < plan.predicates.size(); ++i) {
    const Predicate& pr = plan.predicates[i];
    if (i) out += " AND ";
    out += pr.column;
    out += ' ';
    out += op_symbol(pr.op);
    out += ' ';
    out += std::to_string(pr.constant);
  }
  return out;
}

std::string plan_sum_text(const QueryPlan& plan) {
  std::string out = "SUM(";
  for (std::size_t i = 0; i < plan.aggregate_columns.size(); ++i) {
    if (i) out += " * ";
    out += plan.aggregate_columns[i];
  }
  return out + ")";
}

json plan_to_json(const QueryPlan& plan) {
  json j;
  j["predicates"] = json::array();
  for (const Predicate& pr : plan.predicates)
    j["predicates"].push_back(
        {{"column", pr.column}, {"op", cmp_op_name(pr.op)}, {"constant", pr.constant}});
  j["sum"] = plan.aggregate_columns;
  return j;
}

// Width-based wrap warnings (the decoded answer is exact only while per-row
// products, and for the per-cell layout the full sum, stay below p^r).
// Data-dependent, so these are advisories; the reference check is the oracle.
std::vector<std::string> fit_notes(const TableSpec& spec, const QueryPlan& plan,
                                   const ParamSet& ps, bool packed) {
  std::vector<std::string> notes;
  u64 m = checked_pow(ps.p, ps.r);
  unsigned __int128 prod = 1;
  bool prod_over = false;
  for (const std::string& c : plan.aggregate_columns) {
    u32 w = spec.bitwidths[spec.column_index(c)];
    prod *= (static_cast<unsigned __int128>(1) << w) - 1;
    if (prod >= m) {
      prod_over = true;
      break;
    }
  }
  if (prod_over) {
    notes.push_back(
        "note: the worst-case per-row product of the aggregate columns exceeds the modulus " +
        std::to_string(m) + "; the decoded sum is exact only if the actual data stays smaller");
  } else if (!packed && spec.rows > 0) {
    unsigned __int128 total = prod * spec.rows;
    if (total >= m)
      notes.push_back("note: the worst-case qualifying sum exceeds the modulus " +
                      std::to_string(m) +
                      "; the decoded sum is exact only if the actual data stays smaller");
  }
  return notes;
}

// ---------------------------------------------------------------- params --

struct ParamsOpts {
  u32 bitwidth = 8;
  u32 depth_budget = 4;
};

int run_params_cmd(const Global& g, const ParamsOpts& o) {
  check_pair_flags(g);
  std::vector<CandidateCost> ranked;
  if (g.p != 0) {
    require(params_feasible(g.p, g.r, o.bitwidth), Errc::infeasible_params,
            "(p, r) = (" + std::to_string(g.p) + ", " + std::to_string(g.r) + ") cannot hold " +
                std::to_string(o.bitwidth) + "-bit comparisons; needs p^r >= 2^" +
                std::to_string(o.bitwidth + 1));
    ranked.push_back(measure_compare_cost(g.p, g.r));
  } else {
    ranked = rank_candidates(o.bitwidth);
    require(!ranked.empty(), Errc::infeasible_params,
            "no desk-scale (p, r) fits " + std::to_string(o.bitwidth) + "-bit comparisons");
  }
  const CandidateCost& best = ranked.front();
  DepthBreakdown db = estimate_depth_detail(best.p, best.r);

  ParamSet ps;
  ps.p = best.p;
  ps.r = best.r;
  ps.levels = db.total() + o.depth_budget;
  ps.seed = g.seed;

  if (g.json_out) {
    json j;
    j["schema"] = 1;
    j["insecure_toy_parameters"] = true;
    j["bitwidth"] = o.bitwidth;
    j["selected"] = json::parse(params_to_json(ps));
    j["measured"] = {{"nonscalar", best.nonscalar}, {"depth", best.depth}};
    j["depth_estimate"] = {{"reduce", db.reduce}, {"compare", db.compare},
                           {"aggregate", db.aggregate}, {"raise", db.raise},
                           {"slack", db.slack}, {"total", db.total()}};
    j["candidates"] = json::array();
    for (const CandidateCost& c : ranked)
      j["candidates"].push_back({{"p", c.p}, {"r", c.r}, {"modulus", c.modulus},
                                 {"nonscalar", c.nonscalar}, {"depth", c.depth}});
    emit(j.dump(2));
    return 0;
  }

  std::puts(kBanner);
  std::printf("selected (p, r) = (%llu, %u): modulus %llu, one raised comparison costs %llu "
              "nonscalar mults at depth %u\n",
              (ull)best.p, best.r, (ull)best.modulus, (ull)best.nonscalar, best.depth);
  std::printf("level budget %u = estimated depth %u (reduce %u, compare %u, aggregate %u, "
              "raise %u, slack %u) + headroom %u\n",
              ps.levels, db.total(), db.reduce, db.compare, db.aggregate, db.raise, db.slack,
              o.depth_budget);
  std::printf("candidates for %u-bit inputs, cheapest first:\n", o.bitwidth);
  std::printf("  %8s %4s %10s %10s %6s\n", "p", "r", "modulus", "nonscalar", "depth");
  std::size_t shown = 0;
  for (const CandidateCost& c : ranked) {
    if (shown++ == 10) break;
    std::printf("  %8llu %4u %10llu %10llu %6u\n", (ull)c.p, c.r, (ull)c.modulus, (ull)c.nonscalar,
                c.depth);
  }
  return 0;
}

// ---------------------------------------------------------------- verify --

int run_verify_cmd(const Global& g, const std::string& mode) {
  check_pair_flags(g);
  u64 p = g.p != 0 ? g.p : 5;
  u32 r = g.p != 0 ? g.r : 3;
  VerifySummary s = run_verify(verify_mode_from_name(mode), p, r, g.seed);
  emit(g.json_out ? s.to_json() : s.to_text());
  return s.pass() ? 0 : 2;
}

// --------------------------------------------------------------- compare --

struct CompareOpts {
  u64 a = 0;
  u64 b = 0;
  std::string op = "lt";
  std::string strategy = "space-switch";
};

int run_compare_cmd(const Global& g, const CompareOpts& o) {
  ParamSet ps = explicit_or_default(g, 7, 3, 2, 1);
  u64 m = checked_pow(ps.p, ps.r);
  require(o.a < m && o.b < m, Errc::invalid_argument,
          "operands must lie in [0, " + std::to_string(m) + ")");
  u64 diff = o.a > o.b ? o.a - o.b : o.b - o.a;
  require(diff <= (m - 1) / 2, Errc::invalid_argument,
          "|a - b| = " + std::to_string(diff) + " exceeds the comparison window (p^r - 1)/2 = " +
              std::to_string((m - 1) / 2));
  CmpOp op = cmp_op_from_name(o.op);
  CompareOptions copt;
  copt.strategy = strategy_from_name(o.strategy);

  auto ev = make_backend(g.backend, ps);
  ev->ledger().reset();
  auto t0 = std::chrono::steady_clock::now();
  CipherHandle ha = ev->encode_vector({o.a});
  CipherHandle hb = ev->encode_vector({o.b});
  CipherHandle verdict = compare(*ev, op, ha, hb, copt);
  u64 got = ev->decode(verdict)[0];
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CostReport report = make_cost_report(*ev, wall);

  u64 want = int_cmp(op, o.a, o.b) ? 1 : 0;
  bool agree = got == want;
  double noise = -1.0;
  if (auto* bgv = dynamic_cast<BgvEval*>(ev.get())) noise = bgv->noise_budget_bits(verdict);

  if (g.json_out) {
    json j;
    j["schema"] = 1;
    j["op"] = cmp_op_name(op);
    j["a"] = o.a;
    j["b"] = o.b;
    j["result"] = got;
    j["oracle"] = want;
    j["agree"] = agree;
    j["report"] = json::parse(report.to_json());
    if (noise >= 0.0) j["noise_budget_bits"] = noise;
    emit(j.dump(2));
  } else {
    std::printf("%s(%llu, %llu) over Z_%llu [(p, r) = (%llu, %u), backend %s]\n", cmp_op_name(op),
                (ull)o.a, (ull)o.b, (ull)m, (ull)ps.p, ps.r, ev->backend_name().c_str());
    std::printf("result %llu, oracle %llu: %s\n", (ull)got, (ull)want,
                agree ? "agree" : "DISAGREE");
    emit(report.to_text());
    if (noise >= 0.0) std::printf("noise budget %.1f bits\n", noise);
  }
  return agree ? 0 : 2;
}

// --------------------------------------------------------------- extract --

struct ExtractOpts {
  u64 x = 0;
  std::string strategy = "space-switch";
};

int run_extract_cmd(const Global& g, const ExtractOpts& o) {
  ParamSet ps = explicit_or_default(g, 7, 3, 2, 1);
  u64 m = checked_pow(ps.p, ps.r);
  require(o.x < m, Errc::invalid_argument, "x must lie in [0, " + std::to_string(m) + ")");

  auto ev = make_backend(g.backend, ps);
  ev->ledger().reset();
  auto t0 = std::chrono::steady_clock::now();
  CipherHandle hx = ev->encode_vector({o.x});
  std::vector<CipherHandle> digits = reduce_to_digits(*ev, hx, strategy_from_name(o.strategy));
  std::vector<u64> got;
  for (const CipherHandle& d : digits) got.push_back(ev->decode(d)[0]);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CostReport report = make_cost_report(*ev, wall);

  std::vector<i64> oracle = base_p_digits(o.x, ps.p, ps.r);
  bool agree = got.size() == oracle.size();
  for (std::size_t i = 0; agree && i < got.size(); ++i)
    agree = got[i] == to_canonical(oracle[i], ps.p);

  if (g.json_out) {
    json j;
    j["schema"] = 1;
    j["x"] = o.x;
    j["balanced"] = balanced(o.x, m);
    json jd = json::array(), jo = json::array();
    for (std::size_t i = 0; i < got.size(); ++i) jd.push_back(balanced(got[i], ps.p));
    for (i64 d : oracle) jo.push_back(d);
    j["digits"] = jd;
    j["oracle"] = jo;
    j["agree"] = agree;
    j["report"] = json::parse(report.to_json());
    emit(j.dump(2));
  } else {
    std::printf("digits of %llu (balanced %lld) in base %llu, low digit first:\n", (ull)o.x,
                (long long)balanced(o.x, m), (ull)ps.p);
    for (std::size_t i = 0; i < got.size(); ++i) {
      i64 bd = balanced(got[i], ps.p);
      i64 od = i < oracle.size() ? oracle[i] : 0;
      std::printf("  digit %zu: %+lld (oracle %+lld) %s\n", i, (long long)bd, (long long)od,
                  bd == od ? "ok" : "MISMATCH");
    }
    emit(report.to_text());
  }
  return agree ? 0 : 2;
}

// ---------------------------------------------------------------- ingest --

struct IngestOpts {
  std::string csv;
  std::string out;
  std::string bits = "8";
  u32 headroom = 6;
};

std::vector<u32> widths_for(const std::string& bits, std::size_t columns) {
  std::vector<u32> ws = parse_u32_list(bits, "--bits");
  if (ws.size() == 1 && columns > 1) ws.assign(columns, ws[0]);
  require(ws.size() == columns, Errc::invalid_argument,
          "--bits lists " + std::to_string(ws.size()) + " widths but the CSV has " +
              std::to_string(columns) + " columns");
  return ws;
}

u32 max_width(const std::vector<u32>& ws) {
  u32 m = 1;
  for (u32 w : ws) m = std::max(m, w);
  return m;
}

json build_manifest(const Global& g, const ParamSet& ps, const EncryptedTable& t,
                    const json& files) {
  json j;
  j["schema"] = 1;
  j["insecure_toy_parameters"] = true;
  j["backend"] = g.backend;
  j["params"] = json::parse(params_to_json(ps));
  j["table"] = {{"columns", t.spec.columns}, {"bitwidths", t.spec.bitwidths},
                {"rows", t.spec.rows},       {"packed", t.packed()},
                {"files", files}};
  return j;
}

int run_ingest_cmd(const Global& g, const IngestOpts& o) {
  CsvData data = parse_csv_file(o.csv);
  std::vector<u32> widths = widths_for(o.bits, data.header.size());
  bool packed = g.backend == "clear";
  std::size_t slots = packed ? std::max<std::size_t>(data.rows.size(), 1) : 1;
  ParamSet ps = pick_params(g, max_width(widths), o.headroom, slots);

  auto ev = make_backend(g.backend, ps);
  EncryptedTable t = ingest_rows(*ev, TableSpec{data.header, widths, 0}, data.rows);

  std::error_code ec;
  fs::create_directories(o.out, ec);
  require(!ec, Errc::io, "cannot create output directory " + o.out + ": " + ec.message());

  json files = json::array();
  std::size_t written = 0;
  for (std::size_t j = 0; j < t.spec.columns.size(); ++j) {
    json col_files = json::array();
    if (t.packed()) {
      std::string name = "col" + std::to_string(j) + ".ct";
      save_cipher(*ev, t.columns[j], (fs::path(o.out) / name).string());
      col_files.push_back(name);
      ++written;
    } else {
      for (std::size_t i = 0; i < t.spec.rows; ++i) {
        std::string name = "col" + std::to_string(j) + "_row" + std::to_string(i) + ".ct";
        save_cipher(*ev, t.cells[j][i], (fs::path(o.out) / name).string());
        col_files.push_back(name);
        ++written;
      }
    }
    files.push_back(col_files);
  }

  json manifest = build_manifest(g, ps, t, files);
  {
    std::ofstream mf(fs::path(o.out) / "manifest.json", std::ios::binary);
    require(mf.good(), Errc::io, "cannot write manifest in " + o.out);
    mf << manifest.dump(2) << "\n";
    require(mf.good(), Errc::io, "short write on manifest in " + o.out);
  }

  if (g.json_out) {
    emit(manifest.dump(2));
  } else {
    std::puts(kBanner);
    std::printf("ingested %zu rows x %zu columns from %s\n", t.spec.rows, t.spec.columns.size(),
                o.csv.c_str());
    std::printf("wrote %zu ciphertext file(s) + manifest.json to %s [(p, r) = (%llu, %u), "
                "backend %s, %s]\n",
                written, o.out.c_str(), (ull)ps.p, ps.r, g.backend.c_str(),
                t.packed() ? "packed slots" : "one ciphertext per cell");
  }
  return 0;
}

// ----------------------------------------------------------------- query --

struct QueryOpts {
  std::string csv;
  std::string bits = "8";
  std::string from;
  std::string plan_file;
  std::vector<std::string> wheres;
  std::string sum;
  u32 headroom = 6;
};

QueryPlan assemble_plan(const QueryOpts& o) {
  QueryPlan plan;
  if (!o.plan_file.empty()) plan = plan_from_file(o.plan_file);
  for (const std::string& w : o.wheres) plan.predicates.push_back(parse_where(w));
  if (!o.sum.empty())
    for (const std::string& c : split_list(o.sum, '*')) plan.aggregate_columns.push_back(c);
  require(!plan.aggregate_columns.empty(), Errc::invalid_argument,
          "no aggregate: pass --sum or a plan file with a \"sum\" list");
  return plan;
}

EncryptedTable load_table(Evaluator& ev, const fs::path& dir, const json& jt) {
  EncryptedTable t;
  t.spec.columns = jt.at("columns").get<std::vector<std::string>>();
  t.spec.bitwidths = jt.at("bitwidths").get<std::vector<u32>>();
  t.spec.rows = jt.at("rows").get<std::size_t>();
  bool packed = jt.at("packed").get<bool>();
  const json& files = jt.at("files");
  require(files.size() == t.spec.columns.size(), Errc::io,
          "manifest files list does not match the column count");
  for (std::size_t j = 0; j < files.size(); ++j) {
    if (packed) {
      require(files[j].size() == 1, Errc::io, "manifest expects one file per packed column");
      t.columns.push_back(load_cipher(ev, (dir / files[j][0].get<std::string>()).string()));
    } else {
      require(files[j].size() == t.spec.rows, Errc::io,
              "manifest expects one file per cell in column " + std::to_string(j));
      std::vector<CipherHandle> col;
      for (const json& f : files[j]) col.push_back(load_cipher(ev, (dir / f.get<std::string>()).string()));
      t.cells.push_back(std::move(col));
    }
  }
  return t;
}

int run_query_cmd(const Global& g, const QueryOpts& o) {
  require(o.csv.empty() != o.from.empty(), Errc::invalid_argument,
          "pass exactly one of --csv (encrypt now) or --from (pre-encrypted directory)");
  QueryPlan plan = assemble_plan(o);

  std::unique_ptr<Evaluator> ev;
  EncryptedTable table;
  std::string backend = g.backend;
  bool have_reference = false;
  i64 reference = 0;

  if (!o.csv.empty()) {
    CsvData data = parse_csv_file(o.csv);
    std::vector<u32> widths = widths_for(o.bits, data.header.size());
    bool packed = backend == "clear";
    std::size_t slots = packed ? std::max<std::size_t>(data.rows.size(), 1) : 1;
    ParamSet ps = pick_params(g, max_width(widths), o.headroom, slots);
    ev = make_backend(backend, ps);
    table = ingest_rows(*ev, TableSpec{data.header, widths, 0}, data.rows);
    reference = reference_query(plan, table.spec, data.rows);
    have_reference = true;
  } else {
    fs::path dir(o.from);
    std::ifstream in(dir / "manifest.json", std::ios::binary);
    require(in.good(), Errc::io, "cannot open " + (dir / "manifest.json").string());
    json manifest;
    try {
      in >> manifest;
      backend = manifest.at("backend").get<std::string>();
      ParamSet ps = params_from_json(manifest.at("params").dump());
      ev = make_backend(backend, ps);
      table = load_table(*ev, dir, manifest.at("table"));
    } catch (const json::exception& e) {
      fail(Errc::io, "manifest.json: " + std::string(e.what()));
    }
  }

  QueryOutcome outcome = run_query(*ev, plan, table);
  bool exact = !have_reference || outcome.value == reference;
  std::vector<std::string> notes = fit_notes(table.spec, plan, ev->params(), table.packed());

  if (g.json_out) {
    json j;
    j["schema"] = 1;
    j["insecure_toy_parameters"] = true;
    j["backend"] = backend;
    j["plan"] = plan_to_json(plan);
    j["result"] = outcome.value;
    if (have_reference) {
      j["reference"] = reference;
      j["exact"] = exact;
    }
    j["notes"] = notes;
    j["report"] = json::parse(outcome.report.to_json());
    emit(j.dump(2));
  } else {
    std::puts(kBanner);
    std::printf("filter:    %s\n", plan_filter_text(plan).c_str());
    std::printf("aggregate: %s\n", plan_sum_text(plan).c_str());
    std::printf("result:    %lld\n", (long long)outcome.value);
    if (have_reference)
      std::printf("reference: %lld (%s)\n", (long long)reference,
                  exact ? "exact" : "DISAGREES");
    for (const std::string& n : notes) std::printf("%s\n", n.c_str());
    emit(outcome.report.to_text());
  }
  return exact ? 0 : 2;
}

// ----------------------------------------------------------------- bench --

struct BenchOpts {
  std::string bitwidths = "8,12";
  std::string strategies = "space-switch,direct";
  bool csv = false;
  std::string out;
};

int run_bench_cmd(const Global& g, const BenchOpts& o) {
  BenchTable t = run_bench(parse_u32_list(o.bitwidths, "--bitwidths"), split_list(o.strategies),
                           g.backend, g.seed);
  std::string rendered = g.json_out ? t.to_json() : (o.csv ? t.to_csv() : t.to_text());
  if (rendered.empty() || rendered.back() != '\n') rendered += '\n';
  if (o.out.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    require(f.good(), Errc::io, "cannot open " + o.out + " for writing");
    f << rendered;
    require(f.good(), Errc::io, "short write on " + o.out);
  }
  return 0;
}

// ------------------------------------------------------------- dump-poly --

struct DumpOpts {
  std::string kind = "retain";
  u32 e = 0;
};

int run_dump_poly_cmd(const Global& g, const DumpOpts& o) {
  check_pair_flags(g);
  u64 p = g.p != 0 ? g.p : 5;
  u32 r = g.p != 0 ? g.r : 3;
  DensePoly f;
  u32 e = 1;
  if (o.kind == "retain") {
    e = o.e != 0 ? o.e : r;
    require(e >= 2, Errc::invalid_argument, "retain polynomials need --e >= 2");
    f = build_G(p, e);
  } else if (o.kind == "lt") {
    f = build_F_LT(p);
  } else if (o.kind == "eq") {
    f = build_F_EQ(p);
  } else {
    fail(Errc::invalid_argument, "unknown --kind '" + o.kind + "' (expected retain, lt or eq)");
  }

  if (g.json_out) {
    json j;
    j["schema"] = 1;
    j["kind"] = o.kind;
    j["p"] = p;
    if (o.kind == "retain") j["e"] = e;
    j["modulus"] = f.modulus;
    j["degree"] = f.degree();
    j["nonscalar_bound"] = ps_nonscalar_bound(f.degree());
    json coeffs = json::array();
    for (std::size_t i = 0; i <= f.degree(); ++i) coeffs.push_back(balanced(f.coeff(i), f.modulus));
    j["coeffs_balanced"] = coeffs;
    emit(j.dump(2));
    return 0;
  }

  if (o.kind == "retain")
    std::printf("digit-retain polynomial for (p, e) = (%llu, %u) over Z_%llu\n", (ull)p, e,
                (ull)f.modulus);
  else
    std::printf("%s indicator polynomial for p = %llu over Z_%llu\n",
                o.kind == "lt" ? "less-than" : "equality", (ull)p, (ull)f.modulus);
  std::printf("degree %zu, evaluable in <= %llu nonscalar mults\n", f.degree(),
              (ull)ps_nonscalar_bound(f.degree()));
  std::printf("nonzero coefficients (balanced):\n");
  for (std::size_t i = 0; i <= f.degree(); ++i) {
    i64 c = balanced(f.coeff(i), f.modulus);
    if (c != 0) std::printf("  x^%-4zu %+lld\n", i, (long long)c);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"space-switching comparison toolkit (toy parameters, no security)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "spaceswitch 0.1.0");

  Global g;
  app.add_option("--p", g.p, "digit prime base (with --r; overrides parameter selection)");
  app.add_option("--r", g.r, "digit count, plaintext space Z_{p^r}");
  app.add_option("--backend", g.backend, "evaluator backend: clear | bgv")
      ->default_str("clear");
  app.add_option("--seed", g.seed, "RNG seed for keys, sampling and demo data")->default_str("1");
  app.add_flag("--json", g.json_out, "machine-readable JSON on stdout");

  int rc = 0;

  ParamsOpts po;
  auto* params_cmd =
      app.add_subcommand("params", "choose (p, r) and a level budget for a bit-width");
  params_cmd->add_option("--bitwidth", po.bitwidth, "input bit-width to support")
      ->required()
      ->check(CLI::Range(1, 63));
  params_cmd->add_option("--depth-budget", po.depth_budget, "levels added above the estimate")
      ->default_str("4");
  params_cmd->callback([&] { rc = run_params_cmd(g, po); });

  IngestOpts io_opts;
  auto* ingest_cmd = app.add_subcommand("ingest", "encrypt a CSV table into a directory");
  ingest_cmd->add_option("--csv", io_opts.csv, "input CSV (header row, unsigned integer cells)")
      ->required();
  ingest_cmd->add_option("--out", io_opts.out, "output directory for ciphertexts + manifest")
      ->required();
  ingest_cmd->add_option("--bits", io_opts.bits,
                         "per-column bit-widths, one value or a comma list");
  ingest_cmd->add_option("--headroom", io_opts.headroom, "levels added above the depth estimate");
  ingest_cmd->callback([&] { rc = run_ingest_cmd(g, io_opts); });

  QueryOpts qo;
  auto* query_cmd =
      app.add_subcommand("query", "run an encrypted filter + aggregate over a table");
  query_cmd->add_option("--csv", qo.csv, "encrypt this CSV, run, and check the plain reference");
  query_cmd->add_option("--bits", qo.bits, "per-column bit-widths for --csv");
  query_cmd->add_option("--from", qo.from, "directory written by ingest");
  query_cmd->add_option("--where", qo.wheres, "predicate like 'quantity<24' (repeatable)")
      ->type_size(1);
  query_cmd->add_option("--sum", qo.sum, "aggregate columns, e.g. 'price*discount'");
  query_cmd->add_option("--plan", qo.plan_file, "JSON plan file {predicates: [...], sum: [...]}");
  query_cmd->add_option("--headroom", qo.headroom, "levels added above the depth estimate");
  query_cmd->callback([&] { rc = run_query_cmd(g, qo); });

  CompareOpts co;
  auto* compare_cmd = app.add_subcommand("compare", "compare two scalars under encryption");
  compare_cmd->add_option("--a", co.a, "left operand")->required();
  compare_cmd->add_option("--b", co.b, "right operand")->required();
  compare_cmd->add_option("--op", co.op, "lt | le | gt | ge | eq | neq")->default_str("lt");
  compare_cmd->add_option("--strategy", co.strategy,
                          "halevi-shoup | chen-han | geelen | space-switch");
  compare_cmd->callback([&] { rc = run_compare_cmd(g, co); });

  ExtractOpts eo;
  auto* extract_cmd = app.add_subcommand("extract", "extract balanced base-p digits");
  extract_cmd->add_option("--x", eo.x, "value to decompose")->required();
  extract_cmd->add_option("--strategy", eo.strategy,
                          "halevi-shoup | chen-han | geelen | space-switch");
  extract_cmd->callback([&] { rc = run_extract_cmd(g, eo); });

  std::string verify_mode;
  auto* verify_cmd = app.add_subcommand("verify", "check a component against its oracle");
  verify_cmd->add_option("--mode", verify_mode, "polys | digits | compare | roundtrip")
      ->required();
  verify_cmd->callback([&] { rc = run_verify_cmd(g, verify_mode); });

  BenchOpts bo;
  auto* bench_cmd = app.add_subcommand("bench", "cost tables per bit-width and strategy");
  bench_cmd->add_option("--bitwidths", bo.bitwidths, "comma list, e.g. 8,12");
  bench_cmd->add_option("--strategies", bo.strategies,
                        "comma list of space-switch, halevi-shoup, chen-han, geelen, direct");
  bench_cmd->add_flag("--csv", bo.csv, "emit CSV instead of the text table");
  bench_cmd->add_option("--out", bo.out, "write the table to a file instead of stdout");
  bench_cmd->callback([&] { rc = run_bench_cmd(g, bo); });

  DumpOpts dpo;
  auto* dump_cmd = app.add_subcommand("dump-poly", "print an interpolation polynomial");
  dump_cmd->add_option("--kind", dpo.kind, "retain | lt | eq")->default_str("retain");
  dump_cmd->add_option("--e", dpo.e, "digit-retain exponent (default r)");
  dump_cmd->callback([&] { rc = run_dump_poly_cmd(g, dpo); });

  for (auto* sub : {params_cmd, ingest_cmd, query_cmd, compare_cmd, extract_cmd, verify_cmd,
                    bench_cmd, dump_cmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return rc;
}
