// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#include "spaceswitch/query.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spaceswitch/clear_eval.hpp"
#include "spaceswitch/params.hpp"
#include "spaceswitch/serialize.hpp"

namespace spaceswitch {

const std::array<const char*, 5> kStageNames = {"reduction", "digit-compare", "aggregation",
                                                "raise", "arithmetic"};

std::size_t TableSpec::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  fail(Errc::invalid_argument, "no column named '" + name + "'");
}

CostReport make_cost_report(const Evaluator& ev, double wall_seconds) {
  CostReport rep;
  rep.params = ev.params();
  rep.backend = ev.backend_name();
  rep.wall_seconds = wall_seconds;
  rep.depth = ev.ledger().max_depth_consumed();
  rep.totals = ev.ledger().totals();
  for (const char* s : kStageNames) rep.stages[s];  // zero rows for stages not hit

  CostCounts sum;
  for (const auto& [name, counts] : ev.ledger().per_stage()) {
    bool known = false;
    for (const char* s : kStageNames) known = known || name == s;
    require(known, Errc::verification, "ledger holds a tally for unknown stage '" + name + "'");
    rep.stages[name] = counts;
    sum += counts;
  }
  require(sum.nonscalar_mults == rep.totals.nonscalar_mults &&
              sum.scalar_mults == rep.totals.scalar_mults &&
              sum.additions == rep.totals.additions,
          Errc::verification, "stage tallies do not add up to the ledger totals");
  return rep;
}

namespace {

nlohmann::json counts_json(const CostCounts& c) {
  return {{"nonscalar", c.nonscalar_mults}, {"scalar", c.scalar_mults}, {"additions", c.additions}};
}

}  // namespace

std::string CostReport::to_json() const {
  nlohmann::json j;
  j["schema"] = 1;
  j["backend"] = backend;
  j["params"] = nlohmann::json::parse(params_to_json(params));
  for (const auto& [name, counts] : stages) j["stages"][name] = counts_json(counts);
  j["totals"] = counts_json(totals);
  j["depth"] = depth;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2);
}

std::string CostReport::to_text() const {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "backend %s, p=%llu r=%u levels=%u\n", backend.c_str(),
                static_cast<unsigned long long>(params.p), params.r, params.levels);
  out << line;
  std::snprintf(line, sizeof line, "%-14s %10s %10s %10s\n", "stage", "nonscalar", "scalar",
                "additions");
  out << line;
  auto row = [&](const std::string& name, const CostCounts& c) {
    std::snprintf(line, sizeof line, "%-14s %10llu %10llu %10llu\n", name.c_str(),
                  static_cast<unsigned long long>(c.nonscalar_mults),
                  static_cast<unsigned long long>(c.scalar_mults),
                  static_cast<unsigned long long>(c.additions));
    out << line;
  };
  for (const char* s : kStageNames) row(s, stages.at(s));
  row("totals", totals);
  std::snprintf(line, sizeof line, "depth consumed %u, wall %.3f s\n", depth, wall_seconds);
  out << line;
  return out.str();
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> out;
  std::size_t at = 0;
  while (true) {
    std::size_t comma = line.find(',', at);
    out.push_back(trimmed(line.substr(at, comma - at)));
    if (comma == std::string::npos) break;
    at = comma + 1;
  }
  return out;
}

}  // namespace

CsvData parse_csv(std::istream& in) {
  CsvData data;
  std::string line;
  std::size_t rownum = 0;  // data rows, 1-based in messages
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (data.header.empty() && trimmed(line).empty()) continue;
    std::vector<std::string> cells = split_cells(line);
    if (data.header.empty()) {
      for (const std::string& name : cells)
        require(!name.empty(), Errc::io, "csv header has an empty column name");
      data.header = std::move(cells);
      continue;
    }
    if (cells.size() == 1 && cells[0].empty()) continue;  // blank line
    ++rownum;
    require(cells.size() == data.header.size(), Errc::io,
            "row " + std::to_string(rownum) + ": expected " +
                std::to_string(data.header.size()) + " cells, got " +
                std::to_string(cells.size()));
    std::vector<u64> vals(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string& cell = cells[i];
      bool ok = !cell.empty();
      u64 v = 0;
      for (char ch : cell) {
        if (ch < '0' || ch > '9' || v > (UINT64_MAX - 9) / 10) {
          ok = false;
          break;
        }
        v = v * 10 + static_cast<u64>(ch - '0');
      }
      require(ok, Errc::io, "row " + std::to_string(rownum) + ", column '" + data.header[i] +
                                "': not an unsigned integer: '" + cell + "'");
      vals[i] = v;
    }
    data.rows.push_back(std::move(vals));
  }
  require(!data.header.empty(), Errc::io, "csv input has no header row");
  return data;
}

CsvData parse_csv_file(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), Errc::io, "cannot open " + path);
  return parse_csv(f);
}

EncryptedTable ingest_rows(Evaluator& ev, TableSpec spec,
                           const std::vector<std::vector<u64>>& rows) {
  std::size_t ncols = spec.columns.size();
  require(ncols >= 1, Errc::invalid_argument, "table spec has no columns");
  require(spec.bitwidths.size() == ncols, Errc::invalid_argument,
          "table spec declares " + std::to_string(ncols) + " columns but " +
              std::to_string(spec.bitwidths.size()) + " bit-widths");
  require(!rows.empty(), Errc::invalid_argument, "table has no rows");

  u64 m = ev.tag_modulus(ev.params().r);
  for (std::size_t j = 0; j < ncols; ++j) {
    u32 w = spec.bitwidths[j];
    require(w >= 1 && w <= 62, Errc::invalid_argument,
            "column '" + spec.columns[j] + "': unsupported bit-width " + std::to_string(w));
    require(((u64{1} << w) - 1) < m, Errc::infeasible_params,
            "column '" + spec.columns[j] + "' declares " + std::to_string(w) +
                "-bit values but the plaintext modulus is only " + std::to_string(m));
  }

  bool packed = dynamic_cast<ClearEval*>(&ev) != nullptr;
  if (packed)
    require(rows.size() <= ev.params().slots, Errc::infeasible_params,
            "row count " + std::to_string(rows.size()) + " exceeds the configured slot capacity " +
                std::to_string(ev.params().slots));
  else
    require(rows.size() <= kCellRowBudget, Errc::infeasible_params,
            "row count " + std::to_string(rows.size()) + " exceeds the per-cell ciphertext budget " +
                std::to_string(kCellRowBudget));

  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == ncols, Errc::invalid_argument,
            "row " + std::to_string(i + 1) + ": expected " + std::to_string(ncols) +
                " values, got " + std::to_string(rows[i].size()));
    for (std::size_t j = 0; j < ncols; ++j) {
      u64 v = rows[i][j];
      require(v >> spec.bitwidths[j] == 0, Errc::invalid_argument,
              "row " + std::to_string(i + 1) + ", column '" + spec.columns[j] + "': value " +
                  std::to_string(v) + " exceeds the declared " +
                  std::to_string(spec.bitwidths[j]) + "-bit width");
    }
  }

  EncryptedTable table;
  spec.rows = rows.size();
  table.spec = std::move(spec);
  if (packed) {
    std::vector<u64> colvals(rows.size());
    for (std::size_t j = 0; j < ncols; ++j) {
      for (std::size_t i = 0; i < rows.size(); ++i) colvals[i] = rows[i][j];
      table.columns.push_back(ev.encode_vector(colvals));
    }
  } else {
    table.cells.resize(ncols);
    for (std::size_t j = 0; j < ncols; ++j) {
      table.cells[j].reserve(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i)
        table.cells[j].push_back(ev.encode_vector({rows[i][j]}));
    }
  }
  return table;
}

EncryptedTable ingest_csv(Evaluator& ev, TableSpec spec, const std::string& path) {
  CsvData data = parse_csv_file(path);
  require(data.header.size() == spec.columns.size(), Errc::io,
          path + " has " + std::to_string(data.header.size()) + " columns, the table spec declares " +
              std::to_string(spec.columns.size()));
  for (std::size_t j = 0; j < spec.columns.size(); ++j)
    require(data.header[j] == spec.columns[j], Errc::io,
            "column " + std::to_string(j + 1) + " is named '" + data.header[j] +
                "' in the file but '" + spec.columns[j] + "' in the table spec");
  return ingest_rows(ev, std::move(spec), data.rows);
}

namespace {

bool holds(CmpOp op, u64 a, u64 k) {
  switch (op) {
    case CmpOp::lt: return a < k;
    case CmpOp::le: return a <= k;
    case CmpOp::gt: return a > k;
    case CmpOp::ge: return a >= k;
    case CmpOp::eq: return a == k;
    case CmpOp::neq: return a != k;
  }
  fail(Errc::invalid_argument, "unknown comparison op");
}

void check_plan(const QueryPlan& plan, const TableSpec& spec) {
  require(!plan.aggregate_columns.empty(), Errc::invalid_argument, "plan has no aggregate");
  for (const Predicate& pr : plan.predicates) spec.column_index(pr.column);
  for (const std::string& c : plan.aggregate_columns) spec.column_index(c);
}

}  // namespace

i64 reference_query(const QueryPlan& plan, const TableSpec& spec,
                    const std::vector<std::vector<u64>>& rows) {
  check_plan(plan, spec);
  i128 acc = 0;
  for (const std::vector<u64>& row : rows) {
    bool qualifies = true;
    for (const Predicate& pr : plan.predicates)
      qualifies = qualifies && holds(pr.op, row[spec.column_index(pr.column)], pr.constant);
    if (!qualifies) continue;
    i128 prod = 1;
    for (const std::string& c : plan.aggregate_columns)
      prod *= static_cast<i128>(row[spec.column_index(c)]);
    acc += prod;
  }
  require(acc <= static_cast<i128>(INT64_MAX), Errc::invalid_argument,
          "aggregate overflows 64 bits");
  return static_cast<i64>(acc);
}

namespace {

// Balanced product so depth stays at ceil(log2(size)).
CipherHandle product_tree(Evaluator& ev, std::vector<CipherHandle> hs) {
  while (hs.size() > 1) {
    std::vector<CipherHandle> next;
    for (std::size_t i = 0; i + 1 < hs.size(); i += 2) next.push_back(ev.mul(hs[i], hs[i + 1]));
    if (hs.size() & 1) next.push_back(hs.back());
    hs = std::move(next);
  }
  return hs[0];
}

[[noreturn]] void rethrow_depth_exhaustion(const Evaluator& ev, const Error& e) {
  DepthBreakdown db = estimate_depth_detail(ev.params().p, ev.params().r);
  std::string msg =
      "depth budget exhausted in stage '" + ev.ledger().current_stage() + "' (" + e.what() +
      "); the context has " + std::to_string(ev.params().levels) +
      " levels, one comparison estimates " + std::to_string(db.total()) + " (reduce " +
      std::to_string(db.reduce) + " + digit-compare " + std::to_string(db.compare) +
      " + aggregate " + std::to_string(db.aggregate) + " + raise " + std::to_string(db.raise) +
      " + slack " + std::to_string(db.slack) + "), plus the plan's mask and product combining";
  fail(Errc::infeasible_params, msg);
}

}  // namespace

QueryOutcome run_query(Evaluator& ev, const QueryPlan& plan, const EncryptedTable& table) {
  check_plan(plan, table.spec);
  const ParamSet& ps = ev.params();
  for (const Predicate& pr : plan.predicates) {
    u32 w = table.spec.bitwidths[table.spec.column_index(pr.column)];
    require(params_feasible(ps.p, ps.r, w), Errc::infeasible_params,
            "column '" + pr.column + "' holds " + std::to_string(w) +
                "-bit values; comparing them needs p^r >= 2^" + std::to_string(w + 1) +
                ", but the modulus is " + std::to_string(ev.tag_modulus(ps.r)));
    require(pr.constant >> w == 0, Errc::invalid_argument,
            "predicate constant " + std::to_string(pr.constant) + " exceeds column '" + pr.column +
                "' " + std::to_string(w) + "-bit range");
  }

  ev.ledger().reset();
  auto t0 = std::chrono::steady_clock::now();
  i64 value = 0;
  try {
    if (table.packed()) {
      std::vector<CipherHandle> masks;
      for (const Predicate& pr : plan.predicates)
        masks.push_back(compare_const(ev, pr.op, table.columns[table.spec.column_index(pr.column)],
                                      pr.constant));
      std::vector<CipherHandle> aggcols;
      for (const std::string& c : plan.aggregate_columns)
        aggcols.push_back(table.columns[table.spec.column_index(c)]);
      CipherHandle masked;
      {
        StageScope scope(ev.ledger(), "aggregation");
        masked = product_tree(ev, std::move(aggcols));
        if (!masks.empty()) masked = ev.mul(product_tree(ev, std::move(masks)), masked);
      }
      for (u64 slot : ev.decode(masked)) value += static_cast<i64>(slot);
    } else {
      CipherHandle sum;
      for (std::size_t i = 0; i < table.spec.rows; ++i) {
        std::vector<CipherHandle> masks;
        for (const Predicate& pr : plan.predicates)
          masks.push_back(compare_const(
              ev, pr.op, table.cells[table.spec.column_index(pr.column)][i], pr.constant));
        std::vector<CipherHandle> aggcells;
        for (const std::string& c : plan.aggregate_columns)
          aggcells.push_back(table.cells[table.spec.column_index(c)][i]);
        StageScope scope(ev.ledger(), "aggregation");
        CipherHandle masked = product_tree(ev, std::move(aggcells));
        if (!masks.empty()) masked = ev.mul(product_tree(ev, std::move(masks)), masked);
        sum = sum.valid() ? ev.add(sum, masked) : masked;
      }
      value = static_cast<i64>(ev.decode(sum)[0]);
    }
  } catch (const Error& e) {
    if (e.code() == Errc::invalid_argument &&
        std::strstr(e.what(), "depth budget exhausted") != nullptr)
      rethrow_depth_exhaustion(ev, e);
    throw;
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {value, make_cost_report(ev, wall)};
}

DemoTable make_demo_table(std::size_t rows, u64 seed) {
  DemoTable t;
  t.spec.columns = {"quantity", "price", "discount", "date"};
  t.spec.bitwidths = {8, 8, 8, 8};
  t.spec.rows = rows;
  Rng rng(seed);
  t.rows.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i)
    t.rows.push_back({1 + rng.uniform(50), 1 + rng.uniform(200), rng.uniform(11),
                      rng.uniform(256)});
  return t;
}

QueryPlan make_demo_plan() {
  QueryPlan plan;
  plan.predicates = {{"quantity", CmpOp::lt, 24}, {"date", CmpOp::ge, 90}};
  plan.aggregate_columns = {"price", "discount"};
  return plan;
}

}  // namespace spaceswitch
