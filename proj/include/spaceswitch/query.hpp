// Copyright (c) the spaceswitch authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPACESWITCH_QUERY_HPP
#define SPACESWITCH_QUERY_HPP

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "spaceswitch/compare.hpp"

namespace spaceswitch {

// Column layout of a table. Values in column i must fit bitwidths[i] bits.
struct TableSpec {
  std::vector<std::string> columns;
  std::vector<u32> bitwidths;
  std::size_t rows = 0;

  std::size_t column_index(const std::string& name) const;
};

struct Predicate {
  std::string column;
  CmpOp op = CmpOp::lt;
  u64 constant = 0;
};

// Conjunctive filter plus a single aggregate: SUM over qualifying rows of
// the product of aggregate_columns.
struct QueryPlan {
  std::vector<Predicate> predicates;
  std::vector<std::string> aggregate_columns;
};

// Ledger snapshot of one run. Stage tallies cover reduction, digit-compare,
// aggregation, raise and arithmetic; their sums equal the totals row.
struct CostReport {
  std::map<std::string, CostCounts> stages;
  CostCounts totals;
  u32 depth = 0;
  ParamSet params;
  std::string backend;
  double wall_seconds = 0.0;

  std::string to_json() const;
  std::string to_text() const;
};

// The names every report carries, in display order.
extern const std::array<const char*, 5> kStageNames;

// Snapshot the evaluator's ledger into a report. Throws Errc::verification
// if a tally landed outside the known stages or the sums disagree.
CostReport make_cost_report(const Evaluator& ev, double wall_seconds);

// Parsed CSV: a header row plus unsigned integer cells.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<u64>> rows;
};

// Errc::io on malformed input, naming the row and column.
CsvData parse_csv(std::istream& in);
CsvData parse_csv_file(const std::string& path);

// Encrypted table. The cleartext backend packs each column into one handle
// (row order = slot order); the lattice backend holds one handle per cell,
// cells[column][row].
struct EncryptedTable {
  TableSpec spec;
  std::vector<CipherHandle> columns;
  std::vector<std::vector<CipherHandle>> cells;

  bool packed() const { return !columns.empty(); }
};

// Row budget for the one-ciphertext-per-cell backend.
inline constexpr std::size_t kCellRowBudget = 4096;

// Encrypts rows under ev. Values must fit their column's bit-width and the
// plaintext modulus; violations name the row and column. Row capacity:
// ParamSet::slots when packing, kCellRowBudget otherwise.
EncryptedTable ingest_rows(Evaluator& ev, TableSpec spec,
                           const std::vector<std::vector<u64>>& rows);

// parse_csv_file + header/spec match + ingest_rows.
EncryptedTable ingest_csv(Evaluator& ev, TableSpec spec, const std::string& path);

// Exact integer semantics of a plan, the oracle every encrypted run is
// checked against.
i64 reference_query(const QueryPlan& plan, const TableSpec& spec,
                    const std::vector<std::vector<u64>>& rows);

struct QueryOutcome {
  i64 value = 0;
  CostReport report;
};

// Encrypted filter + aggregate. Each predicate becomes a 0/1 mask at the
// full modulus; masks are ANDed by multiplication, multiplied into the
// product of the aggregate columns, and summed across rows (slot sum after
// decode when packed, ciphertext additions otherwise).
//
// Works in Z_{p^r}: the decoded result equals the integer answer whenever
// every per-row product and the qualifying sum stay below p^r. Callers size
// the modulus for their data; reference_query is the check.
//
// Resets ev's ledger so the report covers exactly this run. Depth
// exhaustion mid-circuit is rethrown as Errc::infeasible_params with the
// stage it happened in and the per-stage depth estimate.
QueryOutcome run_query(Evaluator& ev, const QueryPlan& plan, const EncryptedTable& table);

// Seeded line-item style demo data: quantity, price, discount and a
// date-as-day-offset column, all declared 8-bit. Discounts stay in 0..10 so
// masked sums remain far below the moduli used in the demos.
struct DemoTable {
  TableSpec spec;
  std::vector<std::vector<u64>> rows;
};

DemoTable make_demo_table(std::size_t rows, u64 seed);

// quantity < 24 AND date >= 90, SUM(price * discount).
QueryPlan make_demo_plan();

}  // namespace spaceswitch

#endif
