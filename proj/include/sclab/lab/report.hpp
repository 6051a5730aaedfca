#pragma once

#include <string>
#include <variant>
#include <vector>

namespace sclab::lab::report {

// A table cell is either an integer, a double, or a label. Doubles are
// written with the shortest digit string that round-trips, so output files
// are byte-stable across platforms and worker counts.
using Cell = std::variant<long long, double, std::string>;
using Row = std::vector<Cell>;

struct Table {
  std::string name;  // becomes <name>.csv
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

std::string format_cell(const Cell& cell);

// Stable sort by the "trial" column when the table has one, so row order
// never depends on how trials were scheduled across workers.
void canonical_sort(Table& table);

// Header line plus one line per row; throws std::runtime_error naming the
// path on I/O failure.
void write_csv(const Table& table, const std::string& path);

// `git describe --always --dirty`, or "unknown" outside a repository.
std::string git_describe();

}  // namespace sclab::lab::report
