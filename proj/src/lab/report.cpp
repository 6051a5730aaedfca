#include "sclab/lab/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sclab::lab::report {
namespace {

std::string shortest_double(double x) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return shortest_double(*d);
  return std::get<std::string>(cell);
}

void canonical_sort(Table& table) {
  const auto it = std::find(table.columns.begin(), table.columns.end(), "trial");
  if (it == table.columns.end()) return;
  const auto col = static_cast<std::size_t>(it - table.columns.begin());
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [col](const Row& a, const Row& b) {
                     return std::get<long long>(a.at(col)) <
                            std::get<long long>(b.at(col));
                   });
}

void write_csv(const Table& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out << ',';
    out << table.columns[c];
  }
  out << '\n';
  for (const Row& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::runtime_error("table '" + table.name + "' has a ragged row");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << format_cell(row[c]);
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string git_describe() {
  FILE* pipe = popen("git describe --always --dirty 2>/dev/null", "r");
  if (!pipe) return "unknown";
  std::string out;
  std::array<char, 256> buf;
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int rc = pclose(pipe);
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  if (rc != 0 || out.empty()) return "unknown";
  return out;
}

}  // namespace sclab::lab::report
