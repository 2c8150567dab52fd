#include "plnash/csvio.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "plnash/config.hpp"

namespace plnash {

namespace {

constexpr const char* kHeader = "iter,block,case,k,gap,grad_sq";

std::optional<CaseTag> tag_from_cell(const std::string& cell, std::size_t row) {
  if (cell == "none") return std::nullopt;
  if (cell == "case1") return CaseTag::Case1;
  if (cell == "case2") return CaseTag::Case2;
  if (cell == "case3") return CaseTag::Case3;
  if (cell == "converged") return CaseTag::Converged;
  throw CsvError("row " + std::to_string(row) + ": unknown case tag '" + cell + "'");
}

double double_from_cell(const std::string& cell, std::size_t row, const char* col) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size()) {
    throw CsvError("row " + std::to_string(row) + ": bad " + std::string(col) + " value '" + cell +
                   "'");
  }
  return v;
}

long long_from_cell(const std::string& cell, std::size_t row, const char* col) {
  char* end = nullptr;
  const long v = std::strtol(cell.c_str(), &end, 10);
  if (cell.empty() || end != cell.c_str() + cell.size()) {
    throw CsvError("row " + std::to_string(row) + ": bad " + std::string(col) + " value '" + cell +
                   "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace) {
  out << kHeader << '\n';
  for (const IterationRecord& r : trace) {
    out << r.iter << ',' << r.chosen_block << ',';
    out << (r.tag ? to_string(*r.tag) : std::string("none")) << ',';
    out << (r.k ? format_g17(*r.k) : std::string("none")) << ',';
    out << format_g17(r.gap) << ',' << format_g17(r.grad_sq) << '\n';
  }
}

std::string trace_csv_string(const std::vector<IterationRecord>& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

void save_trace_csv(const std::string& path, const std::vector<IterationRecord>& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CsvError("cannot write trace file '" + path + "'");
  write_trace_csv(out, trace);
}

std::vector<IterationRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw CsvError("bad header '" + line + "'");
  std::vector<IterationRecord> trace;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    cells.push_back(cur);
    if (cells.size() != 6) {
      throw CsvError("row " + std::to_string(row) + ": expected 6 columns, got " +
                     std::to_string(cells.size()));
    }
    IterationRecord r;
    r.iter = long_from_cell(cells[0], row, "iter");
    r.chosen_block = static_cast<int>(long_from_cell(cells[1], row, "block"));
    r.tag = tag_from_cell(cells[2], row);
    if (cells[3] != "none") r.k = double_from_cell(cells[3], row, "k");
    r.gap = double_from_cell(cells[4], row, "gap");
    r.grad_sq = double_from_cell(cells[5], row, "grad_sq");
    trace.push_back(r);
  }
  return trace;
}

std::vector<IterationRecord> load_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open trace file '" + path + "'");
  return read_trace_csv(in);
}

}  // namespace plnash
