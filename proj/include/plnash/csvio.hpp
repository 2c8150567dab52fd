#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "plnash/solvers.hpp"

namespace plnash {

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Trace serialization. Header is exactly `iter,block,case,k,gap,grad_sq`;
// one row per record in iteration order; numbers printed with %.17g so the
// round trip is bit-exact; empty case/k cells are written as `none`.
void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace);
std::string trace_csv_string(const std::vector<IterationRecord>& trace);
void save_trace_csv(const std::string& path, const std::vector<IterationRecord>& trace);

// Inverse of write_trace_csv. Throws CsvError on a malformed header or row.
// gap_abr is not part of the CSV schema and comes back unset.
std::vector<IterationRecord> read_trace_csv(std::istream& in);
std::vector<IterationRecord> load_trace_csv(const std::string& path);

}  // namespace plnash
