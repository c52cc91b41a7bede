#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "jtheta/jtheta.h"

namespace jtcli {

enum class Format { kJsonRecords, kCsv };

struct Entry {
  std::int64_t l = 0;
  std::vector<std::int64_t> nu;
  double re = 0.0;
  double im = 0.0;

  bool operator==(const Entry&) const = default;
};

struct ParsedExpansion {
  std::size_t n = 0;
  std::vector<Entry> entries;
};

// Entries in canonical order (l, then nu lexicographically).
std::vector<Entry> entries_of(const jt_expansion* e);

// json-records: one {"record":"coefficient",...} object per line.
// csv: header "l,nu_1,...,nu_n,re,im" followed by one row per entry.
void write_expansion(std::ostream& out, const jt_expansion* e, Format format);

// Throws std::runtime_error on malformed input.
ParsedExpansion read_expansion(std::istream& in, Format format);

// Shortest decimal that parses back to the same double.
std::string format_double(double x);

}  // namespace jtcli
