#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ttpsig::csv {

/// One parsed record and the physical line it started on.
struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

/// RFC-4180 reader. Quoted fields may contain commas, doubled quotes and
/// line breaks. CRLF and LF line endings are both accepted.
class Reader {
 public:
  Reader(std::istream& in, std::string source_name);

  /// Returns false at end of input. Throws ParseError on an unterminated
  /// quote or stray characters after a closing quote.
  bool next(Record& out);

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 1;
};

/// Quote a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace ttpsig::csv
