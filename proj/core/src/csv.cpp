#include "ttpsig/csv.hpp"

#include "ttpsig/error.hpp"

namespace ttpsig::csv {

Reader::Reader(std::istream& in, std::string source_name)
    : in_(in), source_(std::move(source_name)) {}

bool Reader::next(Record& out) {
  out.fields.clear();
  out.line = line_;

  int c = in_.get();
  if (c == std::char_traits<char>::eof()) return false;

  std::string field;
  bool quoted = false;
  bool after_quote = false;
  for (;; c = in_.get()) {
    if (c == std::char_traits<char>::eof()) {
      if (quoted) throw ParseError(source_, out.line, "unterminated quoted field");
      out.fields.push_back(std::move(field));
      return true;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == ',') {
      out.fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (ch == '\r' && in_.peek() == '\n') {
      continue;
    } else if (ch == '\n') {
      ++line_;
      out.fields.push_back(std::move(field));
      return true;
    } else if (ch == '"' && field.empty() && !after_quote) {
      quoted = true;
    } else if (after_quote) {
      throw ParseError(source_, out.line, "unexpected character after closing quote");
    } else {
      field.push_back(ch);
    }
  }
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace ttpsig::csv
