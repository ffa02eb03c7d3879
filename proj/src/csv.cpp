#include "dqe/csv.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "dqe/error.hpp"

namespace dqe::csv {

std::vector<std::vector<std::string>> parse(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool record_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    record_started = false;
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_started) {
          in_quotes = true;
          field_started = true;
        } else {
          field += '"';  // stray quote inside unquoted field, keep literally
        }
        record_started = true;
        break;
      case ',':
        end_field();
        record_started = true;
        break;
      case '\r':
        if (in.peek() == '\n') in.get(c);
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field += c;
        field_started = true;
        record_started = true;
        break;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted CSV field");
  if (record_started || field_started || !record.empty()) end_record();
  return records;
}

std::vector<std::vector<std::string>> parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

void write(std::ostream& out, const std::vector<std::vector<std::string>>& records) {
  for (const auto& record : records) {
    for (std::size_t i = 0; i < record.size(); ++i) {
      if (i > 0) out << ',';
      const std::string& f = record[i];
      bool needs_quotes = f.find_first_of(",\"\r\n") != std::string::npos;
      if (!needs_quotes) {
        out << f;
        continue;
      }
      out << '"';
      for (char c : f) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    }
    out << '\n';
  }
}

}  // namespace dqe::csv
