#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dqe::csv {

// RFC-4180 reader: quoted fields, doubled-quote escapes, embedded
// newlines, CRLF or LF line endings. Returns one record per row,
// including the header. Throws ParseError on unbalanced quotes.
std::vector<std::vector<std::string>> parse(std::istream& in);

std::vector<std::vector<std::string>> parse_string(const std::string& text);

// Writes records with minimal quoting (only when a field contains a
// comma, quote or newline). Lines end with '\n'.
void write(std::ostream& out, const std::vector<std::vector<std::string>>& records);

}  // namespace dqe::csv
