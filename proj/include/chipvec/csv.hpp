#pragma once

#include <string>
#include <vector>

namespace chipvec {

// RFC 4180 writer: mandatory header row, CRLF line endings, fields quoted
// only when they contain a comma, quote, or newline. '.' decimal point is
// guaranteed by formatting numbers with the C locale upstream.
std::string write_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

std::string csv_field(const std::string& raw);

// %.17g with C-locale semantics; round-trips doubles exactly.
std::string format_double(double v);

}  // namespace chipvec
