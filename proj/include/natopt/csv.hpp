#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace natopt::csv {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string number(double value);

/// Quotes a field if it contains a comma, quote or newline.
std::string field(std::string_view text);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

} // namespace natopt::csv
