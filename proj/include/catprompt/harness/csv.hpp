#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace catprompt::harness::csv {

/// RFC 4180 records: comma separated, double quotes around fields that hold
/// commas, quotes or line breaks, quotes doubled inside. A trailing CR is
/// dropped. Throws Error(Errc::parse) on an unterminated quote.
std::vector<std::vector<std::string>> parse(std::string_view text);

std::string quote(std::string_view field);
std::string row(const std::vector<std::string>& fields);

}  // namespace catprompt::harness::csv
