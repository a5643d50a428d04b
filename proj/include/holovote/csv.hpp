#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace holovote {

/// Formats a real with 15 significant digits (the CSV interchange precision).
std::string format_real(double value);

/// Splits one CSV line on commas; no quoting, fields may be empty.
/// With max_fields > 0, the last field keeps any remaining commas.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t max_fields = 0);

/// Parse helpers that throw std::invalid_argument with `context` on failure.
double parse_real(const std::string& field, const std::string& context);
std::uint32_t parse_u32(const std::string& field, const std::string& context);
std::uint64_t parse_u64(const std::string& field, const std::string& context);

} // namespace holovote
