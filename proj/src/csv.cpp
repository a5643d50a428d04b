#include "holovote/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace holovote {

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", value);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t max_fields) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        if (max_fields > 0 && fields.size() + 1 == max_fields) {
            fields.push_back(line.substr(start));
            break;
        }
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_real(const std::string& field, const std::string& context) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE)
        throw std::invalid_argument(context + ": not a real number: '" + field + "'");
    return value;
}

std::uint64_t parse_u64(const std::string& field, const std::string& context) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(field.c_str(), &end, 10);
    if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE ||
        field.front() == '-')
        throw std::invalid_argument(context + ": not a non-negative integer: '" + field + "'");
    return value;
}

std::uint32_t parse_u32(const std::string& field, const std::string& context) {
    const std::uint64_t value = parse_u64(field, context);
    if (value > 0xffffffffull)
        throw std::invalid_argument(context + ": integer out of range: '" + field + "'");
    return static_cast<std::uint32_t>(value);
}

} // namespace holovote
