#pragma once

#include "lpo_pi0/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lpo_pi0 {

namespace detail {

inline std::string_view strip(std::string_view s) noexcept
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

inline std::vector<std::string_view> csv_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    for (;;) {
        const auto comma = line.find(',');
        auto field = strip(line.substr(0, comma));
        if (field.size() >= 2 && field.front() == '"' && field.back() == '"') field = field.substr(1, field.size() - 2);
        out.push_back(field);
        if (comma == std::string_view::npos) return out;
        line.remove_prefix(comma + 1);
    }
}

inline std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

inline double parse_p_value(std::string_view text, std::size_t line)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ptr != text.data() + text.size() || (ec != std::errc{} && ec != std::errc::result_out_of_range)) {
        throw Error(ErrorCode::ParseError, at_line(line) + "cannot parse '" + std::string(text) + "' as a number");
    }
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, at_line(line) + "value is not finite");
    if (v < 0.0 || v > 1.0) {
        throw Error(ErrorCode::OutOfRange, at_line(line) + "p-value " + std::string(text) + " is outside [0,1]");
    }
    return v;
}

} // namespace detail

/// Reads p-values, one per line, skipping blank lines and '#' comments.
/// With `column`, the first data line is a CSV header and values come from the
/// named column. Errors cite 1-based line numbers.
inline std::vector<double> read_p_values(std::istream& in, std::optional<std::string> column = std::nullopt)
{
    std::vector<double> values;
    std::optional<std::size_t> field;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto text = detail::strip(raw);
        if (text.empty() || text.front() == '#') continue;
        if (!column) {
            values.push_back(detail::parse_p_value(text, line));
            continue;
        }
        const auto fields = detail::csv_fields(text);
        if (!field) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == *column) field = i;
            }
            if (!field) throw Error(ErrorCode::ParseError, detail::at_line(line) + "no column named '" + *column + "'");
            continue;
        }
        if (*field >= fields.size()) {
            throw Error(ErrorCode::ParseError, detail::at_line(line) + "missing column '" + *column + "'");
        }
        values.push_back(detail::parse_p_value(fields[*field], line));
    }
    if (in.bad()) throw Error(ErrorCode::IoError, "read failure");
    return values;
}

inline std::vector<double> read_p_values_file(const std::string& path, std::optional<std::string> column = std::nullopt)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    return read_p_values(in, std::move(column));
}

} // namespace lpo_pi0
