#pragma once

// Minimal JSON emitter: reals always carry 17 significant digits, non-finite
// reals become null, and keys keep insertion order.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace lpo_pi0 {

inline std::string json_number(double v)
{
    if (!std::isfinite(v)) return "null";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string json_string(std::string_view text)
{
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(c)));
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
    return out;
}

inline std::string json_array(std::span<const double> values)
{
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += json_number(values[i]);
    }
    return out + "]";
}

template <class Integer>
std::string json_int_array(std::span<const Integer> values)
{
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out + "]";
}

class JsonObject {
public:
    JsonObject& number(std::string_view key, double v) { return raw(key, json_number(v)); }
    JsonObject& number(std::string_view key, std::optional<double> v) { return raw(key, v ? json_number(*v) : "null"); }
    JsonObject& integer(std::string_view key, std::int64_t v) { return raw(key, std::to_string(v)); }
    JsonObject& boolean(std::string_view key, bool v) { return raw(key, v ? "true" : "false"); }
    JsonObject& string(std::string_view key, std::string_view v) { return raw(key, json_string(v)); }

    JsonObject& raw(std::string_view key, std::string_view json)
    {
        if (!body_.empty()) body_ += ',';
        body_ += json_string(key);
        body_ += ':';
        body_ += json;
        return *this;
    }

    std::string str() const { return "{" + body_ + "}"; }

private:
    std::string body_;
};

} // namespace lpo_pi0
