#pragma once

#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

#include "geonas/errors.hpp"

namespace geonas {

/// Shortest round-trip decimal rendering of a double (deterministic bytes).
inline std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw IoError("number formatting failed");
    return std::string(buf, p);
}

/// format_double, right-aligned in a field of at least `width` characters.
inline std::string format_double_padded(double x, int width) {
    std::string s = format_double(x);
    if (static_cast<int>(s.size()) < width) s.insert(0, width - s.size(), ' ');
    return s;
}

/// Strict double parse of a whole token.
inline double parse_double(std::string_view tok) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last)
        throw IoError("malformed number: '" + std::string(tok) + "'");
    return v;
}

}  // namespace geonas
