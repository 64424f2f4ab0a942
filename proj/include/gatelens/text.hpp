#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>

namespace gatelens {

inline auto ascii_lower(std::string_view s) -> std::string {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

/// Matches `[A-Za-z_][A-Za-z0-9_]*`.
inline bool is_identifier_shaped(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    auto head = static_cast<unsigned char>(s.front());
    if (!std::isalpha(head) && head != '_') {
        return false;
    }
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u == '_';
    });
}

/// Reserved words of the RA grammar. Case-sensitive: `Select` is an identifier.
bool is_reserved_word(std::string_view s);

/// Identifier-shaped and not reserved.
inline bool is_valid_identifier(std::string_view s) { return is_identifier_shaped(s) && !is_reserved_word(s); }

} // namespace gatelens
