#pragma once

#include <cctype>
#include <string>
#include <utility>

namespace feynmat {

/// Splits "a11" into ("a", 11); labels without a trailing number give -1.
inline std::pair<std::string, long long> split_label(const std::string& s) {
    std::size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    if (i == s.size() || s.size() - i > 15) return {s, -1};
    return {s.substr(0, i), std::stoll(s.substr(i))};
}

/// Natural order: "a2" < "a10", "9" < "10"; plain strings compare as usual.
inline bool natural_less(const std::string& a, const std::string& b) {
    const auto [pa, na] = split_label(a);
    const auto [pb, nb] = split_label(b);
    if (pa != pb) return pa < pb;
    if (na != nb) return na < nb;
    return a < b;
}

struct NaturalLess {
    bool operator()(const std::string& a, const std::string& b) const { return natural_less(a, b); }
};

}  // namespace feynmat
