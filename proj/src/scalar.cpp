#include "feynmat/scalar.hpp"

#include <limits>

namespace feynmat {

std::string to_string(Field f) {
    switch (f) {
        case Field::Q:
            return "Q";
        case Field::F2:
            return "F2";
        case Field::F3:
            return "F3";
    }
    return "?";
}

Field parse_field(const std::string& s) {
    if (s == "Q" || s == "q" || s == "QQ") return Field::Q;
    if (s == "F2" || s == "f2" || s == "GF2") return Field::F2;
    if (s == "F3" || s == "f3" || s == "GF3") return Field::F3;
    throw DomainError("unknown field '" + s + "' (expected Q, F2 or F3)");
}

std::string to_string(const Rational& q) {
    const Integer num = boost::multiprecision::numerator(q);
    const Integer den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& s) {
    if (s.empty()) throw SchemaError("empty rational literal");
    auto parse_int = [&](const std::string& t) {
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) throw SchemaError("malformed rational literal '" + s + "'");
        for (std::size_t k = i; k < t.size(); ++k)
            if (t[k] < '0' || t[k] > '9') throw SchemaError("malformed rational literal '" + s + "'");
        return Integer(t[0] == '+' ? t.substr(1) : t);
    };
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_int(s));
    const Integer den = parse_int(s.substr(slash + 1));
    if (den == 0) throw SchemaError("zero denominator in '" + s + "'");
    return Rational(parse_int(s.substr(0, slash)), den);
}

bool to_int64(const Rational& q, long long& out) {
    if (boost::multiprecision::denominator(q) != 1) return false;
    const Integer n = boost::multiprecision::numerator(q);
    if (n > std::numeric_limits<long long>::max() || n < std::numeric_limits<long long>::min())
        return false;
    out = static_cast<long long>(n);
    return true;
}

}  // namespace feynmat
