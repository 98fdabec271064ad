#include "qs3/rational.hpp"

#include <cctype>

namespace qs3 {

std::string rational_to_string(const Rational& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) {
        s += "/";
        s += rat_den(r).str();
    }
    return s;
}

bool parse_rational(const std::string& text, Rational& out) {
    if (text.empty()) return false;
    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '-' || text[i] == '+') {
        neg = (text[i] == '-');
        ++i;
    }
    auto read_int = [&](BigInt& v) -> bool {
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return false;
        v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            v = v * 10 + (text[i] - '0');
            ++i;
        }
        return true;
    };
    BigInt num, den = 1;
    if (!read_int(num)) return false;
    if (i < text.size() && text[i] == '/') {
        ++i;
        if (!read_int(den) || den == 0) return false;
    }
    if (i != text.size()) return false;
    out = Rational(num, den);
    if (neg) out = -out;
    return true;
}

}  // namespace qs3
