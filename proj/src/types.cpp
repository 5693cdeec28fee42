#include "gammadiv/types.hpp"

#include <charconv>

namespace gammadiv {

namespace {

i64 parse_i64(std::string_view text, const char* what) {
    i64 value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw std::invalid_argument(std::string("rational: bad ") + what + " in '" +
                                    std::string(text) + "'");
    }
    return value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        return Rational(parse_i64(text, "integer"), 1);
    }
    const i64 num = parse_i64(std::string_view(text).substr(0, slash), "numerator");
    const i64 den = parse_i64(std::string_view(text).substr(slash + 1), "denominator");
    return Rational(num, den);  // ctor rejects den == 0, reduces, fixes sign
}

std::string to_string(const Rational& r) {
    if (r.den == 1) return std::to_string(r.num);
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

}  // namespace gammadiv
