#include "bimet/rational.hpp"

#include <charconv>
#include <limits>

namespace bimet {

namespace {
__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}
bool fits(__int128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() + 1 && v <= std::numeric_limits<std::int64_t>::max();
}
} // namespace

Rational Rational::make(__int128 n, __int128 d) {
    if (d == 0) throw Error("zero denominator");
    if (d < 0) n = -n, d = -d;
    __int128 g = gcd128(n, d);
    if (g > 1) n /= g, d /= g;
    if (!fits(n) || !fits(d)) throw OverflowError("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
}

void Rational::assign(std::int64_t n, std::int64_t d) { *this = make(n, d); }

std::string to_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {
std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw Error("malformed rational '" + std::string(whole) + "'");
    return v;
}
} // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text, text));
    std::int64_t p = parse_int(text.substr(0, slash), text);
    std::int64_t q = parse_int(text.substr(slash + 1), text);
    if (q == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    return Rational(p, q);
}

std::int64_t floor(const Rational& r) {
    std::int64_t q = r.numerator() / r.denominator();
    if (Rational(q) > r) --q;
    return q;
}

std::int64_t ceil(const Rational& r) {
    std::int64_t q = r.numerator() / r.denominator();
    if (Rational(q) < r) ++q;
    return q;
}

} // namespace bimet
