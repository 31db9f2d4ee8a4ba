#include "locorth/rational.hpp"

#include "locorth/errors.hpp"

#include <cmath>

namespace locorth {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

std::string_view strip_sign(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    return s;
}

} // namespace

Rational parse_rational(std::string_view text) {
    if (text.empty()) throw InputError("empty rational");
    bool negative = text.front() == '-';
    std::string_view body = strip_sign(text);

    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) throw InputError("malformed rational '" + std::string(text) + "'");
        mpz_class n(std::string(num), 10);
        mpz_class d(std::string(den), 10);
        if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
        Rational r(n, d);
        r.canonicalize();
        return negative ? Rational(-r) : r;
    }
    if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) {
            throw InputError("malformed decimal '" + std::string(text) + "'");
        }
        mpz_class n(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        mpz_class d = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) d *= 10;
        Rational r(n, d);
        r.canonicalize();
        return negative ? Rational(-r) : r;
    }
    if (!all_digits(body)) throw InputError("malformed rational '" + std::string(text) + "'");
    Rational r(mpz_class(std::string(body), 10));
    return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational from_double(double value) {
    if (!std::isfinite(value)) throw InputError("non-finite value cannot be made rational");
    Rational r;
    mpq_set_d(r.get_mpq_t(), value);
    return r;
}

} // namespace locorth
