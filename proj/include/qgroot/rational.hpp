#pragma once

// Exact rational scalars and the library's error types.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qgroot {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when an operation's precondition does not hold (bad weight, bad datum, ...).
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DivisionByZero : public std::domain_error {
public:
    DivisionByZero() : std::domain_error("division by zero in cyclotomic field") {}
};

class SupportCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw DivisionByZero();
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline long to_long(const Integer& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in a machine word");
    return z.get_si();
}

inline long to_long(const Rational& q) {
    if (!is_integer(q)) throw PreconditionError("expected an integer, got " + q.get_str());
    return to_long(q.get_num());
}

/// Parses "7", "-3/4" or " 5 / 2 ".
inline Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s.push_back(c);
    if (s.empty()) throw PreconditionError("empty rational literal");
    Rational q;
    if (q.set_str(s, 10) != 0) throw PreconditionError("malformed rational literal '" + s + "'");
    if (q.get_den() == 0) throw DivisionByZero();
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Integer lcm_of_denominators(const std::vector<Rational>& v) {
    Integer l = 1;
    for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    return l;
}

inline long positive_mod(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

}  // namespace qgroot
