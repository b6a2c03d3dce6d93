#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hermlab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ---- error types ---------------------------------------------------------

struct RamifiedTwo : std::domain_error {
    RamifiedTwo() : std::domain_error("p=2 ramified is excluded") {}
};
struct RamifiedUnsupported : std::domain_error {
    RamifiedUnsupported() : std::domain_error("operation undefined over a ramified extension") {}
};
struct ContextMismatch : std::invalid_argument {
    ContextMismatch() : std::invalid_argument("local contexts differ") {}
};
struct NotIntegral : std::invalid_argument {
    explicit NotIntegral(const std::string& w) : std::invalid_argument(w) {}
};
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& w) : std::runtime_error(w) {}
};
struct NotStabilized : std::runtime_error {
    Rational previous, last;
    NotStabilized(const Rational& a, const Rational& b, const std::string& w)
        : std::runtime_error(w), previous(a), last(b) {}
};
struct DegreeCapExceeded : std::runtime_error {
    explicit DegreeCapExceeded(const std::string& w) : std::runtime_error(w) {}
};
struct WeilIndexUncovered : std::domain_error {
    explicit WeilIndexUncovered(const std::string& w) : std::domain_error(w) {}
};
struct DenominatorVanishes : std::domain_error {
    DenominatorVanishes() : std::domain_error("Whittaker denominator vanishes at the requested point") {}
};
struct PoleEncountered : std::domain_error {
    explicit PoleEncountered(const std::string& w) : std::domain_error(w) {}
};
struct PoleAtOne : PoleEncountered {
    PoleAtOne() : PoleEncountered("zeta pole at s=1") {}
};

// ---- small number-theory helpers -----------------------------------------

inline Integer pow_int(Integer base, unsigned long e) {
    Integer r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// p-adic valuation of a nonzero integer
inline long val_p(const Integer& n, long long p) {
    if (n == 0) throw std::domain_error("valuation of zero");
    Integer m = abs(n);
    long v = 0;
    while (m % p == 0) { m /= p; ++v; }
    return v;
}

inline long val_p(const Rational& r, long long p) {
    return val_p(numerator(r), p) - val_p(denominator(r), p);
}

inline bool p_integral(const Rational& r, long long p) {
    return r == 0 || denominator(r) % p != 0;
}

// x mod p^k for a p-integral rational (denominator inverted mod p^k)
inline std::uint32_t mod_pk(const Rational& r, std::uint64_t pk) {
    if (r == 0) return 0;
    Integer num = numerator(r) % Integer(pk);
    if (num < 0) num += pk;
    Integer den = denominator(r) % Integer(pk);
    if (den < 0) den += pk;
    // modular inverse of den via extended gcd (den must be a unit mod p^k)
    Integer t = 0, newt = 1, rr = Integer(pk), newr = den;
    while (newr != 0) {
        Integer q = rr / newr;
        Integer tmp = t - q * newt; t = newt; newt = tmp;
        tmp = rr - q * newr; rr = newr; newr = tmp;
    }
    if (rr != 1) throw NotIntegral("rational is not p-integral");
    if (t < 0) t += pk;
    Integer out = (num * t) % Integer(pk);
    return static_cast<std::uint32_t>(out);
}

inline std::string to_string(const Rational& r) {
    return numerator(r).str() + (denominator(r) == 1 ? "" : "/" + denominator(r).str());
}

inline Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(s));
    return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
}

// exact q^e for rational e with denominator 1 or 2; second slot is the
// leftover half power (0 or 1), value = first * sqrt(q)^second
inline std::pair<Rational, int> q_half_power(long long q, const Rational& e) {
    Integer num = numerator(e), den = denominator(e);
    if (den != 1 && den != 2) throw std::domain_error("exponent not a half-integer");
    Integer twice = (den == 1) ? Integer(2 * num) : num;
    Integer whole;
    if (twice >= 0) whole = twice / 2;
    else whole = -((-twice + 1) / 2);
    int half = static_cast<int>(twice - 2 * whole);  // 0 or 1
    Rational mant = whole >= 0 ? Rational(pow_int(q, static_cast<unsigned long>(whole)))
                               : Rational(1, pow_int(q, static_cast<unsigned long>(-whole)));
    return {mant, half};
}

}  // namespace hermlab
