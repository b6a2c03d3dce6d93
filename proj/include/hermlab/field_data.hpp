#pragma once

#include "hermlab/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace hermlab {

// Kronecker symbol (a/n), n >= 0 allowed, standard conventions.
inline int kronecker(Integer a, Integer n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    int v = 0;
    while (n % 2 == 0) { n /= 2; ++v; }
    if (v > 0) {
        // (a/2): 0 if a even, 1 if a = +-1 mod 8, -1 if a = +-3 mod 8
        if (a % 2 == 0) return 0;
        Integer r = a % 8; if (r < 0) r += 8;
        if (v % 2 == 1 && (r == 3 || r == 5)) sign = -sign;
    }
    a %= n; if (a < 0) a += n;
    while (a != 0) {
        int v2 = 0;
        while (a % 2 == 0) { a /= 2; ++v2; }
        if (v2 % 2 == 1) {
            Integer r = n % 8;
            if (r == 3 || r == 5) sign = -sign;
        }
        // quadratic reciprocity for odd positive a, n
        if (a % 4 == 3 && n % 4 == 3) sign = -sign;
        Integer t = n % a;
        n = a; a = t;
    }
    return (n == 1) ? sign : 0;
}

// Fundamental discriminant of an imaginary quadratic field. Validated at
// construction; downstream code assumes fundamentality.
struct Discriminant {
    long long delta;

    explicit Discriminant(long long d) : delta(d) {
        if (d >= 0) throw std::invalid_argument("discriminant must be negative");
        long long m = -d;
        auto squarefree = [](long long n) {
            for (long long f = 2; f * f <= n; ++f)
                while (n % f == 0) {
                    n /= f;
                    if (n % f == 0) return false;
                }
            return true;
        };
        long long mod4 = ((d % 4) + 4) % 4;
        if (mod4 == 1) {
            if (!squarefree(m)) throw std::invalid_argument("discriminant not fundamental");
        } else if (mod4 == 0) {
            long long m4 = m / 4;
            long long r = m4 % 4;
            // d/4 must be squarefree and = 1 or 2 mod 4 (i.e. d = 8,12 mod 16)
            if (!squarefree(m4) || (r != 1 && r != 2))
                throw std::invalid_argument("discriminant not fundamental");
        } else {
            throw std::invalid_argument("discriminant not fundamental");
        }
    }
};

enum class Splitting { inert, split, ramified };

inline const char* to_string(Splitting s) {
    switch (s) {
        case Splitting::inert: return "inert";
        case Splitting::split: return "split";
        default: return "ramified";
    }
}

// One prime's splitting data. The local model parameters pin down exact
// arithmetic in O_{F_v}:
//   inert, p odd : O = Z_p[d], d^2 = u with u the least positive non-residue
//   inert, p = 2 : O = Z_2[w], w^2 + w + 1 = 0 (Galois ring model)
//   split        : O = Z_p x Z_p, conjugation swaps coordinates
//   ramified     : O = Z_p[pi], pi^2 = c*p, trace-zero uniformizer pi
struct LocalQuadExt {
    long long p = 0;
    Splitting splitting = Splitting::inert;
    long long q = 0;               // residue cardinality of F^+_v (= p)
    int different_exponent = 0;    // 0 unramified/split, 1 ramified odd p
    long long inert_u = 0;         // delta^2 = u (inert, p odd)
    bool omega_model = false;      // inert p=2
    long long ramified_c = 0;      // pi^2 = c*p (ramified)

    bool operator==(const LocalQuadExt& o) const {
        return p == o.p && splitting == o.splitting && inert_u == o.inert_u &&
               omega_model == o.omega_model && ramified_c == o.ramified_c;
    }
};

inline bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long f = 2; f * f <= n; ++f)
        if (n % f == 0) return false;
    return true;
}

inline long long least_nonresidue(long long p) {
    for (long long u = 2; u < p; ++u)
        if (kronecker(u, p) == -1) return u;
    throw std::logic_error("no non-residue found");
}

inline LocalQuadExt make_local(long long p, Splitting s, long long ramified_c = -1) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    LocalQuadExt e;
    e.p = p;
    e.q = p;
    e.splitting = s;
    switch (s) {
        case Splitting::inert:
            if (p == 2) e.omega_model = true;
            else e.inert_u = least_nonresidue(p);
            break;
        case Splitting::split:
            break;
        case Splitting::ramified:
            if (p == 2) throw RamifiedTwo();
            e.different_exponent = 1;
            e.ramified_c = ((ramified_c % p) + p) % p == 0
                               ? throw std::invalid_argument("c must be a unit mod p")
                               : ramified_c;
            break;
    }
    return e;
}

inline LocalQuadExt classify_prime(const Discriminant& d, long long p) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (p == 2 && d.delta % 2 == 0) throw RamifiedTwo();
    int k = kronecker(d.delta, p);
    if (k == 1) return make_local(p, Splitting::split);
    if (k == -1) return make_local(p, Splitting::inert);
    // ramified odd p: pi^2 = (delta/p) * p = delta exactly
    return make_local(p, Splitting::ramified, d.delta / p);
}

// h_F by exhaustive reduced-form enumeration: forms (a,b,c) with
// b^2 - 4ac = delta, |b| <= a <= c, b >= 0 when |b| = a or a = c.
inline long long class_number(const Discriminant& d) {
    long long D = -d.delta;
    long long h = 0;
    for (long long a = 1; 3 * a * a <= D + 3; ++a) {
        for (long long b = -a; b <= a; ++b) {
            long long num = b * b + D;
            if (num % (4 * a) != 0) continue;
            long long c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && (b == -a || a == c)) continue;
            h += 1;
        }
    }
    return h;
}

inline long long unit_count(const Discriminant& d) {
    if (d.delta == -3) return 6;
    if (d.delta == -4) return 4;
    return 2;
}

inline long long ramified_prime_count(const Discriminant& d) {
    long long m = -d.delta;
    long long cnt = 0;
    for (long long f = 2; f * f <= m; ++f)
        if (m % f == 0) {
            ++cnt;
            while (m % f == 0) m /= f;
        }
    if (m > 1) ++cnt;
    return cnt;
}

inline std::vector<long long> ramified_primes(const Discriminant& d) {
    long long m = -d.delta;
    std::vector<long long> out;
    for (long long f = 2; f * f <= m; ++f)
        if (m % f == 0) {
            out.push_back(f);
            while (m % f == 0) m /= f;
        }
    if (m > 1) out.push_back(m);
    return out;
}

}  // namespace hermlab
