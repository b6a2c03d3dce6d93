#pragma once

#include "hermlab/hermitian.hpp"

#include <cstdint>
#include <vector>

namespace hermlab {

// Element of O_{F_v}/p^k in the module basis {1, delta} (inert/ramified) or
// as a coordinate pair (split). Fixed-width residues; p^k < 2^31 enforced.
struct Rel {
    std::uint32_t a = 0, b = 0;
    bool operator==(const Rel& o) const { return a == o.a && b == o.b; }
};

// Exact arithmetic in the finite ring O/p^k. size = p^{2k} in all models:
//   inert odd : Galois ring (Z/p^k)[d]/(d^2 - u)
//   inert 2   : Galois ring (Z/2^k)[w]/(w^2 + w + 1)
//   split     : (Z/p^k)^2 with swap involution
//   ramified  : (Z/p^k)[pi]/(pi^2 - c p)
struct TruncatedRing {
    LocalQuadExt ext;
    int k = 1;
    std::uint64_t pk = 1;      // p^k
    std::uint64_t size = 1;    // p^{2k}
    std::uint32_t param = 0;   // u, or c*p, reduced mod p^k (unused for split/omega)

    TruncatedRing(LocalQuadExt e, int level) : ext(std::move(e)), k(level) {
        if (k < 1) throw std::invalid_argument("truncation level must be >= 1");
        pk = 1;
        for (int i = 0; i < k; ++i) {
            pk *= static_cast<std::uint64_t>(ext.p);
            if (pk >= (1ull << 31)) throw BudgetExceeded("p^k exceeds 2^31");
        }
        size = pk * pk;
        if (ext.splitting == Splitting::inert && !ext.omega_model)
            param = static_cast<std::uint32_t>(ext.inert_u % static_cast<long long>(pk));
        if (ext.splitting == Splitting::ramified) {
            long long cp = ext.ramified_c * ext.p;
            cp %= static_cast<long long>(pk);
            if (cp < 0) cp += static_cast<long long>(pk);
            param = static_cast<std::uint32_t>(cp);
        }
    }

    std::uint32_t radd(std::uint32_t x, std::uint32_t y) const {
        std::uint64_t s = static_cast<std::uint64_t>(x) + y;
        return static_cast<std::uint32_t>(s >= pk ? s - pk : s);
    }
    std::uint32_t rsub(std::uint32_t x, std::uint32_t y) const {
        return x >= y ? x - y : static_cast<std::uint32_t>(x + pk - y);
    }
    std::uint32_t rmul(std::uint32_t x, std::uint32_t y) const {
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(x) * y) % pk);
    }

    Rel add(const Rel& x, const Rel& y) const { return {radd(x.a, y.a), radd(x.b, y.b)}; }
    Rel sub(const Rel& x, const Rel& y) const { return {rsub(x.a, y.a), rsub(x.b, y.b)}; }
    Rel neg(const Rel& x) const {
        return {x.a ? static_cast<std::uint32_t>(pk - x.a) : 0,
                x.b ? static_cast<std::uint32_t>(pk - x.b) : 0};
    }

    Rel mul(const Rel& x, const Rel& y) const {
        switch (ext.splitting) {
            case Splitting::split:
                return {rmul(x.a, y.a), rmul(x.b, y.b)};
            case Splitting::inert:
                if (ext.omega_model) {
                    std::uint32_t aa = rmul(x.a, y.a), bb = rmul(x.b, y.b);
                    std::uint32_t cross = radd(rmul(x.a, y.b), rmul(x.b, y.a));
                    return {rsub(aa, bb), rsub(cross, bb)};
                }
                return {radd(rmul(x.a, y.a), rmul(param, rmul(x.b, y.b))),
                        radd(rmul(x.a, y.b), rmul(x.b, y.a))};
            default:  // ramified
                return {radd(rmul(x.a, y.a), rmul(param, rmul(x.b, y.b))),
                        radd(rmul(x.a, y.b), rmul(x.b, y.a))};
        }
    }

    Rel conj(const Rel& x) const {
        switch (ext.splitting) {
            case Splitting::split: return {x.b, x.a};
            case Splitting::inert:
                if (ext.omega_model) return {rsub(x.a, x.b), x.b ? static_cast<std::uint32_t>(pk - x.b) : 0};
                [[fallthrough]];
            default: return {x.a, x.b ? static_cast<std::uint32_t>(pk - x.b) : 0};
        }
    }

    std::uint32_t norm(const Rel& x) const {
        Rel n = mul(x, conj(x));
        return n.a;  // conj-fixed: b-part is 0 (nonsplit) or equals a (split)
    }
    std::uint32_t trace(const Rel& x) const {
        Rel t = add(x, conj(x));
        return t.a;
    }

    bool is_unit(const Rel& x) const {
        return norm(x) % static_cast<std::uint32_t>(ext.p) != 0;
    }

    Rel from_index(std::uint64_t i) const {
        return {static_cast<std::uint32_t>(i / pk), static_cast<std::uint32_t>(i % pk)};
    }
    std::uint64_t to_index(const Rel& x) const { return static_cast<std::uint64_t>(x.a) * pk + x.b; }

    Rel reduce(const FieldElement& x) const {
        return {mod_pk(x.a, pk), mod_pk(x.b, pk)};
    }

    // image in TruncatedRing(k') for k' <= k
    Rel push_down(const Rel& x, const TruncatedRing& lower) const {
        return {static_cast<std::uint32_t>(x.a % lower.pk), static_cast<std::uint32_t>(x.b % lower.pk)};
    }
};

// Simple exhaustive range over all p^{2k} elements.
class RingRange {
public:
    explicit RingRange(const TruncatedRing& r) : ring_(&r) {}
    struct iterator {
        const TruncatedRing* ring;
        std::uint64_t i;
        Rel operator*() const { return ring->from_index(i); }
        iterator& operator++() { ++i; return *this; }
        bool operator!=(const iterator& o) const { return i != o.i; }
    };
    iterator begin() const { return {ring_, 0}; }
    iterator end() const { return {ring_, ring_->size}; }

private:
    const TruncatedRing* ring_;
};

inline RingRange enumerate(const TruncatedRing& r) { return RingRange(r); }

// Residue test for tx^bar S x - T in p^k Herm^*, applied to the d-scaled
// residue matrix R^ = d*(tx^bar S x - T) computed over the truncated ring
// (d = pi for ramified, 1 otherwise).
//   off-diagonal: R_ij in p^k d^{-1} O  <=>  R^_ij = 0 in O/p^k
//   diagonal:     R_ii in p^k O_{F^+}   <=>  R^_ii = 0 in O/p^k
// (ramified diagonal: R^_ii = pi*R_ii has coordinates (0, R_ii), so both
// coordinates vanishing mod p^k is exactly R_ii = 0 mod p^k).
inline bool herm_residue_test(const std::vector<Rel>& scaled_residue, int m,
                              const TruncatedRing&) {
    for (int i = 0; i < m * m; ++i) {
        const Rel& r = scaled_residue[static_cast<size_t>(i)];
        if (r.a != 0 || r.b != 0) return false;
    }
    return true;
}

}  // namespace hermlab
