#pragma once

#include "hermlab/field_data.hpp"

#include <vector>

namespace hermlab {

// i^exponent, exponent mod 4
struct FourthRoot {
    int e = 0;
    FourthRoot() = default;
    explicit FourthRoot(int k) : e(((k % 4) + 4) % 4) {}
    FourthRoot operator*(const FourthRoot& o) const { return FourthRoot(e + o.e); }
    FourthRoot conj() const { return FourthRoot(-e); }
    FourthRoot pow(int k) const { return FourthRoot(e * (((k % 4) + 4) % 4)); }
    bool operator==(const FourthRoot& o) const { return e == o.e; }
    bool is_real() const { return e % 2 == 0; }
    int real_sign() const {
        if (!is_real()) throw std::domain_error("fourth root is imaginary");
        return e == 0 ? 1 : -1;
    }
};

// A Hermitian/quadratic space assembled from lemma-covered blocks.
struct WeilBlock {
    enum Kind {
        QuadHyperbolic,          // bilinear [[0,1_d],[1_d,0]]
        QuadSelfDualOddRes,      // self-dual lattice, odd residue char, psi unramified
        HermHyperbolic,          // Hermitian [[0,1_d],[1_d,0]]
        HermSplit,               // F_v = F^+_v x F^+_v
        HermSelfDualEven,        // even-rank self-dual, unramified or odd p
        HermSelfDualUnramified,  // unramified ext, self-dual, psi unramified
        ArchComplexLine,         // C with psi(x) = e^{2 pi i x}
        RamifiedLinePair         // two ramified lines; contributes gamma^2 = eta(-1)
    } kind;
    long long p = 0;                          // non-Archimedean blocks
    Splitting splitting = Splitting::inert;   // Hermitian blocks
    int rank = 1;
};

inline WeilBlock quad_hyperbolic_block(int d) { return {WeilBlock::QuadHyperbolic, 0, Splitting::split, 2 * d}; }
inline WeilBlock quad_self_dual_block(long long p, int rank) {
    return {WeilBlock::QuadSelfDualOddRes, p, Splitting::split, rank};
}
inline WeilBlock herm_hyperbolic_block(long long p, Splitting s, int d) {
    return {WeilBlock::HermHyperbolic, p, s, 2 * d};
}
inline WeilBlock herm_split_block(long long p, int rank) { return {WeilBlock::HermSplit, p, Splitting::split, rank}; }
inline WeilBlock herm_self_dual_even_block(long long p, Splitting s, int rank) {
    return {WeilBlock::HermSelfDualEven, p, s, rank};
}
inline WeilBlock herm_self_dual_unramified_block(long long p, Splitting s, int rank) {
    return {WeilBlock::HermSelfDualUnramified, p, s, rank};
}
inline WeilBlock arch_complex_line() { return {WeilBlock::ArchComplexLine, 0, Splitting::split, 1}; }
inline WeilBlock ramified_line_pair(long long p) { return {WeilBlock::RamifiedLinePair, p, Splitting::ramified, 2}; }

// gamma_psi of one covered block
inline FourthRoot block_weil_index(const WeilBlock& b) {
    switch (b.kind) {
        case WeilBlock::QuadHyperbolic:
        case WeilBlock::HermHyperbolic:
        case WeilBlock::HermSplit:
            return FourthRoot(0);
        case WeilBlock::QuadSelfDualOddRes:
            if (b.p == 2)
                throw WeilIndexUncovered("quadratic self-dual lattice over Q_2 (Rao A.12: index can be nontrivial)");
            return FourthRoot(0);
        case WeilBlock::HermSelfDualEven:
            if (b.rank % 2 != 0) throw WeilIndexUncovered("odd-rank self-dual block needs the unramified lemma");
            if (b.splitting == Splitting::ramified && b.p == 2)
                throw WeilIndexUncovered("ramified dyadic self-dual block");
            return FourthRoot(0);
        case WeilBlock::HermSelfDualUnramified:
            if (b.splitting == Splitting::ramified)
                throw WeilIndexUncovered("ramified extension in the unramified self-dual case");
            return FourthRoot(0);
        case WeilBlock::ArchComplexLine:
            return FourthRoot(1);  // gamma_psi(C) = i
        case WeilBlock::RamifiedLinePair: {
            // gamma^2 = eta(-1); for ramified odd p, eta(-1) = (-1/p)
            if (b.p == 2) throw WeilIndexUncovered("ramified dyadic line pair");
            return kronecker(-1, b.p) == 1 ? FourthRoot(0) : FourthRoot(2);
        }
    }
    throw std::logic_error("unknown block kind");
}

inline FourthRoot weil_index(const std::vector<WeilBlock>& space) {
    FourthRoot g(0);
    for (const auto& b : space) g = g * block_weil_index(b);
    return g;
}

// epsilon_v(s, eta_v, psi_v) = |pi_0^{c(psi)} Delta|^{s-1/2} gamma_psi(F_v),
// kept symbolic: value = p^{const_part + s_coeff * s} * (gamma slot).
struct EpsilonFactor {
    long long p = 0;
    Rational s_coeff;     // exponent of p, coefficient of s
    Rational const_part;  // exponent of p, constant term
    bool gamma_known = false;
    FourthRoot gamma;     // valid when gamma_known
    bool conjugated = false;

    bool is_one() const { return s_coeff == 0 && const_part == 0 && gamma_known && gamma == FourthRoot(0); }
    EpsilonFactor conj_character() const {
        EpsilonFactor e = *this;
        e.conjugated = !e.conjugated;
        if (e.gamma_known) e.gamma = e.gamma.conj();
        return e;
    }
};

inline EpsilonFactor epsilon_weil_relation(const LocalQuadExt& ext, int c_psi) {
    EpsilonFactor e;
    e.p = ext.p;
    long long d = c_psi + ext.different_exponent;
    // |pi^{c} Delta|^{s-1/2} = p^{-d s + d/2}
    e.s_coeff = Rational(-d);
    e.const_part = Rational(d, 2);
    if (ext.splitting == Splitting::split) {
        e.gamma_known = true;  // split line is hyperbolic as a quadratic space
        e.gamma = FourthRoot(0);
    } else if (ext.splitting == Splitting::inert && c_psi == 0) {
        e.gamma_known = true;  // eta and psi unramified: epsilon = 1
        e.gamma = FourthRoot(0);
    }
    // ramified (and inert with ramified psi): the line's individual index is
    // not tabulated by the covered lemmas; the slot stays symbolic
    return e;
}

}  // namespace hermlab
