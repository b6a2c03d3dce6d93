#pragma once

#include "hermlab/density_engine.hpp"

namespace hermlab {

// ---- closed-form orders -----------------------------------------------------

// #Sp_{2d}(F_q) = q^{d^2} prod_{i=1}^d (q^{2i} - 1)
inline Integer sp_order(int d, long long q) {
    Integer o = pow_int(q, static_cast<unsigned long>(d) * d);
    for (int i = 1; i <= d; ++i) o *= pow_int(q, 2 * static_cast<unsigned long>(i)) - 1;
    return o;
}

// #O(split 2d)(F_q) = 2 q^{d(d-1)} (q^d + 1)^{-1} prod_{i=1}^d (q^{2i} - 1)
inline Integer o_split_order(int d, long long q) {
    Integer o = 2 * pow_int(q, static_cast<unsigned long>(d) * (d - 1));
    for (int i = 1; i <= d; ++i) o *= pow_int(q, 2 * static_cast<unsigned long>(i)) - 1;
    Integer div = pow_int(q, static_cast<unsigned long>(d)) + 1;
    if (o % div != 0) throw std::logic_error("order formula not integral");
    return o / div;
}

// #P_W(F_q) = q^{d(d+1)/2} prod_{i=1}^d (q^d - q^{i-1})   (Siegel parabolic in Sp)
inline Integer parabolic_sp_order(int d, long long q) {
    Integer o = pow_int(q, static_cast<unsigned long>(d) * (d + 1) / 2);
    for (int i = 1; i <= d; ++i)
        o *= pow_int(q, static_cast<unsigned long>(d)) - pow_int(q, static_cast<unsigned long>(i - 1));
    return o;
}

// #P_{W'}(F_q) = q^{d(d-1)/2} prod_{i=1}^d (q^d - q^{i-1})
inline Integer parabolic_o_order(int d, long long q) {
    Integer o = pow_int(q, static_cast<unsigned long>(d) * (d - 1) / 2);
    for (int i = 1; i <= d; ++i)
        o *= pow_int(q, static_cast<unsigned long>(d)) - pow_int(q, static_cast<unsigned long>(i - 1));
    return o;
}

// [Sp : P_W] / [O : P_{W'}]; equals (1 + q^d)/2
inline Rational stabilizer_volume_ratio(int d, long long q) {
    Rational sp_index(sp_order(d, q), parabolic_sp_order(d, q));
    Rational o_index(o_split_order(d, q), parabolic_o_order(d, q));
    return sp_index / o_index;
}

// ---- enumeration oracles ----------------------------------------------------

enum class GroupKind { sp, o_split };

// Exhaustive count of 2d x 2d matrices over F_q preserving the form.
inline Integer enumerate_group_order(GroupKind kind, int d, long long q,
                                     const EngineOptions& opts = {}) {
    const int n = 2 * d;
    std::uint64_t total = 1;
    for (int i = 0; i < n * n; ++i) {
        if (total > opts.budget / static_cast<std::uint64_t>(q) + 1)
            throw BudgetExceeded("group enumeration");
        total *= static_cast<std::uint64_t>(q);
    }
    if (total > opts.budget) throw BudgetExceeded("group enumeration");
    // form matrix: J = [[0, I],[-I, 0]] (sp) or B = [[0, I],[I, 0]] (o_split)
    std::vector<long long> form(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < d; ++i) {
        form[static_cast<size_t>(i) * n + d + i] = 1;
        form[static_cast<size_t>(d + i) * n + i] = kind == GroupKind::sp ? q - 1 : 1;
    }
    Integer count = 0;
    std::vector<long long> g(static_cast<size_t>(n) * n);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t r = idx;
        for (int i = 0; i < n * n; ++i) {
            g[static_cast<size_t>(i)] = static_cast<long long>(r % q);
            r /= q;
        }
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j) {
                long long s = 0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        s += g[static_cast<size_t>(a) * n + i] * form[static_cast<size_t>(a) * n + b] %
                             q * g[static_cast<size_t>(b) * n + j] % q;
                ok = (s % q) == (form[static_cast<size_t>(i) * n + j] % q);
            }
        if (ok) count += 1;
    }
    return count;
}

// raw coset counting of [Sp:P] / [O:P'] for small parameters
inline Rational enumerate_coset_ratio(int d, long long q, const EngineOptions& opts = {}) {
    auto index = [&](GroupKind kind) {
        const int n = 2 * d;
        std::uint64_t total = 1;
        for (int i = 0; i < n * n; ++i) total *= static_cast<std::uint64_t>(q);
        if (total > opts.budget) throw BudgetExceeded("coset enumeration");
        std::vector<long long> form(static_cast<size_t>(n) * n, 0);
        for (int i = 0; i < d; ++i) {
            form[static_cast<size_t>(i) * n + d + i] = 1;
            form[static_cast<size_t>(d + i) * n + i] = kind == GroupKind::sp ? q - 1 : 1;
        }
        // collect group elements, then count left cosets of the block
        // upper-triangular subgroup by marking
        std::vector<std::vector<long long>> members;
        std::vector<long long> g(static_cast<size_t>(n) * n);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::uint64_t r = idx;
            for (int i = 0; i < n * n; ++i) {
                g[static_cast<size_t>(i)] = static_cast<long long>(r % q);
                r /= q;
            }
            bool ok = true;
            for (int i = 0; i < n && ok; ++i)
                for (int j = 0; j < n && ok; ++j) {
                    long long s = 0;
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b)
                            s += g[static_cast<size_t>(a) * n + i] * form[static_cast<size_t>(a) * n + b] %
                                 q * g[static_cast<size_t>(b) * n + j] % q;
                    ok = (s % q) == (form[static_cast<size_t>(i) * n + j] % q);
                }
            if (ok) members.push_back(g);
        }
        auto parabolic = [&](const std::vector<long long>& h) {
            for (int i = d; i < n; ++i)
                for (int j = 0; j < d; ++j)
                    if (h[static_cast<size_t>(i) * n + j] % q != 0) return false;
            return true;
        };
        // g ~ g' iff g^{-1} g' in P; count classes by marking g*P
        std::map<std::vector<long long>, int> pos;
        for (size_t i = 0; i < members.size(); ++i) pos[members[i]] = static_cast<int>(i);
        std::vector<bool> seen(members.size(), false);
        Integer cosets = 0;
        for (size_t i = 0; i < members.size(); ++i) {
            if (seen[i]) continue;
            cosets += 1;
            for (const auto& h : members) {
                if (!parabolic(h)) continue;
                std::vector<long long> gh(static_cast<size_t>(n) * n, 0);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        long long s = 0;
                        for (int c = 0; c < n; ++c)
                            s += members[i][static_cast<size_t>(a) * n + c] * h[static_cast<size_t>(c) * n + b] % q;
                        gh[static_cast<size_t>(a) * n + b] = s % q;
                    }
                seen[static_cast<size_t>(pos.at(gh))] = true;
            }
        }
        return cosets;
    };
    return Rational(index(GroupKind::sp), 1) / Rational(index(GroupKind::o_split), 1);
}

// ---- lattice Witt-theorem orbit checks --------------------------------------

struct OrbitReport {
    Integer orbit_count;
    Integer vector_count;
    Integer group_order;
    Integer stabilizer_order;  // of the first vector, via orbit-stabilizer
};

// Enumerate U(M2_std)(O/p^k) and the orbit structure of {x : (x,x) = c}.
inline OrbitReport witt_orbit_check(const LocalQuadExt& ext, const Rational& c, int k,
                                    const EngineOptions& opts = {}) {
    TruncatedRing ring(ext, k);
    GramMatrix S = standard_hyperbolic(ext);
    std::vector<Rel> shat = detail::scaled_reduce(S, ring);
    std::uint64_t R2 = ring.size * ring.size;
    std::uint64_t R4 = R2 * R2;
    if (R4 > opts.budget) throw BudgetExceeded("unitary group enumeration");

    std::uint32_t target = mod_pk(c, ring.pk);
    auto qvalue = [&](const Rel& x1, const Rel& x2) {
        Rel q{0, 0};
        const Rel v[2] = {x1, x2};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                q = ring.add(q, ring.mul(ring.mul(ring.conj(v[a]), shat[static_cast<size_t>(a) * 2 + b]), v[b]));
        return q;
    };
    auto is_target = [&](const Rel& q) {
        if (ring.ext.splitting == Splitting::ramified) return q.b == target && q.a == 0;
        return q.a == target && (ring.ext.splitting == Splitting::split ? q.b == target : q.b == 0);
    };

    std::vector<std::uint64_t> vecs;
    std::vector<std::int32_t> vec_pos(R2, -1);
    for (std::uint64_t i = 0; i < R2; ++i) {
        Rel x1 = ring.from_index(i / ring.size), x2 = ring.from_index(i % ring.size);
        if (is_target(qvalue(x1, x2))) {
            vec_pos[i] = static_cast<std::int32_t>(vecs.size());
            vecs.push_back(i);
        }
    }

    // group elements g with tg^bar S g = S (scaled residue test)
    std::vector<std::array<Rel, 4>> group;
    for (std::uint64_t i = 0; i < R4; ++i) {
        std::uint64_t r = i;
        std::array<Rel, 4> g;
        for (int t = 0; t < 4; ++t) {
            g[static_cast<size_t>(t)] = ring.from_index(r % ring.size);
            r /= ring.size;
        }
        bool ok = true;
        for (int a = 0; a < 2 && ok; ++a)
            for (int b = 0; b < 2 && ok; ++b) {
                Rel s{0, 0};
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y)
                        s = ring.add(s, ring.mul(ring.mul(ring.conj(g[static_cast<size_t>(x) * 2 + a]),
                                                          shat[static_cast<size_t>(x) * 2 + y]),
                                                 g[static_cast<size_t>(y) * 2 + b]));
                Rel diff = ring.sub(s, shat[static_cast<size_t>(a) * 2 + b]);
                ok = diff.a == 0 && diff.b == 0;
            }
        if (ok) group.push_back(g);
    }

    OrbitReport rep;
    rep.vector_count = Integer(vecs.size());
    rep.group_order = Integer(group.size());
    rep.orbit_count = 0;
    rep.stabilizer_order = 0;
    std::vector<bool> seen(vecs.size(), false);
    for (size_t start = 0; start < vecs.size(); ++start) {
        if (seen[start]) continue;
        rep.orbit_count += 1;
        Integer orbit_size = 0;
        Rel x1 = ring.from_index(vecs[start] / ring.size);
        Rel x2 = ring.from_index(vecs[start] % ring.size);
        Integer stab = 0;
        for (const auto& g : group) {
            Rel y1 = ring.add(ring.mul(g[0], x1), ring.mul(g[1], x2));
            Rel y2 = ring.add(ring.mul(g[2], x1), ring.mul(g[3], x2));
            std::uint64_t yi = ring.to_index(y1) * ring.size + ring.to_index(y2);
            if (y1 == x1 && y2 == x2) stab += 1;
            std::int32_t posn = vec_pos[yi];
            if (posn >= 0 && !seen[static_cast<size_t>(posn)]) {
                seen[static_cast<size_t>(posn)] = true;
                orbit_size += 1;
            }
        }
        if (rep.orbit_count == 1) rep.stabilizer_order = stab;
        (void)orbit_size;
    }
    return rep;
}

// Index of {alpha = 1 mod c d O} inside the norm-one group of (O/p^k)^x.
inline Integer stabilizer_index_check(const LocalQuadExt& ext, const Rational& c, int k) {
    TruncatedRing ring(ext, k);
    long long total = 0, congruent = 0;
    long vc = c == 0 ? 0 : val_p(c, ext.p);
    for (std::uint64_t i = 0; i < ring.size; ++i) {
        Rel a = ring.from_index(i);
        Rel n = ring.mul(a, ring.conj(a));
        bool norm_one = ring.ext.splitting == Splitting::split ? (n.a == 1 && n.b == 1)
                                                               : (n.a == 1 && n.b == 0);
        if (!norm_one) continue;
        ++total;
        // alpha - 1 in c*d*O, tested through the model coordinates
        Rel d = ring.sub(a, ring.reduce(FieldElement::from_rational(ext, 1)));
        std::uint64_t mod = 1;
        for (long v = 0; v < vc && mod < ring.pk; ++v) mod *= static_cast<std::uint64_t>(ext.p);
        bool in;
        if (ext.splitting == Splitting::ramified) {
            // c d O = c pi O = {(c p b', c a')}: a-coordinate divisible by p^{vc+1}
            std::uint64_t mod_a = mod * static_cast<std::uint64_t>(ext.p);
            in = (d.a % std::min<std::uint64_t>(mod_a, ring.pk) == 0) && (d.b % mod == 0);
        } else {
            in = (d.a % mod == 0) && (d.b % mod == 0);
        }
        if (in) ++congruent;
    }
    if (congruent == 0) throw std::logic_error("empty congruence subgroup");
    if (total % congruent != 0) throw std::logic_error("index not integral");
    return Integer(total / congruent);
}

}  // namespace hermlab
