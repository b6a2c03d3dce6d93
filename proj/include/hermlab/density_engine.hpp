#pragma once

#include "hermlab/truncated_ring.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>

namespace hermlab {

struct EngineOptions {
    int k_max = 4;
    std::uint64_t budget = 1'000'000'000ull;  // ring elements visited
    int threads = 0;                          // 0 = hardware concurrency
};

struct DensityResult {
    Rational value;
    int stabilized_at = 0;
    std::vector<std::pair<int, Integer>> raw_counts;
};

namespace detail {

inline int effective_threads(const EngineOptions& o) {
    if (o.threads > 0) return o.threads;
    if (const char* env = std::getenv("HERMLAB_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(std::min(hc, 8u)) : 1;
}

// ---- S-block structure ----------------------------------------------------

struct SBlock {
    enum Kind { Scalar, StdHyperbolic, General } kind;
    GramMatrix gram;
    Rational scalar;  // Scalar kind
};

// Split S into orthogonal components (connected by nonzero off-diagonal
// entries); permutation to contiguous blocks is a GL(O) congruence and
// leaves all counts unchanged.
inline std::vector<SBlock> decompose_blocks(const GramMatrix& S) {
    const auto& ext = S.ext();
    int n = S.rank();
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int i = 0; i < n; ++i) {
        if (comp[i] >= 0) continue;
        std::vector<int> stack{i};
        comp[i] = ncomp;
        while (!stack.empty()) {
            int a = stack.back();
            stack.pop_back();
            for (int b = 0; b < n; ++b)
                if (comp[b] < 0 && !is_zero(S.at(a, b))) {
                    comp[b] = ncomp;
                    stack.push_back(b);
                }
        }
        ++ncomp;
    }
    std::vector<SBlock> out;
    for (int c = 0; c < ncomp; ++c) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (comp[i] == c) idx.push_back(i);
        GramMatrix sub(ext, static_cast<int>(idx.size()));
        for (size_t a = 0; a < idx.size(); ++a)
            for (size_t b = a; b < idx.size(); ++b)
                sub.set(static_cast<int>(a), static_cast<int>(b), S.at(idx[a], idx[b]));
        SBlock blk{SBlock::General, sub, Rational(0)};
        if (sub.rank() == 1) {
            blk.kind = SBlock::Scalar;
            blk.scalar = rational_part(ext, sub.at(0, 0));
        } else if (sub.rank() == 2 && is_zero(sub.at(0, 0)) && is_zero(sub.at(1, 1))) {
            FieldElement e = sub.at(0, 1);
            if (ext.splitting == Splitting::ramified) {
                FieldElement pe = mul(ext, FieldElement(Rational(0), Rational(1)), e);
                if (is_integral(ext, pe) && val_p(norm(ext, pe), ext.p) == 0)
                    blk.kind = SBlock::StdHyperbolic;
            } else {
                Rational nrm = norm(ext, e);
                if (is_integral(ext, e) && nrm != 0 && val_p(nrm, ext.p) == 0)
                    blk.kind = SBlock::StdHyperbolic;
            }
        }
        out.push_back(std::move(blk));
    }
    return out;
}

// d-scaled reduction of a Gram matrix to the truncated ring (d = pi ramified)
inline std::vector<Rel> scaled_reduce(const GramMatrix& G, const TruncatedRing& ring) {
    const auto& ext = G.ext();
    int n = G.rank();
    std::vector<Rel> out(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            FieldElement v = G.at(i, j);
            if (ext.splitting == Splitting::ramified)
                v = mul(ext, FieldElement(Rational(0), Rational(1)), v);
            out[static_cast<size_t>(i) * n + j] = ring.reduce(v);
        }
    return out;
}

// the Z/p^k coordinate carrying the Herm-diagonal value of a (scaled)
// conjugation-fixed ring element
inline std::uint32_t diag_value(const TruncatedRing& ring, const Rel& r) {
    return ring.ext.splitting == Splitting::ramified ? r.b : r.a;
}

// ---- m = 1 value-distribution tables --------------------------------------

using DiagTable = std::vector<std::uint64_t>;  // index: value in Z/p^k

inline void parallel_scan(std::uint64_t total, int threads, DiagTable& table,
                          const std::function<std::uint32_t(std::uint64_t)>& value_of) {
    if (threads <= 1 || total < (1u << 22)) {
        for (std::uint64_t i = 0; i < total; ++i) table[value_of(i)] += 1;
        return;
    }
    std::vector<std::thread> pool;
    std::vector<DiagTable> locals(static_cast<size_t>(threads), DiagTable(table.size(), 0));
    std::uint64_t chunk = (total + threads - 1) / threads;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            std::uint64_t lo = t * chunk, hi = std::min(total, lo + chunk);
            for (std::uint64_t i = lo; i < hi; ++i) locals[static_cast<size_t>(t)][value_of(i)] += 1;
        });
    for (auto& th : pool) th.join();
    for (auto& loc : locals)
        for (size_t v = 0; v < table.size(); ++v) table[v] += loc[v];
}

inline DiagTable scalar_table_uncached(const TruncatedRing& ring, const Rational& s, int threads) {
    DiagTable t(ring.pk, 0);
    std::uint32_t sm = mod_pk(s, ring.pk);
    parallel_scan(ring.size, threads, t, [&](std::uint64_t i) {
        return ring.rmul(sm, ring.norm(ring.from_index(i)));
    });
    return t;
}

struct TableKey {
    long long p;
    int splitting;
    long long model;  // u / c / omega marker
    int k;
    std::uint32_t s_mod;
    bool operator<(const TableKey& o) const {
        return std::tie(p, splitting, model, k, s_mod) <
               std::tie(o.p, o.splitting, o.model, o.k, o.s_mod);
    }
};

inline DiagTable scalar_table(const TruncatedRing& ring, const Rational& s, int threads) {
    static std::map<TableKey, DiagTable> cache;
    static std::mutex mtx;
    long long model = ring.ext.omega_model ? -1
                      : ring.ext.splitting == Splitting::ramified ? ring.ext.ramified_c
                                                                  : ring.ext.inert_u;
    TableKey key{ring.ext.p, static_cast<int>(ring.ext.splitting), model, ring.k,
                 mod_pk(s, ring.pk)};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    DiagTable t = scalar_table_uncached(ring, s, threads);
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(key, t);
    return t;
}

// value distribution of the standard hyperbolic plane by valuation shells;
// exact bijection counting, cross-checked against brute enumeration in tests
inline DiagTable hyperbolic_table(const TruncatedRing& ring) {
    const std::uint64_t pk = ring.pk;
    const long long p = ring.ext.p;
    const int k = ring.k;
    DiagTable t(pk, 0);
    auto vp = [&](std::uint64_t c) {
        if (c == 0) return k;
        int v = 0;
        while (c % p == 0) { c /= p; ++v; }
        return v;
    };
    std::vector<std::uint64_t> ppow(2 * k + 1, 1);
    for (size_t i = 1; i < ppow.size(); ++i) ppow[i] = ppow[i - 1] * p;
    if (ring.ext.splitting == Splitting::ramified) {
        // shells of x by pi-valuation t in [0, 2k); contribution p^{k+floor(t/2)}
        // to every value c with v_p(c) >= floor(t/2)
        for (std::uint64_t c = 0; c < pk; ++c) {
            int w = vp(c);
            std::uint64_t acc = 0;
            for (int tt = 0; tt < 2 * k; ++tt) {
                if (tt / 2 > w) break;
                std::uint64_t shell = ppow[2 * k - tt] - ppow[2 * k - tt - 1];
                acc += shell * ppow[k + tt / 2];
            }
            if (c == 0) acc += ppow[2 * k];  // x = 0, y free
            t[c] = acc;
        }
    } else {
        // shells of x by content valuation t in [0, k); contribution p^{k+t}
        // to every value c with v_p(c) >= t
        for (std::uint64_t c = 0; c < pk; ++c) {
            int w = vp(c);
            std::uint64_t acc = 0;
            for (int tt = 0; tt < k && tt <= w; ++tt) {
                std::uint64_t shell = ppow[2 * (k - tt)] - ppow[2 * (k - tt - 1)];
                acc += shell * ppow[k + tt];
            }
            if (c == 0) acc += ppow[2 * k];
            t[c] = acc;
        }
    }
    return t;
}

// brute value table of one (scaled) block of any rank, m = 1
inline DiagTable general_table_m1(const TruncatedRing& ring, const std::vector<Rel>& shat,
                                  int rank, const EngineOptions& opts) {
    std::uint64_t total = 1;
    for (int i = 0; i < rank; ++i) {
        if (total > opts.budget / ring.size + 1) throw BudgetExceeded("m=1 block table enumeration");
        total *= ring.size;
    }
    if (total > opts.budget) throw BudgetExceeded("m=1 block table enumeration");
    DiagTable t(ring.pk, 0);
    parallel_scan(total, effective_threads(opts), t, [&, rank](std::uint64_t idx) {
        std::vector<Rel> v(static_cast<size_t>(rank));
        std::uint64_t r = idx;
        for (int i = 0; i < rank; ++i) {
            v[static_cast<size_t>(i)] = ring.from_index(r % ring.size);
            r /= ring.size;
        }
        Rel q{0, 0};
        for (int a = 0; a < rank; ++a)
            for (int b = 0; b < rank; ++b)
                q = ring.add(q, ring.mul(ring.mul(ring.conj(v[static_cast<size_t>(a)]),
                                                  shat[static_cast<size_t>(a) * rank + b]),
                                         v[static_cast<size_t>(b)]));
        return diag_value(ring, q);
    });
    return t;
}

inline std::vector<Integer> conv_zpk(const std::vector<Integer>& A, const DiagTable& B,
                                     std::uint64_t pk) {
    std::vector<Integer> C(pk, Integer(0));
    for (std::uint64_t u = 0; u < pk; ++u) {
        if (A[u] == 0) continue;
        for (std::uint64_t w = 0; w < pk; ++w) {
            if (B[w] == 0) continue;
            std::uint64_t v = u + w;
            if (v >= pk) v -= pk;
            C[v] += A[u] * Integer(B[w]);
        }
    }
    return C;
}

inline Integer count_m1(const std::vector<SBlock>& blocks, const TruncatedRing& ring,
                        std::uint32_t target, const EngineOptions& opts) {
    if (ring.size > opts.budget) throw BudgetExceeded("ring too large for value tables");
    std::vector<Integer> acc(ring.pk, Integer(0));
    acc[0] = 1;
    int threads = effective_threads(opts);
    for (const auto& blk : blocks) {
        DiagTable t;
        switch (blk.kind) {
            case SBlock::Scalar: t = scalar_table(ring, blk.scalar, threads); break;
            case SBlock::StdHyperbolic: t = hyperbolic_table(ring); break;
            default: t = general_table_m1(ring, scaled_reduce(blk.gram, ring), blk.gram.rank(), opts);
        }
        acc = conv_zpk(acc, t, ring.pk);
    }
    return acc[target];
}

// ---- general m: packed Herm_m(O/p^k) values --------------------------------

// mixed-radix (base p^k) packing of Herm_m(O/p^k) residue values
struct HermCodec {
    int m;
    std::uint64_t pk;
    int fields;  // m diagonal + m(m-1) off-diagonal coordinates

    HermCodec(int m_, std::uint64_t pk_) : m(m_), pk(pk_) {
        fields = m + m * (m - 1);
    }
    std::uint64_t space() const {
        std::uint64_t s = 1;
        for (int i = 0; i < fields; ++i) {
            if (s > (1ull << 62) / pk) throw BudgetExceeded("Herm value space too large");
            s *= pk;
        }
        return s;
    }
    std::uint64_t pack(const std::vector<std::uint32_t>& f) const {
        std::uint64_t key = 0;
        for (int i = fields - 1; i >= 0; --i) key = key * pk + f[static_cast<size_t>(i)];
        return key;
    }
    void unpack(std::uint64_t key, std::vector<std::uint32_t>& f) const {
        for (int i = 0; i < fields; ++i) {
            f[static_cast<size_t>(i)] = static_cast<std::uint32_t>(key % pk);
            key /= pk;
        }
    }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t key = 0, mult = 1;
        for (int i = 0; i < fields; ++i) {
            std::uint64_t s = a % pk + b % pk;
            if (s >= pk) s -= pk;
            key += s * mult;
            mult *= pk;
            a /= pk;
            b /= pk;
        }
        return key;
    }
};

// Herm values of one block's m-column component; diagonal entries enter via
// their value coordinate, off-diagonal entries with both coordinates.
inline std::uint64_t herm_key(const HermCodec& codec, const TruncatedRing& ring,
                              const std::vector<Rel>& H, int m) {
    std::vector<std::uint32_t> f(static_cast<size_t>(codec.fields));
    int pos = 0;
    for (int i = 0; i < m; ++i) f[static_cast<size_t>(pos++)] = diag_value(ring, H[static_cast<size_t>(i) * m + i]);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            f[static_cast<size_t>(pos++)] = H[static_cast<size_t>(i) * m + j].a;
            f[static_cast<size_t>(pos++)] = H[static_cast<size_t>(i) * m + j].b;
        }
    return codec.pack(f);
}

inline Integer count_direct(const std::vector<SBlock>& blocks, const std::vector<Rel>& that,
                            const TruncatedRing& ring, int m, const EngineOptions& opts) {
    HermCodec codec(m, ring.pk);
    std::uint64_t space = codec.space();
    if (space > (1ull << 23)) throw BudgetExceeded("Herm value space too large for direct counting");

    std::vector<Integer> acc(space, Integer(0));
    acc[0] = 1;
    for (const auto& blk : blocks) {
        int rank = blk.gram.rank();
        std::uint64_t total = 1;
        for (int i = 0; i < rank * m; ++i) {
            if (total > opts.budget / ring.size + 1) throw BudgetExceeded("direct block enumeration");
            total *= ring.size;
        }
        if (total > opts.budget) throw BudgetExceeded("direct block enumeration");
        std::vector<Rel> shat = scaled_reduce(blk.gram, ring);
        std::unordered_map<std::uint64_t, std::uint64_t> table;
        std::vector<Rel> x(static_cast<size_t>(rank) * m);
        std::vector<Rel> H(static_cast<size_t>(m) * m);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::uint64_t r = idx;
            for (int i = 0; i < rank * m; ++i) {
                x[static_cast<size_t>(i)] = ring.from_index(r % ring.size);
                r /= ring.size;
            }
            // H = tx^bar Shat x  (x is rank x m, row-major)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    Rel s{0, 0};
                    for (int a = 0; a < rank; ++a)
                        for (int b = 0; b < rank; ++b)
                            s = ring.add(s, ring.mul(ring.mul(ring.conj(x[static_cast<size_t>(a) * m + i]),
                                                              shat[static_cast<size_t>(a) * rank + b]),
                                                     x[static_cast<size_t>(b) * m + j]));
                    H[static_cast<size_t>(i) * m + j] = s;
                }
            table[herm_key(codec, ring, H, m)] += 1;
        }
        std::vector<Integer> next(space, Integer(0));
        for (std::uint64_t v = 0; v < space; ++v) {
            if (acc[v] == 0) continue;
            for (const auto& [kb, cb] : table) next[codec.add(v, kb)] += acc[v] * Integer(cb);
        }
        acc.swap(next);
    }
    return acc[herm_key(codec, ring, that, m)];
}

// brute matrix enumeration with column-level pruning (oracle / last resort)
inline Integer count_brute(const GramMatrix& S, const std::vector<Rel>& that,
                           const TruncatedRing& ring, int m, const EngineOptions& opts) {
    int n = S.rank();
    std::vector<Rel> shat = scaled_reduce(S, ring);
    std::uint64_t visited = 0;
    std::vector<std::vector<Rel>> cols(static_cast<size_t>(m), std::vector<Rel>(static_cast<size_t>(n)));
    Integer count = 0;
    // pairing <v_i, v_j> under the scaled Gram
    auto pairing = [&](const std::vector<Rel>& vi, const std::vector<Rel>& vj) {
        Rel s{0, 0};
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                s = ring.add(s, ring.mul(ring.mul(ring.conj(vi[static_cast<size_t>(a)]),
                                                  shat[static_cast<size_t>(a) * n + b]),
                                         vj[static_cast<size_t>(b)]));
        return s;
    };
    std::uint64_t percol = 1;
    for (int i = 0; i < n; ++i) {
        if (percol > opts.budget) throw BudgetExceeded("brute matrix enumeration");
        percol *= ring.size;
    }
    std::function<void(int)> rec = [&](int j) {
        if (j == m) { count += 1; return; }
        for (std::uint64_t idx = 0; idx < percol; ++idx) {
            if (++visited > opts.budget) throw BudgetExceeded("brute matrix enumeration");
            std::uint64_t r = idx;
            for (int i = 0; i < n; ++i) {
                cols[static_cast<size_t>(j)][static_cast<size_t>(i)] = ring.from_index(r % ring.size);
                r /= ring.size;
            }
            bool ok = true;
            for (int i = 0; i <= j && ok; ++i) {
                Rel h = pairing(cols[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]);
                Rel diff = ring.sub(h, that[static_cast<size_t>(i) * m + j]);
                ok = (diff.a == 0 && diff.b == 0);
            }
            if (ok) rec(j + 1);
        }
    };
    rec(0);
    return count;
}

// ---- unit-pivot peel reduction (unramified) --------------------------------

// Exact congruence diagonalization of T with unit pivots; returns the unit
// pivots peeled off plus the leftover block (no unit pivot attainable).
struct PeelSplit {
    std::vector<Rational> pivots;
    std::optional<GramMatrix> residual;
};

inline PeelSplit unit_pivot_split(const GramMatrix& T) {
    const auto& ext = T.ext();
    GramMatrix cur = T;
    PeelSplit out;
    auto unit = [&](const Rational& r) { return r != 0 && val_p(r, ext.p) == 0; };
    while (cur.rank() > 0) {
        int n = cur.rank();
        int piv = -1;
        for (int i = 0; i < n && piv < 0; ++i)
            if (unit(rational_part(ext, cur.at(i, i)))) piv = i;
        if (piv < 0) {
            // try to create a unit diagonal via x_i <- x_i + c x_j
            const FieldElement cands[] = {FieldElement::from_rational(ext, 1),
                                          FieldElement::from_rational(ext, -1),
                                          FieldElement(Rational(0), Rational(1)),
                                          FieldElement(Rational(0), Rational(-1))};
            for (int i = 0; i < n && piv < 0; ++i)
                for (int j = 0; j < n && piv < 0; ++j) {
                    if (i == j) continue;
                    for (const auto& c : cands) {
                        // (x_i + c x_j, x_i + c x_j) = T_ii + N(c) T_jj + Tr(c T_ij)
                        Rational q = rational_part(ext, cur.at(i, i)) + norm(ext, c) * rational_part(ext, cur.at(j, j)) +
                                     trace(ext, mul(ext, c, cur.at(i, j)));
                        if (unit(q)) {
                            std::vector<FieldElement> Y(static_cast<size_t>(n) * n);
                            for (int a = 0; a < n; ++a)
                                Y[static_cast<size_t>(a) * n + a] = FieldElement::from_rational(ext, 1);
                            Y[static_cast<size_t>(j) * n + i] = c;  // column i gains c x_j
                            cur = congruence(cur, Y, n);
                            piv = i;
                            break;
                        }
                    }
                }
        }
        if (piv < 0) break;
        // move pivot to front, then split it off
        if (piv != 0) {
            std::vector<FieldElement> P(static_cast<size_t>(n) * n);
            for (int a = 0; a < n; ++a) {
                int tgt = a == 0 ? piv : (a == piv ? 0 : a);
                P[static_cast<size_t>(tgt) * n + a] = FieldElement::from_rational(ext, 1);
            }
            cur = congruence(cur, P, n);
        }
        Rational d = rational_part(ext, cur.at(0, 0));
        out.pivots.push_back(d);
        if (n == 1) { cur = GramMatrix(ext, 0); break; }
        std::vector<FieldElement> Y(static_cast<size_t>(n) * (n - 1));
        for (int j = 1; j < n; ++j) {
            FieldElement mu = div(ext, cur.at(0, j), cur.at(0, 0));
            Y[static_cast<size_t>(0) * (n - 1) + (j - 1)] = neg(mu);
            Y[static_cast<size_t>(j) * (n - 1) + (j - 1)] = FieldElement::from_rational(ext, 1);
        }
        cur = congruence(cur, Y, n - 1);
    }
    if (cur.rank() > 0) out.residual = cur;
    return out;
}

inline bool peelable_shape(const std::vector<SBlock>& blocks, const LocalQuadExt& ext) {
    if (ext.splitting == Splitting::ramified) return false;
    for (const auto& b : blocks) {
        if (b.kind == SBlock::StdHyperbolic) continue;
        if (b.kind == SBlock::Scalar && b.scalar != 0 && val_p(b.scalar, ext.p) == 0) continue;
        return false;
    }
    return true;
}

Integer count_dispatch(const GramMatrix& S, const GramMatrix& T, int k,
                       const EngineOptions& opts, bool allow_peel);

// count of one column of norm t over <1>^M, convolution of M unit tables
inline Integer unit_vector_count(const LocalQuadExt& ext, int M, const Rational& t,
                                 const TruncatedRing& ring, const EngineOptions& opts) {
    DiagTable one = scalar_table(ring, Rational(1), effective_threads(opts));
    std::vector<Integer> acc(ring.pk, Integer(0));
    acc[0] = 1;
    for (int i = 0; i < M; ++i) acc = conv_zpk(acc, one, ring.pk);
    return acc[mod_pk(t, ring.pk)];
}

// Witt peel over unramified extensions: S ~ <1>^N (unit scalars and standard
// hyperbolic planes), T with a unit pivot t: every solution column is
// unimodular, all such columns lie in one U(S)(O/p^k)-orbit, and the
// orthogonal complement is <1>^{N-1}. Cross-validated against count_direct
// and count_brute in the test suite.
inline Integer count_peel(const GramMatrix& S, const GramMatrix& T, int k,
                          const EngineOptions& opts) {
    const auto& ext = S.ext();
    TruncatedRing ring(ext, k);
    PeelSplit split = unit_pivot_split(T);
    int N = S.rank();
    Integer total = 1;
    for (const Rational& d : split.pivots) {
        total *= unit_vector_count(ext, N, d, ring, opts);
        N -= 1;
    }
    if (split.residual) {
        GramMatrix rest = identity_gram(ext, N);
        total *= count_dispatch(rest, *split.residual, k, opts, /*allow_peel=*/false);
    }
    return total;
}

inline Integer count_dispatch(const GramMatrix& S, const GramMatrix& T, int k,
                              const EngineOptions& opts, bool allow_peel) {
    const auto& ext = S.ext();
    TruncatedRing ring(ext, k);
    int m = T.rank();
    if (m == 0) return 1;
    std::vector<Rel> that = scaled_reduce(T, ring);
    auto blocks = decompose_blocks(S);
    if (m == 1) {
        std::uint32_t target = diag_value(ring, that[0]);
        return count_m1(blocks, ring, target, opts);
    }
    if (allow_peel && peelable_shape(blocks, ext)) {
        PeelSplit probe = unit_pivot_split(T);
        if (!probe.pivots.empty()) return count_peel(S, T, k, opts);
    }
    return count_direct(blocks, that, ring, m, opts);
}

}  // namespace detail

// Exact count of n x m matrices x over O/p^k with tx^bar S x = T in the
// Herm^*-residue sense.
inline Integer count_solutions(const GramMatrix& S, const GramMatrix& T, int k,
                               const EngineOptions& opts = {}) {
    if (!(S.ext() == T.ext())) throw ContextMismatch();
    if (!in_dual_star(S)) throw NotIntegral("S is not in Herm_n(O)^*");
    if (!in_dual_star(T)) throw NotIntegral("T is not in Herm_m(O)^*");
    return detail::count_dispatch(S, T, k, opts, true);
}

// Stabilized local density Den(S,T) = lim count / q^{k m (2n-m)}.
inline DensityResult local_density(const GramMatrix& S, const GramMatrix& T,
                                   const EngineOptions& opts = {}) {
    if (!(S.ext() == T.ext())) throw ContextMismatch();
    if (!in_dual_star(S)) throw NotIntegral("S is not in Herm_n(O)^*");
    const int n = S.rank(), m = T.rank();
    if (n < m) return {Rational(0), 0, {}};
    if (!in_dual_star(T)) return {Rational(0), 0, {}};
    if (m == 0) return {Rational(1), 0, {{1, Integer(1)}}};
    if (opts.k_max < 2) throw std::invalid_argument("k_max must be >= 2");
    if (T.det() == 0 || S.det() == 0) throw std::invalid_argument("S and T must be nonsingular");

    DensityResult res;
    Rational prev;
    bool have_prev = false;
    const long long q = S.ext().q;
    for (int k = 1; k <= opts.k_max; ++k) {
        Integer cnt = detail::count_dispatch(S, T, k, opts, true);
        res.raw_counts.emplace_back(k, cnt);
        unsigned long e = static_cast<unsigned long>(k) * m * (2 * n - m);
        Rational normd(cnt, pow_int(q, e));
        if (have_prev && normd == prev) {
            res.value = normd;
            res.stabilized_at = k;
            return res;
        }
        prev = normd;
        have_prev = true;
    }
    Rational last = prev;
    Integer cnt_prev = res.raw_counts[res.raw_counts.size() - 2].second;
    unsigned long e_prev = static_cast<unsigned long>(opts.k_max - 1) * m * (2 * n - m);
    Rational second_last(cnt_prev, pow_int(q, e_prev));
    throw NotStabilized(second_last, last,
                        "density counts did not stabilize by k_max; raise k_max");
}

}  // namespace hermlab
