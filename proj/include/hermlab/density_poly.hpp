#pragma once

#include "hermlab/density_engine.hpp"

namespace hermlab {

// Den(S,T,X) in Q[X], interpolating Den(S_{r,r},T) at the nodes X = q^{-2r}.
struct DensityPolynomial {
    std::vector<Rational> coeffs;  // ascending powers of X
    LocalQuadExt ext;
    int n = 0, m = 0;
    int degree_certified_to = 0;

    int degree() const {
        for (int d = static_cast<int>(coeffs.size()) - 1; d >= 0; --d)
            if (coeffs[static_cast<size_t>(d)] != 0) return d;
        return 0;
    }
    Rational eval(const Rational& x) const {
        Rational v = 0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
        return v;
    }
    bool is_zero() const {
        for (const auto& c : coeffs)
            if (c != 0) return false;
        return true;
    }
    DensityPolynomial derivative() const {
        DensityPolynomial d = *this;
        d.coeffs.clear();
        for (size_t i = 1; i < coeffs.size(); ++i) d.coeffs.push_back(Rational(Integer(i)) * coeffs[i]);
        if (d.coeffs.empty()) d.coeffs.push_back(Rational(0));
        return d;
    }
    bool operator==(const DensityPolynomial& o) const {
        size_t nmax = std::max(coeffs.size(), o.coeffs.size());
        for (size_t i = 0; i < nmax; ++i) {
            Rational a = i < coeffs.size() ? coeffs[i] : Rational(0);
            Rational b = i < o.coeffs.size() ? o.coeffs[i] : Rational(0);
            if (a != b) return false;
        }
        return true;
    }
};

// polynomial division over Q[X]: a = q*b + r
inline std::pair<std::vector<Rational>, std::vector<Rational>> poly_divmod(
    std::vector<Rational> a, const std::vector<Rational>& b) {
    auto deg = [](const std::vector<Rational>& p) {
        for (int d = static_cast<int>(p.size()) - 1; d >= 0; --d)
            if (p[static_cast<size_t>(d)] != 0) return d;
        return -1;
    };
    int db = deg(b);
    if (db < 0) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> q(a.size(), Rational(0));
    for (int da = deg(a); da >= db; da = deg(a)) {
        Rational f = a[static_cast<size_t>(da)] / b[static_cast<size_t>(db)];
        q[static_cast<size_t>(da - db)] = f;
        for (int i = 0; i <= db; ++i) a[static_cast<size_t>(da - db + i)] -= f * b[static_cast<size_t>(i)];
    }
    return {q, a};
}

// monic gcd over Q[X]
inline std::vector<Rational> poly_gcd(std::vector<Rational> a, std::vector<Rational> b) {
    auto deg = [](const std::vector<Rational>& p) {
        for (int d = static_cast<int>(p.size()) - 1; d >= 0; --d)
            if (p[static_cast<size_t>(d)] != 0) return d;
        return -1;
    };
    while (deg(b) >= 0) {
        auto [q, r] = poly_divmod(a, b);
        (void)q;
        a = b;
        b = r;
    }
    int da = deg(a);
    if (da < 0) return {Rational(0)};
    Rational lead = a[static_cast<size_t>(da)];
    a.resize(static_cast<size_t>(da) + 1);
    for (auto& c : a) c /= lead;
    return a;
}

// S + r hyperbolic planes M2_std
inline GramMatrix augment_hyperbolic(const GramMatrix& S, int r) {
    GramMatrix out = S;
    for (int i = 0; i < r; ++i) out = direct_sum(out, standard_hyperbolic(S.ext()));
    return out;
}

// S + <1>^r (unramified only)
inline GramMatrix augment_unit(const GramMatrix& S, int r) {
    if (S.ext().splitting == Splitting::ramified) throw RamifiedUnsupported();
    GramMatrix out = S;
    for (int i = 0; i < r; ++i) out = direct_sum(out, unit_rank_one(S.ext()));
    return out;
}

namespace detail {

// Newton interpolation through (x_i, f_i), exact rationals
inline std::vector<Rational> newton_poly(const std::vector<Rational>& xs,
                                         const std::vector<Rational>& fs) {
    size_t n = xs.size();
    std::vector<Rational> dd = fs;  // divided differences, in place
    for (size_t lvl = 1; lvl < n; ++lvl)
        for (size_t i = n - 1; i >= lvl; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - lvl]);
            if (i == lvl) break;
        }
    // expand newton form into monomial coefficients
    std::vector<Rational> coeffs{dd[n - 1]};
    for (size_t i = n - 1; i-- > 0;) {
        // coeffs <- coeffs * (X - xs[i]) + dd[i]
        coeffs.insert(coeffs.begin(), Rational(0));
        for (size_t j = 0; j + 1 < coeffs.size(); ++j) coeffs[j] -= xs[i] * coeffs[j + 1];
        coeffs[0] += dd[i];
    }
    return coeffs;
}

}  // namespace detail

// Construct the minimal-degree polynomial through the augmentation nodes,
// certified at two extra nodes.
inline DensityPolynomial interpolate(const GramMatrix& S, const GramMatrix& T,
                                     int max_degree = -1, const EngineOptions& opts = {}) {
    const auto& ext = S.ext();
    const int n = S.rank(), m = T.rank();
    if (max_degree < 0) {
        // the degree grows with the valuations in T (rank-1 alone reaches
        // v+1), so 2mn alone is not a safe cap; widen it by v_q(det T)
        long v = 0;
        Rational det = T.det();
        if (det != 0) v = std::max<long>(0, val_p(det, ext.p));
        max_degree = std::max<int>(2 * m * n + 2 * m * static_cast<int>(v), 2);
    }
    const Rational node_base = Rational(1, ext.q * ext.q);  // q^{-2}

    std::vector<Rational> values;  // Den(S_{r,r}, T) for r = 0,1,...
    auto value_at = [&](int r) -> const Rational& {
        while (static_cast<int>(values.size()) <= r) {
            int rr = static_cast<int>(values.size());
            values.push_back(local_density(augment_hyperbolic(S, rr), T, opts).value);
        }
        return values[static_cast<size_t>(r)];
    };

    std::vector<Rational> nodes;
    auto node_at = [&](int r) {
        while (static_cast<int>(nodes.size()) <= r) {
            Rational x = 1;
            for (int i = 0; i < static_cast<int>(nodes.size()); ++i) x *= node_base;
            nodes.push_back(x);
        }
        return nodes[static_cast<size_t>(r)];
    };

    for (int d = 0; d <= max_degree; ++d) {
        std::vector<Rational> xs, fs;
        for (int r = 0; r <= d; ++r) {
            xs.push_back(node_at(r));
            fs.push_back(value_at(r));
        }
        std::vector<Rational> coeffs = detail::newton_poly(xs, fs);
        DensityPolynomial P{coeffs, ext, n, m, 0};
        bool ok = true;
        for (int extra = 1; extra <= 2 && ok; ++extra)
            ok = (P.eval(node_at(d + extra)) == value_at(d + extra));
        if (ok) {
            P.degree_certified_to = 2;
            return P;
        }
    }
    throw DegreeCapExceeded("no polynomial of degree <= cap matches the augmentation nodes");
}

// Den(S_r, T) = P((-q)^{-r}) (inert) resp. P(q^{-r}) (split), checked exactly
// for r = 0..r_max.
inline bool unit_augment_check(const GramMatrix& S, const GramMatrix& T,
                               const DensityPolynomial& P, int r_max,
                               const EngineOptions& opts = {}) {
    const auto& ext = S.ext();
    if (ext.splitting == Splitting::ramified) throw RamifiedUnsupported();
    const Rational base = ext.splitting == Splitting::inert ? Rational(-1, ext.q) : Rational(1, ext.q);
    for (int r = 0; r <= r_max; ++r) {
        Rational x = 1;
        for (int i = 0; i < r; ++i) x *= base;
        Rational lhs = local_density(augment_unit(S, r), T, opts).value;
        if (lhs != P.eval(x)) return false;
    }
    return true;
}

}  // namespace hermlab
