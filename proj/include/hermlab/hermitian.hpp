#pragma once

#include "hermlab/field_data.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace hermlab {

// Element a + b*delta of the local quadratic algebra, with delta the model
// generator of LocalQuadExt. In the split model the two rationals are the
// two independent coordinates and conjugation swaps them.
struct FieldElement {
    Rational a, b;

    FieldElement() = default;
    FieldElement(Rational x, Rational y) : a(std::move(x)), b(std::move(y)) {}
    static FieldElement from_rational(const LocalQuadExt& ext, const Rational& r) {
        if (ext.splitting == Splitting::split) return {r, r};
        return {r, Rational(0)};
    }
    bool operator==(const FieldElement& o) const { return a == o.a && b == o.b; }
};

inline FieldElement conj(const LocalQuadExt& ext, const FieldElement& x) {
    switch (ext.splitting) {
        case Splitting::split: return {x.b, x.a};
        case Splitting::inert:
            if (ext.omega_model) return {x.a - x.b, -x.b};  // conj(w) = -1-w
            return {x.a, -x.b};
        default: return {x.a, -x.b};  // conj(pi) = -pi
    }
}

inline FieldElement add(const FieldElement& x, const FieldElement& y) {
    return {x.a + y.a, x.b + y.b};
}
inline FieldElement sub(const FieldElement& x, const FieldElement& y) {
    return {x.a - y.a, x.b - y.b};
}
inline FieldElement neg(const FieldElement& x) { return {-x.a, -x.b}; }

inline FieldElement mul(const LocalQuadExt& ext, const FieldElement& x, const FieldElement& y) {
    switch (ext.splitting) {
        case Splitting::split:
            return {x.a * y.a, x.b * y.b};
        case Splitting::inert:
            if (ext.omega_model)  // w^2 = -1 - w
                return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
            return {x.a * y.a + x.b * y.b * ext.inert_u, x.a * y.b + x.b * y.a};
        default:  // pi^2 = c*p
            return {x.a * y.a + x.b * y.b * ext.ramified_c * ext.p, x.a * y.b + x.b * y.a};
    }
}

inline Rational trace(const LocalQuadExt& ext, const FieldElement& x) {
    switch (ext.splitting) {
        case Splitting::split: return x.a + x.b;
        case Splitting::inert:
            if (ext.omega_model) return 2 * x.a - x.b;
            return 2 * x.a;
        default: return 2 * x.a;
    }
}

inline Rational norm(const LocalQuadExt& ext, const FieldElement& x) {
    switch (ext.splitting) {
        case Splitting::split: return x.a * x.b;
        case Splitting::inert:
            if (ext.omega_model) return x.a * x.a - x.a * x.b + x.b * x.b;
            return x.a * x.a - ext.inert_u * x.b * x.b;
        default: return x.a * x.a - ext.ramified_c * ext.p * x.b * x.b;
    }
}

inline bool is_zero(const FieldElement& x) { return x.a == 0 && x.b == 0; }

// x / y over the algebra; y must be invertible (nonzero norm; in the split
// model both coordinates nonzero)
inline FieldElement div(const LocalQuadExt& ext, const FieldElement& x, const FieldElement& y) {
    if (ext.splitting == Splitting::split) {
        if (y.a == 0 || y.b == 0) throw std::domain_error("division by zero divisor");
        return {x.a / y.a, x.b / y.b};
    }
    Rational n = norm(ext, y);
    if (n == 0) throw std::domain_error("division by zero");
    FieldElement z = mul(ext, x, conj(ext, y));
    return {z.a / n, z.b / n};
}

// Is x in the p-integral closure O (all model coordinates p-integral)?
inline bool is_integral(const LocalQuadExt& ext, const FieldElement& x) {
    return p_integral(x.a, ext.p) && p_integral(x.b, ext.p);
}

// Is x a rational (conjugation-fixed) element?
inline bool is_rational_element(const LocalQuadExt& ext, const FieldElement& x) {
    FieldElement c = conj(ext, x);
    return c == x;
}

// x as an element of F^+ = Q; requires conj-fixed
inline Rational rational_part(const LocalQuadExt& ext, const FieldElement& x) {
    if (!is_rational_element(ext, x)) throw std::domain_error("element is not conjugation-fixed");
    return ext.splitting == Splitting::split ? x.a : x.a;  // b = 0 in nonsplit models
}

// ---------------------------------------------------------------------------

// Exact Hermitian Gram matrix over one local quadratic algebra.
// Conjugate-symmetric by construction.
class GramMatrix {
public:
    GramMatrix(LocalQuadExt ext, int n)
        : ext_(std::move(ext)), n_(n), e_(static_cast<size_t>(n) * n) {
        for (auto& x : e_) x = FieldElement(0, ext_.splitting == Splitting::split ? Rational(0) : Rational(0));
    }

    static GramMatrix from_entries(const LocalQuadExt& ext, int n,
                                   const std::vector<FieldElement>& entries) {
        GramMatrix g(ext, n);
        g.e_ = entries;
        g.check_conjugate_symmetric();
        return g;
    }

    const LocalQuadExt& ext() const { return ext_; }
    int rank() const { return n_; }
    const FieldElement& at(int i, int j) const { return e_[static_cast<size_t>(i) * n_ + j]; }
    void set(int i, int j, const FieldElement& v) {
        e_[static_cast<size_t>(i) * n_ + j] = v;
        e_[static_cast<size_t>(j) * n_ + i] = conj(ext_, v);
    }

    void check_conjugate_symmetric() const {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (!(at(i, j) == conj(ext_, at(j, i))))
                    throw std::invalid_argument("matrix is not conjugate-symmetric");
        for (int i = 0; i < n_; ++i)
            if (!is_rational_element(ext_, at(i, i)))
                throw std::invalid_argument("diagonal entry not conjugation-fixed");
    }

    // determinant; conjugate symmetry puts it in Q
    Rational det() const {
        if (n_ == 0) return Rational(1);
        if (ext_.splitting == Splitting::split) {
            // per-coordinate rational determinants; conj-symmetry makes them equal
            auto detq = [&](bool second) {
                std::vector<Rational> m(static_cast<size_t>(n_) * n_);
                for (int i = 0; i < n_; ++i)
                    for (int j = 0; j < n_; ++j)
                        m[static_cast<size_t>(i) * n_ + j] = second ? at(i, j).b : at(i, j).a;
                return rational_det(m, n_);
            };
            return detq(false);
        }
        // Gaussian elimination over the quadratic field
        std::vector<FieldElement> m = e_;
        auto idx = [&](int i, int j) { return static_cast<size_t>(i) * n_ + j; };
        FieldElement sign = FieldElement::from_rational(ext_, 1);
        FieldElement detv = FieldElement::from_rational(ext_, 1);
        for (int c = 0; c < n_; ++c) {
            int piv = -1;
            for (int r = c; r < n_; ++r)
                if (norm(ext_, m[idx(r, c)]) != 0) { piv = r; break; }
            if (piv < 0) return Rational(0);
            if (piv != c) {
                for (int j = 0; j < n_; ++j) std::swap(m[idx(piv, j)], m[idx(c, j)]);
                sign = neg(sign);
            }
            detv = mul(ext_, detv, m[idx(c, c)]);
            for (int r = c + 1; r < n_; ++r) {
                FieldElement f = div(ext_, m[idx(r, c)], m[idx(c, c)]);
                for (int j = c; j < n_; ++j)
                    m[idx(r, j)] = sub(m[idx(r, j)], mul(ext_, f, m[idx(c, j)]));
            }
        }
        detv = mul(ext_, detv, sign);
        return rational_part(ext_, detv);
    }

private:
    static Rational rational_det(std::vector<Rational> m, int n) {
        Rational d = 1;
        for (int c = 0; c < n; ++c) {
            int piv = -1;
            for (int r = c; r < n; ++r)
                if (m[static_cast<size_t>(r) * n + c] != 0) { piv = r; break; }
            if (piv < 0) return Rational(0);
            if (piv != c) {
                for (int j = 0; j < n; ++j)
                    std::swap(m[static_cast<size_t>(piv) * n + j], m[static_cast<size_t>(c) * n + j]);
                d = -d;
            }
            d *= m[static_cast<size_t>(c) * n + c];
            for (int r = c + 1; r < n; ++r) {
                Rational f = m[static_cast<size_t>(r) * n + c] / m[static_cast<size_t>(c) * n + c];
                for (int j = c; j < n; ++j)
                    m[static_cast<size_t>(r) * n + j] -= f * m[static_cast<size_t>(c) * n + j];
            }
        }
        return d;
    }

    LocalQuadExt ext_;
    int n_;
    std::vector<FieldElement> e_;
};

// The standard self-dual rank 2 lattice: Gram [[0, d^-1],[conj(d)^-1, 0]]
// with d a trace-zero generator of the different (d = 1 unramified/split,
// d = pi ramified, pi^-1 = pi/(c*p)).
inline GramMatrix standard_hyperbolic(const LocalQuadExt& ext) {
    GramMatrix g(ext, 2);
    if (ext.splitting == Splitting::ramified) {
        Rational cp = Rational(ext.ramified_c) * ext.p;
        g.set(0, 1, FieldElement(Rational(0), Rational(1) / cp));  // pi^{-1}
    } else {
        g.set(0, 1, FieldElement::from_rational(ext, 1));
    }
    return g;
}

inline GramMatrix unit_rank_one(const LocalQuadExt& ext) {
    if (ext.splitting == Splitting::ramified) throw RamifiedUnsupported();
    GramMatrix g(ext, 1);
    g.set(0, 0, FieldElement::from_rational(ext, 1));
    return g;
}

inline GramMatrix identity_gram(const LocalQuadExt& ext, int n) {
    if (ext.splitting == Splitting::ramified) throw RamifiedUnsupported();
    GramMatrix g(ext, n);
    for (int i = 0; i < n; ++i) g.set(i, i, FieldElement::from_rational(ext, 1));
    return g;
}

inline GramMatrix scalar_gram(const LocalQuadExt& ext, const Rational& s) {
    GramMatrix g(ext, 1);
    g.set(0, 0, FieldElement::from_rational(ext, s));
    return g;
}

inline GramMatrix diagonal_gram(const LocalQuadExt& ext, const std::vector<Rational>& d) {
    GramMatrix g(ext, static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i)
        g.set(static_cast<int>(i), static_cast<int>(i), FieldElement::from_rational(ext, d[i]));
    return g;
}

inline GramMatrix direct_sum(const GramMatrix& A, const GramMatrix& B) {
    if (!(A.ext() == B.ext())) throw ContextMismatch();
    GramMatrix g(A.ext(), A.rank() + B.rank());
    for (int i = 0; i < A.rank(); ++i)
        for (int j = 0; j <= i; ++j) g.set(i, j, A.at(i, j));
    for (int i = 0; i < B.rank(); ++i)
        for (int j = 0; j <= i; ++j) g.set(A.rank() + i, A.rank() + j, B.at(i, j));
    return g;
}

// Membership in Herm_m(O)^*: integral diagonal, off-diagonal in d^{-1} O.
inline bool in_dual_star(const GramMatrix& b) {
    const auto& ext = b.ext();
    for (int i = 0; i < b.rank(); ++i) {
        if (!p_integral(rational_part(ext, b.at(i, i)), ext.p)) return false;
        for (int j = i + 1; j < b.rank(); ++j) {
            const FieldElement& x = b.at(i, j);
            if (ext.splitting == Splitting::ramified) {
                // pi * x integral <=> v_p(a) >= 0 and v_p(b) >= -1
                if (!p_integral(x.a, ext.p)) return false;
                if (!(x.b == 0) && val_p(x.b, ext.p) < -1) return false;
            } else {
                if (!is_integral(ext, x)) return false;
            }
        }
    }
    return true;
}

// tY^bar * G * Y for an exact change of basis (columns of Y in the model)
inline GramMatrix congruence(const GramMatrix& G,
                             const std::vector<FieldElement>& Y, int cols) {
    const auto& ext = G.ext();
    int n = G.rank();
    auto y = [&](int i, int j) { return Y[static_cast<size_t>(i) * cols + j]; };
    GramMatrix out(ext, cols);
    for (int i = 0; i < cols; ++i)
        for (int j = i; j < cols; ++j) {
            FieldElement s(0, 0);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    s = add(s, mul(ext, mul(ext, conj(ext, y(a, i)), G.at(a, b)), y(b, j)));
            out.set(i, j, s);
        }
    return out;
}

}  // namespace hermlab
