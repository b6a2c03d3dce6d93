#pragma once

#include "hermlab/density_poly.hpp"
#include "hermlab/weil_index.hpp"

#include <cmath>
#include <map>

namespace hermlab {

// Exact element of Q + sum Q*log(p); equality is decidable because the
// log p are Q-linearly independent.
struct LogLinear {
    Rational constant;
    std::map<long long, Rational> terms;

    LogLinear() : constant(0) {}
    explicit LogLinear(Rational c) : constant(std::move(c)) {}

    void add_term(long long p, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = terms.emplace(p, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
    LogLinear operator+(const LogLinear& o) const {
        LogLinear r = *this;
        r.constant += o.constant;
        for (const auto& [p, c] : o.terms) r.add_term(p, c);
        return r;
    }
    LogLinear operator-(const LogLinear& o) const {
        LogLinear r = *this;
        r.constant -= o.constant;
        for (const auto& [p, c] : o.terms) r.add_term(p, -c);
        return r;
    }
    LogLinear scaled(const Rational& f) const {
        LogLinear r;
        r.constant = constant * f;
        for (const auto& [p, c] : terms) r.add_term(p, c * f);
        return r;
    }
    bool operator==(const LogLinear& o) const { return constant == o.constant && terms == o.terms; }
    bool is_zero() const { return constant == 0 && terms.empty(); }

    double eval_double() const {
        double v = static_cast<double>(constant);
        for (const auto& [p, c] : terms) v += static_cast<double>(c) * std::log(static_cast<double>(p));
        return v;
    }
};

// value = mant * q^exp with rational exponent (kept exact; half-integer
// exponents arise from the q^{(1+s) ell} prefactor at half-integer s)
struct MonomialValue {
    Rational mant;
    Rational exp;
    long long q = 1;

    void fold() {
        // move the integer part of the exponent into the mantissa
        Integer num = numerator(exp), den = denominator(exp);
        Integer whole = num / den;
        if (num < 0 && num % den != 0) whole -= 1;
        if (whole != 0) {
            long e = static_cast<long>(whole);
            if (e > 0) mant *= Rational(pow_int(q, static_cast<unsigned long>(e)));
            else mant /= Rational(pow_int(q, static_cast<unsigned long>(-e)));
            exp -= Rational(whole);
        }
        if (mant == 0) exp = 0;
    }
    bool operator==(const MonomialValue& o) const {
        MonomialValue a = *this, b = o;
        a.fold();
        b.fold();
        return a.mant == b.mant && (a.mant == 0 || a.exp == b.exp);
    }
    double to_double() const {
        return static_cast<double>(mant) * std::pow(static_cast<double>(q), static_cast<double>(exp));
    }
};

// a + b*sqrt(q), exact
struct SqrtExtValue {
    Rational a, b;
    long long q = 1;

    SqrtExtValue mul(const SqrtExtValue& o) const {
        return {a * o.a + b * o.b * q, a * o.b + b * o.a, q};
    }
    SqrtExtValue div(const SqrtExtValue& o) const {
        Rational nrm = o.a * o.a - Rational(q) * o.b * o.b;
        if (nrm == 0) throw DenominatorVanishes();
        SqrtExtValue c{o.a, -o.b, q};
        SqrtExtValue prod = mul(c);
        return {prod.a / nrm, prod.b / nrm, q};
    }
    bool operator==(const SqrtExtValue& o) const { return a == o.a && b == o.b; }
    bool is_zero() const { return a == 0 && b == 0; }
};

// exact q^e for e with denominator dividing 2, as a + b sqrt(q)
inline SqrtExtValue sqrtext_power(long long q, const Rational& e) {
    auto [mant, half] = q_half_power(q, e);
    if (half == 0) return {mant, Rational(0), q};
    return {Rational(0), mant, q};
}

inline SqrtExtValue eval_poly_sqrtext(const DensityPolynomial& P, const SqrtExtValue& x) {
    SqrtExtValue v{Rational(0), Rational(0), x.q};
    for (auto it = P.coeffs.rbegin(); it != P.coeffs.rend(); ++it) {
        v = v.mul(x);
        v.a += *it;
    }
    return v;
}

// ---------------------------------------------------------------------------

// gamma_psi(V)^{-m} |det S|^m |Delta|^e with e = nm/2 + m(m-1)/4, returned as
// a fourth root of unity times an exact rational power of p.
struct RawWhittakerConstant {
    FourthRoot phase;
    Rational p_exponent;  // value = phase * p^{p_exponent}
    long long p = 0;
};

inline RawWhittakerConstant raw_whittaker_constant(const GramMatrix& S, int m) {
    const auto& ext = S.ext();
    const int n = S.rank();
    std::vector<WeilBlock> desc;
    if (ext.splitting == Splitting::split) {
        desc.push_back(herm_split_block(ext.p, n));
    } else {
        for (const auto& blk : detail::decompose_blocks(S)) {
            if (blk.kind == detail::SBlock::StdHyperbolic) {
                desc.push_back(herm_hyperbolic_block(ext.p, ext.splitting, 1));
            } else if (blk.kind == detail::SBlock::Scalar && ext.splitting == Splitting::inert &&
                       blk.scalar != 0 && val_p(blk.scalar, ext.p) == 0) {
                desc.push_back(herm_self_dual_unramified_block(ext.p, ext.splitting, 1));
            } else {
                throw WeilIndexUncovered("Gram block outside the lemma-covered space list");
            }
        }
    }
    RawWhittakerConstant out;
    out.p = ext.p;
    out.phase = weil_index(desc).pow(-m);
    Rational det = S.det();
    if (det == 0) throw std::invalid_argument("S must be nonsingular");
    long vdet = val_p(det, ext.p);
    Rational e = Rational(n) * m / 2 + Rational(m) * (m - 1) / 4;
    out.p_exponent = Rational(-vdet) * m - Rational(ext.different_exponent) * e;
    return out;
}

// ---------------------------------------------------------------------------

enum class DenomKind { self_dual_target, almost_self_dual_scalar };

// W*_{T}(s0 + s) = (q^{1+s})^{ell} * Den(S,T,X) / Den(S,T0,X) at X = q^{-2s},
// with T0 the standard self-dual (resp. almost self-dual) lattice of rank m
// and ell = v_q(det T) - v_q(det T0). Pinned by: W* = 1 identically for
// self-dual T; W*(s0) = 1 for almost self-dual T over ramified extensions;
// the rank-1 closed form over unramified extensions.
struct NormalizedWhittaker {
    DensityPolynomial numerator;
    DenomKind denominator_kind = DenomKind::self_dual_target;
    DensityPolynomial denom_poly;
    Rational denom_scalar;
    LocalQuadExt ext;
    int n = 0, m = 0;
    Rational s0;
    long long ell = 0;
    // numerator/denominator with the common polynomial factor cancelled;
    // evaluation uses these so removable zeros of the pair do not spoil points
    DensityPolynomial num_red, den_red;

    void reduce() {
        num_red = numerator;
        den_red = denom_poly;
        if (denominator_kind != DenomKind::self_dual_target) return;
        if (numerator.is_zero()) return;
        std::vector<Rational> g = poly_gcd(numerator.coeffs, denom_poly.coeffs);
        if (g.size() <= 1) return;
        num_red.coeffs = poly_divmod(numerator.coeffs, g).first;
        den_red.coeffs = poly_divmod(denom_poly.coeffs, g).first;
    }

    // exact value at global s with 2s integral
    MonomialValue eval_exact(const Rational& global_s) const {
        Rational t = global_s - s0;
        if (denominator(Rational(2) * t) != 1) throw std::domain_error("need 2s integral for exact evaluation");
        auto [xm, xh] = q_half_power(ext.q, Rational(-2) * t);
        (void)xh;  // -2t is integral
        Rational X = xm;
        Rational num = num_red.eval(X);
        Rational den = denominator_kind == DenomKind::self_dual_target ? den_red.eval(X) : denom_scalar;
        if (den == 0) throw DenominatorVanishes();
        MonomialValue v{num / den, (Rational(1) + t) * ell, ext.q};
        v.fold();
        return v;
    }

    // ratio W*(s0+s)/W*(s0-s) at quarter-integral s, exact in Q(sqrt q)
    SqrtExtValue probe_ratio(const Rational& s) const {
        Rational four_s = Rational(4) * s;
        if (denominator(four_s) != 1) throw std::domain_error("need 4s integral for the probe");
        SqrtExtValue X = sqrtext_power(ext.q, Rational(-2) * s);
        SqrtExtValue Xi = sqrtext_power(ext.q, Rational(2) * s);
        SqrtExtValue pref = sqrtext_power(ext.q, Rational(2) * s * ell);
        SqrtExtValue num_p = eval_poly_sqrtext(num_red, X);
        SqrtExtValue num_m = eval_poly_sqrtext(num_red, Xi);
        if (num_m.is_zero()) throw DenominatorVanishes();
        if (denominator_kind == DenomKind::almost_self_dual_scalar)
            return pref.mul(num_p).div(num_m);
        SqrtExtValue den_p = eval_poly_sqrtext(den_red, X);
        SqrtExtValue den_m = eval_poly_sqrtext(den_red, Xi);
        if (den_p.is_zero()) throw DenominatorVanishes();
        return pref.mul(num_p.div(den_p)).div(num_m.div(den_m));
    }
};

// Standard self-dual lattice of rank n (identity over unramified; hyperbolic
// planes over ramified, n even).
inline GramMatrix standard_self_dual(const LocalQuadExt& ext, int n) {
    if (ext.splitting != Splitting::ramified) return identity_gram(ext, n);
    if (n % 2 != 0) throw std::invalid_argument("ramified self-dual lattices have even rank");
    GramMatrix g(ext, 0);
    for (int i = 0; i < n / 2; ++i) g = direct_sum(g, standard_hyperbolic(ext));
    return g;
}

// Standard almost self-dual lattice of rank m over a ramified extension.
inline GramMatrix standard_almost_self_dual(const LocalQuadExt& ext, int m) {
    if (ext.splitting != Splitting::ramified || m % 2 == 0)
        throw std::invalid_argument("almost self-dual normalization is the ramified odd-rank case");
    GramMatrix g = scalar_gram(ext, 1);
    for (int i = 0; i < (m - 1) / 2; ++i) g = direct_sum(g, standard_hyperbolic(ext));
    return g;
}

inline NormalizedWhittaker normalize(const GramMatrix& S, const GramMatrix& T,
                                     const EngineOptions& opts = {}) {
    const auto& ext = S.ext();
    const int n = S.rank(), m = T.rank();
    if (m > n) throw std::invalid_argument("rank T must be <= rank S");
    NormalizedWhittaker W;
    W.ext = ext;
    W.n = n;
    W.m = m;
    W.s0 = Rational(n - m, 2);
    W.numerator = interpolate(S, T, -1, opts);
    Rational detT = T.det();
    if (ext.splitting != Splitting::ramified || m % 2 == 0) {
        GramMatrix T0 = standard_self_dual(ext, m);
        W.denominator_kind = DenomKind::self_dual_target;
        W.denom_poly = interpolate(S, T0, -1, opts);
        W.ell = detT == 0 ? 0 : val_p(detT, ext.p) - (T0.rank() ? val_p(T0.det(), ext.p) : 0);
    } else {
        GramMatrix T0 = standard_almost_self_dual(ext, m);
        W.denominator_kind = DenomKind::almost_self_dual_scalar;
        W.denom_scalar = local_density(S, T0, opts).value;
        W.ell = detT == 0 ? 0 : val_p(detT, ext.p) - val_p(T0.det(), ext.p);
    }
    W.reduce();
    return W;
}

// ---------------------------------------------------------------------------

// W*_{j,p}(s) = p^{v(s+1/2)} sigma_{-2s}(p^v) with v = v_p(j); the n=2, m=1
// local coefficient over unramified p.
struct Rank1ClosedForm {
    long long p = 0;
    int v = 0;

    MonomialValue eval_exact(const Rational& s) const {
        if (denominator(Rational(2) * s) != 1) throw std::domain_error("need 2s integral");
        Rational sigma = 0;
        for (int i = 0; i <= v; ++i) {
            auto [mi, hi] = q_half_power(p, Rational(-2) * s * i);
            (void)hi;
            sigma += mi;
        }
        MonomialValue out{sigma, Rational(v) * (s + Rational(1, 2)), p};
        out.fold();
        return out;
    }
    double eval_double(double s) const {
        double sigma = 0;
        for (int i = 0; i <= v; ++i) sigma += std::pow(static_cast<double>(p), -2.0 * s * i);
        return std::pow(static_cast<double>(p), v * (s + 0.5)) * sigma;
    }
};

inline Rank1ClosedForm rank1_closed_form(long long j, long long p, const LocalQuadExt& ext) {
    if (ext.splitting == Splitting::ramified) throw RamifiedUnsupported();
    if (j == 0) throw std::invalid_argument("j must be nonzero");
    Integer J = j < 0 ? Integer(-j) : Integer(j);
    return Rank1ClosedForm{p, static_cast<int>(val_p(J, p))};
}

// d/ds of W*(s) at global s = s_star, exact, as an element of Q*log p:
//   d/ds [ (q^{1+t})^ell N(X)/D(X) ] = ln q [ ell W*(t) - 2 X pref (N'D - N D')/D^2 ]
// with t = s_star - s0 and X = q^{-2t}.
inline LogLinear whittaker_derivative(const NormalizedWhittaker& W, const Rational& s_star) {
    Rational t = s_star - W.s0;
    Rational exp_pref = (Rational(1) + t) * W.ell;
    if (denominator(t) != 1 || denominator(exp_pref) != 1)
        throw std::domain_error("exact derivative needs integral offset and prefactor exponent");
    auto [X, xh] = q_half_power(W.ext.q, Rational(-2) * t);
    (void)xh;
    auto [pref, ph] = q_half_power(W.ext.q, exp_pref);
    (void)ph;
    Rational Nv = W.num_red.eval(X);
    Rational Np = W.num_red.derivative().eval(X);
    Rational Dv, Dp;
    if (W.denominator_kind == DenomKind::self_dual_target) {
        Dv = W.den_red.eval(X);
        Dp = W.den_red.derivative().eval(X);
    } else {
        Dv = W.denom_scalar;
        Dp = 0;
    }
    if (Dv == 0) throw DenominatorVanishes();
    Rational wstar = pref * Nv / Dv;
    Rational coeff = Rational(W.ell) * wstar - Rational(2) * X * pref * (Np * Dv - Nv * Dp) / (Dv * Dv);
    LogLinear out;
    out.add_term(W.ext.q, coeff);
    return out;
}

// Ratios W*(s0+s)/W*(s0-s) at the sampled s; callers assert constancy.
inline std::vector<SqrtExtValue> functional_equation_probe(const NormalizedWhittaker& W,
                                                           const std::vector<Rational>& s_samples) {
    std::vector<SqrtExtValue> out;
    out.reserve(s_samples.size());
    for (const auto& s : s_samples) out.push_back(W.probe_ratio(s));
    return out;
}

}  // namespace hermlab
