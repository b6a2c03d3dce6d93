#pragma once

#include "hermlab/analytic.hpp"
#include "hermlab/whittaker.hpp"

#include <functional>

namespace hermlab {

// sigma_k(j) = sum over divisors d | j of d^k (k may be negative)
inline Rational sigma(long long k, long long j) {
    if (j < 1) throw std::invalid_argument("j must be >= 1");
    Rational s = 0;
    for (long long d = 1; d * d <= j; ++d) {
        if (j % d != 0) continue;
        long long e = j / d;
        auto powk = [&](long long base) {
            Rational r = Rational(pow_int(base, static_cast<unsigned long>(k < 0 ? -k : k)));
            return k < 0 ? Rational(1) / r : r;
        };
        s += powk(d);
        if (e != d) s += powk(e);
    }
    return s;
}

inline std::vector<std::pair<long long, int>> factorize(long long j) {
    std::vector<std::pair<long long, int>> out;
    for (long long f = 2; f * f <= j; ++f)
        if (j % f == 0) {
            int e = 0;
            while (j % f == 0) { j /= f; ++e; }
            out.emplace_back(f, e);
        }
    if (j > 1) out.emplace_back(j, 1);
    return out;
}

// deg T_j = sigma_1(j); Faltings-height delta
// (1/2) d/ds|_{s=1/2} j^{s+1/2} sigma_{-2s}(j) = (1/2) sum_{d|j} (j/d) ln(j/d^2)
struct HeckeFaltings {
    Integer degree;
    LogLinear height_delta;
};

inline HeckeFaltings hecke_faltings(long long j) {
    if (j < 1) throw std::invalid_argument("j must be >= 1");
    HeckeFaltings out;
    Rational deg = sigma(1, j);
    out.degree = numerator(deg);
    auto fac = factorize(j);
    for (long long d = 1; d <= j; ++d) {
        if (j % d != 0) continue;
        // (1/2) (j/d) * ln(j/d^2), expanded into prime logarithms
        Rational w = Rational(j / d, 2);
        for (auto [p, e] : fac) {
            (void)e;
            long vp = val_p(Integer(j), p) - 2 * val_p(Integer(d), p);
            if (vp != 0) out.height_delta.add_term(p, w * vp);
        }
    }
    return out;
}

// ---- finite Whittaker products ----------------------------------------------

// exact product of local monomial values: mant * prod_p p^{exp_p}
struct PrimePowerProduct {
    Rational mant = Rational(1);
    std::map<long long, Rational> exps;

    void mul(const MonomialValue& v) {
        MonomialValue w = v;
        w.fold();
        mant *= w.mant;
        if (w.exp != 0) {
            auto [it, fresh] = exps.emplace(w.q, w.exp);
            if (!fresh) {
                it->second += w.exp;
                if (it->second == 0) exps.erase(it);
            }
        }
        if (mant == 0) exps.clear();
    }
    void fold_all() {
        for (auto it = exps.begin(); it != exps.end();) {
            MonomialValue m{Rational(1), it->second, it->first};
            m.fold();
            mant *= m.mant;
            if (m.exp == 0) it = exps.erase(it);
            else { it->second = m.exp; ++it; }
        }
    }
    bool operator==(const PrimePowerProduct& o) const {
        PrimePowerProduct a = *this, b = o;
        a.fold_all();
        b.fold_all();
        return a.mant == b.mant && a.exps == b.exps;
    }
    double to_double() const {
        double v = static_cast<double>(mant);
        for (const auto& [p, e] : exps) v *= std::pow(static_cast<double>(p), static_cast<double>(e));
        return v;
    }
};

// Finite part of a normalized Fourier coefficient: local Whittaker factors at
// the primes dividing 2 * delta * num(det T) * den(det T), the constant 1
// elsewhere. T is given by rational entries (conjugation-fixed matrix).
struct CoefficientSeries {
    std::map<long long, NormalizedWhittaker> local;
    long long delta = 0;
    int n = 0, m = 0;

    // product over finite places at global s with 2s integral
    PrimePowerProduct eval_exact(const Rational& s) const {
        PrimePowerProduct out;
        for (const auto& [p, W] : local) out.mul(W.eval_exact(s));
        return out;
    }
};

inline CoefficientSeries finite_coefficient(const std::vector<Rational>& T_diag,
                                            const Discriminant& delta, int n,
                                            const EngineOptions& opts = {}) {
    const int m = static_cast<int>(T_diag.size());
    if (m > n) throw std::invalid_argument("rank T must be <= n");
    Rational det = 1;
    for (const auto& d : T_diag) det *= d;
    if (det == 0) throw std::invalid_argument("T must be nonsingular");

    std::vector<long long> primes;
    Integer support = 2 * Integer(-delta.delta) * numerator(det) * denominator(det);
    for (auto [p, e] : factorize(static_cast<long long>(abs(support)))) {
        (void)e;
        primes.push_back(p);
    }

    CoefficientSeries series;
    series.delta = delta.delta;
    series.n = n;
    series.m = m;
    for (long long p : primes) {
        LocalQuadExt ext = classify_prime(delta, p);
        GramMatrix S = standard_self_dual(ext, n);
        GramMatrix T(ext, m);
        for (int i = 0; i < m; ++i) T.set(i, i, FieldElement::from_rational(ext, T_diag[static_cast<size_t>(i)]));
        series.local.emplace(p, normalize(S, T, opts));
    }
    return series;
}

// |j|^{s+1/2} sigma_{-2s}(|j|), the global rank-1 closed form
inline PrimePowerProduct global_rank1_exact(long long j, const Rational& s) {
    if (j == 0) throw std::invalid_argument("j must be nonzero");
    long long aj = j < 0 ? -j : j;
    PrimePowerProduct out;
    for (auto [p, v] : factorize(aj)) {
        Rank1ClosedForm cf{p, v};
        out.mul(cf.eval_exact(s));
    }
    return out;
}

inline Real global_rank1_real(long long j, const Real& s) {
    long long aj = j < 0 ? -j : j;
    Real sigma_v = 0;
    for (long long d = 1; d <= aj; ++d)
        if (aj % d == 0) sigma_v += pow(Real(d), -2 * s);
    return pow(Real(aj), s + Real(1) / 2) * sigma_v;
}

// ---- corank-1 unfolding -------------------------------------------------------

// |det a#|^{s-s0} [Lam_m(s)/Lam_{m-1}(s+1/2)] flat(s+1/2)
//   + (-1)^e |det a#|^{-s-s0} [Lam_m(-s)/Lam_{m-1}(-s+1/2)] flat(s-1/2),
// e = m(m-1)(n-m-1)/2 - (m-1)(m-2)(n-m)/2
inline ComplexValue corank1_unfold(int n, int m, const Discriminant& delta,
                                   const Real& a_sharp_norm,
                                   const std::function<ComplexValue(const Real&)>& flat,
                                   const Real& s) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    const int mf = m - 1;
    Real s0 = Real(n - m) / 2;
    long long e2 = static_cast<long long>(m) * (m - 1) * (n - m - 1) -
                   static_cast<long long>(mf) * (mf - 1) * (n - mf - 1);
    if (e2 % 2 != 0) throw std::logic_error("sign exponent is not integral");
    long long e = e2 / 2;
    ComplexValue up = lambda_factor(m, n, s, delta) / lambda_factor(mf, n, s + Real(1) / 2, delta);
    ComplexValue dn = lambda_factor(m, n, -s, delta) / lambda_factor(mf, n, -s + Real(1) / 2, delta);
    ComplexValue first = ComplexValue::from_real(pow(a_sharp_norm, s - s0)) * up * flat(s + Real(1) / 2);
    ComplexValue second = ComplexValue::from_real(pow(a_sharp_norm, -s - s0)) * dn * flat(s - Real(1) / 2);
    if (e % 2 != 0) second = -second;
    return first + second;
}

}  // namespace hermlab
