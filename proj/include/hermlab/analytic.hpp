#pragma once

#include "hermlab/field_data.hpp"
#include "hermlab/weil_index.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <optional>

namespace hermlab {

using Real = boost::multiprecision::mpfr_float_100;

inline Real real_pi() {
    static const Real pi = boost::math::constants::pi<Real>();
    return pi;
}

inline Real machine_rel() {
    static const Real eps("1e-92");
    return eps;
}

// High-precision complex number with a conservative absolute error bound.
struct ComplexValue {
    Real re{0}, im{0}, err{0};

    ComplexValue() = default;
    ComplexValue(Real r, Real i = Real(0), Real e = Real(0))
        : re(std::move(r)), im(std::move(i)), err(std::move(e)) {}
    static ComplexValue from_real(const Real& r) { return {r, Real(0), abs(r) * machine_rel()}; }
    static ComplexValue from_fourth_root(const FourthRoot& f) {
        switch (f.e) {
            case 0: return {Real(1), Real(0), Real(0)};
            case 1: return {Real(0), Real(1), Real(0)};
            case 2: return {Real(-1), Real(0), Real(0)};
            default: return {Real(0), Real(-1), Real(0)};
        }
    }

    Real norm() const { return sqrt(re * re + im * im); }

    ComplexValue operator+(const ComplexValue& o) const {
        return {re + o.re, im + o.im, err + o.err + (norm() + o.norm()) * machine_rel()};
    }
    ComplexValue operator-(const ComplexValue& o) const {
        return {re - o.re, im - o.im, err + o.err + (norm() + o.norm()) * machine_rel()};
    }
    ComplexValue operator*(const ComplexValue& o) const {
        Real r = re * o.re - im * o.im;
        Real i = re * o.im + im * o.re;
        Real e = norm() * o.err + o.norm() * err + err * o.err;
        return {r, i, e + (abs(r) + abs(i)) * machine_rel()};
    }
    ComplexValue operator/(const ComplexValue& o) const {
        Real d = o.re * o.re + o.im * o.im;
        if (d == 0) throw PoleEncountered("division by zero");
        Real r = (re * o.re + im * o.im) / d;
        Real i = (im * o.re - re * o.im) / d;
        Real mag = sqrt(d);
        Real e = err / mag + norm() * o.err / d + (abs(r) + abs(i)) * machine_rel();
        return {r, i, e};
    }
    ComplexValue operator-() const { return {-re, -im, err}; }
};

inline Real abs_diff(const ComplexValue& a, const ComplexValue& b) {
    return (a - b).norm();
}

// ---- Gamma ------------------------------------------------------------------

inline Real gamma_real(const Real& x) {
    Real nearest = round(x);
    if (nearest <= 0 && abs(x - nearest) < Real("1e-40"))
        throw PoleEncountered("Gamma pole at nonpositive integer");
    return tgamma(x);
}

inline ComplexValue gamma_cv(const Real& x) { return ComplexValue::from_real(gamma_real(x)); }

// ---- Hurwitz zeta via Euler-Maclaurin ---------------------------------------

// zeta(s,x) - 1/(s-1): the pole-free part, entire in s for x > 0; continues
// through negative s as long as s + 2*terms + 1 > 1 (always, 40 terms).
inline ComplexValue hurwitz_zeta_star(const Real& s, const Real& x) {
    if (x <= 0) throw std::domain_error("hurwitz zeta needs x > 0");
    const int N = 120;
    const int max_terms = 40;
    Real acc = 0;
    for (int j = 0; j < N; ++j) acc += pow(x + j, -s);
    Real xN = x + N;
    // (x+N)^{1-s}/(s-1) - 1/(s-1) = -expm1((1-s) log(x+N)) / (1-s), = -log at s=1
    Real L = log(xN);
    if (s == 1) acc -= L;
    else acc -= expm1((1 - s) * L) / (1 - s);
    acc += pow(xN, -s) / 2;
    // sum_{i>=1} B_{2i}/(2i)! (s)_{2i-1} (x+N)^{-s-2i+1}
    Real poch = s;  // (s)_1
    Real tail_bound = 0;
    for (int i = 1; i <= max_terms; ++i) {
        Real b2i = boost::math::bernoulli_b2n<Real>(i);
        Real fact = 1;
        for (int t = 2; t <= 2 * i; ++t) fact *= t;
        Real term = b2i / fact * poch * pow(xN, -s - (2 * i - 1));
        acc += term;
        tail_bound = abs(term);
        if (tail_bound < abs(acc) * machine_rel() && i > 4) break;
        poch *= (s + (2 * i - 1)) * (s + 2 * i);  // advance to (s)_{2i+1}
    }
    return {acc, Real(0), tail_bound + (abs(acc) + 1) * machine_rel() * N};
}

inline ComplexValue hurwitz_zeta(const Real& s, const Real& x) {
    if (abs(s - 1) < Real("1e-40")) throw PoleAtOne();
    ComplexValue star = hurwitz_zeta_star(s, x);
    return star + ComplexValue::from_real(1 / (s - 1));
}

inline ComplexValue riemann_zeta(const Real& s) { return hurwitz_zeta(s, Real(1)); }

// ---- Dirichlet L -------------------------------------------------------------

// L(s, chi) for chi the Kronecker character of a fundamental discriminant,
// via L(s,chi) = |D|^{-s} sum_{a=1}^{|D|} chi(a) zeta(s, a/|D|);
// delta absent = trivial character (Riemann zeta), pole at s=1.
// The character sum over a full period vanishes, so the pole-free zeta_star
// may be used termwise, making L(1, chi) directly computable.
inline ComplexValue dirichlet_L(const Real& s, std::optional<Discriminant> delta = std::nullopt) {
    if (!delta) return riemann_zeta(s);
    long long D = -delta->delta;
    ComplexValue acc;
    for (long long a = 1; a <= D; ++a) {
        int chi = kronecker(delta->delta, a);
        if (chi == 0) continue;
        ComplexValue z = hurwitz_zeta_star(s, Real(a) / Real(D));
        acc = chi == 1 ? acc + z : acc - z;
    }
    return acc * ComplexValue::from_real(pow(Real(D), -s));
}

// L(s, eta^j): trivial for even j, Kronecker character for odd j
inline ComplexValue L_eta_power(const Real& s, const Discriminant& delta, long long j) {
    if (j % 2 == 0) return riemann_zeta(s);
    return dirichlet_L(s, delta);
}

// ---- global normalizing factor ----------------------------------------------

// Lambda_m(s)^o_n over F^+ = Q:
//   (2 pi)^{m(m-1)/2} (-2 pi i)^{-nm} pi^{m(s0 - s)}
//   * |D|^{m(m-1)/4} |D|^{floor(m/2)(s+s0)}
//   * prod_{j=0}^{m-1} Gamma(s - s0 + n - j) L(2s + m - j, eta^{j+n})
// with s0 = (n-m)/2.
inline ComplexValue lambda_factor(int m, int n, const Real& s, const Discriminant& delta) {
    if (m == 0) return ComplexValue::from_real(Real(1));
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    Real s0 = Real(n - m) / 2;
    Real absD = Real(-delta.delta);
    Real pi = real_pi();

    Real mag = pow(2 * pi, Real(m * (m - 1)) / 2) * pow(2 * pi, Real(-n * m));
    mag *= pow(pi, Real(m) * (s0 - s));
    mag *= pow(absD, Real(m * (m - 1)) / 4);
    mag *= pow(absD, Real(m / 2) * (s + s0));
    ComplexValue out = ComplexValue::from_real(mag) *
                       ComplexValue::from_fourth_root(FourthRoot(n * m));  // (-i)^{-nm} = i^{nm}
    for (int j = 0; j < m; ++j) {
        out = out * gamma_cv(s - s0 + n - j);
        out = out * L_eta_power(2 * s + m - j, delta, j + n);
    }
    return out;
}

// Lambda_n(s)^o_n = |D|^{n/2 (s-1)} prod_{j=1}^n |D|^{j/2} Gamma(s+j) L(2s+j, eta^j)
//                   / (2^j pi^{s+j}),  n even
inline ComplexValue closed_form_volume(int n, const Real& s, const Discriminant& delta) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("closed form needs even n >= 2");
    Real absD = Real(-delta.delta);
    Real pi = real_pi();
    ComplexValue out = ComplexValue::from_real(pow(absD, Real(n) / 2 * (s - 1)));
    for (int j = 1; j <= n; ++j) {
        Real mag = pow(absD, Real(j) / 2) / (pow(Real(2), Real(j)) * pow(pi, s + j));
        out = out * ComplexValue::from_real(mag) * gamma_cv(s + j);
        out = out * L_eta_power(2 * s + j, delta, j);
    }
    return out;
}

// Lambda_n(s)/Lambda_{n-1}(s+1/2) both ways (n = 2 mod 4):
// via lambda_factor and via -1/2 L(2s+1,eta) Gamma(s+1) |D|^{s+1/2} pi^{-s-1}
struct CorankRatio {
    ComplexValue via_lambda;
    ComplexValue closed_form;
};

inline CorankRatio corank1_ratio(int n, const Real& s, const Discriminant& delta) {
    if (n % 4 != 2) throw std::invalid_argument("sign convention needs n = 2 mod 4");
    CorankRatio r;
    r.via_lambda = lambda_factor(n, n, s, delta) / lambda_factor(n - 1, n, s + Real(1) / 2, delta);
    Real absD = Real(-delta.delta);
    Real pi = real_pi();
    ComplexValue cf = ComplexValue::from_real(-pow(absD, s + Real(1) / 2) * pow(pi, -s - 1) / 2);
    cf = cf * dirichlet_L(2 * s + 1, delta) * gamma_cv(s + 1);
    r.closed_form = cf;
    return r;
}

inline Real to_real(const Rational& r) {
    return Real(numerator(r).str()) / Real(denominator(r).str());
}

// recorded CM height constant: (d/ds corank ratio)|_0 = 2 (h/w) h^CM
inline Real h_cm_from_ratio(int n, const Discriminant& delta) {
    Real h("1e-6");
    ComplexValue up = corank1_ratio(n, h, delta).via_lambda;
    ComplexValue dn = corank1_ratio(n, -h, delta).via_lambda;
    Real deriv = (up.re - dn.re) / (2 * h);
    Rational hw(class_number(delta), unit_count(delta));
    return deriv / (2 * to_real(hw));
}

// ---- Archimedean intertwining consistency ------------------------------------

// L_inf(s, sgn^j) = pi^{-(s+d)/2} Gamma((s+d)/2), d = j mod 2
inline ComplexValue arch_L(const Real& s, int parity) {
    Real d = parity % 2 == 0 ? Real(0) : Real(1);
    return ComplexValue::from_real(pow(real_pi(), -(s + d) / 2)) * gamma_cv((s + d) / 2);
}

// eps_inf(s, sgn^j, conj psi) = 1 (j even), -i (j odd)
inline ComplexValue arch_eps(int parity) {
    if (parity % 2 == 0) return ComplexValue::from_real(Real(1));
    return ComplexValue{Real(0), Real(-1), Real(0)};
}

struct IntertwiningPair {
    ComplexValue lemma_coefficient;
    ComplexValue shimura_coefficient;
};

inline IntertwiningPair shimura_intertwining_check(int m, int n, const Real& s) {
    Real s0 = Real(n - m) / 2;
    Real pi = real_pi();
    // lemma form
    ComplexValue A = ComplexValue::from_real(pow(pi, 2 * Real(m) * s));
    A = A * ComplexValue::from_fourth_root(FourthRoot(2 * n * m + m * (m - 1) / 2));  // (-1)^{nm} i^{m(m-1)/2}
    for (int j = 0; j < m; ++j) {
        int parity = (n + j) % 2;
        ComplexValue num = arch_L(2 * s + j - m + 1, parity) * gamma_cv(-s - s0 + n - j);
        ComplexValue den = arch_eps(parity) * arch_L(-2 * s - j + m, parity) * gamma_cv(s - s0 + n - j);
        A = A * (num / den);
    }
    // Shimura's form
    ComplexValue B = ComplexValue::from_fourth_root(FourthRoot(-m * n));
    Real mag = pow(2 * pi, Real(m) * m) * pow(pi, -Real(m * (m - 1)) / 2) /
               pow(Real(2), Real(m * (m - 1)) / 2 + 2 * Real(m) * s);
    B = B * ComplexValue::from_real(mag);
    for (int j = 0; j < m; ++j) {
        B = B * gamma_cv(2 * s - j);
        B = B / gamma_cv(s - s0 + n - j);
        B = B / gamma_cv(s - s0 - j);
    }
    return {A, B};
}

// ---- volume chain -------------------------------------------------------------

// BH21 bracket at s = 0 with eps(V_l) = 1; with self_dual_trace_level the
// change-of-level Lemma (ratio (1+l^{n/2})/2 per ramified prime) converts the
// Hermitian-self-dual level to the trace-self-dual level, which divides the
// complex volume by that factor.
inline ComplexValue shimura_volume(int n, const Discriminant& delta, bool self_dual_trace_level) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("even n required");
    Real absD = Real(-delta.delta);
    Real pi = real_pi();
    long long o = ramified_prime_count(delta);
    ComplexValue out = ComplexValue::from_real(pow(Real(2), Real(1 - o)));
    for (long long l : ramified_primes(delta))
        out = out * ComplexValue::from_real(1 + pow(Real(l), -Real(n) / 2));
    for (int j = 1; j <= n; ++j) {
        Real mag = pow(absD, Real(j) / 2) / (pow(Real(2), Real(j)) * pow(pi, Real(j)));
        out = out * ComplexValue::from_real(mag) * gamma_cv(Real(j));
        out = out * L_eta_power(Real(j), delta, j);
    }
    if (self_dual_trace_level)
        for (long long l : ramified_primes(delta))
            out = out / ComplexValue::from_real((1 + pow(Real(l), Real(n) / 2)) / 2);
    return out;
}

}  // namespace hermlab
