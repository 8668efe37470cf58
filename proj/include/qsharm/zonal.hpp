#pragma once

#include "harmonic.hpp"
#include "montecarlo.hpp"
#include "special.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace qsharm {

// ---------------------------------------------------------------------------
// closed-form zonal kernels

// coeff * s^s_pow * t^t_pow * r^r_pow, with s = Re<x,e>, t = |<x,e>|^2, r = |x|^2
struct ZonalTerm {
    int s_pow = 0, t_pow = 0, r_pow = 0;
    mpq_class coeff;
};

inline mpq_class zonal_constant(int n, int h, int m)
{
    const long N = n;
    mpq_class c(mpz_class(h - 2 * m + 1) * (h + 2 * N - 1) * binomial(h - m + 2 * N - 2, 2 * N - 3), mpz_class((2 * N - 2) * (2 * N - 1)));
    c.canonicalize();
    return c;
}

// Z_{h,m} in the generators s, t, r. Empty outside I_Q.
inline std::vector<ZonalTerm> zonal_terms(int n, int h, int m)
{
    require_n(n);
    if (!SpectralIndex::valid(h, m)) return {};
    const int q = h - 2 * m;
    const mpq_class k = zonal_constant(n, h, m);
    const auto g = jacobi_G(m, 2 * n - 3, q + 1);
    std::map<std::array<int, 3>, mpq_class> acc;
    for (int j = 0; 2 * j <= q; ++j) {
        mpq_class u(binomial(q - j, j) * (mpz_class(1) << static_cast<unsigned>(q - 2 * j)));
        if (j % 2) u = -u;
        for (int l = 0; l <= m; ++l) {
            const auto& gl = g.coeff(l);
            if (sgn(gl) == 0) continue;
            acc[{q - 2 * j, j + l, m - l}] += k * u * gl;
        }
    }
    std::vector<ZonalTerm> out;
    for (const auto& [e, c] : acc)
        if (sgn(c) != 0) out.push_back({e[0], e[1], e[2], c});
    return out;
}

// Float evaluator for Z_{h,m} in (s, t, r): t^{q/2} U_q(s/sqrt t) and r^m G_m(t/r)
// by three-term recurrences, coefficients precomputed.
class ZonalEvaluator {
public:
    ZonalEvaluator(int n, int h, int m) : q_(h - 2 * m)
    {
        require_n(n);
        if (!SpectralIndex::valid(h, m)) return;
        k_ = zonal_constant(n, h, m).get_d();
        for (int j = 0; j < m; ++j) {
            auto c = jacobi_three_term(j, 2 * n - 3, q_ + 1);
            rec_.push_back({c.up.get_d(), c.mid.get_d(), c.down.get_d()});
        }
    }

    double operator()(double s, double t, double r = 1.0) const
    {
        if (k_ == 0) return 0.0;
        // W_{k+1} = 2s W_k - t W_{k-1}
        double w0 = 1, w1 = 2 * s;
        double uq = q_ == 0 ? 1.0 : w1;
        for (int k = 1; k < q_; ++k) {
            double w2 = 2 * s * w1 - t * w0;
            w0 = w1;
            w1 = w2;
            uq = w1;
        }
        // V_k = r^k G_k(t/r): t V_k = up V_{k+1} + mid r V_k + down r^2 V_{k-1}
        double vprev = 0, v = 1;
        for (const auto& c : rec_) {
            double vn = ((t - c[1] * r) * v - c[2] * r * r * vprev) / c[0];
            vprev = v;
            v = vn;
        }
        return k_ * uq * v;
    }

private:
    int q_;
    double k_ = 0;
    std::vector<std::array<double, 3>> rec_;
};

inline double zonal_eval(int n, int h, int m, double s, double t, double r = 1.0)
{
    return ZonalEvaluator(n, h, m)(s, t, r);
}

struct ZonalClosedForm {
    int n = 2;
    int h = 0, m = 0;
    std::vector<ZonalTerm> terms;
    Poly poly{2};

    double evaluate(double s, double t, double r = 1.0) const
    {
        double acc = 0;
        for (const auto& z : terms) acc += z.coeff.get_d() * std::pow(s, z.s_pow) * std::pow(t, z.t_pow) * std::pow(r, z.r_pow);
        return acc;
    }
    template <class S>
    double evaluate(const HPoint<S>& x, const HPoint<S>& y) const
    {
        auto ip = hermitian_inner(x, y);
        return evaluate(to_double(ip.a), to_double(ip.norm2()), to_double(hermitian_inner(x, x).a));
    }
};

namespace detail {

// The four real components of <x,e> = sum_j x_j conj(e_j), as linear polynomials in x.
inline std::array<Poly, 4> inner_components(const HPoint<mpq_class>& e)
{
    const int n = e.n();
    std::array<Poly, 4> out{Poly(n), Poly(n), Poly(n), Poly(n)};
    for (int j = 0; j < n; ++j) {
        const auto q = e.coords[static_cast<std::size_t>(j)].conj();
        for (int k = 0; k < 4; ++k) {
            Quaternion<mpq_class> u;
            (k == 0 ? u.a : k == 1 ? u.b : k == 2 ? u.c : u.d) = 1;
            auto p = u * q;
            const mpq_class comp[4] = {p.a, p.b, p.c, p.d};
            for (int l = 0; l < 4; ++l)
                if (sgn(comp[l]) != 0) out[static_cast<std::size_t>(l)] += ComplexRational(comp[l]) * Poly::variable(n, 4 * j + k);
        }
    }
    return out;
}

inline std::vector<Poly> powers(const Poly& p, int k)
{
    std::vector<Poly> out{Poly::constant(p.n(), 1)};
    for (int j = 1; j <= k; ++j) out.push_back(out.back() * p);
    return out;
}

} // namespace detail

// Z_{h,m}(., e) expanded as a polynomial in x. Off I_Q: the zero function.
inline ZonalClosedForm zonal_Z(int n, int h, int m, const SpherePoint<mpq_class>& e)
{
    require_n(n);
    if (e.n() != n) throw std::invalid_argument("zonal_Z: dimension mismatch");
    ZonalClosedForm z;
    z.n = n;
    z.h = h;
    z.m = m;
    z.terms = zonal_terms(n, h, m);
    z.poly = Poly(n);
    if (z.terms.empty()) return z;
    auto c = detail::inner_components(e.point());
    Poly t = c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3];
    auto sp = detail::powers(c[0], h);
    auto tp = detail::powers(t, h / 2);
    auto rp = detail::powers(Poly::norm2(n), m);
    for (const auto& term : z.terms) {
        Poly p = sp[static_cast<std::size_t>(term.s_pow)] * tp[static_cast<std::size_t>(term.t_pow)];
        p = p * rp[static_cast<std::size_t>(term.r_pow)];
        z.poly += ComplexRational(term.coeff) * p;
    }
    return z;
}

inline ZonalClosedForm zonal_Z(int n, int h, int m)
{
    return zonal_Z(n, h, m, SpherePoint<mpq_class>::basis(n));
}

// ---------------------------------------------------------------------------
// recurrence for multiplication by |<x,y>|^2

struct RecurrenceCoeffs {
    mpq_class c_up, c_mid, c_down;
};

// t Z_{h,m} = c_mid Z_{h,m} + c_up Z_{h+2,m+1} + c_down Z_{h-2,m-1} on the sphere.
inline RecurrenceCoeffs recurrence_coeffs(int n, int h, int m)
{
    require_n(n);
    SpectralIndex idx(h, m);
    const long N = n;
    auto q = [](const mpz_class& a, const mpz_class& b) {
        mpq_class v(a, b);
        v.canonicalize();
        return v;
    };
    RecurrenceCoeffs r;
    r.c_up = q(mpz_class(m + 1) * (h - m + 2), mpz_class(h + 2 * N) * (h + 2 * N + 1));
    r.c_mid = mpq_class(1, 2) * (1 - q(mpz_class(2 * N - 4 - h + 2 * m) * (h - 2 * m + 2 * N - 2), mpz_class(h + 2 * N) * (h + 2 * N - 2)));
    r.c_down = m < 1 ? mpq_class(0) : q(mpz_class(m + 2 * N - 3) * (h - m + 2 * N - 2), mpz_class(h + 2 * N - 3) * (h + 2 * N - 2));
    return r;
}

// ---------------------------------------------------------------------------
// kernel polynomials sum a_{h,m} Z_{h,m}

template <class S>
struct KernelPoly {
    int n = 2;
    std::map<SpectralIndex, S> coeffs;

    KernelPoly() = default;
    explicit KernelPoly(int n_) : n(n_) { require_n(n); }
    static KernelPoly delta(int n, SpectralIndex i, const S& v = S(1))
    {
        KernelPoly k(n);
        k.add(i, v);
        return k;
    }

    void add(const SpectralIndex& i, const S& v)
    {
        auto& c = coeffs[i];
        c += v;
        if (c == S(0)) coeffs.erase(i);
    }
    S coeff(const SpectralIndex& i) const
    {
        auto it = coeffs.find(i);
        return it == coeffs.end() ? S(0) : it->second;
    }
    bool is_zero() const { return coeffs.empty(); }
    friend bool operator==(const KernelPoly&, const KernelPoly&) = default;
};

using KernelPolyQ = KernelPoly<ComplexRational>;
using KernelPolyF = KernelPoly<std::complex<double>>;

namespace detail {

template <class S>
S from_rational(const mpq_class& q)
{
    if constexpr (std::is_same_v<S, ComplexRational>) return ComplexRational(q);
    else return S(q.get_d());
}

template <class S>
using real_of_t = std::conditional_t<std::is_same_v<S, ComplexRational>, mpq_class, double>;

template <class S>
real_of_t<S> abs2(const S& v)
{
    if constexpr (std::is_same_v<S, ComplexRational>) return v.norm2();
    else return std::norm(v);
}

} // namespace detail

inline KernelPolyF to_float(const KernelPolyQ& k)
{
    KernelPolyF f(k.n);
    for (const auto& [i, c] : k.coeffs) f.coeffs[i] = c.to_complex();
    return f;
}

// Multiplication by w^2 = 1 - t in coefficient space.
template <class S>
KernelPoly<S> weight2_step(const KernelPoly<S>& kp)
{
    KernelPoly<S> out(kp.n);
    for (const auto& [i, a] : kp.coeffs) {
        auto c = recurrence_coeffs(kp.n, i.h, i.m);
        out.add(i, detail::from_rational<S>(1 - c.c_mid) * a);
        out.add(SpectralIndex(i.h + 2, i.m + 1), detail::from_rational<S>(-c.c_up) * a);
        if (i.m >= 1) out.add(SpectralIndex(i.h - 2, i.m - 1), detail::from_rational<S>(-c.c_down) * a);
    }
    return out;
}

// Coefficients of w^4 Z_{h,m} on Z_{h,m}, Z_{h+2,m+1}, Z_{h-2,m-1}, Z_{h+4,m+2}, Z_{h-4,m-2}.
struct GammaCoeffs {
    mpq_class mid, up, down, upup, downdown;
};

inline GammaCoeffs gamma_coeffs(int n, int h, int m)
{
    auto k = weight2_step(weight2_step(KernelPolyQ::delta(n, SpectralIndex(h, m))));
    auto at = [&](int dh, int dm) {
        if (!SpectralIndex::valid(h + dh, m + dm)) return mpq_class(0);
        auto c = k.coeff(SpectralIndex(h + dh, m + dm));
        if (!c.is_real()) throw std::logic_error("gamma_coeffs: non-real coefficient");
        return c.re();
    };
    return {at(0, 0), at(2, 1), at(-2, -1), at(4, 2), at(-4, -2)};
}

inline mpq_class gamma_mid_closed_form(int n, int h, int m)
{
    auto c = recurrence_coeffs(n, h, m);
    mpq_class one_minus = 1 - c.c_mid;
    mpq_class g = one_minus * one_minus + c.c_up * recurrence_coeffs(n, h + 2, m + 1).c_down;
    if (h >= 2 && m >= 1) g += c.c_down * recurrence_coeffs(n, h - 2, m - 1).c_up;
    return g;
}

template <class S>
detail::real_of_t<S> kernel_L2_norm_sq(const KernelPoly<S>& kp)
{
    detail::real_of_t<S> acc = 0;
    for (const auto& [i, a] : kp.coeffs) {
        if constexpr (std::is_same_v<S, ComplexRational>) acc += mpq_class(dim_H_hm(kp.n, i.h, i.m)) * a.norm2();
        else acc += dim_H_hm(kp.n, i.h, i.m).get_d() * std::norm(a);
    }
    return acc;
}

// M^alpha: a_{h,m} -> (5 gamma_mid)^{alpha/4} a_{h,m}
template <class S>
KernelPolyF M_alpha(const KernelPoly<S>& kp, double alpha)
{
    if (!(alpha >= 0)) throw std::domain_error("M_alpha: alpha must be nonnegative");
    KernelPolyF out(kp.n);
    for (const auto& [i, a] : kp.coeffs) {
        double f = std::pow(5.0 * gamma_mid_closed_form(kp.n, i.h, i.m).get_d(), alpha / 4.0);
        std::complex<double> v;
        if constexpr (std::is_same_v<S, ComplexRational>) v = a.to_complex();
        else v = a;
        out.add(i, f * v);
    }
    return out;
}

// M^{4k}, exact.
inline KernelPolyQ M_alpha_exact(const KernelPolyQ& kp, int k)
{
    if (k < 0) throw std::domain_error("M_alpha_exact: negative power");
    KernelPolyQ out(kp.n);
    for (const auto& [i, a] : kp.coeffs) {
        mpq_class g = 5 * gamma_mid_closed_form(kp.n, i.h, i.m), f = 1;
        for (int j = 0; j < k; ++j) f *= g;
        out.add(i, ComplexRational(f) * a);
    }
    return out;
}

// sum dim a conj(b)
template <class S>
S kernel_inner(const KernelPoly<S>& a, const KernelPoly<S>& b)
{
    S acc(0);
    for (const auto& [i, va] : a.coeffs) {
        auto it = b.coeffs.find(i);
        if (it == b.coeffs.end()) continue;
        S vb = it->second;
        if constexpr (std::is_same_v<S, ComplexRational>) acc += ComplexRational(mpq_class(dim_H_hm(a.n, i.h, i.m))) * va * vb.conj();
        else acc += dim_H_hm(a.n, i.h, i.m).get_d() * va * std::conj(vb);
    }
    return acc;
}

// int w^alpha |K(., y)|^2 for alpha in {0, 2, 4}
template <class S>
detail::real_of_t<S> weighted_L2_even(const KernelPoly<S>& kp, int alpha)
{
    if (alpha != 0 && alpha != 2 && alpha != 4) throw std::invalid_argument("weighted_L2_even: alpha must be 0, 2 or 4");
    KernelPoly<S> w = kp;
    for (int k = 0; k < alpha / 2; ++k) w = weight2_step(w);
    S v = kernel_inner(w, kp);
    if constexpr (std::is_same_v<S, ComplexRational>) {
        if (!v.is_real()) throw std::logic_error("weighted_L2_even: non-real result");
        return v.re();
    } else {
        return v.real();
    }
}

// K(x, y) as a function of s = Re<x,y>, t = |<x,y>|^2 on the sphere.
class KernelEvaluator {
public:
    template <class S>
    explicit KernelEvaluator(const KernelPoly<S>& kp)
    {
        for (const auto& [i, a] : kp.coeffs) {
            std::complex<double> v;
            if constexpr (std::is_same_v<S, ComplexRational>) v = a.to_complex();
            else v = a;
            parts_.emplace_back(v, ZonalEvaluator(kp.n, i.h, i.m));
        }
    }
    std::complex<double> operator()(double s, double t) const
    {
        std::complex<double> acc = 0;
        for (const auto& [a, z] : parts_) acc += a * z(s, t);
        return acc;
    }

private:
    std::vector<std::pair<std::complex<double>, ZonalEvaluator>> parts_;
};

template <class S>
std::complex<double> kernel_eval(const KernelPoly<S>& kp, double s, double t)
{
    return KernelEvaluator(kp)(s, t);
}

// MC estimate of int w(., e)^{beta} |K(., e)|^2 dsigma.
template <class S>
McEstimate weighted_L2_mc(const KernelPoly<S>& kp, double beta, std::size_t samples, std::uint64_t seed)
{
    const int n = kp.n;
    const KernelEvaluator k(kp);
    return mc_mean(samples, seed, [&](std::mt19937_64& rng) {
        auto u = sample_first_block(rng, n);
        const double t = u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3];
        return std::pow(std::max(0.0, 1 - t), beta / 2) * std::norm(k(u[0], t));
    });
}

struct InterpolReport {
    double alpha = 0;
    bool exact = false;
    std::optional<mpq_class> lhs_exact, rhs_exact;
    double lhs = 0, rhs = 0, lhs_stderr = 0;
    std::size_t samples = 0;
    bool holds = false;
};

struct McOptions {
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 1;
};

// ||w^alpha K(., y)||_2^2 <= ||M^alpha K(., y)||_2^2. Exact for alpha in {0, 2};
// otherwise the left side is sampled and the check is lhs <= rhs + 5 sigma.
inline InterpolReport interpol_inequality_check(const KernelPolyQ& kp, double alpha, const McOptions& mc = {})
{
    if (!(alpha >= 0)) throw std::domain_error("interpol_inequality_check: alpha must be nonnegative");
    InterpolReport r;
    r.alpha = alpha;
    if (alpha == 0 || alpha == 2) {
        r.exact = true;
        r.lhs_exact = weighted_L2_even(kp, 2 * static_cast<int>(alpha));
        // ||M^2 K||^2 = sum dim (5 gamma_mid) |a|^2
        mpq_class rhs = 0;
        for (const auto& [i, a] : kp.coeffs) {
            mpq_class f = alpha == 0 ? mpq_class(1) : mpq_class(5 * gamma_mid_closed_form(kp.n, i.h, i.m));
            rhs += f * mpq_class(dim_H_hm(kp.n, i.h, i.m)) * a.norm2();
        }
        r.rhs_exact = rhs;
        r.lhs = r.lhs_exact->get_d();
        r.rhs = r.rhs_exact->get_d();
        r.holds = *r.lhs_exact <= *r.rhs_exact;
        return r;
    }
    auto est = weighted_L2_mc(kp, 2 * alpha, mc.samples, mc.seed);
    r.lhs = est.estimate;
    r.lhs_stderr = est.stderr_;
    r.samples = est.samples;
    r.rhs = kernel_L2_norm_sq(M_alpha(kp, alpha));
    if (alpha == 1) r.lhs_exact = weighted_L2_even(kp, 2);
    r.holds = r.lhs <= r.rhs + 5 * r.lhs_stderr;
    return r;
}

// ---------------------------------------------------------------------------
// JSON: {"n": int, "coeffs": [{"h":, "m":, "re":, "im":}]}; exact values as "p/q" strings

template <class S>
nlohmann::ordered_json kernel_to_json(const KernelPoly<S>& kp)
{
    nlohmann::ordered_json j;
    j["n"] = kp.n;
    j["coeffs"] = nlohmann::ordered_json::array();
    for (const auto& [i, a] : kp.coeffs) {
        nlohmann::ordered_json c;
        c["h"] = i.h;
        c["m"] = i.m;
        if constexpr (std::is_same_v<S, ComplexRational>) {
            c["re"] = rational_str(a.re());
            c["im"] = rational_str(a.im());
        } else {
            c["re"] = a.real();
            c["im"] = a.imag();
        }
        j["coeffs"].push_back(c);
    }
    return j;
}

inline KernelPolyQ kernel_from_json_exact(const nlohmann::ordered_json& j)
{
    KernelPolyQ k(j.at("n").get<int>());
    for (const auto& c : j.at("coeffs")) {
        SpectralIndex i(c.at("h").get<int>(), c.at("m").get<int>());
        auto part = [](const nlohmann::ordered_json& v) {
            return v.is_string() ? parse_rational(v.get<std::string>()) : throw std::invalid_argument("kernel JSON: exact values must be strings");
        };
        k.add(i, ComplexRational(part(c.at("re")), part(c.at("im"))));
    }
    return k;
}

inline KernelPolyF kernel_from_json_float(const nlohmann::ordered_json& j)
{
    KernelPolyF k(j.at("n").get<int>());
    for (const auto& c : j.at("coeffs")) {
        SpectralIndex i(c.at("h").get<int>(), c.at("m").get<int>());
        auto part = [](const nlohmann::ordered_json& v) { return v.is_string() ? parse_rational(v.get<std::string>()).get_d() : v.get<double>(); };
        k.add(i, {part(c.at("re")), part(c.at("im"))});
    }
    return k;
}

} // namespace qsharm
