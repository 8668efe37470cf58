#pragma once

#include "zonal.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qsharm {

// ---------------------------------------------------------------------------
// multiplier functions F: [0, inf) -> C

class MultiplierFn {
public:
    enum class Kind { band, riesz, heat, mihlin, tabulated };

    // indicator of [lo, hi)
    static MultiplierFn band(double lo, double hi)
    {
        if (!(lo < hi) || lo < 0) throw std::invalid_argument("band: need 0 <= lo < hi");
        MultiplierFn f(Kind::band);
        f.p_ = {lo, hi};
        return f;
    }
    // (1 - t x^2)_+^delta, so that F(sqrt L) = (1 - tL)_+^delta; delta = 0 is the indicator of [0, 1/sqrt t)
    static MultiplierFn riesz(double delta, double t)
    {
        if (!(delta >= 0) || !(t > 0)) throw std::invalid_argument("riesz: need delta >= 0, t > 0");
        MultiplierFn f(Kind::riesz);
        f.p_ = {delta, t};
        return f;
    }
    // exp(-t x^2), so that F(sqrt L) = exp(-tL)
    static MultiplierFn heat(double t)
    {
        if (!(t > 0)) throw std::invalid_argument("heat: need t > 0");
        MultiplierFn f(Kind::heat);
        f.p_ = {t};
        return f;
    }
    // 1 on [0, 1/2], smooth decay exp(1 - 1/(1 - v^2)) with v = 2x - 1 on (1/2, 1), 0 from 1 on
    static MultiplierFn mihlin() { return MultiplierFn(Kind::mihlin); }
    // piecewise linear through (grid[k], values[k]); 0 outside [grid.front(), grid.back()]
    static MultiplierFn tabulated(std::vector<double> grid, std::vector<std::complex<double>> values)
    {
        if (grid.size() < 2 || grid.size() != values.size()) throw std::invalid_argument("tabulated: need >= 2 matching nodes");
        for (std::size_t k = 1; k < grid.size(); ++k)
            if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("tabulated: grid must be strictly increasing");
        if (grid.front() < 0) throw std::invalid_argument("tabulated: grid must be nonnegative");
        MultiplierFn f(Kind::tabulated);
        f.grid_ = std::move(grid);
        f.values_ = std::move(values);
        return f;
    }

    // x -> F(x / s)
    MultiplierFn scaled(double s) const
    {
        if (!(s > 0)) throw std::invalid_argument("scaled: factor must be positive");
        MultiplierFn f = *this;
        f.scale_ *= s;
        return f;
    }

    Kind kind() const { return kind_; }
    double scale() const { return scale_; }

    std::complex<double> operator()(double x) const { return profile(x / scale_); }

    // sup |F| over [lo, hi]; exact for every variant (all are piecewise monotone
    // in |F| or piecewise linear, so the sup sits at an endpoint or a node).
    double sup_abs(double lo, double hi) const
    {
        if (!(lo <= hi)) throw std::invalid_argument("sup_abs: empty interval");
        lo /= scale_;
        hi /= scale_;
        switch (kind_) {
        case Kind::band:
            return lo < p_[1] && hi >= p_[0] ? 1.0 : 0.0;
        case Kind::riesz:
        case Kind::heat:
        case Kind::mihlin:
            return std::abs(profile(lo)); // nonincreasing
        case Kind::tabulated: {
            const double g0 = grid_.front(), g1 = grid_.back();
            if (hi < g0 || lo > g1) return 0.0;
            double s = std::max(std::abs(profile(std::max(lo, g0))), std::abs(profile(std::min(hi, g1))));
            for (std::size_t k = 0; k < grid_.size(); ++k)
                if (grid_[k] >= lo && grid_[k] <= hi) s = std::max(s, std::abs(values_[k]));
            return s;
        }
        }
        return 0.0;
    }

    // F(x) = 0 for all x > support_end(); nullopt if F never vanishes identically.
    std::optional<double> support_end() const
    {
        switch (kind_) {
        case Kind::band: return p_[1] * scale_;
        case Kind::riesz: return scale_ / std::sqrt(p_[1]);
        case Kind::heat: return std::nullopt;
        case Kind::mihlin: return scale_;
        case Kind::tabulated: return grid_.back() * scale_;
        }
        return std::nullopt;
    }

    std::string describe() const
    {
        std::ostringstream os;
        os.precision(17);
        switch (kind_) {
        case Kind::band: os << "band[" << p_[0] << "," << p_[1] << ")"; break;
        case Kind::riesz: os << "riesz(delta=" << p_[0] << ",t=" << p_[1] << ")"; break;
        case Kind::heat: os << "heat(t=" << p_[0] << ")"; break;
        case Kind::mihlin: os << "mihlin"; break;
        case Kind::tabulated: os << "tabulated(" << grid_.size() << " nodes)"; break;
        }
        if (scale_ != 1) os << " scaled by " << scale_;
        return os.str();
    }

private:
    explicit MultiplierFn(Kind k) : kind_(k) {}

    std::complex<double> profile(double x) const
    {
        switch (kind_) {
        case Kind::band:
            return x >= p_[0] && x < p_[1] ? 1.0 : 0.0;
        case Kind::riesz: {
            double v = 1 - p_[1] * x * x;
            if (v <= 0) return 0.0;
            return p_[0] == 0 ? 1.0 : std::pow(v, p_[0]);
        }
        case Kind::heat:
            return std::exp(-p_[0] * x * x);
        case Kind::mihlin: {
            if (x <= 0.5) return 1.0;
            if (x >= 1) return 0.0;
            double v = 2 * x - 1;
            return std::exp(1 - 1 / (1 - v * v));
        }
        case Kind::tabulated: {
            if (x < grid_.front() || x > grid_.back()) return 0.0;
            auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
            if (it == grid_.end()) return values_.back();
            std::size_t k = static_cast<std::size_t>(it - grid_.begin());
            double w = (x - grid_[k - 1]) / (grid_[k] - grid_[k - 1]);
            return (1 - w) * values_[k - 1] + w * values_[k];
        }
        }
        return 0.0;
    }

    Kind kind_;
    std::vector<double> p_;
    std::vector<double> grid_;
    std::vector<std::complex<double>> values_;
    double scale_ = 1;
};

// ---------------------------------------------------------------------------
// spectrum in the (a, b) factorization: lambda_L / 4 = ab - n(n-1), a = h-m+n, b = m+n-1

struct SpectralPoint {
    SpectralIndex index;
    long lambda = 0;
};

inline SpectralIndex index_from_ab(int n, long a, long b)
{
    return SpectralIndex(static_cast<int>(a + b - 2 * n + 1), static_cast<int>(b - n + 1));
}

// All (h,m) with lambda_L in [lo, hi), ordered by (h, m).
inline std::vector<SpectralPoint> spectral_points(int n, long lo, long hi)
{
    require_n(n);
    const long c = static_cast<long>(n) * (n - 1);
    std::vector<SpectralPoint> out;
    for (long b = n - 1; 4 * (b * (b + 1) - c) < hi; ++b) {
        long a = b + 1;
        if (lo > 0) a = std::max(a, (lo + 4 * c + 4 * b - 1) / (4 * b));
        for (; 4 * (a * b - c) < hi; ++a) {
            long lam = 4 * (a * b - c);
            if (lam >= lo) out.push_back({index_from_ab(n, a, b), lam});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.index < y.index; });
    return out;
}

struct EigCount {
    int j = 1;
    std::vector<SpectralIndex> members;
};

// I_j = {(h,m): (j-1)^2 <= lambda_L < j^2}
inline EigCount enumerate_Ij(int n, int j)
{
    if (j < 1) throw std::invalid_argument("enumerate_Ij: j must be positive");
    EigCount e;
    e.j = j;
    for (const auto& p : spectral_points(n, static_cast<long>(j - 1) * (j - 1), static_cast<long>(j) * j)) e.members.push_back(p.index);
    return e;
}

// Same set by scanning h <= j^2 / (4(n-1)), using lambda_L >= 4(n-1)h.
inline EigCount enumerate_Ij_scan(int n, int j)
{
    require_n(n);
    EigCount e;
    e.j = j;
    const long lo = static_cast<long>(j - 1) * (j - 1), hi = static_cast<long>(j) * j;
    for (int h = 0; 4L * (n - 1) * h < hi; ++h)
        for (int m = 0; 2 * m <= h; ++m) {
            long lam = lambda_L(n, h, m);
            if (lam >= lo && lam < hi) e.members.emplace_back(h, m);
        }
    return e;
}

// sum over I_j of (m+1)^{2n-3+alpha/2} (h+1)^{2n-alpha/2} [(h-2m+1)^2]
inline double counting_sum(int n, int j, double alpha, bool square_factor)
{
    double s = 0;
    for (const auto& i : enumerate_Ij(n, j).members) {
        double v = std::pow(i.m + 1.0, 2 * n - 3 + alpha / 2) * std::pow(i.h + 1.0, 2 * n - alpha / 2);
        if (square_factor) v *= static_cast<double>(i.h - 2 * i.m + 1) * (i.h - 2 * i.m + 1);
        s += v;
    }
    return s;
}

// ---------------------------------------------------------------------------
// kernels and norms

// a_{h,m} = F(sqrt lambda_L) for lambda_L <= cutoff. Throws if F may be nonzero
// beyond the cutoff unless the truncation is acknowledged.
inline KernelPolyF multiplier_kernel(const MultiplierFn& f, int n, long cutoff, bool acknowledge_truncation = false)
{
    require_n(n);
    if (cutoff < 0) throw std::invalid_argument("multiplier_kernel: negative cutoff");
    if (!acknowledge_truncation) {
        auto end = f.support_end();
        if (!end) throw std::domain_error("multiplier_kernel: " + f.describe() + " has unbounded support; acknowledge the truncation");
        const double e2 = *end * *end;
        if (e2 > static_cast<double>(cutoff)) {
            for (const auto& p : spectral_points(n, cutoff + 1, static_cast<long>(std::floor(e2)) + 1))
                if (f(std::sqrt(static_cast<double>(p.lambda))) != 0.0)
                    throw std::domain_error("multiplier_kernel: cutoff truncates " + f.describe() + " without acknowledgment");
        }
    }
    KernelPolyF k(n);
    for (const auto& p : spectral_points(n, 0, cutoff + 1)) k.add(p.index, f(std::sqrt(static_cast<double>(p.lambda))));
    return k;
}

// Rational copy of a float kernel (doubles are dyadic rationals).
inline KernelPolyQ to_exact(const KernelPolyF& k)
{
    KernelPolyQ q(k.n);
    for (const auto& [i, a] : k.coeffs) q.add(i, ComplexRational(mpq_class(a.real()), mpq_class(a.imag())));
    return q;
}

struct NormN2 {
    int N = 1;
    double value = 0;
    bool exact = true;
};

// ||F(s .)||_{N,2} = ((1/N) sum_k sup_{[(k-1)/N, k/N]} |F(s .)|^2)^{1/2}
inline NormN2 norm_N2(const MultiplierFn& f, int N, double s = 1.0)
{
    if (N < 1) throw std::invalid_argument("norm_N2: N must be positive");
    double acc = 0;
    for (int k = 1; k <= N; ++k) {
        double v = f.sup_abs(s * (k - 1) / N, s * k / N);
        acc += v * v;
    }
    return {N, std::sqrt(acc / N), true};
}

// ---------------------------------------------------------------------------
// weighted Plancherel ratio

struct PlancherelPoint {
    int N = 1;
    double alpha = 0;
    double numerator = 0, denominator = 0, ratio = 0;
    std::string method;
};

// profile vanishes beyond 1; F = profile(. / N) vanishes outside [0, N).
// numerator = int w^alpha |K_{F(sqrt L)}(., e)|^2, by the exact recurrence for
// alpha in {0, 2} and by the M^{alpha/2} majorant sum (5 gamma)^{alpha/4} dim |a|^2 otherwise.
inline PlancherelPoint plancherel_ratio(const MultiplierFn& profile, int n, double alpha, int N, bool divergence_study = false)
{
    require_n(n);
    if (N < 1) throw std::invalid_argument("plancherel_ratio: N must be positive");
    if (!(alpha >= 0)) throw std::domain_error("plancherel_ratio: alpha must be nonnegative");
    if (alpha >= 3 && !divergence_study) throw std::domain_error("plancherel_ratio: alpha >= 3 requires divergence-study mode");
    auto end = profile.support_end();
    if (!end || *end > 1) throw std::invalid_argument("plancherel_ratio: profile must vanish beyond 1");
    const auto f = profile.scaled(N);
    const auto k = multiplier_kernel(f, n, static_cast<long>(N) * N);
    PlancherelPoint p;
    p.N = N;
    p.alpha = alpha;
    if (alpha == 0 || alpha == 2) {
        p.numerator = weighted_L2_even(k, static_cast<int>(alpha));
        p.method = "exact";
    } else {
        for (const auto& [i, a] : k.coeffs)
            p.numerator += std::pow(5 * gamma_mid_closed_form(n, i.h, i.m).get_d(), alpha / 4) * dim_H_hm(n, i.h, i.m).get_d() * std::norm(a);
        p.method = "majorant";
    }
    const double nn = norm_N2(f, N, N).value;
    p.denominator = std::pow(static_cast<double>(N), 4 * n + 2 - alpha) * nn * nn;
    p.ratio = p.numerator / p.denominator;
    return p;
}

// Rational lower bound for sqrt(q), q >= 0, accurate to about 2^-bits relative.
inline mpq_class sqrt_lower(const mpq_class& q, unsigned bits = 64)
{
    if (sgn(q) < 0) throw std::domain_error("sqrt_lower: negative argument");
    mpz_class scaled = q.get_num() * q.get_den() << (2 * bits), root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    mpq_class r(root, q.get_den() << bits);
    r.canonicalize();
    return r;
}

// exact int w^alpha |K|^2 <= sum (5 gamma)^{alpha/4} dim |a|^2 for alpha in {0, 2}, in rational arithmetic
// (for alpha = 2 the right side is replaced by a rational lower bound, which only strengthens the check).
inline bool exact_numerator_below_majorant(const KernelPolyQ& k, int alpha)
{
    if (alpha != 0 && alpha != 2) throw std::invalid_argument("exact_numerator_below_majorant: alpha must be 0 or 2");
    mpq_class lhs = weighted_L2_even(k, alpha), rhs = 0;
    for (const auto& [i, a] : k.coeffs) {
        mpq_class f = alpha == 0 ? mpq_class(1) : sqrt_lower(5 * gamma_mid_closed_form(k.n, i.h, i.m));
        rhs += f * mpq_class(dim_H_hm(k.n, i.h, i.m)) * a.norm2();
    }
    return lhs <= rhs;
}

// ---------------------------------------------------------------------------
// on-diagonal resolvent sum  sum dim (1 + r^2 lambda_L)^{-2 ell}

struct ResolventResult {
    int n = 2, ell = 0;
    double r = 0;
    double sum = 0;         // head + tail estimate
    double head = 0;        // exact part, ab <= U
    double tail = 0;        // estimated remainder
    double uncertainty = 0; // certified bound on |sum - true value| from the tail treatment
    long U = 0;
    std::size_t head_terms = 0;
};

namespace detail {

struct ResolventSummand {
    int n, ell;
    double k4r2, c, norm, log_norm;

    ResolventSummand(int n_, int ell_, double r)
        : n(n_), ell(ell_), k4r2(4 * r * r), c(static_cast<double>(n_) * (n_ - 1)), norm(1.0 / ((2.0 * n_ - 2) * (2.0 * n_ - 1))),
          log_norm(std::log(norm))
    {
    }
    // C(x + n - 2, 2n - 3)
    double binom(double x) const
    {
        double p = 1;
        for (int i = 0; i <= 2 * n - 4; ++i) p *= (x + n - 2 - i) / (i + 1);
        return p;
    }
    double log_binom(double x) const
    {
        double p = 0;
        for (int i = 0; i <= 2 * n - 4; ++i) p += std::log((x + n - 2 - i) / (i + 1));
        return p;
    }
    double decay(double a, double b) const
    {
        double inv = 1 / (1 + k4r2 * (a * b - c)), p = 1;
        for (int k = 0; k < 2 * ell; ++k) p *= inv;
        return p;
    }
    double log_decay(double a, double b) const { return -2.0 * ell * std::log1p(k4r2 * (a * b - c)); }

    // dim in (a, b) form times the resolvent factor
    double f(double a, double b) const { return (a - b) * (a - b) * (a + b) * norm * binom(a) * binom(b) * decay(a, b); }
    double f_log(double a, double b) const
    {
        return std::exp(2 * std::log(a - b) + std::log(a + b) + log_norm + log_binom(a) + log_binom(b) + log_decay(a, b));
    }
    // (a - b)^2 replaced by (a + b)^2
    double g_log(double a, double b) const
    {
        return std::exp(3 * std::log(a + b) + log_norm + log_binom(a) + log_binom(b) + log_decay(a, b));
    }

    // x d/dx log of the growth factors, bounded above on [A, inf), for the b-th row.
    double growth_bound(double A, double b, bool diff_squared) const
    {
        double s = diff_squared ? 2 * A / (A - b) + 1 : 3;
        for (int i = 0; i <= 2 * n - 4; ++i) {
            double k = n - 2 - i;
            s += k >= 0 ? 1.0 : A / (A + k);
        }
        return s;
    }
    // x d/dx log of the decay factor, magnitude bounded below on [A, inf)
    double decay_bound(double A, double b) const
    {
        double X = k4r2 * A * b, d = 1 - k4r2 * c;
        return 2.0 * ell * (d >= 0 ? X / (X + d) : 1.0);
    }
    bool decreasing_from(double A, double b, bool diff_squared) const
    {
        return A > b && 1 + k4r2 * (A * b - c) > 0 && growth_bound(A, b, diff_squared) < decay_bound(A, b);
    }
};

struct TailPieces {
    double estimate = 0, uncertainty = 0;
    bool ok = true;
};

inline TailPieces resolvent_tail(const ResolventSummand& s, long U)
{
    using boost::math::quadrature::exp_sinh;
    using boost::math::quadrature::gauss_kronrod;
    const double inf = std::numeric_limits<double>::infinity();
    const double tol = 1e-12;
    exp_sinh<double> es;
    TailPieces t;
    const long root = static_cast<long>(std::floor(std::sqrt(static_cast<double>(U))));
    const long b1 = root / 2;
    for (long b = s.n - 1; b <= root; ++b) {
        const double A = static_cast<double>(std::max(b, U / b)), bd = static_cast<double>(b);
        double err = 0;
        if (b <= b1) {
            // sum_{a > A} f between int_{A+1}^inf f and int_A^inf f
            if (!s.decreasing_from(A, bd, true)) return {0, 0, false};
            auto fa = [&](double a) { return s.f_log(a, bd); };
            double upper_tail = es.integrate(fa, A + 1, inf, tol, &err);
            double e2 = 0;
            double first = gauss_kronrod<double, 31>::integrate(fa, A, A + 1, 15, tol, &e2);
            t.estimate += upper_tail + first / 2;
            t.uncertainty += first / 2 + err + e2;
        } else {
            // 0 <= sum_{a > A} f <= int_A^inf g
            if (!s.decreasing_from(A, bd, false)) return {0, 0, false};
            double bound = es.integrate([&](double a) { return s.g_log(a, bd); }, A, inf, tol, &err);
            t.estimate += bound / 2;
            t.uncertainty += bound / 2 + err;
        }
    }
    // b > root: each lattice term is below the integral of g(x+1, y+1) over the cell
    // [a-1, a] x [b-1, b], and the cells lie in {y >= root, x >= y}.
    const double y0 = static_cast<double>(root);
    if (1 + s.k4r2 * (y0 * y0 - s.c) <= 0) return {0, 0, false};
    double outer_err = 0;
    double region2 = es.integrate(
        [&](double y) {
            double e = 0;
            return es.integrate([&](double x) { return s.g_log(x + 1, y + 1); }, y, inf, tol, &e);
        },
        y0, inf, 1e-10, &outer_err);
    t.estimate += region2 / 2;
    t.uncertainty += region2 / 2 + outer_err;
    return t;
}

} // namespace detail

// Sum over all (h,m) of dim (1 + r^2 lambda_L)^{-2 ell}, for ell >= n + 1. The
// head ab <= U is summed term by term; the tail is bracketed by integrals, and
// U doubles until the bracket width is below rel_tol times the head.
inline ResolventResult resolvent_diag_sum(int n, double r, int ell, double rel_tol = 1e-9, long U = 0)
{
    require_n(n);
    if (ell < n + 1) throw std::domain_error("resolvent_diag_sum: ell must be at least n + 1");
    if (!(r > 0) || !std::isfinite(r)) throw std::domain_error("resolvent_diag_sum: r must be positive and finite");
    const detail::ResolventSummand s(n, ell, r);
    if (U <= 0) U = std::max(256L, static_cast<long>(std::ceil(4000.0 / (4 * r * r))));
    U = std::max(U, static_cast<long>(n) * (n - 1) + n);
    for (int attempt = 0; attempt < 8; ++attempt, U *= 2) {
        long double head = 0;
        std::size_t terms = 0;
        for (long b = n - 1; b * (b + 1) <= U; ++b)
            for (long a = b + 1; a * b <= U; ++a) {
                head += s.f(static_cast<double>(a), static_cast<double>(b));
                ++terms;
            }
        auto t = detail::resolvent_tail(s, U);
        if (!t.ok || !(t.uncertainty <= rel_tol * static_cast<double>(head))) continue;
        ResolventResult res;
        res.n = n;
        res.ell = ell;
        res.r = r;
        res.head = static_cast<double>(head);
        res.tail = t.estimate;
        res.sum = static_cast<double>(head + t.estimate);
        res.uncertainty = t.uncertainty;
        res.U = U;
        res.head_terms = terms;
        return res;
    }
    throw std::runtime_error("resolvent_diag_sum: tail certificate failed");
}

// ---------------------------------------------------------------------------
// Monte Carlo on rho-balls around e. For y on the sphere, rho(e, y) = |1 - y_1|^{1/2},
// and y_1 has density c_n (1 - |u|^2)^{2n-3} on the unit ball of R^4.

inline double first_block_density_constant(int n)
{
    return std::tgamma(2.0 * n) / (std::numbers::pi * std::numbers::pi * std::tgamma(2.0 * n - 2));
}

namespace detail {

// E over v uniform in the 4-ball of radius R around (1,0,0,0) of vol * c_n (1-|v|^2)^{2n-3-alpha/2} 1_{|v|<1}
inline McEstimate rho_ball_integral(int n, double r, double alpha, std::size_t samples, std::uint64_t seed)
{
    const double R = r * r;
    const double vol = std::numbers::pi * std::numbers::pi * R * R * R * R / 2;
    const double cn = first_block_density_constant(n);
    const double expo = 2.0 * n - 3 - alpha / 2;
    return mc_mean(samples, seed, [&](std::mt19937_64& rng) {
        std::normal_distribution<double> nd;
        std::uniform_real_distribution<double> ud;
        double g[4], nrm = 0;
        do {
            nrm = 0;
            for (double& v : g) {
                v = nd(rng);
                nrm += v * v;
            }
        } while (nrm == 0);
        const double rad = R * std::pow(ud(rng), 0.25) / std::sqrt(nrm);
        double v2 = 0;
        for (int k = 0; k < 4; ++k) {
            double c = (k == 0 ? 1.0 : 0.0) + rad * g[k];
            v2 += c * c;
        }
        if (v2 >= 1) return 0.0;
        return vol * cn * std::pow(1 - v2, expo);
    });
}

} // namespace detail

// sigma({y : rho(e, y) < r})
inline McEstimate ball_volume_mc(int n, double r, std::size_t samples, std::uint64_t seed)
{
    require_n(n);
    if (!(r > 0)) throw std::domain_error("ball_volume_mc: r must be positive");
    if (r * r >= 2) return {1.0, 0.0, samples, seed, 1};
    return detail::rho_ball_integral(n, r, 0.0, samples, seed);
}

// Plain hit-or-miss estimate with uniform points on the sphere.
inline McEstimate ball_volume_mc_naive(int n, double r, std::size_t samples, std::uint64_t seed)
{
    require_n(n);
    const auto e = SpherePoint<double>::basis(n);
    return mc_mean(samples, seed, [&](std::mt19937_64& rng) { return quasi_dist(e, sample_sphere(rng, n)) < r ? 1.0 : 0.0; });
}

// int over the rho-ball of w(e, y)^{-alpha}, with w(e, y) = (1 - |y_1|^2)^{1/2}
inline McEstimate weight_integral_mc(int n, double r, double alpha, std::size_t samples, std::uint64_t seed)
{
    require_n(n);
    if (!(r > 0)) throw std::domain_error("weight_integral_mc: r must be positive");
    if (!(alpha >= 0) || alpha >= 3) throw std::domain_error("weight_integral_mc: need 0 <= alpha < 3");
    if (r * r >= 2) {
        // whole sphere: c_n pi^2 Gamma(2n-2-alpha/2) / Gamma(2n-alpha/2)
        const double v = first_block_density_constant(n) * std::numbers::pi * std::numbers::pi * std::tgamma(2.0 * n - 2 - alpha / 2) /
                         std::tgamma(2.0 * n - alpha / 2);
        return {v, 0.0, samples, seed, 1};
    }
    return detail::rho_ball_integral(n, r, alpha, samples, seed);
}

inline McEstimate weight_integral_mc_naive(int n, double r, double alpha, std::size_t samples, std::uint64_t seed)
{
    require_n(n);
    const auto e = SpherePoint<double>::basis(n);
    return mc_mean(samples, seed, [&](std::mt19937_64& rng) {
        auto y = sample_sphere(rng, n);
        return quasi_dist(e, y) < r ? std::pow(weight_w(e, y), -alpha) : 0.0;
    });
}

// least-squares line through (log x, log y)
struct LogLogFit {
    double slope = 0, intercept = 0;
};

inline LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog: need >= 2 matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw std::domain_error("fit_loglog: nonpositive value");
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return {slope, (sy - slope * sx) / k};
}

} // namespace qsharm
