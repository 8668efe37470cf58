#pragma once

#include "complex_rational.hpp"

#include <ostream>
#include <stdexcept>
#include <vector>

namespace qsharm {

// Univariate polynomial with rational coefficients, coeffs[k] multiplies t^k.
class Poly1 {
public:
    Poly1() = default;
    explicit Poly1(std::vector<mpq_class> c) : c_(std::move(c)) { trim(); }
    static Poly1 constant(const mpq_class& v) { return Poly1({v}); }
    static Poly1 t() { return Poly1({mpq_class(0), mpq_class(1)}); }

    const std::vector<mpq_class>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    mpq_class coeff(int k) const
    {
        return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : mpq_class(0);
    }

    mpq_class operator()(const mpq_class& x) const
    {
        mpq_class acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    double eval(double x) const
    {
        double acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
        return acc;
    }

    friend Poly1 operator+(const Poly1& a, const Poly1& b)
    {
        std::vector<mpq_class> r(std::max(a.c_.size(), b.c_.size()), mpq_class(0));
        for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
        for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
        return Poly1(std::move(r));
    }
    friend Poly1 operator-(const Poly1& a, const Poly1& b) { return a + mpq_class(-1) * b; }
    friend Poly1 operator*(const mpq_class& s, const Poly1& p)
    {
        std::vector<mpq_class> r;
        for (const auto& v : p.c_) r.emplace_back(s * v);
        return Poly1(std::move(r));
    }
    friend Poly1 operator*(const Poly1& a, const Poly1& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<mpq_class> r(a.c_.size() + b.c_.size() - 1, mpq_class(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Poly1(std::move(r));
    }
    friend bool operator==(const Poly1&, const Poly1&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Poly1& p)
    {
        if (p.is_zero()) return os << "0";
        bool first = true;
        for (int k = p.degree(); k >= 0; --k) {
            const auto& v = p.c_[static_cast<std::size_t>(k)];
            if (sgn(v) == 0) continue;
            if (!first) os << " + ";
            os << v;
            if (k > 0) os << "*t^" << k;
            first = false;
        }
        return os;
    }

private:
    void trim()
    {
        while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
    }
    std::vector<mpq_class> c_;
};

// U_q(t) = sum_j (-1)^j C(q-j, j) (2t)^{q-2j}
inline Poly1 chebyshev_U(int q)
{
    if (q < 0) throw std::invalid_argument("chebyshev_U: negative degree");
    std::vector<mpq_class> c(static_cast<std::size_t>(q) + 1, mpq_class(0));
    for (int j = 0; 2 * j <= q; ++j) {
        mpz_class v = binomial(q - j, j) * (mpz_class(1) << static_cast<unsigned>(q - 2 * j));
        c[static_cast<std::size_t>(q - 2 * j)] = (j % 2 ? -1 : 1) * mpq_class(v);
    }
    return Poly1(std::move(c));
}

// G_m^{(a,b)}(t) = P_m^{(a,b)}(2t-1), from the explicit sum
inline Poly1 jacobi_G(int m, int alpha, int beta)
{
    if (m < 0) return {};
    if (alpha < 0 || beta < 0) throw std::invalid_argument("jacobi_G: negative parameter");
    mpq_class pre(factorial(beta + m), factorial(m) * factorial(alpha + beta + m));
    pre.canonicalize();
    std::vector<mpq_class> c(static_cast<std::size_t>(m) + 1, mpq_class(0));
    for (int l = 0; l <= m; ++l) {
        mpq_class term(binomial(m, l) * factorial(alpha + beta + 2 * m - l), factorial(beta + m - l));
        term.canonicalize();
        c[static_cast<std::size_t>(m - l)] = (l % 2 ? -1 : 1) * pre * term;
    }
    return Poly1(std::move(c));
}

struct JacobiThreeTerm {
    mpq_class up, mid, down;
};

namespace detail {
inline mpq_class ratio(const mpz_class& num, const mpz_class& den)
{
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}
} // namespace detail

// Coefficients of G_{m+1}, G_m, G_{m-1} in t G_m. Where a printed denominator
// vanishes (m = 0, a = b = 0) the numerator vanishes too and the term is 0.
inline JacobiThreeTerm jacobi_three_term(int m, int alpha, int beta)
{
    if (m < 0 || alpha < 0 || beta < 0) throw std::invalid_argument("jacobi_three_term: negative argument");
    const long s = alpha + beta;
    JacobiThreeTerm r;
    r.up = detail::ratio(mpz_class(m + 1) * (m + s + 1), mpz_class(2 * m + s + 2) * (2 * m + s + 1));
    mpz_class dm = mpz_class(2 * m + s + 2) * (2 * m + s);
    mpq_class frac = dm == 0 ? mpq_class(0) : detail::ratio(mpz_class(alpha - beta) * s, dm);
    r.mid = mpq_class(1, 2) * (1 - frac);
    mpz_class dd = mpz_class(2 * m + s + 1) * (2 * m + s);
    r.down = dd == 0 ? mpq_class(0) : detail::ratio(mpz_class(m + alpha) * (m + beta), dd);
    return r;
}

} // namespace qsharm
