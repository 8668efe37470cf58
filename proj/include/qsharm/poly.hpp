#pragma once

#include "complex_rational.hpp"
#include "linalg.hpp"
#include "quaternion.hpp"

#include <json.hpp>

#include <atomic>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace qsharm {

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline std::atomic<std::size_t>& budget_slot()
{
    static std::atomic<std::size_t> slot = [] {
        std::size_t v = 1000000;
        if (const char* env = std::getenv("QS_BUDGET_TERMS")) {
            char* end = nullptr;
            unsigned long long parsed = std::strtoull(env, &end, 10);
            if (end != env && *end == '\0' && parsed > 0) v = static_cast<std::size_t>(parsed);
        }
        return v;
    }();
    return slot;
}
} // namespace detail

// Maximum number of stored terms any polynomial operation may produce.
inline std::size_t term_budget() { return detail::budget_slot().load(); }
inline void set_term_budget(std::size_t terms) { detail::budget_slot().store(terms); }

inline void check_budget(std::size_t terms, const char* what)
{
    if (terms > term_budget())
        throw BudgetExceeded(std::string(what) + ": " + std::to_string(terms) + " terms exceeds budget of " +
                             std::to_string(term_budget()));
}

using Exponent = std::vector<std::uint16_t>;

inline int total_degree(const Exponent& e)
{
    int d = 0;
    for (auto v : e) d += v;
    return d;
}

// Sparse polynomial in the 4n real coordinates of H^n (or in any 4n
// indeterminates, e.g. complex coordinates), no zero coefficients stored.
class Poly {
public:
    using Terms = std::map<Exponent, ComplexRational>;

    explicit Poly(int n = 2) : n_(n)
    {
        if (n < 1) throw std::invalid_argument("Poly: n must be positive");
    }

    static Poly constant(int n, const ComplexRational& c)
    {
        Poly p(n);
        p.add_term(Exponent(static_cast<std::size_t>(4 * n), 0), c);
        return p;
    }
    static Poly monomial(int n, Exponent e, const ComplexRational& c = ComplexRational(1))
    {
        if (e.size() != static_cast<std::size_t>(4 * n)) throw std::invalid_argument("Poly: exponent length");
        Poly p(n);
        p.add_term(e, c);
        return p;
    }
    static Poly variable(int n, int index)
    {
        Exponent e(static_cast<std::size_t>(4 * n), 0);
        e.at(static_cast<std::size_t>(index)) = 1;
        return monomial(n, std::move(e));
    }
    // |x|^2
    static Poly norm2(int n)
    {
        Poly p(n);
        for (int k = 0; k < 4 * n; ++k) {
            Exponent e(static_cast<std::size_t>(4 * n), 0);
            e[static_cast<std::size_t>(k)] = 2;
            p.add_term(e, 1);
        }
        return p;
    }

    int n() const { return n_; }
    int num_vars() const { return 4 * n_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    ComplexRational coeff(const Exponent& e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? ComplexRational() : it->second;
    }

    void add_term(const Exponent& e, const ComplexRational& c)
    {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    std::optional<int> homogeneous_degree() const
    {
        if (terms_.empty()) return std::nullopt;
        int d = total_degree(terms_.begin()->first);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) != d) return std::nullopt;
        return d;
    }
    int degree() const
    {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }

    Poly conj() const
    {
        Poly r(n_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, c.conj());
        return r;
    }

    Poly& operator+=(const Poly& q)
    {
        same_n(q);
        for (const auto& [e, c] : q.terms_) add_term(e, c);
        check_budget(terms_.size(), "poly_add");
        return *this;
    }
    Poly& operator-=(const Poly& q)
    {
        same_n(q);
        for (const auto& [e, c] : q.terms_) add_term(e, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(const Poly& a) { return ComplexRational(-1) * a; }

    friend Poly operator*(const ComplexRational& s, const Poly& p)
    {
        Poly r(p.n_);
        if (s.is_zero()) return r;
        for (const auto& [e, c] : p.terms_) r.terms_.emplace(e, s * c);
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b)
    {
        a.same_n(b);
        Poly r(a.n_);
        if (a.is_zero() || b.is_zero()) return r;
        Exponent e(static_cast<std::size_t>(a.num_vars()));
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t k = 0; k < e.size(); ++k) e[k] = static_cast<std::uint16_t>(ea[k] + eb[k]);
                r.add_term(e, ca * cb);
            }
            check_budget(r.terms_.size(), "poly_mul");
        }
        return r;
    }
    Poly& operator*=(const Poly& q) { return *this = *this * q; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }

    // terms of total degree d only
    Poly homogeneous_part(int d) const
    {
        Poly r(n_);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) == d) r.terms_.emplace(e, c);
        return r;
    }

private:
    void same_n(const Poly& q) const
    {
        if (q.n_ != n_) throw std::invalid_argument("Poly: dimension mismatch");
    }

    int n_;
    Terms terms_;
};

inline Poly poly_add(const Poly& p, const Poly& q) { return p + q; }
inline Poly poly_mul(const Poly& p, const Poly& q) { return p * q; }
inline Poly poly_scale(const Poly& p, const ComplexRational& c) { return c * p; }

inline Poly poly_pow(const Poly& p, int k)
{
    Poly r = Poly::constant(p.n(), 1);
    for (int i = 0; i < k; ++i) r *= p;
    return r;
}

// Linear vector field V(x)_k = sum_l A_kl x_l, acting as the derivation sum_k V_k d/dx_k.
struct LinearField {
    int n = 2;
    std::vector<std::tuple<int, int, ComplexRational>> entries;

    static LinearField from_matrix(int n, const Matrix<ComplexRational>& a)
    {
        LinearField f{n, {}};
        for (std::size_t k = 0; k < a.rows(); ++k)
            for (std::size_t l = 0; l < a.cols(); ++l)
                if (!a(k, l).is_zero()) f.entries.emplace_back(static_cast<int>(k), static_cast<int>(l), a(k, l));
        return f;
    }
    Matrix<ComplexRational> matrix() const
    {
        Matrix<ComplexRational> m(static_cast<std::size_t>(4 * n), static_cast<std::size_t>(4 * n));
        for (const auto& [k, l, c] : entries) m(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) += c;
        return m;
    }
};

inline Poly apply_field(const LinearField& f, const Poly& p)
{
    if (f.n != p.n()) throw std::invalid_argument("apply_field: dimension mismatch");
    Poly r(p.n());
    for (const auto& [e, c] : p.terms()) {
        Exponent d = e;
        for (const auto& [k, l, a] : f.entries) {
            auto ek = e[static_cast<std::size_t>(k)];
            if (ek == 0) continue;
            --d[static_cast<std::size_t>(k)];
            ++d[static_cast<std::size_t>(l)];
            r.add_term(d, ComplexRational(static_cast<long>(ek)) * a * c);
            --d[static_cast<std::size_t>(l)];
            ++d[static_cast<std::size_t>(k)];
        }
    }
    return r;
}

// Constant-coefficient operator sum S_kl d/dx_k d/dx_l.
struct SecondOrderOp {
    int n = 2;
    std::vector<std::tuple<int, int, ComplexRational>> entries;

    static SecondOrderOp from_matrix(int n, const Matrix<ComplexRational>& s)
    {
        SecondOrderOp op{n, {}};
        for (std::size_t k = 0; k < s.rows(); ++k)
            for (std::size_t l = 0; l < s.cols(); ++l)
                if (!s(k, l).is_zero()) op.entries.emplace_back(static_cast<int>(k), static_cast<int>(l), s(k, l));
        return op;
    }
};

inline Poly apply_second_order(const SecondOrderOp& op, const Poly& p)
{
    if (op.n != p.n()) throw std::invalid_argument("apply_second_order: dimension mismatch");
    Poly r(p.n());
    for (const auto& [e, c] : p.terms()) {
        for (const auto& [k, l, s] : op.entries) {
            Exponent d = e;
            auto uk = static_cast<std::size_t>(k), ul = static_cast<std::size_t>(l);
            if (d[uk] == 0) continue;
            long f = d[uk]--;
            if (d[ul] == 0) continue;
            f *= d[ul]--;
            r.add_term(d, ComplexRational(f) * s * c);
        }
    }
    return r;
}

enum class Unit { i, j, k };

// Field x -> -u.x in real coordinates, per quaternion block (a,b,c,d):
//   u=i: (b,-a,d,-c)   u=j: (c,-d,-a,b)   u=k: (d,c,-b,-a)
inline LinearField field_T(int n, Unit u)
{
    static const int table[3][4][2] = {
        {{1, 1}, {0, -1}, {3, 1}, {2, -1}},
        {{2, 1}, {3, -1}, {0, -1}, {1, 1}},
        {{3, 1}, {2, 1}, {1, -1}, {0, -1}},
    };
    LinearField f{n, {}};
    const auto& t = table[static_cast<int>(u)];
    for (int blk = 0; blk < n; ++blk)
        for (int r = 0; r < 4; ++r) f.entries.emplace_back(4 * blk + r, 4 * blk + t[r][0], ComplexRational(t[r][1]));
    return f;
}

inline LinearField field_euler(int n)
{
    LinearField f{n, {}};
    for (int k = 0; k < 4 * n; ++k) f.entries.emplace_back(k, k, ComplexRational(1));
    return f;
}

inline Poly euler_theta(const Poly& p)
{
    Poly r(p.n());
    for (const auto& [e, c] : p.terms()) r.add_term(e, ComplexRational(static_cast<long>(total_degree(e))) * c);
    return r;
}

// nonnegative convention: -sum d^2/dx_k^2
inline Poly laplace_nonneg(const Poly& p)
{
    Poly r(p.n());
    for (const auto& [e, c] : p.terms()) {
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] < 2) continue;
            Exponent d = e;
            d[k] = static_cast<std::uint16_t>(d[k] - 2);
            r.add_term(d, ComplexRational(-static_cast<long>(e[k]) * (e[k] - 1)) * c);
        }
    }
    return r;
}

inline Poly vector_field_T(Unit u, const Poly& p) { return apply_field(field_T(p.n(), u), p); }

inline Poly gamma_op(const Poly& p)
{
    Poly r(p.n());
    for (Unit u : {Unit::i, Unit::j, Unit::k}) {
        auto f = field_T(p.n(), u);
        r -= apply_field(f, apply_field(f, p));
    }
    return r;
}

inline Poly mult_norm2(const Poly& p) { return Poly::norm2(p.n()) * p; }

inline Poly sphere_laplacian(const Poly& p)
{
    Poly th = euler_theta(p);
    return mult_norm2(laplace_nonneg(p)) + euler_theta(th) + ComplexRational(4L * p.n() - 2) * th;
}

enum class Ladder { zero, plus, minus };

inline Poly ladder(Ladder op, const Poly& p)
{
    const ComplexRational i = ComplexRational::i();
    switch (op) {
    case Ladder::zero: return i * vector_field_T(Unit::i, p);
    case Ladder::plus: return i * vector_field_T(Unit::j, p) - vector_field_T(Unit::k, p);
    case Ladder::minus: return i * vector_field_T(Unit::j, p) + vector_field_T(Unit::k, p);
    }
    throw std::invalid_argument("ladder: unknown operator");
}

inline mpz_class exponent_factorial(const Exponent& e)
{
    mpz_class r = 1;
    for (auto v : e) r *= factorial(v);
    return r;
}

// B(p,q) = sum alpha! p_alpha conj(q_alpha)
inline ComplexRational fischer_inner(const Poly& p, const Poly& q)
{
    if (p.n() != q.n()) throw std::invalid_argument("fischer_inner: dimension mismatch");
    ComplexRational acc;
    const auto& small = p.size() <= q.size() ? p : q;
    const auto& big = p.size() <= q.size() ? q : p;
    for (const auto& [e, c] : small.terms()) {
        auto it = big.terms().find(e);
        if (it == big.terms().end()) continue;
        const ComplexRational& pc = (&small == &p) ? c : it->second;
        const ComplexRational& qc = (&small == &p) ? it->second : c;
        acc += ComplexRational(mpq_class(exponent_factorial(e))) * pc * qc.conj();
    }
    return acc;
}

// Integral of a monomial against normalized surface measure on S^{d-1}, d = 4n.
inline mpq_class sphere_moment(const Exponent& e)
{
    for (auto v : e)
        if (v % 2 != 0) return 0;
    static std::mutex mu;
    static std::map<Exponent, mpq_class> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(e);
        if (it != cache.end()) return it->second;
    }
    const long d = static_cast<long>(e.size());
    mpz_class num = 1, den = 1;
    long total = 0;
    for (auto v : e) {
        num *= double_factorial(static_cast<long>(v) - 1);
        total += v;
    }
    for (long k = 0; k < total; k += 2) den *= d + k;
    mpq_class r(num, den);
    r.canonicalize();
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(e, r);
    return r;
}

inline ComplexRational sphere_integral_exact(const Poly& p)
{
    ComplexRational acc;
    for (const auto& [e, c] : p.terms()) {
        mpq_class m = sphere_moment(e);
        if (sgn(m) != 0) acc += ComplexRational(m) * c;
    }
    return acc;
}

// integral of p * conj(q) over the sphere, without forming the product
inline ComplexRational sphere_inner(const Poly& p, const Poly& q)
{
    if (p.n() != q.n()) throw std::invalid_argument("sphere_inner: dimension mismatch");
    ComplexRational acc;
    Exponent e(static_cast<std::size_t>(p.num_vars()));
    for (const auto& [ea, ca] : p.terms()) {
        for (const auto& [eb, cb] : q.terms()) {
            bool odd = false;
            for (std::size_t k = 0; k < e.size(); ++k) {
                e[k] = static_cast<std::uint16_t>(ea[k] + eb[k]);
                if (e[k] % 2) {
                    odd = true;
                    break;
                }
            }
            if (odd) continue;
            acc += ComplexRational(sphere_moment(e)) * ca * cb.conj();
        }
    }
    return acc;
}

template <class S>
std::complex<double> eval_float(const Poly& p, const HPoint<S>& x)
{
    if (x.n() != p.n()) throw std::invalid_argument("eval_float: dimension mismatch");
    auto xi = x.real_coords();
    const std::size_t nv = xi.size();
    int deg = std::max(p.degree(), 0);
    std::vector<std::vector<double>> pw(nv, std::vector<double>(static_cast<std::size_t>(deg) + 1, 1.0));
    for (std::size_t k = 0; k < nv; ++k)
        for (int j = 1; j <= deg; ++j) pw[k][static_cast<std::size_t>(j)] = pw[k][static_cast<std::size_t>(j) - 1] * to_double(xi[k]);
    std::complex<double> acc = 0;
    for (const auto& [e, c] : p.terms()) {
        double m = 1;
        for (std::size_t k = 0; k < nv; ++k) m *= pw[k][e[k]];
        acc += c.to_complex() * m;
    }
    return acc;
}

template <class S>
std::complex<double> eval_float(const Poly& p, const SpherePoint<S>& x)
{
    return eval_float(p, x.point());
}

inline ComplexRational eval_exact(const Poly& p, const HPoint<mpq_class>& x)
{
    if (x.n() != p.n()) throw std::invalid_argument("eval_exact: dimension mismatch");
    auto xi = x.real_coords();
    ComplexRational acc;
    for (const auto& [e, c] : p.terms()) {
        mpq_class m = 1;
        for (std::size_t k = 0; k < xi.size(); ++k) {
            if (e[k] == 0) continue;
            mpq_class pk = 1;
            for (int j = 0; j < e[k]; ++j) pk *= xi[k];
            m *= pk;
        }
        if (sgn(m) != 0) acc += ComplexRational(m) * c;
    }
    return acc;
}

// Substitute x_k = sum_l M(k,l) y_l.
inline Poly substitute_linear(const Poly& p, const Matrix<ComplexRational>& m)
{
    const int nv = p.num_vars();
    if (m.rows() != static_cast<std::size_t>(nv) || m.cols() != static_cast<std::size_t>(nv))
        throw std::invalid_argument("substitute_linear: matrix shape");
    const int n = p.n();
    std::vector<std::vector<Poly>> pw(static_cast<std::size_t>(nv));
    int deg = std::max(p.degree(), 0);
    for (int k = 0; k < nv; ++k) {
        Poly lin(n);
        for (int l = 0; l < nv; ++l)
            if (!m(static_cast<std::size_t>(k), static_cast<std::size_t>(l)).is_zero())
                lin += m(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) * Poly::variable(n, l);
        auto& row = pw[static_cast<std::size_t>(k)];
        row.push_back(Poly::constant(n, 1));
        for (int j = 1; j <= deg; ++j) row.push_back(row.back() * lin);
    }
    Poly r(n);
    for (const auto& [e, c] : p.terms()) {
        Poly t = Poly::constant(n, c);
        for (int k = 0; k < nv; ++k)
            if (e[static_cast<std::size_t>(k)] > 0) t *= pw[static_cast<std::size_t>(k)][e[static_cast<std::size_t>(k)]];
        r += t;
    }
    return r;
}

// {"n": int, "terms": [{"exp": [...], "re": "p/q", "im": "p/q"}]}
inline nlohmann::ordered_json poly_to_json(const Poly& p)
{
    nlohmann::ordered_json j;
    j["n"] = p.n();
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [e, c] : p.terms()) {
        nlohmann::ordered_json t;
        t["exp"] = std::vector<int>(e.begin(), e.end());
        t["re"] = rational_str(c.re());
        t["im"] = rational_str(c.im());
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

inline Poly poly_from_json(const nlohmann::ordered_json& j)
{
    int n = j.at("n").get<int>();
    Poly p(n);
    for (const auto& t : j.at("terms")) {
        auto ev = t.at("exp").get<std::vector<int>>();
        if (ev.size() != static_cast<std::size_t>(4 * n)) throw std::invalid_argument("poly_from_json: exponent length");
        Exponent e;
        for (int v : ev) {
            if (v < 0 || v > 65535) throw std::invalid_argument("poly_from_json: exponent out of range");
            e.push_back(static_cast<std::uint16_t>(v));
        }
        p.add_term(e, ComplexRational(parse_rational(t.at("re").get<std::string>()),
                                      parse_rational(t.at("im").get<std::string>())));
    }
    return p;
}

inline std::string poly_to_json_string(const Poly& p) { return poly_to_json(p).dump(); }
inline Poly poly_from_json_string(const std::string& s) { return poly_from_json(nlohmann::ordered_json::parse(s)); }

} // namespace qsharm
