#pragma once

#include "complex_rational.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace qsharm {

template <class S>
inline constexpr bool is_exact_scalar_v = std::is_same_v<S, mpq_class>;

template <class S>
double to_double(const S& v)
{
    if constexpr (is_exact_scalar_v<S>) return v.get_d();
    else return static_cast<double>(v);
}

// x = a + b i + c j + d k
template <class S>
struct Quaternion {
    S a{0}, b{0}, c{0}, d{0};

    Quaternion() = default;
    Quaternion(S a_, S b_ = S(0), S c_ = S(0), S d_ = S(0))
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

    static Quaternion unit_i() { return {S(0), S(1), S(0), S(0)}; }
    static Quaternion unit_j() { return {S(0), S(0), S(1), S(0)}; }
    static Quaternion unit_k() { return {S(0), S(0), S(0), S(1)}; }

    Quaternion conj() const { return {a, S(-b), S(-c), S(-d)}; }
    S norm2() const { return S(a * a + b * b + c * c + d * d); }
    bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }

    friend Quaternion operator+(const Quaternion& p, const Quaternion& q)
    {
        return {S(p.a + q.a), S(p.b + q.b), S(p.c + q.c), S(p.d + q.d)};
    }
    friend Quaternion operator-(const Quaternion& p, const Quaternion& q)
    {
        return {S(p.a - q.a), S(p.b - q.b), S(p.c - q.c), S(p.d - q.d)};
    }
    friend Quaternion operator-(const Quaternion& p) { return {S(-p.a), S(-p.b), S(-p.c), S(-p.d)}; }

    // i^2 = j^2 = k^2 = ijk = -1
    friend Quaternion operator*(const Quaternion& p, const Quaternion& q)
    {
        return {S(p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d),
                S(p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c),
                S(p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b),
                S(p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a)};
    }
    friend Quaternion operator*(const S& s, const Quaternion& q)
    {
        return {S(s * q.a), S(s * q.b), S(s * q.c), S(s * q.d)};
    }

    friend bool operator==(const Quaternion& p, const Quaternion& q)
    {
        return p.a == q.a && p.b == q.b && p.c == q.c && p.d == q.d;
    }
};

template <class S>
Quaternion<S> quat_mul(const Quaternion<S>& p, const Quaternion<S>& q)
{
    return p * q;
}

template <class S>
double quat_abs(const Quaternion<S>& q)
{
    return std::sqrt(to_double(q.norm2()));
}

// Point of H^n; quaternion scalars act on the left.
template <class S>
struct HPoint {
    std::vector<Quaternion<S>> coords;

    HPoint() = default;
    explicit HPoint(std::vector<Quaternion<S>> c) : coords(std::move(c)) {}

    int n() const { return static_cast<int>(coords.size()); }

    static HPoint basis(int n, int index = 0)
    {
        HPoint p;
        p.coords.resize(static_cast<std::size_t>(n));
        p.coords.at(static_cast<std::size_t>(index)).a = 1;
        return p;
    }

    // (a1,b1,c1,d1,...,an,bn,cn,dn)
    std::vector<S> real_coords() const
    {
        std::vector<S> out;
        out.reserve(coords.size() * 4);
        for (const auto& q : coords) {
            out.push_back(q.a);
            out.push_back(q.b);
            out.push_back(q.c);
            out.push_back(q.d);
        }
        return out;
    }

    static HPoint from_real(const std::vector<S>& xi)
    {
        if (xi.size() % 4 != 0) throw std::invalid_argument("HPoint: coordinate count not a multiple of 4");
        HPoint p;
        for (std::size_t k = 0; k < xi.size(); k += 4) p.coords.emplace_back(xi[k], xi[k + 1], xi[k + 2], xi[k + 3]);
        return p;
    }

    friend HPoint operator*(const Quaternion<S>& q, const HPoint& x)
    {
        HPoint r;
        for (const auto& c : x.coords) r.coords.push_back(q * c);
        return r;
    }
    friend HPoint operator+(const HPoint& x, const HPoint& y)
    {
        if (x.n() != y.n()) throw std::invalid_argument("HPoint: dimension mismatch");
        HPoint r;
        for (std::size_t k = 0; k < x.coords.size(); ++k) r.coords.push_back(x.coords[k] + y.coords[k]);
        return r;
    }
    friend bool operator==(const HPoint&, const HPoint&) = default;
};

// <x,y> = sum_j x_j conj(y_j)
template <class S>
Quaternion<S> hermitian_inner(const HPoint<S>& x, const HPoint<S>& y)
{
    if (x.n() != y.n()) throw std::invalid_argument("hermitian_inner: dimension mismatch");
    Quaternion<S> acc;
    for (std::size_t k = 0; k < x.coords.size(); ++k) acc = acc + x.coords[k] * y.coords[k].conj();
    return acc;
}

template <class S>
class SpherePoint {
public:
    static constexpr double float_tolerance = 1e-12;

    explicit SpherePoint(HPoint<S> p) : point_(std::move(p))
    {
        S nn = hermitian_inner(point_, point_).a;
        if constexpr (is_exact_scalar_v<S>) {
            if (nn != 1) throw std::invalid_argument("SpherePoint: not a unit vector");
        } else {
            if (std::abs(std::sqrt(nn) - 1.0) > float_tolerance)
                throw std::invalid_argument("SpherePoint: not a unit vector");
        }
    }

    static SpherePoint basis(int n, int index = 0) { return SpherePoint(HPoint<S>::basis(n, index)); }

    const HPoint<S>& point() const { return point_; }
    int n() const { return point_.n(); }
    static constexpr bool exact() { return is_exact_scalar_v<S>; }

private:
    HPoint<S> point_;
};

// 1 - |<x,y>|^2, exact in the exact domain
template <class S>
S weight_w_squared(const SpherePoint<S>& x, const SpherePoint<S>& y)
{
    return S(1 - hermitian_inner(x.point(), y.point()).norm2());
}

template <class S>
double weight_w(const SpherePoint<S>& x, const SpherePoint<S>& y)
{
    S w2 = weight_w_squared(x, y);
    if constexpr (is_exact_scalar_v<S>) {
        if (w2 < 0) throw std::domain_error("weight_w: negative radicand");
        return std::sqrt(w2.get_d());
    } else {
        if (w2 < -SpherePoint<S>::float_tolerance) throw std::domain_error("weight_w: negative radicand");
        return std::sqrt(std::max(w2, 0.0));
    }
}

// |1 - <x,y>|^{1/2}
template <class S>
double quasi_dist(const SpherePoint<S>& x, const SpherePoint<S>& y)
{
    Quaternion<S> one(S(1));
    S m2 = (one - hermitian_inner(x.point(), y.point())).norm2();
    return std::pow(to_double(m2), 0.25);
}

inline SpherePoint<double> sample_sphere(std::mt19937_64& rng, int n)
{
    if (n < 2) throw std::invalid_argument("sample_sphere: n must be at least 2");
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> xi(static_cast<std::size_t>(4 * n));
    double nn = 0;
    do {
        nn = 0;
        for (auto& v : xi) {
            v = g(rng);
            nn += v * v;
        }
    } while (nn == 0);
    double s = 1.0 / std::sqrt(nn);
    for (auto& v : xi) v *= s;
    return SpherePoint<double>(HPoint<double>::from_real(xi));
}

inline SpherePoint<double> sample_sphere(std::uint64_t seed, int n)
{
    std::mt19937_64 rng(seed);
    return sample_sphere(rng, n);
}

} // namespace qsharm
