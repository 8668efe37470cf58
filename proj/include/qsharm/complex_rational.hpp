#pragma once

#include <gmpxx.h>

#include <complex>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qsharm {

// Exact complex number with rational parts.
class ComplexRational {
public:
    ComplexRational() = default;
    ComplexRational(long v) : re_(v) {}
    ComplexRational(int v) : re_(v) {}
    ComplexRational(mpq_class re) : re_(std::move(re)) {}
    ComplexRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

    static ComplexRational i() { return {mpq_class(0), mpq_class(1)}; }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    ComplexRational conj() const { return {re_, -im_}; }
    mpq_class norm2() const { return re_ * re_ + im_ * im_; }

    ComplexRational& operator+=(const ComplexRational& o)
    {
        re_ += o.re_;
        if (sgn(o.im_) != 0) im_ += o.im_;
        return *this;
    }
    ComplexRational& operator-=(const ComplexRational& o)
    {
        re_ -= o.re_;
        if (sgn(o.im_) != 0) im_ -= o.im_;
        return *this;
    }
    ComplexRational& operator*=(const ComplexRational& o)
    {
        *this = *this * o;
        return *this;
    }
    ComplexRational& operator/=(const ComplexRational& o)
    {
        *this = *this / o;
        return *this;
    }

    friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
    friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
    friend ComplexRational operator-(const ComplexRational& a) { return {-a.re_, -a.im_}; }

    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b)
    {
        // most coefficients in practice are real
        if (a.is_real() && b.is_real()) return {mpq_class(a.re_ * b.re_)};
        if (a.is_real()) return {mpq_class(a.re_ * b.re_), mpq_class(a.re_ * b.im_)};
        if (b.is_real()) return {mpq_class(a.re_ * b.re_), mpq_class(a.im_ * b.re_)};
        return {mpq_class(a.re_ * b.re_ - a.im_ * b.im_), mpq_class(a.re_ * b.im_ + a.im_ * b.re_)};
    }

    friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b)
    {
        if (b.is_zero()) throw std::domain_error("ComplexRational: division by zero");
        if (b.is_real()) return {mpq_class(a.re_ / b.re_), mpq_class(a.im_ / b.re_)};
        mpq_class d = b.norm2();
        ComplexRational num = a * b.conj();
        return {mpq_class(num.re_ / d), mpq_class(num.im_ / d)};
    }

    friend bool operator==(const ComplexRational& a, const ComplexRational& b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    friend std::ostream& operator<<(std::ostream& os, const ComplexRational& z)
    {
        os << z.re_;
        if (!z.is_real()) os << (sgn(z.im_) < 0 ? " - " : " + ") << abs(z.im_) << "i";
        return os;
    }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

inline mpq_class parse_rational(const std::string& s)
{
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline std::string rational_str(const mpq_class& q)
{
    return q.get_str();
}

inline mpz_class factorial(long k)
{
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

// C(a, b), zero outside 0 <= b <= a
inline mpz_class binomial(long a, long b)
{
    if (b < 0 || a < 0 || b > a) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
    return r;
}

inline mpz_class double_factorial(long k)
{
    if (k <= 0) return 1;
    mpz_class r;
    mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

} // namespace qsharm
