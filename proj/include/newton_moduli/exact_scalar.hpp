#pragma once

#include <compare>
#include <complex>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "error.hpp"

namespace newton_moduli {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1)
{
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Gaussian rational re + im*i with exact arithmetic.
class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(long re) : re_(re) {}  // NOLINT: integers promote implicitly
    ExactScalar(Rational re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
    ExactScalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im))
    {
        re_.canonicalize();
        im_.canonicalize();
    }

    static ExactScalar i() { return {Rational(0), Rational(1)}; }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    ExactScalar conj() const { return {re_, -im_}; }
    Rational norm() const { return re_ * re_ + im_ * im_; }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    ExactScalar operator-() const { return {-re_, -im_}; }

    ExactScalar& operator+=(const ExactScalar& o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    ExactScalar& operator-=(const ExactScalar& o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    ExactScalar& operator*=(const ExactScalar& o)
    {
        if (sgn(im_) == 0 && sgn(o.im_) == 0) {
            re_ *= o.re_;
            return *this;
        }
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    ExactScalar& operator/=(const ExactScalar& o)
    {
        if (o.is_zero())
            throw Error(ErrorCode::InvalidArgument, "division by zero scalar");
        if (sgn(o.im_) == 0) {
            re_ /= o.re_;
            im_ /= o.re_;
            return *this;
        }
        Rational n = o.norm();
        *this *= o.conj();
        re_ /= n;
        im_ /= n;
        return *this;
    }

    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
    friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }

    friend bool operator==(const ExactScalar& a, const ExactScalar& b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    // Lexicographic (re, im). Not a field order; used for deterministic output.
    friend std::strong_ordering operator<=>(const ExactScalar& a, const ExactScalar& b)
    {
        int c = cmp(a.re_, b.re_);
        if (c == 0)
            c = cmp(a.im_, b.im_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    /// Literal form accepted by the series parser, e.g. `1/2-3/4*i`.
    std::string str() const
    {
        if (sgn(im_) == 0)
            return re_.get_str();
        std::string imag;
        Rational a = abs(im_);
        imag = (a == 1) ? "i" : a.get_str() + "*i";
        if (sgn(re_) == 0)
            return sgn(im_) < 0 ? "-" + imag : imag;
        return re_.get_str() + (sgn(im_) < 0 ? "-" : "+") + imag;
    }

    friend std::ostream& operator<<(std::ostream& os, const ExactScalar& s) { return os << s.str(); }

private:
    Rational re_{0};
    Rational im_{0};
};

inline ExactScalar pow(ExactScalar base, unsigned exp)
{
    ExactScalar result(1);
    while (exp) {
        if (exp & 1u)
            result *= base;
        base *= base;
        exp >>= 1u;
    }
    return result;
}

} // namespace newton_moduli
