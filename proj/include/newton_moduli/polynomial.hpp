#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "exact_scalar.hpp"
#include "numeric_roots.hpp"

namespace newton_moduli {

/// Dense univariate polynomial over ExactScalar, coefficients ascending.
/// The zero polynomial has no coefficients and degree -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<ExactScalar> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static Polynomial constant(ExactScalar c) { return Polynomial({std::move(c)}); }
    /// z - root
    static Polynomial linear(const ExactScalar& root) { return Polynomial({-root, ExactScalar(1)}); }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<ExactScalar>& coeffs() const { return coeffs_; }
    const ExactScalar& leading() const { return coeffs_.back(); }
    ExactScalar coeff(int k) const
    {
        return (k < 0 || k > degree()) ? ExactScalar() : coeffs_[static_cast<std::size_t>(k)];
    }

    ExactScalar operator()(const ExactScalar& z) const
    {
        ExactScalar acc;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * z + *it;
        return acc;
    }

    Polynomial derivative() const
    {
        std::vector<ExactScalar> d;
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            d.push_back(coeffs_[k] * ExactScalar(static_cast<long>(k)));
        return Polynomial(std::move(d));
    }

    Polynomial monic() const
    {
        if (is_zero())
            return *this;
        Polynomial r = *this;
        ExactScalar lead = leading();
        for (auto& c : r.coeffs_)
            c /= lead;
        return r;
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        if (o.coeffs_.size() > coeffs_.size())
            coeffs_.resize(o.coeffs_.size());
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k)
            coeffs_[k] += o.coeffs_[k];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o)
    {
        if (o.coeffs_.size() > coeffs_.size())
            coeffs_.resize(o.coeffs_.size());
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k)
            coeffs_[k] -= o.coeffs_[k];
        trim();
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<ExactScalar> out(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero())
                continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return Polynomial(std::move(out));
    }
    friend Polynomial operator*(const ExactScalar& s, Polynomial p)
    {
        for (auto& c : p.coeffs_)
            c *= s;
        p.trim();
        return p;
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

private:
    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back().is_zero())
            coeffs_.pop_back();
    }

    std::vector<ExactScalar> coeffs_;
};

/// Euclidean division: returns (q, r) with a = q*b + r, deg r < deg b.
inline std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b)
{
    if (b.is_zero())
        throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
    std::vector<ExactScalar> rem = a.coeffs();
    const int db = b.degree();
    const int da = a.degree();
    if (da < db)
        return {Polynomial(), a};
    std::vector<ExactScalar> quot(static_cast<std::size_t>(da - db + 1));
    const ExactScalar& lead = b.leading();
    for (int k = da - db; k >= 0; --k) {
        ExactScalar c = rem[static_cast<std::size_t>(k + db)] / lead;
        if (c.is_zero())
            continue;
        for (int j = 0; j <= db; ++j)
            rem[static_cast<std::size_t>(k + j)] -= c * b.coeffs()[static_cast<std::size_t>(j)];
        quot[static_cast<std::size_t>(k)] = std::move(c);
    }
    rem.resize(static_cast<std::size_t>(db));
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

/// Exact quotient; throws if b does not divide a.
inline Polynomial exact_divide(const Polynomial& a, const Polynomial& b)
{
    auto [q, r] = divmod(a, b);
    if (!r.is_zero())
        throw Error(ErrorCode::InvalidArgument, "polynomial division is not exact");
    return q;
}

/// Monic gcd (zero iff both inputs are zero).
inline Polynomial gcd(Polynomial a, Polynomial b)
{
    a = a.monic();
    b = b.monic();
    while (!b.is_zero()) {
        Polynomial r = divmod(a, b).second.monic();
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// Yun's square-free decomposition of a nonconstant polynomial:
/// p = lc * prod_k parts[k-1]^k with every part monic and square-free.
inline std::vector<Polynomial> squarefree_decomposition(const Polynomial& p)
{
    std::vector<Polynomial> parts;
    if (p.degree() < 1)
        return parts;
    Polynomial f = p.monic();
    Polynomial df = f.derivative();
    Polynomial a = gcd(f, df);
    Polynomial b = exact_divide(f, a);
    Polynomial c = exact_divide(df, a);
    Polynomial d = c - b.derivative();
    while (b.degree() > 0) {
        Polynomial g = gcd(b, d);
        parts.push_back(g);
        Polynomial b_next = exact_divide(b, g);
        c = exact_divide(d, g);
        d = c - b_next.derivative();
        b = std::move(b_next);
    }
    while (!parts.empty() && parts.back().degree() == 0)
        parts.pop_back();
    return parts;
}

namespace detail {

inline Integer lcm_denominators(const Polynomial& p)
{
    Integer l = 1;
    for (const auto& c : p.coeffs()) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.re().get_den_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.im().get_den_mpz_t());
    }
    return l;
}

inline Integer round_to_integer(double x)
{
    return Integer(static_cast<long>(std::llround(x)));
}

} // namespace detail

/// Roots of p lying in Q(i), each listed once, together with the cofactor
/// that has no roots in Q(i). p must be square-free and nonzero.
///
/// Candidates come from numerical roots: after clearing denominators, any
/// Gaussian-rational root z satisfies lc*z in Z[i] (rational root theorem in
/// the UFD Z[i]), so rounding lc*z and dividing by lc yields the exact root,
/// which is then verified by exact evaluation.
inline std::pair<std::vector<ExactScalar>, Polynomial> gaussian_rational_roots(const Polynomial& p)
{
    std::vector<ExactScalar> found;
    Polynomial rest = p;
    if (rest.degree() < 1)
        return {found, rest};

    Integer scale = detail::lcm_denominators(rest);
    Polynomial integral = ExactScalar(Rational(scale)) * rest;
    const ExactScalar lead = integral.leading();

    std::vector<numeric::Complex> numeric_coeffs;
    for (const auto& c : rest.coeffs())
        numeric_coeffs.push_back(c.to_complex());
    auto approx = numeric::polynomial_roots(numeric_coeffs);

    const auto lead_c = lead.to_complex();
    for (const auto& z : approx) {
        auto w = z * lead_c;
        if (std::abs(w.real()) > 9e15 || std::abs(w.imag()) > 9e15)
            continue;
        ExactScalar g(Rational(detail::round_to_integer(w.real())), Rational(detail::round_to_integer(w.imag())));
        ExactScalar candidate = g / lead;
        if (std::find(found.begin(), found.end(), candidate) != found.end())
            continue;
        if (rest(candidate).is_zero()) {
            found.push_back(candidate);
            rest = exact_divide(rest, Polynomial::linear(candidate));
        }
    }
    std::sort(found.begin(), found.end());
    return {found, rest};
}

} // namespace newton_moduli
