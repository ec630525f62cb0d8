#pragma once

#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace newton_moduli {

/// A point of the projective line: a finite exact scalar or infinity.
/// Finite points are ordered (re, im) lexicographically and precede infinity.
class P1Point {
public:
    P1Point() = default;
    P1Point(ExactScalar z) : value_(std::move(z)) {}  // NOLINT
    P1Point(long z) : value_(ExactScalar(z)) {}       // NOLINT

    static P1Point infinity() { return P1Point(std::nullopt); }

    bool is_infinity() const { return !value_.has_value(); }
    bool is_finite() const { return value_.has_value(); }
    const ExactScalar& value() const
    {
        if (!value_)
            throw Error(ErrorCode::InvalidArgument, "infinity has no finite value");
        return *value_;
    }

    /// Homogeneous coordinates [x : y].
    std::pair<ExactScalar, ExactScalar> homogeneous() const
    {
        if (!value_)
            return {ExactScalar(1), ExactScalar(0)};
        return {*value_, ExactScalar(1)};
    }

    static P1Point from_homogeneous(const ExactScalar& x, const ExactScalar& y)
    {
        if (x.is_zero() && y.is_zero())
            throw Error(ErrorCode::DegenerateInput, "[0:0] is not a point of P^1");
        if (y.is_zero())
            return infinity();
        return P1Point(x / y);
    }

    std::string str() const { return value_ ? value_->str() : "inf"; }
    friend std::ostream& operator<<(std::ostream& os, const P1Point& p) { return os << p.str(); }

    friend bool operator==(const P1Point& a, const P1Point& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const P1Point& a, const P1Point& b)
    {
        if (a.is_infinity() || b.is_infinity()) {
            if (a.is_infinity() && b.is_infinity())
                return std::strong_ordering::equal;
            return a.is_infinity() ? std::strong_ordering::greater : std::strong_ordering::less;
        }
        return *a.value_ <=> *b.value_;
    }

private:
    explicit P1Point(std::optional<ExactScalar> v) : value_(std::move(v)) {}
    std::optional<ExactScalar> value_;
};

/// Binary form sum c_i X^i Y^(deg-i), coefficients indexed by X-exponent.
class HomogeneousForm {
public:
    HomogeneousForm() = default;
    HomogeneousForm(int degree, std::vector<ExactScalar> coeffs) : degree_(degree), coeffs_(std::move(coeffs))
    {
        if (degree < 0)
            throw Error(ErrorCode::InvalidArgument, "negative form degree");
        coeffs_.resize(static_cast<std::size_t>(degree) + 1);
    }

    static HomogeneousForm zero(int degree) { return HomogeneousForm(degree, {}); }
    static HomogeneousForm constant(ExactScalar c) { return HomogeneousForm(0, {std::move(c)}); }
    static HomogeneousForm monomial(int x_exp, int y_exp, ExactScalar c = ExactScalar(1))
    {
        std::vector<ExactScalar> v(static_cast<std::size_t>(x_exp + y_exp) + 1);
        v[static_cast<std::size_t>(x_exp)] = std::move(c);
        return HomogeneousForm(x_exp + y_exp, std::move(v));
    }
    static HomogeneousForm X() { return monomial(1, 0); }
    static HomogeneousForm Y() { return monomial(0, 1); }
    /// The linear form vanishing at p: X - pY for finite p, Y at infinity.
    static HomogeneousForm vanishing_at(const P1Point& p)
    {
        if (p.is_infinity())
            return Y();
        return HomogeneousForm(1, {-p.value(), ExactScalar(1)});
    }

    /// Form of the given degree whose dehomogenization is p (requires deg p <= degree).
    static HomogeneousForm homogenize(const Polynomial& p, int degree)
    {
        if (p.degree() > degree)
            throw Error(ErrorCode::InvalidArgument, "polynomial degree exceeds form degree");
        return HomogeneousForm(degree, p.coeffs());
    }

    int degree() const { return degree_; }
    const std::vector<ExactScalar>& coeffs() const { return coeffs_; }
    const ExactScalar& coeff(int x_exp) const { return coeffs_[static_cast<std::size_t>(x_exp)]; }

    bool is_zero() const
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const ExactScalar& c) { return c.is_zero(); });
    }

    /// Value at a chosen affine representative ((z,1), or (1,0) at infinity).
    ExactScalar operator()(const P1Point& p) const
    {
        auto [x, y] = p.homogeneous();
        return evaluate(x, y);
    }

    ExactScalar evaluate(const ExactScalar& x, const ExactScalar& y) const
    {
        if (y.is_zero())
            return coeffs_.back() * pow(x, static_cast<unsigned>(degree_));
        // Horner in x/y scaled back: sum c_i x^i y^(d-i)
        ExactScalar acc;
        ExactScalar ypow(1);
        std::vector<ExactScalar> ypows(static_cast<std::size_t>(degree_) + 1);
        for (int k = 0; k <= degree_; ++k) {
            ypows[static_cast<std::size_t>(k)] = ypow;
            ypow *= y;
        }
        ExactScalar xpow(1);
        for (int i = 0; i <= degree_; ++i) {
            if (!coeffs_[static_cast<std::size_t>(i)].is_zero())
                acc += coeffs_[static_cast<std::size_t>(i)] * xpow * ypows[static_cast<std::size_t>(degree_ - i)];
            xpow *= x;
        }
        return acc;
    }

    /// Multiplicity of infinity ([1:0]) as a zero, i.e. the power of Y dividing the form.
    int infinity_multiplicity() const
    {
        for (int i = degree_; i >= 0; --i)
            if (!coeffs_[static_cast<std::size_t>(i)].is_zero())
                return degree_ - i;
        return degree_;
    }

    /// Dehomogenization F(z, 1).
    Polynomial dehomogenize() const { return Polynomial(coeffs_); }

    /// Scales so that the first nonzero coefficient, reading from the highest
    /// X-exponent down, is 1 (monic in X when Y does not divide the form).
    HomogeneousForm normalized() const
    {
        ExactScalar lead = first_nonzero();
        if (lead.is_zero())
            return *this;
        HomogeneousForm r = *this;
        ExactScalar inv = ExactScalar(1) / lead;
        for (auto& x : r.coeffs_)
            x *= inv;
        return r;
    }

    ExactScalar first_nonzero() const
    {
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            if (!it->is_zero())
                return *it;
        return {};
    }

    HomogeneousForm& operator+=(const HomogeneousForm& o)
    {
        require_same_degree(o);
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            coeffs_[k] += o.coeffs_[k];
        return *this;
    }
    HomogeneousForm& operator-=(const HomogeneousForm& o)
    {
        require_same_degree(o);
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            coeffs_[k] -= o.coeffs_[k];
        return *this;
    }
    friend HomogeneousForm operator+(HomogeneousForm a, const HomogeneousForm& b) { return a += b; }
    friend HomogeneousForm operator-(HomogeneousForm a, const HomogeneousForm& b) { return a -= b; }
    friend HomogeneousForm operator*(const HomogeneousForm& a, const HomogeneousForm& b)
    {
        HomogeneousForm out = zero(a.degree_ + b.degree_);
        for (int i = 0; i <= a.degree_; ++i) {
            const auto& ai = a.coeffs_[static_cast<std::size_t>(i)];
            if (ai.is_zero())
                continue;
            for (int j = 0; j <= b.degree_; ++j) {
                const auto& bj = b.coeffs_[static_cast<std::size_t>(j)];
                if (!bj.is_zero())
                    out.coeffs_[static_cast<std::size_t>(i + j)] += ai * bj;
            }
        }
        return out;
    }
    friend HomogeneousForm operator*(const ExactScalar& s, HomogeneousForm f)
    {
        for (auto& c : f.coeffs_)
            c *= s;
        return f;
    }
    friend bool operator==(const HomogeneousForm& a, const HomogeneousForm& b)
    {
        return a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
    }

    /// Equality up to a nonzero scalar.
    bool projectively_equal(const HomogeneousForm& o) const { return normalized() == o.normalized(); }

    friend std::ostream& operator<<(std::ostream& os, const HomogeneousForm& f) { return os << f.str(); }

    std::string str() const
    {
        std::string out;
        for (int i = degree_; i >= 0; --i) {
            const auto& c = coeffs_[static_cast<std::size_t>(i)];
            if (c.is_zero())
                continue;
            std::string mono;
            auto add = [&mono](const std::string& s) { mono += mono.empty() ? s : "*" + s; };
            if (i > 0)
                add(i == 1 ? "X" : "X^" + std::to_string(i));
            if (degree_ - i > 0)
                add(degree_ - i == 1 ? "Y" : "Y^" + std::to_string(degree_ - i));
            std::string coeff = c.str();
            const bool compound = !c.is_real() && sgn(c.re()) != 0;
            if (compound)
                coeff = "(" + coeff + ")";
            std::string term;
            if (mono.empty())
                term = coeff;
            else if (c.is_one())
                term = mono;
            else if (c == ExactScalar(-1))
                term = "-" + mono;
            else
                term = coeff + "*" + mono;
            if (out.empty())
                out = term;
            else if (term.front() == '-')
                out += " - " + term.substr(1);
            else
                out += " + " + term;
        }
        return out.empty() ? "0" : out;
    }

private:
    void require_same_degree(const HomogeneousForm& o) const
    {
        if (o.degree_ != degree_)
            throw Error(ErrorCode::InvalidArgument, "form degrees differ");
    }

    int degree_ = 0;
    std::vector<ExactScalar> coeffs_{ExactScalar()};
};

inline HomogeneousForm pow(const HomogeneousForm& f, int exp)
{
    HomogeneousForm result = HomogeneousForm::constant(ExactScalar(1));
    HomogeneousForm base = f;
    while (exp > 0) {
        if (exp & 1)
            result = result * base;
        exp >>= 1;
        if (exp)
            base = base * base;
    }
    return result;
}

/// Exact quotient of forms; throws unless b divides a.
inline HomogeneousForm exact_divide(const HomogeneousForm& a, const HomogeneousForm& b)
{
    if (b.is_zero())
        throw Error(ErrorCode::DegenerateInput, "division by the zero form");
    if (a.is_zero())
        return HomogeneousForm::zero(a.degree() - b.degree());
    const int ka = a.infinity_multiplicity();
    const int kb = b.infinity_multiplicity();
    if (kb > ka)
        throw Error(ErrorCode::InvalidArgument, "form division is not exact");
    Polynomial q = exact_divide(a.dehomogenize(), b.dehomogenize());
    return HomogeneousForm::homogenize(q, a.degree() - b.degree());
}

struct FormGcd {
    HomogeneousForm common;  ///< H, normalized
    HomogeneousForm first;   ///< A1 with A = H*A1
    HomogeneousForm second;  ///< B1 with B = H*B1
};

/// gcd of two binary forms with cofactors. The zero form is divisible by
/// everything, so gcd(0, B) = B (normalized).
inline FormGcd poly_gcd(const HomogeneousForm& a, const HomogeneousForm& b)
{
    if (a.is_zero() && b.is_zero())
        throw Error(ErrorCode::DegenerateInput, "gcd of two zero forms");
    HomogeneousForm h;
    if (a.is_zero()) {
        h = b.normalized();
    } else if (b.is_zero()) {
        h = a.normalized();
    } else {
        const int k = std::min(a.infinity_multiplicity(), b.infinity_multiplicity());
        Polynomial g = gcd(a.dehomogenize(), b.dehomogenize());
        h = (HomogeneousForm::homogenize(g, g.degree()) * pow(HomogeneousForm::Y(), k)).normalized();
    }
    return {h, exact_divide(a, h), exact_divide(b, h)};
}

/// Linear factors over Q(i) with multiplicity plus the parts without roots in Q(i).
struct FormFactorization {
    std::vector<std::pair<P1Point, int>> roots;
    /// (root-free square-free factor, multiplicity); its roots lie outside Q(i).
    std::vector<std::pair<HomogeneousForm, int>> irreducible;
    ExactScalar unit{1};
};

/// Square-free parts of a nonzero form: result[k-1] collects the roots of
/// multiplicity exactly k (a normalized form, possibly constant 1).
inline std::vector<HomogeneousForm> squarefree_strata(const HomogeneousForm& f)
{
    if (f.is_zero())
        throw Error(ErrorCode::DegenerateInput, "square-free decomposition of the zero form");
    const int k_inf = f.infinity_multiplicity();
    auto parts = squarefree_decomposition(f.dehomogenize());
    std::size_t n = std::max(parts.size(), static_cast<std::size_t>(k_inf));
    std::vector<HomogeneousForm> out;
    for (std::size_t k = 0; k < n; ++k) {
        HomogeneousForm part = HomogeneousForm::constant(ExactScalar(1));
        if (k < parts.size())
            part = HomogeneousForm::homogenize(parts[k], parts[k].degree());
        if (static_cast<int>(k) + 1 == k_inf)
            part = part * HomogeneousForm::Y();
        out.push_back(part.normalized());
    }
    return out;
}

inline FormFactorization roots_of_form(const HomogeneousForm& f)
{
    if (f.is_zero())
        throw Error(ErrorCode::DegenerateInput, "roots of the zero form");
    FormFactorization out;
    auto strata = squarefree_strata(f);
    HomogeneousForm reconstructed = HomogeneousForm::constant(ExactScalar(1));
    for (std::size_t k = 0; k < strata.size(); ++k) {
        const int mult = static_cast<int>(k) + 1;
        const HomogeneousForm& part = strata[k];
        if (part.degree() == 0)
            continue;
        reconstructed = reconstructed * pow(part, mult);
        HomogeneousForm finite_part = part;
        if (part.infinity_multiplicity() > 0) {
            out.roots.emplace_back(P1Point::infinity(), mult);
            finite_part = exact_divide(part, HomogeneousForm::Y());
        }
        auto [found, rest] = gaussian_rational_roots(finite_part.dehomogenize());
        for (auto& r : found)
            out.roots.emplace_back(P1Point(r), mult);
        if (rest.degree() > 0)
            out.irreducible.emplace_back(HomogeneousForm::homogenize(rest.monic(), rest.degree()), mult);
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.unit = f.first_nonzero() / reconstructed.first_nonzero();
    return out;
}

/// F(G_a, G_b): substitutes a pair of forms of a common degree into f.
inline HomogeneousForm substitute(const HomogeneousForm& f, const HomogeneousForm& ga, const HomogeneousForm& gb)
{
    if (ga.degree() != gb.degree())
        throw Error(ErrorCode::InvalidArgument, "substituted forms must share a degree");
    const int d = f.degree();
    std::vector<HomogeneousForm> pa{HomogeneousForm::constant(ExactScalar(1))};
    std::vector<HomogeneousForm> pb{HomogeneousForm::constant(ExactScalar(1))};
    for (int k = 1; k <= d; ++k) {
        pa.push_back(pa.back() * ga);
        pb.push_back(pb.back() * gb);
    }
    HomogeneousForm out = HomogeneousForm::zero(d * ga.degree());
    for (int i = 0; i <= d; ++i) {
        const auto& c = f.coeff(i);
        if (c.is_zero())
            continue;
        out += c * (pa[static_cast<std::size_t>(i)] * pb[static_cast<std::size_t>(d - i)]);
    }
    return out;
}

} // namespace newton_moduli
