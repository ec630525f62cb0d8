#pragma once

#include <array>
#include <string>
#include <utility>

#include "homogeneous_form.hpp"

namespace newton_moduli {

/// z -> (alpha z + beta) / (gamma z + delta), acting on [X:Y] by the matrix
/// [[alpha, beta], [gamma, delta]]. Determinant must be nonzero.
class Moebius {
public:
    Moebius() = default;
    Moebius(ExactScalar alpha, ExactScalar beta, ExactScalar gamma, ExactScalar delta)
        : alpha_(std::move(alpha)), beta_(std::move(beta)), gamma_(std::move(gamma)), delta_(std::move(delta))
    {
        if (det().is_zero())
            throw Error(ErrorCode::InvalidArgument, "singular Moebius matrix");
    }

    static Moebius affine(const ExactScalar& a, const ExactScalar& b) { return {a, b, ExactScalar(0), ExactScalar(1)}; }

    /// The map sending p0 -> 0, p1 -> 1, p2 -> infinity (points pairwise distinct).
    static Moebius to_standard_triple(const P1Point& p0, const P1Point& p1, const P1Point& p2)
    {
        auto [x0, y0] = p0.homogeneous();
        auto [x1, y1] = p1.homogeneous();
        auto [x2, y2] = p2.homogeneous();
        // numerator linear form vanishing at p0, denominator vanishing at p2,
        // scaled so that p1 maps to 1.
        ExactScalar num_p1 = y0 * x1 - x0 * y1;
        ExactScalar den_p1 = y2 * x1 - x2 * y1;
        if (num_p1.is_zero() || den_p1.is_zero() || (y0 * x2 - x0 * y2).is_zero())
            throw Error(ErrorCode::InvalidArgument, "standard triple points must be distinct");
        ExactScalar s = den_p1 / num_p1;
        return {s * y0, -(s * x0), y2, -x2};
    }

    /// The map sending p_i -> q_i for three distinct points on each side.
    static Moebius from_triples(const std::array<P1Point, 3>& p, const std::array<P1Point, 3>& q)
    {
        return to_standard_triple(q[0], q[1], q[2]).inverse() * to_standard_triple(p[0], p[1], p[2]);
    }

    const ExactScalar& alpha() const { return alpha_; }
    const ExactScalar& beta() const { return beta_; }
    const ExactScalar& gamma() const { return gamma_; }
    const ExactScalar& delta() const { return delta_; }
    ExactScalar det() const { return alpha_ * delta_ - beta_ * gamma_; }

    bool is_affine() const { return gamma_.is_zero(); }

    P1Point operator()(const P1Point& p) const
    {
        auto [x, y] = p.homogeneous();
        return P1Point::from_homogeneous(alpha_ * x + beta_ * y, gamma_ * x + delta_ * y);
    }

    Moebius inverse() const { return {delta_, -beta_, -gamma_, alpha_}; }

    /// Composition (this after other).
    friend Moebius operator*(const Moebius& m, const Moebius& n)
    {
        return {m.alpha_ * n.alpha_ + m.beta_ * n.gamma_, m.alpha_ * n.beta_ + m.beta_ * n.delta_,
                m.gamma_ * n.alpha_ + m.delta_ * n.gamma_, m.gamma_ * n.beta_ + m.delta_ * n.delta_};
    }

    /// Equality as elements of PGL_2.
    bool projectively_equal(const Moebius& o) const
    {
        return alpha_ * o.beta_ == beta_ * o.alpha_ && alpha_ * o.gamma_ == gamma_ * o.alpha_ &&
               alpha_ * o.delta_ == delta_ * o.alpha_ && beta_ * o.gamma_ == gamma_ * o.beta_ &&
               beta_ * o.delta_ == delta_ * o.beta_ && gamma_ * o.delta_ == delta_ * o.gamma_;
    }

    std::string str() const
    {
        return "[[" + alpha_.str() + ", " + beta_.str() + "], [" + gamma_.str() + ", " + delta_.str() + "]]";
    }

private:
    ExactScalar alpha_{1}, beta_{0}, gamma_{0}, delta_{1};
};

/// Reduced form f = H * fhat of a pair.
struct PairFactorization {
    HomogeneousForm hole_form;  ///< H = gcd(F_a, F_b), normalized
    HomogeneousForm reduced_a;
    HomogeneousForm reduced_b;

    int reduced_degree() const { return reduced_a.degree(); }
};

/// A point [F_a : F_b] of P^{2d+1}: two degree-d forms, not both zero.
class HomogeneousPair {
public:
    HomogeneousPair() = default;
    HomogeneousPair(HomogeneousForm a, HomogeneousForm b) : a_(std::move(a)), b_(std::move(b))
    {
        if (a_.degree() != b_.degree())
            throw Error(ErrorCode::InvalidArgument, "pair forms must share a degree");
        if (a_.is_zero() && b_.is_zero())
            throw Error(ErrorCode::DegenerateInput, "both forms of the pair are zero");
    }

    /// The identity map [X : Y].
    static HomogeneousPair identity() { return {HomogeneousForm::X(), HomogeneousForm::Y()}; }

    /// H * [A : B].
    static HomogeneousPair from_factored(const HomogeneousForm& h, const HomogeneousForm& a, const HomogeneousForm& b)
    {
        return {h * a, h * b};
    }

    int degree() const { return a_.degree(); }
    const HomogeneousForm& first() const { return a_; }
    const HomogeneousForm& second() const { return b_; }

    PairFactorization factor() const
    {
        FormGcd g = poly_gcd(a_, b_);
        return {g.common, g.first, g.second};
    }

    /// Scales so that the first nonzero coefficient of F_a (or of F_b when F_a = 0) is 1.
    HomogeneousPair normalized() const
    {
        ExactScalar lead = a_.first_nonzero();
        if (lead.is_zero())
            lead = b_.first_nonzero();
        ExactScalar inv = ExactScalar(1) / lead;
        return {inv * a_, inv * b_};
    }

    bool projectively_equal(const HomogeneousPair& o) const
    {
        return degree() == o.degree() && normalized() == o.normalized();
    }

    friend bool operator==(const HomogeneousPair& x, const HomogeneousPair& y)
    {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }

    friend std::ostream& operator<<(std::ostream& os, const HomogeneousPair& f) { return os << f.str(); }

    std::string str() const { return "[" + a_.str() + " : " + b_.str() + "]"; }

private:
    HomogeneousForm a_ = HomogeneousForm::X();
    HomogeneousForm b_ = HomogeneousForm::Y();
};

/// Image of p under the reduced map of (a, b) (the pair must be coprime).
inline P1Point apply_reduced(const HomogeneousForm& a, const HomogeneousForm& b, const P1Point& p)
{
    auto [x, y] = p.homogeneous();
    return P1Point::from_homogeneous(a.evaluate(x, y), b.evaluate(x, y));
}

inline P1Point apply_reduced(const PairFactorization& f, const P1Point& p)
{
    return apply_reduced(f.reduced_a, f.reduced_b, p);
}

/// Form vanishing exactly at the fixed points of the reduced map: X*B - Y*A.
/// Zero iff the reduced map is the identity.
inline HomogeneousForm fixed_point_form(const PairFactorization& f)
{
    return HomogeneousForm::X() * f.reduced_b - HomogeneousForm::Y() * f.reduced_a;
}

/// f o g by formal substitution; no common factor is removed.
inline HomogeneousPair compose(const HomogeneousPair& f, const HomogeneousPair& g)
{
    HomogeneousForm a = substitute(f.first(), g.first(), g.second());
    HomogeneousForm b = substitute(f.second(), g.first(), g.second());
    if (a.is_zero() && b.is_zero())
        throw Error(ErrorCode::Indeterminate, "composition vanishes identically (inner map is indeterminate for the outer one)");
    return {std::move(a), std::move(b)};
}

/// M^{-1} o f o M.
inline HomogeneousPair conjugate(const HomogeneousPair& f, const Moebius& m)
{
    HomogeneousForm mx(1, {m.beta(), m.alpha()});   // alpha X + beta Y
    HomogeneousForm my(1, {m.delta(), m.gamma()});  // gamma X + delta Y
    HomogeneousForm a = substitute(f.first(), mx, my);
    HomogeneousForm b = substitute(f.second(), mx, my);
    // adjugate of M applied on the left
    return {m.delta() * a - m.beta() * b, m.alpha() * b - m.gamma() * a};
}

} // namespace newton_moduli
