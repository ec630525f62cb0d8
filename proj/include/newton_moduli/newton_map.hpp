#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "homogeneous_pair.hpp"

namespace newton_moduli {

/// Multiset of points of P^1 with total multiplicity d >= 2.
/// Entries are kept sorted by point with pairwise distinct points.
class RootDivisor {
public:
    using Entry = std::pair<P1Point, int>;

    RootDivisor() = default;

    explicit RootDivisor(const std::vector<Entry>& entries)
    {
        std::map<P1Point, int> merged;
        for (const auto& [p, m] : entries) {
            if (m <= 0)
                throw Error(ErrorCode::InvalidArgument, "divisor multiplicities must be positive");
            merged[p] += m;
        }
        for (auto& [p, m] : merged) {
            entries_.emplace_back(p, m);
            degree_ += m;
        }
        if (degree_ < 2)
            throw Error(ErrorCode::InvalidArgument, "divisor degree must be at least 2");
    }

    /// Divisor of a list of roots given with repetition.
    static RootDivisor from_points(const std::vector<P1Point>& points)
    {
        std::vector<Entry> e;
        for (const auto& p : points)
            e.emplace_back(p, 1);
        return RootDivisor(e);
    }

    int degree() const { return degree_; }
    const std::vector<Entry>& entries() const { return entries_; }

    int multiplicity(const P1Point& p) const
    {
        for (const auto& [q, m] : entries_)
            if (q == p)
                return m;
        return 0;
    }
    int infinity_multiplicity() const { return multiplicity(P1Point::infinity()); }

    std::vector<std::pair<ExactScalar, int>> finite_entries() const
    {
        std::vector<std::pair<ExactScalar, int>> out;
        for (const auto& [p, m] : entries_)
            if (p.is_finite())
                out.emplace_back(p.value(), m);
        return out;
    }

    /// Image under z -> M(z).
    RootDivisor transformed(const Moebius& m) const
    {
        std::vector<Entry> e;
        for (const auto& [p, k] : entries_)
            e.emplace_back(m(p), k);
        return RootDivisor(e);
    }

    /// `{0:2, 1:1, inf:1}`
    std::string str() const
    {
        std::string s = "{";
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i)
                s += ", ";
            s += entries_[i].first.str() + ":" + std::to_string(entries_[i].second);
        }
        return s + "}";
    }

    friend bool operator==(const RootDivisor& a, const RootDivisor& b) { return a.entries_ == b.entries_; }

private:
    std::vector<Entry> entries_;
    int degree_ = 0;
};

/// (Degenerate) Newton map N = H * Nhat attached to a root divisor.
class NewtonMap {
public:
    NewtonMap(RootDivisor source, HomogeneousPair pair, PairFactorization factorization)
        : source_(std::move(source)), pair_(std::move(pair)), factorization_(std::move(factorization)) {}

    const RootDivisor& source() const { return source_; }
    const HomogeneousPair& pair() const { return pair_; }
    const PairFactorization& factorization() const { return factorization_; }
    int degree() const { return source_.degree(); }
    int reduced_degree() const { return factorization_.reduced_degree(); }
    bool is_degenerate() const { return factorization_.hole_form.degree() > 0; }

private:
    RootDivisor source_;
    HomogeneousPair pair_;
    PairFactorization factorization_;
};

/// Newton map of prod (z - s)^{m_s} over the finite support, with holes of
/// depth m_s - 1 at finite roots and depth m_inf at infinity.
inline NewtonMap newton_from_divisor(const RootDivisor& div)
{
    auto finite = div.finite_entries();
    if (finite.empty())
        throw Error(ErrorCode::UnsupportedDivisor, "all roots at infinity: no Newton map");
    const int d = div.degree();

    // Q = prod (X - sY), S = sum m_s prod_{j != s} (X - s_j Y); reduced map [X S - Q : Y S]
    std::vector<HomogeneousForm> linear;
    for (const auto& [s, m] : finite)
        linear.push_back(HomogeneousForm::vanishing_at(P1Point(s)));
    HomogeneousForm q = HomogeneousForm::constant(ExactScalar(1));
    for (const auto& l : linear)
        q = q * l;
    const int n = static_cast<int>(finite.size());
    HomogeneousForm sum = HomogeneousForm::zero(n - 1);
    for (int i = 0; i < n; ++i) {
        HomogeneousForm term = HomogeneousForm::constant(ExactScalar(static_cast<long>(finite[static_cast<std::size_t>(i)].second)));
        for (int j = 0; j < n; ++j)
            if (j != i)
                term = term * linear[static_cast<std::size_t>(j)];
        sum += term;
    }
    HomogeneousForm na = HomogeneousForm::X() * sum - q;
    HomogeneousForm nb = HomogeneousForm::Y() * sum;

    HomogeneousForm h = pow(HomogeneousForm::Y(), div.infinity_multiplicity());
    for (std::size_t i = 0; i < finite.size(); ++i)
        h = h * pow(linear[i], finite[i].second - 1);

    HomogeneousPair pair = HomogeneousPair::from_factored(h, na, nb);
    // The reduced numerator/denominator are coprime except for a single simple
    // root, whose Newton map is constant; factoring the pair covers both.
    PairFactorization fac = pair.factor();
    if (pair.degree() != d)
        throw Error(ErrorCode::InvalidArgument, "internal: Newton pair degree mismatch");
    return NewtonMap(div, std::move(pair), std::move(fac));
}

/// Holes of N (zeros of H) with depths. Newton holes always lie in the scalar field.
inline std::vector<std::pair<P1Point, int>> holes_and_depths(const NewtonMap& n)
{
    if (n.factorization().hole_form.degree() == 0)
        return {};
    auto fac = roots_of_form(n.factorization().hole_form);
    if (!fac.irreducible.empty())
        throw Error(ErrorCode::InexactFactor, "Newton map hole outside the scalar field");
    return fac.roots;
}

/// Derivative of the reduced map at a finite point p with finite image.
inline ExactScalar reduced_derivative(const PairFactorization& f, const ExactScalar& p)
{
    Polynomial a = f.reduced_a.dehomogenize();
    Polynomial b = f.reduced_b.dehomogenize();
    ExactScalar bv = b(p);
    if (bv.is_zero())
        throw Error(ErrorCode::InvalidArgument, "reduced map has a pole at the point");
    return (a.derivative()(p) * bv - a(p) * b.derivative()(p)) / (bv * bv);
}

/// Multiplier (m-1)/m at a root of multiplicity m, confirmed against the exact
/// derivative of the reduced map.
inline ExactScalar multiplier_at_root(const NewtonMap& n, const P1Point& s)
{
    const int m = s.is_finite() ? n.source().multiplicity(s) : 0;
    if (m == 0)
        throw Error(ErrorCode::NotARoot, s.str() + " is not a finite root of the divisor");
    ExactScalar expected(make_rational(m - 1, m));
    if (n.reduced_degree() >= 1) {
        ExactScalar derivative = reduced_derivative(n.factorization(), s.value());
        if (derivative != expected)
            throw Error(ErrorCode::InvalidArgument, "internal: multiplier mismatch at " + s.str());
    }
    return expected;
}

/// Newton map with its fixed points marked as (inf, r_1, ..., r_d); escaped
/// roots appear as further copies of infinity.
class MarkedNewtonMap {
public:
    explicit MarkedNewtonMap(std::vector<P1Point> roots)
        : map_(newton_from_divisor(RootDivisor::from_points(roots))), roots_(std::move(roots)) {}

    const NewtonMap& map() const { return map_; }
    const std::vector<P1Point>& roots() const { return roots_; }

    std::vector<P1Point> marks() const
    {
        std::vector<P1Point> out{P1Point::infinity()};
        out.insert(out.end(), roots_.begin(), roots_.end());
        return out;
    }

private:
    NewtonMap map_;
    std::vector<P1Point> roots_;
};

} // namespace newton_moduli
