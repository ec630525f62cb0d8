#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stability.hpp"

namespace newton_moduli {

/// z -> a z + b with a != 0.
struct AffineMap {
    ExactScalar a{1};
    ExactScalar b{0};

    /// The map with p -> 0 and q -> 1.
    static AffineMap anchor(const ExactScalar& p, const ExactScalar& q)
    {
        ExactScalar a = ExactScalar(1) / (q - p);
        return {a, -(a * p)};
    }

    ExactScalar operator()(const ExactScalar& z) const { return a * z + b; }
    P1Point operator()(const P1Point& p) const { return p.is_infinity() ? p : P1Point((*this)(p.value())); }
    AffineMap inverse() const
    {
        ExactScalar inv = ExactScalar(1) / a;
        return {inv, -(inv * b)};
    }
    /// this after other
    AffineMap after(const AffineMap& o) const { return {a * o.a, a * o.b + b}; }
    Moebius moebius() const { return Moebius::affine(a, b); }

    std::string str() const { return "z -> (" + a.str() + ")*z + (" + b.str() + ")"; }
    friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// Finite points with positive weights. `normalization` records the affine
/// map that produced a canonical configuration from its input.
struct WeightedConfiguration {
    std::vector<std::pair<ExactScalar, int>> points;
    std::optional<AffineMap> normalization;

    WeightedConfiguration transformed(const AffineMap& m) const
    {
        WeightedConfiguration out;
        for (const auto& [z, w] : points)
            out.points.emplace_back(m(z), w);
        return out;
    }

    std::string str() const
    {
        std::string s = "{";
        for (std::size_t i = 0; i < points.size(); ++i)
            s += (i ? ", " : "") + points[i].first.str() + ":" + std::to_string(points[i].second);
        return s + "}";
    }

    /// Equality of the weighted point sets (normalization ignored).
    friend bool operator==(const WeightedConfiguration& x, const WeightedConfiguration& y) { return x.points == y.points; }
};

namespace detail {

// Descending coefficients of the monic prod (z - s)^w; identifies the weighted set.
inline std::vector<ExactScalar> configuration_key(const std::vector<std::pair<ExactScalar, int>>& pts)
{
    Polynomial p = Polynomial::constant(ExactScalar(1));
    for (const auto& [z, w] : pts)
        for (int k = 0; k < w; ++k)
            p = p * Polynomial::linear(z);
    std::vector<ExactScalar> key(p.coeffs().rbegin(), p.coeffs().rend());
    return key;
}

inline std::vector<std::pair<ExactScalar, int>> merged_points(const std::vector<std::pair<ExactScalar, int>>& pts)
{
    std::map<ExactScalar, int> m;
    for (const auto& [z, w] : pts) {
        if (w <= 0)
            throw Error(ErrorCode::InvalidArgument, "configuration weights must be positive");
        m[z] += w;
    }
    return {m.begin(), m.end()};
}

} // namespace detail

/// Representative of the configuration modulo affine maps.
///
/// marked: the first two distinct points go to 0 and 1 and the order of the
/// input is kept. unmarked: 0 is a heaviest point, 1 a heaviest among the
/// rest, and among those choices the descending coefficient tuple of
/// prod (z - s)^w is minimized in (re, im) order; points come out sorted.
inline WeightedConfiguration canonical_configuration(const WeightedConfiguration& c, bool marked)
{
    if (c.points.empty())
        throw Error(ErrorCode::InvalidArgument, "empty configuration");
    auto pts = detail::merged_points(c.points);
    if (pts.size() == 1) {
        AffineMap t{ExactScalar(1), -pts[0].first};
        return {{{ExactScalar(0), pts[0].second}}, t};
    }
    if (marked) {
        if (pts.size() != c.points.size())
            throw Error(ErrorCode::InvalidArgument, "marked configuration has repeated points");
        AffineMap m = AffineMap::anchor(c.points[0].first, c.points[1].first);
        WeightedConfiguration out = c.transformed(m);
        out.normalization = m;
        return out;
    }

    int w0 = 0;
    for (const auto& [z, w] : pts)
        w0 = std::max(w0, w);
    std::optional<std::vector<ExactScalar>> best_key;
    WeightedConfiguration best;
    for (const auto& [p, wp] : pts) {
        if (wp != w0)
            continue;
        int w1 = 0;
        for (const auto& [z, w] : pts)
            if (z != p)
                w1 = std::max(w1, w);
        for (const auto& [q, wq] : pts) {
            if (q == p || wq != w1)
                continue;
            AffineMap m = AffineMap::anchor(p, q);
            WeightedConfiguration cand = WeightedConfiguration{pts, std::nullopt}.transformed(m);
            auto key = detail::configuration_key(cand.points);
            if (!best_key || key < *best_key) {
                best_key = key;
                std::sort(cand.points.begin(), cand.points.end());
                cand.normalization = m;
                best = std::move(cand);
            }
        }
    }
    return best;
}

enum class GitKind { Stable, StrictlySemistable };

/// GIT class of a semistable Newton map: a stable class is its canonical
/// finite configuration plus the multiplicity of infinity; all strictly
/// semistable maps of degree d share one class.
struct GitClassDescriptor {
    GitKind kind = GitKind::Stable;
    int degree = 0;
    WeightedConfiguration configuration;
    int infinity_multiplicity = 0;

    RootDivisor divisor() const
    {
        std::vector<RootDivisor::Entry> e;
        for (const auto& [z, w] : configuration.points)
            e.emplace_back(P1Point(z), w);
        if (infinity_multiplicity)
            e.emplace_back(P1Point::infinity(), infinity_multiplicity);
        return RootDivisor(e);
    }

    std::string str() const
    {
        if (kind == GitKind::StrictlySemistable)
            return "StrictlySemistableClass(" + std::to_string(degree) + ")";
        return "StableClass(" + divisor().str() + ")";
    }

    friend bool operator==(const GitClassDescriptor& x, const GitClassDescriptor& y)
    {
        if (x.kind != y.kind || x.degree != y.degree)
            return false;
        return x.kind == GitKind::StrictlySemistable ||
               (x.configuration == y.configuration && x.infinity_multiplicity == y.infinity_multiplicity);
    }
};

inline GitClassDescriptor git_class(const NewtonMap& n)
{
    Verdict v = classify_newton(n).verdict;
    if (v == Verdict::Unstable)
        throw Error(ErrorCode::UnstableInput, "unstable map " + n.source().str() + " has no GIT class");
    if (v == Verdict::StrictlySemistable)
        return {GitKind::StrictlySemistable, n.degree(), {}, 0};
    WeightedConfiguration c;
    c.points = n.source().finite_entries();
    return {GitKind::Stable, n.degree(), canonical_configuration(c, false), n.source().infinity_multiplicity()};
}

/// The representative pair of a class: the Newton map of the canonical
/// divisor, or phi_d.
inline HomogeneousPair canonical_pair(const GitClassDescriptor& g)
{
    if (g.kind == GitKind::StrictlySemistable)
        return strictly_semistable_normal_form(g.degree);
    return newton_from_divisor(g.divisor()).pair();
}

/// An affine A with A o N1 o A^{-1} = N2 (A carries the roots of N1 onto
/// those of N2 with multiplicities), or none.
inline std::optional<AffineMap> conjugacy_test(const NewtonMap& n1, const NewtonMap& n2)
{
    if (n1.reduced_degree() < 1 || n2.reduced_degree() < 1)
        throw Error(ErrorCode::InvalidArgument, "conjugacy test needs nonconstant reduced maps");
    const RootDivisor& d1 = n1.source();
    const RootDivisor& d2 = n2.source();
    if (d1.degree() != d2.degree() || d1.infinity_multiplicity() != d2.infinity_multiplicity())
        return std::nullopt;
    auto f1 = d1.finite_entries();
    auto f2 = d2.finite_entries();
    if (f1.size() != f2.size())
        return std::nullopt;
    auto matches = [&](const AffineMap& a) {
        std::vector<RootDivisor::Entry> e;
        for (const auto& [z, m] : d1.entries())
            e.emplace_back(a(z), m);
        return RootDivisor(e) == d2;
    };
    if (f1.size() == 1) {
        AffineMap t{ExactScalar(1), f2[0].first - f1[0].first};
        return matches(t) ? std::optional(t) : std::nullopt;
    }
    const auto& [p0, m0] = f1[0];
    const auto& [p1, m1] = f1[1];
    for (const auto& [q0, k0] : f2) {
        if (k0 != m0)
            continue;
        for (const auto& [q1, k1] : f2) {
            if (q1 == q0 || k1 != m1)
                continue;
            AffineMap a = AffineMap::anchor(q0, q1).inverse().after(AffineMap::anchor(p0, p1));
            if (matches(a))
                return a;
        }
    }
    return std::nullopt;
}

/// A Moebius M with M^{-1} o f o M = N for a general pair f, or none. Holes
/// of f must be fixed with the depths of N; M carries fixed points of the
/// reduced Newton map (roots and infinity) to fixed points of f^.
inline std::optional<Moebius> conjugate_to_newton(const HomogeneousPair& f, const NewtonMap& n)
{
    if (f.degree() != n.degree() || n.reduced_degree() < 1)
        return std::nullopt;
    PairFactorization fac = f.factor();
    if (fac.reduced_degree() != n.reduced_degree())
        return std::nullopt;

    std::multiset<int> depths_f, depths_n;
    for (const auto& h : hole_strata(fac)) {
        if (!h.fixed || !h.point)
            return std::nullopt;
        depths_f.insert(h.depth);
    }
    for (const auto& [p, depth] : holes_and_depths(n))
        depths_n.insert(depth);
    if (depths_f != depths_n)
        return std::nullopt;

    HomogeneousForm fix = fixed_point_form(fac);
    if (fix.is_zero())
        return std::nullopt;
    auto fixed = roots_of_form(fix);
    if (!fixed.irreducible.empty())
        return std::nullopt;
    std::vector<P1Point> targets;
    for (const auto& [p, m] : fixed.roots) {
        if (m != 1)
            return std::nullopt;
        targets.push_back(p);
    }
    std::vector<P1Point> sources;
    for (const auto& [z, m] : n.source().finite_entries())
        sources.emplace_back(z);
    sources.push_back(P1Point::infinity());
    if (sources.size() != targets.size())
        return std::nullopt;

    auto verify = [&](const Moebius& m) { return conjugate(f, m).projectively_equal(n.pair()); };
    if (sources.size() == 2) {
        // M is free up to maps fixing both points, which commute with the
        // reduced map; any third point will do.
        for (int swap = 0; swap < 2; ++swap) {
            const P1Point& t0 = targets[static_cast<std::size_t>(swap)];
            const P1Point& t1 = targets[static_cast<std::size_t>(1 - swap)];
            P1Point s2 = P1Point(sources[0].value() + ExactScalar(1));
            P1Point t2 = t0.is_infinity() || t1.is_infinity()
                             ? P1Point((t0.is_infinity() ? t1.value() : t0.value()) + ExactScalar(1))
                             : P1Point((t0.value() + t1.value()) / ExactScalar(2));
            Moebius m = Moebius::from_triples({sources[0], sources[1], s2}, {t0, t1, t2});
            if (verify(m))
                return m;
        }
        return std::nullopt;
    }
    const std::size_t k = targets.size();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = 0; l < k; ++l) {
                if (i == j || j == l || i == l)
                    continue;
                Moebius m = Moebius::from_triples({sources[0], sources[1], sources[2]}, {targets[i], targets[j], targets[l]});
                if (verify(m))
                    return m;
            }
    return std::nullopt;
}

/// (inf, 0, 1, r_3, ..., r_d) after the affine map with r_1 -> 0, r_2 -> 1.
inline std::vector<P1Point> marked_moduli_point(const MarkedNewtonMap& m)
{
    const auto& roots = m.roots();
    std::set<P1Point> seen;
    for (const auto& r : roots)
        if (r.is_infinity() || !seen.insert(r).second)
            throw Error(ErrorCode::RepeatedRoots, "marked moduli point needs d distinct finite roots");
    AffineMap a = AffineMap::anchor(roots[0].value(), roots[1].value());
    std::vector<P1Point> out{P1Point::infinity()};
    for (const auto& r : roots)
        out.push_back(a(r));
    return out;
}

/// Marked points over the same unmarked class once the anchors r_1, r_2 are
/// fixed: the normalized tuples obtained by reordering r_3, ..., r_d.
inline std::set<std::vector<P1Point>> marked_fiber(const MarkedNewtonMap& m)
{
    std::vector<P1Point> roots = m.roots();
    if (roots.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "need at least two roots");
    std::set<std::vector<P1Point>> out;
    std::sort(roots.begin() + 2, roots.end());
    do {
        out.insert(marked_moduli_point(MarkedNewtonMap(roots)));
    } while (std::next_permutation(roots.begin() + 2, roots.end()));
    return out;
}

} // namespace newton_moduli
