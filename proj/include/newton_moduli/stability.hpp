#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "newton_map.hpp"

namespace newton_moduli {

enum class Verdict { Stable, StrictlySemistable, Unstable };

inline std::string_view verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::StrictlySemistable: return "StrictlySemistable";
    case Verdict::Unstable: return "Unstable";
    }
    return "?";
}

inline bool is_semistable(Verdict v) { return v != Verdict::Unstable; }

/// Holes sharing a depth and a fixed/non-fixed status. `point` is set for a
/// single hole in the scalar field; otherwise `locus` is a square-free form
/// without roots in Q(i) whose roots are all holes of this kind.
struct HoleStratum {
    std::optional<P1Point> point;
    HomogeneousForm locus;
    int depth = 0;
    bool fixed = false;

    std::string str() const { return point ? point->str() : "roots(" + locus.str() + ")"; }
};

struct StabilityVerdict {
    Verdict verdict = Verdict::Stable;
    std::optional<HoleStratum> witness;
};

/// Every hole of f with its depth and whether the reduced map fixes it.
/// Holes outside the scalar field are kept as exact strata rather than
/// approximated: a root of an irreducible factor p is fixed iff p divides the
/// fixed-point form.
inline std::vector<HoleStratum> hole_strata(const PairFactorization& fac)
{
    std::vector<HoleStratum> out;
    if (fac.hole_form.degree() == 0)
        return out;
    const HomogeneousForm fix = fixed_point_form(fac);
    auto strata = squarefree_strata(fac.hole_form);
    for (std::size_t k = 0; k < strata.size(); ++k) {
        const HomogeneousForm& part = strata[k];
        if (part.degree() == 0)
            continue;
        FormGcd g = poly_gcd(part, fix);
        for (int pass = 0; pass < 2; ++pass) {
            const bool fixed = pass == 0;
            const HomogeneousForm& piece = fixed ? g.common : g.first;
            if (piece.degree() == 0)
                continue;
            auto fac_piece = roots_of_form(piece);
            for (const auto& [p, mult] : fac_piece.roots)
                out.push_back({p, HomogeneousForm::vanishing_at(p), static_cast<int>(k) + 1, fixed});
            for (const auto& [form, mult] : fac_piece.irreducible)
                out.push_back({std::nullopt, form, static_cast<int>(k) + 1, fixed});
        }
    }
    return out;
}

inline std::vector<HoleStratum> hole_strata(const HomogeneousPair& f) { return hole_strata(f.factor()); }

namespace detail {

// Deepest first; among equal depth, scalar-field holes in point order, then
// irrational strata.
inline bool witness_before(const HoleStratum& a, const HoleStratum& b)
{
    if (a.depth != b.depth)
        return a.depth > b.depth;
    if (a.point.has_value() != b.point.has_value())
        return a.point.has_value();
    if (a.point)
        return *a.point < *b.point;
    return a.locus.str() < b.locus.str();
}

inline std::optional<HoleStratum> pick_witness(std::vector<HoleStratum> holes)
{
    if (holes.empty())
        return std::nullopt;
    std::sort(holes.begin(), holes.end(), witness_before);
    return holes.front();
}

} // namespace detail

/// Depth criterion for a general pair of degree d >= 2:
/// even d: stable iff depths <= d/2 with equality only at non-fixed holes;
/// odd d: semistable iff depths <= (d+1)/2 (equality only non-fixed),
/// stable iff depths <= (d-1)/2 (equality only non-fixed).
inline StabilityVerdict classify_factored(const PairFactorization& fac, int d)
{
    if (d < 2)
        throw Error(ErrorCode::InvalidArgument, "classification needs degree at least 2");
    auto holes = hole_strata(fac);

    auto violates = [](const HoleStratum& h, int bound) { return h.depth > bound || (h.depth == bound && h.fixed); };
    auto violators = [&](int bound) {
        std::vector<HoleStratum> v;
        for (const auto& h : holes)
            if (violates(h, bound))
                v.push_back(h);
        return v;
    };

    if (d % 2 == 0) {
        auto bad = violators(d / 2);
        if (!bad.empty())
            return {Verdict::Unstable, detail::pick_witness(bad)};
        return {Verdict::Stable, detail::pick_witness(holes)};
    }
    auto bad_ss = violators((d + 1) / 2);
    if (!bad_ss.empty())
        return {Verdict::Unstable, detail::pick_witness(bad_ss)};
    auto bad_s = violators((d - 1) / 2);
    if (!bad_s.empty())
        return {Verdict::StrictlySemistable, detail::pick_witness(bad_s)};
    return {Verdict::Stable, detail::pick_witness(holes)};
}

inline StabilityVerdict classify_pair(const HomogeneousPair& f) { return classify_factored(f.factor(), f.degree()); }

/// Verdict computed from holes and depths alone (every Newton hole is fixed):
/// even d: stable iff depths <= d/2 - 1; odd d: stable iff depths <= (d-3)/2,
/// semistable iff depths <= (d-1)/2.
inline StabilityVerdict classify_newton(const NewtonMap& n)
{
    const int d = n.degree();
    std::vector<HoleStratum> holes;
    for (const auto& [p, depth] : holes_and_depths(n))
        holes.push_back({p, HomogeneousForm::vanishing_at(p), depth, true});
    int max_depth = 0;
    for (const auto& h : holes)
        max_depth = std::max(max_depth, h.depth);
    auto witness = detail::pick_witness(holes);
    if (d % 2 == 0)
        return {max_depth <= d / 2 - 1 ? Verdict::Stable : Verdict::Unstable, witness};
    if (max_depth <= (d - 3) / 2)
        return {Verdict::Stable, witness};
    if (max_depth <= (d - 1) / 2)
        return {Verdict::StrictlySemistable, witness};
    return {Verdict::Unstable, witness};
}

/// f lies in the indeterminacy locus: constant reduced map c with H(c) = 0.
inline bool is_indeterminate(const HomogeneousPair& f)
{
    PairFactorization fac = f.factor();
    if (fac.reduced_degree() != 0)
        return false;
    P1Point c = P1Point::from_homogeneous(fac.reduced_a.coeff(0), fac.reduced_b.coeff(0));
    return fac.hole_form(c).is_zero();
}

/// Diagonal one-parameter subgroup M_t[X:Y] = [t^a X : t^b Y], optionally
/// preceded by an exact change of coordinates.
struct OneParamWeight {
    int a = 0;
    int b = 0;
    std::optional<Moebius> conjugator;

    static OneParamWeight identity() { return {}; }
};

/// lim_{t->0} M_t^{-1} o g o M_t with g = C^{-1} o f o C for the optional
/// conjugator C. Each coefficient of X^i Y^(d-i) picks up the weight
/// a*i + b*(d-i) - a (first form) or - b (second form); the limit keeps the
/// terms of minimal weight.
inline HomogeneousPair ops_limit(const HomogeneousPair& f, const OneParamWeight& w)
{
    HomogeneousPair g = w.conjugator ? conjugate(f, *w.conjugator) : f;
    const int d = g.degree();
    auto weight = [&](int i, bool first) { return w.a * i + w.b * (d - i) - (first ? w.a : w.b); };
    std::optional<int> minimal;
    for (int pass = 0; pass < 2; ++pass) {
        const HomogeneousForm& form = pass == 0 ? g.first() : g.second();
        for (int i = 0; i <= d; ++i)
            if (!form.coeff(i).is_zero()) {
                int wt = weight(i, pass == 0);
                minimal = minimal ? std::min(*minimal, wt) : wt;
            }
    }
    std::vector<ExactScalar> a(static_cast<std::size_t>(d) + 1), b(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) {
        if (weight(i, true) == *minimal)
            a[static_cast<std::size_t>(i)] = g.first().coeff(i);
        if (weight(i, false) == *minimal)
            b[static_cast<std::size_t>(i)] = g.second().coeff(i);
    }
    return {HomogeneousForm(d, std::move(a)), HomogeneousForm(d, std::move(b))};
}

/// phi_d = X^{(d-1)/2} Y^{(d-1)/2} [(d-1) X : (d+1) Y] for odd d >= 3.
inline HomogeneousPair strictly_semistable_normal_form(int d)
{
    if (d < 3 || d % 2 == 0)
        throw Error(ErrorCode::NoStrictlySemistable,
                    "degree " + std::to_string(d) + " has no strictly semistable Newton class");
    const int e = (d - 1) / 2;
    HomogeneousForm h = HomogeneousForm::monomial(e, e);
    return HomogeneousPair::from_factored(h, HomogeneousForm::monomial(1, 0, ExactScalar(static_cast<long>(d - 1))),
                                          HomogeneousForm::monomial(0, 1, ExactScalar(static_cast<long>(d + 1))));
}

/// Weight and conjugator driving a strictly semistable Newton map to phi_d:
/// single deep hole at infinity -> (-1, 1); single deep finite hole a ->
/// translate a to 0, then (1, -1); deep holes at a and infinity -> translate.
inline OneParamWeight semistable_limit_weight(const NewtonMap& n)
{
    const int d = n.degree();
    if (d % 2 == 0 || classify_newton(n).verdict != Verdict::StrictlySemistable)
        throw Error(ErrorCode::InvalidArgument, "map is not strictly semistable");
    const int deep = (d - 1) / 2;
    std::optional<ExactScalar> finite_deep;
    bool infinity_deep = false;
    for (const auto& [p, depth] : holes_and_depths(n)) {
        if (depth != deep)
            continue;
        if (p.is_infinity())
            infinity_deep = true;
        else
            finite_deep = p.value();
    }
    if (infinity_deep && !finite_deep)
        return {-1, 1, std::nullopt};
    Moebius translate = Moebius::affine(ExactScalar(1), *finite_deep);
    if (!infinity_deep)
        return {1, -1, translate};
    return {0, 0, translate};
}

} // namespace newton_moduli
