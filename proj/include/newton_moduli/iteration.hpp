#pragma once

#include <vector>

#include "moduli_git.hpp"

namespace newton_moduli {

/// Factored composition: for f = H_f fhat and g = H_g ghat,
/// f o g = H_g^{deg f} * H_f(ghat) * (fhat o ghat), and fhat o ghat is coprime.
inline PairFactorization compose_factored(const PairFactorization& f, int deg_f, const PairFactorization& g)
{
    HomogeneousForm h = pow(g.hole_form, deg_f) * substitute(f.hole_form, g.reduced_a, g.reduced_b);
    HomogeneousForm a = substitute(f.reduced_a, g.reduced_a, g.reduced_b);
    HomogeneousForm b = substitute(f.reduced_b, g.reduced_a, g.reduced_b);
    ExactScalar lead = h.first_nonzero();
    return {(ExactScalar(1) / lead) * h, lead * a, lead * b};
}

struct IterateEntry {
    int k = 1;
    HomogeneousPair pair;  ///< raw f^k, no common factor removed
    PairFactorization factorization;
    std::vector<HoleStratum> holes;
    StabilityVerdict verdict;
};

struct IterateReport {
    int n = 0;
    std::vector<IterateEntry> iterates;

    const HomogeneousPair& pair() const { return iterates.back().pair; }

    /// The stable and semistable categories never change along the iterates.
    bool verdicts_constant() const
    {
        for (const auto& e : iterates)
            if (e.verdict.verdict != iterates.front().verdict.verdict)
                return false;
        return true;
    }

    int max_depth(int k) const
    {
        int m = 0;
        for (const auto& h : iterates[static_cast<std::size_t>(k - 1)].holes)
            m = std::max(m, h.depth);
        return m;
    }
};

inline constexpr long default_iterate_budget = 1024;

/// N, N^2, ..., N^n with verdicts; d^n is capped by `budget`.
inline IterateReport iterate_report(const HomogeneousPair& f, int n, long budget = default_iterate_budget)
{
    if (n < 1)
        throw Error(ErrorCode::InvalidArgument, "iterate count must be positive");
    const int d = f.degree();
    long dn = 1;
    for (int k = 0; k < n; ++k) {
        dn *= d;
        if (dn > budget)
            throw Error(ErrorCode::BudgetExceeded,
                        "degree " + std::to_string(d) + "^" + std::to_string(n) + " exceeds budget " + std::to_string(budget));
    }
    if (is_indeterminate(f))
        throw Error(ErrorCode::Indeterminate, "iterates of an indeterminate pair are undefined");

    IterateReport report;
    report.n = n;
    const PairFactorization base = f.factor();
    HomogeneousPair raw = f;
    PairFactorization fac = base;
    for (int k = 1; k <= n; ++k) {
        if (k > 1) {
            raw = compose(f, raw);
            fac = compose_factored(base, d, fac);
        }
        IterateEntry e;
        e.k = k;
        e.pair = raw;
        e.factorization = fac;
        e.holes = hole_strata(fac);
        e.verdict = classify_factored(fac, raw.degree());
        report.iterates.push_back(std::move(e));
    }
    return report;
}

inline IterateReport iterate_report(const NewtonMap& n, int count, long budget = default_iterate_budget)
{
    return iterate_report(n.pair(), count, budget);
}

/// Class of an iterate N^k: the base class of N together with the k-th
/// iterate of its representative pair. Two semistable maps in one class have
/// iterates in one class, so the first entry fixes the whole sequence.
struct IterateClass {
    int k = 1;
    GitClassDescriptor base;
    HomogeneousPair representative;

    friend bool operator==(const IterateClass& x, const IterateClass& y)
    {
        return x.k == y.k && x.base == y.base && x.representative.projectively_equal(y.representative);
    }
};

/// phi_d^k = X^{(d^k-1)/2} Y^{(d^k-1)/2} [(d-1)^k X : (d+1)^k Y].
inline HomogeneousPair strictly_semistable_iterate(int d, int k)
{
    strictly_semistable_normal_form(d);  // validates d
    long dk = 1;
    Integer lo = 1, hi = 1;
    for (int i = 0; i < k; ++i) {
        dk *= d;
        lo *= d - 1;
        hi *= d + 1;
    }
    const int e = static_cast<int>((dk - 1) / 2);
    HomogeneousForm h = HomogeneousForm::monomial(e, e);
    return HomogeneousPair::from_factored(h, HomogeneousForm::monomial(1, 0, ExactScalar(Rational(lo))),
                                          HomogeneousForm::monomial(0, 1, ExactScalar(Rational(hi))));
}

/// The sequence of classes determined by the class of N alone.
inline std::vector<IterateClass> orbit_from_class(const GitClassDescriptor& g, int n, long budget = default_iterate_budget)
{
    std::vector<IterateClass> out;
    HomogeneousPair rep = canonical_pair(g);
    if (g.kind == GitKind::StrictlySemistable) {
        long dk = 1;
        for (int k = 1; k <= n; ++k) {
            dk *= g.degree;
            if (dk > budget)
                throw Error(ErrorCode::BudgetExceeded, "orbit exceeds the iterate budget");
            out.push_back({k, g, strictly_semistable_iterate(g.degree, k)});
        }
        return out;
    }
    IterateReport r = iterate_report(rep, n, budget);
    for (const auto& e : r.iterates)
        out.push_back({e.k, g, e.pair.normalized()});
    return out;
}

/// ([N], [N^2], ..., [N^n]).
inline std::vector<IterateClass> orbit_classes(const NewtonMap& n, int count, long budget = default_iterate_budget)
{
    return orbit_from_class(git_class(n), count, budget);
}

} // namespace newton_moduli
