#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "newton_moduli/stability.hpp"

using namespace newton_moduli;
using namespace fixtures;

namespace {

HomogeneousForm X() { return HomogeneousForm::X(); }
HomogeneousForm Y() { return HomogeneousForm::Y(); }

NewtonMap nm(std::vector<std::pair<P1Point, int>> e) { return newton_from_divisor(divisor(std::move(e))); }

// Hole table computed independently from roots_of_form and direct substitution.
Verdict depth_oracle(const HomogeneousPair& f)
{
    const int d = f.degree();
    auto fac = f.factor();
    std::vector<std::pair<int, bool>> holes;
    if (fac.hole_form.degree() > 0)
        for (const auto& [p, m] : roots_of_form(fac.hole_form).roots)
            holes.emplace_back(m, apply_reduced(fac, p) == p);
    auto ok = [&](int bound) {
        for (auto [depth, fixed] : holes)
            if (depth > bound || (depth == bound && fixed))
                return false;
        return true;
    };
    if (d % 2 == 0)
        return ok(d / 2) ? Verdict::Stable : Verdict::Unstable;
    if (ok((d - 1) / 2))
        return Verdict::Stable;
    return ok((d + 1) / 2) ? Verdict::StrictlySemistable : Verdict::Unstable;
}

} // namespace

TEST(ClassifyPair, CubicExampleWithNonfixedHole)
{
    HomogeneousPair f = HomogeneousPair::from_factored(X() * Y(), X(), ExactScalar(2) * X() + ExactScalar(2) * Y());
    auto v = classify_pair(f);
    EXPECT_EQ(v.verdict, Verdict::StrictlySemistable);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(*v.witness->point, P1Point(0));
    EXPECT_TRUE(v.witness->fixed);
    auto strata = hole_strata(f);
    ASSERT_EQ(strata.size(), 2u);
    for (const auto& h : strata)
        EXPECT_EQ(h.fixed, h.point->is_finite());
}

TEST(ClassifyPair, IndeterminateIsUnstable)
{
    HomogeneousPair f(pow(Y(), 3), HomogeneousForm::zero(3));
    EXPECT_EQ(classify_pair(f).verdict, Verdict::Unstable);
    EXPECT_TRUE(is_indeterminate(f));
}

TEST(ClassifyPair, NondegenerateIsStable)
{
    HomogeneousPair f(pow(X(), 3) + Y() * Y() * X(), ExactScalar(2) * pow(Y(), 3) + X() * X() * Y());
    ASSERT_EQ(f.factor().hole_form.degree(), 0);
    auto v = classify_pair(f);
    EXPECT_EQ(v.verdict, Verdict::Stable);
    EXPECT_FALSE(v.witness);
}

TEST(ClassifyPair, IrrationalHolesAreCertified)
{
    // H = X^2 - 2Y^2 (roots +-sqrt 2), f^ = identity fixes them: depth 1 at d=3 is strictly semistable
    HomogeneousForm h = X() * X() - ExactScalar(2) * Y() * Y();
    HomogeneousPair fixed = HomogeneousPair::from_factored(h, X(), Y());
    EXPECT_EQ(classify_pair(fixed).verdict, Verdict::StrictlySemistable);
    ASSERT_TRUE(classify_pair(fixed).witness);
    EXPECT_FALSE(classify_pair(fixed).witness->point);
    // [Y : X] sends sqrt 2 to 1/sqrt 2, so the holes are not fixed
    HomogeneousPair moved = HomogeneousPair::from_factored(h, Y(), X());
    EXPECT_EQ(classify_pair(moved).verdict, Verdict::Stable);
    // the constant map [1:0] does not fix them: depth d/2 is allowed
    HomogeneousPair constant(h * h, HomogeneousForm::zero(4));
    EXPECT_EQ(classify_pair(constant).verdict, Verdict::Stable);
    // fixed depth-2 holes at d=5 sit exactly on the semistable boundary
    HomogeneousPair deep = HomogeneousPair::from_factored(h * h, X(), Y());
    EXPECT_EQ(classify_pair(deep).verdict, Verdict::StrictlySemistable);
}

TEST(ClassifyNewton, WorkedExamples)
{
    EXPECT_EQ(classify_newton(nm({{0, 2}, {1, 1}, {2, 1}})).verdict, Verdict::Stable);
    EXPECT_EQ(classify_newton(nm({{0, 1}, {1, 1}, {inf(), 2}})).verdict, Verdict::Unstable);
    EXPECT_EQ(classify_newton(nm({{0, 2}, {inf(), 1}})).verdict, Verdict::StrictlySemistable);
    EXPECT_EQ(classify_newton(nm({{0, 1}, {1, 1}, {inf(), 1}})).verdict, Verdict::StrictlySemistable);
    EXPECT_EQ(classify_newton(nm({{0, 2}, {1, 1}})).verdict, Verdict::StrictlySemistable);
    EXPECT_EQ(classify_newton(nm({{0, 3}})).verdict, Verdict::Unstable);
}

TEST(ClassifyNewton, WitnessPrefersDeepestFiniteHole)
{
    auto v = classify_newton(nm({{0, 3}, {1, 1}, {inf(), 2}}));
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(*v.witness->point, P1Point(0));
    EXPECT_EQ(v.witness->depth, 2);
}

TEST(ClassifyNewton, AgreesWithGeneralCriterionAndOracle)
{
    std::mt19937 rng(17);
    std::vector<RootDivisor> divs = divisor_family();
    for (int trial = 0; trial < 120; ++trial)
        divs.push_back(random_divisor(rng, 2 + trial % 6));
    for (const auto& div : divs) {
        NewtonMap n = newton_from_divisor(div);
        Verdict v = classify_newton(n).verdict;
        EXPECT_EQ(v, classify_pair(n.pair()).verdict) << div.str();
        EXPECT_EQ(v, depth_oracle(n.pair())) << div.str();
        if (div.degree() == 3 && n.is_degenerate())
            EXPECT_NE(v, Verdict::Stable) << div.str();
        if (div.degree() % 2 == 0)
            EXPECT_NE(v, Verdict::StrictlySemistable) << div.str();
        if (is_semistable(v))
            EXPECT_FALSE(is_indeterminate(n.pair())) << div.str();
    }
}

TEST(IsIndeterminate, Examples)
{
    EXPECT_FALSE(is_indeterminate(nm({{0, 1}, {1, 1}, {inf(), 1}}).pair()));
    EXPECT_TRUE(is_indeterminate(HomogeneousPair(HomogeneousForm::zero(2), X() * Y())));
    // constant map [1:0] with holes away from infinity is not indeterminate
    EXPECT_FALSE(is_indeterminate(HomogeneousPair(X() * X(), HomogeneousForm::zero(2))));
}

TEST(OpsLimit, CubicBoundaryExample)
{
    HomogeneousPair f = HomogeneousPair::from_factored(X() * Y(), X(), ExactScalar(2) * X() + ExactScalar(2) * Y());
    HomogeneousPair lim = ops_limit(f, {1, 0, std::nullopt});
    EXPECT_TRUE(lim.projectively_equal(strictly_semistable_normal_form(3)));
    EXPECT_EQ(ops_limit(f, OneParamWeight::identity()), f);
}

TEST(OpsLimit, SemistableCasesReachNormalForm)
{
    std::vector<RootDivisor> cases{
        divisor({{0, 1}, {1, 1}, {inf(), 1}}),              // hole at infinity only
        divisor({{0, 2}, {1, 1}}),                          // hole at 0 only
        divisor({{2, 2}, {5, 1}}),                          // translated finite hole
        divisor({{0, 2}, {inf(), 1}}),                      // holes at 0 and infinity
        divisor({{0, 1}, {1, 1}, {3, 1}, {inf(), 2}}),      // d = 5, case I
        divisor({{4, 3}, {1, 1}, {3, 1}}),                  // d = 5, case II
        divisor({{-1, 3}, {inf(), 2}}),                     // d = 5, case III
        divisor({{0, 4}, {1, 1}, {2, 1}, {7, 1}}),          // d = 7, case II
    };
    for (const auto& div : cases) {
        NewtonMap n = newton_from_divisor(div);
        ASSERT_EQ(classify_newton(n).verdict, Verdict::StrictlySemistable) << div.str();
        HomogeneousPair lim = ops_limit(n.pair(), semistable_limit_weight(n));
        EXPECT_TRUE(lim.projectively_equal(strictly_semistable_normal_form(div.degree())))
            << div.str() << " -> " << lim;
    }
}

TEST(NormalForm, Values)
{
    EXPECT_TRUE(strictly_semistable_normal_form(3).projectively_equal(
        HomogeneousPair(X() * X() * Y(), ExactScalar(2) * X() * Y() * Y())));
    EXPECT_EQ(strictly_semistable_normal_form(5),
              HomogeneousPair(ExactScalar(4) * HomogeneousForm::monomial(3, 2), ExactScalar(6) * HomogeneousForm::monomial(2, 3)));
    try {
        strictly_semistable_normal_form(4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoStrictlySemistable);
    }
    for (int d = 3; d <= 11; d += 2)
        EXPECT_EQ(classify_pair(strictly_semistable_normal_form(d)).verdict, Verdict::StrictlySemistable);
}
