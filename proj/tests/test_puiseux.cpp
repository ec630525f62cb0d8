#include <random>

#include <gtest/gtest.h>

#include "newton_moduli/puiseux.hpp"

using namespace newton_moduli;

namespace {

PuiseuxSeries exact(std::string_view s) { return parse_series(s, std::nullopt); }

PuiseuxSeries random_series(std::mt19937& rng, bool truncate)
{
    std::uniform_int_distribution<int> count(1, 4), num(-6, 6), den(1, 3), coeff(-5, 5);
    PuiseuxSeries::Terms terms;
    for (int k = count(rng); k > 0; --k) {
        int c = coeff(rng);
        if (c != 0)
            terms[make_rational(num(rng), den(rng))] += ExactScalar(make_rational(c, den(rng)), make_rational(coeff(rng)));
    }
    std::optional<Rational> order;
    if (truncate)
        order = make_rational(7 + num(rng), 1);
    return {terms, order};
}

} // namespace

TEST(PuiseuxSeries, Valuations)
{
    EXPECT_EQ(*exact("t^(-1) + 1").valuation(), -1);
    PuiseuxSeries d = exact("1+t") - exact("1");
    EXPECT_EQ(d, PuiseuxSeries::t());
    EXPECT_EQ(*d.valuation(), 1);
    EXPECT_EQ(*(exact("t^2") * exact("t^(-1)")).valuation(), 1);
    EXPECT_FALSE(PuiseuxSeries().valuation().has_value());
    EXPECT_EQ(*exact("3*t^(1/2) - t^(1/3)").valuation(), make_rational(1, 3));
}

TEST(PuiseuxSeries, TruncationIsPropagated)
{
    PuiseuxSeries a = parse_series("1 + t", Rational(4));
    PuiseuxSeries b = parse_series("t^2", Rational(5));
    EXPECT_EQ(*(a + b).order(), 4);
    // (1 + t + O(t^4)) * (t^2 + O(t^5)): tails shift by the other valuation
    PuiseuxSeries p = a * b;
    EXPECT_EQ(*p.order(), 5);
    EXPECT_EQ(p, PuiseuxSeries(exact("t^2 + t^3").terms(), Rational(5)));
    EXPECT_TRUE((exact("2") * exact("t")).is_exact());
}

TEST(PuiseuxSeries, IndeterminateValuation)
{
    PuiseuxSeries a = parse_series("1 + t^9", Rational(8));
    PuiseuxSeries z = a - parse_series("1", Rational(8));
    try {
        (void)z.valuation();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IndeterminateValuation);
    }
    EXPECT_THROW(z.coefficient(Rational(8)), Error);
    EXPECT_EQ(z.coefficient(Rational(3)), ExactScalar(0));
}

TEST(PuiseuxSeries, UltrametricInequality)
{
    std::mt19937 rng(7);
    int strict = 0;
    for (int trial = 0; trial < 500; ++trial) {
        PuiseuxSeries a = random_series(rng, false), b = random_series(rng, false);
        if (a.terms().empty() || b.terms().empty() || (a + b).terms().empty())
            continue;
        Rational va = *a.valuation(), vb = *b.valuation(), vs = *(a + b).valuation();
        EXPECT_GE(vs, std::min(va, vb));
        if (va != vb) {
            EXPECT_EQ(vs, std::min(va, vb));
            ++strict;
        }
        EXPECT_EQ(*(a * b).valuation(), va + vb);
    }
    EXPECT_GT(strict, 100);
}

TEST(PuiseuxSeries, RingLawsOnRetainedTerms)
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        PuiseuxSeries a = random_series(rng, true), b = random_series(rng, true), c = random_series(rng, true);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ(a * b, b * a);
        // compare where both sides are known
        auto check = [](const PuiseuxSeries& x, const PuiseuxSeries& y) {
            Rational o = std::min(x.order().value_or(Rational(100)), y.order().value_or(Rational(100)));
            EXPECT_EQ(x.truncated(o), y.truncated(o));
        };
        check((a * b) * c, a * (b * c));
        check(a * (b + c), a * b + a * c);
    }
}

TEST(PuiseuxSeries, Ramification)
{
    EXPECT_EQ(exact("t^(1/2) + t^(2/3) + 1").ramification(), 6);
    EXPECT_EQ(exact("t^(-1)").ramification(), 1);
}

TEST(SeriesParser, Literals)
{
    PuiseuxSeries s = exact("1 + 2*t^(1/2) - t^3");
    EXPECT_EQ(s.terms().size(), 3u);
    EXPECT_EQ(s.coefficient(make_rational(1, 2)), ExactScalar(2));
    EXPECT_EQ(s.coefficient(Rational(3)), ExactScalar(-1));
    EXPECT_EQ(exact("(1/2+3/4*i)*t^(-1)").coefficient(Rational(-1)), ExactScalar(make_rational(1, 2), make_rational(3, 4)));
    EXPECT_EQ(exact("(3+1/2)*t^2"), PuiseuxSeries::monomial(ExactScalar(make_rational(7, 2)), Rational(2)));
    EXPECT_EQ(exact("(1+t)^2"), exact("1 + 2*t + t^2"));
    EXPECT_EQ(exact("-t^-1"), PuiseuxSeries::monomial(ExactScalar(-1), Rational(-1)));
    EXPECT_EQ(parse_scalar("1/2-i"), ExactScalar(make_rational(1, 2), Rational(-1)));
    EXPECT_EQ(*parse_series("t").order(), default_truncation_order);
    EXPECT_TRUE(parse_series("1 + t^8 + t^9").terms().size() == 1);
}

TEST(SeriesParser, RoundTrip)
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        PuiseuxSeries a = random_series(rng, false);
        EXPECT_EQ(exact(a.str()), a) << a.str();
    }
}

TEST(SeriesParser, ErrorPositions)
{
    auto position = [](std::string_view s) -> std::optional<std::size_t> {
        try {
            (void)parse_series(s);
        } catch (const ParseError& e) {
            return e.position();
        }
        return std::nullopt;
    };
    EXPECT_EQ(position("1 + x"), 4u);
    EXPECT_EQ(position("t^(1/0)"), 5u);
    EXPECT_EQ(position("(1 + t"), 6u);
    EXPECT_EQ(position("1/t"), 2u);
    EXPECT_EQ(position(""), 0u);
    EXPECT_FALSE(position("1 + t").has_value());
    EXPECT_THROW(parse_scalar("1 + t"), ParseError);
}
