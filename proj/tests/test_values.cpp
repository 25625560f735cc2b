#include <random>

#include <gtest/gtest.h>

#include <valk/values.hpp>

using namespace valk;
using V = OrderedValue;

TEST(Values, RationalOrder)
{
    EXPECT_LT(V::fin(Rational(1, 2)), V::fin(2));
    EXPECT_GT(V::pos_inf(), V::fin(Rational(Integer("1000000000"))));
    EXPECT_LT(V::neg_inf(), V::fin(-1000));
}

TEST(Values, LexOrderFirstComponentDominates)
{
    EXPECT_LT(V::lex(Rational(1, 2), -1), V::lex(Rational(1, 2), 0));
    EXPECT_LT(V::lex(0, 5), V::lex(Rational(1, 2), -1));
}

TEST(Values, MixedContextsRejected)
{
    try {
        (void)(V::fin(1) < V::lex(1, 0));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ContextMismatch);
    }
    EXPECT_THROW(V::fin(1) + V::lex(1, 0), Error);
}

TEST(Values, InfinityArithmetic)
{
    EXPECT_EQ(V::pos_inf() + V::fin(3), V::pos_inf());
    EXPECT_EQ(V::neg_inf() + V::lex(3, 1), V::neg_inf());
    try {
        (void)(V::pos_inf() + V::neg_inf());
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::UndefinedSum);
    }
}

TEST(Values, ScaleAndDivide)
{
    EXPECT_EQ(V::fin(Rational(1, 2)).scaled(3), V::fin(Rational(3, 2)));
    EXPECT_EQ(V::lex(Rational(1, 2), -1).scaled(2), V::lex(1, -2));
    EXPECT_EQ(V::fin(3).divided(2), V::fin(Rational(3, 2)));
    EXPECT_THROW(V::lex(1, 1).divided(2), Error);
}

TEST(Values, Torsion)
{
    EXPECT_TRUE(is_torsion_mod(V::fin(Rational(1, 2)), ValueGroup::integers()));
    EXPECT_TRUE(is_torsion_mod(V::fin(3), ValueGroup::integers()));
    EXPECT_FALSE(is_torsion_mod(V::lex(Rational(1, 2), -1), ValueGroup::lex_integers()));
    EXPECT_TRUE(is_torsion_mod(V::lex(Rational(1, 2), 0), ValueGroup::lex_integers()));
    try {
        (void)is_torsion_mod(V::pos_inf(), ValueGroup::integers());
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidValue);
    }
}

TEST(Values, TextRoundTrip)
{
    for (const char *s : {"1/2", "-3", "inf", "-inf", "(1/2, -1)", "(0, 5)"}) EXPECT_EQ(V::parse(s).str(), s);
    EXPECT_EQ(V::parse("4/6").str(), "2/3");
    EXPECT_THROW(V::parse("1/0"), Error);
    EXPECT_THROW(V::parse("x"), Error);
}

namespace {

V random_value(std::mt19937_64 &rng, bool lex)
{
    std::uniform_int_distribution<long> d(-20, 20), den(1, 6);
    const Rational q(d(rng), den(rng));
    return lex ? V::lex(q, d(rng) % 3) : V::fin(q);
}

} // namespace

TEST(Values, OrderProperties)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        const bool lex = i % 2;
        const V a = random_value(rng, lex), b = random_value(rng, lex), c = random_value(rng, lex);
        const int n = (a < b) + (a == b) + (a > b);
        EXPECT_EQ(n, 1);
        if (a < b && b < c) EXPECT_LT(a, c);
        if (a < b) EXPECT_LT(a + c, b + c);
        if (!lex) EXPECT_EQ(a < b, a.as_lex() < b.as_lex());
    }
}
