#include <gtest/gtest.h>

#include <valk/io.hpp>

using namespace valk;
using namespace valk::io;
using V = OrderedValue;

TEST(Io, Rationals)
{
    EXPECT_EQ(parse_rational_json(json("-3/6"), "$"), Rational(-1, 2));
    EXPECT_EQ(parse_rational_json(json(7), "$"), Rational(7));
    EXPECT_EQ(parse_value(json("(1/2, -1)"), "$"), V::lex(Rational(1, 2), -1));
    EXPECT_EQ(parse_value(json("inf"), "$"), V::pos_inf());
}

TEST(Io, SchemaErrorsNamePath)
{
    try {
        parse_poly(PAdicRationals(2), json::parse(R"([1, "x"])"), "$.poly");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::SchemaError);
        EXPECT_NE(std::string(e.what()).find("$.poly[1]"), std::string::npos);
    }
    EXPECT_THROW(parse_alg(PAdicRationals(2), json::parse(R"({"tower":[{}]})"), "$"), Error);
}

TEST(Io, FunctionFieldElements)
{
    const TAdicPrime K(PrimeField(3));
    const auto x = parse_ground(K, json("[0,1]/[1,2]"), "$");
    EXPECT_EQ(K.val(x), V::fin(1));
    EXPECT_EQ(K.str(parse_ground(K, json::parse("[1,0,2]"), "$")), "[1,0,2]");
    EXPECT_EQ(K.str(parse_ground(K, json(4), "$")), "[1]");
    EXPECT_TRUE(K.equal(parse_ground(K, json(K.str(x)), "$"), x));
}

TEST(Io, AlgElemRoundTrip)
{
    const PAdicRationals K(5);
    const auto a = parse_alg(K, json::parse(R"({"tower":[{"minpoly":[-5,0,1]}],"expr":[1,1]})"), "$");
    EXPECT_EQ(a.tower->step(1).e, 2);
    EXPECT_EQ(elem_val(a), V::fin(0));
    EXPECT_EQ(poly_to_json(a.minpoly()), json::parse(R"(["-4","-2","1"])"));
    const json j = alg_to_json(a);
    const auto b = parse_alg(K, j, "$");
    EXPECT_EQ(dist(a, b), V::pos_inf());
    EXPECT_EQ(alg_brief(parse_alg(K, json("3/5"), "$")), json("3/5"));
}

TEST(Io, ApproxElement)
{
    const PAdicRationals K(2);
    const auto a = parse_alg(K, json::parse(R"({"approx":{"center":1,"precision":"2","minpoly":[7,0,1]}})"), "$");
    EXPECT_FALSE(a.exact());
    EXPECT_EQ(a.degree(), 2);
    EXPECT_THROW(parse_alg(K, json::parse(R"({"approx":{"center":1,"precision":"inf","minpoly":[7,0,1]}})"), "$"), Error);
}

TEST(Io, RationalFunctions)
{
    const PAdicRationals K(2);
    const auto r = parse_function(K, json::parse(R"({"num":[1],"den":[0,1]})"), "$");
    EXPECT_EQ(r.den.degree(), 1);
    EXPECT_EQ(parse_function(K, json::parse("[1,2]"), "$").den.degree(), 0);
}
