#include <random>

#include <gtest/gtest.h>

#include <valk/pairdef.hpp>

using namespace valk;
using V = OrderedValue;
using T = Tower<PAdicRationals>;
using A = AlgElem<PAdicRationals>;
using P = PairOfDefinition<PAdicRationals>;
using QP = Poly<PAdicRationals>;

namespace {

std::shared_ptr<const T> radical_tower(std::uint64_t p, long c, long n)
{
    const PAdicRationals K(p);
    auto t0 = T::create(K);
    std::vector<T::Elem> m(static_cast<std::size_t>(n + 1), t0->zero(0));
    m[0] = t0->from_base(Rational(c));
    m.back() = t0->one(0);
    return T::create(K, {m});
}

A gen(const std::shared_ptr<const T> &t) { return make_exact(t, t->height(), t->gen(t->height())); }
A rat(std::uint64_t p, long a, long b = 1) { return from_ground(PAdicRationals(p), Rational(a, b)); }
V fin(long a, long b = 1) { return V::fin(Rational(a, b)); }

QP poly(std::uint64_t p, std::vector<long> c)
{
    std::vector<Rational> v(c.begin(), c.end());
    return QP(PAdicRationals(p), v);
}

QP random_poly(std::mt19937_64 &rng, std::uint64_t p, int max_deg)
{
    const int n = static_cast<int>(rng() % static_cast<unsigned>(max_deg + 1));
    std::vector<Rational> v;
    for (int i = 0; i <= n; ++i) {
        Rational q(static_cast<long>(rng() % 33) - 16, 1 + static_cast<long>(rng() % 4));
        q.canonicalize();
        v.push_back(q);
    }
    if (v.back() == 0) v.back() = 1;
    return QP(PAdicRationals(p), v);
}

const A &sqrt_m2()
{
    static const A a = gen(radical_tower(2, 2, 2));
    return a;
}

} // namespace

TEST(PairDef, PairValFixtures)
{
    const QP f = poly(2, {2, 0, 1});
    EXPECT_EQ(pair_val(P(rat(2, 0), fin(1, 2)), f), fin(1));
    EXPECT_EQ(pair_val(P(sqrt_m2(), fin(1)), f), fin(2));
    EXPECT_EQ(pair_val(P(sqrt_m2(), fin(1)), poly(2, {12})), fin(2));
    EXPECT_EQ(root_pair_val(P(rat(2, 0), fin(1, 2)), f), fin(1));
    EXPECT_EQ(root_pair_val(P(sqrt_m2(), fin(1)), f), fin(2));
    EXPECT_THROW(pair_val(P(sqrt_m2(), fin(1)), RationalFunction<PAdicRationals>{f, poly(2, {})}), Error);
    EXPECT_EQ(pair_val(P(sqrt_m2(), fin(1)), RationalFunction<PAdicRationals>{f, poly(2, {0, 1})}), fin(3, 2));
}

TEST(PairDef, LexGamma)
{
    const P lexp(rat(2, 0), V::lex(Rational(1, 2), -1));
    EXPECT_EQ(pair_val(lexp, poly(2, {2, 0, 1})), V::lex(1, -2));
    EXPECT_EQ(pair_val(lexp, poly(2, {2, 0, 1})), root_pair_val(lexp, poly(2, {2, 0, 1})));
    EXPECT_EQ(classify_pair(lexp), PairType::ValueTranscendental);
    EXPECT_EQ(classify_pair(P(rat(2, 0), fin(1, 2))), PairType::ResidueTranscendental);
    EXPECT_EQ(classify_pair(P(rat(2, 0), fin(3))), PairType::ResidueTranscendental);
}

TEST(PairDef, SameValuation)
{
    const A s = sqrt_m2();
    const A ms = make_exact(s.tower, 1, s.tower->neg(1, s.center));
    EXPECT_TRUE(same_valuation(P(s, fin(1)), P(ms, fin(1))));
    EXPECT_TRUE(same_valuation(P(rat(2, 0), fin(1, 2)), P(rat(2, 2), fin(1, 2))));
    EXPECT_FALSE(same_valuation(P(rat(2, 0), fin(2)), P(rat(2, 2), fin(2))));
    try {
        same_valuation(P(rat(2, 0), fin(2)), P(rat(2, 2), fin(1)));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::GammaMismatch);
    }
}

TEST(PairDef, Minimality)
{
    EXPECT_TRUE(is_minimal(P(sqrt_m2(), fin(1))).minimal);
    EXPECT_TRUE(is_minimal(P(rat(2, 2), fin(1, 2))).minimal);
    const auto r = is_minimal(P(sqrt_m2(), fin(1, 4)));
    EXPECT_FALSE(r.minimal);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(r.witness->degree(), 1);
    EXPECT_EQ(elem_val(*r.witness), V::pos_inf());
    // The root of X^2 + 7 near 1 lies in Q_2: rational approximants reach any gamma.
    const PAdicRationals K(2);
    auto t = T::create(K);
    const A z{t, 0, t->from_base(Rational(1)), poly(2, {7, 0, 1}), fin(2)};
    const auto r7 = is_minimal(P(z, fin(9)));
    EXPECT_FALSE(r7.minimal);
    EXPECT_GE(dist(*r7.witness, z), fin(9));
    EXPECT_THROW(gen(radical_tower(2, 7, 2)), Error);
}

TEST(PairDef, ExtInvariants)
{
    const auto i1 = ext_invariants(sqrt_m2());
    EXPECT_EQ(i1.e, 2);
    EXPECT_EQ(i1.f, 1);
    const auto i2 = ext_invariants(gen(radical_tower(5, 2, 2)));
    EXPECT_EQ(i2.e, 1);
    EXPECT_EQ(i2.f, 2);
    const auto i3 = ext_invariants(gen(radical_tower(5, -5, 4)));
    EXPECT_EQ(i3.e, 4);
    EXPECT_EQ(i3.f, 1);
}

TEST(PairDef, ValuationAxioms)
{
    std::mt19937_64 rng(21);
    for (const P &p : {P(sqrt_m2(), fin(1)), P(rat(2, 0), fin(1, 2)), P(sqrt_m2(), fin(3, 4))}) {
        for (int i = 0; i < 40; ++i) {
            const QP f = random_poly(rng, 2, 4), g = random_poly(rng, 2, 4);
            EXPECT_EQ(pair_val(p, f * g), pair_val(p, f) + pair_val(p, g));
            EXPECT_GE(pair_val(p, f + g), min(pair_val(p, f), pair_val(p, g)));
            EXPECT_EQ(pair_val(p, f), root_pair_val(p, f));
        }
    }
}

TEST(PairDef, EquivalentPairsAgree)
{
    const A s = sqrt_m2();
    const A other = alg_add(s, rat(2, 2));
    const P p1(s, fin(1)), p2(other, fin(1));
    ASSERT_TRUE(same_valuation(p1, p2));
    std::mt19937_64 rng(22);
    for (int i = 0; i < 100; ++i) {
        const QP f = random_poly(rng, 2, 6);
        EXPECT_EQ(pair_val(p1, f), pair_val(p2, f));
    }
}

TEST(PairDef, InvariantDivisibilityForEquivalentPairs)
{
    // (sqrt(-2), 1) is minimal; y1 - 2·y2 with y2^2 = y1 defines the same valuation.
    auto t = radical_tower(2, 2, 2);
    t = T::extend(*t, {t->neg(1, t->gen(1)), t->zero(1), t->one(1)});
    const A a = make_exact(t, 1, t->gen(1));
    const A a2 = make_exact(t, 2, t->sub(2, t->embed(t->gen(1), 1, 2), t->mul(2, t->from_integer(2, 2), t->gen(2))));
    ASSERT_TRUE(is_minimal(P(a, fin(1))).minimal);
    ASSERT_TRUE(same_valuation(P(a, fin(1)), P(a2, fin(1))));
    const auto i = ext_invariants(a), i2 = ext_invariants(a2);
    EXPECT_EQ(i2.e % i.e, 0);
    EXPECT_EQ(i2.f % i.f, 0);
}

TEST(PairDef, LexLiftPreservesOrderings)
{
    std::mt19937_64 rng(23);
    const P p(sqrt_m2(), fin(1)), pl(sqrt_m2(), V::lex(1, -1));
    for (int i = 0; i < 60; ++i) {
        const QP f = random_poly(rng, 2, 4), g = random_poly(rng, 2, 4);
        const V vf = pair_val(p, f), vg = pair_val(p, g);
        if (vf == vg) continue;
        EXPECT_EQ(vf < vg, compare_mixed(pair_val(pl, f), pair_val(pl, g)) < 0);
    }
}
