#include <random>

#include <gtest/gtest.h>

#include <valk/keypoly.hpp>

using namespace valk;
using V = OrderedValue;
using T = Tower<PAdicRationals>;
using A = AlgElem<PAdicRationals>;
using P = PairOfDefinition<PAdicRationals>;
using QP = Poly<PAdicRationals>;
using Amb = AmbientValuation<PAdicRationals>;

namespace {

const PAdicRationals K2(2);

A sqrt_m2()
{
    auto t0 = T::create(K2);
    auto t = T::create(K2, {{t0->from_base(Rational(2)), t0->zero(0), t0->one(0)}});
    return make_exact(t, 1, t->gen(1));
}

A rat(long a, long b = 1) { return from_ground(K2, Rational(a, b)); }
V fin(long a, long b = 1) { return V::fin(Rational(a, b)); }

QP poly(std::vector<long> c)
{
    std::vector<Rational> v(c.begin(), c.end());
    return QP(K2, v);
}

QP random_poly(std::mt19937_64 &rng, int max_deg, bool monic = false)
{
    const int n = static_cast<int>(rng() % static_cast<unsigned>(max_deg + 1));
    std::vector<Rational> v;
    for (int i = 0; i <= n; ++i) {
        Rational q(static_cast<long>(rng() % 33) - 16, 1 + static_cast<long>(rng() % 4));
        q.canonicalize();
        v.push_back(q);
    }
    if (v.back() == 0 || monic) v.back() = 1;
    return QP(K2, v);
}

Amb v_sqrt() { return Amb(P(sqrt_m2(), fin(1))); }
Amb v_zero() { return Amb(P(rat(0), fin(1, 2))); }
Amb v_fact() { return Amb(std::make_shared<const LimitValuation<PAdicRationals>>(factorial_stream(K2, 6))); }

} // namespace

TEST(KeyPoly, Delta)
{
    const QP f = poly({2, 0, 1});
    const auto d1 = delta(f, v_sqrt());
    EXPECT_EQ(d1.delta, fin(1));
    EXPECT_EQ(dist(*d1.center, sqrt_m2()), V::pos_inf());
    EXPECT_EQ(delta(f, v_zero()).delta, fin(1, 2));
    EXPECT_EQ(delta(poly({7}), v_sqrt()).delta, V::neg_inf());
    EXPECT_THROW(delta(QP(K2), v_sqrt()), Error);
    EXPECT_EQ(delta(poly({-2, 1}), v_fact()).delta, fin(2));
}

TEST(KeyPoly, KeyPredicate)
{
    const QP q = poly({2, 0, 1});
    const auto k1 = is_key_poly(q, v_sqrt());
    EXPECT_TRUE(k1.key);
    EXPECT_EQ(k1.delta, fin(1));
    const auto k2 = is_key_poly(q, v_zero());
    EXPECT_FALSE(k2.key);
    ASSERT_TRUE(k2.witness.has_value());
    EXPECT_LT(k2.witness->degree(), q.degree());
    EXPECT_GE(delta(*k2.witness, v_zero()).delta, k2.delta);
    EXPECT_EQ(delta(poly({-2, 1}), v_zero()).delta, fin(1, 2));
    EXPECT_TRUE(is_key_poly(poly({-5, 1}), v_sqrt()).key);
    EXPECT_TRUE(is_key_poly(poly({-2, 1}), v_fact()).key);
    EXPECT_FALSE(is_key_poly(poly({-2, 0, 1}), v_fact()).key);
    EXPECT_THROW(is_key_poly(poly({2, 0, 3}), v_sqrt()), Error);
}

TEST(KeyPoly, Truncation)
{
    const QP q = poly({2, 0, 1});
    EXPECT_EQ(vq(q, poly({0, 1}), v_sqrt()), fin(1, 2));
    EXPECT_EQ(vq(q, poly({0, 0, 0, 1}), v_sqrt()), fin(3, 2));
    EXPECT_EQ(vq(q, q, v_sqrt()), fin(2));
    EXPECT_THROW(vq(poly({1, 2}), q, v_sqrt()), Error);
    EXPECT_EQ(vq(q, RationalFunction<PAdicRationals>{poly({0, 0, 0, 1}), poly({0, 1})}, v_sqrt()), fin(1));
}

TEST(KeyPoly, TruncationCompare)
{
    const auto c1 = truncation_compare(poly({2, 0, 1}), rat(0), v_sqrt());
    EXPECT_EQ(c1.kind, TruncationCase::StrictlyBelow);
    EXPECT_EQ(c1.gamma, fin(1, 2));
    EXPECT_EQ(c1.vf, fin(2));
    EXPECT_EQ(c1.vpair, fin(1));
    EXPECT_EQ(c1.delta, fin(1));
    const auto c2 = truncation_compare(poly({-1, 1}), rat(0), v_sqrt());
    EXPECT_EQ(c2.kind, TruncationCase::Equal);
    EXPECT_EQ(c2.vf, fin(0));
    EXPECT_EQ(truncation_compare(poly({3}), rat(0), v_sqrt()).kind, TruncationCase::Equal);
}

TEST(KeyPoly, DeltaOracleAgreement)
{
    std::mt19937_64 rng(31);
    for (const Amb &v : {v_sqrt(), v_zero(), v_fact()}) {
        for (int i = 0; i < 40; ++i) {
            const QP f = random_poly(rng, 4);
            EXPECT_EQ(delta(f, v).delta, derivative_delta(f, v)) << f.str();
        }
    }
}

TEST(KeyPoly, KeyPolynomialProperties)
{
    std::mt19937_64 rng(32);
    const QP q = poly({2, 0, 1});
    const Amb v = v_sqrt();
    const auto k = is_key_poly(q, v);
    ASSERT_TRUE(k.key);
    const P pair(sqrt_m2(), k.delta);
    for (int i = 0; i < 100; ++i) {
        const QP f = random_poly(rng, 4);
        EXPECT_EQ(vq(q, f, v), pair_val(pair, f));
        if (f.degree() < q.degree()) EXPECT_LT(delta(f, v).delta, k.delta);
        const A a = rat(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 2));
        EXPECT_LE(pair_val(P(a, v.dist_x(a)), f), v.value(f));
    }
}

TEST(Pcs, IsPcs)
{
    EXPECT_TRUE(is_pcs<PAdicRationals>({rat(2), rat(6), rat(70)}));
    EXPECT_FALSE(is_pcs<PAdicRationals>({rat(2), rat(4), rat(6)}));
    EXPECT_TRUE(is_pcs<PAdicRationals>({rat(0), rat(2), rat(6), rat(70)}));
    EXPECT_THROW(is_pcs<PAdicRationals>({rat(0), rat(2)}), Error);
}

TEST(Pcs, ClassifyPrefix)
{
    const auto s = factorial_stream(K2, 5);
    const auto c = classify_prefix(s, poly({-2, 0, 1}), 3);
    ASSERT_EQ(c.verdict, PrefixVerdict::Stabilized);
    EXPECT_EQ(c.certificate->stage, 1);
    EXPECT_EQ(c.certificate->value, fin(1));
    EXPECT_EQ(c.certificate->bound, fin(1, 2)); // b = 1 gives -1, b = 2 gives 1/2
    EXPECT_EQ(c.certificate->gamma, fin(2));

    std::vector<A> pow2;
    for (int n = 1; n <= 6; ++n) pow2.push_back(rat(1L << n));
    const auto s2 = PCS<PAdicRationals>::from_list(pow2);
    EXPECT_EQ(classify_prefix(s2, poly({0, 1}), 5).verdict, PrefixVerdict::IncreasingSoFar);
    EXPECT_EQ(classify_prefix(s, poly({1}), 3).certificate->value, fin(0));
}

TEST(Pcs, LimitVal)
{
    const LimitValuation<PAdicRationals> L(factorial_stream(K2, 6));
    EXPECT_EQ(L.value(poly({-2, 0, 1})), fin(1));
    EXPECT_EQ(L.value(poly({0, 1})), fin(1));
    EXPECT_EQ(L.value(poly({12})), fin(2));
    EXPECT_EQ(L.dist_x(rat(2)), fin(2));
    EXPECT_EQ(L.dist_x(rat(70)), fin(24));
    // A limit of the stream itself would need infinitely many stages.
    const LimitValuation<PAdicRationals> L3(factorial_stream(K2, 3));
    EXPECT_THROW(L3.value(poly({-70, 1}) * poly({-70, 1})), Error);
}
