#ifndef VALK_VERIFY_HPP
#define VALK_VERIFY_HPP

#include <algorithm>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "io.hpp"
#include "keypoly.hpp"
#include "pcslimit.hpp"
#include "ramicf.hpp"

namespace valk::verify {

using json = nlohmann::json;
using K = PAdicRationals;
using T = Tower<K>;
using A = AlgElem<K>;
using P = PairOfDefinition<K>;
using QP = Poly<K>;
using Amb = AmbientValuation<K>;
using LV = LimitValuation<K>;

/// One sample: nullopt on success, otherwise the counterexample.
using Sample = std::function<std::optional<json>(std::mt19937_64 &, std::size_t)>;

struct Suite {
    std::string name;
    std::string description;
    Sample sample;
};

struct Report {
    std::string suite;
    std::size_t samples = 0, passed = 0, failed = 0;
    std::optional<json> counterexample; // the first failing sample in index order

    json to_json() const
    {
        return {{"suite", suite},
                {"samples", samples},
                {"passed", passed},
                {"failed", failed},
                {"counterexample", counterexample ? *counterexample : json(nullptr)}};
    }
};

namespace fixtures {

inline std::shared_ptr<const T> radical_tower(std::uint64_t p, long c, long n)
{
    const K k(p);
    auto t0 = T::create(k);
    std::vector<T::Elem> m(static_cast<std::size_t>(n + 1), t0->zero(0));
    m[0] = t0->from_base(Rational(c));
    m.back() = t0->one(0);
    return T::create(k, {m});
}

inline A top_gen(const std::shared_ptr<const T> &t) { return make_exact(t, t->height(), t->gen(t->height())); }

inline const A &sqrt_m2()
{
    static const A a = top_gen(radical_tower(2, 2, 2));
    return a;
}

struct NamedAmbient {
    std::string name;
    Amb v;
};

inline const std::vector<NamedAmbient> &ambients()
{
    static const std::vector<NamedAmbient> all = [] {
        const K k2(2);
        std::vector<NamedAmbient> a;
        a.push_back({"v_{sqrt(-2),1}", Amb(P(sqrt_m2(), OrderedValue::fin(1)))});
        a.push_back({"v_{0,1/2}", Amb(P(from_ground(k2, Rational(0)), OrderedValue::fin(Rational(1, 2))))});
        a.push_back({"limit sum 2^(n!)", Amb(std::make_shared<const LV>(factorial_stream(k2, 6)))});
        a.push_back({"limit sum 5^(1-2^-n)", Amb(std::make_shared<const LV>(root_tower_stream(K(5), 5)))});
        return a;
    }();
    return all;
}

struct KeyFixture {
    std::string ambient;
    const Amb *v;
    QP q;
    A root; // a root of q with v(X - root) = δ(q)
};

/// (ambient index, constructed stages) for the two limit ambients.
inline const std::vector<std::pair<std::size_t, std::vector<StageData<K>>>> &limit_stages()
{
    static const std::vector<std::pair<std::size_t, std::vector<StageData<K>>>> all = [] {
        const auto &amb = ambients();
        std::vector<std::pair<std::size_t, std::vector<StageData<K>>>> out;
        out.emplace_back(2, construct_stages(amb[2].v.limit(), 3));
        out.emplace_back(3, construct_stages(amb[3].v.limit(), 2));
        return out;
    }();
    return all;
}

inline const std::vector<KeyFixture> &keys()
{
    static const std::vector<KeyFixture> all = [] {
        const auto &amb = ambients();
        std::vector<KeyFixture> out;
        const K k2(2);
        out.push_back({amb[0].name, &amb[0].v, QP(k2, {Rational(2), Rational(0), Rational(1)}), sqrt_m2()});
        out.push_back({amb[0].name, &amb[0].v, QP(k2, {Rational(-1), Rational(1)}), from_ground(k2, Rational(1))});
        for (const auto &[i, st] : limit_stages())
            for (const auto &s : st) out.push_back({amb[i].name, &amb[i].v, s.q, s.a});
        return out;
    }();
    return all;
}

inline const std::vector<std::vector<StageData<K>>> &root_tower_stages()
{
    static const std::vector<std::vector<StageData<K>>> all = [] {
        std::vector<std::vector<StageData<K>>> out;
        for (std::uint64_t p : {5u, 2u}) out.push_back(construct_stages(LV(root_tower_stream(K(p), 6)), 3));
        return out;
    }();
    return all;
}

} // namespace fixtures

namespace detail {

inline Rational random_rational(std::mt19937_64 &rng, long span = 16, long den = 4)
{
    Rational q(static_cast<long>(rng() % static_cast<unsigned long>(2 * span + 1)) - span,
               1 + static_cast<long>(rng() % static_cast<unsigned long>(den)));
    q.canonicalize();
    return q;
}

inline QP random_poly(const K &k, std::mt19937_64 &rng, int max_deg, bool monic = false, int min_deg = 0)
{
    const int n = min_deg + static_cast<int>(rng() % static_cast<unsigned>(max_deg - min_deg + 1));
    std::vector<Rational> v;
    for (int i = 0; i <= n; ++i) v.push_back(random_rational(rng));
    if (v.back() == 0 || monic) v.back() = 1;
    return QP(k, v);
}

inline json vjson(const OrderedValue &v) { return v.str(); }

inline json pjson(const QP &f) { return io::poly_to_json(f); }

} // namespace detail

inline std::vector<Suite> suites()
{
    using namespace fixtures;
    using namespace detail;
    using V = OrderedValue;
    std::vector<Suite> s;

    s.push_back({"valuation-axioms", "v(xy) = v(x) + v(y) and v(x + y) >= min with equality off ties, on Q_2, F_3((t)) and Q_5(5^(1/4))",
                 [](std::mt19937_64 &rng, std::size_t i) -> std::optional<json> {
                     auto check = [](const V &vx, const V &vy, const V &vxy, const V &vsum) {
                         if (vxy != vx + vy) return false;
                         if (vsum < min(vx, vy)) return false;
                         return vx == vy || vsum == min(vx, vy);
                     };
                     if (i % 3 == 0) {
                         const K k(2);
                         const Rational x = random_rational(rng) * 4, y = random_rational(rng);
                         if (check(k.val(x), k.val(y), k.val(x * y), k.val(x + y))) return std::nullopt;
                         return json{{"field", "Q_2"}, {"x", to_string(x)}, {"y", to_string(y)}};
                     }
                     if (i % 3 == 1) {
                         const TAdicPrime k{PrimeField(3)};
                         const auto x = k.make(Poly<PrimeField>(PrimeField(3), {0, rng() % 3, 1}), Poly<PrimeField>(PrimeField(3), {1 + rng() % 2, rng() % 3}));
                         const auto y = k.make(Poly<PrimeField>(PrimeField(3), {rng() % 3, 1}), Poly<PrimeField>(PrimeField(3), {0, 0, 1}));
                         if (check(k.val(x), k.val(y), k.val(k.mul(x, y)), k.val(k.add(x, y)))) return std::nullopt;
                         return json{{"field", "F_3((t))"}, {"x", k.str(x)}, {"y", k.str(y)}};
                     }
                     static const auto t = radical_tower(5, -5, 4);
                     auto rnd = [&] {
                         T::Elem e = t->zero(1);
                         for (auto &c : e.c) c = t->from_base(random_rational(rng, 6, 3));
                         return e;
                     };
                     const auto x = rnd(), y = rnd();
                     if (check(t->val(1, x), t->val(1, y), t->val(1, t->mul(1, x, y)), t->val(1, t->add(1, x, y)))) return std::nullopt;
                     return json{{"field", "Q_5(5^(1/4))"}, {"x", t->str(1, x)}, {"y", t->str(1, y)}};
                 }});

    s.push_back({"pair-axioms", "pair_val is multiplicative and ultrametric, and agrees with the root-based formula",
                 [](std::mt19937_64 &rng, std::size_t i) -> std::optional<json> {
                     const auto &amb = ambients();
                     const P &p = amb[i % 2].v.pair();
                     const QP f = random_poly(p.a.ground(), rng, 4), g = random_poly(p.a.ground(), rng, 4);
                     const V vf = pair_val(p, f), vg = pair_val(p, g);
                     const bool ok = pair_val(p, f * g) == vf + vg && pair_val(p, f + g) >= min(vf, vg) &&
                                     vf == root_pair_val(p, f);
                     if (ok) return std::nullopt;
                     return json{{"pair", amb[i % 2].name}, {"f", pjson(f)}, {"g", pjson(g)}};
                 }});

    s.push_back({"lemma7_1", "v f > v_{a,gamma} f iff delta(f) > gamma, for gamma = v(X - a)",
                 [](std::mt19937_64 &rng, std::size_t i) -> std::optional<json> {
                     const auto &amb = ambients();
                     const auto &[name, v] = amb[i % amb.size()];
                     const K &k = v.by_pair() ? v.pair().a.ground() : v.limit().ground();
                     QP f = random_poly(k, rng, 4, false, 1);
                     A a = from_ground(k, random_rational(rng, 8, 2));
                     if (i == 0) {
                         f = QP(k, {Rational(2), Rational(0), Rational(1)});
                         a = from_ground(k, Rational(0));
                     } else if (!v.by_pair() && rng() % 2 == 0) {
                         a = v.limit().pcs().z(1 + static_cast<int>(rng() % 3));
                     } else if (v.by_pair() && rng() % 2 == 0) {
                         a = alg_add(v.pair().a, from_ground(k, random_rational(rng) * 2));
                     }
                     const V gamma = v.dist_x(a);
                     const V vf = v.value(f), vp = pair_val(P(a, gamma), f);
                     const V d = delta(f, v).delta;
                     if ((vf > vp) == (d > gamma) && vp <= vf) return std::nullopt;
                     return json{{"ambient", name}, {"f", pjson(f)}, {"a", io::alg_brief(a)}, {"gamma", vjson(gamma)},
                                 {"vf", vjson(vf)}, {"vpair", vjson(vp)}, {"delta", vjson(d)}};
                 }});

    s.push_back({"lemma7_2", "v_Q f = v_{a,delta(Q)} f for key polynomials Q with maximal root a",
                 [](std::mt19937_64 &rng, std::size_t i) -> std::optional<json> {
                     const auto &ks = keys();
                     const auto &kf = ks[i % ks.size()];
                     const V dq = delta(kf.q, *kf.v).delta;
                     const QP f = random_poly(kf.q.ring(), rng, 2 * static_cast<int>(kf.q.degree()));
                     const V lhs = vq(kf.q, f, *kf.v), rhs = pair_val(P(kf.root, dq), f);
                     if (lhs == rhs) return std::nullopt;
                     return json{{"ambient", kf.ambient}, {"Q", pjson(kf.q)}, {"f", pjson(f)}, {"vQ", vjson(lhs)}, {"vpair", vjson(rhs)}};
                 }});

    s.push_back({"delta-oracle", "root-based delta equals the derivative-based delta",
                 [](std::mt19937_64 &rng, std::size_t i) -> std::optional<json> {
                     const auto &amb = ambients();
                     const auto &[name, v] = amb[i % amb.size()];
                     const K &k = v.by_pair() ? v.pair().a.ground() : v.limit().ground();
                     const QP f = random_poly(k, rng, 4);
                     const V d1 = delta(f, v).delta, d2 = derivative_delta(f, v);
                     if (d1 == d2) return std::nullopt;
                     return json{{"ambient", name}, {"f", pjson(f)}, {"root_delta", vjson(d1)}, {"derivative_delta", vjson(d2)}};
                 }});

    s.push_back({"newton-conjugates", "Newton polygon of f(Y + b) matches the distances from b to the conjugates",
                 [](std::mt19937_64 &rng, std::size_t i) -> std::optional<json> {
                     static const std::vector<A> gens = {top_gen(radical_tower(2, 2, 2)), top_gen(radical_tower(5, -5, 4)),
                                                         top_gen(radical_tower(5, 2, 2)), top_gen(radical_tower(3, -3, 2))};
                     const A &g = gens[i % gens.size()];
                     const A a = alg_add(g, from_ground(g.ground(), random_rational(rng, 4, 2)));
                     const A b = from_ground(g.ground(), random_rational(rng, 8, 3));
                     std::vector<V> want;
                     for (const auto &c : conjugates(a)) want.push_back(dist(c, b));
                     std::sort(want.begin(), want.end(), std::greater<>());
                     const auto got = root_distances(a.minpoly(), b);
                     if (got == want) return std::nullopt;
                     json w = json::array(), h = json::array();
                     for (const auto &x : want) w.push_back(vjson(x));
                     for (const auto &x : got) h.push_back(vjson(x));
                     return json{{"a", io::alg_to_json(a)}, {"b", io::alg_brief(b)}, {"conjugate_distances", w}, {"newton", h}};
                 }});

    s.push_back({"lemma3_2", "for a minimal pair (a, gamma) and an equivalent (a', gamma), e(a) | e(a') and f(a) | f(a')",
                 [](std::mt19937_64 &rng, std::size_t) -> std::optional<json> {
                     static const auto t = [] {
                         auto t1 = radical_tower(2, 2, 2);
                         return T::extend(*t1, {t1->neg(1, t1->gen(1)), t1->zero(1), t1->one(1)});
                     }();
                     static const A a = make_exact(t, 1, t->gen(1));
                     static const bool minimal = is_minimal(P(a, V::fin(1))).minimal;
                     const Rational c = random_rational(rng, 6, 1) * 2, r = random_rational(rng, 6, 1) * 2;
                     const auto x = t->add(2, t->embed(t->gen(1), 1, 2),
                                           t->add(2, t->mul(2, t->from_base(c, 2), t->gen(2)), t->from_base(r, 2)));
                     const A a2 = make_exact(t, 2, x);
                     const P p1(a, V::fin(1)), p2(a2, V::fin(1));
                     const auto i1 = ext_invariants(a), i2 = ext_invariants(a2);
                     if (minimal && same_valuation(p1, p2) && i2.e % i1.e == 0 && i2.f % i1.f == 0) return std::nullopt;
                     return json{{"a", io::alg_brief(a)}, {"a2", io::alg_to_json(a2)}, {"minimal", minimal},
                                 {"e", {i1.e, i2.e}}, {"f", {i1.f, i2.f}}};
                 }});

    s.push_back({"lemma6_2", "adjoining the tame part of an earlier stage preserves (e, f_res) of a later stage",
                 [](std::mt19937_64 &rng, std::size_t i) -> std::optional<json> {
                     const auto &all = root_tower_stages();
                     const auto &st = all[i % all.size()];
                     std::size_t x = rng() % st.size(), y = rng() % st.size();
                     if (x > y) std::swap(x, y);
                     const A c = composite_generator(st[y].a, tame_part(st[x].a));
                     const auto ic = local_invariants(c), ia = local_invariants(st[y].a);
                     if (ic.e == ia.e && ic.f_res == ia.f_res) return std::nullopt;
                     return json{{"p", i % all.size() == 0 ? 5 : 2}, {"stages", {x + 1, y + 1}},
                                 {"composite", {ic.e, ic.f_res}}, {"stage", {ia.e, ia.f_res}}};
                 }});

    s.push_back({"lemma2_1", "a later approximant lies closer to X than gamma_nu at every constructed stage",
                 [](std::mt19937_64 &rng, std::size_t i) -> std::optional<json> {
                     const auto &ls = limit_stages();
                     const auto &[amb, st] = ls[i % ls.size()];
                     const LV &L = ambients()[amb].v.limit();
                     const auto &sd = st[rng() % st.size()];
                     // v(X - z_m) is certified through a stage beyond m.
                     const int last = L.pcs().max_stage() - 1;
                     if (sd.mu + 1 > last) return json{{"ambient", ambients()[amb].name}, {"error", "no later approximant"}};
                     const int m = sd.mu + 1 + static_cast<int>(rng() % static_cast<unsigned>(last - sd.mu));
                     const V dm = L.dist_x(L.pcs().z(m));
                     if (dm > sd.gamma) return std::nullopt;
                     return json{{"ambient", ambients()[amb].name}, {"Q", pjson(sd.q)}, {"gamma", vjson(sd.gamma)},
                                 {"later", m}, {"dist", vjson(dm)}};
                 }});

    s.push_back({"lemma4_1", "dist(r, z') > gamma_nu implies z' meets gamma_1..gamma_nu, which in turn follows from meeting gamma_1..gamma_(nu+1)",
                 [](std::mt19937_64 &rng, std::size_t i) -> std::optional<json> {
                     const auto &amb = ambients();
                     const auto &[name, v] = amb[2 + i % 2];
                     const PCS<K> &s = v.limit().pcs();
                     const int n = s.length();
                     const int nu = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 2));
                     const A &r = s.z(n);
                     const K &k = r.ground();
                     const long e = static_cast<long>(rng() % 6) - 1;
                     Rational pe = 1;
                     for (long j = 0; j < std::abs(e); ++j) pe *= static_cast<long>(k.p());
                     if (e < 0) pe = 1 / pe;
                     Rational c = random_rational(rng, 4, 1);
                     if (c == 0) c = 1;
                     const A z = alg_add(s.z(1 + static_cast<int>(rng() % static_cast<unsigned>(n))), from_ground(k, c * pe));
                     auto meets = [&](int upto) {
                         for (int mu = 1; mu <= upto; ++mu)
                             if (dist(z, s.z(mu)) != s.gamma(mu)) return false;
                         return true;
                     };
                     const bool b = dist(r, z) > s.gamma(nu), a_nu = meets(nu), a_next = meets(nu + 1);
                     if ((!b || a_nu) && (!a_next || b)) return std::nullopt;
                     return json{{"ambient", name}, {"nu", nu}, {"z", io::alg_brief(z)}, {"dist_r", vjson(dist(r, z))},
                                 {"meets_nu", a_nu}, {"meets_next", a_next}};
                 }});

    s.push_back({"pcs-prefix", "is_pcs agrees with the triple definition, and stabilization certificates hold on later terms",
                 [](std::mt19937_64 &rng, std::size_t i) -> std::optional<json> {
                     const auto &amb = ambients();
                     const auto &[name, v] = amb[2 + i % 2];
                     const PCS<K> &s = v.limit().pcs();
                     const K &k = s.z(1).ground();
                     std::vector<A> pre;
                     for (int m = 1; m <= 4; ++m) {
                         A z = s.z(m);
                         if (rng() % 4 == 0) z = alg_add(z, from_ground(k, random_rational(rng, 4, 1)));
                         pre.push_back(z);
                     }
                     bool oracle = true;
                     for (std::size_t x = 0; x < pre.size(); ++x)
                         for (std::size_t y = x + 1; y < pre.size(); ++y)
                             for (std::size_t w = y + 1; w < pre.size(); ++w)
                                 if (!(dist(pre[w], pre[y]) > dist(pre[y], pre[x]))) oracle = false;
                     const bool got = is_pcs(pre);
                     const QP f = random_poly(k, rng, 3, false, 1);
                     const auto cls = classify_prefix(s, f, s.max_stage());
                     bool cert_ok = true;
                     if (cls.certificate) {
                         for (int m = cls.certificate->stage + 1; m <= s.length(); ++m) {
                             const A &zm = s.z(m);
                             if (zm.tower->val(zm.level, eval_at(f, zm)) != cls.certificate->value) cert_ok = false;
                         }
                     }
                     if (got == oracle && cert_ok) return std::nullopt;
                     json pj = json::array();
                     for (const auto &z : pre) pj.push_back(io::alg_brief(z));
                     return json{{"ambient", name}, {"prefix", pj}, {"is_pcs", got}, {"oracle", oracle}, {"f", pjson(f)}, {"certificate_holds", cert_ok}};
                 }});

    s.push_back({"key-sampled", "key verdicts are consistent with sampled lower-degree delta values and witnesses",
                 [](std::mt19937_64 &rng, std::size_t i) -> std::optional<json> {
                     const auto &amb = ambients();
                     const auto &[name, v] = amb[i % 3];
                     const K &k = v.by_pair() ? v.pair().a.ground() : v.limit().ground();
                     const QP q = random_poly(k, rng, 3, true, 1);
                     const auto kc = is_key_poly(q, v);
                     bool ok = true;
                     if (kc.key) {
                         for (int j = 0; j < 4 && ok; ++j) {
                             if (q.degree() < 2) break;
                             const QP f = random_poly(k, rng, static_cast<int>(q.degree()) - 1, true, 1);
                             if (f.degree() < q.degree() && delta(f, v).delta >= kc.delta) ok = false;
                         }
                     } else {
                         ok = kc.witness && kc.witness->degree() < q.degree() && delta(*kc.witness, v).delta >= kc.delta;
                     }
                     if (ok) return std::nullopt;
                     return json{{"ambient", name}, {"Q", pjson(q)}, {"key", kc.key}, {"delta", vjson(kc.delta)}};
                 }});
    return s;
}

inline std::vector<std::string> suite_names()
{
    std::vector<std::string> n;
    for (const auto &s : suites()) n.push_back(s.name);
    return n;
}

/// Runs `samples` cases. Case i draws from its own generator seeded by (seed, i),
/// so the report does not depend on scheduling.
inline Report run(const std::string &name, std::size_t samples, std::uint64_t seed, unsigned threads = 0)
{
    const auto all = suites();
    const auto it = std::find_if(all.begin(), all.end(), [&](const Suite &s) { return s.name == name; });
    if (it == all.end()) {
        std::string list;
        for (const auto &s : all) list += (list.empty() ? "" : ", ") + s.name;
        fail(ErrorCode::InvalidInput, "unknown suite '" + name + "'; available: " + list);
    }
    const Suite &suite = *it;
    if (threads == 0) threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));

    std::vector<std::optional<json>> results(samples);
    auto one = [&](std::size_t i) {
        std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(i)};
        std::mt19937_64 rng(sq);
        try {
            results[i] = suite.sample(rng, i);
        } catch (const Error &e) {
            results[i] = json{{"sample", i}, {"error", e.what()}};
        }
    };
    // Fixtures are built once, before the workers start.
    if (samples > 0) one(0);
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < threads; ++w) {
        workers.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = 1 + w; i < samples; i += threads) one(i);
        }));
    }
    for (auto &f : workers) f.get();

    Report r{suite.name, samples, 0, 0, std::nullopt};
    for (std::size_t i = 0; i < samples; ++i) {
        if (!results[i]) {
            ++r.passed;
            continue;
        }
        ++r.failed;
        if (!r.counterexample) {
            r.counterexample = *results[i];
            (*r.counterexample)["sample"] = i;
        }
    }
    return r;
}

} // namespace valk::verify

#endif
