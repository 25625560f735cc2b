// Acceptance criteria: one PASS/FAIL line per criterion with its runtime.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <valk/keypoly.hpp>
#include <valk/pcslimit.hpp>
#include <valk/ramicf.hpp>
#include <valk/verify.hpp>

using namespace valk;
using V = OrderedValue;
using K = PAdicRationals;
using T = Tower<K>;
using A = AlgElem<K>;
using P = PairOfDefinition<K>;
using QP = Poly<K>;
using Amb = AmbientValuation<K>;
using LV = LimitValuation<K>;

namespace {

/// Collects failed checks; a criterion passes when none failed.
struct Check {
    std::ostringstream log;
    int failures = 0;

    template <class X, class Y>
    void eq(const X &got, const Y &want, const std::string &what)
    {
        if (got == want) return;
        ++failures;
        log << what << " ";
    }
    void ok(bool cond, const std::string &what)
    {
        if (!cond) {
            ++failures;
            log << what << " ";
        }
    }
};

V fin(long a, long b = 1) { return V::fin(Rational(a, b)); }

QP poly(std::uint64_t p, std::vector<long> c)
{
    std::vector<Rational> v(c.begin(), c.end());
    return QP(K(p), v);
}

A rat(std::uint64_t p, long a) { return from_ground(K(p), Rational(a)); }

A radical(std::uint64_t p, long c, long n) { return verify::fixtures::top_gen(verify::fixtures::radical_tower(p, c, n)); }

/// v_Q f from the Q-expansion and the root formula for the pair values.
V vq_oracle(const P &p, const QP &q, const QP &f)
{
    const V vq = root_pair_val(p, q);
    std::optional<V> best;
    long i = 0;
    for (const auto &c : q_expansion(f, q)) {
        if (!c.is_zero()) {
            const V v = root_pair_val(p, c) + vq.scaled(i);
            if (!best || v < *best) best = v;
        }
        ++i;
    }
    return *best;
}

/// max_b (v f(z) - v ∂_b f(z)) / b, recomputed from the Hasse derivatives.
V hasse_bound(const QP &f, const A &z)
{
    const auto &t = *z.tower;
    const V vf = t.val(z.level, eval_at(f, z));
    V best = V::neg_inf();
    for (long b = 1; b <= f.degree(); ++b) {
        const V vb = t.val(z.level, eval_at(hasse_deriv(f, static_cast<std::size_t>(b)), z));
        if (vb.is_pos_inf()) continue;
        best = max(best, V::fin((vf - vb).rational() / b));
    }
    return best;
}

bool c1(Check &c)
{
    const A s = radical(2, 2, 2);
    const P p0(rat(2, 0), fin(1, 2)), ps(s, fin(1));
    const QP q = poly(2, {2, 0, 1}), x = poly(2, {0, 1}), x3 = poly(2, {0, 0, 0, 1});
    const Amb v0(p0), vs(ps);
    c.eq(pair_val(p0, q), fin(1), "v_{0,1/2}(X^2+2)");
    c.eq(root_pair_val(p0, q), fin(1), "oracle v_{0,1/2}(X^2+2)");
    c.eq(pair_val(ps, q), fin(2), "v_{sqrt(-2),1}(X^2+2)");
    c.eq(root_pair_val(ps, q), fin(2), "oracle v_{sqrt(-2),1}(X^2+2)");
    c.eq(vq(q, x3, vs), fin(3, 2), "v_Q(X^3)");
    c.eq(vq_oracle(ps, q, x3), fin(3, 2), "oracle v_Q(X^3)");
    c.eq(vq(q, x, vs), fin(1, 2), "v_Q(X)");
    c.eq(vq_oracle(ps, q, x), fin(1, 2), "oracle v_Q(X)");
    c.eq(delta(q, vs).delta, fin(1), "delta under v_{sqrt(-2),1}");
    c.eq(derivative_delta(q, vs), fin(1), "oracle delta under v_{sqrt(-2),1}");
    c.eq(delta(q, v0).delta, fin(1, 2), "delta under v_{0,1/2}");
    c.eq(derivative_delta(q, v0), fin(1, 2), "oracle delta under v_{0,1/2}");
    return true;
}

bool c2(Check &c)
{
    const std::size_t n = verify::fixtures::ambients().size();
    const auto r = verify::run("lemma7_1", 100 * n, 2024);
    c.eq(r.failed, 0u, "lemma7_1 failures");
    c.log << r.passed << " samples over " << n << " ambients ";
    // The strict branch must actually be exercised.
    const auto &amb = verify::fixtures::ambients();
    const QP q = poly(2, {2, 0, 1});
    const auto t = truncation_compare(q, rat(2, 0), amb[0].v);
    c.eq(t.kind, TruncationCase::StrictlyBelow, "StrictlyBelow fixture");
    return true;
}

bool c3(Check &c)
{
    const std::size_t n = verify::fixtures::keys().size();
    const auto r = verify::run("lemma7_2", 100 * n, 2025);
    c.eq(r.failed, 0u, "lemma7_2 failures");
    for (const auto &k : verify::fixtures::keys()) c.ok(is_key_poly(k.q, *k.v).key, "fixture " + k.q.str() + " is not key");
    c.log << r.passed << " samples over " << n << " keys ";
    return true;
}

bool c4(Check &c)
{
    const QP q = poly(2, {2, 0, 1});
    const Amb vs(P(radical(2, 2, 2), fin(1))), v0(P(rat(2, 0), fin(1, 2)));
    c.ok(is_key_poly(q, vs).key, "key under v_{sqrt(-2),1}");
    const auto k = is_key_poly(q, v0);
    c.ok(!k.key, "not key under v_{0,1/2}");
    c.eq(k.delta, fin(1, 2), "delta(Q) = 1/2");
    c.ok(k.witness && k.witness->degree() < 2 && delta(*k.witness, v0).delta >= k.delta, "witness");
    c.eq(delta(poly(2, {-2, 1}), v0).delta, fin(1, 2), "delta(X-2) = 1/2");
    c.eq(derivative_delta(poly(2, {-2, 1}), v0), fin(1, 2), "oracle delta(X-2)");
    if (k.witness) c.log << "witness " << k.witness->str() << ", X-2 also attains 1/2 ";
    return true;
}

bool c5(Check &c)
{
    const auto L = std::make_shared<const LV>(factorial_stream(K(2), 6));
    const auto st = construct_stages(*L, 3);
    const long want[3][2] = {{2, 2}, {6, 6}, {70, 24}};
    c.eq(st.size(), 3u, "three stages");
    for (std::size_t i = 0; i < st.size() && i < 3; ++i) {
        c.ok(st[i].a.exact() && st[i].a.degree() == 1 && *st[i].a.center.base == want[i][0], "a_" + std::to_string(i + 1));
        c.eq(st[i].gamma, fin(want[i][1]), "gamma_" + std::to_string(i + 1));
        c.eq(st[i].q, poly(2, {-want[i][0], 1}), "Q_" + std::to_string(i + 1));
    }
    const Amb v(L);
    for (const QP &f : {poly(2, {0, 1}), poly(2, {-2, 0, 1}), poly(2, {2, 4, 0, 1})}) {
        const auto r = complete_seq_check(L, f, 3);
        c.ok(r.stage >= 1 && r.stage <= 3, "stage for " + f.str());
        c.eq(r.value, L->value(f), "value for " + f.str());
        if (r.stage >= 1 && r.stage <= 3) c.eq(vq(st[static_cast<std::size_t>(r.stage - 1)].q, f, v), r.value, "v_Q for " + f.str());
        // Far along the stream the value is read off directly.
        const A &z = L->pcs().z(6);
        c.eq(z.tower->val(z.level, eval_at(f, z)), r.value, "v f(z_6) for " + f.str());
    }
    c.eq(L->value(poly(2, {-2, 0, 1})), fin(1), "v(X^2-2) = 1");
    return true;
}

bool c6(Check &c)
{
    const auto L = std::make_shared<const LV>(root_tower_stream(K(5), 5));
    const Amb v(L);
    const auto st = construct_stages(*L, 2);
    c.eq(st.size(), 2u, "two stages");
    if (st.size() != 2) return true;
    c.eq(st[0].q.degree(), 2L, "deg Q_1");
    c.eq(st[1].q.degree(), 4L, "deg Q_2");
    c.eq(st[0].gamma, fin(3, 4), "gamma_1");
    c.eq(st[1].gamma, fin(7, 8), "gamma_2");
    const auto chain = invariants_union_stage(st);
    c.ok(chain.stages.size() == 2 && chain.stages[0].e == 2 && chain.stages[0].f == 1 && chain.stages[1].e == 4 &&
             chain.stages[1].f == 1 && chain.divisible,
         "invariants (2,1) | (4,1)");
    V prev = V::neg_inf();
    for (const auto &s : st) {
        const auto k = is_key_poly(s.q, v);
        c.ok(k.key, "Q key: " + s.q.str());
        c.ok(prev < k.delta, "delta increasing");
        prev = k.delta;
    }
    return true;
}

bool c7(Check &c)
{
    for (std::uint64_t p : {5u, 2u}) {
        const LV L(root_tower_stream(K(p), 6));
        const auto st = construct_stages(L, p == 5 ? 2 : 3);
        const auto r = icf_sandwich(st);
        const std::string tag = "p=" + std::to_string(p) + " ";
        if (p == 5) {
            c.ok(r.collapsed, tag + "collapsed");
            c.ok(r.lower.size() == r.upper.size(), tag + "generator counts");
            for (std::size_t i = 0; i < r.lower.size() && i < r.upper.size(); ++i)
                c.ok(r.lower[i].minpoly() == r.upper[i].minpoly() && dist(r.lower[i], r.upper[i]).is_pos_inf(), tag + "lower = upper");
        } else {
            c.ok(!r.collapsed, tag + "not collapsed");
            for (const auto &g : r.lower) c.ok(g.degree() == 1, tag + "lower generator rational");
        }
        // Composite invariants for every (earlier tame part, later stage) pair.
        for (std::size_t i = 0; i < st.size(); ++i) {
            const A b = tame_part(st[i].a);
            for (std::size_t j = i; j < st.size(); ++j) {
                const auto ic = local_invariants(composite_generator(st[j].a, b)), ia = local_invariants(st[j].a);
                c.ok(ic.e == ia.e && ic.f_res == ia.f_res, tag + "composite invariants");
            }
        }
    }
    return true;
}

bool c8(Check &c)
{
    c.ok(is_pcs<K>({rat(2, 2), rat(2, 6), rat(2, 70)}), "(2,6,70)");
    c.ok(!is_pcs<K>({rat(2, 2), rat(2, 4), rat(2, 6)}), "(2,4,6)");
    c.ok(is_pcs<K>({rat(2, 0), rat(2, 2), rat(2, 6), rat(2, 70)}), "(0,2,6,70)");

    const auto s = factorial_stream(K(2), 6);
    const QP f = poly(2, {-2, 0, 1});
    const auto cl = classify_prefix(s, f, s.max_stage());
    c.ok(cl.verdict == PrefixVerdict::Stabilized && cl.certificate, "stabilized");
    if (cl.certificate) {
        const auto &ct = *cl.certificate;
        c.eq(ct.stage, 1, "stage 1");
        c.eq(ct.value, fin(1), "value 1");
        c.eq(ct.bound, hasse_bound(f, s.z(1)), "bound recomputed");
        c.ok(ct.bound < ct.gamma && ct.gamma == s.gamma(1), "bound below gamma_1");
        for (int m = 1; m <= s.length(); ++m) c.eq(K(2).val(*s.z(m).center.base * *s.z(m).center.base - 2), fin(1), "v f(z_m)");
    }

    // A later approximant beats gamma at every constructed stage.
    for (const auto &[amb, st] : verify::fixtures::limit_stages()) {
        const LV &L = verify::fixtures::ambients()[amb].v.limit();
        for (const auto &sd : st) {
            c.ok(sd.mu + 1 <= L.pcs().max_stage() - 1, "a later approximant exists");
            if (sd.mu + 1 <= L.pcs().max_stage() - 1) c.ok(L.dist_x(L.pcs().z(sd.mu + 1)) > sd.gamma, "later approximant beats gamma");
        }
    }
    return true;
}

bool c9(Check &c)
{
    int compared = 0;
    const auto &amb = verify::fixtures::ambients();
    std::vector<QP> fs = {poly(2, {0, 1}), poly(2, {-2, 0, 1}), poly(2, {2, 4, 0, 1}), poly(2, {2, 0, 1}), poly(2, {-1, 1})};
    for (const auto &k : verify::fixtures::keys()) fs.push_back(k.q);
    for (const auto &[name, v] : amb) {
        for (QP f : fs) {
            if (!v.by_pair()) {
                const K &g = v.limit().ground();
                std::vector<Rational> cs = f.coeffs();
                f = QP(g, cs);
                const auto cert = v.limit().certificate(f);
                c.eq(delta(f, v).delta, cert.bound, name + " bound vs delta for " + f.str());
            } else {
                if (f.ring().p() != v.pair().a.ground().p()) continue;
                c.eq(delta(f, v).delta, derivative_delta(f, v), name + " delta for " + f.str());
            }
            ++compared;
        }
    }
    int towers = 0;
    std::vector<A> gens = {radical(2, 2, 2), radical(5, -5, 4), radical(5, 2, 2), radical(3, -3, 2), radical(2, -2, 2), radical(7, 7, 3)};
    for (const auto &[i, st] : verify::fixtures::limit_stages())
        for (const auto &s : st)
            if (s.a.degree() > 1) gens.push_back(s.a);
    for (const auto &a : gens) {
        std::vector<A> conj;
        try {
            conj = conjugates(a);
        } catch (const Error &e) {
            if (e.code() != ErrorCode::UnsupportedTower) throw;
            continue; // conjugates outside K(a) are not representable
        }
        std::vector<V> vals;
        for (const auto &x : conj) vals.push_back(elem_val(x));
        std::sort(vals.begin(), vals.end(), std::greater<>());
        c.eq(vals, newton_polygon(a.ground(), a.minpoly()).root_valuations(), "conjugates of " + a.str());
        ++towers;
    }
    c.log << compared << " delta comparisons, " << towers << " towers ";
    c.ok(towers >= 4, "enough normal tower fixtures");
    return true;
}

} // namespace

int main()
{
    struct Criterion {
        const char *name;
        double limit_s;
        std::function<bool(Check &)> run;
    };
    const std::vector<Criterion> all = {
        {"1 fixture exactness", 1, c1},
        {"2 truncation biconditional suite", 30, c2},
        {"3 key truncation equals pair valuation", 30, c3},
        {"4 key predicate fixtures", 30, c4},
        {"5 factorial stream end-to-end", 5, c5},
        {"6 growing-degree tower", 30, c6},
        {"7 implicit constant field sandwich", 30, c7},
        {"8 pseudo-Cauchy suites", 30, c8},
        {"9 cross-oracle consistency", 30, c9},
    };
    int failed = 0;
    for (const auto &cr : all) {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(c);
        } catch (const std::exception &e) {
            ++c.failures;
            c.log << "exception: " << e.what() << " ";
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s > cr.limit_s) {
            ++c.failures;
            c.log << "over the " << cr.limit_s << " s budget ";
        }
        const bool pass = c.failures == 0;
        if (!pass) ++failed;
        std::printf("%s  criterion %-42s %8.3f s  %s\n", pass ? "PASS" : "FAIL", cr.name, s, c.log.str().c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
