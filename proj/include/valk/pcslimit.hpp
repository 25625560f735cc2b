#ifndef VALK_PCSLIMIT_HPP
#define VALK_PCSLIMIT_HPP

#include <memory>
#include <optional>
#include <vector>

#include "algclose.hpp"
#include "errors.hpp"
#include "keypoly.hpp"
#include "pairdef.hpp"
#include "pcs.hpp"
#include "values.hpp"

namespace valk {

template <class G>
struct StageData {
    AlgElem<G> a;
    OrderedValue gamma; // v(X - a)
    Poly<G> q;          // minimal polynomial of a
    ExtInvariants inv;
    int mu;             // sequence index of the approximant d
    AlgElem<G> d;
    OrderedValue delta; // v(X - d)
    bool dominance_by_sum; // conjugate dominance certified without computing conjugates
};

namespace detail {

/// v(X - a) >= v(X - σa) for all conjugates σa, decided from v(Q) and the
/// root distances of Q around a.
template <class G>
bool dominance_by_sum(const LimitValuation<G> &L, const AlgElem<G> &a, const OrderedValue &gamma)
{
    const auto dists = root_distances(a.minpoly(), a);
    Rational rest = L.value(a.minpoly()).q() - gamma.q();
    long close = 0;
    for (std::size_t i = 1; i < dists.size(); ++i) {
        if (dists[i] < gamma)
            rest -= dists[i].q();
        else
            ++close;
    }
    return rest == gamma.q() * close;
}

} // namespace detail

/// Stages 1..n: approximant d with v(X - d) above the previous gamma, a
/// minimal pair for v_{d,δ}, then the conjugate nearest to X.
template <class G>
std::vector<StageData<G>> construct_stages(const LimitValuation<G> &L, int n)
{
    const auto &s = L.pcs();
    std::vector<StageData<G>> out;
    OrderedValue prev = OrderedValue::neg_inf();
    int mu = 1;
    for (int nu = 1; nu <= n; ++nu) {
        while (!(prev < s.gamma(mu)))
            if (++mu > s.max_stage()) fail(ErrorCode::Unstabilized, "sequence too short for stage " + std::to_string(nu));
        const AlgElem<G> d = s.z(mu);
        const OrderedValue delta = s.gamma(mu);
        AlgElem<G> a = d;
        for (;;) {
            const auto r = is_minimal(PairOfDefinition<G>(a, delta));
            if (r.minimal) break;
            a = *r.witness;
        }
        OrderedValue gamma = L.dist_x(a);
        bool by_sum = detail::dominance_by_sum(L, a, gamma);
        if (!by_sum) {
            for (const auto &c : conjugates(a)) {
                const OrderedValue g = L.dist_x(c);
                if (gamma < g) {
                    gamma = g;
                    a = c;
                }
            }
        }
        if (!(prev < gamma)) fail(ErrorCode::Inconsistent, "stage values are not increasing");
        out.push_back({a, gamma, a.minpoly(), ext_invariants(a), mu, d, delta, by_sum});
        prev = gamma;
    }
    return out;
}

template <class G>
struct CompleteSeqReport {
    int stage;
    OrderedValue value;
    std::vector<OrderedValue> deltas; // δ(Q_ν) for ν = 1..max_stage
    bool keys;                        // every Q_ν is a key polynomial
    bool increasing;                  // δ(Q_ν) strictly increasing
};

/// Least ν with v f = v_{Q_ν} f, with the key-polynomial checks on Q_1..Q_max.
template <class G>
CompleteSeqReport<G> complete_seq_check(const std::shared_ptr<const LimitValuation<G>> &L, const Poly<G> &f, int max_stage)
{
    if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "complete sequence check on the zero polynomial");
    const AmbientValuation<G> v(L);
    const auto stages = construct_stages(*L, max_stage);
    const OrderedValue target = L->value(f);
    CompleteSeqReport<G> rep{0, target, {}, true, true};
    for (const auto &st : stages) {
        const auto k = is_key_poly(st.q, v);
        rep.keys = rep.keys && k.key;
        if (!rep.deltas.empty() && !(rep.deltas.back() < k.delta)) rep.increasing = false;
        rep.deltas.push_back(k.delta);
    }
    for (int nu = 1; nu <= max_stage; ++nu) {
        if (vq(stages[static_cast<std::size_t>(nu - 1)].q, f, v) == target) {
            rep.stage = nu;
            return rep;
        }
    }
    fail(ErrorCode::Unstabilized, "no stage up to " + std::to_string(max_stage) + " reaches v f");
}

struct InvariantChain {
    std::vector<ExtInvariants> stages;
    bool divisible; // e_ν | e_{ν+1} and f_ν | f_{ν+1}
};

template <class G>
InvariantChain invariants_union_stage(const std::vector<StageData<G>> &stages)
{
    InvariantChain c{{}, true};
    for (const auto &s : stages) {
        if (!c.stages.empty() && (s.inv.e % c.stages.back().e != 0 || s.inv.f % c.stages.back().f != 0))
            c.divisible = false;
        c.stages.push_back(s.inv);
    }
    return c;
}

} // namespace valk

#endif
