#ifndef VALK_RAMICF_HPP
#define VALK_RAMICF_HPP

#include <vector>

#include "algclose.hpp"
#include "errors.hpp"
#include "pairdef.hpp"
#include "pcslimit.hpp"

namespace valk {

struct RamData {
    long e, f_res, e_tame;
    bool wild;
};

template <class G>
RamData local_invariants(const AlgElem<G> &a)
{
    const auto inv = ext_invariants(a);
    const long p = a.ground().residue_characteristic();
    long tame = inv.e;
    if (p > 1)
        while (tame % p == 0) tame /= p;
    return {inv.e, inv.f, tame, tame != inv.e};
}

namespace detail {

/// An element generating tower level m over K.
template <class G>
AlgElem<G> level_generator(const std::shared_ptr<const Tower<G>> &t, int m)
{
    if (m == 0) return make_exact(t, 0, t->zero(0));
    AlgElem<G> g = make_exact(t, m, t->gen(m));
    for (long c = 1; g.degree() != t->D(m); ++c) {
        if (c > 64) fail(ErrorCode::UnsupportedTower, "no primitive element found for level " + std::to_string(m));
        auto x = t->gen(m);
        for (int k = m - 1; k >= 1; --k)
            x = t->add(m, x, t->mul(m, t->from_integer(m, c), t->embed(t->gen(k), k, m)));
        g = make_exact(t, m, x);
    }
    return g;
}

} // namespace detail

/// b with K(b) = K(a) ∩ K^r, for towers whose tame and unramified steps come
/// before all wild steps.
template <class G>
AlgElem<G> tame_part(const AlgElem<G> &a)
{
    if (!a.exact()) fail(ErrorCode::UnsupportedTower, "tame part of an approximate element");
    const auto [l, x] = a.tower->least_level(a.level, a.center);
    if (a.tower->D(l) != a.degree()) fail(ErrorCode::UnsupportedTower, "element does not generate a tower level");
    int m = 0;
    bool wild_seen = false;
    for (int k = 1; k <= l; ++k) {
        switch (a.tower->step(k).kind) {
            case StepKind::Mixed: fail(ErrorCode::UnsupportedTower, "tower step mixes ramification and residue extension");
            case StepKind::WildRadical: wild_seen = true; break;
            default:
                if (wild_seen) fail(ErrorCode::UnsupportedTower, "tame step above a wild step");
                m = k;
        }
    }
    if (m == l) return a;
    return detail::level_generator(a.tower, m);
}

template <class G>
struct SandwichReport {
    std::vector<AlgElem<G>> lower, upper;
    std::vector<RamData> ram;
    bool collapsed;
};

template <class G>
SandwichReport<G> icf_sandwich(const std::vector<StageData<G>> &stages)
{
    SandwichReport<G> r{{}, {}, {}, true};
    for (const auto &s : stages) {
        const AlgElem<G> b = tame_part(s.a);
        r.collapsed = r.collapsed && b.degree() == s.a.degree();
        r.lower.push_back(b);
        r.upper.push_back(s.a);
        r.ram.push_back(local_invariants(s.a));
    }
    return r;
}

/// A primitive element of K(b, a): a + c·b for the first c reaching the
/// largest degree among c = 0..bound.
template <class G>
AlgElem<G> composite_generator(const AlgElem<G> &a, const AlgElem<G> &b)
{
    const long bound = a.degree() * b.degree();
    AlgElem<G> best = a;
    for (long c = 1; c <= bound + 1; ++c) {
        const auto cand = alg_add(a, alg_mul(from_ground(a.ground(), a.ground().from_integer(Integer(c))), b));
        if (cand.degree() > best.degree()) best = cand;
        if (best.degree() == a.degree() * b.degree()) break;
    }
    return best;
}

} // namespace valk

#endif
