#ifndef VALK_PAIRDEF_HPP
#define VALK_PAIRDEF_HPP

#include <optional>
#include <vector>

#include "algclose.hpp"
#include "errors.hpp"
#include "poly.hpp"
#include "values.hpp"

namespace valk {

template <class G>
struct PairOfDefinition {
    AlgElem<G> a;
    OrderedValue gamma;

    PairOfDefinition(AlgElem<G> a_, OrderedValue gamma_) : a(std::move(a_)), gamma(std::move(gamma_))
    {
        if (!gamma.is_finite()) fail(ErrorCode::InvalidValue, "pair of definition needs a finite gamma");
    }
};

/// f / g over K.
template <class G>
struct RationalFunction {
    Poly<G> num, den;
};

namespace detail {

/// A precision at which the center stands in for a under v_{a,gamma}.
inline OrderedValue precision_for(const OrderedValue &gamma)
{
    return OrderedValue::fin(gamma.is_lex() ? gamma.q() + 1 : gamma.q());
}

inline bool at_least(const OrderedValue &d, const OrderedValue &gamma) { return compare_mixed(d, gamma) >= 0; }

} // namespace detail

/// min_i v(c_i) + i·gamma over the expansion f = Σ c_i (X - a)^i.
template <class G>
OrderedValue pair_val(const PairOfDefinition<G> &p, const Poly<G> &f)
{
    if (f.is_zero()) return OrderedValue::pos_inf();
    AlgElem<G> a = p.a;
    if (!a.exact()) a = refine(a, detail::precision_for(p.gamma));
    const auto &t = *a.tower;
    const auto c = taylor_shift(lift_poly(t, a.level, f), a.center);
    std::optional<OrderedValue> best;
    for (std::size_t i = 0; i < c.size(); ++i) {
        OrderedValue v = t.val(a.level, c[i]);
        if (v.is_pos_inf()) continue;
        if (p.gamma.is_lex()) v = v.as_lex();
        v = v + p.gamma.scaled(static_cast<long>(i));
        if (!best || v < *best) best = v;
    }
    return *best;
}

template <class G>
OrderedValue pair_val(const PairOfDefinition<G> &p, const RationalFunction<G> &f)
{
    if (f.num.is_zero() || f.den.is_zero()) fail(ErrorCode::ZeroElement, "zero numerator or denominator");
    return pair_val(p, f.num) - pair_val(p, f.den);
}

/// Root formula: v(lc) + Σ_z min(gamma, v(z - a)).
template <class G>
OrderedValue root_pair_val(const PairOfDefinition<G> &p, const Poly<G> &f)
{
    if (f.is_zero()) return OrderedValue::pos_inf();
    OrderedValue v = f.ring().val(f.lead());
    if (p.gamma.is_lex()) v = v.as_lex();
    if (f.degree() == 0) return v;
    for (const auto &d : root_distances(f, p.a)) {
        const OrderedValue dd = p.gamma.is_lex() ? d.as_lex() : d;
        v = v + (compare_mixed(dd, p.gamma) < 0 ? dd : p.gamma);
    }
    return v;
}

/// (a1, gamma) and (a2, gamma) define the same valuation iff v(a1 - a2) >= gamma.
template <class G>
bool same_valuation(const PairOfDefinition<G> &p1, const PairOfDefinition<G> &p2)
{
    if (p1.gamma.kind() != p2.gamma.kind() || !(p1.gamma == p2.gamma))
        fail(ErrorCode::GammaMismatch, "pairs with different gamma: " + p1.gamma.str() + " vs " + p2.gamma.str());
    return detail::at_least(dist(p1.a, p2.a), p1.gamma);
}

template <class G>
struct Approximant {
    AlgElem<G> b;
    OrderedValue dist;
    int level;
    bool reached; // dist >= the requested bound
};

/// Greedy digit-by-digit approximation of a by elements of tower level j,
/// stopping once the distance reaches `bound` or cannot grow within level j.
template <class G>
Approximant<G> best_approximation(const AlgElem<G> &a0, int j, const OrderedValue &bound)
{
    const auto &t = *a0.tower;
    if (j > a0.level) fail(ErrorCode::InvalidInput, "approximation level above the element's level");
    const int L = a0.level;
    AlgElem<G> a = a0;
    TowerElem<G> b = t.zero(j);
    const int max_steps = 4096;
    for (int step = 0;; ++step) {
        const AlgElem<G> be = make_exact(a.tower, j, b);
        const OrderedValue s = dist(a, be);
        if (s.is_pos_inf() || detail::at_least(s, bound)) return {be, s, j, true};
        if (step >= max_steps) fail(ErrorCode::NeedsRefinement, "approximation step cap reached");
        if (Rational(s.q() * t.E(j)).get_den() != 1) return {be, s, j, false};
        if (!a.exact()) a = refine(a, OrderedValue::fin(s.q() + 1));
        const auto rho_j = t.of_value(j, s.q());
        const auto z = t.mul(L, t.sub(L, a.center, t.embed(b, j, L)), t.inv(L, t.embed(rho_j, j, L)));
        std::optional<TowerElem<G>> r;
        if (t.F(L) == 1) {
            r = t.lift(j, t.residue(L, z));
        } else {
            for (const auto &c : t.residue_reps(j))
                if (t.val(L, t.sub(L, z, t.embed(c, j, L))) > OrderedValue::fin(0)) {
                    r = c;
                    break;
                }
        }
        if (!r) return {be, s, j, false};
        b = t.add(j, b, t.mul(j, rho_j, *r));
    }
}

template <class G>
struct MinimalityResult {
    bool minimal;
    std::optional<AlgElem<G>> witness;
};

/// No element of lower degree lies within gamma of a. Candidates are taken
/// from the tower levels below a's own.
template <class G>
MinimalityResult<G> is_minimal(const PairOfDefinition<G> &p)
{
    const long d = p.a.degree();
    if (d == 1) return {true, std::nullopt};
    const auto &t = *p.a.tower;
    for (int j = 0; j <= p.a.level; ++j) {
        if (t.D(j) >= d) break;
        const auto ap = best_approximation(p.a, j, p.gamma);
        if (ap.reached) return {false, ap.b};
    }
    return {true, std::nullopt};
}

struct ExtInvariants {
    long e, f;
};

/// (vK(a) : vK, [K(a)v : Kv]).
template <class G>
ExtInvariants ext_invariants(const AlgElem<G> &a)
{
    if (!a.exact()) fail(ErrorCode::UnsupportedTower, "invariants of an approximate element");
    const auto [l, x] = a.tower->least_level(a.level, a.center);
    if (a.tower->D(l) != a.degree())
        fail(ErrorCode::UnsupportedTower, "element does not generate a tower level");
    return {a.tower->E(l), a.tower->F(l)};
}

enum class PairType { ValueTranscendental, ResidueTranscendental };

inline const char *pair_type_name(PairType t)
{
    return t == PairType::ValueTranscendental ? "ValueTranscendental" : "ResidueTranscendental";
}

template <class G>
PairType classify_pair(const PairOfDefinition<G> &p)
{
    return p.gamma.is_lex() && p.gamma.k() != 0 ? PairType::ValueTranscendental : PairType::ResidueTranscendental;
}

} // namespace valk

#endif
