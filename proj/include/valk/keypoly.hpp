#ifndef VALK_KEYPOLY_HPP
#define VALK_KEYPOLY_HPP

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "algclose.hpp"
#include "errors.hpp"
#include "pairdef.hpp"
#include "pcs.hpp"
#include "poly.hpp"
#include "values.hpp"

namespace valk {

/// The valuation v on K(X) against which δ, key polynomials and v_Q are formed.
template <class G>
class AmbientValuation
{
public:
    explicit AmbientValuation(PairOfDefinition<G> p) : v_(std::move(p)) {}
    explicit AmbientValuation(std::shared_ptr<const LimitValuation<G>> l) : v_(std::move(l)) {}

    bool by_pair() const { return std::holds_alternative<PairOfDefinition<G>>(v_); }
    const PairOfDefinition<G> &pair() const { return std::get<PairOfDefinition<G>>(v_); }
    const LimitValuation<G> &limit() const { return *std::get<std::shared_ptr<const LimitValuation<G>>>(v_); }

    OrderedValue value(const Poly<G> &f) const { return by_pair() ? pair_val(pair(), f) : limit().value(f); }
    OrderedValue value(const RationalFunction<G> &f) const
    {
        return by_pair() ? pair_val(pair(), f) : limit().value(f);
    }

    /// v(X - b).
    OrderedValue dist_x(const AlgElem<G> &b) const
    {
        if (!by_pair()) return limit().dist_x(b);
        const OrderedValue d = dist(pair().a, b);
        const OrderedValue &g = pair().gamma;
        return compare_mixed(d, g) < 0 ? (g.is_lex() ? d.as_lex() : d) : g;
    }

private:
    std::variant<PairOfDefinition<G>, std::shared_ptr<const LimitValuation<G>>> v_;
};

template <class G>
struct DeltaResult {
    OrderedValue delta;
    std::optional<AlgElem<G>> center; // the approximant the root distances were measured from
};

/// δ(f) = max v(X - z) over the roots z of f, from root distances.
template <class G>
DeltaResult<G> delta(const Poly<G> &f, const AmbientValuation<G> &v)
{
    if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "delta of the zero polynomial");
    if (f.degree() == 0) return {OrderedValue::neg_inf(), std::nullopt};
    if (v.by_pair()) {
        const auto &p = v.pair();
        const OrderedValue top = root_distances(f, p.a).front();
        const OrderedValue d = compare_mixed(top, p.gamma) < 0 ? (p.gamma.is_lex() ? top.as_lex() : top) : p.gamma;
        return {d, p.a};
    }
    const auto &s = v.limit().pcs();
    for (int n = 1; n <= s.max_stage(); ++n) {
        const OrderedValue top = root_distances(f, s.z(n)).front();
        if (top < s.gamma(n)) return {top, s.z(n)};
    }
    fail(ErrorCode::Unstabilized, "delta of " + f.str() + " not certified within " + std::to_string(s.max_stage()) + " stages");
}

/// max_b (v f - v ∂_b f) / b under the ambient valuation; equals δ(f).
template <class G>
OrderedValue derivative_delta(const Poly<G> &f, const AmbientValuation<G> &v)
{
    if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "delta of the zero polynomial");
    if (f.degree() == 0) return OrderedValue::neg_inf();
    const OrderedValue vf = v.value(f);
    std::optional<OrderedValue> num;
    long den = 1;
    for (long b = 1; b <= f.degree(); ++b) {
        const auto d = hasse_deriv(f, static_cast<unsigned long>(b));
        if (d.is_zero()) continue;
        const OrderedValue diff = vf - v.value(d);
        // diff / b > num / den  <=>  diff·den > num·b
        if (!num || compare_mixed(diff.scaled(den), num->scaled(b)) > 0) {
            num = diff;
            den = b;
        }
    }
    return num->divided(den);
}

template <class G>
struct KeyCheck {
    bool key;
    OrderedValue delta;
    std::optional<Poly<G>> witness; // lower-degree f with δ(f) >= δ(Q)
    std::optional<AlgElem<G>> witness_root;
};

/// Q is a key polynomial iff no z of degree < deg Q has v(X - z) >= δ(Q).
/// Candidates z come from the tower levels of the approximant that certifies δ(Q).
template <class G>
KeyCheck<G> is_key_poly(const Poly<G> &q, const AmbientValuation<G> &v)
{
    if (!q.is_monic()) fail(ErrorCode::NonMonicKey, "key polynomial candidates must be monic");
    const auto dr = delta(q, v);
    if (q.degree() <= 1) return {true, dr.delta, std::nullopt, std::nullopt};
    AlgElem<G> center = *dr.center;
    if (!v.by_pair()) {
        // An approximant strictly closer to X than δ(Q).
        const auto &s = v.limit().pcs();
        int n = 1;
        while (!(compare_mixed(s.gamma(n), dr.delta) > 0)) {
            if (++n > s.max_stage()) fail(ErrorCode::Unstabilized, "no stage beyond delta");
        }
        center = s.z(n);
    }
    const auto &t = *center.tower;
    for (int j = 0; j <= center.level; ++j) {
        if (t.D(j) >= q.degree()) break;
        const auto ap = best_approximation(center, j, dr.delta);
        if (ap.reached) return {false, dr.delta, ap.b.minpoly(), ap.b};
    }
    return {true, dr.delta, std::nullopt, std::nullopt};
}

/// v_Q f = min v(f_i) + i·v(Q) over the Q-expansion of f.
template <class G>
OrderedValue vq(const Poly<G> &q, const Poly<G> &f, const AmbientValuation<G> &v)
{
    if (!q.is_monic()) fail(ErrorCode::NonMonicKey, "truncation polynomial must be monic");
    if (f.is_zero()) return OrderedValue::pos_inf();
    const OrderedValue vQ = v.value(q);
    const auto parts = q_expansion(f, q);
    std::optional<OrderedValue> best;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].is_zero()) continue;
        const OrderedValue t = v.value(parts[i]) + vQ.scaled(static_cast<long>(i));
        if (!best || t < *best) best = t;
    }
    return *best;
}

template <class G>
OrderedValue vq(const Poly<G> &q, const RationalFunction<G> &f, const AmbientValuation<G> &v)
{
    if (f.num.is_zero() || f.den.is_zero()) fail(ErrorCode::ZeroElement, "zero numerator or denominator");
    return vq(q, f.num, v) - vq(q, f.den, v);
}

enum class TruncationCase { StrictlyBelow, Equal };

inline const char *truncation_case_name(TruncationCase c)
{
    return c == TruncationCase::StrictlyBelow ? "StrictlyBelow" : "Equal";
}

struct TruncationComparison {
    TruncationCase kind;
    OrderedValue gamma, vf, vpair, delta;
};

/// Compares v f with v_{a,γ} f for γ = v(X - a), and cross-checks the verdict
/// against δ(f) > γ.
template <class G>
TruncationComparison truncation_compare(const Poly<G> &f, const AlgElem<G> &a, const AmbientValuation<G> &v)
{
    const OrderedValue gamma = v.dist_x(a);
    const OrderedValue vf = v.value(f);
    const OrderedValue vp = pair_val(PairOfDefinition<G>(a, gamma), f);
    const int c = compare_mixed(vf, vp) < 0 ? -1 : compare_mixed(vf, vp) > 0 ? 1 : 0;
    if (c < 0) fail(ErrorCode::Inconsistent, "pair value exceeds the ambient value");
    const OrderedValue d = f.is_zero() ? OrderedValue::pos_inf() : delta(f, v).delta;
    if ((c > 0) != (compare_mixed(d, gamma) > 0))
        fail(ErrorCode::Inconsistent, "truncation verdict disagrees with delta");
    return {c > 0 ? TruncationCase::StrictlyBelow : TruncationCase::Equal, gamma, vf, vp, d};
}

} // namespace valk

#endif
