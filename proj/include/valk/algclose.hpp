#ifndef VALK_ALGCLOSE_HPP
#define VALK_ALGCLOSE_HPP

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "newton.hpp"
#include "poly.hpp"
#include "tower.hpp"
#include "values.hpp"

namespace valk {

/// Largest precision any automatic refinement may reach; VALK_PRECISION_CAP overrides.
inline Rational precision_cap()
{
    if (const char *s = std::getenv("VALK_PRECISION_CAP")) {
        const Rational r = parse_rational(s);
        if (r <= 0) fail(ErrorCode::InvalidInput, "VALK_PRECISION_CAP must be positive");
        return r;
    }
    return 1024;
}

/// An element of the algebraic closure of the completion of K. When precision
/// is PosInf the center is the element itself; otherwise the element is the
/// unique root z of minpoly with v(z - center) >= precision.
template <class G>
class AlgElem
{
public:
    using TowerT = Tower<G>;

    AlgElem(std::shared_ptr<const TowerT> t, int lvl, TowerElem<G> c, std::optional<Poly<G>> m = std::nullopt,
            OrderedValue prec = OrderedValue::pos_inf())
        : tower(std::move(t)), level(lvl), center(std::move(c)), precision(std::move(prec)),
          cache_(std::make_shared<Cache>())
    {
        if (!precision.is_pos_inf() && !m) fail(ErrorCode::InvalidInput, "approximate element needs its minimal polynomial");
        if (m) {
            if (!m->is_monic()) fail(ErrorCode::InvalidInput, "minimal polynomial must be monic");
            std::call_once(cache_->once, [&] { cache_->value = std::move(m); });
        }
    }

    std::shared_ptr<const TowerT> tower;
    int level = 0;
    TowerElem<G> center;
    OrderedValue precision;

    bool exact() const { return precision.is_pos_inf(); }
    const G &ground() const { return tower->ground(); }

    /// Minimal polynomial over K, computed once on first use.
    const Poly<G> &minpoly() const
    {
        std::call_once(cache_->once, [&] { cache_->value = tower->minpoly_over_ground(level, center); });
        return *cache_->value;
    }
    long degree() const { return minpoly().degree(); }

    std::string str() const
    {
        std::string s = tower->str(level, center);
        if (!exact()) s += " +O(" + precision.str() + ")";
        return s;
    }

private:
    struct Cache {
        std::once_flag once;
        std::optional<Poly<G>> value;
    };
    std::shared_ptr<Cache> cache_;
};

template <class G>
AlgElem<G> make_exact(std::shared_ptr<const Tower<G>> t, int level, TowerElem<G> x)
{
    return AlgElem<G>(std::move(t), level, std::move(x));
}

template <class G>
AlgElem<G> from_ground(const G &ground, const typename G::Elem &c)
{
    auto t = Tower<G>::create(ground);
    return make_exact(t, 0, t->from_base(c));
}

/// Same element, re-expressed on level `to` of a tower that extends its own.
template <class G>
AlgElem<G> lift_to(const AlgElem<G> &a, std::shared_ptr<const Tower<G>> t, int to)
{
    if (to < a.level) fail(ErrorCode::ContextMismatch, "cannot lower an element's level");
    AlgElem<G> r = a;
    r.center = t->embed(a.center, a.level, to);
    r.tower = std::move(t);
    r.level = to;
    return r;
}

namespace detail {

template <class G>
bool same_steps(const Tower<G> &small, const Tower<G> &big)
{
    if (small.height() > big.height() || !(small.ground() == big.ground())) return false;
    for (int k = 1; k <= small.height(); ++k) {
        const auto &ms = small.step(k).minpoly, &mb = big.step(k).minpoly;
        if (ms.size() != mb.size()) return false;
        for (std::size_t i = 0; i < ms.size(); ++i)
            if (!big.equal(k - 1, ms[i], mb[i])) return false;
    }
    return true;
}

} // namespace detail

/// Both elements on one common level of one tower.
template <class G>
std::pair<AlgElem<G>, AlgElem<G>> common(const AlgElem<G> &a, const AlgElem<G> &b)
{
    const bool a_big = a.tower->height() >= b.tower->height();
    const auto &big = a_big ? a.tower : b.tower;
    const auto &small = a_big ? b.tower : a.tower;
    if (big != small && !detail::same_steps(*small, *big))
        fail(ErrorCode::ContextMismatch, "elements live in unrelated towers");
    const int level = std::max(a.level, b.level);
    return {lift_to(a, big, level), lift_to(b, big, level)};
}

template <class G>
Poly<TowerRing<G>> lift_poly(const Tower<G> &t, int level, const Poly<G> &f)
{
    std::vector<TowerElem<G>> c;
    for (const auto &x : f.coeffs()) c.push_back(t.from_base(x, level));
    return Poly<TowerRing<G>>(t.ring(level), std::move(c));
}

template <class G>
NewtonPolygon shifted_polygon(const Tower<G> &t, int level, const Poly<TowerRing<G>> &g, const TowerElem<G> &x)
{
    std::vector<OrderedValue> vals;
    for (const auto &c : taylor_shift(g, x)) vals.push_back(t.val(level, c));
    return newton_polygon(vals);
}

/// Newton iteration against the minimal polynomial until precision >= target.
template <class G>
AlgElem<G> refine(const AlgElem<G> &a, const OrderedValue &target)
{
    if (!target.is_fin()) fail(ErrorCode::InvalidValue, "refinement target must be finite");
    if (a.exact() || a.precision >= target) return a;
    if (target.q() > precision_cap())
        fail(ErrorCode::NeedsRefinement, "target " + target.str() + " exceeds the precision cap " + to_string(precision_cap()));
    const auto &t = *a.tower;
    const int L = a.level;
    const auto g = lift_poly(t, L, a.minpoly());
    const auto dg = g.derivative();
    AlgElem<G> r = a;
    while (r.precision < target) {
        const auto gx = g.eval(r.center);
        if (t.is_zero(L, gx)) {
            r.precision = OrderedValue::pos_inf();
            return r;
        }
        const auto step = t.mul(L, gx, t.inv(L, dg.eval(r.center)));
        if (t.val(L, step) < r.precision) fail(ErrorCode::BadCertificate, "Newton step leaves the isolating disk");
        const auto x = t.sub(L, r.center, step);
        const auto np = shifted_polygon(t, L, g, x);
        if (np.zero_roots > 0) {
            r.center = x;
            r.precision = OrderedValue::pos_inf();
            return r;
        }
        const auto &top = np.segments.front();
        const OrderedValue w = OrderedValue::fin(top.root_valuation());
        if (top.length != 1 || w <= r.precision) fail(ErrorCode::BadCertificate, "Newton iteration does not converge");
        r.center = x;
        r.precision = w;
    }
    return r;
}

namespace detail {

inline OrderedValue next_target(const OrderedValue &p)
{
    const Rational q = p.q();
    const OrderedValue t = OrderedValue::fin(q <= 0 ? Rational(1) : q * 2);
    if (t.q() > precision_cap()) fail(ErrorCode::NeedsRefinement, "precision cap " + to_string(precision_cap()) + " reached");
    return t;
}

} // namespace detail

/// v(a - b), refining approximations as needed.
template <class G>
OrderedValue dist(const AlgElem<G> &a0, const AlgElem<G> &b0)
{
    auto [a, b] = common(a0, b0);
    const auto &t = *a.tower;
    for (;;) {
        const OrderedValue d = t.val(a.level, t.sub(a.level, a.center, b.center));
        if (a.exact() && b.exact()) return d;
        const OrderedValue p = min(a.precision, b.precision);
        if (d < p) return d;
        if (a.minpoly() == b.minpoly()) return OrderedValue::pos_inf();
        if (!a.exact()) a = refine(a, detail::next_target(a.precision));
        if (!b.exact()) b = refine(b, detail::next_target(b.precision));
    }
}

template <class G>
OrderedValue elem_val(const AlgElem<G> &a)
{
    return dist(a, make_exact(a.tower, a.level, a.tower->zero(a.level)));
}

template <class G>
AlgElem<G> alg_add(const AlgElem<G> &a0, const AlgElem<G> &b0)
{
    auto [a, b] = common(a0, b0);
    if (!a.exact() || !b.exact()) fail(ErrorCode::NeedsRefinement, "arithmetic on approximate elements");
    return make_exact(a.tower, a.level, a.tower->add(a.level, a.center, b.center));
}

template <class G>
AlgElem<G> alg_sub(const AlgElem<G> &a0, const AlgElem<G> &b0)
{
    auto [a, b] = common(a0, b0);
    if (!a.exact() || !b.exact()) fail(ErrorCode::NeedsRefinement, "arithmetic on approximate elements");
    return make_exact(a.tower, a.level, a.tower->sub(a.level, a.center, b.center));
}

template <class G>
AlgElem<G> alg_mul(const AlgElem<G> &a0, const AlgElem<G> &b0)
{
    auto [a, b] = common(a0, b0);
    if (!a.exact() || !b.exact()) fail(ErrorCode::NeedsRefinement, "arithmetic on approximate elements");
    return make_exact(a.tower, a.level, a.tower->mul(a.level, a.center, b.center));
}

/// Roots of g in the completion of level L, each isolated by (center, exact
/// distance to the root). Throws UnsupportedTower when g does not split there.
template <class G>
std::vector<std::pair<TowerElem<G>, OrderedValue>> split_roots(const Tower<G> &t, int L, const Poly<TowerRing<G>> &g)
{
    using Elem = TowerElem<G>;
    struct Disk {
        Elem x;
        std::optional<Rational> t; // roots with v(y - x) > t
    };
    std::vector<std::pair<Elem, OrderedValue>> out;
    std::vector<Disk> work{{t.zero(L), std::nullopt}};
    const long E = t.E(L);
    while (!work.empty()) {
        Disk disk = std::move(work.back());
        work.pop_back();
        const auto c = taylor_shift(g, disk.x);
        std::vector<OrderedValue> vals;
        for (const auto &ci : c) vals.push_back(t.val(L, ci));
        const NewtonPolygon np = newton_polygon(vals);
        if (np.zero_roots > 1) fail(ErrorCode::UnsupportedTower, "repeated root");
        if (np.zero_roots == 1) out.emplace_back(disk.x, OrderedValue::pos_inf());
        for (const auto &seg : np.segments) {
            const Rational s = seg.root_valuation();
            if (disk.t && s <= *disk.t) continue;
            if (Rational(s * E).get_den() != 1) fail(ErrorCode::UnsupportedTower, "root valuation outside the value group of the level");
            const Elem rho = t.of_value(L, s);
            Rational mu;
            bool first = true;
            for (std::size_t i = 0; i < vals.size(); ++i) {
                if (vals[i].is_pos_inf()) continue;
                const Rational m = vals[i].q() + s * static_cast<long>(i);
                if (first || m < mu) mu = m;
                first = false;
            }
            std::vector<Elem> cands;
            if (t.F(L) == 1) {
                const Elem scale = t.of_value(L, -mu);
                std::vector<typename Tower<G>::ResElem> rc;
                Elem rp = t.one(L);
                for (std::size_t i = 0; i < c.size(); ++i) {
                    rc.push_back(t.residue(L, t.mul(L, t.mul(L, c[i], rp), scale)));
                    rp = t.mul(L, rp, rho);
                }
                const auto &R = t.ground().residue_field();
                for (const auto &r : roots(Poly<typename Tower<G>::ResField>(R, rc)))
                    if (!R.is_zero(r)) cands.push_back(t.lift(L, r));
            } else {
                const Poly<TowerRing<G>> cp(t.ring(L), c);
                for (const auto &r : t.residue_reps(L)) {
                    if (t.is_zero(L, r)) continue;
                    if (t.val(L, cp.eval(t.mul(L, rho, r))) > OrderedValue::fin(mu)) cands.push_back(r);
                }
            }
            long found = 0;
            for (const auto &r : cands) {
                const Elem x = t.add(L, disk.x, t.mul(L, rho, r));
                const auto np2 = shifted_polygon(t, L, g, x);
                const long n = np2.zero_roots + np2.count_above(s, false);
                if (n == 0) continue;
                found += n;
                if (n == 1) {
                    if (np2.zero_roots == 1)
                        out.emplace_back(x, OrderedValue::pos_inf());
                    else
                        out.emplace_back(x, OrderedValue::fin(np2.segments.front().root_valuation()));
                } else {
                    work.push_back({x, s});
                }
            }
            if (found != seg.length) fail(ErrorCode::UnsupportedTower, "polynomial does not split over the level");
        }
    }
    return out;
}

/// All K-conjugates of a, found in the completion of a's level; a itself
/// is returned unchanged at its position.
template <class G>
std::vector<AlgElem<G>> conjugates(const AlgElem<G> &a)
{
    if (a.degree() == 1) return {a};
    const auto &t = *a.tower;
    const auto roots = split_roots(t, a.level, lift_poly(t, a.level, a.minpoly()));
    std::vector<AlgElem<G>> out;
    bool seen = false;
    for (const auto &[x, w] : roots) {
        AlgElem<G> c(a.tower, a.level, x, a.minpoly(), w);
        if (!seen && dist(a, c).is_pos_inf()) {
            out.push_back(a);
            seen = true;
        } else {
            out.push_back(std::move(c));
        }
    }
    if (!seen) fail(ErrorCode::Inconsistent, "element not found among the roots of its minimal polynomial");
    return out;
}

/// Multiset {v(z - a) : f(z) = 0} in K̄, with multiplicity, largest first.
template <class G>
std::vector<OrderedValue> root_distances(const Poly<G> &f, const AlgElem<G> &a0)
{
    if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "root distances of the zero polynomial");
    std::vector<OrderedValue> out;
    Poly<G> h = f;
    AlgElem<G> a = a0;
    if (!a.exact()) {
        for (;;) {
            auto [q, r] = divmod(h, a.minpoly());
            if (!r.is_zero()) break;
            h = q;
            out.push_back(OrderedValue::pos_inf());
        }
    }
    if (h.degree() < 1) return out;
    const auto &t = *a.tower;
    for (;;) {
        const auto np = shifted_polygon(t, a.level, lift_poly(t, a.level, h), a.center);
        const auto rv = np.root_valuations();
        if (a.exact() || rv.front() < a.precision) {
            out.insert(out.end(), rv.begin(), rv.end());
            std::sort(out.begin(), out.end(), [](const auto &x, const auto &y) { return y < x; });
            return out;
        }
        a = refine(a, detail::next_target(a.precision));
    }
}

} // namespace valk

#endif
