#ifndef VALK_TOWER_HPP
#define VALK_TOWER_HPP

#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "ground.hpp"
#include "poly.hpp"
#include "values.hpp"

namespace valk {

template <class G>
class Tower;

/// Element of tower level k: a ground element at level 0, otherwise the d_k
/// coefficients of a polynomial in y_k over level k-1.
template <class G>
struct TowerElem {
    std::optional<typename G::Elem> base;
    std::vector<TowerElem> c;
};

/// Ring handle for one level of a tower; the tower must outlive it.
template <class G>
struct TowerRing {
    using Elem = TowerElem<G>;
    const Tower<G> *t = nullptr;
    int level = 0;

    Elem zero() const { return t->zero(level); }
    Elem one() const { return t->one(level); }
    Elem from_integer(const Integer &n) const { return t->from_integer(level, n); }
    Elem add(const Elem &a, const Elem &b) const { return t->add(level, a, b); }
    Elem sub(const Elem &a, const Elem &b) const { return t->sub(level, a, b); }
    Elem mul(const Elem &a, const Elem &b) const { return t->mul(level, a, b); }
    Elem neg(const Elem &a) const { return t->neg(level, a); }
    Elem inv(const Elem &a) const { return t->inv(level, a); }
    bool is_zero(const Elem &a) const { return t->is_zero(level, a); }
    bool equal(const Elem &a, const Elem &b) const { return t->equal(level, a, b); }
    std::string str(const Elem &a) const { return t->str(level, a); }
    long characteristic() const { return t->ground().characteristic(); }
    OrderedValue val(const Elem &a) const { return t->val(level, a); }
    friend bool operator==(const TowerRing &a, const TowerRing &b) { return a.t == b.t && a.level == b.level; }
};

enum class StepKind { Unramified, Tame, WildRadical, Mixed };

inline const char *step_kind_name(StepKind k)
{
    switch (k) {
        case StepKind::Unramified: return "unramified";
        case StepKind::Tame: return "tame";
        case StepKind::WildRadical: return "wild";
        case StepKind::Mixed: return "mixed";
    }
    return "";
}

/// K = L_0 ⊂ L_1 ⊂ ... ⊂ L_n with L_k = L_{k-1}[y_k]/(m_k). Every m_k must be
/// irreducible over the completion of L_{k-1}, so each level carries a unique
/// extension of the valuation.
template <class G>
class Tower
{
public:
    using Base = typename G::Elem;
    using Elem = TowerElem<G>;
    using Ring = TowerRing<G>;
    using ResField = std::decay_t<decltype(std::declval<const G &>().residue_field())>;
    using ResElem = typename ResField::Elem;

    struct Step {
        std::vector<Elem> minpoly; // monic, coefficients at level k-1
        long d = 1, e = 1, f = 1;
        Rational slope; // valuation of y_k
        StepKind kind = StepKind::Unramified;
        long E = 1, F = 1, D = 1; // cumulative over K
        Elem pi;                  // uniformizer of level k
        Elem eta;                 // residue generator of the step when f > 1
    };

    Tower(const Tower &) = delete;
    Tower &operator=(const Tower &) = delete;

    static std::shared_ptr<const Tower> create(const G &ground, const std::vector<std::vector<Elem>> &minpolys = {})
    {
        std::shared_ptr<Tower> t(new Tower(ground));
        for (const auto &m : minpolys) t->push_step(m);
        return t;
    }

    /// A new tower with one more step on top of t.
    static std::shared_ptr<const Tower> extend(const Tower &t, const std::vector<Elem> &minpoly)
    {
        std::vector<std::vector<Elem>> ms;
        for (const auto &s : t.steps_) ms.push_back(s.minpoly);
        ms.push_back(minpoly);
        return create(t.ground_, ms);
    }

    const G &ground() const { return ground_; }
    int height() const { return static_cast<int>(steps_.size()); }
    const Step &step(int k) const
    {
        check_level(k);
        if (k < 1) fail(ErrorCode::InvalidInput, "level 0 has no step");
        return steps_[static_cast<std::size_t>(k - 1)];
    }
    long E(int k) const { return k == 0 ? 1 : step(k).E; }
    long F(int k) const { return k == 0 ? 1 : step(k).F; }
    long D(int k) const { return k == 0 ? 1 : step(k).D; }
    Ring ring(int k) const
    {
        check_level(k);
        return Ring{this, k};
    }
    Poly<Ring> minpoly(int k) const { return Poly<Ring>(ring(k - 1), step(k).minpoly); }

    // Ring arithmetic per level.

    Elem from_base(const Base &b) const { return Elem{b, {}}; }
    Elem zero(int k) const
    {
        if (k == 0) return from_base(ground_.zero());
        return Elem{std::nullopt, std::vector<Elem>(static_cast<std::size_t>(step(k).d), zero(k - 1))};
    }
    Elem embed(Elem x, int from, int to) const
    {
        for (int k = from + 1; k <= to; ++k) {
            Elem z = zero(k);
            z.c[0] = std::move(x);
            x = std::move(z);
        }
        return x;
    }
    Elem from_base(const Base &b, int k) const { return embed(from_base(b), 0, k); }
    Elem one(int k) const { return from_base(ground_.one(), k); }
    Elem from_integer(int k, const Integer &n) const { return from_base(ground_.from_integer(n), k); }

    /// The generator y_k as an element of level k.
    Elem gen(int k) const
    {
        const Step &s = step(k);
        Elem g = zero(k);
        if (s.d == 1)
            g.c[0] = neg(k - 1, s.minpoly[0]);
        else
            g.c[1] = one(k - 1);
        return g;
    }

    Elem add(int k, const Elem &a, const Elem &b) const
    {
        if (k == 0) return from_base(ground_.add(*a.base, *b.base));
        Elem r = a;
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = add(k - 1, a.c[i], b.c[i]);
        return r;
    }
    Elem neg(int k, const Elem &a) const
    {
        if (k == 0) return from_base(ground_.neg(*a.base));
        Elem r = a;
        for (auto &x : r.c) x = neg(k - 1, x);
        return r;
    }
    Elem sub(int k, const Elem &a, const Elem &b) const
    {
        if (k == 0) return from_base(ground_.sub(*a.base, *b.base));
        Elem r = a;
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = sub(k - 1, a.c[i], b.c[i]);
        return r;
    }
    Elem mul(int k, const Elem &a, const Elem &b) const
    {
        if (k == 0) return from_base(ground_.mul(*a.base, *b.base));
        const Step &s = step(k);
        const std::size_t d = static_cast<std::size_t>(s.d);
        std::vector<Elem> prod(2 * d - 1, zero(k - 1));
        for (std::size_t i = 0; i < d; ++i) {
            if (is_zero(k - 1, a.c[i])) continue;
            for (std::size_t j = 0; j < d; ++j) {
                if (is_zero(k - 1, b.c[j])) continue;
                prod[i + j] = add(k - 1, prod[i + j], mul(k - 1, a.c[i], b.c[j]));
            }
        }
        for (std::size_t i = 2 * d - 1; i-- > d;) {
            if (is_zero(k - 1, prod[i])) continue;
            const Elem t = prod[i];
            for (std::size_t j = 0; j < d; ++j)
                prod[i - d + j] = sub(k - 1, prod[i - d + j], mul(k - 1, t, s.minpoly[j]));
        }
        prod.resize(d);
        return Elem{std::nullopt, std::move(prod)};
    }
    Elem inv(int k, const Elem &a) const
    {
        if (is_zero(k, a)) fail(ErrorCode::ZeroElement, "inverse of zero");
        if (k == 0) return from_base(ground_.inv(*a.base));
        bool constant = true;
        for (std::size_t i = 1; i < a.c.size(); ++i) constant = constant && is_zero(k - 1, a.c[i]);
        if (constant) return embed(inv(k - 1, a.c[0]), k - 1, k);
        const auto eg = ext_gcd(Poly<Ring>(ring(k - 1), a.c), minpoly(k));
        if (eg.g.degree() != 0) fail(ErrorCode::Inconsistent, "tower step is reducible");
        Elem r = zero(k);
        for (std::size_t i = 0; i < eg.s.coeffs().size(); ++i) r.c[i] = eg.s.coeffs()[i];
        return r;
    }
    Elem pow(int k, Elem a, long n) const
    {
        if (n < 0) {
            a = inv(k, a);
            n = -n;
        }
        Elem r = one(k);
        while (n > 0) {
            if (n & 1) r = mul(k, r, a);
            n >>= 1;
            if (n > 0) a = mul(k, a, a);
        }
        return r;
    }
    bool is_zero(int k, const Elem &a) const
    {
        if (k == 0) return ground_.is_zero(*a.base);
        for (const auto &x : a.c)
            if (!is_zero(k - 1, x)) return false;
        return true;
    }
    bool equal(int k, const Elem &a, const Elem &b) const
    {
        if (k == 0) return ground_.equal(*a.base, *b.base);
        for (std::size_t i = 0; i < a.c.size(); ++i)
            if (!equal(k - 1, a.c[i], b.c[i])) return false;
        return true;
    }
    std::string str(int k, const Elem &a) const
    {
        if (k == 0) return ground_.str(*a.base);
        std::string s = "[";
        for (std::size_t i = 0; i < a.c.size(); ++i) s += (i ? "," : "") + str(k - 1, a.c[i]);
        return s + "]";
    }

    // Valuation data.

    /// Exact valuation, normalized so that the ground uniformizer has value 1.
    OrderedValue val(int k, const Elem &a) const
    {
        if (k == 0) return ground_.val(*a.base);
        const Step &s = step(k);
        // A unique minimal term decides the value.
        std::optional<Rational> best;
        bool tie = false;
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            const OrderedValue vi = val(k - 1, a.c[i]);
            if (vi.is_pos_inf()) continue;
            const Rational t = vi.q() + s.slope * static_cast<long>(i);
            if (!best || t < *best) {
                best = t;
                tie = false;
            } else if (t == *best) {
                tie = true;
            }
        }
        if (!best) return OrderedValue::pos_inf();
        if (!tie) return OrderedValue::fin(*best);
        const auto n = resultant(minpoly(k), Poly<Ring>(ring(k - 1), a.c));
        return OrderedValue::fin(val(k - 1, n).q() / s.d);
    }

    Elem uniformizer(int k) const
    {
        if (k == 0) return from_base(ground_.uniformizer());
        return step(k).pi;
    }

    /// π_k^(v·E_k); v must lie in the value group of level k.
    Elem of_value(int k, const Rational &v) const
    {
        const Rational n = v * E(k);
        if (n.get_den() != 1 || !n.get_num().fits_slong_p())
            fail(ErrorCode::InvalidValue, to_string(v) + " is not in the value group of level " + std::to_string(k));
        return pow(k, uniformizer(k), n.get_num().get_si());
    }

    /// Residue map; defined on levels with trivial residue extension.
    ResElem residue(int k, const Elem &a) const
    {
        if (k == 0) return ground_.residue(*a.base);
        if (F(k) != 1) fail(ErrorCode::UnsupportedTower, "residue map on a level with residue extension");
        const OrderedValue v = val(k, a);
        if (v < OrderedValue::fin(0)) fail(ErrorCode::NegativeValue, "residue of an element of negative value");
        if (v > OrderedValue::fin(0)) return ground_.residue_field().zero();
        return residue(k - 1, a.c[0]);
    }
    Elem lift(int k, const ResElem &r) const { return from_base(ground_.lift(r), k); }

    /// Representatives of the residue field of level k (finite residue fields only).
    std::vector<Elem> residue_reps(int k) const
    {
        const auto q = ground_.residue_field_size();
        if (!q) fail(ErrorCode::UnsupportedTower, "residue representatives need a finite residue field");
        Integer total;
        mpz_ui_pow_ui(total.get_mpz_t(), *q, static_cast<unsigned long>(F(k)));
        if (total > 16384) fail(ErrorCode::UnsupportedTower, "residue field of level too large to enumerate");
        int j = k;
        while (j > 0 && step(j).f == 1) --j;
        std::vector<Elem> base;
        for (std::uint64_t r = 0; r < *q; ++r) base.push_back(lift(j == 0 ? 0 : j - 1, ground_.residue_field().from_integer(Integer(static_cast<unsigned long>(r)))));
        std::vector<Elem> reps;
        if (j == 0) {
            reps = base;
        } else {
            const Step &s = step(j);
            reps.push_back(zero(j));
            for (long i = 0; i < s.f; ++i) {
                const Elem eta_i = pow(j, s.eta, i);
                std::vector<Elem> next;
                for (const auto &acc : reps)
                    for (const auto &r : base) next.push_back(add(j, acc, mul(j, embed(r, j - 1, j), eta_i)));
                reps = std::move(next);
            }
        }
        for (auto &r : reps) r = embed(r, j, k);
        return reps;
    }

    /// Least level l <= k containing a, and a as an element of level l.
    std::pair<int, Elem> least_level(int k, Elem a) const
    {
        while (k > 0) {
            for (std::size_t i = 1; i < a.c.size(); ++i)
                if (!is_zero(k - 1, a.c[i])) return {k, std::move(a)};
            Elem c0 = std::move(a.c[0]);
            a = std::move(c0);
            --k;
        }
        return {0, std::move(a)};
    }

    /// Coordinates of a in the monomial basis of level k over K.
    std::vector<Base> flatten(int k, const Elem &a) const
    {
        if (k == 0) return {*a.base};
        std::vector<Base> out;
        for (const auto &x : a.c) {
            auto v = flatten(k - 1, x);
            out.insert(out.end(), v.begin(), v.end());
        }
        return out;
    }

    /// Minimal polynomial of a over K, by linear algebra on powers of a.
    Poly<G> minpoly_over_ground(int k, const Elem &a) const
    {
        const long n = D(k);
        std::vector<std::vector<Base>> rows, combos;
        std::vector<std::size_t> pivots;
        Elem p = one(k);
        for (long i = 0; i <= n; ++i) {
            std::vector<Base> vec = flatten(k, p);
            std::vector<Base> combo(static_cast<std::size_t>(i + 1), ground_.zero());
            combo[static_cast<std::size_t>(i)] = ground_.one();
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const Base &x = vec[pivots[r]];
                if (ground_.is_zero(x)) continue;
                const Base factor = ground_.mul(x, ground_.inv(rows[r][pivots[r]]));
                for (std::size_t j = 0; j < vec.size(); ++j)
                    vec[j] = ground_.sub(vec[j], ground_.mul(factor, rows[r][j]));
                for (std::size_t j = 0; j < combos[r].size(); ++j)
                    combo[j] = ground_.sub(combo[j], ground_.mul(factor, combos[r][j]));
            }
            std::size_t piv = vec.size();
            for (std::size_t j = 0; j < vec.size(); ++j)
                if (!ground_.is_zero(vec[j])) {
                    piv = j;
                    break;
                }
            if (piv == vec.size()) return Poly<G>(ground_, std::move(combo));
            rows.push_back(std::move(vec));
            combos.push_back(std::move(combo));
            pivots.push_back(piv);
            p = mul(k, p, a);
        }
        fail(ErrorCode::Inconsistent, "no linear dependence among powers");
    }

    /// Inverse of flatten.
    Elem unflatten(int k, const std::vector<Base> &v, std::size_t offset = 0) const
    {
        if (k == 0) return from_base(v[offset]);
        Elem r = zero(k);
        const std::size_t block = static_cast<std::size_t>(D(k - 1));
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = unflatten(k - 1, v, offset + i * block);
        return r;
    }

private:
    explicit Tower(G ground) : ground_(std::move(ground)) {}

    void check_level(int k) const
    {
        if (k < 0 || k > height()) fail(ErrorCode::InvalidInput, "tower level " + std::to_string(k) + " out of range");
    }

    void push_step(const std::vector<Elem> &m)
    {
        const int b = height(), k = b + 1;
        if (m.size() < 2) fail(ErrorCode::InvalidInput, "tower step needs degree >= 1");
        const long d = static_cast<long>(m.size()) - 1;
        if (!equal(b, m.back(), one(b))) fail(ErrorCode::InvalidInput, "tower step must be monic");
        const OrderedValue v0 = val(b, m[0]);
        if (v0.is_pos_inf()) fail(ErrorCode::InvalidInput, "tower step has a zero constant term");
        const Rational s = v0.q() / d;
        for (long i = 1; i < d; ++i) {
            const OrderedValue vi = val(b, m[static_cast<std::size_t>(i)]);
            if (!vi.is_pos_inf() && vi.q() < s * (d - i))
                fail(ErrorCode::UnsupportedTower, "tower step splits over the completion (several Newton slopes)");
        }
        const Rational sE = s * E(b);
        const long e = sE.get_den().get_si(), f = d / e;
        const long p = ground_.residue_characteristic();
        if (ground_.characteristic() > 0 && e % ground_.characteristic() == 0)
            fail(ErrorCode::UnsupportedTower, "wild ramification over a function field");

        Step st;
        st.minpoly = m;
        st.d = d;
        st.e = e;
        st.f = f;
        st.slope = s;
        st.E = E(b) * e;
        st.F = F(b) * f;
        st.D = D(b) * d;
        if (e == 1)
            st.kind = StepKind::Unramified;
        else if (f > 1)
            st.kind = StepKind::Mixed;
        else if (p == 0 || e % p != 0)
            st.kind = StepKind::Tame;
        else {
            long r = e;
            while (r % p == 0) r /= p;
            st.kind = r == 1 ? StepKind::WildRadical : StepKind::Mixed;
        }

        Elem rho;
        if (f > 1) {
            if (F(b) != 1) fail(ErrorCode::UnsupportedTower, "residue extension on top of a residue extension");
            rho = of_value(b, s * e);
            std::vector<ResElem> rc;
            for (long j = 0; j <= f; ++j) {
                const Elem q = mul(b, m[static_cast<std::size_t>(j * e)], pow(b, rho, -(f - j)));
                rc.push_back(residue(b, q));
            }
            const Poly<ResField> res(ground_.residue_field(), rc);
            if (!is_irreducible(res)) fail(ErrorCode::UnsupportedTower, "residual polynomial of tower step is reducible");
        }

        steps_.push_back(st);
        Step &top = steps_.back();
        const Elem y = gen(k);
        if (e == 1) {
            top.pi = embed(uniformizer(b), b, k);
        } else {
            Integer g, a, c;
            const Integer h = sE.get_num();
            mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t(), h.get_mpz_t(), Integer(e).get_mpz_t());
            top.pi = mul(k, pow(k, y, a.get_si()), embed(pow(b, uniformizer(b), c.get_si()), b, k));
        }
        if (f > 1) top.eta = mul(k, pow(k, y, e), embed(inv(b, rho), b, k));
    }

    G ground_;
    std::vector<Step> steps_;
};

} // namespace valk

#endif
