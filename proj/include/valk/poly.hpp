#ifndef VALK_POLY_HPP
#define VALK_POLY_HPP

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "values.hpp"

namespace valk {

// A coefficient ring R is a small copyable handle exposing
//   using Elem; zero(), one(), from_integer(Integer), add, sub, mul, neg,
//   inv (fields only), is_zero, equal, str, operator==, characteristic().
// Element values never carry their ring; Poly<R> carries it instead.

template <class R>
class Poly
{
public:
    using Ring = R;
    using Elem = typename R::Elem;

    explicit Poly(R ring) : ring_(std::move(ring)) {}
    Poly(R ring, std::vector<Elem> coeffs) : ring_(std::move(ring)), c_(std::move(coeffs)) { trim(); }

    static Poly constant(const R &ring, const Elem &c) { return Poly(ring, {c}); }
    static Poly x(const R &ring) { return Poly(ring, {ring.zero(), ring.one()}); }
    /// X - a
    static Poly linear_root(const R &ring, const Elem &a) { return Poly(ring, {ring.neg(a), ring.one()}); }
    static Poly monomial(const R &ring, const Elem &c, std::size_t n)
    {
        std::vector<Elem> v(n + 1, ring.zero());
        v[n] = c;
        return Poly(ring, std::move(v));
    }

    const R &ring() const { return ring_; }
    const std::vector<Elem> &coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : ring_.zero(); }
    const Elem &lead() const
    {
        if (c_.empty()) fail(ErrorCode::ZeroPolynomial, "leading coefficient of zero polynomial");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && ring_.equal(c_.back(), ring_.one()); }

    /// Smallest i with a nonzero coefficient (order at X = 0).
    std::size_t ord() const
    {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!ring_.is_zero(c_[i])) return i;
        fail(ErrorCode::ZeroPolynomial, "order of zero polynomial");
    }

    Elem eval(const Elem &x) const
    {
        Elem acc = ring_.zero();
        for (std::size_t i = c_.size(); i-- > 0;) acc = ring_.add(ring_.mul(acc, x), c_[i]);
        return acc;
    }

    friend Poly operator+(const Poly &a, const Poly &b)
    {
        a.same_ring(b);
        std::vector<Elem> v(std::max(a.c_.size(), b.c_.size()), a.ring_.zero());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.ring_.add(a.coeff(i), b.coeff(i));
        return Poly(a.ring_, std::move(v));
    }

    Poly operator-() const
    {
        std::vector<Elem> v;
        v.reserve(c_.size());
        for (const auto &x : c_) v.push_back(ring_.neg(x));
        return Poly(ring_, std::move(v));
    }

    friend Poly operator-(const Poly &a, const Poly &b) { return a + (-b); }

    friend Poly operator*(const Poly &a, const Poly &b)
    {
        a.same_ring(b);
        if (a.is_zero() || b.is_zero()) return Poly(a.ring_);
        std::vector<Elem> v(a.c_.size() + b.c_.size() - 1, a.ring_.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.ring_.is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                v[i + j] = a.ring_.add(v[i + j], a.ring_.mul(a.c_[i], b.c_[j]));
        }
        return Poly(a.ring_, std::move(v));
    }

    Poly scaled(const Elem &s) const
    {
        std::vector<Elem> v;
        v.reserve(c_.size());
        for (const auto &x : c_) v.push_back(ring_.mul(s, x));
        return Poly(ring_, std::move(v));
    }

    Poly pow(unsigned n) const
    {
        Poly r = constant(ring_, ring_.one()), b = *this;
        for (; n; n >>= 1) {
            if (n & 1) r = r * b;
            if (n > 1) b = b * b;
        }
        return r;
    }

    Poly monic() const { return scaled(ring_.inv(lead())); }

    /// Formal derivative.
    Poly derivative() const
    {
        std::vector<Elem> v;
        for (std::size_t i = 1; i < c_.size(); ++i) v.push_back(ring_.mul(ring_.from_integer(Integer(static_cast<unsigned long>(i))), c_[i]));
        return Poly(ring_, std::move(v));
    }

    /// f(g(X)).
    Poly compose(const Poly &g) const
    {
        Poly acc(ring_);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * g + constant(ring_, c_[i]);
        return acc;
    }

    friend bool operator==(const Poly &a, const Poly &b)
    {
        if (!(a.ring_ == b.ring_) || a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!a.ring_.equal(a.c_[i], b.c_[i])) return false;
        return true;
    }

    std::string str() const
    {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (ring_.is_zero(c_[i])) continue;
            if (!s.empty()) s += " + ";
            const bool unit = ring_.equal(c_[i], ring_.one()) && i > 0;
            if (!unit) s += "(" + ring_.str(c_[i]) + ")";
            if (i > 0) s += (unit ? "" : "*") + std::string(i == 1 ? "X" : "X^" + std::to_string(i));
        }
        return s;
    }

    friend std::ostream &operator<<(std::ostream &os, const Poly &f) { return os << f.str(); }

    void same_ring(const Poly &b) const
    {
        if (!(ring_ == b.ring_)) fail(ErrorCode::ContextMismatch, "polynomials over different coefficient rings");
    }

private:
    void trim()
    {
        while (!c_.empty() && ring_.is_zero(c_.back())) c_.pop_back();
    }

    R ring_;
    std::vector<Elem> c_;
};

template <class R>
struct DivMod {
    Poly<R> quotient, remainder;
};

/// f = q·g + r with deg r < deg g; the leading coefficient of g must be a unit.
template <class R>
DivMod<R> divmod(const Poly<R> &f, const Poly<R> &g)
{
    f.same_ring(g);
    if (g.is_zero()) fail(ErrorCode::DivisionByZeroPoly, "division by the zero polynomial");
    const R &ring = f.ring();
    const auto inv_lead = ring.inv(g.lead());
    std::vector<typename R::Elem> r = f.coeffs();
    const long dg = g.degree();
    if (f.degree() < dg) return {Poly<R>(ring), f};
    std::vector<typename R::Elem> q(static_cast<std::size_t>(f.degree() - dg + 1), ring.zero());
    for (long i = f.degree(); i >= dg; --i) {
        const auto &top = r[static_cast<std::size_t>(i)];
        if (ring.is_zero(top)) continue;
        const auto c = ring.mul(top, inv_lead);
        q[static_cast<std::size_t>(i - dg)] = c;
        for (long j = 0; j <= dg; ++j) {
            auto &t = r[static_cast<std::size_t>(i - dg + j)];
            t = ring.sub(t, ring.mul(c, g.coeffs()[static_cast<std::size_t>(j)]));
        }
    }
    return {Poly<R>(ring, std::move(q)), Poly<R>(ring, std::move(r))};
}

template <class R>
Poly<R> operator%(const Poly<R> &f, const Poly<R> &g) { return divmod(f, g).remainder; }

/// Monic gcd over a field (zero if both inputs are zero).
template <class R>
Poly<R> gcd(Poly<R> a, Poly<R> b)
{
    while (!b.is_zero()) {
        Poly<R> r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

template <class R>
struct ExtGcd {
    Poly<R> g, s, t; // s·a + t·b = g, g monic
};

template <class R>
ExtGcd<R> ext_gcd(const Poly<R> &a, const Poly<R> &b)
{
    const R &ring = a.ring();
    Poly<R> r0 = a, r1 = b;
    Poly<R> s0 = Poly<R>::constant(ring, ring.one()), s1(ring);
    Poly<R> t0(ring), t1 = Poly<R>::constant(ring, ring.one());
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly<R> s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    const auto u = ring.inv(r0.lead());
    return {r0.scaled(u), s0.scaled(u), t0.scaled(u)};
}

/// Coefficients (c_0, ..., c_n) with f(X) = Σ c_i (X - a)^i.
template <class R>
std::vector<typename R::Elem> taylor_shift(const Poly<R> &f, const typename R::Elem &a)
{
    const R &ring = f.ring();
    std::vector<typename R::Elem> c = f.coeffs();
    const std::size_t n = c.size();
    // Repeated synthetic division by (X - a).
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j > i; --j) c[j - 1] = ring.add(c[j - 1], ring.mul(a, c[j]));
    if (c.empty()) c.push_back(ring.zero());
    return c;
}

inline Integer binomial(unsigned long n, unsigned long k)
{
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

/// b-th Hasse derivative: X^n -> C(n, b) X^(n-b).
template <class R>
Poly<R> hasse_deriv(const Poly<R> &f, unsigned long b)
{
    const R &ring = f.ring();
    std::vector<typename R::Elem> v;
    for (std::size_t n = b; n < f.coeffs().size(); ++n)
        v.push_back(ring.mul(ring.from_integer(binomial(n, b)), f.coeffs()[n]));
    return Poly<R>(ring, std::move(v));
}

/// (f_0, ..., f_r) with f = Σ f_i Q^i and deg f_i < deg Q.
template <class R>
std::vector<Poly<R>> q_expansion(const Poly<R> &f, const Poly<R> &q)
{
    if (!q.is_monic()) fail(ErrorCode::NonMonicKey, "expansion polynomial must be monic");
    if (q.degree() < 1) fail(ErrorCode::InvalidInput, "expansion polynomial must have degree >= 1");
    std::vector<Poly<R>> out;
    Poly<R> rest = f;
    do {
        auto [quo, rem] = divmod(rest, q);
        out.push_back(std::move(rem));
        rest = std::move(quo);
    } while (!rest.is_zero());
    return out;
}

/// Resultant over a field, by the Euclidean recurrence.
template <class R>
typename R::Elem resultant(const Poly<R> &f, const Poly<R> &g)
{
    f.same_ring(g);
    if (f.is_zero() || g.is_zero()) fail(ErrorCode::ZeroPolynomial, "resultant with the zero polynomial");
    const R &ring = f.ring();
    auto power = [&](typename R::Elem x, long e) {
        typename R::Elem r = ring.one();
        for (; e > 0; --e) r = ring.mul(r, x);
        return r;
    };
    Poly<R> a = f, b = g;
    typename R::Elem acc = ring.one();
    for (;;) {
        const long n = a.degree(), m = b.degree();
        if (m == 0) return ring.mul(acc, power(b.lead(), n));
        Poly<R> r = a % b;
        if (r.is_zero()) return ring.zero();
        if ((n * m) % 2 == 1) acc = ring.neg(acc);
        acc = ring.mul(acc, power(b.lead(), n - r.degree()));
        a = std::move(b);
        b = std::move(r);
    }
}

/// Product of the distinct irreducible factors (separable case), made monic.
template <class R>
Poly<R> squarefree_part(const Poly<R> &f)
{
    if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "squarefree part of zero polynomial");
    if (f.degree() == 0) return Poly<R>::constant(f.ring(), f.ring().one());
    const Poly<R> d = f.derivative();
    if (d.is_zero()) fail(ErrorCode::UnsupportedTower, "inseparable polynomial");
    return divmod(f, gcd(f, d)).quotient.monic();
}

/// X^e mod m, by repeated squaring.
template <class R>
Poly<R> pow_mod(Poly<R> base, Integer e, const Poly<R> &m)
{
    Poly<R> r = Poly<R>::constant(m.ring(), m.ring().one()) % m;
    base = base % m;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = (r * base) % m;
        e >>= 1;
        if (e > 0) base = (base * base) % m;
    }
    return r;
}

} // namespace valk

#endif
