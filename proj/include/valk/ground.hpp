#ifndef VALK_GROUND_HPP
#define VALK_GROUND_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"
#include "values.hpp"

namespace valk {

// ---------------------------------------------------------------------------
// Plain fields used as coefficient and residue fields.

struct Rationals {
    using Elem = Rational;

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_integer(const Integer &n) const { return Rational(n); }
    Elem add(const Elem &a, const Elem &b) const { return a + b; }
    Elem sub(const Elem &a, const Elem &b) const { return a - b; }
    Elem mul(const Elem &a, const Elem &b) const { return a * b; }
    Elem neg(const Elem &a) const { return -a; }
    Elem inv(const Elem &a) const
    {
        if (a == 0) fail(ErrorCode::DivisionByZeroPoly, "inverse of 0");
        return 1 / a;
    }
    bool is_zero(const Elem &a) const { return a == 0; }
    bool equal(const Elem &a, const Elem &b) const { return a == b; }
    std::string str(const Elem &a) const { return to_string(a); }
    long characteristic() const { return 0; }
    std::string name() const { return "Q"; }
    friend bool operator==(const Rationals &, const Rationals &) { return true; }
};

struct PrimeField {
    using Elem = std::uint64_t;
    std::uint64_t p = 2;

    PrimeField() = default;
    explicit PrimeField(std::uint64_t prime) : p(prime)
    {
        if (prime < 2 || prime > (1ull << 31) || !mpz_probab_prime_p(Integer(static_cast<unsigned long>(prime)).get_mpz_t(), 30))
            fail(ErrorCode::InvalidInput, "prime field needs a prime p <= 2^31, got " + std::to_string(prime));
    }

    Elem zero() const { return 0; }
    Elem one() const { return 1 % p; }
    Elem from_integer(const Integer &n) const
    {
        Integer r;
        mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), p);
        return r.get_ui();
    }
    Elem from_rational(const Rational &q) const
    {
        const Elem d = from_integer(q.get_den());
        if (d == 0) fail(ErrorCode::NegativeValue, "denominator divisible by p");
        return mul(from_integer(q.get_num()), inv(d));
    }
    Elem add(Elem a, Elem b) const { return (a + b) % p; }
    Elem sub(Elem a, Elem b) const { return (a + p - b) % p; }
    Elem mul(Elem a, Elem b) const { return (a * b) % p; }
    Elem neg(Elem a) const { return (p - a) % p; }
    Elem pow(Elem a, std::uint64_t e) const
    {
        Elem r = one();
        for (; e; e >>= 1, a = mul(a, a))
            if (e & 1) r = mul(r, a);
        return r;
    }
    Elem inv(Elem a) const
    {
        if (a % p == 0) fail(ErrorCode::DivisionByZeroPoly, "inverse of 0 in F_p");
        return pow(a, p - 2);
    }
    bool is_zero(Elem a) const { return a % p == 0; }
    bool equal(Elem a, Elem b) const { return a % p == b % p; }
    std::string str(Elem a) const { return std::to_string(a); }
    long characteristic() const { return static_cast<long>(p); }
    std::string name() const { return "F" + std::to_string(p); }
    friend bool operator==(const PrimeField &a, const PrimeField &b) { return a.p == b.p; }
};

// ---------------------------------------------------------------------------
// Roots and irreducibility over the residue fields.

inline std::vector<Rational> roots(const Poly<Rationals> &f)
{
    if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "roots of zero polynomial");
    std::vector<Rational> out;
    std::size_t z = f.ord();
    if (z > 0) out.push_back(0);
    std::vector<Rational> c(f.coeffs().begin() + static_cast<long>(z), f.coeffs().end());
    if (c.size() <= 1) return out;
    Integer l = 1;
    for (const auto &q : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
    std::vector<Integer> ic;
    for (const auto &q : c) ic.push_back(Integer(q * l));
    auto divisors = [](Integer n) {
        n = abs(n);
        if (n > Integer("1000000000000")) fail(ErrorCode::UnsupportedTower, "rational root search: coefficient too large");
        std::vector<Integer> small, large;
        for (Integer d = 1; d * d <= n; ++d) {
            if (n % d == 0) {
                small.push_back(d);
                if (d * d != n) large.push_back(n / d);
            }
        }
        small.insert(small.end(), large.rbegin(), large.rend());
        return small;
    };
    const Poly<Rationals> g(Rationals{}, c);
    for (const auto &num : divisors(ic.front()))
        for (const auto &den : divisors(ic.back()))
            for (int sgn : {1, -1}) {
                Rational r(num * sgn, den);
                r.canonicalize();
                if (g.eval(r) == 0 && std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
            }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_irreducible(const Poly<Rationals> &f)
{
    if (f.degree() <= 0) return false;
    if (f.degree() == 1) return true;
    if (f.degree() <= 3) return roots(f).empty();
    fail(ErrorCode::UnsupportedTower, "irreducibility over Q is only decided up to degree 3");
}

namespace detail {

inline void split_fp(const Poly<PrimeField> &g, std::uint64_t delta, std::vector<std::uint64_t> &out)
{
    const PrimeField &F = g.ring();
    if (g.degree() <= 0) return;
    if (g.degree() == 1) {
        out.push_back(F.neg(F.mul(g.coeff(0), F.inv(g.lead()))));
        return;
    }
    for (;; ++delta) {
        const Poly<PrimeField> base(F, {F.from_integer(Integer(static_cast<unsigned long>(delta))), F.one()});
        Poly<PrimeField> h = pow_mod(base, Integer(static_cast<unsigned long>((F.p - 1) / 2)), g) - Poly<PrimeField>::constant(F, F.one());
        Poly<PrimeField> d = gcd(g, h);
        if (d.degree() > 0 && d.degree() < g.degree()) {
            split_fp(d, delta + 1, out);
            split_fp(divmod(g, d).quotient, delta + 1, out);
            return;
        }
    }
}

} // namespace detail

/// Distinct roots in F_p, sorted.
inline std::vector<std::uint64_t> roots(const Poly<PrimeField> &f)
{
    if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "roots of zero polynomial");
    const PrimeField &F = f.ring();
    std::vector<std::uint64_t> out;
    if (F.p <= 4096) {
        for (std::uint64_t x = 0; x < F.p; ++x)
            if (F.is_zero(f.eval(x))) out.push_back(x);
        return out;
    }
    const auto X = Poly<PrimeField>::x(F);
    Poly<PrimeField> g = gcd(f, pow_mod(X, Integer(static_cast<unsigned long>(F.p)), f) - X);
    if (F.is_zero(g.coeff(0)) && g.degree() > 0) {
        out.push_back(0);
        g = divmod(g, X).quotient;
    }
    detail::split_fp(g, 1, out);
    std::sort(out.begin(), out.end());
    return out;
}

/// Rabin's test.
inline bool is_irreducible(const Poly<PrimeField> &f)
{
    const long n = f.degree();
    if (n <= 0) return false;
    if (n == 1) return true;
    const PrimeField &F = f.ring();
    const Poly<PrimeField> m = f.monic();
    const auto X = Poly<PrimeField>::x(F);
    auto frob = [&](long k) {
        Integer e;
        mpz_ui_pow_ui(e.get_mpz_t(), F.p, static_cast<unsigned long>(k));
        return pow_mod(X, e, m);
    };
    if (!(frob(n) == X % m)) return false;
    long rest = n;
    for (long q = 2; q <= rest; ++q) {
        if (rest % q) continue;
        while (rest % q == 0) rest /= q;
        if (gcd(m, frob(n / q) - X).degree() > 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Valued ground fields.

/// (Q, v_p).
class PAdicRationals : public Rationals
{
public:
    using ResidueField = PrimeField;

    explicit PAdicRationals(std::uint64_t p) : res_(p) {}

    std::uint64_t p() const { return res_.p; }

    OrderedValue val(const Elem &x) const
    {
        if (x == 0) return OrderedValue::pos_inf();
        return OrderedValue::fin(count(x.get_num()) - count(x.get_den()));
    }

    const ResidueField &residue_field() const { return res_; }

    ResidueField::Elem residue(const Elem &x) const
    {
        const OrderedValue v = val(x);
        if (v < OrderedValue::fin(0)) fail(ErrorCode::NegativeValue, "residue of " + to_string(x) + " with negative value");
        if (v > OrderedValue::fin(0)) return 0;
        return res_.from_rational(x);
    }

    Elem lift(ResidueField::Elem r) const { return Rational(static_cast<unsigned long>(r % res_.p)); }
    Elem uniformizer() const { return Rational(static_cast<unsigned long>(res_.p)); }
    long residue_characteristic() const { return static_cast<long>(res_.p); }
    std::optional<std::uint64_t> residue_field_size() const { return res_.p; }

    std::string descriptor() const { return "{\"kind\":\"padic\",\"p\":" + std::to_string(res_.p) + "}"; }

    friend bool operator==(const PAdicRationals &a, const PAdicRationals &b) { return a.res_ == b.res_; }

private:
    long count(const Integer &n) const
    {
        Integer t = n;
        const Integer pp(static_cast<unsigned long>(res_.p));
        return static_cast<long>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), pp.get_mpz_t()));
    }

    PrimeField res_;
};

/// num(t)/den(t) with den monic and gcd(num, den) = 1.
template <class C>
struct RatFunc {
    Poly<C> num, den;
};

/// (k(t), v_t) for k = Q or F_p.
template <class C>
class TAdicFunctionField
{
public:
    using Elem = RatFunc<C>;
    using ResidueField = C;
    using CPoly = Poly<C>;

    explicit TAdicFunctionField(C coeff = C{}) : k_(std::move(coeff)) {}

    const C &coeff_field() const { return k_; }

    Elem make(CPoly num, CPoly den) const
    {
        if (den.is_zero()) fail(ErrorCode::DivisionByZeroPoly, "zero denominator");
        if (num.is_zero()) return {CPoly(k_), CPoly::constant(k_, k_.one())};
        const CPoly g = gcd(num, den);
        num = divmod(num, g).quotient;
        den = divmod(den, g).quotient;
        const auto u = k_.inv(den.lead());
        return {num.scaled(u), den.scaled(u)};
    }
    Elem constant(const typename C::Elem &c) const { return make(CPoly::constant(k_, c), one_poly()); }

    Elem zero() const { return {CPoly(k_), one_poly()}; }
    Elem one() const { return constant(k_.one()); }
    Elem from_integer(const Integer &n) const { return constant(k_.from_integer(n)); }
    Elem add(const Elem &a, const Elem &b) const { return make(a.num * b.den + b.num * a.den, a.den * b.den); }
    Elem sub(const Elem &a, const Elem &b) const { return make(a.num * b.den - b.num * a.den, a.den * b.den); }
    Elem mul(const Elem &a, const Elem &b) const { return make(a.num * b.num, a.den * b.den); }
    Elem neg(const Elem &a) const { return {-a.num, a.den}; }
    Elem inv(const Elem &a) const
    {
        if (a.num.is_zero()) fail(ErrorCode::DivisionByZeroPoly, "inverse of 0");
        return make(a.den, a.num);
    }
    bool is_zero(const Elem &a) const { return a.num.is_zero(); }
    bool equal(const Elem &a, const Elem &b) const { return a.num == b.num && a.den == b.den; }
    long characteristic() const { return k_.characteristic(); }

    std::string str(const Elem &a) const
    {
        auto list = [&](const CPoly &p) {
            std::string s = "[";
            for (std::size_t i = 0; i < p.coeffs().size(); ++i) s += (i ? "," : "") + k_.str(p.coeffs()[i]);
            if (p.is_zero()) s += k_.str(k_.zero());
            return s + "]";
        };
        if (a.den.degree() == 0) return list(a.num);
        return list(a.num) + "/" + list(a.den);
    }

    OrderedValue val(const Elem &x) const
    {
        if (x.num.is_zero()) return OrderedValue::pos_inf();
        return OrderedValue::fin(static_cast<long>(x.num.ord()) - static_cast<long>(x.den.ord()));
    }

    const ResidueField &residue_field() const { return k_; }

    typename C::Elem residue(const Elem &x) const
    {
        const OrderedValue v = val(x);
        if (v < OrderedValue::fin(0)) fail(ErrorCode::NegativeValue, "residue of element with negative value");
        if (v > OrderedValue::fin(0)) return k_.zero();
        return k_.mul(x.num.coeff(x.num.ord()), k_.inv(x.den.coeff(x.den.ord())));
    }

    Elem lift(const typename C::Elem &r) const { return constant(r); }
    Elem uniformizer() const { return make(CPoly::x(k_), one_poly()); }
    long residue_characteristic() const { return k_.characteristic(); }
    std::optional<std::uint64_t> residue_field_size() const
    {
        if constexpr (std::is_same_v<C, PrimeField>) return k_.p;
        else return std::nullopt;
    }

    std::string descriptor() const { return "{\"kind\":\"tadic\",\"coeff\":\"" + k_.name() + "\"}"; }

    friend bool operator==(const TAdicFunctionField &a, const TAdicFunctionField &b) { return a.k_ == b.k_; }

private:
    CPoly one_poly() const { return CPoly::constant(k_, k_.one()); }

    C k_;
};

using TAdicRationals = TAdicFunctionField<Rationals>;
using TAdicPrime = TAdicFunctionField<PrimeField>;

} // namespace valk

#endif
