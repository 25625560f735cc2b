#ifndef VALK_VALUES_HPP
#define VALK_VALUES_HPP

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "errors.hpp"

namespace valk {

using Integer = mpz_class;
using Rational = mpq_class;

inline std::string to_string(const Rational &q)
{
    Rational c(q);
    c.canonicalize();
    return c.get_str();
}

/// Parses "a" or "a/b" (optional sign, b > 0). The result is canonical.
inline Rational parse_rational(const std::string &s)
{
    auto ok_digits = [](const std::string &t, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) ++i;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    const auto slash = s.find('/');
    const std::string num = s.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!ok_digits(num, true) || !ok_digits(den, false))
        fail(ErrorCode::InvalidInput, "not a rational: '" + s + "'");
    Integer n(num[0] == '+' ? num.substr(1) : num), d(den);
    if (d == 0) fail(ErrorCode::InvalidInput, "zero denominator in '" + s + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

/// Element of Q ∪ {±inf} or of (Q ⊕ Z)_lex ∪ {±inf}.
class OrderedValue
{
public:
    enum class Kind { Fin, LexFin, PosInf, NegInf };

    OrderedValue() : kind_(Kind::Fin) {}

    static OrderedValue fin(const Rational &q) { return OrderedValue(Kind::Fin, q, 0); }
    static OrderedValue fin(long n) { return fin(Rational(n)); }
    static OrderedValue lex(const Rational &q, long k) { return OrderedValue(Kind::LexFin, q, k); }
    static OrderedValue pos_inf() { return OrderedValue(Kind::PosInf, 0, 0); }
    static OrderedValue neg_inf() { return OrderedValue(Kind::NegInf, 0, 0); }

    Kind kind() const { return kind_; }
    bool is_fin() const { return kind_ == Kind::Fin; }
    bool is_lex() const { return kind_ == Kind::LexFin; }
    bool is_finite() const { return is_fin() || is_lex(); }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }

    const Rational &q() const { return q_; }
    long k() const { return k_; }

    /// Rational part; throws for infinities.
    const Rational &rational() const
    {
        if (!is_finite()) fail(ErrorCode::InvalidValue, "infinite value has no rational part");
        return q_;
    }

    /// Embeds Fin(q) as (q, 0); other kinds are returned unchanged.
    OrderedValue as_lex() const { return is_fin() ? lex(q_, 0) : *this; }

    friend OrderedValue operator+(const OrderedValue &u, const OrderedValue &w)
    {
        if ((u.is_pos_inf() && w.is_neg_inf()) || (u.is_neg_inf() && w.is_pos_inf()))
            fail(ErrorCode::UndefinedSum, "inf + -inf");
        if (u.is_pos_inf() || w.is_pos_inf()) return pos_inf();
        if (u.is_neg_inf() || w.is_neg_inf()) return neg_inf();
        check_context(u, w);
        return OrderedValue(u.kind_, u.q_ + w.q_, u.k_ + w.k_);
    }

    OrderedValue operator-() const
    {
        switch (kind_) {
            case Kind::PosInf: return neg_inf();
            case Kind::NegInf: return pos_inf();
            default: return OrderedValue(kind_, -q_, -k_);
        }
    }

    friend OrderedValue operator-(const OrderedValue &u, const OrderedValue &w) { return u + (-w); }

    /// n·u for an integer n.
    OrderedValue scaled(long n) const
    {
        if (n == 0) {
            if (!is_finite()) fail(ErrorCode::UndefinedSum, "0 * inf");
            return OrderedValue(kind_, 0, 0);
        }
        if (!is_finite()) return n > 0 ? *this : -*this;
        return OrderedValue(kind_, q_ * n, k_ * n);
    }

    /// u / n, defined when the result lies in the same group (always for Fin).
    OrderedValue divided(long n) const
    {
        if (n <= 0) fail(ErrorCode::InvalidValue, "division by non-positive integer");
        if (!is_finite()) return *this;
        if (is_lex() && k_ % n != 0) fail(ErrorCode::InvalidValue, "lex value not divisible by " + std::to_string(n));
        return OrderedValue(kind_, q_ / n, k_ / n);
    }

    friend std::strong_ordering operator<=>(const OrderedValue &u, const OrderedValue &w)
    {
        const int ru = u.rank(), rw = w.rank();
        if (ru != 1 || rw != 1) return ru <=> rw;
        check_context(u, w);
        const int c = cmp(u.q_, w.q_);
        if (c != 0) return c <=> 0;
        return u.k_ <=> w.k_;
    }

    friend bool operator==(const OrderedValue &u, const OrderedValue &w)
    {
        return (u <=> w) == std::strong_ordering::equal;
    }

    std::string str() const
    {
        switch (kind_) {
            case Kind::PosInf: return "inf";
            case Kind::NegInf: return "-inf";
            case Kind::Fin: return to_string(q_);
            case Kind::LexFin: return "(" + to_string(q_) + ", " + std::to_string(k_) + ")";
        }
        return "";
    }

    /// Inverse of str().
    static OrderedValue parse(const std::string &s)
    {
        if (s == "inf") return pos_inf();
        if (s == "-inf") return neg_inf();
        if (!s.empty() && s.front() == '(') {
            const auto comma = s.find(',');
            if (comma == std::string::npos || s.back() != ')')
                fail(ErrorCode::InvalidInput, "bad lex value '" + s + "'");
            std::string a = s.substr(1, comma - 1), b = s.substr(comma + 1, s.size() - comma - 2);
            auto trim = [](std::string t) {
                while (!t.empty() && t.front() == ' ') t.erase(t.begin());
                while (!t.empty() && t.back() == ' ') t.pop_back();
                return t;
            };
            const Rational kq = parse_rational(trim(b));
            if (kq.get_den() != 1) fail(ErrorCode::InvalidInput, "lex offset must be an integer in '" + s + "'");
            return lex(parse_rational(trim(a)), kq.get_num().get_si());
        }
        return fin(parse_rational(s));
    }

    friend std::ostream &operator<<(std::ostream &os, const OrderedValue &u) { return os << u.str(); }

private:
    OrderedValue(Kind kind, const Rational &q, long k) : kind_(kind), q_(q), k_(k) { q_.canonicalize(); }

    int rank() const { return kind_ == Kind::NegInf ? 0 : kind_ == Kind::PosInf ? 2 : 1; }

    static void check_context(const OrderedValue &u, const OrderedValue &w)
    {
        if (u.kind_ != w.kind_) fail(ErrorCode::ContextMismatch, "mixing rank-1 and lex values");
    }

    Kind kind_;
    Rational q_;
    long k_ = 0;
};

inline OrderedValue min(const OrderedValue &a, const OrderedValue &b) { return b < a ? b : a; }
inline OrderedValue max(const OrderedValue &a, const OrderedValue &b) { return a < b ? b : a; }

/// Compares values where one side may be Fin and the other LexFin, via the
/// embedding q -> (q, 0).
inline std::strong_ordering compare_mixed(const OrderedValue &a, const OrderedValue &b)
{
    if (a.is_lex() || b.is_lex()) return a.as_lex() <=> b.as_lex();
    return a <=> b;
}

/// The subgroup (1/denom)Z of Q, or (1/denom)Z ⊕ {0} inside (Q ⊕ Z)_lex.
struct ValueGroup {
    long denom = 1;
    bool lex = false;

    static ValueGroup integers() { return {1, false}; }
    static ValueGroup lex_integers() { return {1, true}; }

    bool contains(const OrderedValue &u) const
    {
        check(u);
        const Rational t = u.q() * denom;
        return t.get_den() == 1 && (!lex || u.k() == 0);
    }

    void check(const OrderedValue &u) const
    {
        if (!u.is_finite()) fail(ErrorCode::InvalidValue, "infinite value");
        if (u.is_lex() != lex) fail(ErrorCode::ContextMismatch, "value and group live in different contexts");
    }
};

/// True iff some positive multiple of u lies in the base group.
inline bool is_torsion_mod(const OrderedValue &u, const ValueGroup &base)
{
    base.check(u);
    // n·(q, k) has second coordinate n·k, which vanishes only for k = 0; a
    // rational always has a multiple in (1/denom)Z.
    return !u.is_lex() || u.k() == 0;
}

} // namespace valk

#endif
