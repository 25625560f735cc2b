#ifndef VALK_NEWTON_HPP
#define VALK_NEWTON_HPP

#include <algorithm>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"
#include "values.hpp"

namespace valk {

/// Lower convex hull of the points (i, v_i). Each segment has slope -s and
/// accounts for `length` roots of valuation s.
struct NewtonPolygon {
    struct Segment {
        Rational slope;
        long length;
        Rational root_valuation() const { return -slope; }
    };

    std::vector<Segment> segments; // slopes strictly increasing left to right
    long zero_roots = 0;           // roots at 0, i.e. of infinite valuation

    /// Root valuations with multiplicity, largest first; infinite ones included.
    std::vector<OrderedValue> root_valuations() const
    {
        std::vector<OrderedValue> out(static_cast<std::size_t>(zero_roots), OrderedValue::pos_inf());
        for (const auto &s : segments)
            for (long i = 0; i < s.length; ++i) out.push_back(OrderedValue::fin(s.root_valuation()));
        return out;
    }

    long degree() const
    {
        long n = zero_roots;
        for (const auto &s : segments) n += s.length;
        return n;
    }

    /// Number of finite-valuation roots with valuation > t (or >= t).
    long count_above(const Rational &t, bool inclusive) const
    {
        long n = 0;
        for (const auto &s : segments)
            if (s.root_valuation() > t || (inclusive && s.root_valuation() == t)) n += s.length;
        return n;
    }
};

/// Polygon of a coefficient valuation list; PosInf marks a zero coefficient.
inline NewtonPolygon newton_polygon(const std::vector<OrderedValue> &vals)
{
    long lo = -1, hi = -1;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i].is_pos_inf()) continue;
        if (!vals[i].is_fin()) fail(ErrorCode::InvalidValue, "Newton polygon needs rational values");
        if (lo < 0) lo = static_cast<long>(i);
        hi = static_cast<long>(i);
    }
    if (lo < 0) fail(ErrorCode::ZeroPolynomial, "Newton polygon of the zero polynomial");
    NewtonPolygon np;
    np.zero_roots = lo;
    long i = lo;
    while (i < hi) {
        // Smallest slope from i; ties go to the farthest point.
        long best = -1;
        Rational best_slope;
        for (long j = i + 1; j <= hi; ++j) {
            const auto &vj = vals[static_cast<std::size_t>(j)];
            if (vj.is_pos_inf()) continue;
            const Rational s = (vj.q() - vals[static_cast<std::size_t>(i)].q()) / (j - i);
            if (best < 0 || s <= best_slope) {
                best = j;
                best_slope = s;
            }
        }
        np.segments.push_back({best_slope, best - i});
        i = best;
    }
    return np;
}

template <class F>
NewtonPolygon newton_polygon(const F &field, const Poly<F> &f)
{
    std::vector<OrderedValue> vals;
    for (const auto &c : f.coeffs()) vals.push_back(field.val(c));
    return newton_polygon(vals);
}

} // namespace valk

#endif
