#ifndef VALK_PCS_HPP
#define VALK_PCS_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algclose.hpp"
#include "errors.hpp"
#include "pairdef.hpp"
#include "poly.hpp"
#include "values.hpp"

namespace valk {

/// A pseudo-Cauchy sequence given by a stage-indexed producer z_1, z_2, ...
template <class G>
class PCS
{
public:
    using Producer = std::function<AlgElem<G>(int)>;

    PCS(Producer produce, int length, std::string description)
        : produce_(std::move(produce)), length_(length), description_(std::move(description)),
          cache_(std::make_shared<Cache>())
    {
        if (length < 2) fail(ErrorCode::InvalidInput, "a sequence needs at least two terms");
    }

    static PCS from_list(std::vector<AlgElem<G>> zs)
    {
        const int n = static_cast<int>(zs.size());
        auto shared = std::make_shared<std::vector<AlgElem<G>>>(std::move(zs));
        return PCS([shared](int i) { return (*shared)[static_cast<std::size_t>(i - 1)]; }, n, "explicit");
    }

    int length() const { return length_; }
    /// Stages with a defined gamma: 1 .. length-1.
    int max_stage() const { return length_ - 1; }
    const std::string &description() const { return description_; }

    const AlgElem<G> &z(int n) const
    {
        if (n < 1 || n > length_)
            fail(ErrorCode::Unstabilized, "sequence term " + std::to_string(n) + " beyond the materialized length " + std::to_string(length_));
        std::lock_guard<std::mutex> lock(cache_->m);
        auto it = cache_->terms.find(n);
        if (it == cache_->terms.end()) it = cache_->terms.emplace(n, produce_(n)).first;
        return it->second;
    }

    /// gamma_n = v(z_n - z_{n+1}).
    OrderedValue gamma(int n) const { return dist(z(n), z(n + 1)); }

private:
    struct Cache {
        std::mutex m;
        std::map<int, AlgElem<G>> terms;
    };
    Producer produce_;
    int length_;
    std::string description_;
    std::shared_ptr<Cache> cache_;
};

/// Strictly increasing consecutive distances.
template <class G>
bool is_pcs(const std::vector<AlgElem<G>> &prefix)
{
    if (prefix.size() < 3) fail(ErrorCode::InvalidInput, "a prefix needs at least three terms");
    OrderedValue prev = dist(prefix[0], prefix[1]);
    for (std::size_t i = 1; i + 1 < prefix.size(); ++i) {
        const OrderedValue d = dist(prefix[i], prefix[i + 1]);
        if (!(prev < d)) return false;
        prev = d;
    }
    return true;
}

/// Σ π^(k!) for k = 1..n.
template <class G>
PCS<G> factorial_stream(const G &ground, int length)
{
    auto t = Tower<G>::create(ground);
    return PCS<G>(
        [t](int n) {
            if (n > 12) fail(ErrorCode::Unstabilized, "factorial stream is capped at 12 terms");
            auto acc = t->zero(0);
            long fact = 1;
            for (int k = 1; k <= n; ++k) {
                fact *= k;
                acc = t->add(0, acc, t->pow(0, t->uniformizer(0), fact));
            }
            return make_exact(t, 0, acc);
        },
        length, "factorial");
}

/// Tower y_1^2 = π, y_k^2 = y_{k-1} of the given height.
template <class G>
std::shared_ptr<const Tower<G>> root_tower(const G &ground, int height)
{
    using T = Tower<G>;
    auto t = T::create(ground);
    for (int k = 1; k <= height; ++k) {
        const auto y = k == 1 ? t->uniformizer(0) : t->gen(k - 1);
        t = T::extend(*t, {t->neg(k - 1, y), t->zero(k - 1), t->one(k - 1)});
    }
    return t;
}

/// Σ π^(1 - 2^-k) = Σ y_k^(2^k - 1) for k = 1..n, on level n of the root tower.
template <class G>
PCS<G> root_tower_stream(const G &ground, int length)
{
    auto t = root_tower(ground, length);
    return PCS<G>(
        [t](int n) {
            auto acc = t->zero(n);
            for (int k = 1; k <= n; ++k)
                acc = t->add(n, acc, t->embed(t->pow(k, t->gen(k), (1L << k) - 1), k, n));
            return make_exact(t, n, acc);
        },
        length, "roottower");
}

template <class G>
typename Tower<G>::Elem eval_at(const Poly<G> &f, const AlgElem<G> &z)
{
    return lift_poly(*z.tower, z.level, f).eval(z.center);
}

/// Witness that v f(z_μ) is constant for μ >= stage:
/// (v f(z) - v ∂_b f(z)) / b < gamma_stage for every b >= 1.
struct StabilityCertificate {
    int stage = 0;
    OrderedValue value;
    OrderedValue bound = OrderedValue::neg_inf(); // max_b (v f(z) - v ∂_b f(z)) / b
    OrderedValue gamma;
};

/// Evaluates the derivative bound at z; nullopt when f(z) = 0.
template <class G>
std::optional<std::pair<OrderedValue, OrderedValue>> derivative_bound(const Poly<G> &f, const AlgElem<G> &z)
{
    const auto &t = *z.tower;
    const OrderedValue vf = t.val(z.level, eval_at(f, z));
    if (vf.is_pos_inf()) return std::nullopt;
    OrderedValue best = OrderedValue::neg_inf();
    for (long b = 1; b <= f.degree(); ++b) {
        const OrderedValue vd = t.val(z.level, eval_at(hasse_deriv(f, static_cast<unsigned long>(b)), z));
        if (vd.is_pos_inf()) continue;
        const OrderedValue cand = OrderedValue::fin((vf.q() - vd.q()) / b);
        if (best < cand) best = cand;
    }
    return std::make_pair(vf, best);
}

enum class PrefixVerdict { Stabilized, IncreasingSoFar };

struct PrefixClassification {
    PrefixVerdict verdict;
    std::optional<StabilityCertificate> certificate;
};

template <class G>
std::optional<StabilityCertificate> certify_at(const PCS<G> &s, const Poly<G> &f, int stage)
{
    const auto r = derivative_bound(f, s.z(stage));
    if (!r) return std::nullopt;
    const OrderedValue g = s.gamma(stage);
    if (!(r->second < g)) return std::nullopt;
    return StabilityCertificate{stage, r->first, r->second, g};
}

template <class G>
PrefixClassification classify_prefix(const PCS<G> &s, const Poly<G> &f, int max_stage)
{
    if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "classification of the zero polynomial");
    const int last = std::min(max_stage, s.max_stage());
    for (int n = 1; n <= last; ++n)
        if (auto c = certify_at(s, f, n)) return {PrefixVerdict::Stabilized, c};
    return {PrefixVerdict::IncreasingSoFar, std::nullopt};
}

/// The valuation on K(X) with v(X - z_n) = gamma_n for all n.
template <class G>
class LimitValuation
{
public:
    explicit LimitValuation(PCS<G> s) : pcs_(std::move(s)), cache_(std::make_shared<Cache>()) {}

    const PCS<G> &pcs() const { return pcs_; }
    const G &ground() const { return pcs_.z(1).ground(); }

    StabilityCertificate certificate(const Poly<G> &f) const
    {
        if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "value of the zero polynomial");
        const std::string key = f.str();
        {
            std::lock_guard<std::mutex> lock(cache_->m);
            if (auto it = cache_->values.find(key); it != cache_->values.end()) return it->second;
        }
        for (int n = 1; n <= pcs_.max_stage(); ++n) {
            if (auto c = certify_at(pcs_, f, n)) {
                std::lock_guard<std::mutex> lock(cache_->m);
                cache_->values.emplace(key, *c);
                return *c;
            }
        }
        fail(ErrorCode::Unstabilized, "value of " + f.str() + " not certified within " + std::to_string(pcs_.max_stage()) + " stages");
    }

    OrderedValue value(const Poly<G> &f) const
    {
        if (f.is_zero()) return OrderedValue::pos_inf();
        return certificate(f).value;
    }
    OrderedValue value(const RationalFunction<G> &f) const
    {
        if (f.num.is_zero() || f.den.is_zero()) fail(ErrorCode::ZeroElement, "zero numerator or denominator");
        return value(f.num) - value(f.den);
    }

    /// v(X - b) for algebraic b: the eventual value of v(z_n - b).
    OrderedValue dist_x(const AlgElem<G> &b) const
    {
        for (int n = 1; n <= pcs_.max_stage(); ++n) {
            const OrderedValue d = dist(pcs_.z(n), b);
            if (d < pcs_.gamma(n)) return d;
        }
        fail(ErrorCode::Unstabilized, "v(X - b) not certified within " + std::to_string(pcs_.max_stage()) + " stages");
    }

private:
    struct Cache {
        std::mutex m;
        std::map<std::string, StabilityCertificate> values;
    };
    PCS<G> pcs_;
    std::shared_ptr<Cache> cache_;
};

} // namespace valk

#endif
