#ifndef VALK_IO_HPP
#define VALK_IO_HPP

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "algclose.hpp"
#include "errors.hpp"
#include "ground.hpp"
#include "pairdef.hpp"
#include "poly.hpp"
#include "tower.hpp"
#include "values.hpp"

namespace valk::io {

using json = nlohmann::json;

[[noreturn]] inline void schema_error(const std::string &path, const std::string &what)
{
    fail(ErrorCode::SchemaError, path + ": " + what);
}

inline Rational parse_rational_json(const json &j, const std::string &path)
{
    if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
    if (!j.is_string()) schema_error(path, "expected a rational as a string or integer");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const Error &e) {
        schema_error(path, e.what());
    }
}

inline OrderedValue parse_value(const json &j, const std::string &path)
{
    if (j.is_number_integer()) return OrderedValue::fin(parse_rational_json(j, path));
    if (!j.is_string()) schema_error(path, "expected a value string");
    try {
        return OrderedValue::parse(j.get<std::string>());
    } catch (const Error &e) {
        schema_error(path, e.what());
    }
}

inline int parse_int(const json &j, const std::string &path, int lo, int hi)
{
    long long v = 0;
    if (j.is_number_integer())
        v = j.get<long long>();
    else if (j.is_string()) {
        const Rational q = parse_rational_json(j, path);
        if (q.get_den() != 1 || !q.get_num().fits_slong_p()) schema_error(path, "expected an integer");
        v = q.get_num().get_si();
    } else {
        schema_error(path, "expected an integer");
    }
    if (v < lo || v > hi) schema_error(path, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
}

inline const json &member(const json &j, const std::string &key, const std::string &path)
{
    if (!j.is_object()) schema_error(path, "expected an object");
    if (!j.contains(key)) schema_error(path + "." + key, "missing");
    return j.at(key);
}

// Ground elements.

inline Rational parse_ground(const PAdicRationals &, const json &j, const std::string &path)
{
    return parse_rational_json(j, path);
}

inline PrimeField::Elem parse_coeff(const PrimeField &F, const json &j, const std::string &path)
{
    return F.from_rational(parse_rational_json(j, path));
}

inline Rational parse_coeff(const Rationals &, const json &j, const std::string &path)
{
    return parse_rational_json(j, path);
}

template <class C>
Poly<C> parse_coeff_list(const C &k, const json &j, const std::string &path)
{
    if (!j.is_array()) schema_error(path, "expected a coefficient array");
    std::vector<typename C::Elem> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(parse_coeff(k, j[i], path + "[" + std::to_string(i) + "]"));
    return Poly<C>(k, std::move(c));
}

/// "[c0,c1,...]" or "[..]/[..]" (ascending in t), a coefficient array, or a scalar.
template <class C>
RatFunc<C> parse_ground(const TAdicFunctionField<C> &K, const json &j, const std::string &path)
{
    const C &k = K.coeff_field();
    using CP = Poly<C>;
    if (j.is_array()) return K.make(parse_coeff_list(k, j, path), CP::constant(k, k.one()));
    if (j.is_object()) return K.make(parse_coeff_list(k, member(j, "num", path), path + ".num"),
                                     parse_coeff_list(k, member(j, "den", path), path + ".den"));
    if (j.is_string() && !j.get<std::string>().empty() && j.get<std::string>().front() == '[') {
        const std::string s = j.get<std::string>();
        const auto mid = s.find("]/[");
        json num, den = json::array({1});
        try {
            if (mid == std::string::npos) {
                num = json::parse(s);
            } else {
                num = json::parse(s.substr(0, mid + 1));
                den = json::parse(s.substr(mid + 2));
            }
        } catch (const json::exception &) {
            schema_error(path, "malformed function-field element '" + s + "'");
        }
        return K.make(parse_coeff_list(k, num, path), parse_coeff_list(k, den, path));
    }
    return K.constant(parse_coeff(k, j, path));
}

template <class G>
Poly<G> parse_poly(const G &K, const json &j, const std::string &path)
{
    if (!j.is_array()) schema_error(path, "expected an ascending coefficient array");
    std::vector<typename G::Elem> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(parse_ground(K, j[i], path + "[" + std::to_string(i) + "]"));
    return Poly<G>(K, std::move(c));
}

/// An array is a polynomial; {"num":[..],"den":[..]} is a fraction.
template <class G>
RationalFunction<G> parse_function(const G &K, const json &j, const std::string &path)
{
    if (j.is_object())
        return {parse_poly(K, member(j, "num", path), path + ".num"), parse_poly(K, member(j, "den", path), path + ".den")};
    return {parse_poly(K, j, path), Poly<G>::constant(K, K.one())};
}

template <class G>
json poly_to_json(const Poly<G> &f)
{
    json a = json::array();
    for (const auto &c : f.coeffs()) a.push_back(f.ring().str(c));
    return a;
}

// Towers and algebraic elements.

template <class G>
TowerElem<G> parse_tower_elem(const Tower<G> &t, int level, const json &j, const std::string &path)
{
    if (level == 0) return t.from_base(parse_ground(t.ground(), j, path));
    if (!j.is_array()) return t.embed(parse_tower_elem(t, 0, j, path), 0, level);
    const std::size_t d = static_cast<std::size_t>(t.step(level).d);
    if (j.size() > d) schema_error(path, "more than " + std::to_string(d) + " coefficients at level " + std::to_string(level));
    TowerElem<G> x = t.zero(level);
    for (std::size_t i = 0; i < j.size(); ++i) x.c[i] = parse_tower_elem(t, level - 1, j[i], path + "[" + std::to_string(i) + "]");
    return x;
}

template <class G>
json tower_elem_to_json(const Tower<G> &t, int level, const TowerElem<G> &x)
{
    if (level == 0) return t.ground().str(*x.base);
    json a = json::array();
    for (const auto &c : x.c) a.push_back(tower_elem_to_json(t, level - 1, c));
    return a;
}

template <class G>
std::shared_ptr<const Tower<G>> parse_tower(const G &K, const json &steps, const std::string &path)
{
    if (!steps.is_array()) schema_error(path, "expected an array of steps");
    auto t = Tower<G>::create(K);
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const std::string p = path + "[" + std::to_string(k) + "]";
        const json &m = member(steps[k], "minpoly", p);
        if (!m.is_array()) schema_error(p + ".minpoly", "expected a coefficient array");
        std::vector<TowerElem<G>> c;
        for (std::size_t i = 0; i < m.size(); ++i)
            c.push_back(parse_tower_elem(*t, static_cast<int>(k), m[i], p + ".minpoly[" + std::to_string(i) + "]"));
        t = Tower<G>::extend(*t, c);
    }
    return t;
}

template <class G>
json tower_to_json(const Tower<G> &t)
{
    json a = json::array();
    for (int k = 1; k <= t.height(); ++k) {
        const auto &s = t.step(k);
        json m = json::array();
        for (const auto &c : s.minpoly) m.push_back(tower_elem_to_json(t, k - 1, c));
        a.push_back({{"minpoly", m}, {"e", s.e}, {"f", s.f}, {"kind", step_kind_name(s.kind)}});
    }
    return a;
}

/// A scalar is a ground element; otherwise
/// {"tower":[{"minpoly":[..]},..], "expr":nested, "level":k,
///  "approx":{"center":nested, "precision":"a/b", "minpoly":[..]}}.
template <class G>
AlgElem<G> parse_alg(const G &K, const json &j, const std::string &path)
{
    if (!j.is_object()) return from_ground(K, parse_ground(K, j, path));
    auto t = j.contains("tower") ? parse_tower(K, j.at("tower"), path + ".tower") : Tower<G>::create(K);
    const int level = j.contains("level") ? parse_int(j.at("level"), path + ".level", 0, t->height()) : t->height();
    if (j.contains("approx")) {
        const json &ap = j.at("approx");
        const std::string p = path + ".approx";
        const auto center = parse_tower_elem(*t, level, member(ap, "center", p), p + ".center");
        const OrderedValue prec = parse_value(member(ap, "precision", p), p + ".precision");
        if (!prec.is_fin()) schema_error(p + ".precision", "expected a finite rational precision");
        const Poly<G> m = parse_poly(K, member(ap, "minpoly", p), p + ".minpoly");
        if (!m.is_monic() || m.degree() < 1) schema_error(p + ".minpoly", "expected a monic polynomial of degree >= 1");
        return AlgElem<G>(t, level, center, m, prec);
    }
    return make_exact(t, level, parse_tower_elem(*t, level, member(j, "expr", path), path + ".expr"));
}

template <class G>
json alg_to_json(const AlgElem<G> &a)
{
    json j = {{"tower", tower_to_json(*a.tower)}, {"level", a.level}, {"expr", tower_elem_to_json(*a.tower, a.level, a.center)}};
    if (!a.exact()) j["precision"] = a.precision.str();
    j["minpoly"] = poly_to_json(a.minpoly());
    return j;
}

/// Compact form: the ground element itself when a lies in K.
template <class G>
json alg_brief(const AlgElem<G> &a)
{
    if (a.exact()) {
        const auto [l, x] = a.tower->least_level(a.level, a.center);
        if (l == 0) return a.ground().str(*x.base);
    }
    return {{"expr", tower_elem_to_json(*a.tower, a.level, a.center)}, {"level", a.level}, {"minpoly", poly_to_json(a.minpoly())}};
}

} // namespace valk::io

#endif
