/**
 * @file valk.cpp
 * @brief Command-line front end: scene parsing, dispatch and JSON reports.
 *
 * Exit status: 0 on success, 1 on malformed input or a failed verify suite,
 * 2 when a computation hits its stage or precision cap.
 */

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <valk/io.hpp>
#include <valk/keypoly.hpp>
#include <valk/pcslimit.hpp>
#include <valk/ramicf.hpp>
#include <valk/verify.hpp>

using namespace valk;
using json = nlohmann::json;
using io::member;
using io::schema_error;

namespace {

struct Options {
    std::string scene, field, pair, limit, poly, key, prefix;
    int stages = 0;
    std::string suite;
    std::size_t samples = 100;
    std::uint64_t seed = 0;
    bool text = false;
};

json parse_flag(const std::string &text, const std::string &flag)
{
    try {
        return json::parse(text);
    } catch (const json::exception &e) {
        schema_error(flag, std::string("not valid JSON: ") + e.what());
    }
}

/// The scene file, with command-line flags taking precedence.
json load_scene(const Options &o)
{
    json doc = json::object();
    if (!o.scene.empty()) {
        std::ifstream in(o.scene);
        if (!in) fail(ErrorCode::InvalidInput, "cannot open scene '" + o.scene + "'");
        try {
            doc = json::parse(in);
        } catch (const json::exception &e) {
            schema_error(o.scene, std::string("not valid JSON: ") + e.what());
        }
        if (!doc.is_object()) schema_error("$", "a scene must be a JSON object");
    }
    const std::pair<const std::string *, const char *> flags[] = {
        {&o.field, "field"}, {&o.pair, "pair"}, {&o.limit, "limit"}, {&o.poly, "poly"}, {&o.key, "key"}, {&o.prefix, "prefix"}};
    for (const auto &[text, name] : flags)
        if (!text->empty()) doc[name] = parse_flag(*text, std::string("--") + name);
    if (o.stages > 0) doc["stages"] = o.stages;
    return doc;
}

int stages_of(const json &doc, int fallback)
{
    return doc.contains("stages") ? io::parse_int(doc.at("stages"), "$.stages", 1, 12) : fallback;
}

template <class G>
std::shared_ptr<const LimitValuation<G>> parse_limit(const G &K, const json &doc)
{
    const json &l = member(doc, "limit", "$");
    if (!l.is_object()) schema_error("$.limit", "expected an object");
    if (l.contains("stream")) {
        const json &s = l.at("stream");
        if (!s.is_array()) schema_error("$.limit.stream", "expected an array of elements");
        std::vector<AlgElem<G>> zs;
        for (std::size_t i = 0; i < s.size(); ++i) zs.push_back(io::parse_alg(K, s[i], "$.limit.stream[" + std::to_string(i) + "]"));
        if (zs.size() < 2) schema_error("$.limit.stream", "needs at least two terms");
        return std::make_shared<const LimitValuation<G>>(PCS<G>::from_list(std::move(zs)));
    }
    const json &b = member(l, "builtin", "$.limit");
    if (!b.is_string()) schema_error("$.limit.builtin", "expected \"factorial\" or \"roottower\"");
    if constexpr (std::is_same_v<G, PAdicRationals>) {
        if (l.contains("p") && io::parse_int(l.at("p"), "$.limit.p", 2, 1 << 30) != static_cast<int>(K.p()))
            schema_error("$.limit.p", "does not match the field's prime");
    }
    const int stages = stages_of(doc, 2);
    const std::string name = b.get<std::string>();
    if (name == "factorial") {
        const int len = l.contains("length") ? io::parse_int(l.at("length"), "$.limit.length", 2, 12) : std::min(12, stages + 3);
        return std::make_shared<const LimitValuation<G>>(factorial_stream(K, len));
    }
    if (name == "roottower") {
        const int len = l.contains("length") ? io::parse_int(l.at("length"), "$.limit.length", 2, 16) : stages + 3;
        return std::make_shared<const LimitValuation<G>>(root_tower_stream(K, len));
    }
    schema_error("$.limit.builtin", "unknown builtin '" + name + "'");
}

template <class G>
AmbientValuation<G> parse_ambient(const G &K, const json &doc)
{
    if (doc.contains("pair")) {
        const json &p = doc.at("pair");
        const OrderedValue g = io::parse_value(member(p, "gamma", "$.pair"), "$.pair.gamma");
        if (!g.is_finite()) schema_error("$.pair.gamma", "expected a finite value");
        return AmbientValuation<G>(PairOfDefinition<G>(io::parse_alg(K, member(p, "a", "$.pair"), "$.pair.a"), g));
    }
    if (doc.contains("limit")) return AmbientValuation<G>(parse_limit(K, doc));
    schema_error("$", "needs a valuation: \"pair\" or \"limit\"");
}

json cert_json(const StabilityCertificate &c)
{
    return {{"stage", c.stage}, {"value", c.value.str()}, {"bound", c.bound.str()}, {"gamma", c.gamma.str()}};
}

template <class G>
json stages_json(const std::vector<StageData<G>> &st)
{
    json a = json::array();
    for (std::size_t i = 0; i < st.size(); ++i) {
        const auto &s = st[i];
        a.push_back({{"stage", i + 1},
                     {"a", io::alg_to_json(s.a)},
                     {"gamma", s.gamma.str()},
                     {"q", io::poly_to_json(s.q)},
                     {"e", s.inv.e},
                     {"f", s.inv.f},
                     {"mu", s.mu},
                     {"d", io::alg_brief(s.d)},
                     {"delta", s.delta.str()},
                     {"dominance_by_sum", s.dominance_by_sum}});
    }
    return a;
}

template <class G>
json run_field(const G &K, const std::string &cmd, const json &doc)
{
    if (cmd == "eval") {
        const auto v = parse_ambient(K, doc);
        const auto f = io::parse_function(K, member(doc, "poly", "$"), "$.poly");
        json out = {{"value", v.value(f).str()}};
        if (!v.by_pair() && f.den.degree() == 0 && !f.num.is_zero()) out["certificate"] = cert_json(v.limit().certificate(f.num));
        return out;
    }
    if (cmd == "delta") {
        const auto v = parse_ambient(K, doc);
        const auto r = delta(io::parse_poly(K, member(doc, "poly", "$"), "$.poly"), v);
        return {{"delta", r.delta.str()}, {"center", r.center ? io::alg_brief(*r.center) : json(nullptr)}};
    }
    if (cmd == "keycheck") {
        const auto v = parse_ambient(K, doc);
        const char *field = doc.contains("key") ? "key" : "poly";
        const auto q = io::parse_poly(K, member(doc, field, "$"), std::string("$.") + field);
        const auto k = is_key_poly(q, v);
        return {{"key", k.key},
                {"delta", k.delta.str()},
                {"witness", k.witness ? io::poly_to_json(*k.witness) : json(nullptr)},
                {"witness_root", k.witness_root ? io::alg_brief(*k.witness_root) : json(nullptr)}};
    }
    if (cmd == "vq") {
        const auto v = parse_ambient(K, doc);
        const auto q = io::parse_poly(K, member(doc, "key", "$"), "$.key");
        const auto f = io::parse_function(K, member(doc, "poly", "$"), "$.poly");
        return {{"value", vq(q, f, v).str()}};
    }
    if (cmd == "pcs") {
        json out = json::object();
        if (doc.contains("prefix")) {
            const json &p = doc.at("prefix");
            if (!p.is_array()) schema_error("$.prefix", "expected an array of elements");
            std::vector<AlgElem<G>> zs;
            for (std::size_t i = 0; i < p.size(); ++i) zs.push_back(io::parse_alg(K, p[i], "$.prefix[" + std::to_string(i) + "]"));
            out["is_pcs"] = is_pcs(zs);
            json g = json::array();
            for (std::size_t i = 0; i + 1 < zs.size(); ++i) g.push_back(dist(zs[i], zs[i + 1]).str());
            out["gammas"] = g;
        }
        if (doc.contains("limit") && doc.contains("poly")) {
            const auto L = parse_limit(K, doc);
            const auto f = io::parse_poly(K, doc.at("poly"), "$.poly");
            const auto c = classify_prefix(L->pcs(), f, L->pcs().max_stage());
            out["verdict"] = c.verdict == PrefixVerdict::Stabilized ? "Stabilized" : "IncreasingSoFar";
            out["certificate"] = c.certificate ? cert_json(*c.certificate) : json(nullptr);
        }
        if (out.empty()) schema_error("$", "pcs needs a \"prefix\", or a \"limit\" with a \"poly\"");
        return out;
    }
    if (cmd == "construct") {
        const auto L = parse_limit(K, doc);
        const auto st = construct_stages(*L, stages_of(doc, 2));
        json g = json::array(), chain = json::array();
        for (const auto &s : st) g.push_back(s.gamma.str());
        const auto inv = invariants_union_stage(st);
        for (const auto &i : inv.stages) chain.push_back({i.e, i.f});
        return {{"stages", stages_json(st)},
                {"gamma", g},
                {"invariants", {{"chain", chain}, {"divisible", inv.divisible}}},
                {"contract", "cofinality of the stream's distances is assumed, not verified"}};
    }
    if (cmd == "cskp") {
        const auto L = parse_limit(K, doc);
        const auto f = io::parse_poly(K, member(doc, "poly", "$"), "$.poly");
        const auto r = complete_seq_check(L, f, stages_of(doc, 3));
        json d = json::array();
        for (const auto &x : r.deltas) d.push_back(x.str());
        return {{"stage", r.stage}, {"value", r.value.str()}, {"deltas", d}, {"keys", r.keys}, {"increasing", r.increasing},
                {"certificate", cert_json(L->certificate(f))}};
    }
    if (cmd == "icf") {
        const auto L = parse_limit(K, doc);
        const auto st = construct_stages(*L, stages_of(doc, 2));
        const auto r = icf_sandwich(st);
        json lo = json::array(), up = json::array(), ram = json::array();
        for (const auto &a : r.lower) lo.push_back(io::alg_brief(a));
        for (const auto &a : r.upper) up.push_back(io::alg_brief(a));
        for (std::size_t i = 0; i < r.ram.size(); ++i) {
            const auto &x = r.ram[i];
            ram.push_back({{"stage", i + 1}, {"e", x.e}, {"f_res", x.f_res}, {"e_tame", x.e_tame}, {"wild", x.wild}});
        }
        return {{"lower_gens", lo},
                {"upper_gens", up},
                {"ram", ram},
                {"collapsed", r.collapsed},
                {"note", "bounds only; tightness is not claimed, and collapse is evidence rather than a proof"}};
    }
    fail(ErrorCode::InvalidInput, "unknown command '" + cmd + "'");
}

json run_scene(const std::string &cmd, const json &doc)
{
    const json &f = member(doc, "field", "$");
    const json &kind = member(f, "kind", "$.field");
    if (kind == "padic") return run_field(PAdicRationals(static_cast<std::uint64_t>(io::parse_int(member(f, "p", "$.field"), "$.field.p", 2, 1 << 30))), cmd, doc);
    if (kind == "tadic") {
        const json &c = member(f, "coeff", "$.field");
        if (!c.is_string()) schema_error("$.field.coeff", "expected \"Q\" or \"F<p>\"");
        const std::string s = c.get<std::string>();
        if (s == "Q") return run_field(TAdicRationals(Rationals{}), cmd, doc);
        if (s.size() > 1 && s[0] == 'F') return run_field(TAdicPrime(PrimeField(static_cast<std::uint64_t>(io::parse_int(json(s.substr(1)), "$.field.coeff", 2, 1 << 30)))), cmd, doc);
        schema_error("$.field.coeff", "expected \"Q\" or \"F<p>\", got '" + s + "'");
    }
    schema_error("$.field.kind", "expected \"padic\" or \"tadic\"");
}

/// Lossy rendering for terminals: one "path: value" line per leaf.
void render_text(const json &j, const std::string &path, std::ostream &os)
{
    if (j.is_object()) {
        for (const auto &[k, v] : j.items()) render_text(v, path.empty() ? k : path + "." + k, os);
    } else if (j.is_array() && !j.empty() && (j.front().is_structured())) {
        for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], path + "[" + std::to_string(i) + "]", os);
    } else {
        os << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

void emit(const json &out, bool text)
{
    if (!text) {
        std::cout << out.dump(2) << "\n";
        return;
    }
    std::cout << "# text rendering (lossy; use JSON for exact data)\n";
    render_text(out, "", std::cout);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"valk: exact valuations on K(X)"};
    app.require_subcommand(1);
    Options o;

    auto scene_opts = [&](CLI::App *c) {
        c->add_option("--scene", o.scene, "scene JSON file");
        c->add_option("--field", o.field, "field descriptor JSON");
        c->add_option("--pair", o.pair, "pair of definition JSON {\"a\":..,\"gamma\":..}");
        c->add_option("--limit", o.limit, "limit descriptor JSON");
        c->add_option("--poly", o.poly, "polynomial (ascending coefficients) or {\"num\",\"den\"}");
        c->add_option("--stages", o.stages, "number of stages")->check(CLI::Range(1, 12));
        c->add_flag("--text", o.text, "human-readable (lossy) output");
    };
    const std::pair<const char *, const char *> cmds[] = {
        {"eval", "value of a polynomial or rational function"},
        {"delta", "delta(f): the largest v(X - z) over roots z of f"},
        {"keycheck", "key polynomial predicate with witness"},
        {"vq", "truncation valuation v_Q f"},
        {"pcs", "pseudo-Cauchy prefix checks and stabilization certificates"},
        {"construct", "stage-wise key polynomial construction for a limit"},
        {"cskp", "complete key polynomial sequence check"},
        {"icf", "implicit constant field sandwich"},
    };
    for (const auto &[name, help] : cmds) {
        auto *c = app.add_subcommand(name, help);
        scene_opts(c);
        if (std::string(name) == "keycheck" || std::string(name) == "vq") c->add_option("--key", o.key, "key polynomial Q");
        if (std::string(name) == "pcs") c->add_option("--prefix", o.prefix, "array of elements");
    }
    auto *ver = app.add_subcommand("verify", "run a property suite");
    ver->add_option("--suite", o.suite, "suite name")->required();
    ver->add_option("--samples", o.samples, "number of samples");
    ver->add_option("--seed", o.seed, "random seed");
    ver->add_flag("--text", o.text, "human-readable (lossy) output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "verify") {
            const auto r = verify::run(o.suite, o.samples, o.seed);
            emit(r.to_json(), o.text);
            return r.failed == 0 ? 0 : 1;
        }
        const json doc = load_scene(o);
        if (doc.contains("precision_cap") && !std::getenv("VALK_PRECISION_CAP")) {
            const Rational cap = io::parse_rational_json(doc.at("precision_cap"), "$.precision_cap");
            if (cap <= 0) schema_error("$.precision_cap", "must be positive");
            setenv("VALK_PRECISION_CAP", to_string(cap).c_str(), 1);
        }
        emit(run_scene(cmd, doc), o.text);
        return 0;
    } catch (const Error &e) {
        std::cerr << json{{"error", error_name(e.code())}, {"message", e.what()}}.dump() << "\n";
        return e.is_resource_limit() ? 2 : 1;
    } catch (const json::exception &e) {
        std::cerr << json{{"error", "SchemaError"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
}
