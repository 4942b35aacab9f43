#include "spec.hpp"

#include <map>
#include <set>

#include "json.hpp"

namespace linf::cli {

using json = nlohmann::ordered_json;

namespace {

GradedSpace space_of(const DglaSpec& s) { return GradedSpace(s.basis); }

LinearMap linear_from(const GradedSpace& L, const std::vector<LinearEntry>& entries, int degree) {
    LinearMap m(L, L, degree);
    for (const auto& e : entries) m.add_entry(L.index_of(e.from), L.index_of(e.to), e.coefficient);
    return m;
}

class Reader {
public:
    std::vector<SpecError> errors;

    void error(std::string where, std::string message) { errors.push_back({std::move(where), std::move(message)}); }

    std::optional<Scalar> rational(const json& j, const std::string& where) {
        if (!j.is_string()) {
            error(where, "coefficient must be a \"p/q\" string");
            return std::nullopt;
        }
        try {
            return parse_scalar(j.get<std::string>());
        } catch (const std::exception& e) {
            error(where, std::string("not a rational: ") + e.what());
            return std::nullopt;
        }
    }

    std::optional<std::string> name(const json& j, const std::string& where, const std::map<std::string, int>& degrees) {
        if (!j.is_string()) {
            error(where, "expected a basis name");
            return std::nullopt;
        }
        auto s = j.get<std::string>();
        if (!degrees.count(s)) {
            error(where, "unknown basis name '" + s + "'");
            return std::nullopt;
        }
        return s;
    }

    std::optional<LinearEntry> linear(const json& j, const std::string& where, const std::map<std::string, int>& deg,
                                      int shift) {
        if (!j.is_object()) {
            error(where, "expected an object with from, to, coefficient");
            return std::nullopt;
        }
        auto from = name(j.value("from", json()), where + ".from", deg);
        auto to = name(j.value("to", json()), where + ".to", deg);
        auto c = rational(j.value("coefficient", json()), where + ".coefficient");
        if (!from || !to || !c) return std::nullopt;
        if (deg.at(*to) != deg.at(*from) + shift) {
            error(where, "degree mismatch: " + *from + " has degree " + std::to_string(deg.at(*from)) + ", " + *to +
                             " has degree " + std::to_string(deg.at(*to)) + ", map degree is " + std::to_string(shift));
            return std::nullopt;
        }
        return LinearEntry{*from, *to, *c};
    }
};

}  // namespace

DGLA DglaSpec::dgla() const {
    GradedSpace L = space_of(*this);
    DGLA A{L, linear_from(L, d, 1), MultiMap(L, L, 2, 0, Flavor::Antisymmetric)};
    for (const auto& e : bracket)
        A.bracket.add({L.index_of(e.i), L.index_of(e.j)}, unit(L.index_of(e.target)), e.coefficient);
    return A;
}

std::optional<LinearMap> DglaSpec::given_eta() const {
    if (!eta) return std::nullopt;
    return linear_from(space_of(*this), *eta, -1);
}

NormModel DglaSpec::model() const {
    GradedSpace L = space_of(*this);
    if (!norm) return NormModel::unit(L);
    if (norm->mode == "scaled") return NormModel::scaled(L, norm->weights, norm->exponents);
    return NormModel::banach(L, norm->weights);
}

ParseResult parse_spec(std::string_view text) {
    ParseResult out;
    Reader r;
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        out.errors.push_back({"byte " + std::to_string(e.byte), std::string("malformed JSON: ") + e.what()});
        return out;
    }
    if (!j.is_object()) {
        out.errors.push_back({"$", "top level must be an object"});
        return out;
    }
    DglaSpec s;
    std::map<std::string, int> deg;
    if (!j.contains("basis") || !j["basis"].is_array()) {
        r.error("basis", "missing basis array");
    } else {
        for (size_t i = 0; i < j["basis"].size(); ++i) {
            const auto& b = j["basis"][i];
            std::string where = "basis[" + std::to_string(i) + "]";
            if (!b.is_object() || !b.contains("name") || !b["name"].is_string() || !b.contains("degree") ||
                !b["degree"].is_number_integer()) {
                r.error(where, "expected {\"name\": string, \"degree\": integer}");
                continue;
            }
            auto n = b["name"].get<std::string>();
            if (n.empty() || deg.count(n)) {
                r.error(where + ".name", n.empty() ? "empty name" : "duplicate name '" + n + "'");
                continue;
            }
            deg[n] = b["degree"].get<int>();
            s.basis.push_back({n, deg[n]});
        }
    }
    auto array_at = [&](const char* key) -> const json* {
        if (!j.contains(key)) return nullptr;
        if (!j[key].is_array()) {
            r.error(key, "expected an array");
            return nullptr;
        }
        return &j[key];
    };
    if (const json* a = array_at("d"))
        for (size_t i = 0; i < a->size(); ++i)
            if (auto e = r.linear((*a)[i], "d[" + std::to_string(i) + "]", deg, 1)) s.d.push_back(*e);
    if (const json* a = array_at("bracket"))
        for (size_t i = 0; i < a->size(); ++i) {
            const auto& b = (*a)[i];
            std::string where = "bracket[" + std::to_string(i) + "]";
            if (!b.is_object()) {
                r.error(where, "expected an object with i, j, target, coefficient");
                continue;
            }
            auto x = r.name(b.value("i", json()), where + ".i", deg);
            auto y = r.name(b.value("j", json()), where + ".j", deg);
            auto t = r.name(b.value("target", json()), where + ".target", deg);
            auto c = r.rational(b.value("coefficient", json()), where + ".coefficient");
            if (!x || !y || !t || !c) continue;
            if (deg[*t] != deg[*x] + deg[*y]) {
                r.error(where, "degree mismatch: [" + *x + "," + *y + "] has degree " +
                                   std::to_string(deg[*x] + deg[*y]) + ", " + *t + " has degree " +
                                   std::to_string(deg[*t]));
                continue;
            }
            if (*x == *y && odd(deg[*x] + 1)) {
                r.error(where, "[" + *x + "," + *x + "] vanishes by antisymmetry for even degree");
                continue;
            }
            s.bracket.push_back({*x, *y, *t, *c});
        }
    if (j.contains("eta")) {
        s.eta.emplace();
        if (const json* a = array_at("eta"))
            for (size_t i = 0; i < a->size(); ++i)
                if (auto e = r.linear((*a)[i], "eta[" + std::to_string(i) + "]", deg, -1)) s.eta->push_back(*e);
    }
    if (j.contains("norm")) {
        const auto& n = j["norm"];
        NormSpec ns;
        if (!n.is_object()) {
            r.error("norm", "expected an object");
        } else {
            ns.mode = n.value("mode", std::string("banach"));
            if (ns.mode != "banach" && ns.mode != "scaled") r.error("norm.mode", "mode must be banach or scaled");
            if (n.contains("weights")) {
                if (!n["weights"].is_array() || n["weights"].size() != s.basis.size()) {
                    r.error("norm.weights", "need one weight per basis element");
                } else {
                    for (size_t i = 0; i < n["weights"].size(); ++i) {
                        auto w = r.rational(n["weights"][i], "norm.weights[" + std::to_string(i) + "]");
                        if (w && *w <= 0) r.error("norm.weights[" + std::to_string(i) + "]", "weight must be positive");
                        ns.weights.push_back(w.value_or(1));
                    }
                }
            } else {
                ns.weights.assign(s.basis.size(), Scalar(1));
            }
            if (n.contains("exponents")) {
                if (!n["exponents"].is_array() || n["exponents"].size() != s.basis.size()) {
                    r.error("norm.exponents", "need one exponent per basis element");
                } else {
                    for (size_t i = 0; i < n["exponents"].size(); ++i) {
                        const auto& e = n["exponents"][i];
                        if (!e.is_number_integer() || e.get<int>() < 0) {
                            r.error("norm.exponents[" + std::to_string(i) + "]", "exponent must be a nonnegative integer");
                            ns.exponents.push_back(0);
                        } else {
                            ns.exponents.push_back(e.get<int>());
                        }
                    }
                }
            } else if (ns.mode == "scaled") {
                ns.exponents.assign(s.basis.size(), 0);
            }
            if (n.contains("eps")) {
                auto e = r.rational(n["eps"], "norm.eps");
                if (e && (*e <= 0 || *e >= 1)) r.error("norm.eps", "eps must lie in (0,1)");
                if (e) ns.eps = *e;
            }
        }
        s.norm = ns;
    }
    if (j.contains("options")) {
        const auto& o = j["options"];
        if (!o.is_object()) {
            r.error("options", "expected an object");
        } else {
            if (o.contains("cap")) {
                if (!o["cap"].is_number_integer() || o["cap"].get<int>() < 1 || o["cap"].get<int>() > kMaxCap)
                    r.error("options.cap", "cap must be an integer in 1.." + std::to_string(kMaxCap));
                else
                    s.cap = o["cap"].get<int>();
            }
            if (o.contains("probe_normalization")) {
                if (!o["probe_normalization"].is_boolean())
                    r.error("options.probe_normalization", "expected a boolean");
                else
                    s.probe_normalization = o["probe_normalization"].get<bool>();
            }
        }
    }
    if (!r.errors.empty()) {
        out.errors = std::move(r.errors);
        return out;
    }
    DGLA L = s.dgla();
    auto v = validate_dgla(L);
    for (const auto& x : v.violations) {
        std::string w;
        for (int i : x.witness) w += (w.empty() ? "" : ",") + L.space.name(i);
        out.errors.push_back({"dgla", x.axiom + " (witness " + w + "): " + x.detail});
    }
    if (v.valid) out.spec = std::move(s);
    return out;
}

std::string serialize_spec(const DglaSpec& s) {
    json j;
    j["basis"] = json::array();
    for (const auto& b : s.basis) j["basis"].push_back({{"name", b.name}, {"degree", b.degree}});
    auto linear = [](const std::vector<LinearEntry>& es) {
        json a = json::array();
        for (const auto& e : es) a.push_back({{"from", e.from}, {"to", e.to}, {"coefficient", format_scalar(e.coefficient)}});
        return a;
    };
    j["d"] = linear(s.d);
    j["bracket"] = json::array();
    for (const auto& e : s.bracket)
        j["bracket"].push_back(
            {{"i", e.i}, {"j", e.j}, {"target", e.target}, {"coefficient", format_scalar(e.coefficient)}});
    if (s.eta) j["eta"] = linear(*s.eta);
    if (s.norm) {
        json n;
        n["mode"] = s.norm->mode;
        n["weights"] = json::array();
        for (const auto& w : s.norm->weights) n["weights"].push_back(format_scalar(w));
        if (!s.norm->exponents.empty()) n["exponents"] = s.norm->exponents;
        n["eps"] = format_scalar(s.norm->eps);
        j["norm"] = n;
    }
    j["options"] = {{"cap", s.cap}, {"probe_normalization", s.probe_normalization}};
    return j.dump(2) + "\n";
}

}  // namespace linf::cli
