#include "commands.hpp"

#include <chrono>
#include <sstream>

#include "json.hpp"
#include "linf/palamodov.hpp"
#include "linf/transfer.hpp"
#include "linf/trees.hpp"

namespace linf::cli {

using json = nlohmann::ordered_json;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json space_json(const GradedSpace& s) {
    json a = json::array();
    for (const auto& b : s.basis()) a.push_back({{"name", b.name}, {"degree", b.degree}});
    return a;
}

json vec_json(const Vec& v, const GradedSpace& s) {
    json a = json::array();
    for (const auto& [i, c] : v) a.push_back({{"basis", s.name(i)}, {"coefficient", format_scalar(c)}});
    return a;
}

json entries_json(const MultiMap& m) {
    json a = json::array();
    for (const auto& [k, v] : m.coeffs()) {
        json args = json::array();
        for (int i : k) args.push_back(m.source().name(i));
        for (const auto& [t, c] : v)
            a.push_back({{"args", args}, {"target", m.target().name(t)}, {"coefficient", format_scalar(c)}});
    }
    return a;
}

json linear_json(const LinearMap& m) {
    json a = json::array();
    for (int i = 0; i < m.source().dim(); ++i)
        for (const auto& [t, c] : m.column(i))
            a.push_back({{"from", m.source().name(i)}, {"to", m.target().name(t)}, {"coefficient", format_scalar(c)}});
    return a;
}

json components_json(const std::vector<MultiMap>& comps) {
    json o = json::array();
    for (size_t n = 0; n < comps.size(); ++n) o.push_back({{"arity", n + 1}, {"entries", entries_json(comps[n])}});
    return o;
}

json verdict_json(const Verdict& v) {
    auto summary = [](const std::vector<ArityResidual>& rs) {
        json a = json::array();
        for (const auto& r : rs) {
            json x = {{"arity", r.arity}, {"nonzero", r.nonzero()}};
            if (r.nonzero()) {
                json e = entries_json(r.residual);
                x["witness"] = e.empty() ? json() : e[0];
            }
            a.push_back(x);
        }
        return a;
    };
    json j = {{"status", v.pass ? "PASS" : "FAILED"}, {"routes_agree", v.routes_agree}, {"arities", summary(v.arities)}};
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

int resolve_cap(const Options& opt, const DglaSpec& s, std::string& warnings) {
    int cap = opt.cap.value_or(s.cap);
    if (cap < 1 || cap > kMaxCap) throw InputError("cap must be in 1.." + std::to_string(kMaxCap));
    if (cap > 4) {
        Scalar terms = factorial(cap) * static_cast<long>(enumerate_ot(cap).size());
        warnings += "warning: cap " + std::to_string(cap) + " sums about " + terms.get_str() +
                    " tree terms at the top arity\n";
    }
    return cap;
}

struct ResolvedSplitting {
    Splitting eta;
    std::string source;  // given | normalized | built
};

ResolvedSplitting resolve_splitting(const DglaSpec& s, const DGLA& L) {
    auto given = s.given_eta();
    if (!given) return {build_splitting(L), "built"};
    auto c = check_splitting(L, *given);
    if (!c.d_eta_d) throw InputError("eta: d eta d != d");
    if (c.ok()) return {Splitting{*given}, "given"};
    return {normalize_splitting(L, *given), "normalized"};
}

json splitting_json(const ResolvedSplitting& r, const HodgeData& h) {
    json H = json::array(), F = json::array();
    for (int i = 0; i < h.H.dim(); ++i)
        H.push_back({{"name", h.H.name(i)}, {"degree", h.H.degree(i)}, {"vector", vec_json(h.H_basis[i], h.incl_H.target())}});
    for (int i = 0; i < h.F.dim(); ++i)
        F.push_back({{"name", h.F.name(i)}, {"degree", h.F.degree(i)}, {"vector", vec_json(h.F_basis[i], h.incl_F.target())}});
    return {{"source", r.source}, {"eta", linear_json(r.eta.eta)}, {"H", H}, {"F", F}};
}

struct Attempt {
    Reading reading;
    LInftyAlgebra mu;
    LInftyMorphism f, g;
    Verdict jacobi, f_check, g_check;
    bool pass() const { return jacobi.pass && f_check.pass && g_check.pass; }
};

Attempt attempt(const DGLA& L, const Splitting& eta, int cap, Reading r) {
    Attempt a{r, transfer_mu(L, eta, cap, r), transfer_f(L, eta, cap, r), embed_g(L, eta, cap, r), {}, {}, {}};
    a.jacobi = jacobi_check(a.mu);
    a.f_check = morphism_check(a.f);
    a.g_check = morphism_check(a.g);
    return a;
}

// Readings tried in order; the chosen index is the first passing one, or the last tried.
std::vector<Attempt> select_reading(const DGLA& L, const Splitting& eta, int cap, bool probe, size_t& chosen) {
    std::vector<Reading> order = probe ? Reading::probe_order() : std::vector<Reading>{Reading{}};
    std::vector<Attempt> out;
    for (const auto& r : order) {
        out.push_back(attempt(L, eta, cap, r));
        if (out.back().pass()) break;
    }
    chosen = out.size() - 1;
    return out;
}

json attempts_json(const std::vector<Attempt>& as) {
    json a = json::array();
    for (const auto& x : as)
        a.push_back({{"reading", x.reading.name()},
                     {"status", x.pass() ? "PASS" : "FAILED"},
                     {"jacobi", verdict_json(x.jacobi)},
                     {"f_morphism", verdict_json(x.f_check)},
                     {"g_morphism", verdict_json(x.g_check)}});
    return a;
}

json cmd_check(const DglaSpec& s, const DGLA& L, bool& pass) {
    auto r = resolve_splitting(s, L);
    HodgeData h = hodge(L, r.eta);
    auto c = check_splitting(L, r.eta.eta);
    pass = c.ok();
    json j;
    j["status"] = pass ? "PASS" : "FAILED";
    j["normalization"] = Reading{}.name();
    j["space"] = space_json(L.space);
    j["dgla"] = {{"status", "PASS"}, {"violations", json::array()}};
    j["splitting_identities"] = {{"d_eta_d", c.d_eta_d}, {"eta_squared_zero", c.eta_sq}, {"eta_d_eta", c.eta_d_eta}};
    j["splitting"] = splitting_json(r, h);
    return j;
}

json cmd_transfer(const DglaSpec& s, const DGLA& L, int cap, bool probe, bool& pass) {
    auto r = resolve_splitting(s, L);
    HodgeData h = hodge(L, r.eta);
    size_t chosen = 0;
    auto as = select_reading(L, r.eta, cap, probe, chosen);
    const Attempt& a = as[chosen];
    auto rec = transfer_recursive(L, r.eta, cap);
    json oracle = json::array();
    bool agree = true;
    for (int n = 2; n <= cap; ++n) {
        bool eq = a.mu.at(n) == rec.mu.at(n) && a.f.at(n) == rec.f.at(n);
        agree = agree && eq;
        oracle.push_back({{"arity", n}, {"agrees", eq}});
    }
    pass = a.pass() && agree;
    json j;
    j["status"] = pass ? "PASS" : "FAILED";
    j["normalization"] = a.reading.name();
    j["cap"] = cap;
    j["splitting"] = splitting_json(r, h);
    j["attempts"] = attempts_json(as);
    j["oracle"] = {{"status", agree ? "PASS" : "FAILED"}, {"arities", oracle}};
    json trees = json::array();
    for (int n = 2; n <= cap; ++n)
        for (const auto& t : enumerate_ot(n)) trees.push_back({{"leaves", n}, {"tree", t.str()}, {"e", e_sign(t)}});
    j["trees"] = trees;
    j["mu"] = components_json(a.mu.mu);
    j["f"] = components_json(a.f.f);
    j["g"] = components_json(a.g.f);
    return j;
}

json cmd_invert(const DglaSpec& s, const DGLA& L, int cap, bool probe, bool& pass) {
    auto r = resolve_splitting(s, L);
    HodgeData h = hodge(L, r.eta);
    size_t chosen = 0;
    auto as = select_reading(L, r.eta, cap, probe, chosen);
    Reading reading = as[chosen].reading;
    Decomposition d = decompose(L, r.eta, cap, reading);
    bool a = is_identity(compose(d.iso, d.inverse));
    bool b = is_identity(compose(d.inverse, d.iso));
    pass = as[chosen].pass() && a && b;
    json j;
    j["status"] = pass ? "PASS" : "FAILED";
    j["normalization"] = reading.name();
    j["cap"] = cap;
    j["splitting"] = splitting_json(r, h);
    j["attempts"] = attempts_json(as);
    j["round_trip"] = {{"iso_after_inverse", a ? "PASS" : "FAILED"}, {"inverse_after_iso", b ? "PASS" : "FAILED"}};
    Verdict m = morphism_check(d.iso);
    j["iso_morphism"] = verdict_json(m);
    if (!m.pass)
        j["warnings"] = json::array({"f+g does not satisfy the morphism equations for the plain direct sum "
                                     "(H,mu)+(F,d); mixed brackets [H,F] are nonzero"});
    j["target"] = space_json(d.inverse.target.space);
    j["inverse"] = components_json(d.inverse.f);
    return j;
}

std::vector<Scalar> parse_point(const std::string& text) {
    std::vector<Scalar> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(parse_scalar(item));
        } catch (const std::exception& e) {
            throw InputError(std::string("--point: ") + e.what());
        }
    }
    return out;
}

json cmd_kuranishi(const DglaSpec& s, const DGLA& L, int cap, bool probe, const std::string& point, bool& pass) {
    auto r = resolve_splitting(s, L);
    HodgeData h = hodge(L, r.eta);
    std::vector<int> h1;
    for (int i = 0; i < h.H.dim(); ++i)
        if (h.H.degree(i) == 1) h1.push_back(i);
    auto coords = parse_point(point);
    if (coords.size() != h1.size())
        throw InputError("--point needs " + std::to_string(h1.size()) + " coordinates (dim H^1), got " +
                         std::to_string(coords.size()));
    Vec x;
    for (size_t i = 0; i < h1.size(); ++i)
        if (coords[i] != 0) x[h1[i]] = coords[i];
    size_t chosen = 0;
    auto as = select_reading(L, r.eta, cap, probe, chosen);
    const Attempt& a = as[chosen];
    Vec shifted = kuranishi_shifted(a.mu, x, cap);
    Vec lifted;
    for (const auto& o : lift_obstructions(L, r.eta, x, cap)) axpy(lifted, 1, o);
    bool lift_agrees = shifted == lifted;
    pass = a.jacobi.pass && lift_agrees;
    json j;
    j["status"] = pass ? "PASS" : "FAILED";
    j["normalization"] = a.reading.name();
    j["cap"] = cap;
    j["label"] = "Kuranishi map: sum over n of mu_n(x,...,x)/n! on H^1";
    j["splitting"] = splitting_json(r, h);
    j["jacobi"] = verdict_json(a.jacobi);
    j["point"] = vec_json(x, h.H);
    j["value"] = vec_json(kuranishi(a.mu, x, cap), h.H);
    j["shifted_value"] = vec_json(shifted, h.H);
    j["lift_obstruction"] = vec_json(lifted, h.H);
    j["lift_agrees"] = lift_agrees;
    return j;
}

json cmd_bounds(const DglaSpec& s, const DGLA& L, int cap, const std::optional<std::string>& eps_text, bool& pass) {
    auto r = resolve_splitting(s, L);
    HodgeData h = hodge(L, r.eta);
    NormModel M = s.model();
    Scalar eps = s.norm ? s.norm->eps : Scalar(1, 2);
    if (eps_text) {
        try {
            eps = parse_scalar(*eps_text);
        } catch (const std::exception& e) {
            throw InputError(std::string("--eps: ") + e.what());
        }
    }
    if (eps <= 0 || eps >= 1) throw InputError("--eps must lie in (0,1)");
    if (cap < 2) throw InputError("bounds needs cap >= 2");
    auto as_ = Reading{};
    LInftyAlgebra mu = transfer_mu(L, r.eta, cap, as_);
    Scalar c = op_norm0(r.eta.eta, M, M, eps);
    Scalar k = op_norm1(L.bracket, M, eps);
    Scalar kappa = op_norm0(restrict_degrees(L.bracket, 1), M, eps);
    Scalar P = op_norm0(h.projector_H, M, M, eps);
    json j;
    j["status"] = "PASS";
    j["normalization"] = as_.name();
    j["cap"] = cap;
    j["eps"] = format_scalar(eps);
    j["mode"] = M.mode == NormMode::Banach ? "banach" : "scaled";
    j["constants"] = {{"c", format_scalar(c)},
                      {"k", format_scalar(k)},
                      {"kappa", format_scalar(kappa)},
                      {"projector", format_scalar(P)}};
    pass = true;
    json rows = json::array();
    bool banach = M.mode == NormMode::Banach;
    std::vector<Vec> ball;
    if (banach) ball = subspace_ball(M, h.incl_H);
    Scalar window = 1;
    for (int n = 2; n <= cap; ++n) {
        window *= eps;
        MuBound b = mu_bounds(c, k, kappa, n);
        MuBound bp = mu_bounds(c, k, kappa, n, P);
        json row = {{"n", n},
                    {"bound1", format_scalar(b.bound1)},
                    {"bound0", format_scalar(b.bound0)},
                    {"bound1_with_projector", format_scalar(bp.bound1)},
                    {"bound0_with_projector", format_scalar(bp.bound0)}};
        if (banach) {
            // multilinear norms bound the diagonal ones from above; polarization points give a lower estimate
            Scalar up1 = window * op_norm0_subspace(mu.at(n), ball, h.incl_H, M);
            Scalar lo1 = window * diagonal_norm0_subspace_lower(mu.at(n), ball, h.incl_H, M);
            MultiMap pos = restrict_degrees(mu.at(n), 1);
            Scalar up0 = op_norm0_subspace(pos, ball, h.incl_H, M);
            Scalar lo0 = diagonal_norm0_subspace_lower(pos, ball, h.incl_H, M);
            auto verdict = [](const Scalar& up, const Scalar& lo, const Scalar& bound) {
                if (up <= bound) return "holds";
                if (lo > bound) return "violated";
                return "undetermined";
            };
            std::string v1 = verdict(up1, lo1, b.bound1), v0 = verdict(up0, lo0, b.bound0);
            std::string w1 = verdict(up1, lo1, bp.bound1), w0 = verdict(up0, lo0, bp.bound0);
            row["measured1_upper"] = format_scalar(up1);
            row["measured1_lower"] = format_scalar(lo1);
            row["measured0_upper"] = format_scalar(up0);
            row["measured0_lower"] = format_scalar(lo0);
            row["margin1"] = format_scalar(b.bound1 - up1);
            row["margin0"] = format_scalar(b.bound0 - up0);
            row["bound1_verdict"] = v1;
            row["bound0_verdict"] = v0;
            row["bound1_with_projector_verdict"] = w1;
            row["bound0_with_projector_verdict"] = w0;
            if (v1 != "holds" || v0 != "holds") pass = false;
        }
        rows.push_back(row);
    }
    j["mu_bounds"] = rows;
    if (!banach) {
        j["note"] = "measured norms on H need a Banach model; only the bounds are reported";
    } else {
        // majorant certificate for the inverse of f+g: (H+F) -> L, with the norm pulled back along f_1+g_1
        Decomposition d = decompose(L, r.eta, cap);
        Certificate cert = certify_inverse(d.iso, d.inverse, M, cap);
        json pred = json::array(), meas = json::array(), marg = json::array();
        for (const auto& x : cert.predicted) pred.push_back(format_scalar(x));
        for (const auto& x : cert.measured) meas.push_back(format_scalar(x));
        for (const auto& x : cert.margins) marg.push_back(format_scalar(x));
        j["certificate"] = {{"certified", cert.certified},
                            {"C", format_scalar(cert.C)},
                            {"R", format_scalar(cert.R)},
                            {"C_inv", format_scalar(cert.C_inv)},
                            {"R_inv", format_scalar(cert.R_inv)},
                            {"predicted", pred},
                            {"measured", meas},
                            {"margins", marg},
                            {"revalidated", cert.revalidated}};
        if (!cert.note.empty()) j["certificate"]["note"] = cert.note;
        if (!cert.certified || !cert.revalidated) pass = false;
    }
    j["status"] = pass ? "PASS" : "FAILED";
    return j;
}

void render_text(const json& j, const std::string& indent, std::string& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = j.is_object() ? it.key() : "-";
        const json& v = *it;
        if (v.is_structured() && !v.empty()) {
            out += indent + key + ":\n";
            render_text(v, indent + "  ", out);
        } else if (v.is_string()) {
            out += indent + key + ": " + v.get<std::string>() + "\n";
        } else {
            out += indent + key + ": " + v.dump() + "\n";
        }
    }
}

}  // namespace

Outcome run(const Options& opt, const std::string& spec_text) {
    Outcome o;
    auto parsed = parse_spec(spec_text);
    if (!parsed.ok()) {
        o.exit_code = 2;
        for (const auto& e : parsed.errors) o.err += opt.spec_path + ": " + e.where + ": " + e.message + "\n";
        return o;
    }
    const DglaSpec& s = *parsed.spec;
    auto t0 = std::chrono::steady_clock::now();
    json report;
    report["command"] = {{"name", opt.command}, {"spec", opt.spec_path}};
    bool pass = true;
    try {
        DGLA L = s.dgla();
        int cap = resolve_cap(opt, s, o.err);
        bool probe = opt.probe_normalization || s.probe_normalization;
        report["command"]["cap"] = cap;
        report["command"]["probe_normalization"] = probe;
        json body;
        if (opt.command == "check")
            body = cmd_check(s, L, pass);
        else if (opt.command == "transfer")
            body = cmd_transfer(s, L, cap, probe, pass);
        else if (opt.command == "invert")
            body = cmd_invert(s, L, cap, probe, pass);
        else if (opt.command == "kuranishi") {
            if (!opt.point) throw InputError("kuranishi needs --point");
            body = cmd_kuranishi(s, L, cap, probe, *opt.point, pass);
        } else if (opt.command == "bounds")
            body = cmd_bounds(s, L, cap, opt.eps, pass);
        else
            throw InputError("unknown command '" + opt.command + "'");
        for (auto it = body.begin(); it != body.end(); ++it) report[it.key()] = *it;
    } catch (const InputError& e) {
        o.exit_code = 2;
        o.err += opt.spec_path + ": " + e.what() + "\n";
        return o;
    } catch (const std::invalid_argument& e) {
        o.exit_code = 2;
        o.err += opt.spec_path + ": " + e.what() + "\n";
        return o;
    }
    if (opt.timing)
        report["timing_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    o.exit_code = pass ? 0 : 1;
    if (opt.output == "text")
        render_text(report, "", o.out);
    else
        o.out = report.dump(2) + "\n";
    return o;
}

}  // namespace linf::cli
