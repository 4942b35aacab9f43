#include "linf/transfer.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "linf/trees.hpp"

namespace linf {

namespace {

std::vector<int> indices_of_degree(const GradedSpace& s, int p) {
    std::vector<int> r;
    for (int i = 0; i < s.dim(); ++i)
        if (s.degree(i) == p) r.push_back(i);
    return r;
}

std::set<int> degree_set(const GradedSpace& s) {
    auto d = s.degrees();
    return {d.begin(), d.end()};
}

Scalar power(const Scalar& x, int n) {
    Scalar r = 1;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

MultiMap postcompose_bracket(const LinearMap& a, const MultiMap& b) {
    MultiMap r(b.source(), a.target(), 2, b.lin_degree() + a.degree(), Flavor::Antisymmetric);
    for (const auto& [k, v] : b.coeffs()) r.set(k, a.apply(v));
    return r;
}

// η given by the decomposition L = im d ⊕ H ⊕ C per degree, C given by vectors with d|_C injective.
LinearMap rebuild_eta(const DGLA& L, const std::map<int, std::vector<Vec>>& C, const std::map<int, std::vector<Vec>>& H) {
    LinearMap eta(L.space, L.space, -1);
    for (int p : degree_set(L.space)) {
        std::vector<Vec> basis;
        std::vector<Vec> pre;
        if (auto it = C.find(p - 1); it != C.end())
            for (const auto& c : it->second) {
                basis.push_back(L.d.apply(c));
                pre.push_back(c);
            }
        int nim = static_cast<int>(basis.size());
        if (auto it = H.find(p); it != H.end()) basis.insert(basis.end(), it->second.begin(), it->second.end());
        if (auto it = C.find(p); it != C.end()) basis.insert(basis.end(), it->second.begin(), it->second.end());
        auto idx = indices_of_degree(L.space, p);
        if (static_cast<int>(basis.size()) != static_cast<int>(idx.size()))
            throw std::logic_error("splitting: complements do not span");
        for (int k : idx) {
            auto c = coordinates(basis, unit(k));
            if (!c) throw std::logic_error("splitting: complements do not span");
            Vec v;
            for (const auto& [j, x] : *c)
                if (j < nim) axpy(v, x, pre[j]);
            eta.set_column(k, v);
        }
    }
    return eta;
}

std::vector<Vec> restrict_to(const std::vector<Vec>& kern, const std::vector<int>& idx) {
    std::vector<Vec> r;
    for (const auto& v : kern) {
        Vec w;
        for (const auto& [j, x] : v) w.emplace(idx[j], x);
        r.push_back(w);
    }
    return r;
}

std::vector<Vec> kernel_in_degree(const std::vector<LinearMap>& maps, const std::vector<int>& idx, int dim) {
    std::vector<Vec> cols;
    for (int i : idx) {
        Vec c;
        for (size_t m = 0; m < maps.size(); ++m)
            for (const auto& [j, x] : maps[m].column(i)) c.emplace(j + static_cast<int>(m) * dim, x);
        cols.push_back(c);
    }
    return restrict_to(kernel(cols, static_cast<int>(idx.size())), idx);
}

// Per-degree echelon basis of the image of a degree-0 projector, named after pivots.
std::pair<GradedSpace, std::vector<Vec>> image_basis(const GradedSpace& space, const LinearMap& proj,
                                                     const std::string& prefix) {
    std::vector<std::pair<int, Vec>> rows;
    for (int p : degree_set(space)) {
        std::vector<Vec> cols;
        for (int i : indices_of_degree(space, p)) cols.push_back(proj.column(i));
        auto e = echelon(cols);
        for (size_t r = 0; r < e.rows.size(); ++r) rows.emplace_back(e.pivots[r], e.rows[r]);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<BasisElement> be;
    std::vector<Vec> vecs;
    for (const auto& [piv, v] : rows) {
        be.push_back({prefix + space.name(piv), space.degree(piv)});
        vecs.push_back(v);
    }
    return {GradedSpace(be), vecs};
}

struct Families {
    HodgeData h;
    MultiMap root;  // (1−[d,η])[·,·]
    MultiMap g;     // η[·,·]
};

Families families(const DGLA& L, const Splitting& eta) {
    Families f{hodge(L, eta), {}, {}};
    f.root = postcompose_bracket(f.h.projector_H, L.bracket);
    f.g = postcompose_bracket(eta.eta, L.bracket);
    return f;
}

// Σ_{φ∈Ot(n)} e(φ) Σ_σ χ(σ) φ(B)(x_σ) on a tuple of the subspace basis.
Vec tree_sum(int n, const MultiMap& root, const MultiMap& rest, const std::vector<Vec>& args, const GradedSpace& L) {
    Vec acc;
    NodeMaps B = [&](const RamPath& p) -> const MultiMap& { return p.empty() ? root : rest; };
    for (const auto& t : enumerate_ot(n)) axpy(acc, e_sign(t), antisymmetrized(t, B, args, L));
    return acc;
}

std::vector<Vec> columns_of(const std::vector<Vec>& basis, const std::vector<int>& t) {
    std::vector<Vec> r;
    for (int i : t) r.push_back(basis[i]);
    return r;
}

Vec coords_in(const LinearMap& proj, const Vec& v) { return proj.apply(v); }

Scalar alpha_factor(const Reading& r, int n) { return r.factorial ? 1 / factorial(n) : Scalar(1); }

}  // namespace

LInftyAlgebra DGLA::as_linfty(int cap) const {
    LInftyAlgebra a = LInftyAlgebra::zero(space, cap);
    if (cap >= 1) a.mu[0] = from_linear(d);
    if (cap >= 2) a.mu[1] = bracket;
    return a;
}

DglaVerdict validate_dgla(const DGLA& L) {
    DglaVerdict v;
    auto fail = [&](std::string axiom, std::vector<int> w, std::string detail) {
        v.valid = false;
        v.violations.push_back({std::move(axiom), std::move(w), std::move(detail)});
    };
    if (L.d.degree() != 1 || !(L.d.source() == L.space) || !(L.d.target() == L.space)) {
        fail("d degree", {}, "d must be a degree 1 map on the space");
        return v;
    }
    if (L.bracket.arity() != 2 || L.bracket.lin_degree() != 0 || L.bracket.flavor() != Flavor::Antisymmetric ||
        !(L.bracket.source() == L.space)) {
        fail("bracket degree", {}, "bracket must be antisymmetric of degree 0");
        return v;
    }
    int n = L.space.dim();
    for (int i = 0; i < n; ++i) {
        Vec x = L.d.apply(L.d.column(i));
        if (!x.empty()) {
            fail("d squared", {i}, "d(d(" + L.space.name(i) + ")) != 0");
            break;
        }
    }
    auto br = [&](const Vec& a, const Vec& b) { return L.bracket.eval({a, b}); };
    bool leib = true;
    for (int i = 0; i < n && leib; ++i)
        for (int j = 0; j < n && leib; ++j) {
            Vec a = unit(i), b = unit(j);
            Vec lhs = L.d.apply(br(a, b));
            Vec rhs = br(L.d.column(i), b);
            axpy(rhs, parity_sign(L.space.degree(i)), br(a, L.d.column(j)));
            if (sub(lhs, rhs).size()) {
                fail("Leibniz", {i, j}, "d[a,b] != [da,b] + (-1)^a [a,db]");
                leib = false;
            }
        }
    bool jac = true;
    for (int i = 0; i < n && jac; ++i)
        for (int j = i; j < n && jac; ++j)
            for (int k = j; k < n && jac; ++k) {
                int a = L.space.degree(i), b = L.space.degree(j), c = L.space.degree(k);
                Vec x = unit(i), y = unit(j), z = unit(k);
                Vec s = scaled(br(x, br(y, z)), parity_sign(static_cast<long>(a) * c));
                axpy(s, parity_sign(static_cast<long>(b) * a), br(y, br(z, x)));
                axpy(s, parity_sign(static_cast<long>(c) * b), br(z, br(x, y)));
                if (!s.empty()) {
                    fail("Jacobi", {i, j, k}, "graded Jacobi sum != 0");
                    jac = false;
                }
            }
    return v;
}

SplittingCheck check_splitting(const DGLA& L, const LinearMap& eta) {
    SplittingCheck c;
    c.d_eta_d = compose(L.d, compose(eta, L.d)) == L.d;
    c.eta_sq = compose(eta, eta).is_zero();
    c.eta_d_eta = compose(eta, compose(L.d, eta)) == eta;
    return c;
}

Splitting build_splitting(const DGLA& L) {
    std::map<int, std::vector<Vec>> C, H;
    for (int p : degree_set(L.space)) {
        auto idx = indices_of_degree(L.space, p);
        std::vector<Vec> imgs;
        for (int i : idx) {
            imgs.push_back(L.d.column(i));
            if (rank(imgs) < static_cast<int>(imgs.size()))
                imgs.pop_back();
            else
                C[p].push_back(unit(i));
        }
    }
    for (int p : degree_set(L.space)) {
        std::vector<Vec> imd;
        if (auto it = C.find(p - 1); it != C.end())
            for (const auto& c : it->second) imd.push_back(L.d.apply(c));
        auto ker = kernel_in_degree({L.d}, indices_of_degree(L.space, p), L.space.dim());
        H[p] = complete(imd, ker);
    }
    return {rebuild_eta(L, C, H)};
}

Splitting normalize_splitting(const DGLA& L, const LinearMap& eta0) {
    if (eta0.degree() != -1 || !(compose(L.d, compose(eta0, L.d)) == L.d))
        throw std::invalid_argument("normalize_splitting: d eta0 d != d");
    LinearMap eta0d = compose(eta0, L.d);
    LinearMap deta0 = compose(L.d, eta0);
    std::map<int, std::vector<Vec>> C, H;
    for (int p : degree_set(L.space)) {
        auto idx = indices_of_degree(L.space, p);
        std::vector<Vec> cols;
        for (int i : idx) cols.push_back(eta0d.column(i));
        C[p] = echelon(cols).rows;
        H[p] = kernel_in_degree({L.d, deta0}, idx, L.space.dim());
    }
    return {rebuild_eta(L, C, H)};
}

HodgeData hodge(const DGLA& L, const Splitting& s) {
    if (!check_splitting(L, s.eta).ok()) throw std::invalid_argument("hodge: splitting identities fail");
    HodgeData h;
    h.projector_F = add(compose(L.d, s.eta), compose(s.eta, L.d));
    h.projector_H = add(LinearMap::identity(L.space), scaled(h.projector_F, -1));
    std::tie(h.H, h.H_basis) = image_basis(L.space, h.projector_H, "H.");
    std::tie(h.F, h.F_basis) = image_basis(L.space, h.projector_F, "F.");
    auto inclusion = [&](const GradedSpace& S, const std::vector<Vec>& b) {
        LinearMap m(S, L.space, 0);
        for (int i = 0; i < S.dim(); ++i) m.set_column(i, b[i]);
        return m;
    };
    auto projection = [&](const GradedSpace& S, const std::vector<Vec>& b, const LinearMap& proj) {
        // RREF rows: the coordinate on row r is the entry at its pivot.
        std::vector<int> piv;
        for (const auto& v : b) piv.push_back(v.begin()->first);
        LinearMap m(L.space, S, 0);
        for (int k = 0; k < L.space.dim(); ++k) {
            Vec y = proj.column(k), c;
            for (int r = 0; r < S.dim(); ++r)
                if (auto it = y.find(piv[r]); it != y.end()) c.emplace(r, it->second);
            m.set_column(k, c);
        }
        return m;
    };
    h.incl_H = inclusion(h.H, h.H_basis);
    h.incl_F = inclusion(h.F, h.F_basis);
    h.proj_H = projection(h.H, h.H_basis, h.projector_H);
    h.proj_F = projection(h.F, h.F_basis, h.projector_F);
    h.d_F = LinearMap(h.F, h.F, 1);
    for (int i = 0; i < h.F.dim(); ++i) h.d_F.set_column(i, h.proj_F.apply(L.d.apply(h.F_basis[i])));
    return h;
}

std::string Reading::name() const {
    return std::string(factorial ? "factorial" : "raw") + (corrected ? "-corrected" : "-printed");
}

Reading Reading::parse(const std::string& name) {
    for (const auto& r : probe_order())
        if (r.name() == name) return r;
    throw std::invalid_argument("unknown normalization reading: " + name);
}

std::vector<Reading> Reading::probe_order() {
    return {{false, false}, {true, false}, {false, true}, {true, true}};
}

LInftyAlgebra transfer_mu(const DGLA& L, const Splitting& eta, int cap, Reading r) {
    auto fam = families(L, eta);
    const auto& h = fam.h;
    LInftyAlgebra a = LInftyAlgebra::zero(h.H, cap);
    for (int n = 2; n <= cap; ++n) {
        Scalar c = (r.corrected ? -power(Scalar(1, 2), n - 1) : power(Scalar(-1, 2), n - 1)) * alpha_factor(r, n);
        MultiMap& m = a.mu[n - 1];
        for (const auto& t : m.canonical_tuples()) {
            Vec v = tree_sum(n, fam.root, fam.g, columns_of(h.H_basis, t), L.space);
            m.set(t, scaled(coords_in(h.proj_H, v), c));
        }
    }
    return a;
}

LInftyMorphism transfer_f(const DGLA& L, const Splitting& eta, int cap, Reading r) {
    auto fam = families(L, eta);
    const auto& h = fam.h;
    LInftyMorphism f;
    f.source = transfer_mu(L, eta, cap, r);
    f.target = L.as_linfty(cap);
    f.cap = cap;
    f.f.push_back(from_linear(h.incl_H));
    for (int n = 2; n <= cap; ++n) {
        Scalar c = (r.corrected ? power(Scalar(1, 2), n - 1) : -power(Scalar(-1, 2), n - 1)) * alpha_factor(r, n);
        MultiMap m(h.H, L.space, n, 1 - n, Flavor::Antisymmetric);
        for (const auto& t : m.canonical_tuples())
            m.set(t, scaled(tree_sum(n, fam.g, fam.g, columns_of(h.H_basis, t), L.space), c));
        f.f.push_back(std::move(m));
    }
    return f;
}

LInftyAlgebra linear_part(const DGLA&, const HodgeData& h, int cap) {
    LInftyAlgebra a = LInftyAlgebra::zero(h.F, cap);
    if (cap >= 1) a.mu[0] = from_linear(h.d_F);
    return a;
}

namespace {

// Σ_σ χ(σ) (η^{⊗n−1}⊗1)-Koszul sign · Φ(ηx_σ1,…,ηx_σ(n−1),x_σn) with Φ = φ([·,·],…,[·,·]).
Vec g_term(const DGLA& L, const LinearMap& eta, const std::vector<Vec>& args, const std::vector<Tree>& trees) {
    int n = static_cast<int>(args.size());
    std::vector<int> deg(n);
    for (int i = 0; i < n; ++i) deg[i] = *L.space.degree_of(args[i]);
    NodeMaps B = [&](const RamPath&) -> const MultiMap& { return L.bracket; };
    Vec acc;
    for (const auto& s : all_permutations(n)) {
        long ex = 0;
        std::vector<Vec> x;
        for (int j = 1; j <= n; ++j) {
            if (j <= n - 2) ex += static_cast<long>(n - 1 - j) * deg[s(j) - 1];
            x.push_back(j < n ? eta.apply(args[s(j) - 1]) : args[s(j) - 1]);
        }
        bool zero = false;
        for (const auto& v : x) zero = zero || v.empty();
        if (zero) continue;
        int sign = chi_sign(s, deg) * parity_sign(ex);
        for (const auto& t : trees) axpy(acc, sign, evaluate_on(t, B, x, L.space));
    }
    return acc;
}

}  // namespace

LInftyMorphism embed_g(const DGLA& L, const Splitting& eta, int cap, Reading r) {
    HodgeData h = hodge(L, eta);
    LInftyMorphism g;
    g.source = linear_part(L, h, cap);
    g.target = L.as_linfty(cap);
    g.cap = cap;
    g.f.push_back(from_linear(h.incl_F));
    for (int n = 2; n <= cap; ++n) {
        std::vector<Tree> trees = r.corrected ? std::vector<Tree>{right_comb(n)} : enumerate_ot(n);
        Scalar c = r.corrected ? Scalar(Scalar(parity_sign(n - 1)) / factorial(n))
                               : Scalar(power(Scalar(-1, 2), n - 1) * alpha_factor(r, n));
        MultiMap m(h.F, L.space, n, 1 - n, Flavor::Antisymmetric);
        for (const auto& t : m.canonical_tuples())
            m.set(t, scaled(g_term(L, eta.eta, columns_of(h.F_basis, t), trees), c));
        g.f.push_back(std::move(m));
    }
    return g;
}

RecursiveTransfer transfer_recursive(const DGLA& L, const Splitting& eta, int cap) {
    HodgeData h = hodge(L, eta);
    RecursiveTransfer rt;
    rt.mu = LInftyAlgebra::zero(h.H, cap);
    rt.f.source = rt.mu;
    rt.f.target = L.as_linfty(cap);
    rt.f.cap = cap;
    rt.f.f.push_back(from_linear(h.incl_H));
    for (int n = 2; n <= cap; ++n) {
        MultiMap mu(h.H, h.H, n, 2 - n, Flavor::Antisymmetric);
        MultiMap fn(h.H, L.space, n, 1 - n, Flavor::Antisymmetric);
        for (const auto& t : mu.canonical_tuples()) {
            std::vector<int> a;
            for (int i : t) a.push_back(h.H.degree(i));
            Vec Y;
            for (int i = 1; i < n; ++i) {
                int j = n - i;
                for (const auto& s : shuffles(i, n)) {
                    if (s(1) > s(i + 1)) continue;
                    long ai = 0;
                    std::vector<int> t1, t2;
                    for (int p = 1; p <= n; ++p) (p <= i ? t1 : t2).push_back(t[s(p) - 1]);
                    for (int p = 1; p <= i; ++p) ai += a[s(p) - 1];
                    Vec x = rt.f.at(i).eval_basis(t1);
                    Vec y = rt.f.at(j).eval_basis(t2);
                    if (x.empty() || y.empty()) continue;
                    int sign = chi_sign(s, a) * parity_sign(i + static_cast<long>(j - 1) * ai);
                    axpy(Y, sign, L.bracket.eval({x, y}));
                }
            }
            for (int k = 2; k < n; ++k) {
                int l = n + 1 - k;
                for (const auto& s : shuffles(k, n)) {
                    std::vector<int> t1;
                    for (int p = 1; p <= k; ++p) t1.push_back(t[s(p) - 1]);
                    Vec x = rt.mu.at(k).eval_basis(t1);
                    if (x.empty()) continue;
                    std::vector<Vec> args{x};
                    for (int p = k + 1; p <= n; ++p) args.push_back(unit(t[s(p) - 1]));
                    int sign = chi_sign(s, a) * parity_sign(static_cast<long>(k) * (l - 1));
                    axpy(Y, sign, rt.f.at(l).eval(args));
                }
            }
            mu.set(t, scaled(h.proj_H.apply(Y), -1));
            fn.set(t, eta.eta.apply(Y));
        }
        rt.mu.mu[n - 1] = std::move(mu);
        rt.f.f.push_back(std::move(fn));
    }
    rt.f.source = rt.mu;
    return rt;
}

Decomposition decompose(const DGLA& L, const Splitting& eta, int cap, Reading r) {
    Decomposition d;
    d.f = transfer_f(L, eta, cap, r);
    d.g = embed_g(L, eta, cap, r);
    d.iso = direct_sum_morphism(d.f, d.g);
    HodgeData h = hodge(L, eta);
    const GradedSpace& S = d.iso.source.space;
    LinearMap g1(L.space, S, 0);
    int off = h.H.dim();
    for (int k = 0; k < L.space.dim(); ++k) {
        Vec c = h.proj_H.column(k);
        for (const auto& [j, x] : h.proj_F.column(k)) c.emplace(j + off, x);
        g1.set_column(k, c);
    }
    d.inverse = left_inverse(d.iso, g1);
    return d;
}

Vec kuranishi(const LInftyAlgebra& A, const Vec& x, int cap) {
    auto deg = A.space.degree_of(x);
    if (deg && *deg != 1) throw std::invalid_argument("kuranishi: point must have degree 1");
    Vec acc;
    if (!deg) return acc;
    for (int n = 2; n <= std::min(cap, A.cap); ++n) {
        std::vector<Vec> args(n, x);
        axpy(acc, 1 / factorial(n), A.at(n).eval(args));
    }
    return acc;
}

Vec kuranishi_shifted(const LInftyAlgebra& A, const Vec& x, int cap) {
    auto deg = A.space.degree_of(x);
    if (deg && *deg != 1) throw std::invalid_argument("kuranishi: point must have degree 1");
    Vec acc;
    if (!deg) return acc;
    for (int n = 2; n <= std::min(cap, A.cap); ++n) {
        std::vector<Vec> args(n, x);
        axpy(acc, parity_sign(n * (n - 1) / 2) / factorial(n), A.at(n).eval(args));
    }
    return acc;
}

std::vector<Vec> lift_obstructions(const DGLA& L, const Splitting& eta, const Vec& x, int cap) {
    HodgeData h = hodge(L, eta);
    auto deg = h.H.degree_of(x);
    if (deg && *deg != 1) throw std::invalid_argument("lift_obstructions: point must have degree 1");
    std::vector<Vec> xi(cap + 1), out;
    xi[1] = h.incl_H.apply(x);
    for (int n = 2; n <= cap; ++n) {
        Vec q;
        for (int a = 1; a < n; ++a) axpy(q, Scalar(-1, 2), L.bracket.eval({xi[a], xi[n - a]}));
        out.push_back(h.proj_H.apply(q));
        xi[n] = scaled(eta.eta.apply(q), -1);
    }
    return out;
}

}  // namespace linf
