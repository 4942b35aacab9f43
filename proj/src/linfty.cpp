#include "linf/linfty.hpp"

#include <functional>
#include <numeric>
#include <stdexcept>

namespace linf {

namespace {

std::vector<int> degrees_of(const GradedSpace& s, const std::vector<int>& t) {
    std::vector<int> d;
    for (int i : t) d.push_back(s.degree(i));
    return d;
}

std::vector<int> pick(const std::vector<int>& t, const Permutation& s, int from, int to) {
    std::vector<int> r;
    for (int i = from; i < to; ++i) r.push_back(t[s.images[i] - 1]);
    return r;
}

void compositions(int n, int k, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (k == 1) {
        cur.push_back(n);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int i = 1; i <= n - k + 1; ++i) {
        cur.push_back(i);
        compositions(n - i, k - 1, cur, out);
        cur.pop_back();
    }
}

const MultiMap* component(const std::vector<MultiMap>& v, int n) {
    return n >= 1 && n <= static_cast<int>(v.size()) ? &v[n - 1] : nullptr;
}

// Σ_{k+l=n+1} Σ_{σ∈Sh(k,n)} sign(σ)·outer_l(inner_k(x_σ(1..k)), x_σ(k+1..n)) on a basis tuple.
Vec insertion_sum(const std::vector<MultiMap>& outer, const std::vector<MultiMap>& inner, const std::vector<int>& t,
                  const GradedSpace& space, Flavor action, bool jacobi_sign) {
    int n = static_cast<int>(t.size());
    auto deg = degrees_of(space, t);
    Vec acc;
    for (int k = 1; k <= n; ++k) {
        int l = n + 1 - k;
        const MultiMap* in = component(inner, k);
        const MultiMap* out = component(outer, l);
        if (!in || !out || in->is_zero() || out->is_zero()) continue;
        for (const auto& s : shuffles(k, n)) {
            Vec x = in->eval_basis(pick(t, s, 0, k));
            if (x.empty()) continue;
            std::vector<Vec> args{x};
            for (int i = k; i < n; ++i) args.push_back(unit(t[s.images[i] - 1]));
            int sign = action_sign(action, s, deg);
            if (jacobi_sign) sign *= parity_sign(static_cast<long>(k) * (l - 1));
            axpy(acc, sign, out->eval(args));
        }
    }
    return acc;
}

}  // namespace

LInftyAlgebra LInftyAlgebra::zero(const GradedSpace& space, int cap) {
    LInftyAlgebra a;
    a.space = space;
    a.cap = cap;
    for (int n = 1; n <= cap; ++n) a.mu.emplace_back(space, space, n, 2 - n, Flavor::Antisymmetric);
    return a;
}

bool LInftyAlgebra::is_linear() const {
    for (size_t i = 1; i < mu.size(); ++i)
        if (!mu[i].is_zero()) return false;
    return true;
}

bool LInftyAlgebra::is_dgla_shaped() const {
    for (size_t i = 2; i < mu.size(); ++i)
        if (!mu[i].is_zero()) return false;
    return true;
}

Coderivation to_coderivation(const LInftyAlgebra& a) {
    Coderivation q;
    q.space = shift_down(a.space);
    q.cap = a.cap;
    q.degree = 1;
    for (const auto& m : a.mu) q.q.push_back(decalage_down(m));
    return q;
}

LInftyAlgebra from_coderivation(const Coderivation& q) {
    LInftyAlgebra a;
    a.space = q.space.shifted(1);
    a.cap = q.cap;
    for (const auto& m : q.q) a.mu.push_back(decalage_up(m));
    return a;
}

CoalgMorphism to_coalg(const LInftyMorphism& f) {
    CoalgMorphism c;
    c.source = shift_down(f.source.space);
    c.target = shift_down(f.target.space);
    c.cap = f.cap;
    for (const auto& m : f.f) c.f.push_back(decalage_down(m));
    return c;
}

std::vector<std::vector<std::vector<int>>> set_partitions(int n, int k) {
    std::vector<std::vector<std::vector<int>>> out;
    if (k < 1 || k > n) return out;
    std::vector<int> a(n, 0);
    std::function<void(int, int)> rec = [&](int i, int used) {
        if (n - i < k - used) return;
        if (i == n) {
            if (used != k) return;
            std::vector<std::vector<int>> blocks(k);
            for (int j = 0; j < n; ++j) blocks[a[j]].push_back(j);
            out.push_back(std::move(blocks));
            return;
        }
        for (int b = 0; b < used; ++b) {
            a[i] = b;
            rec(i + 1, used);
        }
        if (used < k) {
            a[i] = used;
            rec(i + 1, used + 1);
        }
    };
    rec(0, 0);
    return out;
}

Vec apply_after_morphism(const MultiMap& Qk, const std::vector<MultiMap>& F, const std::vector<int>& tuple,
                         const GradedSpace& shifted_source) {
    int n = static_cast<int>(tuple.size());
    int k = Qk.arity();
    auto deg = degrees_of(shifted_source, tuple);
    Vec acc;
    if (Qk.is_zero()) return acc;
    for (const auto& blocks : set_partitions(n, k)) {
        std::vector<int> order;
        std::vector<Vec> args;
        bool zero = false;
        for (const auto& b : blocks) {
            const MultiMap* Fi = component(F, static_cast<int>(b.size()));
            if (!Fi) {
                zero = true;
                break;
            }
            std::vector<int> sub;
            for (int j : b) {
                order.push_back(j + 1);
                sub.push_back(tuple[j]);
            }
            args.push_back(Fi->eval_basis(sub));
            if (args.back().empty()) {
                zero = true;
                break;
            }
        }
        if (zero) continue;
        axpy(acc, epsilon_sign(Permutation(order), deg), Qk.eval(args));
    }
    return acc;
}

Vec apply_after_morphism_naive(const MultiMap& Qk, const std::vector<MultiMap>& F, const std::vector<int>& tuple,
                               const GradedSpace& shifted_source) {
    int n = static_cast<int>(tuple.size());
    int k = Qk.arity();
    auto deg = degrees_of(shifted_source, tuple);
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(n, k, cur, comps);
    auto perms = all_permutations(n);
    Vec acc;
    for (const auto& I : comps) {
        Scalar c = 1 / factorial(k);
        bool ok = true;
        for (int i : I) {
            c /= factorial(i);
            if (!component(F, i)) ok = false;
        }
        if (!ok) continue;
        for (const auto& s : perms) {
            std::vector<Vec> args;
            int pos = 0;
            for (int i : I) {
                args.push_back(component(F, i)->eval_basis(pick(tuple, s, pos, pos + i)));
                pos += i;
            }
            axpy(acc, c * epsilon_sign(s, deg), Qk.eval(args));
        }
    }
    return acc;
}

Coderivation coder_bracket(const Coderivation& Q, const Coderivation& q) {
    if (!(Q.space == q.space) || Q.cap != q.cap) throw std::invalid_argument("coder_bracket: space or cap mismatch");
    Coderivation r;
    r.space = Q.space;
    r.cap = Q.cap;
    r.degree = Q.degree + q.degree;
    int sign = -parity_sign(static_cast<long>(Q.degree) * q.degree);
    for (int n = 1; n <= Q.cap; ++n) {
        MultiMap m(Q.space, Q.space, n, r.degree, Flavor::Symmetric);
        for (const auto& t : m.canonical_tuples()) {
            Vec v = insertion_sum(Q.q, q.q, t, Q.space, Flavor::Symmetric, false);
            axpy(v, sign, insertion_sum(q.q, Q.q, t, Q.space, Flavor::Symmetric, false));
            m.add(t, v);
        }
        r.q.push_back(std::move(m));
    }
    return r;
}

Verdict is_codifferential(const Coderivation& Q) {
    if (Q.degree != 1) throw std::invalid_argument("is_codifferential: degree must be 1");
    Verdict v;
    for (int n = 1; n <= Q.cap; ++n) {
        MultiMap m(Q.space, Q.space, n, 2, Flavor::Symmetric);
        for (const auto& t : m.canonical_tuples()) m.add(t, insertion_sum(Q.q, Q.q, t, Q.space, Flavor::Symmetric, false));
        if (!m.is_zero()) v.pass = false;
        v.arities.push_back({n, std::move(m)});
    }
    return v;
}

Verdict jacobi_check(const LInftyAlgebra& a) {
    Verdict v;
    for (int n = 1; n <= a.cap; ++n) {
        MultiMap m(a.space, a.space, n, 3 - n, Flavor::Antisymmetric);
        for (const auto& t : m.canonical_tuples())
            m.add(t, insertion_sum(a.mu, a.mu, t, a.space, Flavor::Antisymmetric, true));
        if (!m.is_zero()) v.pass = false;
        v.arities.push_back({n, std::move(m)});
    }
    Verdict c = is_codifferential(to_coderivation(a));
    v.second_route = c.arities;
    // The codifferential residual is the décalage of the Jacobi residual.
    for (int n = 1; n <= a.cap; ++n) {
        if (!(decalage_down(v.arities[n - 1].residual) == c.arities[n - 1].residual)) v.routes_agree = false;
    }
    if (!v.routes_agree) v.pass = false;
    return v;
}

MultiMap morphism_display_residual(const LInftyMorphism& f, int n) {
    const auto& src = f.source;
    const auto& tgt = f.target;
    MultiMap m(src.space, tgt.space, n, 2 - n, Flavor::Antisymmetric);
    const MultiMap* d = component(tgt.mu, 1);
    const MultiMap* br = component(tgt.mu, 2);
    for (const auto& t : m.canonical_tuples()) {
        auto a = degrees_of(src.space, t);
        Vec lhs;
        if (d && n <= f.cap) lhs = d->eval({f.at(n).eval_basis(t)});
        for (int i = 1; br && i < n; ++i) {
            int j = n - i;
            const MultiMap* fi = component(f.f, i);
            const MultiMap* fj = component(f.f, j);
            if (!fi || !fj) continue;
            for (const auto& s : shuffles(i, n)) {
                if (s(1) > s(i + 1)) continue;
                long ai = 0;
                for (int p = 1; p <= i; ++p) ai += a[s(p) - 1];
                int sign = chi_sign(s, a) * parity_sign(i + static_cast<long>(j - 1) * ai);
                Vec x = fi->eval_basis(pick(t, s, 0, i));
                if (x.empty()) continue;
                Vec y = fj->eval_basis(pick(t, s, i, n));
                if (y.empty()) continue;
                axpy(lhs, -sign, br->eval({x, y}));
            }
        }
        Vec rhs = insertion_sum(f.f, src.mu, t, src.space, Flavor::Antisymmetric, true);
        m.add(t, sub(lhs, rhs));
    }
    return m;
}

Verdict morphism_check(const LInftyMorphism& f) {
    Verdict v;
    CoalgMorphism F = to_coalg(f);
    Coderivation Qs = to_coderivation(f.source);
    Coderivation Qt = to_coderivation(f.target);
    for (int n = 1; n <= f.cap; ++n) {
        MultiMap m(F.source, F.target, n, 1, Flavor::Symmetric);
        for (const auto& t : m.canonical_tuples()) {
            Vec lhs;
            for (int k = 1; k <= n && k <= Qt.cap; ++k) axpy(lhs, 1, apply_after_morphism(Qt.at(k), F.f, t, F.source));
            Vec rhs = insertion_sum(F.f, Qs.q, t, F.source, Flavor::Symmetric, false);
            m.add(t, sub(lhs, rhs));
        }
        if (!m.is_zero()) v.pass = false;
        v.arities.push_back({n, std::move(m)});
    }
    if (f.target.is_dgla_shaped()) {
        for (int n = 1; n <= f.cap; ++n) {
            MultiMap r = morphism_display_residual(f, n);
            if (!(decalage_down(r) == v.arities[n - 1].residual)) v.routes_agree = false;
            v.second_route.push_back({n, std::move(r)});
        }
        if (!v.routes_agree) v.pass = false;
    }
    return v;
}

LInftyMorphism identity_morphism(const LInftyAlgebra& a) {
    LInftyMorphism f;
    f.source = a;
    f.target = a;
    f.cap = a.cap;
    for (int n = 1; n <= a.cap; ++n) f.f.emplace_back(a.space, a.space, n, 1 - n, Flavor::Antisymmetric);
    for (int i = 0; i < a.space.dim(); ++i) f.f[0].add({i}, unit(i));
    return f;
}

bool is_identity(const LInftyMorphism& f) {
    if (!(f.source.space == f.target.space)) return false;
    for (int n = 1; n <= f.cap; ++n) {
        if (n == 1) {
            if (!(to_linear(f.at(1)) == LinearMap::identity(f.source.space))) return false;
        } else if (!f.at(n).is_zero()) {
            return false;
        }
    }
    return true;
}

namespace {

LInftyMorphism from_coalg(const std::vector<MultiMap>& comps, const LInftyAlgebra& source, const LInftyAlgebra& target) {
    LInftyMorphism f;
    f.source = source;
    f.target = target;
    f.cap = static_cast<int>(comps.size());
    for (const auto& c : comps) f.f.push_back(decalage_up(c));
    return f;
}

}  // namespace

LInftyMorphism compose(const LInftyMorphism& F, const LInftyMorphism& G) {
    if (!(G.target.space == F.source.space)) throw std::invalid_argument("compose: G.target != F.source");
    int cap = std::min(F.cap, G.cap);
    CoalgMorphism Fc = to_coalg(F), Gc = to_coalg(G);
    std::vector<MultiMap> out;
    for (int n = 1; n <= cap; ++n) {
        MultiMap m(Gc.source, Fc.target, n, 0, Flavor::Symmetric);
        for (const auto& t : m.canonical_tuples()) {
            Vec acc;
            for (int k = 1; k <= n; ++k) axpy(acc, 1, apply_after_morphism(Fc.at(k), Gc.f, t, Gc.source));
            m.add(t, acc);
        }
        out.push_back(std::move(m));
    }
    return from_coalg(out, G.source, F.target);
}

LInftyMorphism left_inverse(const LInftyMorphism& F, const LinearMap& g1) {
    const GradedSpace& A = F.source.space;
    const GradedSpace& B = F.target.space;
    if (!(g1.source() == B) || !(g1.target() == A) || g1.degree() != 0)
        throw std::invalid_argument("left_inverse: g1 has the wrong shape");
    if (!(compose(g1, to_linear(F.at(1))) == LinearMap::identity(A)))
        throw std::invalid_argument("left_inverse: g1 is not a left inverse of F_1");
    CoalgMorphism Fc = to_coalg(F);
    GradedSpace sA = shift_down(A), sB = shift_down(B);
    LinearMap g1s(sB, sA, 0);
    for (int i = 0; i < B.dim(); ++i) g1s.set_column(i, g1.column(i));
    std::vector<MultiMap> G;
    G.push_back(from_linear(g1s, Flavor::Symmetric));
    for (int n = 2; n <= F.cap; ++n) {
        // H_n = Σ_{k<n} G_k∘F_{n,k} on the source, then G_n = −H_n∘(g1⊗…⊗g1).
        MultiMap H(sA, sA, n, 0, Flavor::Symmetric);
        for (const auto& t : H.canonical_tuples()) {
            Vec acc;
            for (int k = 1; k < n; ++k) axpy(acc, 1, apply_after_morphism(G[k - 1], Fc.f, t, sA));
            H.add(t, acc);
        }
        G.push_back(pullback(H, g1s, sB).scaled(-1));
    }
    return from_coalg(G, F.target, F.source);
}

LInftyMorphism inverse_by_recursion(const LInftyMorphism& F, const LinearMap& g1) {
    const GradedSpace& A = F.source.space;
    const GradedSpace& B = F.target.space;
    if (!(g1.source() == B) || !(g1.target() == A) || g1.degree() != 0)
        throw std::invalid_argument("inverse_by_recursion: g1 has the wrong shape");
    CoalgMorphism Fc = to_coalg(F);
    GradedSpace sA = shift_down(A), sB = shift_down(B);
    LinearMap g1s(sB, sA, 0);
    for (int i = 0; i < B.dim(); ++i) g1s.set_column(i, g1.column(i));
    std::vector<MultiMap> G;
    G.push_back(from_linear(g1s, Flavor::Symmetric));
    for (int n = 2; n <= F.cap; ++n) {
        G.emplace_back(sB, sA, n, 0, Flavor::Symmetric);
        MultiMap S(sB, sB, n, 0, Flavor::Symmetric);
        for (const auto& t : S.canonical_tuples()) {
            Vec acc;
            for (int k = 2; k <= n; ++k) axpy(acc, 1, apply_after_morphism(Fc.at(k), G, t, sB));
            S.add(t, acc);
        }
        G.back() = postcompose(g1s, S).scaled(-1);
    }
    return from_coalg(G, F.target, F.source);
}

namespace {

MultiMap embed(const MultiMap& m, const GradedSpace& source, const GradedSpace& target, int src_offset,
               int tgt_offset) {
    MultiMap r(source, target, m.arity(), m.lin_degree(), m.flavor());
    for (const auto& [k, v] : m.coeffs()) {
        std::vector<int> key;
        for (int i : k) key.push_back(i + src_offset);
        Vec w;
        for (const auto& [j, c] : v) w.emplace(j + tgt_offset, c);
        r.add(key, w);
    }
    return r;
}

}  // namespace

LInftyAlgebra direct_sum(const LInftyAlgebra& a, const LInftyAlgebra& b) {
    if (a.cap != b.cap) throw std::invalid_argument("direct_sum: cap mismatch");
    if (!a.is_linear() && !b.is_linear()) throw std::invalid_argument("direct_sum: one summand must be linear");
    LInftyAlgebra s;
    s.space = direct_sum(a.space, b.space);
    s.cap = a.cap;
    int off = a.space.dim();
    for (int n = 1; n <= a.cap; ++n) {
        MultiMap m = embed(a.at(n), s.space, s.space, 0, 0);
        m += embed(b.at(n), s.space, s.space, off, off);
        s.mu.push_back(std::move(m));
    }
    return s;
}

LInftyMorphism direct_sum_morphism(const LInftyMorphism& f, const LInftyMorphism& g) {
    if (!(f.target.space == g.target.space)) throw std::invalid_argument("direct_sum_morphism: targets differ");
    if (f.cap != g.cap) throw std::invalid_argument("direct_sum_morphism: cap mismatch");
    LInftyMorphism h;
    h.source = direct_sum(f.source, g.source);
    h.target = f.target;
    h.cap = f.cap;
    int off = f.source.space.dim();
    for (int n = 1; n <= f.cap; ++n) {
        MultiMap m = embed(f.at(n), h.source.space, h.target.space, 0, 0);
        m += embed(g.at(n), h.source.space, h.target.space, off, 0);
        h.f.push_back(std::move(m));
    }
    return h;
}

}  // namespace linf
