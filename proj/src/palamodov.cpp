#include "linf/palamodov.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace linf {

namespace {

Scalar power(const Scalar& x, int n) {
    Scalar r = 1;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

Scalar weight_at(const NormModel& m, int i, const Scalar& lambda) {
    if (m.mode == NormMode::Banach) return m.weights[i];
    return m.weights[i] * power(lambda, m.exponents[i]);
}

void check_models(const MultiMap& phi, const NormModel& s, const NormModel& t) {
    s.validate();
    t.validate();
    if (!(phi.source() == s.space) || !(phi.target() == t.space)) throw std::invalid_argument("norm model does not match map");
    if (s.mode != t.mode) throw std::invalid_argument("norm models of different modes");
}

// max over basis tuples of (ε-window factor)·||φ(e)||_{hi}/Π w(e)_{lo}
Scalar basis_sup(const MultiMap& phi, const NormModel& s, const NormModel& t, const Scalar& lo, const Scalar& hi,
                 const Scalar& factor) {
    Scalar best = 0;
    for (const auto& [k, v] : phi.coeffs()) {
        Scalar den = 1;
        for (int i : k) den *= weight_at(s, i, lo);
        Scalar x = factor * t.norm(v, hi) / den;
        if (x > best) best = x;
    }
    return best;
}

Scalar scaled_sup(const MultiMap& phi, const NormModel& s, const NormModel& t, const Scalar& eps, bool one) {
    Scalar best = 0;
    Scalar start = 1 - eps;
    for (int j = 0; j < kScaledCells; ++j) {
        Scalar a = start + eps * j / kScaledCells;
        Scalar b = start + eps * (j + 1) / kScaledCells;
        Scalar factor = one ? power(b - start, phi.arity() - 1) : Scalar(1);
        best = std::max(best, basis_sup(phi, s, t, a, b, factor));
    }
    return best;
}

void check_eps(const Scalar& eps) {
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps must lie in (0,1)");
}

}  // namespace

NormModel NormModel::banach(const GradedSpace& s, std::vector<Scalar> weights) {
    NormModel m{s, std::move(weights), std::vector<int>(s.dim(), 0), NormMode::Banach};
    m.validate();
    return m;
}

NormModel NormModel::unit(const GradedSpace& s) { return banach(s, std::vector<Scalar>(s.dim(), Scalar(1))); }

NormModel NormModel::scaled(const GradedSpace& s, std::vector<Scalar> weights, std::vector<int> exponents) {
    NormModel m{s, std::move(weights), std::move(exponents), NormMode::Scaled};
    m.validate();
    return m;
}

void NormModel::validate() const {
    if (static_cast<int>(weights.size()) != space.dim()) throw std::invalid_argument("norm model: wrong number of weights");
    for (const auto& w : weights)
        if (w <= 0) throw std::invalid_argument("norm model: weights must be positive");
    if (mode == NormMode::Scaled) {
        if (static_cast<int>(exponents.size()) != space.dim())
            throw std::invalid_argument("norm model: wrong number of exponents");
        for (int p : exponents)
            if (p < 0) throw std::invalid_argument("norm model: exponents must be nonnegative");
    }
}

Scalar NormModel::norm(const Vec& x, const Scalar& lambda) const {
    Scalar s = 0;
    for (const auto& [i, c] : x) s += abs(c) * weight_at(*this, i, lambda);
    return s;
}

Scalar op_norm0(const MultiMap& phi, const NormModel& source, const NormModel& target, const Scalar& eps) {
    check_eps(eps);
    check_models(phi, source, target);
    if (source.mode == NormMode::Banach) return basis_sup(phi, source, target, 1, 1, 1);
    return scaled_sup(phi, source, target, eps, false);
}

Scalar op_norm0(const MultiMap& phi, const NormModel& model, const Scalar& eps) {
    return op_norm0(phi, model, model, eps);
}

Scalar op_norm1(const MultiMap& phi, const NormModel& source, const NormModel& target, const Scalar& eps) {
    check_eps(eps);
    check_models(phi, source, target);
    if (source.mode == NormMode::Banach) return power(eps, phi.arity() - 1) * basis_sup(phi, source, target, 1, 1, 1);
    return scaled_sup(phi, source, target, eps, true);
}

Scalar op_norm1(const MultiMap& phi, const NormModel& model, const Scalar& eps) {
    return op_norm1(phi, model, model, eps);
}

Scalar op_norm0(const LinearMap& a, const NormModel& source, const NormModel& target, const Scalar& eps) {
    return op_norm0(from_linear(a, Flavor::Plain), source, target, eps);
}

std::vector<Vec> subspace_ball(const NormModel& ambient, const LinearMap& incl) {
    if (ambient.mode != NormMode::Banach) throw std::invalid_argument("subspace_ball: Banach mode only");
    int N = ambient.space.dim();
    int k = incl.source().dim();
    std::set<Vec> out;
    if (k == 0) return {};
    if (N > 20) throw std::invalid_argument("subspace_ball: ambient dimension too large");
    for (unsigned Z = 0; Z < (1u << N); ++Z) {
        std::vector<Vec> cols;
        for (int j = 0; j < k; ++j) {
            Vec c;
            for (const auto& [i, x] : incl.column(j))
                if (Z >> i & 1u) c.emplace(i, x);
            cols.push_back(c);
        }
        auto ker = kernel(cols, k);
        if (ker.size() != 1) continue;
        Vec v = ker[0];
        if (v.begin()->second < 0) v = scaled(v, -1);
        v = scaled(v, 1 / ambient.norm(incl.apply(v)));
        out.insert(v);
    }
    return {out.begin(), out.end()};
}

Scalar op_norm0_subspace(const MultiMap& phi, const std::vector<Vec>& ball, const LinearMap& out,
                         const NormModel& target) {
    int p = phi.arity();
    int m = static_cast<int>(ball.size());
    Scalar best = 0;
    std::vector<int> idx(p, 0);
    bool ordered = phi.flavor() == Flavor::Plain;
    std::function<void(int, int)> rec = [&](int pos, int from) {
        if (pos == p) {
            std::vector<Vec> args;
            for (int i : idx) args.push_back(ball[i]);
            best = std::max(best, target.norm(out.apply(phi.eval(args))));
            return;
        }
        for (int i = ordered ? 0 : from; i < m; ++i) {
            idx[pos] = i;
            rec(pos + 1, i);
        }
    };
    rec(0, 0);
    return best;
}

MultiMap restrict_degrees(const MultiMap& phi, int min_degree) {
    MultiMap r(phi.source(), phi.target(), phi.arity(), phi.lin_degree(), phi.flavor());
    for (const auto& [k, v] : phi.coeffs()) {
        bool keep = true;
        for (int i : k) keep = keep && phi.source().degree(i) >= min_degree;
        if (keep) r.set(k, v);
    }
    return r;
}

Scalar diagonal_norm0_lower(const MultiMap& phi, const NormModel& model) {
    if (model.mode != NormMode::Banach) throw std::invalid_argument("diagonal_norm0_lower: Banach mode only");
    int p = phi.arity();
    int n = model.space.dim();
    Scalar best = 0;
    std::vector<int> idx(p);
    std::function<void(int, int)> rec = [&](int pos, int from) {
        if (pos == p) {
            for (unsigned s = 0; s < (1u << (p - 1)); ++s) {
                Vec x;
                for (int j = 0; j < p; ++j) {
                    int sign = j > 0 && (s >> (j - 1) & 1u) ? -1 : 1;
                    axpy(x, Scalar(sign) / (model.weights[idx[j]] * p), unit(idx[j]));
                }
                best = std::max(best, model.norm(phi.eval(std::vector<Vec>(p, x))));
            }
            return;
        }
        for (int i = from; i < n; ++i) {
            idx[pos] = i;
            rec(pos + 1, i);
        }
    };
    rec(0, 0);
    return best;
}

Scalar diagonal_norm0_subspace_lower(const MultiMap& phi, const std::vector<Vec>& ball, const LinearMap& out,
                                     const NormModel& target) {
    int p = phi.arity();
    int n = static_cast<int>(ball.size());
    Scalar best = 0;
    std::vector<int> idx(p);
    std::function<void(int, int)> rec = [&](int pos, int from) {
        if (pos == p) {
            for (unsigned s = 0; s < (1u << (p - 1)); ++s) {
                Vec x;
                for (int j = 0; j < p; ++j) {
                    int sign = j > 0 && (s >> (j - 1) & 1u) ? -1 : 1;
                    axpy(x, Scalar(sign, p), ball[idx[j]]);
                }
                best = std::max(best, target.norm(out.apply(phi.eval(std::vector<Vec>(p, x)))));
            }
            return;
        }
        for (int i = from; i < n; ++i) {
            idx[pos] = i;
            rec(pos + 1, i);
        }
    };
    rec(0, 0);
    return best;
}

TreeBound tree_bound(const Tree& t, const std::vector<Scalar>& b_norms, const std::vector<Scalar>& c_norms) {
    int m = t.nodes();
    if (static_cast<int>(b_norms.size()) != m || static_cast<int>(c_norms.size()) != m)
        throw std::invalid_argument("tree_bound: need one norm per ramification");
    TreeBound r{1, power(Scalar(m), m)};
    for (int i = 0; i < m; ++i) {
        r.bound0 *= b_norms[i];
        r.bound1 *= c_norms[i];
    }
    return r;
}

MuBound mu_bounds(const Scalar& c, const Scalar& k, const Scalar& kappa, int n, const Scalar& root) {
    if (n < 2) throw std::invalid_argument("mu_bounds: n must be at least 2");
    MuBound b;
    b.bound1 = factorial(n) * power(Scalar(n - 1), n - 1) * power(2 * k, n - 1) * power(c, n - 2) * root;
    b.bound0 = power(Scalar(2), n - 1) * factorial(n) * power(kappa, n - 1) * power(c, n - 2) * root;
    return b;
}

std::vector<Scalar> gamma(int pmax) {
    // √(1−t) = Σ_p binom(1/2,p)(−t)^p
    std::vector<Scalar> g;
    Scalar b = 1;  // binom(1/2, p)·(−1)^p
    for (int p = 0; p <= pmax; ++p) {
        if (p > 0) b *= -(Scalar(1, 2) - (p - 1)) / p;
        g.push_back(p == 0 ? Scalar(Scalar(1, 2) - b / 4) : Scalar(-b / 4));
    }
    return g;
}

Scalar gamma_convolution(const std::vector<Scalar>& g, int p, int q) {
    // coefficient of t^q in (Σ γ_i t^i)^p
    std::vector<Scalar> acc(q + 1, Scalar(0));
    acc[0] = 1;
    for (int r = 0; r < p; ++r) {
        std::vector<Scalar> nxt(q + 1, Scalar(0));
        for (int i = 0; i <= q; ++i)
            for (int j = 0; i + j <= q; ++j) nxt[i + j] += acc[i] * g.at(j);
        acc = std::move(nxt);
    }
    return acc[q];
}

namespace {

// Upper bound for Σ_{p≥2} γ_p s^{p−1}, 0 < s < 1: the first terms exactly, then γ_p decreasing bounds the rest
// by a geometric series.
Scalar tail_upper(const Scalar& s) {
    constexpr int N = 40;
    static const auto g = gamma(N + 1);
    Scalar sum = 0, sp = 1;
    for (int p = 2; p <= N; ++p) {
        sp *= s;
        sum += g[p] * sp;
    }
    return sum + g[N + 1] * sp * s / (1 - s);
}

}  // namespace

Certificate certify_inverse_convergence(const std::vector<Scalar>& f_norms, const Scalar& g1_norm, int cap) {
    Certificate c;
    if (static_cast<int>(f_norms.size()) < cap) throw std::invalid_argument("certify: need norms up to cap");
    auto g = gamma(std::max(cap, 1));
    c.R = 1;
    c.C = 0;
    for (int p = 2; p <= cap; ++p) c.C = std::max(c.C, Scalar(f_norms[p - 1] / g[p]));
    if (g1_norm <= 0) {
        c.note = "g1 has zero norm";
        return c;
    }
    if (c.C == 0) {
        // Strict f: any C′, R′ with ||g_1|| ≤ γ_1 C′ R′ works.
        c.C_inv = 1;
        c.R_inv = g1_norm / g[1];
        c.certified = true;
    } else {
        Scalar s(1, 2);
        for (int it = 0; it < 200 && !c.certified; ++it) {
            if (tail_upper(s) * g1_norm * c.C * c.R <= 1) {
                c.C_inv = s / c.R;
                c.R_inv = g1_norm / (g[1] * c.C_inv);
                c.certified = true;
            } else {
                s /= 2;
            }
        }
        if (!c.certified) {
            c.note = "no admissible constants within the search budget";
            return c;
        }
    }
    for (int q = 1; q <= cap; ++q) c.predicted.push_back(g[q] * c.C_inv * power(c.R_inv, q));
    return c;
}

void revalidate(Certificate& c, const std::vector<Scalar>& g_norms) {
    c.measured = g_norms;
    c.margins.clear();
    c.revalidated = c.certified && g_norms.size() <= c.predicted.size();
    for (size_t q = 0; q < g_norms.size() && q < c.predicted.size(); ++q) {
        c.margins.push_back(c.predicted[q] - g_norms[q]);
        if (c.margins.back() < 0) c.revalidated = false;
    }
}

Certificate certify_inverse(const LInftyMorphism& F, const LInftyMorphism& G, const NormModel& target, int cap) {
    if (target.mode != NormMode::Banach) throw std::invalid_argument("certify_inverse: Banach mode only");
    if (cap > F.cap || cap > G.cap) throw std::invalid_argument("certify_inverse: cap exceeds the morphisms");
    LinearMap f1 = to_linear(F.at(1));
    LinearMap id = LinearMap::identity(target.space);
    auto src_ball = subspace_ball(target, f1);
    auto tgt_ball = subspace_ball(target, id);
    std::vector<Scalar> fn, gn;
    for (int p = 1; p <= cap; ++p) {
        fn.push_back(op_norm0_subspace(F.at(p), src_ball, id, target) / factorial(p));
        gn.push_back(op_norm0_subspace(G.at(p), tgt_ball, f1, target) / factorial(p));
    }
    Certificate c = certify_inverse_convergence(fn, gn[0], cap);
    revalidate(c, gn);
    return c;
}

std::pair<Scalar, Scalar> e_enclosure(int terms) {
    Scalar s = 0, f = 1;
    for (int k = 0; k <= terms; ++k) {
        if (k > 0) f /= k;
        s += f;
    }
    // remainder Σ_{k>N} 1/k! ≤ 1/(N!·N)
    return {s, s + f / terms};
}

ClosureBound bracket_closure_bound(const std::vector<Scalar>& Q_norms, const std::vector<Scalar>& q_norms, int cap) {
    if (static_cast<int>(Q_norms.size()) < cap || static_cast<int>(q_norms.size()) < cap)
        throw std::invalid_argument("bracket_closure_bound: need norms up to cap");
    ClosureBound b;
    Scalar e_lo = e_enclosure().first;
    for (int n = 1; n <= cap; ++n) {
        Scalar f = power(Scalar(2), n - 1) * power(Scalar(n - 1), n - 1) / factorial(n - 1);
        Scalar sum = 0;
        for (int k = 1; k <= n; ++k) {
            int l = n + 1 - k;
            sum += Q_norms[l - 1] * q_norms[k - 1] + q_norms[l - 1] * Q_norms[k - 1];
        }
        b.factor.push_back(f);
        b.bound.push_back(f * sum);
        if (f > power(2 * e_lo, n - 1)) b.stirling_ok = false;
    }
    return b;
}

}  // namespace linf
