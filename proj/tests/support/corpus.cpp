#include "corpus.hpp"

#include <stdexcept>

namespace linf::testing {

namespace {

int draw(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Scalar sparse_coeff(std::mt19937_64& rng, double density) {
    if (std::uniform_real_distribution<double>(0, 1)(rng) >= density) return 0;
    return draw(rng, -3, 3);
}

}  // namespace

LinearMap inverse(const LinearMap& T) {
    std::vector<Vec> cols;
    for (int i = 0; i < T.source().dim(); ++i) cols.push_back(T.column(i));
    LinearMap inv(T.target(), T.source(), 0);
    for (int k = 0; k < T.target().dim(); ++k) {
        auto c = coordinates(cols, unit(k));
        if (!c) throw std::logic_error("inverse: singular");
        inv.set_column(k, *c);
    }
    return inv;
}

GradedSpace random_space(std::mt19937_64& rng, int dim, int dmin, int dmax) {
    std::vector<BasisElement> be;
    for (int i = 0; i < dim; ++i) be.push_back({"e" + std::to_string(i + 1), draw(rng, dmin, dmax)});
    return GradedSpace(be);
}

MultiMap random_map(std::mt19937_64& rng, const GradedSpace& s, int arity, int lin_degree, Flavor flavor,
                    double density) {
    MultiMap m(s, s, arity, lin_degree, flavor);
    for (const auto& t : m.canonical_tuples()) {
        int deg = lin_degree;
        for (int i : t) deg += s.degree(i);
        Vec v;
        for (int o = 0; o < s.dim(); ++o)
            if (s.degree(o) == deg)
                if (Scalar c = sparse_coeff(rng, density); c != 0) v[o] = c;
        if (!v.empty()) m.set(t, v);
    }
    return m;
}

DGLA make_dgla(const std::vector<int>& degrees, const std::map<int, Vec>& d,
               const std::map<std::pair<int, int>, Vec>& br) {
    std::vector<BasisElement> be;
    for (size_t i = 0; i < degrees.size(); ++i) be.push_back({"e" + std::to_string(i + 1), degrees[i]});
    DGLA L;
    L.space = GradedSpace(be);
    L.d = LinearMap(L.space, L.space, 1);
    for (const auto& [i, v] : d) L.d.set_column(i, v);
    L.bracket = MultiMap(L.space, L.space, 2, 0, Flavor::Antisymmetric);
    for (const auto& [k, v] : br)
        if (k.first <= k.second && !v.empty()) L.bracket.add({k.first, k.second}, v);
    return L;
}

DGLA random_12(std::mt19937_64& rng, int n1, int n2) {
    std::vector<int> deg(n1, 1);
    deg.insert(deg.end(), n2, 2);
    std::map<int, Vec> d;
    std::map<std::pair<int, int>, Vec> br;
    // d of rank one keeps H¹ nonzero.
    Vec v;
    while (v.empty())
        for (int k = 0; k < n2; ++k)
            if (Scalar c = sparse_coeff(rng, 0.7); c != 0) v[n1 + k] = c;
    for (int i = 0; i < n1; ++i)
        if (Scalar c = sparse_coeff(rng, 0.7); c != 0) d[i] = scaled(v, c);
    for (int i = 0; i < n1; ++i)
        for (int j = i; j < n1; ++j)
            for (int k = 0; k < n2; ++k)
                if (Scalar c = sparse_coeff(rng, 0.8); c != 0) br[{i, j}][n1 + k] = c;
    return make_dgla(deg, d, br);
}

DGLA weighted(std::mt19937_64& rng, const std::vector<int>& w1, const std::vector<int>& w2) {
    int n1 = static_cast<int>(w1.size()), n2 = static_cast<int>(w2.size());
    std::vector<int> deg{0};
    deg.insert(deg.end(), n1, 1);
    deg.insert(deg.end(), n2, 2);
    int o1 = 1, o2 = 1 + n1;
    std::map<int, Vec> d;
    std::map<std::pair<int, int>, Vec> br;
    for (int i = 0; i < n1; ++i)
        if (w1[i]) br[{0, o1 + i}][o1 + i] = w1[i];
    for (int k = 0; k < n2; ++k)
        if (w2[k]) br[{0, o2 + k}][o2 + k] = w2[k];
    for (int i = 0; i < n1; ++i)
        for (int j = i; j < n1; ++j)
            for (int k = 0; k < n2; ++k)
                if (w2[k] == w1[i] + w1[j])
                    if (Scalar c = sparse_coeff(rng, 0.8); c != 0) br[{o1 + i, o1 + j}][o2 + k] = c;
    for (int i = 0; i < n1; ++i)
        for (int k = 0; k < n2; ++k)
            if (w2[k] == w1[i])
                if (Scalar c = sparse_coeff(rng, 0.8); c != 0) d[o1 + i][o2 + k] = c;
    return make_dgla(deg, d, br);
}

DGLA weighted_exact(std::mt19937_64& rng, const std::vector<int>& w1, const std::vector<int>& w2) {
    std::vector<int> ww{0};
    ww.insert(ww.end(), w1.begin(), w1.end());
    DGLA L = weighted(rng, ww, w2);
    // v0 = e2 brackets only with x (trivially, weight 0); d x = c v0, d v0 = 0.
    MultiMap b(L.space, L.space, 2, 0, Flavor::Antisymmetric);
    for (const auto& [k, v] : L.bracket.coeffs())
        if (!((k[0] == 1 || k[1] == 1) && k[0] != 0)) b.set(k, v);
    L.bracket = b;
    int c[] = {1, 2, -1};
    L.d.set_column(0, {{1, c[draw(rng, 0, 2)]}});
    L.d.set_column(1, {});
    return L;
}

DGLA upper_triangular(const std::vector<int>& p, const std::map<std::pair<int, int>, int>& delta) {
    int m = static_cast<int>(p.size());
    std::vector<std::pair<int, int>> basis;
    std::map<std::pair<int, int>, int> idx;
    std::vector<int> deg;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            idx[{i, j}] = static_cast<int>(basis.size());
            basis.emplace_back(i, j);
            deg.push_back(p[i] - p[j]);
        }
    using Mat = std::map<std::pair<int, int>, Scalar>;
    auto mul = [](const Mat& a, const Mat& b) {
        Mat r;
        for (const auto& [ka, x] : a)
            for (const auto& [kb, y] : b)
                if (ka.second == kb.first) r[{ka.first, kb.second}] += x * y;
        return r;
    };
    auto to_vec = [&](const Mat& a) {
        Vec v;
        for (const auto& [k, x] : a)
            if (x != 0) v[idx.at(k)] = x;
        return v;
    };
    auto comm = [&](const Mat& a, int da, const Mat& b, int db) {
        Mat r = mul(a, b);
        for (const auto& [k, x] : mul(b, a)) r[k] -= parity_sign(static_cast<long>(da) * db) * x;
        return to_vec(r);
    };
    Mat dl;
    for (const auto& [k, c] : delta) {
        if (p[k.first] - p[k.second] != 1) throw std::invalid_argument("delta entry of wrong degree");
        dl[k] = c;
    }
    if (!to_vec(mul(dl, dl)).empty()) throw std::invalid_argument("delta squared nonzero");
    std::map<int, Vec> d;
    std::map<std::pair<int, int>, Vec> br;
    int n = static_cast<int>(basis.size());
    for (int a = 0; a < n; ++a) {
        Mat A{{basis[a], 1}};
        d[a] = comm(dl, 1, A, deg[a]);
        for (int b = a; b < n; ++b) br[{a, b}] = comm(A, deg[a], Mat{{basis[b], 1}}, deg[b]);
    }
    return make_dgla(deg, d, br);
}

LinearMap random_automorphism(std::mt19937_64& rng, const GradedSpace& s) {
    int n = s.dim();
    LinearMap T(s, s, 0);
    while (true) {
        std::vector<Vec> cols(n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                if (s.degree(i) != s.degree(j)) continue;
                int c = i == j ? std::vector<int>{1, -1, 2}[draw(rng, 0, 2)] : draw(rng, -2, 2);
                if (c) cols[j][i] = c;
            }
        if (rank(cols) < n) continue;
        for (int j = 0; j < n; ++j) T.set_column(j, cols[j]);
        return T;
    }
}

DGLA transport(const DGLA& L, const LinearMap& T) {
    LinearMap Ti = inverse(T);
    DGLA R;
    R.space = L.space;
    R.d = compose(Ti, compose(L.d, T));
    R.bracket = postcompose(Ti, pullback(L.bracket, T, L.space));
    return R;
}

DGLA change_basis(const DGLA& L, std::mt19937_64& rng) { return transport(L, random_automorphism(rng, L.space)); }

Splitting random_splitting(const DGLA& L, std::mt19937_64& rng) {
    LinearMap eta = build_splitting(L).eta;
    LinearMap R(L.space, L.space, -1);
    for (int j = 0; j < L.space.dim(); ++j)
        for (int i = 0; i < L.space.dim(); ++i)
            if (L.space.degree(i) == L.space.degree(j) - 1)
                if (Scalar c = sparse_coeff(rng, 0.5); c != 0) R.add_entry(j, i, c);
    LinearMap eta0 = add(add(eta, R), scaled(compose(eta, compose(L.d, compose(R, compose(L.d, eta)))), -1));
    return normalize_splitting(L, eta0);
}

std::vector<Sample> corpus(int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::vector<Sample> out;
    std::vector<std::pair<std::vector<int>, std::map<std::pair<int, int>, int>>> tri = {
        {{1, 0, 0}, {{{0, 1}, 1}, {{0, 2}, 2}}},
        {{1, 0, -1}, {{{0, 1}, 1}}},
        {{0, 1, 0}, {{{1, 2}, 1}}},
        {{1, 0, 0}, {{{0, 1}, 1}}},
        {{0, 0, -1}, {{{0, 2}, 1}, {{1, 2}, -1}}},
    };
    auto weights = [&](int n) {
        std::vector<int> w;
        for (int i = 0; i < n; ++i) w.push_back(std::vector<int>{1, -1, 2}[draw(rng, 0, 2)]);
        return w;
    };
    // Weights of V2 drawn from those of V1 and their pairwise sums, so d and the bracket survive.
    auto weights2 = [&](const std::vector<int>& w1, int n) {
        std::vector<int> pool = w1;
        for (size_t i = 0; i < w1.size(); ++i)
            for (size_t j = i; j < w1.size(); ++j) pool.push_back(w1[i] + w1[j]);
        std::vector<int> w;
        for (int i = 0; i < n; ++i) w.push_back(pool[draw(rng, 0, static_cast<int>(pool.size()) - 1)]);
        return w;
    };
    for (int i = 0; static_cast<int>(out.size()) < count; ++i) {
        DGLA L;
        std::string label;
        switch (i % 6) {
            case 0:
            case 3:
            case 5: {
                int n1 = draw(rng, 3, 4), n2 = draw(rng, 2, 6 - n1);
                L = random_12(rng, n1, n2);
                label = "random12";
                break;
            }
            case 1: {
                int n1 = draw(rng, 1, 3), n2 = draw(rng, 1, 5 - n1);
                auto w1 = weights(n1);
                L = weighted(rng, w1, weights2(w1, n2));
                label = "weighted";
                break;
            }
            case 4: {
                int n1 = draw(rng, 1, 2), n2 = draw(rng, 1, 4 - n1);
                auto w1 = weights(n1);
                L = weighted_exact(rng, w1, weights2(w1, n2));
                label = "weighted-exact";
                break;
            }
            default: {
                const auto& [p, dl] = tri[(i / 6) % tri.size()];
                L = upper_triangular(p, dl);
                label = "upper-triangular";
            }
        }
        L = change_basis(L, rng);
        if (!validate_dgla(L).valid) throw std::logic_error("corpus: invalid DGLA (" + label + ")");
        Splitting eta = random_splitting(L, rng);
        out.push_back({label + "#" + std::to_string(i), std::move(L), std::move(eta)});
    }
    return out;
}

}  // namespace linf::testing
