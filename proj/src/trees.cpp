#include "linf/trees.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace linf {

Tree::Tree() = default;

int Tree::leaves() const { return p_ ? p_->leaves : 1; }

Tree Tree::node(const Tree& first, const Tree& second) {
    Tree t;
    t.p_ = std::make_shared<const Node>(Node{first, second, first.leaves() + second.leaves()});
    return t;
}

const Tree& Tree::first() const {
    if (!p_) throw std::invalid_argument("leaf has no children");
    return p_->first;
}

const Tree& Tree::second() const {
    if (!p_) throw std::invalid_argument("leaf has no children");
    return p_->second;
}

std::string Tree::str() const {
    if (!p_) return ".";
    return "(" + p_->first.str() + p_->second.str() + ")";
}

namespace {

Tree parse_at(std::string_view s, size_t& pos) {
    if (pos >= s.size()) throw std::invalid_argument("tree: unexpected end of input");
    if (s[pos] == '.') {
        ++pos;
        return Tree::leaf();
    }
    if (s[pos] != '(') throw std::invalid_argument("tree: unexpected '" + std::string(1, s[pos]) + "'");
    ++pos;
    Tree a = parse_at(s, pos);
    Tree b = parse_at(s, pos);
    if (pos >= s.size() || s[pos] != ')') throw std::invalid_argument("tree: expected ')'");
    ++pos;
    return Tree::node(a, b);
}

}  // namespace

Tree Tree::parse(std::string_view text) {
    size_t pos = 0;
    Tree t = parse_at(text, pos);
    if (pos != text.size()) throw std::invalid_argument("tree: trailing characters");
    return t;
}

bool Tree::operator==(const Tree& o) const {
    if (p_ == o.p_) return true;
    if (!p_ || !o.p_) return false;
    return p_->leaves == o.p_->leaves && p_->first == o.p_->first && p_->second == o.p_->second;
}

std::strong_ordering Tree::operator<=>(const Tree& o) const {
    if (!p_ && !o.p_) return std::strong_ordering::equal;
    if (!p_) return std::strong_ordering::less;
    if (!o.p_) return std::strong_ordering::greater;
    if (auto c = p_->first <=> o.p_->first; c != 0) return c;
    return p_->second <=> o.p_->second;
}

std::string path_str(const RamPath& p) {
    std::string s;
    for (int c : p) s += static_cast<char>('0' + c);
    return s;
}

std::vector<Tree> enumerate_ot(int n) {
    if (n <= 0) throw std::invalid_argument("enumerate_ot: n must be positive");
    static std::vector<std::vector<Tree>> cache{{}, {Tree::leaf()}};
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    while (static_cast<int>(cache.size()) <= n) {
        int k = static_cast<int>(cache.size());
        std::vector<Tree> out;
        for (int a = 1; a < k; ++a)
            for (const auto& x : cache[a])
                for (const auto& y : cache[k - a]) out.push_back(add_trees(x, y));
        cache.push_back(std::move(out));
    }
    return cache[n];
}

Tree left_comb(int n) {
    Tree t;
    for (int i = 1; i < n; ++i) t = Tree::node(t, Tree::leaf());
    return t;
}

Tree right_comb(int n) {
    Tree t;
    for (int i = 1; i < n; ++i) t = Tree::node(Tree::leaf(), t);
    return t;
}

namespace {

void collect(const Tree& t, RamPath& p, std::vector<RamPath>* leaves, std::vector<RamPath>* nodes) {
    if (t.is_leaf()) {
        if (leaves) leaves->push_back(p);
        return;
    }
    if (nodes) nodes->push_back(p);
    p.push_back(1);
    collect(t.first(), p, leaves, nodes);
    p.back() = 2;
    collect(t.second(), p, leaves, nodes);
    p.pop_back();
}

}  // namespace

std::vector<RamPath> leaf_paths(const Tree& t) {
    std::vector<RamPath> out;
    RamPath p;
    collect(t, p, &out, nullptr);
    return out;
}

std::vector<RamPath> node_paths(const Tree& t) {
    std::vector<RamPath> out;
    RamPath p;
    collect(t, p, nullptr, &out);
    return out;
}

const Tree& subtree(const Tree& t, const RamPath& at) {
    const Tree* cur = &t;
    for (int c : at) {
        if (cur->is_leaf()) throw std::invalid_argument("path leaves the tree");
        if (c == 1)
            cur = &cur->first();
        else if (c == 2)
            cur = &cur->second();
        else
            throw std::invalid_argument("path letters must be 1 or 2");
    }
    return *cur;
}

bool addresses_node(const Tree& t, const RamPath& at) {
    try {
        return !subtree(t, at).is_leaf();
    } catch (const std::invalid_argument&) {
        return false;
    }
}

int s_leaf(const Tree& t, int i) {
    auto lp = leaf_paths(t);
    if (i < 1 || i > static_cast<int>(lp.size())) throw std::invalid_argument("leaf index out of range");
    int s = 0;
    for (const auto& k : node_paths(t))
        if (k < lp[i - 1]) ++s;
    return s;
}

int w_leaf(const Tree& t, int i) { return s_leaf(t, i) - (i - 1); }

int ones_on_path(const Tree& t, int i) {
    auto lp = leaf_paths(t);
    if (i < 1 || i > static_cast<int>(lp.size())) throw std::invalid_argument("leaf index out of range");
    return static_cast<int>(std::count(lp[i - 1].begin(), lp[i - 1].end(), 1));
}

int e_sign(const Tree& t) {
    if (t.is_leaf()) return 1;
    long s = 0;
    for (int i = 1; i <= t.leaves(); ++i) s += w_leaf(t, i);
    return parity_sign(s);
}

Tree add_trees(const Tree& a, const Tree& b) { return Tree::node(a, b); }

namespace {

Tree replace_at(const Tree& t, const RamPath& at, size_t pos, const Tree& with) {
    if (pos == at.size()) return with;
    if (t.is_leaf()) throw std::invalid_argument("path leaves the tree");
    if (at[pos] == 1) return Tree::node(replace_at(t.first(), at, pos + 1, with), t.second());
    return Tree::node(t.first(), replace_at(t.second(), at, pos + 1, with));
}

Tree graft(const Tree& t, const std::vector<Tree>& inners, size_t& next) {
    if (t.is_leaf()) return inners[next++];
    Tree a = graft(t.first(), inners, next);
    Tree b = graft(t.second(), inners, next);
    return Tree::node(a, b);
}

}  // namespace

Tree subtract(const Tree& t, const RamPath& k) {
    if (!addresses_node(t, k)) throw std::invalid_argument("subtract: path does not address a ramification");
    return replace_at(t, k, 0, Tree::leaf());
}

Tree compose_trees(const Tree& outer, const std::vector<Tree>& inners) {
    if (static_cast<int>(inners.size()) != outer.leaves())
        throw std::invalid_argument("compose_trees: need one inner tree per leaf");
    size_t next = 0;
    return graft(outer, inners, next);
}

namespace {

int family_degree(const Tree& t, const RamPath& at, const NodeMaps& B) {
    const Tree& s = subtree(t, at);
    int d = 0;
    for (const auto& p : node_paths(s)) {
        RamPath q = at;
        q.insert(q.end(), p.begin(), p.end());
        d += B(q).lin_degree();
    }
    return d;
}

NodeMaps lookup(const BilinearFamily& B) {
    return [&B](const RamPath& p) -> const MultiMap& {
        auto it = B.find(p);
        if (it == B.end()) throw std::invalid_argument("bilinear family has no map at " + path_str(p));
        return it->second;
    };
}

}  // namespace

Vec evaluate_on(const Tree& t, const NodeMaps& B, const std::vector<Vec>& args, const GradedSpace& space) {
    if (static_cast<int>(args.size()) != t.leaves()) throw std::invalid_argument("evaluate: wrong number of arguments");
    std::function<Vec(const Tree&, RamPath&, int)> rec = [&](const Tree& s, RamPath& p, int first) -> Vec {
        if (s.is_leaf()) return args[first];
        int n1 = s.first().leaves();
        p.push_back(1);
        Vec x = rec(s.first(), p, first);
        p.back() = 2;
        Vec y = x.empty() ? Vec{} : rec(s.second(), p, first + n1);
        int dr = x.empty() || y.empty() ? 0 : family_degree(t, p, B);
        p.pop_back();
        if (y.empty()) return {};
        long da = 0;
        for (int i = first; i < first + n1; ++i) da += space.degree_of(args[i]).value_or(0);
        return scaled(B(p).eval({x, y}), parity_sign(da * dr));
    };
    RamPath p;
    return rec(t, p, 0);
}

Vec evaluate_on(const Tree& t, const BilinearFamily& B, const std::vector<Vec>& args, const GradedSpace& space) {
    return evaluate_on(t, lookup(B), args, space);
}

MultiMap evaluate(const Tree& t, const BilinearFamily& B) {
    if (B.empty()) throw std::invalid_argument("evaluate: empty family (use the identity for the one-leaf tree)");
    const MultiMap& any = B.begin()->second;
    int deg = 0;
    for (const auto& p : node_paths(t)) {
        auto it = B.find(p);
        if (it == B.end()) throw std::invalid_argument("bilinear family has no map at " + path_str(p));
        deg += it->second.lin_degree();
    }
    if (B.size() != static_cast<size_t>(t.nodes())) throw std::invalid_argument("bilinear family has extra maps");
    MultiMap r(any.source(), any.target(), t.leaves(), deg, Flavor::Plain);
    for (const auto& k : r.canonical_tuples()) {
        std::vector<Vec> args;
        for (int i : k) args.push_back(unit(i));
        r.add(k, evaluate_on(t, B, args, any.source()));
    }
    return r;
}

Vec antisymmetrized(const Tree& t, const NodeMaps& B, const std::vector<Vec>& args, const GradedSpace& space) {
    int n = t.leaves();
    if (static_cast<int>(args.size()) != n) throw std::invalid_argument("antisymmetrized: wrong number of arguments");
    std::vector<int> deg(n);
    for (int i = 0; i < n; ++i) {
        if (args[i].empty()) return {};
        deg[i] = *space.degree_of(args[i]);
    }
    std::map<std::pair<RamPath, unsigned>, Vec> memo;
    std::map<RamPath, int> fdeg;
    std::function<Vec(const Tree&, RamPath&, unsigned)> rec = [&](const Tree& s, RamPath& p, unsigned mask) -> Vec {
        if (s.is_leaf()) return args[__builtin_ctz(mask)];
        auto key = std::make_pair(p, mask);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::vector<int> el;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1u) el.push_back(i);
        int k = static_cast<int>(el.size());
        int n1 = s.first().leaves();
        RamPath p2 = p;
        p2.push_back(2);
        if (!fdeg.count(p2)) fdeg[p2] = family_degree(t, p2, B);
        int dr = fdeg[p2];
        std::vector<int> local(k);
        for (int i = 0; i < k; ++i) local[i] = deg[el[i]];
        Vec acc;
        const MultiMap& b = B(p);
        for (const auto& sh : shuffles(n1, k)) {
            unsigned m1 = 0;
            long d1 = 0;
            for (int i = 0; i < n1; ++i) {
                m1 |= 1u << el[sh.images[i] - 1];
                d1 += deg[el[sh.images[i] - 1]];
            }
            p.push_back(1);
            Vec x = rec(s.first(), p, m1);
            p.back() = 2;
            Vec y = x.empty() ? Vec{} : rec(s.second(), p, mask & ~m1);
            p.pop_back();
            if (y.empty()) continue;
            axpy(acc, chi_sign(sh, local) * parity_sign(d1 * dr), b.eval({x, y}));
        }
        memo.emplace(key, acc);
        return acc;
    };
    RamPath p;
    return rec(t, p, (1u << n) - 1);
}

int composition_sign(const Tree& outer, const std::map<RamPath, int>& outer_degrees,
                     const std::vector<int>& inner_degrees) {
    auto lp = leaf_paths(outer);
    if (inner_degrees.size() != lp.size()) throw std::invalid_argument("composition_sign: one degree per leaf");
    auto np = node_paths(outer);
    for (const auto& p : np)
        if (!outer_degrees.count(p)) throw std::invalid_argument("composition_sign: missing outer degree");
    long e = 0;
    for (size_t i = 0; i + 1 < lp.size(); ++i) {
        long later = 0;
        for (const auto& p : np)
            if (p > lp[i]) later += outer_degrees.at(p);
        e += static_cast<long>(inner_degrees[i]) * later;
    }
    return parity_sign(e);
}

std::pair<BilinearFamily, std::vector<BilinearFamily>> split_family(const Tree& outer, const std::vector<Tree>& inners,
                                                                    const BilinearFamily& B) {
    Tree composed = compose_trees(outer, inners);
    BilinearFamily b0;
    std::vector<BilinearFamily> bi(inners.size());
    for (const auto& p : node_paths(outer)) b0.emplace(p, B.at(p));
    auto lp = leaf_paths(outer);
    for (size_t i = 0; i < inners.size(); ++i)
        for (const auto& q : node_paths(inners[i])) {
            RamPath full = lp[i];
            full.insert(full.end(), q.begin(), q.end());
            auto it = B.find(full);
            if (it == B.end()) throw std::invalid_argument("split_family: family does not fit the composition");
            bi[i].emplace(q, it->second);
        }
    if (B.size() != static_cast<size_t>(composed.nodes()))
        throw std::invalid_argument("split_family: family does not fit the composition");
    return {b0, bi};
}

GraftData graft_decompose(const Tree& Phi, const RamPath& K, const Permutation& sigma) {
    if (K.empty()) throw std::invalid_argument("graft_decompose: K must not be the root");
    if (!addresses_node(Phi, K)) throw std::invalid_argument("graft_decompose: K must address a ramification");
    int n = Phi.leaves();
    if (sigma.size() != n) throw std::invalid_argument("graft_decompose: sigma has wrong size");
    GraftData g;
    g.phi = subtree(Phi, K);
    g.k = g.phi.leaves();
    g.psi = subtract(Phi, K);
    int k = g.k, l = n + 1 - k;
    int r = 0;
    for (const auto& lp : leaf_paths(Phi))
        if (lp < K) ++r;
    std::vector<int> block, rest;
    std::vector<bool> in(n + 1, false);
    for (int i = r + 1; i <= r + k; ++i) in[sigma(i)] = true;
    for (int x = 1; x <= n; ++x) (in[x] ? block : rest).push_back(x);
    block.insert(block.end(), rest.begin(), rest.end());
    g.rho = Permutation(block);
    Permutation rinv = g.rho.inverse();
    std::vector<int> delta(k), gamma(l);
    for (int i = 1; i <= k; ++i) delta[i - 1] = rinv(sigma(r + i));
    for (int i = 1; i <= l; ++i) {
        if (i <= r)
            gamma[i - 1] = rinv(sigma(i)) - k + 1;
        else if (i == r + 1)
            gamma[i - 1] = 1;
        else
            gamma[i - 1] = rinv(sigma(i + k - 1)) - k + 1;
    }
    g.delta = Permutation(delta);
    g.gamma = Permutation(gamma);
    return g;
}

GraftTriple graft_compose(const GraftData& g) {
    int k = g.k, l = g.psi.leaves(), n = k + l - 1;
    if (k < 2 || k > n - 1) throw std::invalid_argument("graft_compose: need 2 <= k <= n-1");
    if (g.phi.leaves() != k || g.rho.size() != n || g.gamma.size() != l || g.delta.size() != k)
        throw std::invalid_argument("graft_compose: inconsistent sizes");
    for (int i = 1; i < k; ++i)
        if (g.rho(i) > g.rho(i + 1)) throw std::invalid_argument("graft_compose: rho is not a shuffle");
    for (int i = k + 1; i < n; ++i)
        if (g.rho(i) > g.rho(i + 1)) throw std::invalid_argument("graft_compose: rho is not a shuffle");
    int r = g.gamma.inverse()(1) - 1;
    std::vector<Tree> inners(l, Tree::leaf());
    inners[r] = g.phi;
    GraftTriple t;
    t.Phi = compose_trees(g.psi, inners);
    t.K = leaf_paths(g.psi)[r];
    std::vector<int> s(n);
    for (int i = 1; i <= n; ++i) {
        if (i <= r)
            s[i - 1] = g.rho(g.gamma(i) + k - 1);
        else if (i <= r + k)
            s[i - 1] = g.rho(g.delta(i - r));
        else
            s[i - 1] = g.rho(g.gamma(i - (k - 1)) + k - 1);
    }
    t.sigma = Permutation(s);
    return t;
}

std::vector<GraftTriple> all_graft_triples(int n) {
    std::vector<GraftTriple> out;
    auto perms = all_permutations(n);
    for (const auto& Phi : enumerate_ot(n))
        for (const auto& K : node_paths(Phi)) {
            if (K.empty()) continue;
            for (const auto& s : perms) out.push_back({Phi, K, s});
        }
    return out;
}

std::vector<GraftData> all_graft_data(int n) {
    std::vector<GraftData> out;
    for (int k = 2; k <= n - 1; ++k) {
        int l = n + 1 - k;
        auto pl = all_permutations(l), pk = all_permutations(k);
        for (const auto& phi : enumerate_ot(k))
            for (const auto& psi : enumerate_ot(l))
                for (const auto& rho : shuffles(k, n))
                    for (const auto& gamma : pl)
                        for (const auto& delta : pk) out.push_back({k, phi, psi, rho, gamma, delta});
    }
    return out;
}

WiwoSigns wiwo_sign(const GraftData& g, const std::map<RamPath, int>& degrees) {
    GraftTriple t = graft_compose(g);
    int r = g.gamma.inverse()(1) - 1;
    long bpp = 0, w = 0;
    for (const auto& p : node_paths(t.Phi)) {
        auto it = degrees.find(p);
        if (it == degrees.end()) throw std::invalid_argument("wiwo_sign: missing degree");
        bool inside = p.size() >= t.K.size() && std::equal(t.K.begin(), t.K.end(), p.begin());
        if (inside)
            bpp += it->second;
        else if (p > t.K)
            w += it->second;
    }
    long e = r + static_cast<long>(r) * g.k;
    return {parity_sign(e), parity_sign(e + w * bpp)};
}

}  // namespace linf
