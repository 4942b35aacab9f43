#include "linf/graded.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace linf {

Scalar parse_scalar(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto slash = s.find('/');
    auto check_int = [&](const std::string& part) {
        size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        if (i == part.size()) throw std::invalid_argument("bad rational '" + s + "'");
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') throw std::invalid_argument("bad rational '" + s + "'");
    };
    if (slash == std::string::npos) {
        check_int(s);
        return Scalar(mpz_class(s[0] == '+' ? s.substr(1) : s));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    check_int(num);
    check_int(den);
    mpz_class q(den[0] == '+' ? den.substr(1) : den);
    if (q == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Scalar r(mpz_class(num[0] == '+' ? num.substr(1) : num), q);
    r.canonicalize();
    return r;
}

Scalar factorial(int n) {
    Scalar f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::string format_scalar(const Scalar& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

void axpy(Vec& y, const Scalar& a, const Vec& x) {
    if (sgn(a) == 0) return;
    for (const auto& [i, c] : x) {
        auto it = y.find(i);
        if (it == y.end()) {
            y.emplace(i, a * c);
        } else {
            it->second += a * c;
            if (sgn(it->second) == 0) y.erase(it);
        }
    }
}

Vec add(const Vec& x, const Vec& y) {
    Vec r = x;
    axpy(r, 1, y);
    return r;
}

Vec sub(const Vec& x, const Vec& y) {
    Vec r = x;
    axpy(r, -1, y);
    return r;
}

Vec scaled(const Vec& x, const Scalar& a) {
    Vec r;
    if (sgn(a) == 0) return r;
    for (const auto& [i, c] : x) r.emplace(i, c * a);
    return r;
}

Vec unit(int i) { return Vec{{i, Scalar(1)}}; }

GradedSpace::GradedSpace(std::vector<BasisElement> basis) : basis_(std::move(basis)) {
    for (size_t i = 0; i < basis_.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (basis_[i].name == basis_[j].name)
                throw std::invalid_argument("duplicate basis name '" + basis_[i].name + "'");
}

int GradedSpace::index_of(std::string_view name) const {
    for (int i = 0; i < dim(); ++i)
        if (basis_[i].name == name) return i;
    return -1;
}

std::vector<int> GradedSpace::degrees() const {
    std::vector<int> r;
    for (const auto& b : basis_) r.push_back(b.degree);
    return r;
}

GradedSpace GradedSpace::shifted(int by) const {
    auto b = basis_;
    for (auto& e : b) e.degree += by;
    return GradedSpace(std::move(b));
}

std::optional<int> GradedSpace::degree_of(const Vec& v) const {
    std::optional<int> d;
    for (const auto& [i, c] : v) {
        int di = degree(i);
        if (d && *d != di) throw std::invalid_argument("inhomogeneous vector");
        d = di;
    }
    return d;
}

GradedSpace direct_sum(const GradedSpace& a, const GradedSpace& b) {
    auto basis = a.basis();
    basis.insert(basis.end(), b.basis().begin(), b.basis().end());
    return GradedSpace(std::move(basis));
}

LinearMap::LinearMap(GradedSpace source, GradedSpace target, int degree)
    : source_(std::move(source)), target_(std::move(target)), degree_(degree), cols_(source_.dim()) {}

LinearMap LinearMap::identity(const GradedSpace& s) {
    LinearMap m(s, s, 0);
    for (int i = 0; i < s.dim(); ++i) m.cols_[i] = unit(i);
    return m;
}

LinearMap LinearMap::zero(const GradedSpace& s, const GradedSpace& t, int degree) {
    return LinearMap(s, t, degree);
}

void LinearMap::set_column(int i, Vec v) {
    for (const auto& [j, c] : v)
        if (target_.degree(j) != source_.degree(i) + degree_)
            throw std::invalid_argument("linear map entry violates degree");
    cols_.at(i) = std::move(v);
}

void LinearMap::add_entry(int from, int to, const Scalar& c) {
    if (target_.degree(to) != source_.degree(from) + degree_)
        throw std::invalid_argument("linear map entry " + source_.name(from) + " -> " + target_.name(to) +
                                    " violates degree");
    axpy(cols_.at(from), c, unit(to));
}

Vec LinearMap::apply(const Vec& x) const {
    Vec r;
    for (const auto& [i, c] : x) axpy(r, c, cols_.at(i));
    return r;
}

bool LinearMap::is_zero() const {
    return std::all_of(cols_.begin(), cols_.end(), [](const Vec& v) { return v.empty(); });
}

LinearMap compose(const LinearMap& a, const LinearMap& b) {
    if (!(a.source() == b.target())) throw std::invalid_argument("compose: space mismatch");
    LinearMap r(b.source(), a.target(), a.degree() + b.degree());
    for (int i = 0; i < b.source().dim(); ++i) r.set_column(i, a.apply(b.column(i)));
    return r;
}

LinearMap add(const LinearMap& a, const LinearMap& b) {
    if (!(a.source() == b.source()) || !(a.target() == b.target()) || a.degree() != b.degree())
        throw std::invalid_argument("add: shape mismatch");
    LinearMap r = a;
    for (int i = 0; i < a.source().dim(); ++i) r.set_column(i, linf::add(a.column(i), b.column(i)));
    return r;
}

LinearMap scaled(const LinearMap& a, const Scalar& c) {
    LinearMap r = a;
    for (int i = 0; i < a.source().dim(); ++i) r.set_column(i, linf::scaled(a.column(i), c));
    return r;
}

Echelon echelon(const std::vector<Vec>& vectors) {
    Echelon e;
    for (const auto& v0 : vectors) {
        Vec v = v0;
        for (size_t r = 0; r < e.rows.size(); ++r) {
            auto it = v.find(e.pivots[r]);
            if (it != v.end()) {
                Scalar c = it->second;
                axpy(v, -c, e.rows[r]);
            }
        }
        if (v.empty()) continue;
        int p = v.begin()->first;
        Scalar inv = 1 / v.begin()->second;
        v = scaled(v, inv);
        for (auto& row : e.rows) {
            auto it = row.find(p);
            if (it != row.end()) {
                Scalar c = it->second;
                axpy(row, -c, v);
            }
        }
        e.rows.push_back(std::move(v));
        e.pivots.push_back(p);
    }
    return e;
}

int rank(const std::vector<Vec>& vectors) { return static_cast<int>(echelon(vectors).rows.size()); }

std::vector<Vec> kernel(const std::vector<Vec>& cols, int ncols) {
    // Track each reduced image together with the combination of columns producing it.
    std::vector<std::pair<Vec, Vec>> piv;
    std::vector<int> pivots;
    std::vector<Vec> basis;
    for (int i = 0; i < ncols; ++i) {
        Vec img = i < static_cast<int>(cols.size()) ? cols[i] : Vec{};
        Vec tag = unit(i);
        for (size_t r = 0; r < piv.size(); ++r) {
            auto it = img.find(pivots[r]);
            if (it != img.end()) {
                Scalar c = it->second;
                axpy(img, -c, piv[r].first);
                axpy(tag, -c, piv[r].second);
            }
        }
        if (img.empty()) {
            basis.push_back(std::move(tag));
            continue;
        }
        int p = img.begin()->first;
        Scalar inv = 1 / img.begin()->second;
        piv.emplace_back(scaled(img, inv), scaled(tag, inv));
        pivots.push_back(p);
    }
    return basis;
}

std::optional<Vec> coordinates(const std::vector<Vec>& family, const Vec& v) {
    std::vector<std::pair<Vec, Vec>> piv;
    std::vector<int> pivots;
    for (size_t i = 0; i < family.size(); ++i) {
        Vec img = family[i];
        Vec tag = unit(static_cast<int>(i));
        for (size_t r = 0; r < piv.size(); ++r) {
            auto it = img.find(pivots[r]);
            if (it != img.end()) {
                Scalar c = it->second;
                axpy(img, -c, piv[r].first);
                axpy(tag, -c, piv[r].second);
            }
        }
        if (img.empty()) throw std::invalid_argument("coordinates: family is dependent");
        int p = img.begin()->first;
        Scalar inv = 1 / img.begin()->second;
        piv.emplace_back(scaled(img, inv), scaled(tag, inv));
        pivots.push_back(p);
    }
    Vec rest = v, coords;
    for (size_t r = 0; r < piv.size(); ++r) {
        auto it = rest.find(pivots[r]);
        if (it != rest.end()) {
            Scalar c = it->second;
            axpy(rest, -c, piv[r].first);
            axpy(coords, c, piv[r].second);
        }
    }
    if (!rest.empty()) return std::nullopt;
    return coords;
}

std::vector<Vec> complete(const std::vector<Vec>& family, const std::vector<Vec>& candidates) {
    std::vector<Vec> added;
    auto all = family;
    int r = rank(all);
    for (const auto& c : candidates) {
        all.push_back(c);
        int r2 = rank(all);
        if (r2 > r) {
            added.push_back(c);
            r = r2;
        } else {
            all.pop_back();
        }
    }
    return added;
}

Permutation::Permutation(std::vector<int> im) : images(std::move(im)) {
    std::vector<bool> seen(images.size() + 1, false);
    for (int x : images) {
        if (x < 1 || x > size() || seen[x]) throw std::invalid_argument("not a permutation");
        seen[x] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 1);
    return Permutation(std::move(im));
}

Permutation Permutation::after(const Permutation& other) const {
    if (other.size() != size()) throw std::invalid_argument("permutation size mismatch");
    std::vector<int> im(size());
    for (int i = 1; i <= size(); ++i) im[i - 1] = (*this)(other(i));
    return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
    std::vector<int> im(size());
    for (int i = 1; i <= size(); ++i) im[(*this)(i) - 1] = i;
    return Permutation(std::move(im));
}

std::vector<Permutation> all_permutations(int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 1);
    std::vector<Permutation> out;
    do {
        out.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
}

int action_sign(Flavor f, const Permutation& sigma, const std::vector<int>& degrees) {
    if (static_cast<int>(degrees.size()) != sigma.size())
        throw std::invalid_argument("sign: size mismatch");
    // Bubble-sort the word σ(1)…σ(n) back to 1…n, one adjacent swap at a time.
    std::vector<int> w = sigma.images;
    int s = 1;
    int n = static_cast<int>(w.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j + 1 < n - i; ++j)
            if (w[j] > w[j + 1]) {
                if (f != Flavor::Plain) s *= swap_sign(f, degrees[w[j] - 1], degrees[w[j + 1] - 1]);
                std::swap(w[j], w[j + 1]);
            }
    return s;
}

int epsilon_sign(const Permutation& sigma, const std::vector<int>& degrees) {
    return action_sign(Flavor::Symmetric, sigma, degrees);
}

int chi_sign(const Permutation& sigma, const std::vector<int>& degrees) {
    return action_sign(Flavor::Antisymmetric, sigma, degrees);
}

std::vector<Permutation> shuffles(int k, int n) {
    if (k < 0 || k > n) throw std::invalid_argument("shuffles: need 0 <= k <= n");
    std::vector<Permutation> out;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
        std::vector<int> im;
        for (int i = 0; i < n; ++i)
            if (pick[i]) im.push_back(i + 1);
        for (int i = 0; i < n; ++i)
            if (!pick[i]) im.push_back(i + 1);
        out.emplace_back(std::move(im));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return out;
}

const char* flavor_name(Flavor f) {
    switch (f) {
        case Flavor::Symmetric: return "symmetric";
        case Flavor::Antisymmetric: return "antisymmetric";
        default: return "plain";
    }
}

MultiMap::MultiMap(GradedSpace source, GradedSpace target, int arity, int lin_degree, Flavor flavor)
    : source_(std::move(source)), target_(std::move(target)), arity_(arity), lin_degree_(lin_degree),
      flavor_(flavor) {
    if (arity < 1) throw std::invalid_argument("arity must be positive");
}

std::pair<int, MultiMap::Key> MultiMap::canonical(const Key& tuple) const {
    if (static_cast<int>(tuple.size()) != arity_) throw std::invalid_argument("tuple length != arity");
    if (flavor_ == Flavor::Plain) return {1, tuple};
    Key t = tuple;
    int s = 1;
    int n = arity_;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j + 1 < n - i; ++j)
            if (t[j] > t[j + 1]) {
                s *= swap_sign(flavor_, source_.degree(t[j]), source_.degree(t[j + 1]));
                std::swap(t[j], t[j + 1]);
            }
    for (int j = 0; j + 1 < n; ++j)
        if (t[j] == t[j + 1] && swap_sign(flavor_, source_.degree(t[j]), source_.degree(t[j])) < 0)
            return {0, t};
    return {s, t};
}

bool MultiMap::is_canonical(const Key& tuple) const {
    auto [s, t] = canonical(tuple);
    return s == 1 && t == tuple;
}

std::vector<MultiMap::Key> MultiMap::canonical_tuples() const {
    std::vector<Key> out;
    int dim = source_.dim();
    Key t(arity_, 0);
    std::vector<int> tdeg;
    for (int i = 0; i < target_.dim(); ++i) tdeg.push_back(target_.degree(i));
    auto degree_ok = [&](const Key& k) {
        int s = lin_degree_;
        for (int i : k) s += source_.degree(i);
        return std::find(tdeg.begin(), tdeg.end(), s) != tdeg.end();
    };
    if (dim == 0) return out;
    if (flavor_ == Flavor::Plain) {
        for (auto& k : all_tuples(dim, arity_))
            if (degree_ok(k)) out.push_back(k);
        return out;
    }
    // weakly increasing tuples
    std::function<void(int, int)> rec = [&](int pos, int start) {
        if (pos == arity_) {
            if (is_canonical(t) && degree_ok(t)) out.push_back(t);
            return;
        }
        for (int i = start; i < dim; ++i) {
            t[pos] = i;
            rec(pos + 1, i);
        }
    };
    rec(0, 0);
    return out;
}

void MultiMap::add(const Key& tuple, const Vec& value, const Scalar& c) {
    if (value.empty() || sgn(c) == 0) return;
    auto [s, t] = canonical(tuple);
    if (s == 0) throw std::invalid_argument("value on a tuple that must vanish");
    int d = lin_degree_;
    for (int i : tuple) d += source_.degree(i);
    for (const auto& [j, x] : value)
        if (target_.degree(j) != d) throw std::invalid_argument("multimap value violates lin_degree");
    Vec& slot = coeffs_[t];
    axpy(slot, c * s, value);
    if (slot.empty()) coeffs_.erase(t);
}

void MultiMap::set(const Key& canonical_tuple, Vec value) {
    if (!is_canonical(canonical_tuple)) throw std::invalid_argument("set: tuple not canonical");
    coeffs_.erase(canonical_tuple);
    add(canonical_tuple, value);
}

Vec MultiMap::eval_basis(const Key& tuple) const {
    auto [s, t] = canonical(tuple);
    if (s == 0) return {};
    auto it = coeffs_.find(t);
    if (it == coeffs_.end()) return {};
    return s == 1 ? it->second : linf::scaled(it->second, -1);
}

Vec MultiMap::eval(const std::vector<Vec>& args) const {
    if (static_cast<int>(args.size()) != arity_) throw std::invalid_argument("eval: wrong number of arguments");
    Vec out;
    for (const auto& a : args)
        if (a.empty()) return out;
    Key t(arity_);
    std::function<void(int, const Scalar&)> rec = [&](int pos, const Scalar& c) {
        if (pos == arity_) {
            auto [s, k] = canonical(t);
            if (s == 0) return;
            auto it = coeffs_.find(k);
            if (it != coeffs_.end()) axpy(out, s * c, it->second);
            return;
        }
        for (const auto& [i, x] : args[pos]) {
            t[pos] = i;
            rec(pos + 1, c * x);
        }
    };
    rec(0, Scalar(1));
    return out;
}

MultiMap MultiMap::scaled(const Scalar& c) const {
    MultiMap r(source_, target_, arity_, lin_degree_, flavor_);
    if (sgn(c) == 0) return r;
    for (const auto& [k, v] : coeffs_) r.coeffs_.emplace(k, linf::scaled(v, c));
    return r;
}

MultiMap& MultiMap::operator+=(const MultiMap& o) {
    if (!(source_ == o.source_) || !(target_ == o.target_) || arity_ != o.arity_ || lin_degree_ != o.lin_degree_ ||
        flavor_ != o.flavor_)
        throw std::invalid_argument("multimap sum: shape mismatch");
    for (const auto& [k, v] : o.coeffs_) add(k, v);
    return *this;
}

MultiMap& MultiMap::operator-=(const MultiMap& o) {
    *this += o.scaled(-1);
    return *this;
}

bool MultiMap::operator==(const MultiMap& o) const {
    return source_ == o.source_ && target_ == o.target_ && arity_ == o.arity_ && lin_degree_ == o.lin_degree_ &&
           flavor_ == o.flavor_ && coeffs_ == o.coeffs_;
}

MultiMap operator+(MultiMap a, const MultiMap& b) { return a += b; }
MultiMap operator-(MultiMap a, const MultiMap& b) { return a -= b; }

MultiMap from_linear(const LinearMap& m, Flavor flavor) {
    MultiMap r(m.source(), m.target(), 1, m.degree(), flavor);
    for (int i = 0; i < m.source().dim(); ++i) r.add({i}, m.column(i));
    return r;
}

LinearMap to_linear(const MultiMap& m) {
    if (m.arity() != 1) throw std::invalid_argument("to_linear: arity != 1");
    LinearMap r(m.source(), m.target(), m.lin_degree());
    for (int i = 0; i < m.source().dim(); ++i) r.set_column(i, m.eval_basis({i}));
    return r;
}

MultiMap pullback(const MultiMap& m, const LinearMap& a, const GradedSpace& new_source) {
    if (a.degree() != 0 || !(a.target() == m.source()) || !(a.source() == new_source))
        throw std::invalid_argument("pullback: shape mismatch");
    MultiMap r(new_source, m.target(), m.arity(), m.lin_degree(), m.flavor());
    for (const auto& k : r.canonical_tuples()) {
        std::vector<Vec> args;
        for (int i : k) args.push_back(a.column(i));
        r.add(k, m.eval(args));
    }
    return r;
}

MultiMap postcompose(const LinearMap& a, const MultiMap& m) {
    if (!(a.source() == m.target())) throw std::invalid_argument("postcompose: space mismatch");
    MultiMap r(m.source(), a.target(), m.arity(), m.lin_degree() + a.degree(), m.flavor());
    for (const auto& [k, v] : m.coeffs()) r.add(k, a.apply(v));
    return r;
}

MultiMap apply_alpha(const MultiMap& phi, int k, Flavor action, Flavor result_flavor) {
    int n = phi.arity();
    if (k < 1 || k > n) throw std::invalid_argument("apply_alpha: need 1 <= k <= arity");
    auto sh = shuffles(k, n);
    MultiMap r(phi.source(), phi.target(), n, phi.lin_degree(), result_flavor);
    MultiMap probe(phi.source(), phi.target(), n, phi.lin_degree(), Flavor::Plain);
    auto tuples = probe.canonical_tuples();
    for (const auto& t : tuples) {
        if (result_flavor != Flavor::Plain && !r.is_canonical(t)) continue;
        std::vector<int> degs;
        for (int i : t) degs.push_back(phi.source().degree(i));
        Vec acc;
        for (const auto& s : sh) {
            std::vector<int> permuted(n);
            for (int i = 0; i < n; ++i) permuted[i] = t[s.images[i] - 1];
            axpy(acc, action_sign(action, s, degs), phi.eval_basis(permuted));
        }
        r.add(t, acc);
    }
    return r;
}

MultiMap project(const MultiMap& phi, Flavor flavor) {
    MultiMap r(phi.source(), phi.target(), phi.arity(), phi.lin_degree(), flavor);
    for (const auto& t : r.canonical_tuples()) r.add(t, phi.eval_basis(t));
    return r;
}

int decalage_sign(const std::vector<int>& a) {
    long e = 0;
    int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i) e += static_cast<long>(n - 1 - i) * a[i];
    return parity_sign(e);
}

MultiMap decalage_down(const MultiMap& mu) {
    if (mu.flavor() != Flavor::Antisymmetric) throw std::invalid_argument("decalage_down: needs antisymmetric map");
    int n = mu.arity();
    MultiMap q(shift_down(mu.source()), shift_down(mu.target()), n, mu.lin_degree() + n - 1, Flavor::Symmetric);
    for (const auto& [k, v] : mu.coeffs()) {
        std::vector<int> a;
        for (int i : k) a.push_back(mu.source().degree(i));
        q.add(k, v, decalage_sign(a));
    }
    return q;
}

MultiMap decalage_up(const MultiMap& q) {
    if (q.flavor() != Flavor::Symmetric) throw std::invalid_argument("decalage_up: needs symmetric map");
    int n = q.arity();
    GradedSpace s = q.source().shifted(1), t = q.target().shifted(1);
    MultiMap mu(s, t, n, q.lin_degree() - n + 1, Flavor::Antisymmetric);
    for (const auto& [k, v] : q.coeffs()) {
        std::vector<int> a;
        for (int i : k) a.push_back(s.degree(i));
        mu.add(k, v, decalage_sign(a));
    }
    return mu;
}

MultiMap compose_multimap(const MultiMap& outer, int slot, const MultiMap& inner) {
    if (!(inner.target() == outer.source()) || !(inner.source() == outer.source()))
        throw std::invalid_argument("compose_multimap: space mismatch");
    if (slot < 1 || slot > outer.arity()) throw std::invalid_argument("compose_multimap: bad slot");
    int n = outer.arity() + inner.arity() - 1;
    MultiMap r(outer.source(), outer.target(), n, outer.lin_degree() + inner.lin_degree(), Flavor::Plain);
    for (const auto& t : r.canonical_tuples()) {
        long before = 0;
        for (int i = 0; i < slot - 1; ++i) before += outer.source().degree(t[i]);
        std::vector<int> in(t.begin() + slot - 1, t.begin() + slot - 1 + inner.arity());
        Vec x = inner.eval_basis(in);
        if (x.empty()) continue;
        std::vector<Vec> args;
        for (int i = 0; i < slot - 1; ++i) args.push_back(unit(t[i]));
        args.push_back(x);
        for (int i = slot - 1 + inner.arity(); i < n; ++i) args.push_back(unit(t[i]));
        r.add(t, outer.eval(args), parity_sign(before * inner.lin_degree()));
    }
    return r;
}

std::vector<std::vector<int>> all_tuples(int dim, int n) {
    std::vector<std::vector<int>> out;
    if (dim == 0) return out;
    std::vector<int> t(n, 0);
    while (true) {
        out.push_back(t);
        int i = n - 1;
        while (i >= 0 && ++t[i] == dim) t[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

}  // namespace linf
