#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace linf {

using Scalar = mpq_class;

Scalar parse_scalar(std::string_view text);
// Always "p/q", also for integers.
std::string format_scalar(const Scalar& x);
Scalar factorial(int n);

inline bool odd(long x) { return (x & 1) != 0; }
inline int parity_sign(long x) { return odd(x) ? -1 : 1; }

// Sparse vector over a fixed basis; zero entries are never stored.
using Vec = std::map<int, Scalar>;

void axpy(Vec& y, const Scalar& a, const Vec& x);
Vec add(const Vec& x, const Vec& y);
Vec sub(const Vec& x, const Vec& y);
Vec scaled(const Vec& x, const Scalar& a);
Vec unit(int i);

struct BasisElement {
    std::string name;
    int degree = 0;
    bool operator==(const BasisElement&) const = default;
};

class GradedSpace {
public:
    GradedSpace() = default;
    explicit GradedSpace(std::vector<BasisElement> basis);

    int dim() const { return static_cast<int>(basis_.size()); }
    int degree(int i) const { return basis_.at(i).degree; }
    const std::string& name(int i) const { return basis_.at(i).name; }
    const std::vector<BasisElement>& basis() const { return basis_; }
    int index_of(std::string_view name) const;
    std::vector<int> degrees() const;

    // Same names, every degree moved by `by`. L[1] is shifted(-1).
    GradedSpace shifted(int by) const;
    // Degree of a homogeneous vector; nullopt for zero; throws if inhomogeneous.
    std::optional<int> degree_of(const Vec& v) const;
    bool operator==(const GradedSpace&) const = default;

private:
    std::vector<BasisElement> basis_;
};

GradedSpace direct_sum(const GradedSpace& a, const GradedSpace& b);

class LinearMap {
public:
    LinearMap() = default;
    LinearMap(GradedSpace source, GradedSpace target, int degree);
    static LinearMap identity(const GradedSpace& s);
    static LinearMap zero(const GradedSpace& s, const GradedSpace& t, int degree);

    const GradedSpace& source() const { return source_; }
    const GradedSpace& target() const { return target_; }
    int degree() const { return degree_; }
    const Vec& column(int i) const { return cols_.at(i); }
    void set_column(int i, Vec v);
    void add_entry(int from, int to, const Scalar& c);

    Vec apply(const Vec& x) const;
    bool is_zero() const;
    bool operator==(const LinearMap&) const = default;

private:
    GradedSpace source_, target_;
    int degree_ = 0;
    std::vector<Vec> cols_;
};

// a∘b
LinearMap compose(const LinearMap& a, const LinearMap& b);
LinearMap add(const LinearMap& a, const LinearMap& b);
LinearMap scaled(const LinearMap& a, const Scalar& c);

// Exact linear algebra on lists of vectors in a space of dimension n.
struct Echelon {
    std::vector<Vec> rows;    // reduced, pivot entry 1
    std::vector<int> pivots;  // pivot index of each row
};
Echelon echelon(const std::vector<Vec>& vectors);
int rank(const std::vector<Vec>& vectors);
// Kernel of the map whose i-th column is cols[i], as vectors over 0..ncols-1.
std::vector<Vec> kernel(const std::vector<Vec>& cols, int ncols);
// Coordinates of v in a linearly independent family; nullopt if v is not in the span.
std::optional<Vec> coordinates(const std::vector<Vec>& family, const Vec& v);
// Extend `family` (independent) by unit vectors from `candidates` until it spans span(family ∪ candidates).
std::vector<Vec> complete(const std::vector<Vec>& family, const std::vector<Vec>& candidates);

struct Permutation {
    std::vector<int> images;  // 1-based

    Permutation() = default;
    explicit Permutation(std::vector<int> im);
    static Permutation identity(int n);
    int size() const { return static_cast<int>(images.size()); }
    int operator()(int i) const { return images.at(i - 1); }
    // (this∘other)(i) = this(other(i))
    Permutation after(const Permutation& other) const;
    Permutation inverse() const;
    bool operator==(const Permutation&) const = default;
    auto operator<=>(const Permutation&) const = default;
};

std::vector<Permutation> all_permutations(int n);

// m_{σ(1)}⊙…⊙m_{σ(n)} = ε(σ) m_1⊙…⊙m_n
int epsilon_sign(const Permutation& sigma, const std::vector<int>& degrees);
// a_{σ(1)}∧…∧a_{σ(n)} = χ(σ) a_1∧…∧a_n
int chi_sign(const Permutation& sigma, const std::vector<int>& degrees);
// Sh(k,n), lexicographic in the first block.
std::vector<Permutation> shuffles(int k, int n);

enum class Flavor { Symmetric, Antisymmetric, Plain };
const char* flavor_name(Flavor f);

// Sign of one adjacent swap of elements of degrees a,b under the flavor's action.
inline int swap_sign(Flavor f, int a, int b) {
    int s = parity_sign(static_cast<long>(a) * b);
    return f == Flavor::Antisymmetric ? -s : s;
}
int action_sign(Flavor f, const Permutation& sigma, const std::vector<int>& degrees);

// Degree-homogeneous n-linear map, stored on canonical basis tuples.
class MultiMap {
public:
    using Key = std::vector<int>;

    MultiMap() = default;
    MultiMap(GradedSpace source, GradedSpace target, int arity, int lin_degree, Flavor flavor);

    const GradedSpace& source() const { return source_; }
    const GradedSpace& target() const { return target_; }
    int arity() const { return arity_; }
    int lin_degree() const { return lin_degree_; }
    Flavor flavor() const { return flavor_; }
    const std::map<Key, Vec>& coeffs() const { return coeffs_; }

    // Canonical form of a basis tuple: sign 0 if the tuple is forced to vanish.
    std::pair<int, Key> canonical(const Key& tuple) const;
    bool is_canonical(const Key& tuple) const;
    // Every canonical tuple whose total degree is compatible with a nonzero value.
    std::vector<Key> canonical_tuples() const;

    // Adds value at an arbitrary tuple (sign-corrected into canonical storage).
    void add(const Key& tuple, const Vec& value, const Scalar& c = 1);
    void set(const Key& canonical_tuple, Vec value);
    Vec eval_basis(const Key& tuple) const;
    Vec eval(const std::vector<Vec>& args) const;

    bool is_zero() const { return coeffs_.empty(); }
    MultiMap scaled(const Scalar& c) const;
    MultiMap& operator+=(const MultiMap& o);
    MultiMap& operator-=(const MultiMap& o);
    bool operator==(const MultiMap& o) const;

private:
    GradedSpace source_, target_;
    int arity_ = 0;
    int lin_degree_ = 0;
    Flavor flavor_ = Flavor::Plain;
    std::map<Key, Vec> coeffs_;
};

MultiMap operator+(MultiMap a, const MultiMap& b);
MultiMap operator-(MultiMap a, const MultiMap& b);

MultiMap from_linear(const LinearMap& m, Flavor flavor = Flavor::Antisymmetric);
LinearMap to_linear(const MultiMap& m);
// m∘(a⊗…⊗a) with a of degree 0; used for basis changes.
MultiMap pullback(const MultiMap& m, const LinearMap& a, const GradedSpace& new_source);
// a∘m
MultiMap postcompose(const LinearMap& a, const MultiMap& m);

// phi∘α_{k,n}, result in `result_flavor` (checked on every computed tuple when not Plain).
MultiMap apply_alpha(const MultiMap& phi, int k, Flavor action, Flavor result_flavor);
// Canonical projection of a map to the flavor: value on canonical tuples only.
MultiMap project(const MultiMap& phi, Flavor flavor);

// Shifted space L[1] for a space L.
inline GradedSpace shift_down(const GradedSpace& s) { return s.shifted(-1); }
// Q_n(↓a_1,…,↓a_n) = (−1)^{Σ(n−i)a_i} ↓μ_n(a_1,…,a_n)
MultiMap decalage_down(const MultiMap& mu);
MultiMap decalage_up(const MultiMap& q);
int decalage_sign(const std::vector<int>& unshifted_degrees);

// outer∘(1^{⊗slot−1}⊗inner⊗1^{⊗…}), Koszul sign (−1)^{|inner|·(a_1+…+a_{slot−1})}.
MultiMap compose_multimap(const MultiMap& outer, int slot, const MultiMap& inner);

// Enumerates all tuples in {0..dim-1}^n.
std::vector<std::vector<int>> all_tuples(int dim, int n);

}  // namespace linf
