#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "linf/graded.hpp"

namespace linf {

// Full binary tree; the child order is the orientation (first child ↔ 1, second ↔ 2).
class Tree {
public:
    Tree();  // the one-leaf tree τ
    static Tree leaf() { return Tree(); }
    static Tree node(const Tree& first, const Tree& second);
    static Tree parse(std::string_view text);

    bool is_leaf() const { return !p_; }
    const Tree& first() const;
    const Tree& second() const;
    int leaves() const;
    int nodes() const { return leaves() - 1; }
    // "." for a leaf, "(" first second ")" for a node.
    std::string str() const;

    bool operator==(const Tree& o) const;
    std::strong_ordering operator<=>(const Tree& o) const;

private:
    struct Node;
    std::shared_ptr<const Node> p_;
};

struct Tree::Node {
    Tree first, second;
    int leaves;
};

// Word over {1,2}: 1 = first child, 2 = second child. Lexicographic order on words is the v-order.
using RamPath = std::vector<int>;
std::string path_str(const RamPath& p);

std::vector<Tree> enumerate_ot(int n);
Tree left_comb(int n);
Tree right_comb(int n);

// Leaf addresses in v-order.
std::vector<RamPath> leaf_paths(const Tree& t);
// Ramification addresses in v-order (preorder).
std::vector<RamPath> node_paths(const Tree& t);
const Tree& subtree(const Tree& t, const RamPath& at);
bool addresses_node(const Tree& t, const RamPath& at);

// Ramifications smaller than leaf i (1-based).
int s_leaf(const Tree& t, int i);
int w_leaf(const Tree& t, int i);
// Number of 1's in the address of leaf i, a second characterization of w.
int ones_on_path(const Tree& t, int i);
int e_sign(const Tree& t);

Tree add_trees(const Tree& a, const Tree& b);
Tree subtract(const Tree& t, const RamPath& k);
Tree compose_trees(const Tree& outer, const std::vector<Tree>& inners);

// b_K for every ramification K of a companion tree.
using BilinearFamily = std::map<RamPath, MultiMap>;

// φ(B) as a plain n-linear map, evaluated on every basis tuple.
MultiMap evaluate(const Tree& t, const BilinearFamily& B);
// φ(B)(x_1,…,x_n) on homogeneous vectors.
Vec evaluate_on(const Tree& t, const BilinearFamily& B, const std::vector<Vec>& args, const GradedSpace& space);
// Node maps given by a callback on the address.
using NodeMaps = std::function<const MultiMap&(const RamPath&)>;
Vec evaluate_on(const Tree& t, const NodeMaps& B, const std::vector<Vec>& args, const GradedSpace& space);
// Σ_{σ∈Σ_n} χ(σ) φ(B)(x_{σ(1)},…,x_{σ(n)}) via shuffle decomposition over subtrees.
Vec antisymmetrized(const Tree& t, const NodeMaps& B, const std::vector<Vec>& args, const GradedSpace& space);

// Sign relating φ∘(ψ^(1),…,ψ^(n))(B) to φ(B⁰)∘(ψ^(1)(B¹)⊗…⊗ψ^(n)(Bⁿ)).
// `outer_degrees` are indexed by the outer tree's node paths, `inner_degrees[i]` is the total
// lin_degree of the family on the i-th inner tree.
int composition_sign(const Tree& outer, const std::map<RamPath, int>& outer_degrees,
                     const std::vector<int>& inner_degrees);
// Splits a family on compose_trees(outer, inners) into B⁰ and B¹…Bⁿ.
std::pair<BilinearFamily, std::vector<BilinearFamily>> split_family(const Tree& outer, const std::vector<Tree>& inners,
                                                                    const BilinearFamily& B);

struct GraftData {
    int k = 0;
    Tree phi, psi;
    Permutation rho, gamma, delta;
    bool operator==(const GraftData&) const = default;
};
struct GraftTriple {
    Tree Phi;
    RamPath K;
    Permutation sigma;
    bool operator==(const GraftTriple&) const = default;
};

GraftData graft_decompose(const Tree& Phi, const RamPath& K, const Permutation& sigma);
GraftTriple graft_compose(const GraftData& g);
// All triples (Φ,K,σ) with n leaves, K a non-root ramification.
std::vector<GraftTriple> all_graft_triples(int n);
std::vector<GraftData> all_graft_data(int n);

struct WiwoSigns {
    int first;   // (−1)^{r+rk}
    int second;  // (−1)^{r+rk+Σ_{K∈W} b_K·B''}
};
// `degrees` are the lin_degrees of the family on Φ, indexed by Φ's node paths.
WiwoSigns wiwo_sign(const GraftData& g, const std::map<RamPath, int>& degrees);

}  // namespace linf
