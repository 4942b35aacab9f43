#pragma once

#include <string>
#include <vector>

#include "linf/graded.hpp"

namespace linf {

// Components Q_1..Q_cap, symmetric on the shifted space.
struct Coderivation {
    GradedSpace space;  // the shifted space the components act on
    int cap = 0;
    int degree = 1;
    std::vector<MultiMap> q;  // q[n-1] has arity n

    const MultiMap& at(int n) const { return q.at(n - 1); }
};

struct CoalgMorphism {
    GradedSpace source, target;  // shifted spaces
    int cap = 0;
    std::vector<MultiMap> f;

    const MultiMap& at(int n) const { return f.at(n - 1); }
};

struct LInftyAlgebra {
    GradedSpace space;
    int cap = 0;
    std::vector<MultiMap> mu;  // mu[n-1] antisymmetric, lin_degree 2-n

    const MultiMap& at(int n) const { return mu.at(n - 1); }
    // All components zero, arities 1..cap.
    static LInftyAlgebra zero(const GradedSpace& space, int cap);
    bool is_minimal() const { return mu.empty() || mu[0].is_zero(); }
    // μ_n = 0 for n >= 2.
    bool is_linear() const;
    // μ_n = 0 for n >= 3.
    bool is_dgla_shaped() const;
    bool operator==(const LInftyAlgebra&) const = default;
};

struct LInftyMorphism {
    LInftyAlgebra source, target;
    int cap = 0;
    std::vector<MultiMap> f;  // f[n-1] antisymmetric, lin_degree 1-n

    const MultiMap& at(int n) const { return f.at(n - 1); }
};

struct ArityResidual {
    int arity = 0;
    MultiMap residual;
    size_t nonzero() const { return residual.coeffs().size(); }
};

struct Verdict {
    bool pass = true;
    // Both code paths agree (only meaningful when two routes were run).
    bool routes_agree = true;
    std::vector<ArityResidual> arities;
    std::vector<ArityResidual> second_route;
    std::string note;
};

Coderivation to_coderivation(const LInftyAlgebra& a);
LInftyAlgebra from_coderivation(const Coderivation& q);
CoalgMorphism to_coalg(const LInftyMorphism& f);

// Σ over set partitions {B_1,…,B_k} of the tuple (blocks ordered by first element) of
// ε·Q_k(F_{|B_1|}(x_{B_1}),…,F_{|B_k|}(x_{B_k})); this is Q_k∘F_{n,k} on basis tuples.
Vec apply_after_morphism(const MultiMap& Qk, const std::vector<MultiMap>& F, const std::vector<int>& tuple,
                         const GradedSpace& shifted_source);
// Same value from the literal definition: Σ_{|I|=n} (1/(I!k!)) Σ_{σ∈Σ_n} ε(σ) Q_k(F_{i_1}(…),…).
Vec apply_after_morphism_naive(const MultiMap& Qk, const std::vector<MultiMap>& F, const std::vector<int>& tuple,
                               const GradedSpace& shifted_source);

Coderivation coder_bracket(const Coderivation& Q, const Coderivation& q);
Verdict is_codifferential(const Coderivation& Q);
// Generalized Jacobi identities, cross-checked against the codifferential route.
Verdict jacobi_check(const LInftyAlgebra& a);
// Coalgebra-level morphism equation; the display route is added when the target is a DGLA.
Verdict morphism_check(const LInftyMorphism& f);
// Residual of the DGLA-target display (antisymmetric, arity n).
MultiMap morphism_display_residual(const LInftyMorphism& f, int n);

LInftyMorphism identity_morphism(const LInftyAlgebra& a);
// F∘G: G is applied first.
LInftyMorphism compose(const LInftyMorphism& F, const LInftyMorphism& G);
bool is_identity(const LInftyMorphism& f);
// G with G_1 = g1 and G∘F = identity.
LInftyMorphism left_inverse(const LInftyMorphism& F, const LinearMap& g1);
// g_n := −Σ_{k=2}^{n} Σ_{|I|=n} g_1∘f_k∘(g_I), which gives an inverse when F_1 is invertible.
LInftyMorphism inverse_by_recursion(const LInftyMorphism& F, const LinearMap& g1);

LInftyAlgebra direct_sum(const LInftyAlgebra& a, const LInftyAlgebra& b);
// f⊕g: A⊕B → C.
LInftyMorphism direct_sum_morphism(const LInftyMorphism& f, const LInftyMorphism& g);

// Restricted growth enumeration of set partitions of {0..n-1} into k blocks.
std::vector<std::vector<std::vector<int>>> set_partitions(int n, int k);

}  // namespace linf
