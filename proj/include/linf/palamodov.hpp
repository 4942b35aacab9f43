#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linf/graded.hpp"
#include "linf/linfty.hpp"
#include "linf/trees.hpp"

namespace linf {

enum class NormMode { Banach, Scaled };

// ||x||_λ = Σ |x_i|·w_i·λ^{p_i} (ℓ1 over coefficients); Banach mode ignores the exponents.
struct NormModel {
    GradedSpace space;
    std::vector<Scalar> weights;
    std::vector<int> exponents;  // Scaled mode only, nonnegative
    NormMode mode = NormMode::Banach;

    static NormModel banach(const GradedSpace& s, std::vector<Scalar> weights);
    static NormModel unit(const GradedSpace& s);
    static NormModel scaled(const GradedSpace& s, std::vector<Scalar> weights, std::vector<int> exponents);
    // Throws on zero or negative weights and negative exponents.
    void validate() const;
    Scalar norm(const Vec& x, const Scalar& lambda = 1) const;
};

// Scaled-mode suprema are certified upper bounds over this many cells of [1−ε, 1).
inline constexpr int kScaledCells = 32;

// |φ|^{0,ε}: sup ||φ(x_1,…,x_p)||_λ over ||x_i||_λ ≤ 1, attained at scaled basis tuples.
Scalar op_norm0(const MultiMap& phi, const NormModel& source, const NormModel& target, const Scalar& eps);
Scalar op_norm0(const MultiMap& phi, const NormModel& model, const Scalar& eps);
// |φ|^{1,ε}: sup (λ′−λ)^{p−1}||φ(x)||_λ over ||x_i||_{λ′} ≤ 1.
Scalar op_norm1(const MultiMap& phi, const NormModel& source, const NormModel& target, const Scalar& eps);
Scalar op_norm1(const MultiMap& phi, const NormModel& model, const Scalar& eps);
Scalar op_norm0(const LinearMap& a, const NormModel& source, const NormModel& target, const Scalar& eps);

// Vertices (one per ± pair) of the unit ball {h : ||incl·h|| ≤ 1} of a subspace, Banach mode.
std::vector<Vec> subspace_ball(const NormModel& ambient, const LinearMap& incl);
// sup ||out·φ(v_1,…,v_p)|| over vertex tuples of a subspace ball.
Scalar op_norm0_subspace(const MultiMap& phi, const std::vector<Vec>& ball, const LinearMap& out,
                         const NormModel& target);

// φ restricted to arguments of degree ≥ min_degree.
MultiMap restrict_degrees(const MultiMap& phi, int min_degree);

// Lower estimate of ||φ̃||^{0,ε} for φ̃(x) = φ(x,…,x): max over the polarization points
// (±ê_{i_1}±…±ê_{i_p})/p, Banach mode.
Scalar diagonal_norm0_lower(const MultiMap& phi, const NormModel& model);
// Same estimate for out∘φ̃ on a subspace, from the points (±v_{i_1}±…±v_{i_p})/p over ball vertices.
Scalar diagonal_norm0_subspace_lower(const MultiMap& phi, const std::vector<Vec>& ball, const LinearMap& out,
                                     const NormModel& target);

struct TreeBound {
    Scalar bound0, bound1;
};
TreeBound tree_bound(const Tree& t, const std::vector<Scalar>& b_norms, const std::vector<Scalar>& c_norms);

struct MuBound {
    Scalar bound1, bound0;
};
// root scales both bounds by the norm of the projector 1−[d,η] applied at the root of every tree;
// root = 1 gives the bounds that leave it out.
MuBound mu_bounds(const Scalar& c, const Scalar& k, const Scalar& kappa, int n, const Scalar& root = 1);

// Taylor coefficients γ_0..γ_pmax of ½ − ¼√(1−t).
std::vector<Scalar> gamma(int pmax);
// Σ_{i_1+…+i_p=q} γ_{i_1}⋯γ_{i_p} (nonnegative parts).
Scalar gamma_convolution(const std::vector<Scalar>& g, int p, int q);

struct Certificate {
    bool certified = false;
    Scalar C, R;          // a_p ≤ γ_p·C·R^p for the supplied arities
    Scalar C_inv, R_inv;  // C′, R′
    std::vector<Scalar> predicted;  // γ_q·C′·R′^q, q = 1..cap
    std::vector<Scalar> measured;   // supplied (1/q!)||g_q|| if any
    std::vector<Scalar> margins;    // predicted − measured
    bool revalidated = false;
    std::string note;
};
// f_norms[p-1] = (1/p!)|f_p|^{0,ε}, p = 1..cap; g1_norm = ||g_1||^{0,ε}.
Certificate certify_inverse_convergence(const std::vector<Scalar>& f_norms, const Scalar& g1_norm, int cap);
// Re-checks the certified bounds against measured (1/q!)|g_q|^{0,ε}.
void revalidate(Certificate& c, const std::vector<Scalar>& g_norms);
// Certificate for G = F⁻¹ with F: A → L, Banach model on L; A carries the norm pulled back along F_1.
// Norms are the multilinear |·|^{0,ε} over ball vertices, divided by p!; the result is revalidated.
Certificate certify_inverse(const LInftyMorphism& F, const LInftyMorphism& G, const NormModel& target, int cap);

// Rational enclosure lo ≤ e ≤ hi.
std::pair<Scalar, Scalar> e_enclosure(int terms = 20);
struct ClosureBound {
    std::vector<Scalar> factor;  // 2^{n−1}(n−1)^{n−1}/(n−1)!
    std::vector<Scalar> bound;   // factor·Σ_{k+l=n+1}(Q_l q_k + q_l Q_k)
    bool stirling_ok = true;     // factor ≤ (2e)^{n−1} with the lower enclosure of e
};
ClosureBound bracket_closure_bound(const std::vector<Scalar>& Q_norms, const std::vector<Scalar>& q_norms, int cap);

}  // namespace linf
