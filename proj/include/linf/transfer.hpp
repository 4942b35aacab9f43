#pragma once

#include <string>
#include <vector>

#include "linf/graded.hpp"
#include "linf/linfty.hpp"

namespace linf {

struct DGLA {
    GradedSpace space;
    LinearMap d;       // degree +1
    MultiMap bracket;  // arity 2, antisymmetric, lin_degree 0

    // μ_1 = d, μ_2 = bracket, the rest zero.
    LInftyAlgebra as_linfty(int cap) const;
};

struct Violation {
    std::string axiom;  // "d degree", "d squared", "bracket degree", "Leibniz", "Jacobi"
    std::vector<int> witness;
    std::string detail;
};

struct DglaVerdict {
    bool valid = true;
    std::vector<Violation> violations;
};

DglaVerdict validate_dgla(const DGLA& L);

struct Splitting {
    LinearMap eta;  // degree −1
};

struct SplittingCheck {
    bool d_eta_d = true;  // dηd = d
    bool eta_sq = true;   // η² = 0
    bool eta_d_eta = true;  // ηdη = η
    bool ok() const { return d_eta_d && eta_sq && eta_d_eta; }
};
SplittingCheck check_splitting(const DGLA& L, const LinearMap& eta);

Splitting build_splitting(const DGLA& L);
Splitting normalize_splitting(const DGLA& L, const LinearMap& eta0);

struct HodgeData {
    GradedSpace H, F;
    std::vector<Vec> H_basis, F_basis;  // columns in L
    LinearMap projector_H, projector_F;  // on L
    LinearMap incl_H, incl_F;            // H → L, F → L
    LinearMap proj_H, proj_F;            // L → H, L → F
    LinearMap d_F;                       // d restricted to F
};

HodgeData hodge(const DGLA& L, const Splitting& eta);

// How α_n and the scalar prefactors of the tree formulas are read.
struct Reading {
    bool factorial = false;  // α_n/n! instead of the raw sum over Σ_n
    bool corrected = true;   // prefactors −(1/2)^{n−1} for μ, (1/2)^{n−1} for f, comb formula for g

    std::string name() const;
    static Reading parse(const std::string& name);
    // Order tried by the normalization probe.
    static std::vector<Reading> probe_order();
    bool operator==(const Reading&) const = default;
};

LInftyAlgebra transfer_mu(const DGLA& L, const Splitting& eta, int cap, Reading r = {});
LInftyMorphism transfer_f(const DGLA& L, const Splitting& eta, int cap, Reading r = {});
LInftyMorphism embed_g(const DGLA& L, const Splitting& eta, int cap, Reading r = {});
// (F, d) as a linear L∞-algebra.
LInftyAlgebra linear_part(const DGLA& L, const HodgeData& h, int cap);

// Order-by-order solution of the morphism equations with f_n ∈ im η and μ_n = −(1−[d,η])(…).
struct RecursiveTransfer {
    LInftyAlgebra mu;
    LInftyMorphism f;
};
RecursiveTransfer transfer_recursive(const DGLA& L, const Splitting& eta, int cap);

struct Decomposition {
    LInftyMorphism f, g;
    LInftyMorphism iso;      // f⊕g: (H,μ)⊕(F,d) → L
    LInftyMorphism inverse;  // L → (H,μ)⊕(F,d)
};
Decomposition decompose(const DGLA& L, const Splitting& eta, int cap, Reading r = {});

// Σ_{n=2}^{cap} (1/n!) μ_n(x,…,x) for x ∈ H¹ (coordinates in the H basis).
Vec kuranishi(const LInftyAlgebra& A, const Vec& x, int cap);
// Σ_{n=2}^{cap} (−1)^{n(n−1)/2}(1/n!) μ_n(x,…,x), the same sum read through the décalage:
// the Maurer-Cartan series Σ Q_n(↓x,…,↓x)/n! of the shifted coderivation.
Vec kuranishi_shifted(const LInftyAlgebra& A, const Vec& x, int cap);
// Order-by-order solution of dξ − ½[ξ,ξ] ∈ H with ξ_1 = x and ξ_n ∈ im η; returns the
// H-components o_2..o_cap of −½[ξ,ξ] at each order (o[n-2] has order n).
std::vector<Vec> lift_obstructions(const DGLA& L, const Splitting& eta, const Vec& x, int cap);

}  // namespace linf
