#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "corpus.hpp"
#include "linf/palamodov.hpp"

using namespace linf;
using namespace linf::testing;

namespace {

Scalar power(const Scalar& x, int n) {
    Scalar r = 1;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

std::vector<Scalar> random_weights(std::mt19937_64& rng, int n) {
    std::vector<Scalar> w;
    for (int i = 0; i < n; ++i) w.push_back(Scalar(static_cast<int>(1 + rng() % 4), static_cast<int>(1 + rng() % 3)));
    return w;
}

std::vector<int> random_exponents(std::mt19937_64& rng, int n) {
    std::vector<int> e;
    for (int i = 0; i < n; ++i) e.push_back(static_cast<int>(rng() % 3));
    return e;
}

// max over all index tuples and sign patterns of ||φ(±e_{i_1}/w,…)||_λ·factor, extreme points of the ℓ1 balls
Scalar extreme_point_sup(const MultiMap& phi, const NormModel& m, const Scalar& lo, const Scalar& hi,
                         const Scalar& factor) {
    int p = phi.arity(), n = m.space.dim();
    Scalar best = 0;
    std::vector<int> idx(p);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == p) {
            for (unsigned s = 0; s < (1u << p); ++s) {
                std::vector<Vec> args;
                for (int j = 0; j < p; ++j) {
                    int sign = s >> j & 1u ? -1 : 1;
                    args.push_back(scaled(unit(idx[j]), Scalar(sign) / m.norm(unit(idx[j]), lo)));
                }
                best = std::max(best, Scalar(factor * m.norm(phi.eval(args), hi)));
            }
            return;
        }
        for (int i = 0; i < n; ++i) {
            idx[pos] = i;
            rec(pos + 1);
        }
    };
    rec(0);
    return best;
}

}  // namespace

TEST(NormModels, ValidationAndMonotonicity) {
    std::mt19937_64 rng(41);
    auto S = random_space(rng, 4, 0, 2);
    EXPECT_THROW(NormModel::banach(S, {1, 1, 0, 1}), std::invalid_argument);
    EXPECT_THROW(NormModel::banach(S, {1, 1, 1}), std::invalid_argument);
    EXPECT_THROW(NormModel::scaled(S, {1, 1, 1, 1}, {0, -1, 0, 0}), std::invalid_argument);
    auto M = NormModel::scaled(S, random_weights(rng, 4), random_exponents(rng, 4));
    for (int t = 0; t < 50; ++t) {
        Vec x;
        for (int i = 0; i < 4; ++i)
            if (int c = static_cast<int>(rng() % 7) - 3) x[i] = c;
        Scalar a(static_cast<int>(rng() % 10), 10), b(static_cast<int>(rng() % 10), 10);
        if (b < a) std::swap(a, b);
        EXPECT_LE(M.norm(x, a), M.norm(x, b));
    }
}

TEST(OperatorNorms, Fixtures) {
    std::mt19937_64 rng(42);
    auto S = random_space(rng, 3, 0, 1);
    auto U = NormModel::unit(S);
    Scalar eps(1, 2);
    EXPECT_EQ(op_norm0(MultiMap(S, S, 2, 0, Flavor::Antisymmetric), U, eps), 0);
    EXPECT_EQ(op_norm0(LinearMap::identity(S), U, U, eps), 1);
    MultiMap phi = random_map(rng, S, 3, 0, Flavor::Symmetric, 0.9);
    EXPECT_EQ(op_norm1(phi, U, eps), op_norm0(phi, U, eps) / 4);
    MultiMap lin = from_linear(LinearMap::identity(S), Flavor::Plain);
    EXPECT_EQ(op_norm1(lin, U, eps), op_norm0(lin, U, eps));
    EXPECT_THROW(op_norm0(phi, U, Scalar(1)), std::invalid_argument);
}

TEST(OperatorNorms, BanachMatchesExtremePoints) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        auto S = random_space(rng, 3, -1, 1);
        auto M = NormModel::banach(S, random_weights(rng, 3));
        Flavor f = std::vector<Flavor>{Flavor::Plain, Flavor::Symmetric, Flavor::Antisymmetric}[trial % 3];
        MultiMap phi = random_map(rng, S, 1 + trial % 3, 0, f, 0.7);
        EXPECT_EQ(op_norm0(phi, M, Scalar(1, 2)), extreme_point_sup(phi, M, 1, 1, 1));
    }
}

TEST(OperatorNorms, ScaledModeDominatesSampledWindows) {
    std::mt19937_64 rng(44);
    Scalar eps(1, 3);
    for (int trial = 0; trial < 12; ++trial) {
        auto S = random_space(rng, 3, 0, 1);
        auto M = NormModel::scaled(S, random_weights(rng, 3), random_exponents(rng, 3));
        int p = 1 + trial % 3;
        MultiMap phi = random_map(rng, S, p, 0, Flavor::Plain, 0.7);
        Scalar n0 = op_norm0(phi, M, eps), n1 = op_norm1(phi, M, eps);
        for (int a = 0; a < 7; ++a) {
            Scalar lam = 1 - eps + eps * a / 7;
            EXPECT_LE(extreme_point_sup(phi, M, lam, lam, 1), n0);
            for (int b = a + 1; b <= 7; ++b) {
                Scalar lam2 = 1 - eps + eps * b / 7 - Scalar(1, 1000);
                EXPECT_LE(extreme_point_sup(phi, M, lam2, lam, power(lam2 - lam, p - 1)), n1);
            }
        }
    }
}

TEST(NormChain, EvenDegreesBothInequalities) {
    std::mt19937_64 rng(45);
    Scalar eps(1, 2);
    for (int trial = 0; trial < 24; ++trial) {
        std::vector<BasisElement> b;
        for (int i = 0; i < 3; ++i) b.push_back({"x" + std::to_string(i), 2 * static_cast<int>(rng() % 2)});
        GradedSpace S(b);
        auto M = NormModel::banach(S, random_weights(rng, 3));
        int p = 1 + trial % 4;
        MultiMap phi = random_map(rng, S, p, 0, Flavor::Symmetric, 0.8);
        Scalar window = power(eps, p - 1);
        Scalar diag_lower = window * diagonal_norm0_lower(phi, M);
        Scalar multi = op_norm1(phi, M, eps);
        EXPECT_LE(diag_lower, multi);
        EXPECT_LE(multi, power(Scalar(p), p) / factorial(p) * diag_lower);
    }
}

// On odd elements a graded symmetric map is alternating, so φ(x,…,x) = 0 while φ ≠ 0.
TEST(NormChain, OddDegreesBreakTheRightInequality) {
    GradedSpace S({{"a", 1}, {"b", 1}, {"c", 2}});
    MultiMap phi(S, S, 2, 0, Flavor::Symmetric);
    phi.add({0, 1}, unit(2));
    auto M = NormModel::unit(S);
    EXPECT_EQ(diagonal_norm0_lower(phi, M), 0);
    EXPECT_EQ(phi.eval({add(unit(0), unit(1)), add(unit(0), unit(1))}), Vec{});
    EXPECT_GT(op_norm1(phi, M, Scalar(1, 2)), 0);
}

TEST(TreeBounds, Fixtures) {
    Tree beta = Tree::parse("(..)");
    auto b2 = tree_bound(beta, {Scalar(3)}, {Scalar(5, 2)});
    EXPECT_EQ(b2.bound0, 3);
    EXPECT_EQ(b2.bound1, Scalar(5, 2));
    EXPECT_EQ(tree_bound(left_comb(4), {1, 1, 1}, {1, 1, 1}).bound1, 27);
    EXPECT_THROW(tree_bound(left_comb(4), {1, 1}, {1, 1, 1}), std::invalid_argument);
}

TEST(TreeBounds, DominateMeasuredNorms) {
    std::mt19937_64 rng(46);
    Scalar eps(1, 2);
    for (int trial = 0; trial < 8; ++trial) {
        auto S = random_space(rng, 3, -1, 1);
        bool scaled_mode = trial % 2;
        auto M = scaled_mode ? NormModel::scaled(S, random_weights(rng, 3), random_exponents(rng, 3))
                             : NormModel::banach(S, random_weights(rng, 3));
        for (int n = 2; n <= 5; ++n)
            for (const auto& t : enumerate_ot(n)) {
                if (n == 5 && rng() % 4) continue;
                BilinearFamily B;
                std::vector<Scalar> b0, b1;
                for (const auto& p : node_paths(t)) {
                    MultiMap m = random_map(rng, S, 2, static_cast<int>(rng() % 2) - 1, Flavor::Plain, 0.5);
                    b0.push_back(op_norm0(m, M, eps));
                    b1.push_back(op_norm1(m, M, eps));
                    B.emplace(p, std::move(m));
                }
                MultiMap phi = evaluate(t, B);
                auto tb = tree_bound(t, b0, b1);
                EXPECT_LE(op_norm0(phi, M, eps), tb.bound0) << t.str();
                EXPECT_LE(op_norm1(phi, M, eps), tb.bound1) << t.str();
            }
    }
}

TEST(MuBounds, Fixtures) {
    Scalar c(3, 2), k(5, 7), kappa(2, 9);
    auto b = mu_bounds(c, k, kappa, 2);
    EXPECT_EQ(b.bound1, 4 * k);
    EXPECT_EQ(b.bound0, 4 * kappa);
    auto b4 = mu_bounds(c, k, kappa, 4);
    EXPECT_EQ(b4.bound1, 24 * 27 * power(2 * k, 3) * c * c);
    EXPECT_EQ(b4.bound0, 8 * 24 * power(kappa, 3) * c * c);
    EXPECT_EQ(mu_bounds(c, k, kappa, 3, 5).bound1, 5 * mu_bounds(c, k, kappa, 3).bound1);
    EXPECT_THROW(mu_bounds(c, k, kappa, 1), std::invalid_argument);
}

// The printed bounds ignore the projector 1−[d,η] at the root; with its norm as a factor they hold.
TEST(MuBounds, CorpusWithAndWithoutTheRootProjector) {
    std::mt19937_64 rng(7);
    Scalar eps(1, 2);
    int printed_violations = 0, models = 0;
    for (const auto& s : corpus()) {
        auto M = NormModel::banach(s.L.space, random_weights(rng, s.L.space.dim()));
        auto h = hodge(s.L, s.eta);
        if (h.H.dim() == 0) continue;
        ++models;
        Scalar c = op_norm0(s.eta.eta, M, M, eps);
        Scalar k = op_norm1(s.L.bracket, M, eps);
        Scalar kappa = op_norm0(restrict_degrees(s.L.bracket, 1), M, eps);
        Scalar P = op_norm0(h.projector_H, M, M, eps);
        auto mu = transfer_mu(s.L, s.eta, 4);
        auto ball = subspace_ball(M, h.incl_H);
        Scalar window = 1;
        for (int n = 2; n <= 4; ++n) {
            window *= eps;
            auto bp = mu_bounds(c, k, kappa, n, P);
            auto b = mu_bounds(c, k, kappa, n);
            Scalar up1 = window * op_norm0_subspace(mu.at(n), ball, h.incl_H, M);
            Scalar lo1 = window * diagonal_norm0_subspace_lower(mu.at(n), ball, h.incl_H, M);
            MultiMap pos = restrict_degrees(mu.at(n), 1);
            Scalar up0 = op_norm0_subspace(pos, ball, h.incl_H, M);
            EXPECT_LE(lo1, up1);
            EXPECT_LE(up1, bp.bound1) << s.label << " n=" << n;
            EXPECT_LE(up0, bp.bound0) << s.label << " n=" << n;
            if (lo1 > b.bound1) ++printed_violations;
        }
    }
    EXPECT_GE(models, 20);
    EXPECT_GT(printed_violations, 0);
}

TEST(Majorant, Coefficients) {
    auto g = gamma(20);
    EXPECT_EQ(g[0], Scalar(1, 4));
    EXPECT_EQ(g[1], Scalar(1, 8));
    EXPECT_EQ(g[2], Scalar(1, 32));
    for (const auto& x : g) EXPECT_GT(x, 0);
    // partial sums at t = 1/2 approach ½ − ¼√(1/2)
    double sum = 0;
    for (int p = 0; p <= 20; ++p) sum += g[p].get_d() * std::pow(0.5, p);
    EXPECT_NEAR(sum, 0.5 - 0.25 * std::sqrt(0.5), 1e-7);
    for (int p = 1; p <= 8; ++p)
        for (int q = 1; q <= 8; ++q) EXPECT_LE(gamma_convolution(g, p, q), g[q]) << p << "," << q;
    EXPECT_EQ(gamma_convolution(g, 1, 5), g[5]);
    EXPECT_EQ(gamma_convolution(g, 2, 1), 2 * g[0] * g[1]);
}

TEST(Certificates, StrictMorphismIsTriviallyCertified) {
    std::mt19937_64 rng(47);
    auto S = random_space(rng, 3, 0, 1);
    auto A = LInftyAlgebra::zero(S, 4);
    auto M = NormModel::banach(S, random_weights(rng, 3));
    auto F = identity_morphism(A);
    auto c = certify_inverse(F, F, M, 4);
    EXPECT_TRUE(c.certified);
    EXPECT_TRUE(c.revalidated);
    EXPECT_EQ(c.C, 0);
    for (size_t q = 1; q < c.margins.size(); ++q) EXPECT_GT(c.margins[q], 0);
}

TEST(Certificates, QuadraticMorphismMeetsTheInductionCondition) {
    std::mt19937_64 rng(48);
    auto S = random_space(rng, 3, 0, 1);
    auto A = LInftyAlgebra::zero(S, 4);
    auto M = NormModel::banach(S, random_weights(rng, 3));
    auto F = identity_morphism(A);
    F.f[1] = random_map(rng, S, 2, -1, Flavor::Antisymmetric, 0.9).scaled(Scalar(1, 3));
    ASSERT_FALSE(F.f[1].is_zero());
    auto G = left_inverse(F, LinearMap::identity(S));
    auto c = certify_inverse(F, G, M, 4);
    ASSERT_TRUE(c.certified);
    EXPECT_TRUE(c.revalidated);
    auto g = gamma(4);
    auto ball = subspace_ball(M, LinearMap::identity(S));
    Scalar f2 = op_norm0_subspace(F.at(2), ball, LinearMap::identity(S), M) / 2;
    EXPECT_EQ(c.C, f2 / g[2]);
    EXPECT_EQ(c.R, 1);
    Scalar g1 = op_norm0_subspace(G.at(1), ball, LinearMap::identity(S), M);
    EXPECT_EQ(g[1] * c.C_inv * c.R_inv, g1);
    // (Σ_{p≥2} γ_p (C′R)^{p−1})·||g_1||·C·R ≤ 1, summed in double precision
    double s = Scalar(c.C_inv * c.R).get_d(), tail = 0;
    auto gg = gamma(200);
    for (int p = 2; p <= 200; ++p) tail += gg[p].get_d() * std::pow(s, p - 1);
    EXPECT_LE(tail * g1.get_d() * c.C.get_d() * c.R.get_d(), 1.0 + 1e-12);
}

TEST(Certificates, CorpusDecompositionsRevalidate) {
    std::mt19937_64 rng(49);
    int n = 0;
    for (const auto& s : corpus()) {
        if (n++ % 2) continue;
        auto M = NormModel::banach(s.L.space, random_weights(rng, s.L.space.dim()));
        auto d = decompose(s.L, s.eta, 4);
        auto c = certify_inverse(d.iso, d.inverse, M, 4);
        EXPECT_TRUE(c.certified) << s.label << " " << c.note;
        EXPECT_TRUE(c.revalidated) << s.label;
    }
}

TEST(ClosureBound, FactorsAndEnclosure) {
    auto [lo, hi] = e_enclosure();
    EXPECT_LT(lo, Scalar(2718281829, 1000000000));
    EXPECT_GT(hi, Scalar(2718281828, 1000000000));
    EXPECT_LT(hi - lo, Scalar(1, 1000000000));
    std::vector<Scalar> Q(8, Scalar(1)), zero(8, Scalar(0));
    auto b = bracket_closure_bound(Q, zero, 8);
    EXPECT_EQ(b.factor[1], 2);
    EXPECT_EQ(b.factor[0], 1);
    EXPECT_TRUE(b.stirling_ok);
    for (const auto& x : b.bound) EXPECT_EQ(x, 0);
    EXPECT_THROW(bracket_closure_bound(Q, zero, 9), std::invalid_argument);
}

TEST(ClosureBound, DominatesMeasuredBrackets) {
    std::mt19937_64 rng(50);
    Scalar eps(1, 2);
    for (int trial = 0; trial < 5; ++trial) {
        auto S = random_space(rng, 3, -1, 1);
        auto M = NormModel::banach(S, random_weights(rng, 3));
        Coderivation Q{S, 4, 1, {}}, q{S, 4, 0, {}};
        std::vector<Scalar> Qn, qn;
        for (int k = 1; k <= 4; ++k) {
            Q.q.push_back(random_map(rng, S, k, 1, Flavor::Symmetric, 0.5));
            q.q.push_back(random_map(rng, S, k, 0, Flavor::Symmetric, 0.5));
            Qn.push_back(op_norm1(Q.q.back(), M, eps) / factorial(k));
            qn.push_back(op_norm1(q.q.back(), M, eps) / factorial(k));
        }
        auto br = coder_bracket(Q, q);
        auto b = bracket_closure_bound(Qn, qn, 4);
        for (int n = 1; n <= 4; ++n) EXPECT_LE(op_norm1(br.at(n), M, eps) / factorial(n), b.bound[n - 1]);
    }
}
