#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rgbethe/errors.hpp"
#include "rgbethe/models.hpp"
#include "rgbethe/oracle.hpp"
#include "rgbethe/solver.hpp"
#include "test_util.hpp"

using namespace rgbethe;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no exception";
    return ErrorCode::InvalidInput;
}

// brute-force count of spin-1/2 occupation sets with at most N excitations (boson takes the rest)
std::size_t brute_dimension(int m, int N, bool boson) {
    std::size_t n = 0;
    for (int mask = 0; mask < (1 << m); ++mask) {
        int k = __builtin_popcount(mask);
        if (boson ? k <= N : k == N) ++n;
    }
    return n;
}

const double r2 = std::sqrt(2.0);

}  // namespace

TEST(Models, Factories) {
    std::vector<double> lev;
    for (int e = 2; e <= 12; ++e) lev.push_back(e);
    auto d = model_dicke(1, lev, -0.1);
    EXPECT_EQ(d.m(), 11);
    EXPECT_TRUE(d.all_spins_half());
    EXPECT_NO_THROW(model_dicke(0, {2}, 1));
    EXPECT_EQ(code_of([] { model_dicke(1, {1, 2}, 0.5); }), ErrorCode::DuplicateLevel);
    EXPECT_EQ(code_of([] { model_dicke(0, {1, 1}, 0.5); }), ErrorCode::DuplicateLevel);
    EXPECT_EQ(code_of([] { model_dicke(0, {1, 2}, 0.0); }), ErrorCode::ZeroCoupling);

    EXPECT_NO_THROW(model_pip(1, 0, {2}));
    EXPECT_NO_THROW(model_pip(2.5, 1.0, {1, 2, 3, 4}));
    EXPECT_EQ(code_of([] { model_pip(1, 0, {-1, 2}); }), ErrorCode::NonpositiveLevel);
    EXPECT_EQ(code_of([] { model_pip(0, 0, {1, 2}); }), ErrorCode::NonpositiveEta0);

    EXPECT_EQ(code_of([] { model_xxz(Realization::Trigonometric, {1, 2}, 0.0); }), ErrorCode::ZeroCoupling);
    EXPECT_EQ(code_of([] { model_dicke(0, {1, 2}, 1, {0.5}); }), ErrorCode::DimensionMismatch);
}

TEST(Models, SectorDimension) {
    auto d4 = model_dicke(1, {2, 3, 4, 5}, -0.1);
    auto d5 = model_dicke(1, {2, 3, 4, 5, 6}, -0.1);
    EXPECT_EQ(sector_dimension(d4, 3), 15u);
    EXPECT_EQ(sector_dimension(d5, 3), 26u);
    EXPECT_EQ(sector_dimension(d5, 0), 1u);
    auto x = model_xxz(Realization::Trigonometric, {1, 2, 3, 4}, 0.3);
    EXPECT_EQ(sector_dimension(x, 0), 1u);
    for (int m = 1; m <= 6; ++m)
        for (int N = 0; N <= m + 2; ++N) {
            std::vector<double> lev;
            for (int i = 0; i < m; ++i) lev.push_back(1.0 + i);
            EXPECT_EQ(sector_dimension(model_pip(1, 0, lev), N), brute_dimension(m, N, true));
            EXPECT_EQ(sector_dimension(model_xxz(Realization::Hyperbolic, lev, 0.2), N), brute_dimension(m, N, false));
        }
    // general spin: one spin-1 level holds up to two excitations
    auto s1 = model_dicke(0, {1, 2}, 0.3, {1.0, 0.5});
    EXPECT_EQ(sector_dimension(s1, 2), 5u);  // (2,{}) (1,{1,0}) (1,{0,1}) (0,{2,0}) (0,{1,1})
}

TEST(Models, DickeClosedFormCharges) {
    auto d = model_dicke(0, {2}, 1);
    // hand-built 2x2 of R_1 in {|1;down>, |0;up>}: [[1,-1],[-1,-1]], eigenvalues +-sqrt(2)
    auto r = charge_eigenvalues(d, {-1 - r2}, 1);
    EXPECT_NEAR(r[0], -r2, 1e-12);
    auto r2b = charge_eigenvalues(d, {-1 + r2}, 1);
    EXPECT_NEAR(r2b[0], r2, 1e-12);
}

TEST(Models, PipClosedFormCharges) {
    auto p = model_pip(1, 0, {2});
    auto r = charge_eigenvalues(p, {1 + r2}, 1);
    EXPECT_NEAR(r[0], -0.25 - 1 / r2, 1e-12);
    EXPECT_NEAR(pip_lambda0(p, {1 + r2}, 1), (1 + r2) / 2, 1e-14);
    // the ED 2x2 has exactly these two eigenvalues 1/4 - Lambda/2
    auto B = build_sector_basis(p, 1);
    auto E = diagonalize(B, {OpKind::Charge, 0});
    std::vector<double> ed{E.charges(0, 0), E.charges(1, 0)};
    std::sort(ed.begin(), ed.end());
    EXPECT_NEAR(ed[0], 0.25 - (1 + r2) / 2, 1e-12);
    EXPECT_NEAR(ed[1], 0.25 - (1 - r2) / 2, 1e-12);
}

TEST(Models, VacuumChargesMatchED) {
    std::vector<ModelSpec> models{model_dicke(0.7, {1.5, 2.5, 4}, 0.4), model_pip(1.3, 0.6, {1, 2.5, 3}),
                                  model_xxz(Realization::Trigonometric, {0.3, 1.1, 2.0}, 0.45),
                                  model_xxz(Realization::Hyperbolic, {0.5, 1.0, 3.0}, -0.8)};
    for (const auto& M : models) {
        auto B = build_sector_basis(M, 0);
        ASSERT_EQ(B.size(), 1);
        auto r = charge_eigenvalues(M, std::vector<double>(M.m(), 0.0), 0);
        for (int i = 0; i < M.m(); ++i) {
            double ed = build_operator(B, {OpKind::Charge, i})(0, 0);
            EXPECT_NEAR(r[i], ed, 1e-12) << variant_name(M.variant) << " level " << i;
        }
    }
}

TEST(Models, XXZVacuumValue) {
    // -1/2 + (g/4) sum_k Z_ik, the ED value (the d_i = -s_i printing gives the opposite sign)
    auto M = model_xxz(Realization::Trigonometric, {0.3, 1.1, 2.0}, 0.45);
    auto r = xxz_charge_eigenvalues(M, {0, 0, 0});
    for (int i = 0; i < 3; ++i) {
        double zs = 0;
        for (int k = 0; k < 3; ++k)
            if (k != i) zs += M.Zlev(i, k);
        EXPECT_NEAR(r[i], -0.5 + 0.25 * M.coupling * zs, 1e-14);
    }
    EXPECT_THROW(xxz_charge_eigenvalues(model_dicke(0, {2}, 1), {0.0}), Error);
}

TEST(Models, XXZHoleFormAgrees) {
    std::mt19937 rng(3);
    for (int t = 0; t < 10; ++t) {
        auto lev = tutil::increasing_levels(rng, 4, -1.0, 0.3, 1.0);
        auto M = model_xxz(t % 2 ? Realization::Trigonometric : Realization::Hyperbolic,
                           t % 2 ? lev : std::vector<double>{1, 2, 3.5, 5}, 0.3 + 0.1 * t);
        std::vector<double> L{0.3, -1.2, 2.0, 0.7};
        auto a = xxz_charge_eigenvalues(M, L);
        auto b = xxz_hole_charge_eigenvalues(M, dual_lambdas(M, L));
        EXPECT_LE(tutil::max_abs_diff(a, b), 1e-12);
    }
}

TEST(Models, XXZChargesFromRapiditiesMatchED) {
    std::mt19937 rng(8);
    auto lev = tutil::increasing_levels(rng, 3, -0.5, 0.4, 1.2);
    auto M = model_xxz(Realization::Trigonometric, lev, 0.35);
    auto B = build_sector_basis(M, 2);
    auto E = diagonalize(B);
    for (auto counts : std::vector<std::vector<int>>{{0, 1, 1, 0}, {0, 0, 1, 1}, {0, 1, 0, 1}}) {
        auto s = solve_pattern(M, counts);
        auto r = xxz_charge_eigenvalues(M, s.lambdas);
        EXPECT_LE(compare_solution(E, r).deviation, 1e-9);
    }
}

TEST(Models, ChargesAreAffineInLambda) {
    auto d = model_dicke(0.5, {1, 2, 3}, 0.7);
    auto p = model_pip(1.2, 0.3, {1, 2, 3});
    std::vector<double> L{0.4, -0.3, 1.1};
    const double dl = 0.37;
    for (int i = 0; i < 3; ++i) {
        auto Lp = L;
        Lp[i] += dl;
        auto a = charge_eigenvalues(d, L, 2), b = charge_eigenvalues(d, Lp, 2);
        EXPECT_NEAR((b[i] - a[i]) / dl, 0.7 * 0.7, 1e-12);
        auto c = charge_eigenvalues(p, L, 2), e = charge_eigenvalues(p, Lp, 2);
        EXPECT_NEAR((e[i] - c[i]) / dl, -0.5, 1e-12);
    }
    EXPECT_THROW(charge_eigenvalues(d, {1.0}, 1), Error);
}

TEST(Models, PipChargeSumOnEDVectors) {
    auto p = model_pip(2.5, 1.0, {1, 2, 3, 4});
    auto B = build_sector_basis(p, 2);
    auto E = diagonalize(B);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(B.size(), B.size());
    for (int i = 0; i < 4; ++i) S += build_operator(B, {OpKind::Charge, i});
    for (int n = 0; n < B.size(); ++n) {
        Eigen::VectorXd v = E.vectors.col(n);
        EXPECT_NEAR(E.charges.row(n).sum(), matrix_element(v, S, v), 1e-9);
    }
}

TEST(Models, GeneralSpinChargesMatchED) {
    // spin-1 levels: Lambda from rapidities, charges against ED of the s=1 sector
    auto d = model_dicke(0.2, {1.0, 2.3}, 0.3, {1.0, 0.5});
    auto p = model_pip(1.1, 2.0, {1.0, 2.3}, {1.0, 0.5});
    for (const auto& M : {d, p}) {
        auto B = build_sector_basis(M, 2);
        auto E = diagonalize(B);
        int matched = 0;
        for (auto counts : std::vector<std::vector<int>>{{2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}}) {
            auto s = solve_pattern(M, counts);
            EXPECT_LE(compare_solution(E, s.charges).deviation, 1e-9) << variant_name(M.variant);
            ++matched;
        }
        EXPECT_EQ(matched, 4);
        EXPECT_TRUE(std::isnan(lambda_residual(M, 2, {0.0, 0.0})));
    }
}

TEST(Models, JsonRoundTripAndValidation) {
    auto f = model_from_json(R"({"model":"pip","levels":[1,2,3,4],"eta0_sq":2.5,"kappa":1.0,"N":2})");
    EXPECT_EQ(f.model.variant, ModelVariant::PipBoson);
    EXPECT_EQ(*f.N, 2);
    EXPECT_EQ(f.model.spins, std::vector<double>(4, 0.5));
    auto back = model_from_json(model_to_json(f.model, f.N));
    EXPECT_EQ(back.model.levels, f.model.levels);
    EXPECT_EQ(back.model.kappa, 1.0);
    auto x = model_from_json(R"({"model":"xxz","levels":[1,2],"coupling":0.5,"realization":"hyp"})");
    EXPECT_EQ(x.model.realization, Realization::Hyperbolic);
    EXPECT_FALSE(x.N.has_value());

    EXPECT_EQ(code_of([] { model_from_json(R"({"model":"dicke","levels":[2],"coupling":1,"eps0":0,"bogus":1})"); }),
              ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { model_from_json(R"({"model":"dicke","levels":[2],"coupling":1})"); }),
              ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { model_from_json(R"({"model":"dicke","levels":[2],"coupling":1,"eps0":0,"kappa":1})"); }),
              ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { model_from_json("{not json"); }), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { model_from_json(R"({"model":"pip","levels":[-1,2],"eta0_sq":1,"kappa":0})"); }),
              ErrorCode::NonpositiveLevel);
}
