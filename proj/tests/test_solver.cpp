#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "rgbethe/errors.hpp"
#include "rgbethe/oracle.hpp"
#include "rgbethe/solver.hpp"
#include "test_util.hpp"

using namespace rgbethe;
using namespace rgbethe::tutil;

namespace {

const double r2 = std::sqrt(2.0);

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no exception";
    return ErrorCode::InvalidInput;
}

std::vector<std::vector<double>> charge_rows(const std::vector<BetheSolution>& sols) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : sols) rows.push_back(s.charges);
    return rows;
}

}  // namespace

TEST(SolveRapidities, DickeClosedForm) {
    auto d = model_dicke(0, {2}, 1);
    auto s = solve_rapidities(d, 1, {cplx(2.5, 0)});
    ASSERT_TRUE(s.rapidities);
    EXPECT_NEAR(s.rapidities->at(0).real(), 1 + r2, 1e-12);
    EXPECT_NEAR(s.rapidities->at(0).imag(), 0.0, 1e-12);
    EXPECT_NEAR(s.lambdas[0], -1 - r2, 1e-12);
    EXPECT_NEAR(s.charges[0], -r2, 1e-12);
    EXPECT_TRUE(s.converged);

    // from 0.9 Newton goes to the other root of x^2 - 2x - 1
    auto t = solve_rapidities(d, 1, {cplx(0.9, 0)});
    double x = t.rapidities->at(0).real();
    EXPECT_NEAR(x * x - 2 * x - 1, 0.0, 1e-11);
}

TEST(SolveRapidities, PipClosedForm) {
    auto p = model_pip(1, 0, {2});
    auto s = solve_rapidities(p, 1, {cplx(0.8, 0)});
    EXPECT_NEAR(s.rapidities->at(0).real(), -2 + 2 * r2, 1e-12);
    EXPECT_NEAR(s.lambdas[0], 1 + r2, 1e-11);
    EXPECT_NEAR(s.lambda0, (1 + r2) / 2, 1e-11);
    EXPECT_NEAR(s.charges[0], -0.25 - 1 / r2, 1e-11);
}

TEST(SolveRapidities, EmptySectorAndErrors) {
    auto d = model_dicke(0.5, {1, 2}, 0.3);
    auto s = solve_rapidities(d, 0, {});
    EXPECT_TRUE(s.rapidities->empty());
    EXPECT_EQ(s.residual_rapidity, 0.0);
    EXPECT_EQ(s.lambdas, std::vector<double>(2, 0.0));
    EXPECT_EQ(code_of([&] { solve_rapidities(d, 2, {cplx(0.1)}); }), ErrorCode::SeedDimensionMismatch);
    auto p = model_pip(1, 0, {2});
    EXPECT_EQ(code_of([&] { solve_rapidities(p, 1, {cplx(0.0)}); }), ErrorCode::PoleCollision);
}

TEST(SolveLambdas, ClosedFormRoots) {
    auto d = model_dicke(0, {2}, 1);
    EXPECT_NEAR(solve_lambdas(d, 1, {-2.3}).lambdas[0], -1 - r2, 1e-12);
    EXPECT_NEAR(solve_lambdas(d, 1, {0.5}).lambdas[0], -1 + r2, 1e-12);

    auto p = model_pip(1, 0, {2});
    for (double want : {1 + r2, 1 - r2}) {
        auto s = solve_lambdas(p, 1, {want + 0.2});
        EXPECT_NEAR(s.lambdas[0], want, 1e-12);
        EXPECT_NEAR(s.lambda0, want / 2, 1e-12);
        EXPECT_LE(s.residual_lambda, 1e-12);
    }
    auto z = solve_lambdas(p, 0, {0.0});
    EXPECT_EQ(z.lambdas[0], 0.0);
    EXPECT_EQ(z.residual_lambda, 0.0);
}

TEST(SolveLambdas, RequiresSpinHalf) {
    auto d = model_dicke(0.5, {1, 2}, 0.3, {1.0, 0.5});
    EXPECT_EQ(code_of([&] { solve_lambdas(d, 1, {0.1, 0.1}); }), ErrorCode::SpinNotHalf);
}

TEST(LambdasFromRapidities, Examples) {
    auto d = model_dicke(0, {2}, 1);
    EXPECT_NEAR(lambdas_from_rapidities(d, {cplx(1 + r2)})[0], -1 - r2, 1e-13);
    auto p = model_pip(1, 0, {2});
    double x = -2 + 2 * r2;
    EXPECT_NEAR(lambdas_from_rapidities(p, {cplx(x)})[0], 1 + r2, 1e-12);
    EXPECT_NEAR(lambda0_from_rapidities(p, {cplx(x)}), (1 + r2) / 2, 1e-12);
    EXPECT_EQ(lambdas_from_rapidities(p, {}), std::vector<double>(1, 0.0));
}

TEST(Enumerate, DickeCompleteAgainstED) {
    auto d = model_dicke(1, {2, 3, 4, 5}, -0.1);
    auto sols = enumerate_states(d, 3);
    ASSERT_EQ(sols.size(), 15u);
    auto E = diagonalize(build_sector_basis(d, 3));
    auto match = match_spectrum(E, charge_rows(sols));
    EXPECT_LE(match.max_deviation, 1e-8);
    for (const auto& s : sols) EXPECT_LE(s.residual_lambda, 1e-10);
}

TEST(Enumerate, SmallCases) {
    auto d = model_dicke(0, {2}, 1);
    auto sols = enumerate_states(d, 1);
    ASSERT_EQ(sols.size(), 2u);
    std::vector<double> l{sols[0].lambdas[0], sols[1].lambdas[0]};
    std::sort(l.begin(), l.end());
    EXPECT_NEAR(l[0], -1 - r2, 1e-12);
    EXPECT_NEAR(l[1], -1 + r2, 1e-12);

    auto v = enumerate_states(model_pip(1.5, 0.2, {1, 2, 3}), 0);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].lambdas, std::vector<double>(3, 0.0));
}

TEST(Enumerate, PipAndXXZAgainstED) {
    std::vector<ModelSpec> models{model_pip(1.3, 0.4, {0.7, 1.5, 2.6, 3.1}),
                                  model_xxz(Realization::Trigonometric, {-0.6, 0.4, 1.1, 2.5}, 0.35)};
    for (const auto& M : models) {
        for (int N : {1, 2}) {
            auto rep = enumerate_states_report(M, N);
            EXPECT_TRUE(rep.complete()) << variant_name(M.variant) << " N=" << N;
            auto E = diagonalize(build_sector_basis(M, N));
            auto match = match_spectrum(E, charge_rows(rep.solutions));
            EXPECT_LE(match.max_deviation, 1e-8);
        }
    }
}

TEST(Enumerate, ThreadCapFromEnvironment) {
    setenv("RGBETHE_THREADS", "1", 1);
    EXPECT_EQ(default_threads(), 1);
    auto d = model_dicke(1, {2, 3, 4}, 0.2);
    EXPECT_EQ(enumerate_states(d, 2).size(), sector_dimension(d, 2));
    unsetenv("RGBETHE_THREADS");
    EXPECT_GE(default_threads(), 1);
}

TEST(RapidityConsistency, SeparatesPhysicalRoots) {
    // Scan the quadratic system from many seeds; the roots that pass the
    // consistency test are exactly the ED spectrum.
    auto d = model_dicke(0.3, {1.0, 2.2}, 0.6);
    const int N = 1;
    std::vector<std::vector<double>> roots;
    for (double a = -6; a <= 6; a += 0.5) {
        for (double b = -6; b <= 6; b += 0.5) {
            try {
                auto s = solve_lambdas(d, N, {a, b});
                bool seen = false;
                for (const auto& r : roots) seen = seen || max_abs_diff(r, s.lambdas) < 1e-8;
                if (!seen) roots.push_back(s.lambdas);
            } catch (const Error&) {
            }
        }
    }
    std::vector<std::vector<double>> physical;
    for (const auto& r : roots)
        if (rapidity_consistency(d, N, r) <= 1e-7) physical.push_back(charge_eigenvalues(d, r, N));
    EXPECT_EQ(physical.size(), sector_dimension(d, N));
    EXPECT_GT(roots.size(), physical.size());  // the system has roots without rapidities
    auto E = diagonalize(build_sector_basis(d, N));
    EXPECT_LE(match_spectrum(E, physical).max_deviation, 1e-9);
}

TEST(SolvePattern, RepresentationsAgree) {
    std::vector<std::pair<ModelSpec, std::vector<int>>> cases{
        {model_dicke(0.5, {1.0, 1.8, 2.9}, 0.4), {1, 1, 0, 1}},
        {model_pip(1.2, 0.7, {0.8, 1.6, 2.5}), {0, 1, 0, 1}},
        {model_pip(1.2, 0.7, {0.8, 1.6, 2.5}), {2, 0, 0, 0}},
        {model_xxz(Realization::Hyperbolic, {0.5, 1.3, 2.4}, -0.3), {0, 1, 1, 0}},
    };
    for (const auto& [M, pat] : cases) {
        auto s = solve_pattern(M, pat);
        ASSERT_TRUE(s.rapidities);
        int N = static_cast<int>(s.rapidities->size());
        EXPECT_LE(s.residual_rapidity, 1e-10);
        EXPECT_LE(max_abs_diff(lambdas_from_rapidities(M, *s.rapidities), s.lambdas), 1e-9);
        if (M.variant != ModelVariant::XXZSpin) EXPECT_LE(lambda_residual(M, N, s.lambdas), 1e-9);
        if (M.variant == ModelVariant::PipBoson)
            EXPECT_LE(std::abs(s.lambda0 - pip_lambda0(M, s.lambdas, N)), 1e-10);
        auto E = diagonalize(build_sector_basis(M, N));
        EXPECT_LE(compare_solution(E, s.charges).deviation, 1e-9) << variant_name(M.variant);
    }
}

TEST(Residuals, SensitiveToPerturbation) {
    auto d = model_dicke(1, {2, 3, 4}, -0.3);
    auto s = solve_pattern(d, {1, 0, 1, 0});
    auto r = residuals(d, s);
    EXPECT_LE(r.residual_rapidity, 1e-12);
    EXPECT_LE(r.residual_lambda, 1e-12);

    // residuals are relative to the largest term; the minimal model has O(1) terms
    auto m1 = model_dicke(0, {2}, 1);
    auto c = solve_lambdas(m1, 1, {-2.3});
    EXPECT_LE(residuals(m1, c).residual_lambda, 1e-14);
    auto bad = c;
    bad.lambdas[0] += 1e-3;
    EXPECT_GT(residuals(m1, bad).residual_lambda, 1e-4);

    auto v = solve_rapidities(d, 0, {});
    auto rv = residuals(d, v);
    EXPECT_EQ(rv.residual_rapidity, 0.0);
    EXPECT_EQ(rv.residual_lambda, 0.0);
}

TEST(Duality, DirectFormula) {
    auto l = dual_lambdas(std::vector<double>{1.0}, 0.5);
    EXPECT_DOUBLE_EQ(l[0], 5.0);
    auto twice = dual_lambdas(dual_lambdas({0.3, -1.2}, 0.7), 0.7);
    EXPECT_NEAR(twice[0], 0.3 + 4 / 0.7, 1e-14);
    EXPECT_NEAR(twice[1], -1.2 + 4 / 0.7, 1e-14);
    EXPECT_EQ(code_of([] { dual_lambdas({1.0}, 0.0); }), ErrorCode::ZeroCoupling);
    EXPECT_EQ(code_of([] { dual_lambdas(model_dicke(0, {2}, 1), {1.0}); }), ErrorCode::WrongVariant);
}

TEST(Duality, HoleFormOnConvergedStates) {
    auto M = model_xxz(Realization::Trigonometric, {-0.8, 0.1, 0.9, 2.0}, 0.45);
    for (int N : {1, 2, 3}) {
        for (const auto& s : enumerate_states(M, N)) {
            auto dual = dual_lambdas(M, s.lambdas);
            EXPECT_LE(xxz_hole_residual(M, N, dual), 1e-9);
            EXPECT_LE(max_abs_diff(xxz_hole_charge_eigenvalues(M, dual), s.charges), 1e-10);
        }
    }
}

TEST(KappaDerivative, MatchesFiniteDifferences) {
    auto M = model_pip(2.5, 1.0, {1, 2, 3, 4});
    const double h = 1e-5;
    for (const auto& s : enumerate_states(M, 2)) {
        auto d = lambda_kappa_derivative(M, s);
        auto Mp = M, Mm = M;
        Mp.kappa += h;
        Mm.kappa -= h;
        auto lp = solve_lambdas(Mp, 2, s.lambdas).lambdas;
        auto lm = solve_lambdas(Mm, 2, s.lambdas).lambdas;
        for (int i = 0; i < M.m(); ++i) {
            double fd = (lp[i] - lm[i]) / (2 * h);
            EXPECT_LE(std::abs(fd - d[i]), 1e-5 * std::max(1.0, std::abs(d[i])));
        }
    }
}
