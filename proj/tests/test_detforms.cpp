#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rgbethe/detforms.hpp"
#include "rgbethe/errors.hpp"
#include "rgbethe/oracle.hpp"
#include "test_util.hpp"

using namespace rgbethe;
using namespace rgbethe::tutil;

namespace {

const double r2 = std::sqrt(2.0);

// solutions with finite rapidities, from every weak-coupling pattern that solve_pattern handles
std::vector<BetheSolution> pattern_states(const ModelSpec& M, int N) {
    std::vector<BetheSolution> out;
    std::vector<int> counts(M.m() + 1, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == M.m() + 1) {
            if (left == 0) out.push_back(solve_pattern(M, counts));
            return;
        }
        int cap = i == 0 ? (M.has_boson() ? left : 0) : std::min(left, 1);
        for (int c = 0; c <= cap; ++c) {
            counts[i] = c;
            rec(i + 1, left - c);
        }
        counts[i] = 0;
    };
    rec(0, N);
    return out;
}

VectorXcd overlaps(const ModelSpec& M, const BetheSolution& s, const SectorBasis& B) {
    VectorXcd v(B.size());
    for (int k = 0; k < B.size(); ++k) v(k) = overlap(M, s, B.states[k], -3.7).value;
    return v;
}

double norm_of(const ModelSpec& M, const BetheSolution& s) {
    return (M.variant == ModelVariant::Dicke ? norm_dicke(M, s) : norm_pip(M, s)).real();
}

}  // namespace

TEST(Overlap, MinimalDicke) {
    auto d = model_dicke(0, {2}, 1);
    auto s = solve_rapidities(d, 1, {cplx(2.5)});
    EXPECT_NEAR(overlap_dicke(d, s, {1, {0}}).real(), 1.0, 1e-12);
    EXPECT_NEAR(overlap_dicke(d, s, {0, {1}}).real(), 1 + r2, 1e-12);
    EXPECT_NEAR(std::abs(permanent_expansion(d, *s.rapidities, {0, {1}}) - (1 + r2)), 0.0, 1e-12);
}

TEST(Overlap, MinimalPip) {
    auto p = model_pip(1, 0, {2});
    auto s = solve_rapidities(p, 1, {cplx(0.8)});
    EXPECT_NEAR(overlap_pip(p, s, {1, {0}}).real(), 1.0, 1e-12);
    EXPECT_NEAR(overlap_pip(p, s, {0, {1}}).real(), -1.0, 1e-12);
    // Lambda-only solution gives the same numbers
    auto l = solve_lambdas(p, 1, {2.4});
    EXPECT_NEAR(overlap_pip(p, l, {0, {1}}).real(), -1.0, 1e-12);
}

TEST(Overlap, MatchesPermanentAndDirectExpansion) {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> U(0.2, 1.2);
    for (int trial = 0; trial < 6; ++trial) {
        auto lev = increasing_levels(rng, 4, 0.3, 0.4, 1.3);
        std::vector<ModelSpec> models{model_dicke(U(rng) - 0.7, lev, 0.3 * U(rng)),
                                      model_pip(1 + U(rng), 2.2 + U(rng), lev),
                                      model_xxz(Realization::Trigonometric, lev, 0.05 * U(rng)),
                                      model_xxz(Realization::Hyperbolic, lev, -0.2 * U(rng))};
        for (const auto& M : models) {
            for (int N : {1, 2, 3}) {
                auto B = build_sector_basis(M, N);
                for (const auto& s : pattern_states(M, N)) {
                    VectorXcd direct = bethe_vector(M, *s.rapidities);
                    for (int k = 0; k < B.size(); ++k) {
                        cplx perm = permanent_expansion(M, *s.rapidities, B.states[k]);
                        cplx det = overlap(M, s, B.states[k], -3.7).value;
                        double scale = std::max(1e-3, direct.cwiseAbs().maxCoeff());
                        EXPECT_LE(std::abs(perm - direct(k)), 1e-10 * scale) << variant_name(M.variant);
                        EXPECT_LE(std::abs(det - direct(k)), 1e-9 * scale) << variant_name(M.variant);
                    }
                }
            }
        }
    }
}

TEST(Overlap, PermanentSymmetricInRapidities) {
    auto d = model_dicke(0.4, {1, 2, 3}, 0.5);
    std::vector<cplx> x{cplx(0.3, 0.1), cplx(1.7, 0), cplx(0.3, -0.1)}, y{x[2], x[0], x[1]};
    BasisState b{1, {1, 0, 1}};
    EXPECT_LE(std::abs(permanent_expansion(d, x, b) - permanent_expansion(d, y, b)), 1e-13);
    std::vector<cplx> many(13, cplx(0.5, 0.0));
    EXPECT_THROW(permanent_expansion(d, many, {13, {0, 0, 0}}), Error);
}

TEST(OverlapXXZ, GaugeIndependenceAndErrors) {
    auto M = model_xxz(Realization::Trigonometric, {-0.5, 0.4, 1.2, 2.1}, 0.3);
    auto v = solve_rapidities(M, 0, {});
    EXPECT_NEAR(overlap_xxz_spin(M, v, {}, 5.0).real(), 1.0, 1e-15);
    for (const auto& s : pattern_states(M, 2)) {
        for (std::vector<int> occ : {std::vector<int>{0, 1}, {1, 3}, {2, 3}}) {
            cplx a = overlap_xxz_spin(M, s, occ, -2.3).value;
            cplx b = overlap_xxz_spin(M, s, occ, 7.9).value;
            EXPECT_LE(rel(a, b), 1e-9);
        }
    }
    auto s = pattern_states(M, 1).front();
    try {
        overlap_xxz_spin(M, s, {0}, 0.4);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GaugeCollision);
    }
    EXPECT_THROW(overlap_xxz_spin(M, s, {0, 1}, 3.0), Error);
}

TEST(Norm, ClosedForms) {
    auto d = model_dicke(0, {2}, 1);
    auto s = solve_lambdas(d, 1, {-2.3});
    EXPECT_NEAR(norm_dicke(d, s).real(), 4 + 2 * r2, 1e-12);
    auto p = model_pip(1, 0, {2});
    double x = -2 + 2 * r2;
    auto sp = solve_lambdas(p, 1, {2.4});
    EXPECT_NEAR(norm_pip(p, sp).real(), 1 + std::pow(r2 * x / (2 - x), 2), 1e-10);
    EXPECT_NEAR(norm_dicke(d, solve_lambdas(d, 0, {0.0})).real(), 1.0, 1e-15);
    EXPECT_NEAR(norm_pip(p, solve_lambdas(p, 0, {0.0})).real(), 1.0, 1e-15);
}

TEST(Norm, AgreesWithDirectExpansion) {
    for (const auto& M : {model_dicke(1, {2, 3, 4, 5}, -0.25), model_pip(1.8, 2.4, {0.7, 1.4, 2.2, 3.3})}) {
        for (int N : {1, 2, 3}) {
            auto B = build_sector_basis(M, N);
            for (const auto& s : pattern_states(M, N)) {
                double direct = bethe_vector(M, *s.rapidities).squaredNorm();
                double nrm = norm_of(M, s);
                EXPECT_GT(nrm, 0.0);
                EXPECT_LE(std::abs(nrm - direct), 1e-8 * direct) << variant_name(M.variant) << " N=" << N;
                EXPECT_LE(std::abs(nrm - overlaps(M, s, B).squaredNorm()), 1e-8 * direct);
            }
        }
    }
}

TEST(FormFactors, MinimalCases) {
    auto p = model_pip(1, 0, {2});
    auto s1 = solve_lambdas(p, 1, {2.4});
    auto s0 = solve_lambdas(p, 0, {0.0});
    EXPECT_NEAR(ff_boson_pip(p, s1, s0).real(), 1.0, 1e-12);
    auto nf = ff_number_pip(p, s1, s1);
    EXPECT_TRUE(nf.diagonal);
    double n = norm_pip(p, s1).real();
    EXPECT_NEAR((nf.sz[0] + nf.boson) / n, 0.5, 1e-12);

    auto p2 = model_pip(1.3, 1.4, {1.0, 2.5});
    auto v = solve_lambdas(p2, 0, {0, 0});
    for (const auto& s : pattern_states(p2, 1)) {
        VectorXcd psi = bethe_vector(p2, *s.rapidities);
        auto B1 = build_sector_basis(p2, 1);
        for (int k = 0; k < 2; ++k) {
            std::vector<int> occ(2, 0);
            occ[k] = 1;
            EXPECT_NEAR(ff_raise_pip(p2, s, v, k).real(), psi(B1.find({0, occ})).real(), 1e-10);
        }
    }
}

// <a|Op|b> between unnormalized Bethe vectors built by brute force
TEST(FormFactors, AgainstDirectMatrixElements) {
    auto M = model_pip(1.6, 2.35, {0.8, 1.5, 2.3, 3.4});
    auto B1 = build_sector_basis(M, 1), B2 = build_sector_basis(M, 2);
    auto s1 = pattern_states(M, 1), s2 = pattern_states(M, 2);
    ASSERT_EQ(s2.size(), 11u);
    std::vector<VectorXcd> v1, v2;
    for (auto& s : s1) v1.push_back(bethe_vector(M, *s.rapidities));
    for (auto& s : s2) v2.push_back(bethe_vector(M, *s.rapidities));
    auto scale = [](const VectorXcd& a, const VectorXcd& b) { return a.norm() * b.norm(); };

    Eigen::MatrixXd bd = build_operator(B1, B2, {OpKind::BosonCreate, -1});
    Eigen::MatrixXd b = build_operator(B2, B1, {OpKind::BosonAnnihilate, -1});
    for (std::size_t a = 0; a < s2.size(); ++a) {
        for (std::size_t c = 0; c < s1.size(); ++c) {
            double want = (v2[a].adjoint() * bd.cast<cplx>() * v1[c])(0).real();
            double got = ff_boson_pip(M, s2[a], s1[c]).real();
            EXPECT_LE(std::abs(got - want), 1e-9 * scale(v2[a], v1[c]));
            // lowering: <c|b|a> is the same number
            double low = (v1[c].adjoint() * b.cast<cplx>() * v2[a])(0).real();
            EXPECT_LE(std::abs(low - got), 1e-9 * scale(v2[a], v1[c]));
            for (int k = 0; k < M.m(); ++k) {
                Eigen::MatrixXd sp = build_operator(B1, B2, {OpKind::Raise, k});
                double w = (v2[a].adjoint() * sp.cast<cplx>() * v1[c])(0).real();
                EXPECT_LE(std::abs(ff_raise_pip(M, s2[a], s1[c], k).real() - w), 1e-9 * scale(v2[a], v1[c]));
            }
        }
    }

    std::vector<Eigen::MatrixXcd> sz;
    for (int i = 0; i < M.m(); ++i) sz.push_back(build_operator(B2, {OpKind::Sz, i}).cast<cplx>());
    Eigen::MatrixXcd nb = build_operator(B2, {OpKind::BosonNumber, -1}).cast<cplx>();
    for (std::size_t a = 0; a < s2.size(); ++a) {
        for (std::size_t c = 0; c < s2.size(); ++c) {
            auto nf = ff_number_pip(M, s2[a], s2[c]);
            EXPECT_EQ(nf.diagonal, a == c);
            double sc = scale(v2[a], v2[c]);
            double total = nf.boson;
            for (int i = 0; i < M.m(); ++i) {
                double w = (v2[a].adjoint() * sz[i] * v2[c])(0).real();
                EXPECT_LE(std::abs(nf.sz[i] - w), 1e-8 * sc) << a << " " << c << " " << i;
                total += nf.sz[i];
            }
            EXPECT_LE(std::abs(nf.boson - (v2[a].adjoint() * nb * v2[c])(0).real()), 1e-8 * sc);
            if (a == c)
                EXPECT_NEAR(total / norm_pip(M, s2[a]).real(), 2 - 2.0, 1e-8);
            else
                EXPECT_LE(std::abs(total), 1e-8 * sc);
        }
    }
}

TEST(FormFactors, Preconditions) {
    auto M = model_pip(1.6, 1.85, {0.8, 1.5, 2.3});
    auto s1 = pattern_states(M, 1);
    auto other = model_pip(1.7, 1.85, {0.8, 1.5, 2.3});
    auto t0 = solve_lambdas(other, 0, {0, 0, 0});
    auto code = [](const std::function<void()>& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidInput;
    };
    EXPECT_EQ(code([&] { ff_raise_pip(M, s1[0], t0, 0); }), ErrorCode::SectorMismatch);
    EXPECT_EQ(code([&] { ff_boson_pip(M, s1[0], s1[1]); }), ErrorCode::SectorMismatch);
    EXPECT_EQ(code([&] { ff_number_pip(M, s1[0], pattern_states(M, 2)[0]); }), ErrorCode::SectorMismatch);
}

TEST(FormFactors, NormalizedHelper) {
    EXPECT_DOUBLE_EQ(normalized_element(6.0, 4.0, 9.0), 1.0);
}
