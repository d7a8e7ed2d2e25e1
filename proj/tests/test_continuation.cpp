#include <gtest/gtest.h>

#include <cmath>

#include "rgbethe/errors.hpp"
#include "rgbethe/solver.hpp"

using namespace rgbethe;

namespace {

ModelSpec reference_model() {
    std::vector<double> lev;
    for (int e = 2; e <= 12; ++e) lev.push_back(e);
    return model_dicke(1, lev, -0.1);
}

double max_dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    // order-independent: greedy nearest match
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const auto& x : a) {
        int best = -1;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!used[j] && (best < 0 || std::abs(x - b[j]) < std::abs(x - b[best]))) best = static_cast<int>(j);
        used[best] = true;
        worst = std::max(worst, std::abs(x - b[best]));
    }
    return worst;
}

}  // namespace

TEST(Secular, MinimalModel) {
    auto r = secular_roots(model_dicke(0, {2}, 1));
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r[0], 1 - std::sqrt(2.0), 1e-13);
    EXPECT_NEAR(r[1], 1 + std::sqrt(2.0), 1e-13);
}

TEST(Secular, RootsSolveSecularEquation) {
    auto M = reference_model();
    auto r = secular_roots(M);
    ASSERT_EQ(r.size(), 12u);
    for (double x : r) {
        // Newton distance to the true root, relative to x
        double f = (M.eps0 - x), df = -1.0;
        for (int k = 0; k < M.m(); ++k) {
            double t = 2 * M.coupling * M.coupling * M.spins[k] / (M.levels[k] - x);
            f -= t;
            df -= t / (M.levels[k] - x);
        }
        EXPECT_LE(std::abs(f / df), 1e-13 * std::max(1.0, std::abs(x)));
    }
}

TEST(Partition, ParseAndPrint) {
    auto p = parse_partition("0*2,1,3");
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0], std::make_pair(0, 2));
    EXPECT_EQ(p[2], std::make_pair(3, 1));
    EXPECT_EQ(partition_to_string(p), "0*2,1,3");
    EXPECT_THROW(parse_partition("a,b"), Error);
}

TEST(ContractionSeed, DistinctAndSplitRoots) {
    auto d = model_dicke(0, {2}, 1);
    auto s = contraction_seed(d, 1, {{1, 1}});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_NEAR(s[0].real(), 1 + std::sqrt(2.0), 1e-13);

    auto M = reference_model();
    auto r = secular_roots(M);
    auto distinct = contraction_seed(M, 3, {{1, 1}, {4, 1}, {7, 1}});
    EXPECT_EQ(distinct[0], cplx(r[1]));
    EXPECT_EQ(distinct[2], cplx(r[7]));

    SolveConfig cfg;
    cfg.seed_radius = 1e-3;
    auto split = contraction_seed(M, 2, {{0, 2}}, cfg);
    ASSERT_EQ(split.size(), 2u);
    EXPECT_NEAR(split[0].real(), r[0], 1e-14);
    EXPECT_NEAR(std::abs(split[0].imag()), 2e-3, 1e-14);
    EXPECT_NEAR(split[0].imag(), -split[1].imag(), 1e-15);
}

TEST(ContractionSeed, BadPartitions) {
    auto M = reference_model();
    auto code = [&](const Partition& p, int N) {
        try {
            contraction_seed(M, N, p);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidInput;
    };
    EXPECT_EQ(code({{0, 1}}, 2), ErrorCode::BadPartition);    // wrong total
    EXPECT_EQ(code({{40, 1}}, 1), ErrorCode::BadPartition);   // no such root
    EXPECT_EQ(code({{5, 2}}, 2), ErrorCode::BadPartition);    // spin-1/2 level root holds one
}

TEST(Continuation, TrivialPath) {
    auto M = reference_model();
    auto st = continuation_start(M, 0, {});
    auto path = continuation_xi(M, 0, st);
    ASSERT_EQ(path.xi_samples.size(), 2u);
    EXPECT_EQ(path.xi_samples.front(), 0.0);
    EXPECT_EQ(path.xi_samples.back(), 1.0);
    EXPECT_EQ(path.flagged_count(), 0u);
}

// Reference parameters (m = 11, N = 6); the endpoints must solve the RG equations at both ends and
// the reverse sweep must come back to the start.
TEST(Continuation, ReferencePartitions) {
    auto M = reference_model();
    int with_complex_pair = 0;
    for (const char* spec : {"0,1,2,3,4,5", "0*2,1,2,3,4", "1,3,5,7,9,10"}) {
        auto part = parse_partition(spec);
        auto st = continuation_start(M, 6, part);
        ASSERT_TRUE(st.rapidities);
        EXPECT_LE(rapidity_residual(M, *st.rapidities), 1e-8) << spec;
        auto path = continuation_xi(M, 6, st);
        ASSERT_GE(path.xi_samples.size(), 3u);
        EXPECT_DOUBLE_EQ(path.xi_samples.back(), 1.0);
        EXPECT_LE(path.flagged_count(), path.xi_samples.size() / 20);
        const auto& end = path.rapidity_snapshots.back();
        EXPECT_LE(deformed_residual(M, end, 1.0, 0.5), 1e-8) << spec;
        for (std::size_t k = 1; k < path.xi_samples.size(); ++k) EXPECT_GT(path.xi_samples[k], path.xi_samples[k - 1]);

        bool cpair = false;
        for (const auto& x : end) cpair = cpair || std::abs(x.imag()) > 1e-6;
        with_complex_pair += cpair;

        // independent Newton solve at xi = 1 from a perturbed endpoint
        std::vector<cplx> pert = end;
        for (auto& x : pert) x *= 1.0 + 1e-6;
        EXPECT_LE(max_dist(solve_deformed(M, pert, 1.0), end), 1e-7) << spec;

        SolveConfig rc;
        rc.xi_start = 1.0;
        rc.xi_end = 0.0;
        BetheSolution back_start = st;
        back_start.rapidities = end;
        auto back = continuation_xi(M, 6, back_start, rc);
        EXPECT_DOUBLE_EQ(back.xi_samples.back(), 0.0);
        EXPECT_LE(max_dist(back.rapidity_snapshots.back(), *st.rapidities), 1e-7) << spec;
    }
    EXPECT_GE(with_complex_pair, 1);
}
