#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "newton.hpp"
#include "rapidity_eqs.hpp"
#include "rgbethe/errors.hpp"
#include "rgbethe/solver.hpp"
#include "tracker.hpp"

namespace rgbethe {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

std::size_t ContinuationPath::flagged_count() const {
    return static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), true));
}

double rapidity_residual(const ModelSpec& model, const std::vector<cplx>& x) {
    if (x.empty()) return 0.0;
    VectorXcd v = Eigen::Map<const VectorXcd>(x.data(), x.size());
    VectorXcd f;
    VectorXd s;
    detail::rapidity_eval(model, v, f, s, nullptr);
    return detail::scaled_norm<cplx>(f, s);
}

namespace {

std::vector<cplx> lambda_sums(const ModelSpec& model, const std::vector<cplx>& x) {
    std::vector<cplx> L(model.m(), 0.0);
    for (int i = 0; i < model.m(); ++i) {
        double e = model.levels[i];
        for (const cplx& xa : x) {
            switch (model.variant) {
                case ModelVariant::Dicke: L[i] += 1.0 / (e - xa); break;
                case ModelVariant::PipBoson: L[i] += (e + xa) / (e - xa); break;
                case ModelVariant::XXZSpin: L[i] += kernel_Z(model.realization, e, xa); break;
            }
        }
    }
    return L;
}

}  // namespace

std::vector<double> lambdas_from_rapidities(const ModelSpec& model, const std::vector<cplx>& x) {
    auto L = lambda_sums(model, x);
    std::vector<double> out(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) {
        if (std::abs(L[i].imag()) > 1e-9 * (1.0 + std::abs(L[i])))
            throw Error(ErrorCode::NonrealLambda, "rapidities are not conjugate-paired (Im Lambda_" +
                                                      std::to_string(i + 1) + " = " + std::to_string(L[i].imag()) + ")");
        out[i] = L[i].real();
    }
    return out;
}

double lambda0_from_rapidities(const ModelSpec& model, const std::vector<cplx>& x) {
    if (model.variant != ModelVariant::PipBoson) throw Error(ErrorCode::WrongVariant, "Lambda_0 exists for PipBoson only");
    cplx s = 0.0;
    for (const cplx& xa : x) s += model.eta0_sq / xa;
    if (std::abs(s.imag()) > 1e-9 * (1.0 + std::abs(s))) throw Error(ErrorCode::NonrealLambda, "Lambda_0 is not real");
    return s.real();
}

BetheSolution solve_rapidities(const ModelSpec& model, int N, const std::vector<cplx>& seed, const SolveConfig& config) {
    if (N < 0) throw Error(ErrorCode::InvalidInput, "N must be nonnegative");
    if (static_cast<int>(seed.size()) != N)
        throw Error(ErrorCode::SeedDimensionMismatch,
                    "seed has " + std::to_string(seed.size()) + " entries, N = " + std::to_string(N));
    VectorXcd x = Eigen::Map<const VectorXcd>(seed.data(), seed.size());
    if (!detail::pole_guard_ok(model, x, config.pole_guard))
        throw Error(ErrorCode::PoleCollision, "seed lies within the pole guard");
    detail::EvalFn<cplx> eval = [&](const VectorXcd& y, VectorXcd& f, VectorXd& s, MatrixXcd* J) {
        detail::rapidity_eval(model, y, f, s, J);
    };
    detail::GuardFn<cplx> guard = [&](const VectorXcd& y) { return detail::pole_guard_ok(model, y, config.pole_guard); };
    auto out = detail::damped_newton<cplx>(eval, x, config.newton_tol, config.max_iter, guard, config.fd_jacobian);
    if (out.pole_hit) throw Error(ErrorCode::PoleCollision, "Newton step entered the pole guard");
    if (!out.converged) {
        std::ostringstream os;
        os << "rapidity Newton stopped at residual " << out.residual;
        throw Error(ErrorCode::NoConvergence, os.str());
    }
    if (!detail::symmetrize_pairs(x))
        throw Error(ErrorCode::NonrealLambda, "converged rapidities contain an unpaired complex value");

    BetheSolution s;
    s.model = model;
    s.N = N;
    s.rapidities = std::vector<cplx>(x.data(), x.data() + x.size());
    s.lambdas = lambdas_from_rapidities(model, *s.rapidities);
    if (model.variant == ModelVariant::PipBoson)
        s.lambda0 = N ? lambda0_from_rapidities(model, *s.rapidities) : 0.0;
    s.residual_rapidity = rapidity_residual(model, *s.rapidities);
    s.residual_lambda = lambda_residual(model, N, s.lambdas);
    s.charges = charge_eigenvalues(model, s.lambdas, N);
    s.converged = true;
    return s;
}

namespace {

// Physicists' Hermite roots (Golub-Welsch): the weak-coupling shape of a bosonic cluster.
std::vector<double> hermite_roots(int k) {
    if (k <= 1) return std::vector<double>(std::max(k, 0), 0.0);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 1; i < k; ++i) T(i, i - 1) = T(i - 1, i) = std::sqrt(i / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + k);
}

double channel_gap(const ModelSpec& model) {
    std::vector<double> ch = model.levels;
    if (model.variant == ModelVariant::Dicke) ch.push_back(model.eps0);
    std::sort(ch.begin(), ch.end());
    double gap = 1.0;
    for (std::size_t i = 1; i < ch.size(); ++i) gap = std::min(gap, ch[i] - ch[i - 1]);
    return gap;
}

}  // namespace

BetheSolution solve_pattern(const ModelSpec& model, const std::vector<int>& counts, const SolveConfig& config) {
    const int m = model.m();
    if (static_cast<int>(counts.size()) != m + 1)
        throw Error(ErrorCode::BadPartition, "pattern needs one boson count plus one count per level");
    int N = 0;
    for (int i = 0; i <= m; ++i) {
        if (counts[i] < 0) throw Error(ErrorCode::BadPartition, "negative count");
        if (i > 0 && counts[i] > 1) throw Error(ErrorCode::BadPartition, "at most one rapidity per level");
        N += counts[i];
    }
    if (!model.has_boson() && counts[0] != 0) throw Error(ErrorCode::BadPartition, "XXZ model has no boson channel");
    if (N == 0) return solve_rapidities(model, 0, {}, config);

    const int nb = counts[0];
    auto herm = hermite_roots(nb);
    ModelSpec mt = model;
    std::function<void(double)> set_t;
    double t0 = 0.0;
    VectorXcd x(N);
    int a = 0;

    switch (model.variant) {
        case ModelVariant::Dicke: {
            const double G = model.coupling;
            double gs = 1e-3 * channel_gap(model) / std::sqrt(1.0 + nb);
            t0 = std::min(1.0, gs / std::abs(G));
            double Gs = G * t0;
            for (int j = 0; j < nb; ++j) x(a++) = cplx(model.eps0, std::sqrt(2.0) * std::abs(Gs) * herm[j]);
            for (int i = 0; i < m; ++i)
                if (counts[i + 1])
                    x(a++) = model.levels[i] - 2.0 * Gs * Gs * model.spins[i] / (model.eps0 - model.levels[i]);
            set_t = [&mt, G](double t) { mt.coupling = G * t; };
            break;
        }
        case ModelVariant::XXZSpin: {
            const double g = model.coupling;
            double wmax = 1.0;
            for (double e : model.levels)
                wmax = std::max(wmax, model.realization == Realization::Trigonometric ? 1.0 + e * e : 2.0 * std::abs(e));
            t0 = std::min(1.0, 1e-3 * channel_gap(model) / (wmax * std::abs(g)));
            double gs = g * t0;
            for (int i = 0; i < m; ++i) {
                if (!counts[i + 1]) continue;
                double e = model.levels[i], s = model.spins[i];
                x(a++) = model.realization == Realization::Trigonometric ? e + gs * s * (1.0 + e * e) : e + 2.0 * e * gs * s;
            }
            set_t = [&mt, g](double t) { mt.coupling = g * t; };
            break;
        }
        case ModelVariant::PipBoson: {
            double emin = *std::min_element(model.levels.begin(), model.levels.end());
            double zmax = 0.0;
            for (int i = 0; i < m; ++i) {
                double zs = 0.0;
                for (int j = 0; j < m; ++j)
                    if (j != i) zs += std::abs(model.Zlev(i, j));
                zmax = std::max(zmax, zs);
            }
            double K = std::max(model.kappa, 1e3 * (1.0 + m + N + model.eta0_sq / emin + zmax));
            for (int j = 0; j < nb; ++j)
                x(a++) = (model.eta0_sq / K) * cplx(1.0, std::sqrt(2.0 / K) * herm[j]);
            for (int i = 0; i < m; ++i)
                if (counts[i + 1]) x(a++) = model.levels[i] * (1.0 + 2.0 * model.spins[i] / K);
            const double kt = model.kappa;
            set_t = [&mt, K, kt](double t) { mt.kappa = K + t * (kt - K); };
            t0 = 0.0;
            break;
        }
    }

    // converge at the starting coupling
    set_t(t0);
    {
        std::vector<cplx> seed(x.data(), x.data() + N);
        SolveConfig c0 = config;
        c0.newton_tol = std::max(config.newton_tol, 1e-11);
        BetheSolution s0 = solve_rapidities(mt, N, seed, c0);
        x = Eigen::Map<const VectorXcd>(s0.rapidities->data(), N);
    }
    if (t0 < 1.0) {
        detail::TrackSystem sys;
        sys.eval = [&](const VectorXcd& y, double t, VectorXcd& f, VectorXd& s, MatrixXcd* J) {
            set_t(t);
            detail::rapidity_eval(mt, y, f, s, J);
        };
        sys.guard = [&](const VectorXcd& y) { return detail::pole_guard_ok(mt, y, config.pole_guard); };
        detail::TrackOptions opt;
        opt.t0 = t0;
        opt.t1 = 1.0;
        opt.initial_step = model.variant == ModelVariant::PipBoson ? config.step.initial_step : t0;
        opt.min_step = config.step.min_step;
        opt.max_step = config.step.max_step;
        opt.shrink = config.step.shrink;
        opt.grow = config.step.grow;
        opt.tol = std::max(config.newton_tol, 1e-11);
        opt.trust = config.trust_distance;
        opt.cond_limit = config.cond_limit;
        auto path = detail::track(sys, x, opt);
        const auto& last = path.rapidity_snapshots.back();
        x = Eigen::Map<const VectorXcd>(last.data(), N);
    }
    BetheSolution s = solve_rapidities(model, N, std::vector<cplx>(x.data(), x.data() + N), config);
    s.pattern.assign(counts.begin() + 1, counts.end());
    return s;
}

}  // namespace rgbethe
