#include <algorithm>
#include <cmath>
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

namespace {

void require_dicke(const ModelSpec& model) {
    if (model.variant != ModelVariant::Dicke)
        throw Error(ErrorCode::WrongVariant, "the xi deformation is defined for the Dicke model");
}

std::vector<double> hermite_shape(int k) {
    if (k <= 1) return std::vector<double>(std::max(k, 0), 0.0);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 1; i < k; ++i) T(i, i - 1) = T(i - 1, i) = std::sqrt(i / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    std::vector<double> h(es.eigenvalues().data(), es.eigenvalues().data() + k);
    double hmax = std::max(std::abs(h.front()), std::abs(h.back()));
    for (double& v : h) v /= hmax;
    return h;
}

// Channel anchor per sorted root: -1 for the boson, otherwise the level index.
std::vector<int> root_anchors(const ModelSpec& model) {
    std::vector<std::pair<double, int>> ch;
    ch.emplace_back(model.eps0, -1);
    for (int i = 0; i < model.m(); ++i) ch.emplace_back(model.levels[i], i);
    std::sort(ch.begin(), ch.end());
    std::vector<int> out;
    for (auto& c : ch) out.push_back(c.second);
    return out;
}

void check_partition(const ModelSpec& model, int N, const Partition& partition) {
    auto anchors = root_anchors(model);
    std::vector<int> seen(anchors.size(), 0);
    int total = 0;
    for (auto [root, k] : partition) {
        if (root < 0 || root >= static_cast<int>(anchors.size()))
            throw Error(ErrorCode::BadPartition, "root index " + std::to_string(root) + " out of range");
        if (k <= 0) throw Error(ErrorCode::BadPartition, "multiplicities must be positive");
        if (seen[root]++) throw Error(ErrorCode::BadPartition, "root " + std::to_string(root) + " listed twice");
        int a = anchors[root];
        if (a >= 0 && k > static_cast<int>(std::lround(2.0 * model.spins[a])))
            throw Error(ErrorCode::BadPartition, "root " + std::to_string(root) + " holds at most " +
                                                     std::to_string(std::lround(2.0 * model.spins[a])) + " rapidities");
        total += k;
    }
    if (total != N)
        throw Error(ErrorCode::BadPartition, "partition places " + std::to_string(total) + " rapidities, N = " +
                                                 std::to_string(N));
}

}  // namespace

std::vector<double> secular_roots(const ModelSpec& model) {
    require_dicke(model);
    const int m = model.m();
    // Arrowhead matrix whose characteristic polynomial is the secular polynomial.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m + 1);
    A(0, 0) = model.eps0;
    for (int k = 0; k < m; ++k) {
        double c = std::sqrt(2.0 * model.coupling * model.coupling * model.spins[k]);
        A(0, k + 1) = A(k + 1, 0) = c;
        A(k + 1, k + 1) = model.levels[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::RootFindingFailure, "secular eigenvalue solve failed");
    std::vector<double> r(es.eigenvalues().data(), es.eigenvalues().data() + m + 1);
    std::sort(r.begin(), r.end());
    return r;
}

Partition parse_partition(const std::string& spec) {
    Partition p;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (item.empty()) continue;
        auto star = item.find_first_of("*x");
        try {
            std::size_t used = 0;
            int root = std::stoi(item.substr(0, star), &used);
            if (used != (star == std::string::npos ? item.size() : star)) throw std::invalid_argument(item);
            int k = 1;
            if (star != std::string::npos) {
                std::string rest = item.substr(star + 1);
                k = std::stoi(rest, &used);
                if (used != rest.size()) throw std::invalid_argument(item);
            }
            p.emplace_back(root, k);
        } catch (const std::exception&) {
            throw Error(ErrorCode::BadPartition, "cannot parse partition entry '" + item + "'");
        }
    }
    return p;
}

std::string partition_to_string(const Partition& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(p[i].first);
        if (p[i].second != 1) s += '*' + std::to_string(p[i].second);
    }
    return s;
}

std::vector<cplx> contraction_seed(const ModelSpec& model, int N, const Partition& partition, const SolveConfig& config) {
    require_dicke(model);
    check_partition(model, N, partition);
    auto roots = secular_roots(model);
    std::vector<cplx> seed;
    for (auto [root, k] : partition) {
        if (k == 1) {
            seed.emplace_back(roots[root], 0.0);
            continue;
        }
        // Hermite-shaped split along the imaginary axis, outermost at seed_radius * k
        double r = config.seed_radius * k;
        for (double h : hermite_shape(k)) seed.emplace_back(roots[root], r * h);
    }
    return seed;
}

double deformed_residual(const ModelSpec& model, const std::vector<cplx>& E, double xi, double s0) {
    require_dicke(model);
    if (E.empty()) return 0.0;
    VectorXcd v = Eigen::Map<const VectorXcd>(E.data(), E.size());
    VectorXcd f;
    VectorXd s;
    detail::deformed_eval(model, xi, s0, v, f, s, nullptr);
    return detail::scaled_norm<cplx>(f, s);
}

std::vector<cplx> solve_deformed(const ModelSpec& model, const std::vector<cplx>& seed, double xi,
                                 const SolveConfig& config) {
    require_dicke(model);
    VectorXcd x = Eigen::Map<const VectorXcd>(seed.data(), seed.size());
    detail::EvalFn<cplx> eval = [&](const VectorXcd& y, VectorXcd& f, VectorXd& s, MatrixXcd* J) {
        detail::deformed_eval(model, xi, config.s0, y, f, s, J);
    };
    detail::GuardFn<cplx> guard = [&](const VectorXcd& y) { return detail::pole_guard_ok(model, y, config.pole_guard); };
    auto out = detail::damped_newton<cplx>(eval, x, config.newton_tol, config.max_iter, guard, config.fd_jacobian);
    if (out.pole_hit) throw Error(ErrorCode::PoleCollision, "Newton step entered the pole guard");
    if (!out.converged) {
        std::ostringstream os;
        os << "xi-deformed Newton stopped at residual " << out.residual;
        throw Error(ErrorCode::NoConvergence, os.str());
    }
    detail::symmetrize_pairs(x);
    return std::vector<cplx>(x.data(), x.data() + x.size());
}

BetheSolution continuation_start(const ModelSpec& model, int N, const Partition& partition, const SolveConfig& config) {
    auto seed = contraction_seed(model, N, partition, config);
    try {
        return solve_rapidities(model, N, seed, config);
    } catch (const Error&) {
        // Newton from the contraction seed can wander; fall back to a coupling ramp
        // of the same weak-coupling configuration.
    }
    auto anchors = root_anchors(model);
    std::vector<int> counts(model.m() + 1, 0);
    for (auto [root, k] : partition) counts[anchors[root] + 1] += k;
    return solve_pattern(model, counts, config);
}

ContinuationPath continuation_xi(const ModelSpec& model, int N, const BetheSolution& start, const SolveConfig& config) {
    require_dicke(model);
    if (start.N != N || !start.rapidities || static_cast<int>(start.rapidities->size()) != N)
        throw Error(ErrorCode::SeedDimensionMismatch, "start solution must carry N rapidities");
    std::vector<cplx> x0 = *start.rapidities;
    if (N > 0) x0 = solve_deformed(model, x0, config.xi_start, config);

    detail::TrackSystem sys;
    sys.eval = [&](const VectorXcd& y, double t, VectorXcd& f, VectorXd& s, MatrixXcd* J) {
        detail::deformed_eval(model, t, config.s0, y, f, s, J);
    };
    sys.guard = [&](const VectorXcd& y) { return detail::pole_guard_ok(model, y, config.pole_guard); };
    detail::TrackOptions opt;
    opt.t0 = config.xi_start;
    opt.t1 = config.xi_end;
    opt.initial_step = config.step.initial_step;
    opt.min_step = config.step.min_step;
    opt.max_step = config.step.max_step;
    opt.shrink = config.step.shrink;
    opt.grow = config.step.grow;
    opt.tol = std::max(config.newton_tol, 1e-11);
    opt.max_iter = 40;
    opt.trust = config.trust_distance;
    opt.cond_limit = config.cond_limit;
    ContinuationPath path = detail::track(sys, Eigen::Map<const VectorXcd>(x0.data(), N), opt);
    if (N > 0) {
        // polish the endpoint to the full tolerance when possible
        try {
            auto xe = solve_deformed(model, path.rapidity_snapshots.back(), config.xi_end, config);
            path.rapidity_snapshots.back() = xe;
            path.residual.back() = deformed_residual(model, xe, config.xi_end, config.s0);
        } catch (const Error&) {
        }
    }
    return path;
}

}  // namespace rgbethe
