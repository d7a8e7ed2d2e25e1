#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rgbethe/models.hpp"

namespace rgbethe {

struct StepControl {
    double initial_step = 1e-3;
    double min_step = 1e-9;
    double max_step = 0.02;
    double shrink = 0.5;
    double grow = 1.5;
};

struct SolveConfig {
    double newton_tol = 1e-12;
    int max_iter = 200;
    StepControl step;
    double pole_guard = 1e-10;
    double seed_radius = 1e-3;
    bool fd_jacobian = false;  // finite-difference Jacobians, for debugging only
    // xi continuation
    double s0 = 0.5;  // spin of the deformed boson
    double xi_start = 0.0;
    double xi_end = 1.0;
    double trust_distance = 0.5;
    double cond_limit = 1e12;
    int threads = 0;  // 0: RGBETHE_THREADS or hardware concurrency
};

// Residuals are reported scaled: max_i |F_i| / max(1, largest term of equation i).
struct BetheSolution {
    ModelSpec model;
    int N = 0;
    std::optional<std::vector<cplx>> rapidities;
    std::vector<double> lambdas;
    double lambda0 = 0.0;  // PipBoson only
    double residual_rapidity = 0.0;
    double residual_lambda = 0.0;
    std::vector<double> charges;
    bool converged = false;
    std::vector<int> pattern;  // weak-coupling occupation label when known
};

struct ContinuationPath {
    std::vector<double> xi_samples;
    std::vector<std::vector<cplx>> rapidity_snapshots;
    std::vector<bool> converged;
    std::vector<double> condition;
    std::vector<double> residual;
    std::vector<bool> flagged;  // bridged by extrapolation across a singular window
    std::size_t flagged_count() const;
};

int default_threads();

// --- rapidity route -------------------------------------------------------

BetheSolution solve_rapidities(const ModelSpec& model, int N, const std::vector<cplx>& seed,
                               const SolveConfig& config = {});

// Max scaled residual of the model's RG equations.
double rapidity_residual(const ModelSpec& model, const std::vector<cplx>& x);

std::vector<double> lambdas_from_rapidities(const ModelSpec& model, const std::vector<cplx>& x);
double lambda0_from_rapidities(const ModelSpec& model, const std::vector<cplx>& x);

// Rapidities for a weak-coupling occupation pattern, obtained by continuation
// in the coupling (Dicke: G, XXZ: g, PipBoson: kappa from a large value).
// counts[0] = bosonic rapidities (ignored for XXZ), counts[1+i] = rapidities on level i.
BetheSolution solve_pattern(const ModelSpec& model, const std::vector<int>& counts,
                            const SolveConfig& config = {});

// --- eigenvalue-based route ----------------------------------------------

BetheSolution solve_lambdas(const ModelSpec& model, int N, const std::vector<double>& seed,
                            const SolveConfig& config = {});

double lambda_residual(const ModelSpec& model, int N, const std::vector<double>& lambdas);

struct EnumerationFailure {
    std::vector<int> pattern;
    std::string message;
};

struct EnumerationReport {
    std::vector<BetheSolution> solutions;
    std::vector<EnumerationFailure> failures;
    std::size_t expected = 0;
    bool complete() const { return failures.empty() && solutions.size() == expected; }
};

// Least-squares residual of P'(eps_i) = D_i P(eps_i) for a monic degree-N P, with D_i = sum_a 1/(eps_i - x_a)
// recovered from Lambda (Dicke, PipBoson, 0 < N < M; PipBoson also tries lower degrees for rapidities at
// infinity).  Small only for Lambda that come from rapidities; the quadratic system has further roots that
// do not.  0 when the test does not apply.
double rapidity_consistency(const ModelSpec& model, int N, const std::vector<double>& lambdas);

EnumerationReport enumerate_states_report(const ModelSpec& model, int N, const SolveConfig& config = {});
std::vector<BetheSolution> enumerate_states(const ModelSpec& model, int N, const SolveConfig& config = {});

// --- XXZ duality ------------------------------------------------------------

std::vector<double> dual_lambdas(const ModelSpec& model, const std::vector<double>& lambdas);
std::vector<double> dual_lambdas(const std::vector<double>& lambdas, double g);
// hole-form quadratic residual with N' = M - N holes
double xxz_hole_residual(const ModelSpec& model, int N, const std::vector<double>& dual);

struct Residuals {
    double residual_rapidity = 0.0;
    double residual_lambda = 0.0;
};
Residuals residuals(const ModelSpec& model, const BetheSolution& solution);

// dLambda_i/dkappa for a PipBoson solution (differentiated quadratic system).
std::vector<double> lambda_kappa_derivative(const ModelSpec& model, const BetheSolution& solution);

// --- pseudo-deformation ---------------------------------------------------

// Sorted roots of (eps0 - x) - 2G^2 sum_k s_k/(eps_k - x) = 0.
std::vector<double> secular_roots(const ModelSpec& model);

// partition: (root index, multiplicity) pairs over the sorted secular roots.
using Partition = std::vector<std::pair<int, int>>;
Partition parse_partition(const std::string& spec);
std::string partition_to_string(const Partition& p);

std::vector<cplx> contraction_seed(const ModelSpec& model, int N, const Partition& partition,
                                   const SolveConfig& config = {});

// Residual of the xi-dependent RG equations at given xi (xi = 0: Dicke RG).
double deformed_residual(const ModelSpec& model, const std::vector<cplx>& E, double xi, double s0);
std::vector<cplx> solve_deformed(const ModelSpec& model, const std::vector<cplx>& seed, double xi,
                                 const SolveConfig& config = {});

// Starting solution at xi = xi_start for a partition (Newton from the
// contraction seed, falling back to a coupling ramp).
BetheSolution continuation_start(const ModelSpec& model, int N, const Partition& partition,
                                 const SolveConfig& config = {});

ContinuationPath continuation_xi(const ModelSpec& model, int N, const BetheSolution& start,
                                 const SolveConfig& config = {});

}  // namespace rgbethe
