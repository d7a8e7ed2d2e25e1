#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <optional>
#include <thread>

#include "newton.hpp"
#include "parallel.hpp"
#include "rgbethe/errors.hpp"
#include "rgbethe/solver.hpp"

namespace rgbethe {

using detail::damped_newton;
using Eigen::MatrixXd;
using Eigen::VectorXd;

int default_threads() {
    if (const char* env = std::getenv("RGBETHE_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

void require_half(const ModelSpec& model) {
    if (!model.all_spins_half())
        throw Error(ErrorCode::SpinNotHalf, "the quadratic Lambda system is closed only for spins 1/2");
}

// F_i(Lambda) for spin-1/2 models, with per-equation scales and optional Jacobian.
void lambda_eval(const ModelSpec& model, int N, const VectorXd& L, VectorXd& f, VectorXd& scale, MatrixXd* J) {
    const int m = model.m();
    f.resize(m);
    scale.resize(m);
    if (J) J->setZero(m, m);
    switch (model.variant) {
        case ModelVariant::Dicke: {
            const double G2 = model.coupling * model.coupling;
            for (int i = 0; i < m; ++i) {
                double ei = model.levels[i];
                double t1 = G2 * L(i) * L(i), t3 = L(i) * (ei - model.eps0), t4 = 0.0, big = 0.0, dsum = 0.0;
                for (int j = 0; j < m; ++j) {
                    if (j == i) continue;
                    double w = 1.0 / (ei - model.levels[j]);
                    t4 += G2 * (L(i) - L(j)) * w;
                    big = std::max(big, std::abs(G2 * L(j) * w));
                    dsum += w;
                    if (J) (*J)(i, j) = G2 * w;
                }
                f(i) = t1 - N + t3 - t4;
                scale(i) = std::max({1.0, std::abs(t1), double(N), std::abs(t3), std::abs(t4), big});
                if (J) (*J)(i, i) = 2.0 * G2 * L(i) + (ei - model.eps0) - G2 * dsum;
            }
            return;
        }
        case ModelVariant::PipBoson: {
            const double kap = model.kappa, eta2 = model.eta0_sq;
            double sumL = L.sum(), sumAbs = L.cwiseAbs().sum();
            for (int i = 0; i < m; ++i) {
                double ei = model.levels[i];
                double zs = 0.0, zt = 0.0, big = 0.0;
                for (int j = 0; j < m; ++j) {
                    if (j == i) continue;
                    double z = model.Zlev(i, j);
                    zs += z;
                    zt += z * (L(i) - L(j));
                    big = std::max(big, std::abs(z * L(j)));
                    if (J) (*J)(i, j) = -1.0 + z;
                }
                double a = L(i) * L(i), b = double(N) * (m - N), c = 2.0 * kap * L(i),
                       d = sumL + 2.0 * kap * N, e = 2.0 * eta2 / ei * (L(i) + N);
                f(i) = a + b + c - d - e - zt;
                scale(i) = std::max({1.0, a, std::abs(b), std::abs(c), sumAbs + std::abs(2.0 * kap * N), std::abs(e),
                                     std::abs(zt), big});
                if (J) (*J)(i, i) = 2.0 * L(i) + 2.0 * kap - 1.0 - 2.0 * eta2 / ei - zs;
            }
            return;
        }
        case ModelVariant::XXZSpin: {
            const double g = model.coupling;
            const double gam = kernel_gamma(model.realization);
            for (int i = 0; i < m; ++i) {
                double zs = 0.0, zt = 0.0, big = 0.0;
                for (int j = 0; j < m; ++j) {
                    if (j == i) continue;
                    double z = model.Zlev(i, j);
                    zs += z;
                    zt += z * (L(i) - L(j));
                    big = std::max(big, std::abs(z * L(j)));
                    if (J) (*J)(i, j) = z;
                }
                double a = L(i) * L(i), b = gam * N * (m - N), c = 2.0 / g * L(i);
                f(i) = a - b + c - zt;
                scale(i) = std::max({1.0, a, std::abs(b), std::abs(c), std::abs(zt), big});
                if (J) (*J)(i, i) = 2.0 * L(i) + 2.0 / g - zs;
            }
            return;
        }
    }
}

BetheSolution make_lambda_solution(const ModelSpec& model, int N, const VectorXd& L, double res, bool ok) {
    BetheSolution s;
    s.model = model;
    s.N = N;
    s.lambdas.assign(L.data(), L.data() + L.size());
    if (model.variant == ModelVariant::PipBoson) s.lambda0 = pip_lambda0(model, s.lambdas, N);
    s.residual_rapidity = std::numeric_limits<double>::quiet_NaN();
    s.residual_lambda = res;
    s.charges = charge_eigenvalues(model, s.lambdas, N);
    s.converged = ok;
    return s;
}

// --- weak-coupling homotopies ---------------------------------------------

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// H(y; p) for a complex parameter p, with dH/dy and dH/dp.
using ParamFn = std::function<void(const VectorXcd& y, cplx p, VectorXcd& H, VectorXd& scale, MatrixXcd* J,
                                   VectorXcd* Hp)>;

// p(t) = a + (b-a) t + i eta |b-a| t (1-t).  Physical branches cross unphysical roots of the quadratic
// system on the real axis, where the tangent is undefined; a thin arc passes beside those crossings.
// Landing on the wrong root is still possible, so results are screened by rapidity_consistency.
struct Arc {
    double a, b, eta;
    cplx p(double t) const { return cplx(a + (b - a) * t, eta * std::abs(b - a) * t * (1.0 - t)); }
    cplx dp(double t) const { return cplx(b - a, eta * std::abs(b - a) * (1.0 - 2.0 * t)); }
};

// Tangent predictor / Newton corrector from t = 0 to 1.  Unphysical roots pass close to physical ones,
// so steps are small and the corrector must stay close to the prediction.
bool track_homotopy(const ParamFn& hom, const Arc& arc, VectorXcd& y, std::string& why, double hmax) {
    double t = 0.0, h = std::min(0.005, hmax);
    const double hmin = 1e-10;
    VectorXcd H, Hp;
    VectorXd sc;
    MatrixXcd J;
    while (t < 1.0) {
        h = std::min(h, 1.0 - t);
        hom(y, arc.p(t), H, sc, &J, &Hp);
        Eigen::PartialPivLU<MatrixXcd> lu(J);
        VectorXcd dy = lu.solve(-Hp * arc.dp(t));
        if (!dy.allFinite()) {
            why = "singular homotopy Jacobian at t=" + std::to_string(t);
            return false;
        }
        double tn = t + h;
        cplx pn = arc.p(tn);
        VectorXcd yc = y + h * dy;
        VectorXcd yp = yc;
        detail::EvalFn<cplx> eval = [&](const VectorXcd& v, VectorXcd& f, VectorXd& s, MatrixXcd* Jm) {
            hom(v, pn, f, s, Jm, nullptr);
        };
        auto out = damped_newton<cplx>(eval, yc, 1e-11, 8);
        double corr = (yc - yp).cwiseAbs().maxCoeff();
        double lim = 0.05 * h * dy.cwiseAbs().maxCoeff() + 1e-9 * (1.0 + y.cwiseAbs().maxCoeff());
        if (out.converged && corr <= lim) {
            y = yc;
            t = tn;
            h = std::min(hmax, h * 1.5);
        } else {
            h *= 0.5;
            if (h < hmin) {
                why = "homotopy step underflow at t=" + std::to_string(t);
                return false;
            }
        }
    }
    return true;
}

std::optional<VectorXd> real_endpoint(const VectorXcd& y, std::string& why) {
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (std::abs(y(i).imag()) > 1e-7 * (1.0 + std::abs(y(i)))) {
            why = "homotopy endpoint is not real";
            return std::nullopt;
        }
    return VectorXd(y.real());
}

template <class T>
double mag(T v) {
    return std::abs(v);
}

// Returns Lambda at the target coupling, or nullopt with a reason.
std::optional<VectorXd> pattern_lambdas(const ModelSpec& model, int N, const std::vector<int>& occ, double eta, double hmax,
                                        std::string& why) {
    const int m = model.m();
    VectorXcd mu(m);
    switch (model.variant) {
        case ModelVariant::Dicke: {
            // mu = G^2 Lambda, p = tau ramps 0 -> G^2; at tau = 0 the roots are mu_i = eps0 - eps_i (occupied) or 0.
            // The tangent at t = 0 reproduces the first-order seeds
            //   Lambda_i = (eps0-eps_i)/G^2 (i in S),  sum_{j in S} 1/(eps_i-eps_j) + (N-|S|)/(eps_i-eps0).
            for (int i = 0; i < m; ++i) mu(i) = occ[i] ? model.eps0 - model.levels[i] : 0.0;
            const double G2 = model.coupling * model.coupling;
            ParamFn hom = [&](const VectorXcd& y, cplx tau, VectorXcd& H, VectorXd& sc, MatrixXcd* J, VectorXcd* Hp) {
                H.resize(m);
                sc.resize(m);
                if (J) J->setZero(m, m);
                if (Hp) Hp->resize(m);
                for (int i = 0; i < m; ++i) {
                    double ei = model.levels[i], s2 = 0.0;
                    cplx s1 = 0.0;
                    for (int j = 0; j < m; ++j) {
                        if (j == i) continue;
                        double w = 1.0 / (ei - model.levels[j]);
                        s1 += (y(i) - y(j)) * w;
                        s2 += w;
                        if (J) (*J)(i, j) = tau * w;
                    }
                    H(i) = y(i) * y(i) - tau * double(N) + y(i) * (ei - model.eps0) - tau * s1;
                    sc(i) = std::max({1e-300, mag(y(i) * y(i)), mag(y(i) * (ei - model.eps0)), mag(tau) * N,
                                      mag(tau * s1), std::abs(ei - model.eps0) * 1e-3});
                    if (J) (*J)(i, i) = 2.0 * y(i) + (ei - model.eps0) - tau * s2;
                    if (Hp) (*Hp)(i) = -double(N) - s1;
                }
            };
            if (!track_homotopy(hom, Arc{0.0, G2, eta}, mu, why, hmax)) return std::nullopt;
            auto r = real_endpoint(mu, why);
            if (!r) return std::nullopt;
            return VectorXd(*r / G2);
        }
        case ModelVariant::XXZSpin: {
            // mu = g Lambda, p = tau ramps 0 -> g; roots at tau = 0: -2 (occupied) or 0.
            for (int i = 0; i < m; ++i) mu(i) = occ[i] ? -2.0 : 0.0;
            const double g = model.coupling;
            const double cN = kernel_gamma(model.realization) * N * (m - N);
            ParamFn hom = [&](const VectorXcd& y, cplx tau, VectorXcd& H, VectorXd& sc, MatrixXcd* J, VectorXcd* Hp) {
                H.resize(m);
                sc.resize(m);
                if (J) J->setZero(m, m);
                if (Hp) Hp->resize(m);
                for (int i = 0; i < m; ++i) {
                    double zs = 0.0;
                    cplx zt = 0.0;
                    for (int j = 0; j < m; ++j) {
                        if (j == i) continue;
                        double z = model.Zlev(i, j);
                        zs += z;
                        zt += z * (y(i) - y(j));
                        if (J) (*J)(i, j) = tau * z;
                    }
                    cplx c = tau * tau * cN;
                    H(i) = y(i) * y(i) - c + 2.0 * y(i) - tau * zt;
                    sc(i) = std::max({1e-3, mag(y(i) * y(i)), mag(c), mag(2.0 * y(i)), mag(tau * zt)});
                    if (J) (*J)(i, i) = 2.0 * y(i) + 2.0 - tau * zs;
                    if (Hp) (*Hp)(i) = -2.0 * tau * cN - zt;
                }
            };
            if (!track_homotopy(hom, Arc{0.0, g, eta}, mu, why, hmax)) return std::nullopt;
            auto r = real_endpoint(mu, why);
            if (!r) return std::nullopt;
            return VectorXd(*r / g);
        }
        case ModelVariant::PipBoson: {
            // Weak coupling is large kappa.  Phase 1: p = 1/kappa from 0, mu = Lambda/kappa, roots -2 / 0.
            // Phase 2: kappa from K down to the target.
            for (int i = 0; i < m; ++i) mu(i) = occ[i] ? -2.0 : 0.0;
            const double eta2 = model.eta0_sq;
            double zmax = 0.0, emin = model.levels[0];
            for (int i = 0; i < m; ++i) {
                emin = std::min(emin, model.levels[i]);
                double zs = 0.0;
                for (int j = 0; j < m; ++j)
                    if (j != i) zs += std::abs(model.Zlev(i, j));
                zmax = std::max(zmax, zs);
            }
            double Kbig = 20.0 * (1.0 + m + N + eta2 / emin + zmax);
            double K = std::max(Kbig, model.kappa);
            const double nn = double(N) * (m - N);
            ParamFn hom = [&](const VectorXcd& y, cplx tau, VectorXcd& H, VectorXd& sc, MatrixXcd* J, VectorXcd* Hp) {
                cplx sumy = y.sum();
                H.resize(m);
                sc.resize(m);
                if (J) J->setZero(m, m);
                if (Hp) Hp->resize(m);
                for (int i = 0; i < m; ++i) {
                    double ei = model.levels[i], zs = 0.0;
                    cplx zt = 0.0;
                    for (int j = 0; j < m; ++j) {
                        if (j == i) continue;
                        double z = model.Zlev(i, j);
                        zs += z;
                        zt += z * (y(i) - y(j));
                        if (J) (*J)(i, j) = -tau + tau * z;
                    }
                    double w = 2.0 * eta2 / ei;
                    H(i) = y(i) * y(i) + nn * tau * tau + 2.0 * y(i) - tau * sumy - 2.0 * double(N) * tau -
                           w * (tau * y(i) + tau * tau * double(N)) - tau * zt;
                    sc(i) = std::max({1e-3, mag(y(i) * y(i)), mag(2.0 * y(i)), mag(tau * sumy), 2.0 * N * mag(tau),
                                      mag(w * tau * y(i)), mag(tau * zt)});
                    if (J) (*J)(i, i) = 2.0 * y(i) + 2.0 - tau - w * tau - tau * zs;
                    if (Hp) (*Hp)(i) = 2.0 * nn * tau - sumy - 2.0 * double(N) - w * (y(i) + 2.0 * tau * double(N)) - zt;
                }
            };
            if (!track_homotopy(hom, Arc{0.0, 1.0 / K, eta}, mu, why, hmax)) return std::nullopt;
            VectorXcd L = mu * K;
            if (K != model.kappa) {
                ParamFn hom2 = [&](const VectorXcd& y, cplx kap, VectorXcd& H, VectorXd& sc, MatrixXcd* J,
                                   VectorXcd* Hp) {
                    cplx sumy = y.sum();
                    H.resize(m);
                    sc.resize(m);
                    if (J) J->setZero(m, m);
                    if (Hp) Hp->resize(m);
                    for (int i = 0; i < m; ++i) {
                        double ei = model.levels[i], zs = 0.0;
                        cplx zt = 0.0;
                        for (int j = 0; j < m; ++j) {
                            if (j == i) continue;
                            double z = model.Zlev(i, j);
                            zs += z;
                            zt += z * (y(i) - y(j));
                            if (J) (*J)(i, j) = -1.0 + z;
                        }
                        double w = 2.0 * eta2 / ei;
                        H(i) = y(i) * y(i) + nn + 2.0 * kap * y(i) - sumy - 2.0 * kap * double(N) - w * (y(i) + double(N)) -
                               zt;
                        sc(i) = std::max({1.0, mag(y(i) * y(i)), nn, mag(2.0 * kap * y(i)), mag(sumy),
                                          mag(2.0 * kap) * N, mag(w * (y(i) + double(N))), mag(zt)});
                        if (J) (*J)(i, i) = 2.0 * y(i) + 2.0 * kap - 1.0 - w - zs;
                        if (Hp) (*Hp)(i) = 2.0 * y(i) - 2.0 * double(N);
                    }
                };
                if (!track_homotopy(hom2, Arc{K, model.kappa, eta}, L, why, hmax)) return std::nullopt;
            }
            return real_endpoint(L, why);
        }
    }
    return std::nullopt;
}

std::vector<std::vector<int>> occupation_patterns(const ModelSpec& model, int N) {
    const int m = model.m();
    std::vector<std::vector<int>> out;
    for (int k = 0; k <= std::min(N, m); ++k) {
        if (!model.has_boson() && k != N) continue;
        // all k-subsets in lexicographic order, written as descending occupation vectors
        std::vector<int> occ(m, 0);
        std::fill(occ.begin(), occ.begin() + k, 1);
        do {
            out.push_back(occ);
        } while (std::prev_permutation(occ.begin(), occ.end()));
    }
    return out;
}

bool same_state(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-6 * (1.0 + std::max(std::abs(a[i]), std::abs(b[i])))) return false;
    return true;
}

std::string pattern_string(const std::vector<int>& p) {
    std::string s;
    for (int v : p) s += char('0' + v);
    return s;
}

}  // namespace

double lambda_residual(const ModelSpec& model, int N, const std::vector<double>& lambdas) {
    if (!model.all_spins_half()) return std::numeric_limits<double>::quiet_NaN();
    if (static_cast<int>(lambdas.size()) != model.m())
        throw Error(ErrorCode::DimensionMismatch, "one Lambda per level required");
    VectorXd L = Eigen::Map<const VectorXd>(lambdas.data(), lambdas.size());
    VectorXd f, sc;
    lambda_eval(model, N, L, f, sc, nullptr);
    return L.size() ? detail::scaled_norm<double>(f, sc) : 0.0;
}

BetheSolution solve_lambdas(const ModelSpec& model, int N, const std::vector<double>& seed, const SolveConfig& config) {
    require_half(model);
    if (N < 0) throw Error(ErrorCode::InvalidInput, "N must be nonnegative");
    if (static_cast<int>(seed.size()) != model.m())
        throw Error(ErrorCode::SeedDimensionMismatch, "seed needs one Lambda per level");
    if (N == 0) return make_lambda_solution(model, 0, VectorXd::Zero(model.m()), 0.0, true);
    VectorXd L = Eigen::Map<const VectorXd>(seed.data(), seed.size());
    detail::EvalFn<double> eval = [&](const VectorXd& y, VectorXd& f, VectorXd& s, MatrixXd* J) {
        lambda_eval(model, N, y, f, s, J);
    };
    auto out = damped_newton<double>(eval, L, config.newton_tol, config.max_iter, nullptr, config.fd_jacobian);
    if (!out.converged) {
        std::ostringstream os;
        os << "Lambda Newton stopped at residual " << out.residual << " after " << out.iterations << " iterations";
        throw Error(ErrorCode::NoConvergence, os.str());
    }
    return make_lambda_solution(model, N, L, out.residual, true);
}

double rapidity_consistency(const ModelSpec& model, int N, const std::vector<double>& lambdas) {
    const int m = model.m();
    if (model.variant == ModelVariant::XXZSpin || N == 0 || N >= m) return 0.0;
    if (static_cast<int>(lambdas.size()) != m) throw Error(ErrorCode::DimensionMismatch, "one Lambda per level required");
    // D_i = sum_a 1/(eps_i - x_a) from Lambda; P(x) = prod (x - x_a) then obeys P'(eps_i) = D_i P(eps_i).
    // For PipBoson a rapidity may sit at infinity (exactly solvable when kappa = M/2 - N + 1): it drops
    // out of D_i, so every degree d <= N is tried.
    double lo = *std::min_element(model.levels.begin(), model.levels.end());
    double hi = *std::max_element(model.levels.begin(), model.levels.end());
    double c = 0.5 * (lo + hi), w = std::max(0.5 * (hi - lo), 1e-12);
    double best = std::numeric_limits<double>::infinity();
    const int dmin = model.variant == ModelVariant::PipBoson ? 0 : N;
    for (int d = N; d >= dmin; --d) {
        MatrixXd A(m, d);
        VectorXd b(m);
        for (int i = 0; i < m; ++i) {
            double e = model.levels[i];
            double D = model.variant == ModelVariant::Dicke ? lambdas[i] : (lambdas[i] + N) / (2.0 * e);
            double u = (e - c) / w, Du = D * w;
            double rs = 0.0;
            for (int j = 0; j <= d; ++j) {
                double v = (j ? j * std::pow(u, j - 1) : 0.0) - Du * std::pow(u, j);
                rs = std::max(rs, std::abs(v));
                if (j < d)
                    A(i, j) = v;
                else
                    b(i) = -v;
            }
            A.row(i) /= rs;
            b(i) /= rs;
        }
        VectorXd r = b;
        if (d > 0) r -= A * A.colPivHouseholderQr().solve(b);
        best = std::min(best, r.cwiseAbs().maxCoeff());
    }
    return best;
}

namespace {

constexpr double kPhysicalTol = 1e-7;

struct PathSetting {
    double eta, hmax;
};
// tried in order for each pattern until the endpoint is a physical root
constexpr PathSetting kPathSettings[] = {{0.05, 0.002}, {0.2, 0.002}, {-0.1, 0.0005}, {0.0, 0.0004}};

std::optional<BetheSolution> track_pattern(const ModelSpec& model, int N, const std::vector<int>& occ,
                                           const SolveConfig& config, std::size_t first, std::string& why) {
    for (std::size_t k = first; k < std::size(kPathSettings); ++k) {
        try {
            auto L = pattern_lambdas(model, N, occ, kPathSettings[k].eta, kPathSettings[k].hmax, why);
            if (!L) continue;
            auto s = solve_lambdas(model, N, std::vector<double>(L->data(), L->data() + L->size()), config);
            if (rapidity_consistency(model, N, s.lambdas) > kPhysicalTol) {
                why = "path ended on an unphysical root";
                continue;
            }
            s.pattern = occ;
            return s;
        } catch (const Error& e) {
            why = e.what();
        }
    }
    return std::nullopt;
}

}  // namespace

EnumerationReport enumerate_states_report(const ModelSpec& model, int N, const SolveConfig& config) {
    require_half(model);
    EnumerationReport rep;
    rep.expected = sector_dimension(model, N);
    auto patterns = occupation_patterns(model, N);
    std::vector<std::optional<BetheSolution>> found(patterns.size());
    std::vector<std::string> errors(patterns.size());
    int threads = config.threads > 0 ? config.threads : default_threads();
    detail::parallel_for(patterns.size(), threads, [&](std::size_t p) {
        if (N == 0) {
            try {
                found[p] = solve_lambdas(model, 0, std::vector<double>(model.m(), 0.0), config);
                found[p]->pattern = patterns[p];
            } catch (const Error& e) {
                errors[p] = e.what();
            }
            return;
        }
        found[p] = track_pattern(model, N, patterns[p], config, 0, errors[p]);
    });
    // a pattern that duplicates an earlier one jumped branches: re-track it with the later settings
    for (std::size_t p = 0; p < patterns.size(); ++p) {
        if (!found[p]) {
            rep.failures.push_back({patterns[p], errors[p]});
            continue;
        }
        auto dup_of = [&](const BetheSolution& c) -> const BetheSolution* {
            for (const auto& s : rep.solutions)
                if (same_state(s.lambdas, c.lambdas)) return &s;
            return nullptr;
        };
        const BetheSolution* d = dup_of(*found[p]);
        for (std::size_t k = 1; d && N > 0 && k < std::size(kPathSettings); ++k) {
            std::string why;
            auto again = track_pattern(model, N, patterns[p], config, k, why);
            if (again && !dup_of(*again)) {
                found[p] = std::move(again);
                d = nullptr;
            }
        }
        if (d) {
            rep.failures.push_back({patterns[p], "duplicate of pattern " + pattern_string(d->pattern)});
            continue;
        }
        rep.solutions.push_back(std::move(*found[p]));
    }
    return rep;
}

std::vector<BetheSolution> enumerate_states(const ModelSpec& model, int N, const SolveConfig& config) {
    auto rep = enumerate_states_report(model, N, config);
    if (!rep.complete()) {
        std::ostringstream os;
        os << "found " << rep.solutions.size() << " of " << rep.expected << " states";
        for (const auto& f : rep.failures) os << "; pattern " << pattern_string(f.pattern) << ": " << f.message;
        throw Error(ErrorCode::IncompleteEnumeration, os.str());
    }
    return std::move(rep.solutions);
}

std::vector<double> dual_lambdas(const std::vector<double>& lambdas, double g) {
    if (g == 0.0) throw Error(ErrorCode::ZeroCoupling, "dual relation needs g != 0");
    std::vector<double> out(lambdas);
    for (double& l : out) l += 2.0 / g;
    return out;
}

std::vector<double> dual_lambdas(const ModelSpec& model, const std::vector<double>& lambdas) {
    if (model.variant != ModelVariant::XXZSpin)
        throw Error(ErrorCode::WrongVariant, "the dual (hole) representation exists only for XXZ spin models");
    return dual_lambdas(lambdas, model.coupling);
}

double xxz_hole_residual(const ModelSpec& model, int N, const std::vector<double>& dual) {
    if (model.variant != ModelVariant::XXZSpin) throw Error(ErrorCode::WrongVariant, "XXZ model required");
    require_half(model);
    // hole form: the particle system with g -> -g and N -> m - N
    ModelSpec hole = model;
    hole.coupling = -model.coupling;
    return lambda_residual(hole, model.m() - N, dual);
}

Residuals residuals(const ModelSpec& model, const BetheSolution& solution) {
    Residuals r;
    r.residual_lambda = lambda_residual(model, solution.N, solution.lambdas);
    r.residual_rapidity =
        solution.rapidities ? rapidity_residual(model, *solution.rapidities) : std::numeric_limits<double>::quiet_NaN();
    return r;
}

std::vector<double> lambda_kappa_derivative(const ModelSpec& model, const BetheSolution& solution) {
    if (model.variant != ModelVariant::PipBoson) throw Error(ErrorCode::WrongVariant, "PipBoson model required");
    require_half(model);
    const int m = model.m(), N = solution.N;
    VectorXd L = Eigen::Map<const VectorXd>(solution.lambdas.data(), m);
    VectorXd f, sc;
    MatrixXd J;
    lambda_eval(model, N, L, f, sc, &J);
    VectorXd rhs(m);
    for (int i = 0; i < m; ++i) rhs(i) = -(2.0 * L(i) - 2.0 * N);
    Eigen::PartialPivLU<MatrixXd> lu(J);
    if (m > 0 && !(lu.rcond() > 1e-14))
        throw Error(ErrorCode::LinearSystemSingular, "dLambda/dkappa system is singular");
    VectorXd d = lu.solve(rhs);
    return std::vector<double>(d.data(), d.data() + m);
}

}  // namespace rgbethe
