#pragma once

// Damped Newton shared by the Lambda and rapidity solvers.

#include <Eigen/Dense>
#include <cmath>
#include <functional>

namespace rgbethe::detail {

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

// f and per-equation scales; J only when requested.
template <class S>
using EvalFn = std::function<void(const Vec<S>& y, Vec<S>& f, Eigen::VectorXd& scale, Mat<S>* J)>;
// false when y is inside a pole guard.
template <class S>
using GuardFn = std::function<bool(const Vec<S>& y)>;

struct NewtonOutcome {
    bool converged = false;
    bool pole_hit = false;
    bool step_limited = false;  // stopped because the update reached rounding level
    int iterations = 0;
    double residual = 0.0;
    double rcond = 1.0;
};

template <class S>
double scaled_norm(const Vec<S>& f, const Eigen::VectorXd& scale) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) r = std::max(r, std::abs(f(i)) / scale(i));
    return r;
}

template <class S>
Mat<S> fd_jacobian(const EvalFn<S>& eval, const Vec<S>& y) {
    Vec<S> f0, f1;
    Eigen::VectorXd sc;
    eval(y, f0, sc, nullptr);
    Mat<S> J(f0.size(), y.size());
    for (Eigen::Index j = 0; j < y.size(); ++j) {
        double h = 1e-7 * std::max(1.0, std::abs(y(j)));
        Vec<S> yp = y;
        yp(j) += S(h);
        eval(yp, f1, sc, nullptr);
        J.col(j) = (f1 - f0) / S(h);
    }
    return J;
}

template <class S>
NewtonOutcome damped_newton(const EvalFn<S>& eval, Vec<S>& y, double tol, int max_iter,
                            const GuardFn<S>& guard = nullptr, bool use_fd = false) {
    NewtonOutcome out;
    if (y.size() == 0) {
        out.converged = true;
        return out;
    }
    Vec<S> f, ft;
    Eigen::VectorXd scale, st;
    Mat<S> J;
    eval(y, f, scale, &J);
    double res = scaled_norm(f, scale);
    int stagnant = 0;
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it;
        out.residual = res;
        if (res <= tol) {
            // one more full step costs little and takes the answer to rounding level
            if (res > 0.0) {
                Vec<S> yp = y + Eigen::PartialPivLU<Mat<S>>(J).solve(-f);
                if (yp.allFinite() && (!guard || guard(yp))) {
                    eval(yp, ft, st, nullptr);
                    double rp = scaled_norm(ft, st);
                    if (rp <= res) {
                        y = yp;
                        res = rp;
                    }
                }
            }
            out.residual = res;
            out.converged = true;
            return out;
        }
        if (use_fd) J = fd_jacobian(eval, y);
        Eigen::PartialPivLU<Mat<S>> lu(J);
        out.rcond = lu.rcond();
        Vec<S> d = lu.solve(-f);
        if (!d.allFinite()) return out;
        double lam = 1.0;
        bool accepted = false, any_guard_ok = false;
        Vec<S> yt;
        double rt = res;
        for (int h = 0; h <= 30; ++h, lam *= 0.5) {
            yt = y + S(lam) * d;
            if (guard && !guard(yt)) continue;
            any_guard_ok = true;
            eval(yt, ft, st, nullptr);
            rt = scaled_norm(ft, st);
            if (std::isfinite(rt) && (rt < res * (1.0 - 1e-4 * lam) || h == 30)) {
                accepted = true;
                break;
            }
        }
        if (!any_guard_ok) {
            out.pole_hit = true;
            return out;
        }
        if (!accepted) {
            // no decrease anywhere along the ray; take the smallest step that passed the guard
            if (!std::isfinite(rt)) return out;
        }
        double prev = res;
        double dnorm = (yt - y).norm(), ynorm = y.norm();
        y = yt;
        eval(y, f, scale, &J);
        res = scaled_norm(f, scale);
        if (!std::isfinite(res)) return out;
        // Near a level the residual floor is |df/dy| * ulp(y), well above tol; accept once the
        // update itself is at rounding level and the residual is only a little above tol.
        if (res > tol && dnorm <= 8e-16 * (1.0 + ynorm) && res <= 1e4 * tol) {
            out.iterations = it + 1;
            out.residual = res;
            out.converged = out.step_limited = true;
            return out;
        }
        stagnant = (res > 0.5 * prev) ? stagnant + 1 : 0;
        if (stagnant > 25 && res > 1e3 * tol) break;
    }
    out.residual = res;
    out.converged = res <= tol;
    return out;
}

}  // namespace rgbethe::detail
