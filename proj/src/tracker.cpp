#include "tracker.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "newton.hpp"
#include "rgbethe/errors.hpp"

namespace rgbethe::detail {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

VectorXcd poly_from_roots(const VectorXcd& r) {
    // c(0) x^n + c(1) x^{n-1} + ... with c(0) = 1
    VectorXcd c = VectorXcd::Zero(r.size() + 1);
    c(0) = 1.0;
    for (Eigen::Index k = 0; k < r.size(); ++k)
        for (Eigen::Index j = k + 1; j >= 1; --j) c(j) -= r(k) * c(j - 1);
    return c;
}

VectorXcd roots_from_poly(const VectorXcd& c) {
    const Eigen::Index n = c.size() - 1;
    if (n <= 0) return VectorXcd(0);
    if (n == 1) return VectorXcd::Constant(1, -c(1) / c(0));
    MatrixXcd C = MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) C(0, j) = -c(j + 1) / c(0);
    for (Eigen::Index i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<MatrixXcd> es(C, false);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::RootFindingFailure, "companion eigenvalues failed");
    return es.eigenvalues();
}

VectorXcd match_roots(const VectorXcd& prev, const VectorXcd& next) {
    const Eigen::Index n = prev.size();
    VectorXcd out(n);
    std::vector<char> used(n, 0);
    for (Eigen::Index a = 0; a < n; ++a) {
        Eigen::Index best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (Eigen::Index b = 0; b < n; ++b)
            if (!used[b] && std::abs(next(b) - prev(a)) < bd) {
                bd = std::abs(next(b) - prev(a));
                best = b;
            }
        used[best] = 1;
        out(a) = next(best);
    }
    return out;
}

namespace {

struct Sample {
    double t;
    VectorXcd x;
};

// Lagrange extrapolation of polynomial coefficients from the last (up to) three samples.
VectorXcd predict(const std::vector<Sample>& hist, double t) {
    const std::size_t k = std::min<std::size_t>(3, hist.size());
    const VectorXcd& last = hist.back().x;
    if (k == 1 || last.size() == 0) return last;
    VectorXcd c = VectorXcd::Zero(last.size() + 1);
    for (std::size_t a = hist.size() - k; a < hist.size(); ++a) {
        double w = 1.0;
        for (std::size_t b = hist.size() - k; b < hist.size(); ++b)
            if (b != a) w *= (t - hist[b].t) / (hist[a].t - hist[b].t);
        c += w * poly_from_roots(hist[a].x);
    }
    return match_roots(last, roots_from_poly(c));
}

struct Corrected {
    bool ok = false;
    VectorXcd x;
    double residual = 0.0;
    double cond = 0.0;
};

Corrected correct(const TrackSystem& sys, const VectorXcd& guess, double t, const TrackOptions& opt) {
    Corrected c;
    c.x = guess;
    EvalFn<std::complex<double>> eval = [&](const VectorXcd& y, VectorXcd& f, VectorXd& s, MatrixXcd* J) {
        sys.eval(y, t, f, s, J);
    };
    auto out = damped_newton<std::complex<double>>(eval, c.x, opt.tol, opt.max_iter, sys.guard);
    c.residual = out.residual;
    if (!out.converged || !c.x.allFinite()) return c;
    VectorXcd f;
    VectorXd s;
    MatrixXcd J;
    sys.eval(c.x, t, f, s, &J);
    Eigen::PartialPivLU<MatrixXcd> lu(J);
    double rc = lu.rcond();
    c.cond = rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    c.ok = true;
    return c;
}

void record(ContinuationPath& p, double t, const VectorXcd& x, bool conv, double cond, double res, bool flag) {
    p.xi_samples.push_back(t);
    p.rapidity_snapshots.emplace_back(x.data(), x.data() + x.size());
    p.converged.push_back(conv);
    p.condition.push_back(cond);
    p.residual.push_back(res);
    p.flagged.push_back(flag);
}

double displacement(const VectorXcd& a, const VectorXcd& b) {
    return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

ContinuationPath track(const TrackSystem& sys, const VectorXcd& x0, const TrackOptions& opt) {
    ContinuationPath path;
    const double dir = opt.t1 >= opt.t0 ? 1.0 : -1.0;
    std::vector<Sample> hist{{opt.t0, x0}};
    {
        VectorXcd f;
        VectorXd s;
        MatrixXcd J;
        double cond = 1.0, res = 0.0;
        if (x0.size()) {
            sys.eval(x0, opt.t0, f, s, &J);
            res = scaled_norm<std::complex<double>>(f, s);
            Eigen::PartialPivLU<MatrixXcd> lu(J);
            cond = 1.0 / lu.rcond();
        }
        record(path, opt.t0, x0, true, cond, res, false);
    }
    if (x0.size() == 0) {
        if (opt.t1 != opt.t0) record(path, opt.t1, x0, true, 1.0, 0.0, false);
        return path;
    }
    double h = opt.initial_step;
    double t = opt.t0;
    auto remaining = [&] { return dir * (opt.t1 - t); };
    while (remaining() > 0.0) {
        h = std::min(h, remaining());
        double tn = (h == remaining()) ? opt.t1 : t + dir * h;
        VectorXcd guess = predict(hist, tn);
        Corrected c = correct(sys, guess, tn, opt);
        if (c.ok) c.x = match_roots(hist.back().x, c.x);
        bool good = c.ok && c.cond <= opt.cond_limit && displacement(c.x, hist.back().x) <= opt.trust;
        if (good) {
            t = tn;
            hist.push_back({t, c.x});
            record(path, t, c.x, true, c.cond, c.residual, false);
            h = std::min(opt.max_step, h * opt.grow);
            continue;
        }
        h *= opt.shrink;
        if (h >= opt.min_step) continue;
        // Bridge a window across the singular region by extrapolation.
        bool bridged = false;
        if (opt.bridge) {
            for (double w = std::max(100.0 * opt.min_step, 1e-4); w <= 0.1 && !bridged; w *= 2.0) {
                double ww = std::min(w, remaining());
                double tb = (ww == remaining()) ? opt.t1 : t + dir * ww;
                VectorXcd g = predict(hist, tb);
                Corrected cb = correct(sys, g, tb, opt);
                if (!cb.ok || !(cb.cond <= opt.cond_limit)) continue;
                cb.x = match_roots(hist.back().x, cb.x);
                if (displacement(cb.x, hist.back().x) > 2.0 * opt.trust) continue;
                // flagged midpoint from the coefficient interpolant
                double tm = 0.5 * (t + tb);
                VectorXcd cm = 0.5 * (poly_from_roots(hist.back().x) + poly_from_roots(cb.x));
                VectorXcd xm = match_roots(hist.back().x, roots_from_poly(cm));
                record(path, tm, xm, false, std::numeric_limits<double>::quiet_NaN(),
                       std::numeric_limits<double>::quiet_NaN(), true);
                t = tb;
                hist.push_back({t, cb.x});
                record(path, t, cb.x, true, cb.cond, cb.residual, false);
                h = opt.initial_step;
                bridged = true;
            }
        }
        if (!bridged) {
            std::ostringstream os;
            os.precision(17);
            os << "continuation stalled; last good parameter " << t;
            throw Error(ErrorCode::PathStalled, os.str());
        }
    }
    return path;
}

}  // namespace rgbethe::detail
