#include "rapidity_eqs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rgbethe::detail {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

// Z(u,v) and its partial derivatives for the model's realization.
struct Zfun {
    Realization r;
    cd operator()(cd u, cd v) const {
        return r == Realization::Trigonometric ? (1.0 + u * v) / (u - v) : (u + v) / (u - v);
    }
    cd dv(cd u, cd v) const {  // dZ/dv
        cd d = (u - v) * (u - v);
        return r == Realization::Trigonometric ? (1.0 + u * u) / d : 2.0 * u / d;
    }
    cd du(cd u, cd v) const {  // dZ/du
        cd d = (u - v) * (u - v);
        return r == Realization::Trigonometric ? -(1.0 + v * v) / d : -2.0 * v / d;
    }
};

}  // namespace

void rapidity_eval(const ModelSpec& model, const VectorXcd& x, VectorXcd& f, VectorXd& scale, MatrixXcd* J) {
    const Eigen::Index n = x.size();
    const int m = model.m();
    f.resize(n);
    scale.resize(n);
    if (J) J->setZero(n, n);
    switch (model.variant) {
        case ModelVariant::Dicke: {
            const double G2 = model.coupling * model.coupling;
            for (Eigen::Index a = 0; a < n; ++a) {
                cd t0 = model.eps0 - x(a), lev = 0.0, inter = 0.0, dd = -1.0;
                double big = std::abs(t0);
                for (int k = 0; k < m; ++k) {
                    cd w = 1.0 / (model.levels[k] - x(a));
                    cd term = 2.0 * G2 * model.spins[k] * w;
                    lev += term;
                    big = std::max(big, std::abs(term));
                    dd -= term * w;
                }
                for (Eigen::Index b = 0; b < n; ++b) {
                    if (b == a) continue;
                    cd w = 1.0 / (x(b) - x(a));
                    cd term = 2.0 * G2 * w;
                    inter += term;
                    big = std::max(big, std::abs(term));
                    dd += term * w;
                    if (J) (*J)(a, b) = -term * w;
                }
                f(a) = t0 - lev + inter;
                scale(a) = std::max(1.0, big);
                if (J) (*J)(a, a) = dd;
            }
            return;
        }
        case ModelVariant::PipBoson: {
            const double eta2 = model.eta0_sq;
            for (Eigen::Index a = 0; a < n; ++a) {
                cd p = eta2 / x(a);
                cd lev = 0.0, inter = 0.0, dd = p / x(a);
                double big = std::max(std::abs(model.kappa), std::abs(p));
                for (int k = 0; k < m; ++k) {
                    double e = model.levels[k];
                    cd w = 1.0 / (e - x(a));
                    cd term = model.spins[k] * (e + x(a)) * w;
                    lev += term;
                    big = std::max(big, std::abs(term));
                    dd += model.spins[k] * 2.0 * e * w * w;
                }
                for (Eigen::Index b = 0; b < n; ++b) {
                    if (b == a) continue;
                    cd w = 1.0 / (x(b) - x(a));
                    cd term = (x(b) + x(a)) * w;
                    inter += term;
                    big = std::max(big, std::abs(term));
                    dd -= 2.0 * x(b) * w * w;
                    if (J) (*J)(a, b) = 2.0 * x(a) * w * w;
                }
                f(a) = model.kappa - p + lev - inter;
                scale(a) = std::max(1.0, big);
                if (J) (*J)(a, a) = dd;
            }
            return;
        }
        case ModelVariant::XXZSpin: {
            const double g = model.coupling;
            Zfun Z{model.realization};
            for (Eigen::Index a = 0; a < n; ++a) {
                cd lev = 0.0, inter = 0.0, dd = 0.0;
                double big = 1.0;
                for (int k = 0; k < m; ++k) {
                    cd e = model.levels[k];
                    cd term = g * model.spins[k] * Z(e, x(a));
                    lev += term;
                    big = std::max(big, std::abs(term));
                    dd += g * model.spins[k] * Z.dv(e, x(a));
                }
                for (Eigen::Index b = 0; b < n; ++b) {
                    if (b == a) continue;
                    cd term = g * Z(x(b), x(a));
                    inter += term;
                    big = std::max(big, std::abs(term));
                    dd -= g * Z.dv(x(b), x(a));
                    if (J) (*J)(a, b) = -g * Z.du(x(b), x(a));
                }
                f(a) = 1.0 + lev - inter;
                scale(a) = big;
                if (J) (*J)(a, a) = dd;
            }
            return;
        }
    }
}

void deformed_eval(const ModelSpec& model, double xi, double s0, const VectorXcd& E, VectorXcd& f, VectorXd& scale,
                   MatrixXcd* J) {
    const Eigen::Index n = E.size();
    const int m = model.m();
    const double G2 = model.coupling * model.coupling;
    const double c = xi / s0;
    f.resize(n);
    scale.resize(n);
    if (J) J->setZero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        cd Ea = E(a);
        cd lev = 0.0, inter = 0.0, dd = -1.0;
        double big = std::abs(model.eps0 - Ea);
        for (int i = 0; i < m; ++i) {
            double e = model.levels[i];
            cd den = e - Ea, num = 2.0 * G2 + c * e * Ea;
            cd term = model.spins[i] * num / den;
            lev += term;
            big = std::max(big, std::abs(term));
            dd -= model.spins[i] * (c * e * den + num) / (den * den);
        }
        for (Eigen::Index b = 0; b < n; ++b) {
            if (b == a) continue;
            cd den = E(b) - Ea, num = 2.0 * G2 + c * E(b) * Ea;
            cd term = num / den;
            inter += term;
            big = std::max(big, std::abs(term));
            dd += (c * E(b) * den + num) / (den * den);
            if (J) (*J)(a, b) = (c * Ea * den - num) / (den * den);
        }
        f(a) = (model.eps0 - Ea) - lev + inter;
        scale(a) = std::max(1.0, big);
        if (J) (*J)(a, a) = dd;
    }
}

bool pole_guard_ok(const ModelSpec& model, const VectorXcd& x, double guard) {
    for (Eigen::Index a = 0; a < x.size(); ++a) {
        if (!std::isfinite(x(a).real()) || !std::isfinite(x(a).imag())) return false;
        for (double e : model.levels)
            if (std::abs(x(a) - e) < guard * std::max(1.0, std::abs(e))) return false;
        if (model.variant == ModelVariant::PipBoson && std::abs(x(a)) < guard) return false;
        for (Eigen::Index b = 0; b < a; ++b)
            if (std::abs(x(a) - x(b)) < guard * std::max(1.0, std::abs(x(a)))) return false;
    }
    return true;
}

bool symmetrize_pairs(VectorXcd& x, double tol) {
    const Eigen::Index n = x.size();
    std::vector<char> done(n, 0);
    for (Eigen::Index a = 0; a < n; ++a) {
        if (done[a]) continue;
        double sc = 1.0 + std::abs(x(a));
        if (std::abs(x(a).imag()) <= 1e-12 * sc) {
            x(a) = x(a).real();
            done[a] = 1;
            continue;
        }
        Eigen::Index best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (Eigen::Index b = 0; b < n; ++b)
            if (b != a && !done[b] && std::abs(x(b) - std::conj(x(a))) < bd) {
                bd = std::abs(x(b) - std::conj(x(a)));
                best = b;
            }
        if (best < 0 || bd > tol * sc) return false;
        cd avg = 0.5 * (x(a) + std::conj(x(best)));
        x(a) = avg;
        x(best) = std::conj(avg);
        done[a] = done[best] = 1;
    }
    return true;
}

}  // namespace rgbethe::detail
