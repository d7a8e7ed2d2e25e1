#include "rgbethe/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rgbethe/errors.hpp"

namespace rgbethe {

namespace {

constexpr double kCoincide = 1e-12;

void check_distinct(cplx u, cplx v) {
    double scale = std::max({1.0, std::abs(u), std::abs(v)});
    if (std::abs(u - v) <= kCoincide * scale) {
        std::ostringstream os;
        os << "arguments coincide: " << u << " and " << v;
        throw Error(ErrorCode::CoincidentArguments, os.str());
    }
}

}  // namespace

cplx kernel_X(Realization r, cplx u, cplx v) {
    check_distinct(u, v);
    if (r == Realization::Trigonometric)
        return std::sqrt(1.0 + u * u) * std::sqrt(1.0 + v * v) / (u - v);
    return 2.0 * std::sqrt(u) * std::sqrt(v) / (u - v);
}

cplx kernel_Z(Realization r, cplx u, cplx v) {
    check_distinct(u, v);
    if (r == Realization::Trigonometric) return (1.0 + u * v) / (u - v);
    return (u + v) / (u - v);
}

cplx GaudinKernel::X(cplx u, cplx v) const { return kernel_X(realization, u, v); }
cplx GaudinKernel::Z(cplx u, cplx v) const { return kernel_Z(realization, u, v); }

double GaudinKernel::Xr(double u, double v) const {
    check_distinct(u, v);
    if (realization == Realization::Trigonometric)
        return std::sqrt((1.0 + u * u) * (1.0 + v * v)) / (u - v);
    return 2.0 * std::sqrt(u * v) / (u - v);
}

double GaudinKernel::Zr(double u, double v) const {
    check_distinct(u, v);
    if (realization == Realization::Trigonometric) return (1.0 + u * v) / (u - v);
    return (u + v) / (u - v);
}

GaudinKernel kernel_build(Realization realization, std::vector<double> parameters) {
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        if (realization == Realization::Hyperbolic && !(parameters[i] > 0.0))
            throw Error(ErrorCode::NonpositiveParameter,
                        "hyperbolic parameter " + std::to_string(parameters[i]) + " is not positive");
        for (std::size_t j = 0; j < i; ++j) {
            double scale = std::max({1.0, std::abs(parameters[i]), std::abs(parameters[j])});
            if (std::abs(parameters[i] - parameters[j]) <= kCoincide * scale)
                throw Error(ErrorCode::DuplicateParameter,
                            "parameters " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
        }
    }
    GaudinKernel k;
    k.realization = realization;
    k.parameters = std::move(parameters);
    k.gamma = kernel_gamma(realization);
    return k;
}

KernelCheckReport kernel_check(const GaudinKernel& kernel,
                               const std::vector<std::array<double, 3>>& triples) {
    KernelCheckReport rep;
    for (const auto& t : triples) {
        double xij = kernel.Xr(t[0], t[1]), xjk = kernel.Xr(t[1], t[2]), xik = kernel.Xr(t[0], t[2]);
        double zij = kernel.Zr(t[0], t[1]), zjk = kernel.Zr(t[1], t[2]);
        double c = std::abs(xij * xjk - xik * (zij + zjk));
        double g = std::abs(xij * xij - zij * zij - kernel.gamma);
        double cs = std::max({1.0, std::abs(xij * xjk), std::abs(xik * (zij + zjk))});
        double gs = std::max({1.0, xij * xij, zij * zij});
        rep.max_constraint_abs = std::max(rep.max_constraint_abs, c);
        rep.max_gamma_abs = std::max(rep.max_gamma_abs, g);
        rep.max_constraint = std::max(rep.max_constraint, c / cs);
        rep.max_gamma = std::max(rep.max_gamma, g / gs);
        ++rep.samples;
    }
    return rep;
}

}  // namespace rgbethe
