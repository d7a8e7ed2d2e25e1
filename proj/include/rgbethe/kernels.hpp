#pragma once

#include <array>
#include <complex>
#include <vector>

namespace rgbethe {

using cplx = std::complex<double>;

enum class Realization { Trigonometric, Hyperbolic };

// X(u,v), Z(u,v) and the constant X^2 - Z^2 = gamma.
//   trig: X = sqrt(1+u^2) sqrt(1+v^2)/(u-v), Z = (1+uv)/(u-v), gamma = +1
//   hyp:  X = 2 sqrt(u) sqrt(v)/(u-v),       Z = (u+v)/(u-v),  gamma = -1
struct GaudinKernel {
    Realization realization = Realization::Trigonometric;
    std::vector<double> parameters;
    double gamma = 1.0;

    cplx X(cplx u, cplx v) const;
    cplx Z(cplx u, cplx v) const;
    // real shortcuts for level-level entries
    double Xr(double u, double v) const;
    double Zr(double u, double v) const;
};

GaudinKernel kernel_build(Realization realization, std::vector<double> parameters);

// Residuals are scaled by max(1, magnitude of the largest term) so that they measure
// roundoff rather than the size of X near coincident arguments; raw values kept too.
struct KernelCheckReport {
    double max_constraint = 0.0;
    double max_gamma = 0.0;
    double max_constraint_abs = 0.0;
    double max_gamma_abs = 0.0;
    std::size_t samples = 0;
};

KernelCheckReport kernel_check(const GaudinKernel& kernel,
                               const std::vector<std::array<double, 3>>& triples);

// Free-standing evaluators, used where no parameter list is attached.
cplx kernel_X(Realization r, cplx u, cplx v);
cplx kernel_Z(Realization r, cplx u, cplx v);
inline double kernel_gamma(Realization r) { return r == Realization::Trigonometric ? 1.0 : -1.0; }

}  // namespace rgbethe
