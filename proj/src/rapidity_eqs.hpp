#pragma once

// RG equations in rapidity form, shared by the solver and the path tracker.

#include <Eigen/Dense>

#include "rgbethe/models.hpp"

namespace rgbethe::detail {

// f_a(x) with per-equation scales and optional analytic Jacobian.
void rapidity_eval(const ModelSpec& model, const Eigen::VectorXcd& x, Eigen::VectorXcd& f, Eigen::VectorXd& scale,
                   Eigen::MatrixXcd* J);

// xi-dependent equations in energy variables E_a (Dicke parameters).
void deformed_eval(const ModelSpec& model, double xi, double s0, const Eigen::VectorXcd& E, Eigen::VectorXcd& f,
                   Eigen::VectorXd& scale, Eigen::MatrixXcd* J);

// false when a rapidity sits within pole_guard of a level, another rapidity,
// or (PipBoson) the origin.
bool pole_guard_ok(const ModelSpec& model, const Eigen::VectorXcd& x, double guard);

// Pairs complex rapidities with their conjugates and symmetrizes; false if unpaired.
bool symmetrize_pairs(Eigen::VectorXcd& x, double tol = 1e-8);

}  // namespace rgbethe::detail
