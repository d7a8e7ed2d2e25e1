#pragma once

// Predictor-corrector tracking of complex rapidity sets along a real parameter.
// The predictor extrapolates the coefficients of prod_a (x - x_a), which stay
// smooth where individual rapidities collide (singular points).

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "rgbethe/solver.hpp"

namespace rgbethe::detail {

struct TrackSystem {
    std::function<void(const Eigen::VectorXcd& x, double t, Eigen::VectorXcd& f, Eigen::VectorXd& scale,
                       Eigen::MatrixXcd* J)>
        eval;
    std::function<bool(const Eigen::VectorXcd& x)> guard;
};

struct TrackOptions {
    double t0 = 0.0;
    double t1 = 1.0;
    double initial_step = 1e-3;
    double min_step = 1e-9;
    double max_step = 0.02;
    double shrink = 0.5;
    double grow = 1.5;
    double tol = 1e-12;
    int max_iter = 40;
    double trust = 0.5;
    double cond_limit = 1e12;
    bool bridge = true;
};

// x0 must already solve the system at t0.  Throws PathStalled.
ContinuationPath track(const TrackSystem& sys, const Eigen::VectorXcd& x0, const TrackOptions& opt);

Eigen::VectorXcd poly_from_roots(const Eigen::VectorXcd& r);
Eigen::VectorXcd roots_from_poly(const Eigen::VectorXcd& c);
// reorder `next` so that entry a is the closest available to prev(a)
Eigen::VectorXcd match_roots(const Eigen::VectorXcd& prev, const Eigen::VectorXcd& next);

}  // namespace rgbethe::detail
