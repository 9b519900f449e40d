#pragma once

// Distances from a function to the extremizer manifolds.  The manifolds are
// parametrized by amplitude c and a chart point xi in the open unit ball of
// C^2 (closure of the conformal orbit of constants); the chart is reached
// through the unconstrained substitution xi = v / sqrt(1 + |v|^2), v in R^4.
//
//   distance_fs:  min over (c, xi) of || f - c g_xi ||_*   (quadratic norm;
//                 c eliminated in closed form per xi)
//   distance_hls: min over (c, xi) of | f - c G_xi |_p     (Lebesgue norm;
//                 c minimized by golden-section search per xi)
//
// Both solvers run Nelder-Mead descents from a deterministic set of starts
// and certify the winner with a central finite-difference gradient check
// (NonConvergence if the certificate fails).

#include <memory>

#include "crss/constants.hpp"
#include "crss/grid.hpp"
#include "crss/harmonics.hpp"

namespace crss {

struct DistanceOptions {
    int nm_max_iter = 400;        // Nelder-Mead iterations per start
    double nm_tol = 1e-13;        // simplex value-spread stop
    double gradient_tol = 1e-9;   // fs certificate, scaled by (1 + objective scale)
    double hls_gradient_tol = 1e-6;  // checked on the analytic envelope gradient
    double fd_step = 1e-5;        // certificate finite-difference step
    int golden_iter = 45;         // inner amplitude search (hls)
};

struct DistanceResult {
    double distance = 0.0;
    double c = 0.0;              // optimal amplitude
    Eigen::Vector2cd xi = Eigen::Vector2cd::Zero();
    double objective = 0.0;      // squared *-distance (fs) / p-th power (hls)
    double gradient_norm = 0.0;  // certified finite-difference gradient norm
    bool zero_limit = false;     // optimum degenerated to the zero function
    int evaluations = 0;
};

DistanceResult distance_fs(const std::shared_ptr<const BasisTable>& table,
                           const GridFunction& f, const InequalityParams& params,
                           const DistanceOptions& options = {});

DistanceResult distance_hls(const std::shared_ptr<const BasisTable>& table,
                            const GridFunction& f, const InequalityParams& params,
                            const DistanceOptions& options = {});

}  // namespace crss
