#pragma once

// Product quadrature on S^3 in Hopf coordinates
//   zeta_1 = cos(theta) e^{i phi_1},  zeta_2 = sin(theta) e^{i phi_2},
//   theta in [0, pi/2], phi_j in [0, 2 pi),
// with surface measure dsigma = cos(theta) sin(theta) dtheta dphi_1 dphi_2.
// The theta factor uses Gauss-Legendre nodes in x = cos(2 theta) with
// band_limit + 1 points; each angle uses 2*band_limit + 1 uniform points.
// The rule integrates every monomial zeta^alpha conj(zeta)^beta with
// |alpha| + |beta| <= 2*band_limit exactly, and sums of weights equal
// |S^3| = 2 pi^2 by construction.

#include <complex>
#include <functional>
#include <memory>
#include <string>

#include <Eigen/Dense>

#include "crss/heisenberg.hpp"

namespace crss {

struct SphereGrid {
    int band = 0;        // exactness degree is 2 * band
    int n_theta = 0;     // band + 1
    int n_phi = 0;       // 2 * band + 1
    Eigen::VectorXd theta, phi1, phi2, weight;  // flattened, one entry per node
    Eigen::VectorXcd zeta1, zeta2;

    int nodes() const { return static_cast<int>(weight.size()); }
    SpherePoint point(int i) const;
};

// Builds the rule above.  band_limit must lie in [1, 64]; larger requests
// throw ResourceLimit (the dense tabulations grow cubically).
std::shared_ptr<const SphereGrid> build_grid(int band_limit);

// Function tabulated on a grid.  is_real records that the values are known
// to be real up to roundoff; operations propagate the flag conservatively.
struct GridFunction {
    std::shared_ptr<const SphereGrid> grid;
    Eigen::VectorXcd values;
    bool is_real = false;

    int nodes() const { return static_cast<int>(values.size()); }
};

GridFunction grid_constant(std::shared_ptr<const SphereGrid> grid, Complex value);
GridFunction tabulate(std::shared_ptr<const SphereGrid> grid,
                      const std::function<Complex(const SpherePoint&)>& fn,
                      bool is_real = false);

// Deterministic pairwise reduction; used by every integral in the library so
// reruns produce bitwise-identical sums.
double pairwise_sum(const Eigen::VectorXd& v);
Complex pairwise_sum(const Eigen::VectorXcd& v);

// Integral over S^3 (surface measure, total mass 2 pi^2).
Complex integrate(const GridFunction& f);

// Mean integral: integrate(f) / |S^3|.
Complex mean_integral(const GridFunction& f);

// ( int |f|^r dsigma )^{1/r}; requires r > 0.
double lp_norm(const GridFunction& f, double r);

// int |f|^2 dsigma.
double l2_norm_sq(const GridFunction& f);

// Pointwise algebra.  Mixed-grid operands throw DomainViolation.
GridFunction add(const GridFunction& a, const GridFunction& b);
GridFunction sub(const GridFunction& a, const GridFunction& b);
GridFunction scale(const GridFunction& f, Complex c);
GridFunction add_constant(const GridFunction& f, Complex c);
GridFunction multiply(const GridFunction& a, const GridFunction& b);
GridFunction conjugate(const GridFunction& f);

// Nodewise |f|.
GridFunction abs_fn(const GridFunction& f);

// Nodewise f^a for real f with min f > 1e-12 (DomainViolation otherwise;
// NegativeFunction if f dips below zero).
GridFunction power(const GridFunction& f, double a);

// Nodewise f^a for nonnegative real f, flooring values below `floor`.
// floored_count reports how many nodes were clipped.
GridFunction power_floored(const GridFunction& f, double a, double floor,
                           int* floored_count);

// Nodewise exp(f) / log(f) for real f (log requires min f > 1e-12).
GridFunction exp_fn(const GridFunction& f);
GridFunction log_fn(const GridFunction& f);

double min_real_value(const GridFunction& f);
double max_abs_value(const GridFunction& f);

// Tabulates zeta_1^{a1} zeta_2^{a2} conj(zeta_1)^{b1} conj(zeta_2)^{b2}.
Eigen::VectorXcd monomial_values(const SphereGrid& grid, int a1, int a2, int b1,
                                 int b2);

// CSV serialization with header "theta,phi1,phi2,re,im", one row per node in
// grid order.  read infers the band limit from the row count and verifies
// the coordinates against a freshly built grid within 1e-9.
void write_grid_function_csv(const GridFunction& f, const std::string& path);
GridFunction read_grid_function_csv(const std::string& path);

}  // namespace crss
