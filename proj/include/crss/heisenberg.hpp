#pragma once

// Heisenberg-group side of the toolkit: group arithmetic on C^n x R, the
// anisotropic dilations and gauge norm, the Cayley transform onto the unit
// sphere S^{2n+1} in C^{n+1} together with its conformal factor, and the
// two-point inverse kernels on both models.
//
// Conventions.  A point is u = (z, t) with z in C^n, t real.  The group law
// is (z,t)(z',t') = (z + z', t + t' + 2 Im<z, conj z'>), dilations act as
// (z,t) -> (dz, d^2 t), and the gauge is |u| = (|z|^4 + t^2)^{1/4}.  The
// Cayley transform
//   C(z,t) = ( 2z / (1 + |z|^2 - i t), (1 - |z|^2 + i t) / (1 + |z|^2 - i t) )
// maps the group onto the sphere minus the pole (0, ..., 0, -1), sending the
// origin to the north pole (0, ..., 0, 1).

#include <complex>

#include <Eigen/Dense>

#include "crss/constants.hpp"

namespace crss {

using Complex = std::complex<double>;

struct GroupPoint {
    Eigen::VectorXcd z;  // n complex coordinates
    double t = 0.0;

    int n() const { return static_cast<int>(z.size()); }
};

struct SpherePoint {
    Eigen::VectorXcd zeta;  // n + 1 complex coordinates, |zeta| = 1

    int n() const { return static_cast<int>(zeta.size()) - 1; }
};

GroupPoint make_group_point(Eigen::VectorXcd z, double t);

// Validates |zeta| = 1 within 1e-9 and renormalizes to machine precision.
SpherePoint make_sphere_point(Eigen::VectorXcd zeta);

// Hermitian pairing  <a, b> = sum_i a_i conj(b_i).
Complex sphere_inner(const SpherePoint& a, const SpherePoint& b);

GroupPoint group_multiply(const GroupPoint& u, const GroupPoint& v);
GroupPoint group_inverse(const GroupPoint& u);
GroupPoint dilate(const GroupPoint& u, double delta);

// Gauge norm (|z|^4 + t^2)^{1/4}; homogeneous of degree 1 under dilations.
double homogeneous_norm(const GroupPoint& u);

SpherePoint cayley(const GroupPoint& u);

// Inverse transform; throws PoleSingularity within 1e-13 of the pole
// zeta_{n+1} = -1.
GroupPoint cayley_inverse(const SpherePoint& zeta);

// Conformal factor |J_C|(u) = 2^{Q-1} ((1 + |z|^2)^2 + t^2)^{-Q/2}, the
// density of the sphere measure pulled back to the group:
//   int_S f dsigma = int_{H^n} f(C(u)) |J_C|(u) du.
double cayley_jacobian(const GroupPoint& u);

// The same factor written on the sphere side: 2^{-1} |1 + zeta_{n+1}|^Q.
double cayley_jacobian_sphere(const SpherePoint& zeta);

// Group-model inverse kernel of the order-s operator:
//   2^{n-1-s/2} Gamma((Q-s)/4)^2 / (pi^{n+1} Gamma(s/2)) * |v^{-1} u|^{s-Q}.
// Throws SingularDiagonal when |v^{-1} u| < 1e-12.
double kernel_group(const InequalityParams& params, const GroupPoint& u,
                    const GroupPoint& v);

// Sphere-model inverse kernel:
//   2^{-1-s/Q} Gamma((Q-s)/4)^2 / (pi^{n+1} Gamma(s/2))
//     * |1 - <zeta, eta>|^{(s-Q)/2}.
// Throws SingularDiagonal when |1 - <zeta, eta>| < 1e-14.
double kernel_sphere(const InequalityParams& params, const SpherePoint& zeta,
                     const SpherePoint& eta);

// Constant prefactors of the two kernels (no distance power attached).
double kernel_group_constant(const InequalityParams& params);
double kernel_sphere_constant(const InequalityParams& params);

// Ratio  |1 - <C(u), C(v)>|^{1/2} / ( |v^{-1} u| (|J_C(u)| |J_C(v)|)^{1/(2Q)} ).
// Conformal covariance of the Cayley transform makes this a constant over
// distinct pairs; the measured value is pinned by a golden test.
double cayley_distance_factor(const GroupPoint& u, const GroupPoint& v);

}  // namespace crss
