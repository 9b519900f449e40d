#pragma once

// Scalar layer of the toolkit: inequality parameters, sharp constants,
// intertwining-operator eigenvalues and the handful of closed-form constants
// the stability estimates are measured against.  Everything here is exact
// arithmetic on gamma functions; all gamma ratios are evaluated through
// log-gamma differences so large mode indices cannot overflow.

#include <cstdint>

namespace crss {

// Mode label (j, k) of a bigraded spherical-harmonic block H_{j,k}.
struct ModeIndex {
    int j = 0;
    int k = 0;

    friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

// Parameter pack for the order-s inequality family on the sphere S^{2n+1}.
//
//   Q = 2n + 2         homogeneous dimension,
//   q = 2Q / (Q - s)   upper conjugate exponent,
//   p = 2Q / (Q + s)   lower conjugate exponent (1/p + 1/q = 1).
//
// s lives on the open interval (0, Q) with a guard band of 1e-6 at both
// ends; construction fails with DomainViolation outside it.
struct InequalityParams {
    int n = 1;
    double Q = 4.0;
    double s = 2.0;
    double q = 4.0;
    double p = 4.0 / 3.0;
};

// Validating constructor for InequalityParams.
InequalityParams make_params(int n, double s);

// Sharp constant of the fractional Sobolev / HLS pair:
//   C = (4 pi^{Q/2} / n!)^{s/Q} * Gamma((Q+s)/4)^2 / Gamma((Q-s)/4)^2.
// For n = 1, s = 2 this is pi/2.
double sharp_constant(const InequalityParams& params);

// Eigenvalue of the order-s intertwining operator on H_{j,k}:
//   lambda_{j,k} = 2^{s/Q} * G(j + (Q+s)/4) G(k + (Q+s)/4)
//                          / (G(j + (Q-s)/4) G(k + (Q-s)/4)).
// Requires j, k >= 0.
double eigenvalue(const InequalityParams& params, ModeIndex mode);

// Same quotient without the 2^{s/Q} prefactor.  This is the normalization
// used by the mean-integral (dashed) form of the functional and by the
// s -> Q limit bridge.
double modified_eigenvalue(const InequalityParams& params, ModeIndex mode);

// Eigenvalue of the limiting conformal operator on the pluriharmonic mode of
// degree j >= 1:
//   lambda'_j = Gamma(j + n + 1) / Gamma(j) = j (j+1) ... (j+n).
double eigenvalue_limit(int n, int j);

// Surface measure of the unit sphere S^{2n+1}: 2 pi^{n+1} / n!.
double sphere_measure(int n);

// Closed-form constants appearing in the stability theorems.
struct TheoremConstants {
    double fs_local;      // 2s / (Q + 4 + s), local Sobolev stability ratio
    double dual_ratio;    // (Q+4+s)/(Q+4-s) * sharp_constant
    double bo_ratio;      // n + 2, limit-case (logarithmic) ratio
    double spectral_gap;  // 1 - lambda_{1,0} / lambda_{2,0}
};

TheoremConstants theorem_constants(const InequalityParams& params);

// Sharp ratio of the dual stability estimate on the Iwasawa-type groups
// labelled by m in {0, 1, 3, 7} (center dimension):
//   (Q + 2 + 2*sign(m) + s) / (Q + 2 + 2*sign(m) - s),
// valid for 0 < s < Q - 4*floor(m/2).
double iwasawa_dual_ratio(double Q, double s, int m);

// Complex dimension of H_{j,k} on S^3 (n = 1 only): j + k + 1.
int subspace_dimension(int n, ModeIndex mode);

// log Gamma on (0, inf); thin wrapper so all modules share one spelling.
double log_gamma(double x);

// exp(log_gamma(a) - log_gamma(b)) evaluated stably.
double gamma_ratio(double a, double b);

}  // namespace crss
