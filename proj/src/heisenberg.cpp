#include "crss/heisenberg.hpp"

#include <cmath>
#include <string>

#include "crss/errors.hpp"

namespace crss {

namespace {

constexpr double kPoleGuard = 1e-13;

// <a, b> = sum a_i conj(b_i).  Eigen's dot() conjugates its *left* factor,
// so the arguments are swapped on purpose.
Complex inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return b.dot(a);
}

}  // namespace

GroupPoint make_group_point(Eigen::VectorXcd z, double t) {
    if (z.size() < 1) throw DomainViolation("group point needs n >= 1");
    return GroupPoint{std::move(z), t};
}

SpherePoint make_sphere_point(Eigen::VectorXcd zeta) {
    if (zeta.size() < 2) throw DomainViolation("sphere point needs n + 1 >= 2");
    const double r = zeta.norm();
    if (std::abs(r - 1.0) > 1e-9) {
        throw DomainViolation("sphere point has |zeta| = " + std::to_string(r) +
                              ", expected 1 within 1e-9");
    }
    zeta /= r;
    return SpherePoint{std::move(zeta)};
}

Complex sphere_inner(const SpherePoint& a, const SpherePoint& b) {
    return inner(a.zeta, b.zeta);
}

GroupPoint group_multiply(const GroupPoint& u, const GroupPoint& v) {
    if (u.n() != v.n()) throw DomainViolation("group_multiply: mismatched n");
    GroupPoint w;
    w.z = u.z + v.z;
    w.t = u.t + v.t + 2.0 * inner(u.z, v.z).imag();
    return w;
}

GroupPoint group_inverse(const GroupPoint& u) {
    return GroupPoint{-u.z, -u.t};
}

GroupPoint dilate(const GroupPoint& u, double delta) {
    if (!(delta > 0.0)) throw DomainViolation("dilate: delta must be positive");
    return GroupPoint{delta * u.z, delta * delta * u.t};
}

double homogeneous_norm(const GroupPoint& u) {
    const double z2 = u.z.squaredNorm();
    return std::pow(z2 * z2 + u.t * u.t, 0.25);
}

SpherePoint cayley(const GroupPoint& u) {
    const int n = u.n();
    const double z2 = u.z.squaredNorm();
    const Complex denom(1.0 + z2, -u.t);
    SpherePoint p;
    p.zeta.resize(n + 1);
    p.zeta.head(n) = (2.0 / denom) * u.z;
    p.zeta(n) = Complex(1.0 - z2, u.t) / denom;
    return p;
}

GroupPoint cayley_inverse(const SpherePoint& zeta) {
    const int n = zeta.n();
    const Complex w = 1.0 + zeta.zeta(n);
    if (std::abs(w) < kPoleGuard) {
        throw PoleSingularity("cayley_inverse: point is at the pole zeta_{n+1} = -1");
    }
    GroupPoint u;
    u.z = zeta.zeta.head(n) / w;
    u.t = -(2.0 / w).imag();
    return u;
}

double cayley_jacobian(const GroupPoint& u) {
    const double Q = 2.0 * u.n() + 2.0;
    const double z2 = u.z.squaredNorm();
    const double omega = (1.0 + z2) * (1.0 + z2) + u.t * u.t;
    return std::exp((Q - 1.0) * std::log(2.0) - (Q / 2.0) * std::log(omega));
}

double cayley_jacobian_sphere(const SpherePoint& zeta) {
    const double Q = 2.0 * zeta.n() + 2.0;
    const double w = std::abs(1.0 + zeta.zeta(zeta.n()));
    if (w < kPoleGuard) {
        throw PoleSingularity("cayley_jacobian_sphere: point is at the pole");
    }
    return 0.5 * std::pow(w, Q);
}

double kernel_group_constant(const InequalityParams& params) {
    const double Q = params.Q;
    const double s = params.s;
    const double log_val = (params.n - 1.0 - s / 2.0) * std::log(2.0) +
                           2.0 * log_gamma((Q - s) / 4.0) -
                           (params.n + 1.0) * std::log(M_PI) - log_gamma(s / 2.0);
    return std::exp(log_val);
}

double kernel_sphere_constant(const InequalityParams& params) {
    const double Q = params.Q;
    const double s = params.s;
    const double log_val = (-1.0 - s / Q) * std::log(2.0) +
                           2.0 * log_gamma((Q - s) / 4.0) -
                           (params.n + 1.0) * std::log(M_PI) - log_gamma(s / 2.0);
    return std::exp(log_val);
}

double kernel_group(const InequalityParams& params, const GroupPoint& u,
                    const GroupPoint& v) {
    if (u.n() != params.n || v.n() != params.n) {
        throw DomainViolation("kernel_group: point dimension does not match params");
    }
    const double d = homogeneous_norm(group_multiply(group_inverse(v), u));
    if (d < 1e-12) {
        throw SingularDiagonal("kernel_group: |v^{-1} u| below diagonal guard");
    }
    return kernel_group_constant(params) * std::pow(d, params.s - params.Q);
}

double kernel_sphere(const InequalityParams& params, const SpherePoint& zeta,
                     const SpherePoint& eta) {
    if (zeta.n() != params.n || eta.n() != params.n) {
        throw DomainViolation("kernel_sphere: point dimension does not match params");
    }
    const double d = std::abs(1.0 - sphere_inner(zeta, eta));
    if (d < 1e-14) {
        throw SingularDiagonal("kernel_sphere: |1 - <zeta, eta>| below diagonal guard");
    }
    return kernel_sphere_constant(params) *
           std::pow(d, (params.s - params.Q) / 2.0);
}

double cayley_distance_factor(const GroupPoint& u, const GroupPoint& v) {
    const double Q = 2.0 * u.n() + 2.0;
    const double d = homogeneous_norm(group_multiply(group_inverse(v), u));
    if (d < 1e-12) {
        throw SingularDiagonal("cayley_distance_factor: coincident points");
    }
    const double chordal =
        std::sqrt(std::abs(1.0 - sphere_inner(cayley(u), cayley(v))));
    const double jfac =
        std::pow(cayley_jacobian(u) * cayley_jacobian(v), 1.0 / (2.0 * Q));
    return chordal / (d * jfac);
}

}  // namespace crss
