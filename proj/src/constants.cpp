#include "crss/constants.hpp"

#include <cmath>
#include <string>

#include "crss/errors.hpp"

namespace crss {

namespace {

constexpr double kSGuard = 1e-6;

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw DomainViolation("log_gamma requires a positive argument, got " +
                              std::to_string(x));
    }
    return std::lgamma(x);
}

double gamma_ratio(double a, double b) {
    return std::exp(log_gamma(a) - log_gamma(b));
}

InequalityParams make_params(int n, double s) {
    if (n < 1) {
        throw DomainViolation("make_params: n must be a positive integer, got " +
                              std::to_string(n));
    }
    const double Q = 2.0 * n + 2.0;
    if (!(s >= kSGuard) || !(s <= Q - kSGuard)) {
        throw DomainViolation("make_params: s must lie in [1e-6, Q - 1e-6], got s = " +
                              std::to_string(s) + " with Q = " + std::to_string(Q));
    }
    InequalityParams p;
    p.n = n;
    p.Q = Q;
    p.s = s;
    p.q = 2.0 * Q / (Q - s);
    p.p = 2.0 * Q / (Q + s);
    return p;
}

double sharp_constant(const InequalityParams& params) {
    const double Q = params.Q;
    const double s = params.s;
    // (4 pi^{Q/2} / n!)^{s/Q} with Q/2 = n + 1, evaluated in log form.
    const double log_prefactor =
        (s / Q) * (std::log(4.0) + (Q / 2.0) * std::log(M_PI) -
                   log_gamma(params.n + 1.0));
    const double log_gamma_part =
        2.0 * (log_gamma((Q + s) / 4.0) - log_gamma((Q - s) / 4.0));
    return std::exp(log_prefactor + log_gamma_part);
}

double modified_eigenvalue(const InequalityParams& params, ModeIndex mode) {
    if (mode.j < 0 || mode.k < 0) {
        throw DomainViolation("eigenvalue: mode indices must be nonnegative");
    }
    const double a = (params.Q + params.s) / 4.0;
    const double b = (params.Q - params.s) / 4.0;
    const double log_val = log_gamma(mode.j + a) + log_gamma(mode.k + a) -
                           log_gamma(mode.j + b) - log_gamma(mode.k + b);
    return std::exp(log_val);
}

double eigenvalue(const InequalityParams& params, ModeIndex mode) {
    const double prefactor = std::exp((params.s / params.Q) * std::log(2.0));
    return prefactor * modified_eigenvalue(params, mode);
}

double eigenvalue_limit(int n, int j) {
    if (n < 1) throw DomainViolation("eigenvalue_limit: n must be >= 1");
    if (j < 1) {
        throw DomainViolation(
            "eigenvalue_limit: j must be >= 1 (degree-0 block is the kernel)");
    }
    // Gamma(j + n + 1) / Gamma(j) = j (j+1) ... (j+n); exact product form.
    double r = 1.0;
    for (int i = 0; i <= n; ++i) r *= (j + i);
    return r;
}

double sphere_measure(int n) {
    if (n < 1) throw DomainViolation("sphere_measure: n must be >= 1");
    return 2.0 * std::pow(M_PI, n + 1) / factorial(n);
}

TheoremConstants theorem_constants(const InequalityParams& params) {
    const double Q = params.Q;
    const double s = params.s;
    TheoremConstants t{};
    t.fs_local = 2.0 * s / (Q + 4.0 + s);
    t.dual_ratio = (Q + 4.0 + s) / (Q + 4.0 - s) * sharp_constant(params);
    t.bo_ratio = params.n + 2.0;
    t.spectral_gap = 1.0 - eigenvalue(params, {1, 0}) / eigenvalue(params, {2, 0});
    return t;
}

double iwasawa_dual_ratio(double Q, double s, int m) {
    if (m != 0 && m != 1 && m != 3 && m != 7) {
        throw DomainViolation("iwasawa_dual_ratio: m must be one of {0, 1, 3, 7}");
    }
    const double s_max = Q - 4.0 * (m / 2);
    if (!(s > 0.0) || !(s < s_max)) {
        throw DomainViolation("iwasawa_dual_ratio: need 0 < s < Q - 4*floor(m/2)");
    }
    const double sgn = (m > 0) ? 1.0 : 0.0;
    const double denom = Q + 2.0 + 2.0 * sgn - s;
    if (denom <= 0.0) {
        throw DegenerateDenominator("iwasawa_dual_ratio: denominator not positive");
    }
    return (Q + 2.0 + 2.0 * sgn + s) / denom;
}

int subspace_dimension(int n, ModeIndex mode) {
    if (n != 1) {
        throw DomainViolation(
            "subspace_dimension: only the n = 1 sphere is supported");
    }
    if (mode.j < 0 || mode.k < 0) {
        throw DomainViolation("subspace_dimension: mode indices must be >= 0");
    }
    return mode.j + mode.k + 1;
}

}  // namespace crss
