#include "crss/functionals.hpp"

#include <cmath>
#include <string>

#include "crss/errors.hpp"

namespace crss {
namespace {

void require_real_input(const GridFunction& f, const char* who) {
    if (!f.is_real)
        throw PreconditionViolation(std::string(who) + ": input must be real-valued");
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Nonnegative input with a relative floor for the fractional power; rejects
// inputs that are genuinely negative on more than 0.1% of the nodes.
GridFunction floored_power(const GridFunction& f, double expo, const char* who) {
    const double fmax = max_abs_value(f);
    if (fmax == 0.0) throw ZeroFunction(std::string(who) + ": zero input");
    int count = 0;
    GridFunction g = power_floored(f, expo, 1e-12 * fmax, &count);
    if (count > 0.001 * f.grid->nodes())
        throw NegativeFunction(std::string(who) + ": input negative or vanishing on " +
                               std::to_string(count) + " nodes");
    return g;
}

void require_pluriharmonic(const SpectralFunction& F, const char* who) {
    const double frac = non_pluriharmonic_fraction(F);
    if (frac > 1e-10)
        throw NotPluriharmonic(std::string(who) + ": non-pluriharmonic energy fraction " +
                               std::to_string(frac));
}

}  // namespace

FsDeficitBreakdown fs_deficit(const std::shared_ptr<const BasisTable>& table,
                              const GridFunction& f, const InequalityParams& params) {
    require_real_input(f, "fs_deficit");
    FsDeficitBreakdown out;
    out.sobolev_norm_sq = sobolev_norm_sq(analyze(table, f), params);
    out.q_norm = lp_norm(f, params.q);
    out.deficit = out.sobolev_norm_sq - sharp_constant(params) * out.q_norm * out.q_norm;
    return out;
}

HlsDeficitBreakdown hls_deficit(const std::shared_ptr<const BasisTable>& table,
                                const GridFunction& f, const InequalityParams& params) {
    require_real_input(f, "hls_deficit");
    HlsDeficitBreakdown out;
    out.negative_norm_sq = negative_norm_sq(analyze(table, f), params);
    out.p_norm = lp_norm(f, params.p);
    if (out.p_norm == 0.0) throw ZeroFunction("hls_deficit: |f|_p = 0");
    const double c_inv = 1.0 / sharp_constant(params);
    out.absolute = c_inv * out.p_norm * out.p_norm - out.negative_norm_sq;
    out.normalized = c_inv - out.negative_norm_sq / (out.p_norm * out.p_norm);
    return out;
}

DualRemainderPair dual_remainder_pair(const std::shared_ptr<const BasisTable>& table,
                                      const GridFunction& f,
                                      const InequalityParams& params) {
    require_real_input(f, "dual_remainder_pair");
    const FsDeficitBreakdown fs = fs_deficit(table, f, params);
    const GridFunction g =
        floored_power(f, params.q / params.p, "dual_remainder_pair");
    const double c_sharp = sharp_constant(params);

    DualRemainderPair out;
    out.i1 = std::pow(fs.q_norm, 2.0 * (params.q - 2.0)) * fs.deficit;
    const double gp = lp_norm(g, params.p);
    out.i2 = gp * gp - c_sharp * negative_norm_sq(analyze(table, g), params);
    if (!(c_sharp * out.i2 > 0.0))
        throw DegenerateDenominator("dual_remainder_pair: i2 is not positive");
    out.ratio = out.i1 / (c_sharp * out.i2);
    return out;
}

SquareIdentity square_identity(const std::shared_ptr<const BasisTable>& table,
                               const GridFunction& f, const InequalityParams& params) {
    require_real_input(f, "square_identity");
    const GridFunction g = floored_power(f, params.q / params.p, "square_identity");
    const SpectralFunction F = analyze(table, f);
    const SpectralFunction G = analyze(table, g);
    const double c_sharp = sharp_constant(params);
    const double qn = lp_norm(f, params.q);
    const double amp = std::pow(qn, params.q - 2.0);

    SquareIdentity out;
    for (size_t i = 0; i < F.coeffs.size(); ++i) {
        const double lam = eigenvalue(params, table->blocks[i].mode);
        const double sq = std::sqrt(lam);
        out.residual_sum += (amp * sq * F.coeffs[i] - (c_sharp / sq) * G.coeffs[i])
                                .squaredNorm();
    }
    const double fs_def =
        sobolev_norm_sq(F, params) - c_sharp * qn * qn;
    const double i1 = std::pow(qn, 2.0 * (params.q - 2.0)) * fs_def;
    const double gp = lp_norm(g, params.p);
    const double i2 = gp * gp - c_sharp * negative_norm_sq(G, params);
    out.difference = i1 - c_sharp * i2;
    out.mismatch = std::abs(out.residual_sum - out.difference);
    return out;
}

BoDeficitBreakdown bo_deficit(const std::shared_ptr<const BasisTable>& table,
                              const GridFunction& f) {
    require_real_input(f, "bo_deficit");
    const SpectralFunction F = analyze(table, f);
    BoDeficitBreakdown out;
    out.form = bo_form(F);  // enforces pluriharmonicity
    const GridFunction shifted = add_constant(f, -mean_integral(f));
    out.log_term = std::log(mean_integral(exp_fn(shifted)).real());
    out.deficit = out.form / (2.0 * factorial(2)) - out.log_term;
    return out;
}

double bo_dual_rhs(const std::shared_ptr<const BasisTable>& table,
                   const GridFunction& f) {
    require_real_input(f, "bo_dual_rhs");
    require_pluriharmonic(analyze(table, f), "bo_dual_rhs");
    const GridFunction ef = exp_fn(f);
    const double big_e = mean_integral(ef).real();
    const GridFunction u = add_constant(ef, -big_e);
    const SpectralFunction U = analyze(table, u);
    const SpectralFunction V =
        apply_inverse_multiplier(U, limit_multiplier(1), KernelPolicy::kProject);
    const double quad = spectral_inner(U, V).real() / sphere_measure(1);
    const double mean_ef_f = mean_integral(multiply(ef, f)).real();
    return mean_ef_f / big_e - (factorial(2) / 2.0) * quad / (big_e * big_e) -
           std::log(big_e);
}

LogHlsBreakdown loghls_deficit(const std::shared_ptr<const BasisTable>& table,
                               const GridFunction& f) {
    require_real_input(f, "loghls_deficit");
    const double fmax = max_abs_value(f);
    if (min_real_value(f) < -1e-12 * std::max(1.0, fmax))
        throw NegativeFunction("loghls_deficit: density has negative values");
    const double mean = mean_integral(f).real();
    if (std::abs(mean - 1.0) > 1e-10)
        throw NotNormalized("loghls_deficit: density mean is " + std::to_string(mean));

    GridFunction flogf;
    flogf.grid = f.grid;
    flogf.values.resize(f.grid->nodes());
    flogf.is_real = true;
    for (int i = 0; i < f.grid->nodes(); ++i) {
        const double x = f.values(i).real();
        flogf.values(i) = (x > 0.0) ? x * std::log(x) : 0.0;
    }

    LogHlsBreakdown out;
    out.entropy = mean_integral(flogf).real();
    const GridFunction u = add_constant(f, -1.0);
    const SpectralFunction U = analyze(table, u);
    const SpectralFunction V =
        apply_inverse_multiplier(U, limit_multiplier(1), KernelPolicy::kProject);
    out.quadratic =
        (factorial(2) / 2.0) * spectral_inner(U, V).real() / sphere_measure(1);
    out.deficit = out.entropy - out.quadratic;
    return out;
}

double loghls_double_integral(const GridFunction& f) {
    require_real_input(f, "loghls_double_integral");
    const SphereGrid& g = *f.grid;
    const int N = g.nodes();
    Eigen::VectorXd row_sums(N);
    for (int i = 0; i < N; ++i) {
        const Complex zi1 = g.zeta1(i), zi2 = g.zeta2(i);
        const double fi = f.values(i).real();
        double acc = 0.0;
        for (int l = 0; l < N; ++l) {
            if (l == i) continue;  // log-singular diagonal excluded
            const Complex win =
                zi1 * std::conj(g.zeta1(l)) + zi2 * std::conj(g.zeta2(l));
            acc += g.weight(l) * std::log(std::abs(1.0 - win)) * f.values(l).real();
        }
        row_sums(i) = -g.weight(i) * fi * acc;
    }
    const double measure = sphere_measure(1);
    return 2.0 * pairwise_sum(row_sums) / (measure * measure);
}

double christ_phi(const std::shared_ptr<const BasisTable>& table,
                  const GridFunction& f, const InequalityParams& params) {
    require_real_input(f, "christ_phi");
    const double lam00 = eigenvalue(params, {0, 0});
    const double neg = negative_norm_sq(analyze(table, f), params);
    return (lam00 * neg - (params.p - 1.0) * l2_norm_sq(f)) /
           (2.0 * sphere_measure(params.n));
}

ChristBound christ_bound(const std::shared_ptr<const BasisTable>& table,
                         const GridFunction& f, const InequalityParams& params,
                         double eta, double c0, double c1) {
    require_real_input(f, "christ_bound");
    if (!(eta > 0.0)) throw DomainViolation("christ_bound: eta must be positive");
    GridFunction f1, f2;
    f1.grid = f2.grid = f.grid;
    f1.is_real = f2.is_real = true;
    const int N = f.grid->nodes();
    f1.values.resize(N);
    f2.values.resize(N);
    for (int i = 0; i < N; ++i) {
        const double x = f.values(i).real();
        if (std::abs(x) <= eta) {
            f1.values(i) = x;
            f2.values(i) = 0.0;
        } else {
            f1.values(i) = 0.0;
            f2.values(i) = x;
        }
    }
    ChristBound out;
    out.phi_f1 = christ_phi(table, f1, params);
    out.f1_p_norm = lp_norm(f1, params.p);
    out.f2_p_norm = lp_norm(f2, params.p);
    const double measure = sphere_measure(params.n);
    out.bound = 1.0 + out.phi_f1 +
                c1 * eta * out.f1_p_norm * out.f1_p_norm *
                    std::pow(measure, -2.0 / params.p) -
                c0 * std::pow(eta, 2.0 - params.p) *
                    std::pow(out.f2_p_norm, params.p) / measure;
    return out;
}

double bridge_functional(const std::shared_ptr<const BasisTable>& table,
                         const GridFunction& g, const InequalityParams& params) {
    const SpectralFunction G = analyze(table, g);
    double quad = 0.0;
    for (size_t i = 0; i < G.coeffs.size(); ++i)
        quad += modified_eigenvalue(params, table->blocks[i].mode) *
                G.coeffs[i].squaredNorm();
    const double measure = sphere_measure(params.n);
    const double ratio2 = std::exp(
        2.0 * (log_gamma((params.Q + params.s) / 4.0) -
               log_gamma((params.Q - params.s) / 4.0)));
    const double mean_q = std::pow(lp_norm(g, params.q), params.q) / measure;
    return quad / measure - ratio2 * std::pow(mean_q, 2.0 / params.q);
}

}  // namespace crss
