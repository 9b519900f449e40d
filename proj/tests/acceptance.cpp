// Acceptance gate: one line per criterion, each at its pinned tolerance.
// Exit code 0 when every criterion holds, 1 otherwise.  Runs at production
// resolution (grid band 12, basis band 10; band 12 where the criterion says
// band 12) with deterministic seeds throughout.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "crss/conformal.hpp"
#include "crss/constants.hpp"
#include "crss/errors.hpp"
#include "crss/experiments.hpp"
#include "crss/functionals.hpp"
#include "crss/grid.hpp"
#include "crss/harmonics.hpp"
#include "crss/heisenberg.hpp"
#include "crss/manifold.hpp"
#include "oracles.hpp"

using namespace crss;

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

double rel(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// Real unit-L^2 representative of a block: the diagonal blocks carry real
// basis functions; off-diagonal pairs are spanned by sqrt(2) Re(basis).
GridFunction real_mode(const ExperimentContext& ctx, ModeIndex m) {
    GridFunction e = basis_function(ctx.table, m, 0);
    if (m.j == m.k) return e;
    GridFunction out;
    out.grid = e.grid;
    Eigen::VectorXd re = e.values.real();
    out.values = (std::sqrt(2.0) * re).cast<Complex>();
    out.is_real = true;
    return out;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Closed-form constant identities, 1e-12 relative, n = 1, s in {0.5..3.5}.

Outcome criterion_constants() {
    const double S = sphere_measure(1);
    double worst = 0.0;
    for (double s = 0.5; s <= 3.51; s += 0.5) {
        const InequalityParams pr = make_params(1, s);
        const double c = sharp_constant(pr);
        const double l00 = eigenvalue(pr, {0, 0});
        const double l10 = eigenvalue(pr, {1, 0});
        const double l20 = eigenvalue(pr, {2, 0});
        worst = std::max(worst, rel(l00, c * std::pow(S, -s / pr.Q)));
        worst = std::max(worst, rel(l10, (pr.q - 1.0) * l00));
        worst = std::max(worst, rel(1.0 - l10 / l20,
                                    2.0 * s / (pr.Q + 4.0 + s)));
        worst = std::max(worst, rel(l20 / l10,
                                    (pr.Q + 4.0 + s) / (pr.Q + 4.0 - s)));
    }
    return {worst <= 1e-12,
            fmt("n=1, s=0.5..3.5 step 0.5: max rel dev %.2e (tol 1e-12)", worst)};
}

// ---------------------------------------------------------------------------
// 2. s = 2 golden values against the 200-bit oracle, 1e-12 relative.

Outcome criterion_goldens() {
    const InequalityParams pr = make_params(1, 2.0);
    double worst = 0.0;
    worst = std::max(worst, rel(sharp_constant(pr), std::numbers::pi / 2.0));
    worst = std::max(worst, rel(sharp_constant(pr), oracle::sharp_constant(1, 2.0)));
    const double half_pow = std::pow(2.0, 2.0 / pr.Q);
    for (int j = 0; j <= 6; ++j) {
        for (int k = 0; k <= 6; ++k) {
            const double lam = eigenvalue(pr, {j, k});
            worst = std::max(worst,
                             rel(lam, std::sqrt(2.0) * (j + 0.5) * (k + 0.5)));
            worst = std::max(worst, rel(lam, oracle::eigenvalue(1, 2.0, j, k)));
            worst = std::max(worst,
                             rel(lam, half_pow * modified_eigenvalue(pr, {j, k})));
        }
    }
    for (int j = 1; j <= 6; ++j) {
        const double lp = eigenvalue_limit(1, j);
        worst = std::max(worst, rel(lp, static_cast<double>(j) * (j + 1)));
        worst = std::max(worst, rel(lp, oracle::eigenvalue_limit(1, j)));
    }
    return {worst <= 1e-12,
            fmt("sharp constant pi/2, eigenvalues j,k<=6, limit eigenvalues: "
                "max rel dev %.2e (tol 1e-12)", worst)};
}

// ---------------------------------------------------------------------------
// 3. Deficits vanish on 20 chart members with |xi| <= 0.5 at 1e-7; the
//    member family carries kernel exponent -(Q+s)/2, and the -(Q+s)/4
//    variant demonstrably fails the same test.

Outcome criterion_members(const ExperimentContext& ctx) {
    const ScanResult vfs = run_verify(ctx, "fs");
    const ScanResult vhls = run_verify(ctx, "hls");
    double fs_max = 0.0, hls_max = 0.0;
    for (const auto& row : vfs.report.at("results"))
        if (row.at("kind") == "extremizer")
            fs_max = std::max(fs_max, row.at("value").get<double>());
    for (const auto& row : vhls.report.at("results"))
        if (row.at("kind") == "extremizer")
            hls_max = std::max(hls_max, row.at("value").get<double>());

    Eigen::Vector2cd xi;
    xi << Complex(0.15, 0.30), Complex(-0.20, 0.10);  // |xi| = 0.40
    const double c_sharp = sharp_constant(ctx.params);
    const GridFunction right = extremizer_hls(ctx.grid, ctx.params, 1.3, xi);
    const double right_dev =
        std::abs(hls_deficit(ctx.table, right, ctx.params).normalized) * c_sharp;
    const GridFunction wrong =
        scale(power(extremizer_hls(ctx.grid, ctx.params, 1.0, xi), 0.5), 1.3);
    const double wrong_dev =
        std::abs(hls_deficit(ctx.table, wrong, ctx.params).normalized) * c_sharp;

    const bool pass = vfs.pass && vhls.pass && right_dev <= 1e-7 &&
                      wrong_dev > 100.0 * 1e-7;
    return {pass,
            fmt("20 members each: fs max %.2e, hls max %.2e (tol 1e-7); "
                "exponent -(Q+s)/2 deficit %.2e, exponent -(Q+s)/4 deficit %.2e "
                "(discrepancy factor %.1e: halved exponent rejected)",
                fs_max, hls_max, right_dev, wrong_dev,
                wrong_dev / std::max(right_dev, 1e-300))};
}

// ---------------------------------------------------------------------------
// 4. Quadratic local stability: extrapolated deficit/(eps^2 lambda) along
//    1 + eps*phi equals 2s/(Q+4+s) for the (2,0)+(0,2) block at s in
//    {1,2,3}, and 1 - lambda_{1,0}/lambda_{j,k} for (1,1),(3,0),(2,1);
//    every raw ratio <= 1 + 1e-3.

Outcome criterion_local_stability(const ExperimentContext& base) {
    double worst_rel = 0.0, worst_ratio = 0.0;
    bool pass = true;
    for (const double s : {1.0, 2.0, 3.0}) {
        ExperimentContext ctx = base;
        ctx.config.s = s;
        ctx.params = make_params(1, s);
        ctx.config.modes = {{2, 0}};
        const ScanResult r = run_fs_stability_scan(ctx);
        pass = pass && r.pass;
        const double closed = 2.0 * s / (ctx.params.Q + 4.0 + s);
        for (const auto& row : r.report.at("results")) {
            worst_rel = std::max(
                worst_rel,
                std::abs(row.at("extrapolated").get<double>() / closed - 1.0));
            for (const auto& ratio : row.at("ratios"))
                worst_ratio = std::max(worst_ratio, ratio.get<double>());
        }
    }
    {
        ExperimentContext ctx = base;
        ctx.config.modes = {{1, 1}, {3, 0}, {2, 1}};
        const ScanResult r = run_fs_stability_scan(ctx);
        pass = pass && r.pass;
        for (const auto& row : r.report.at("results")) {
            worst_rel = std::max(worst_rel, row.at("rel_error").get<double>());
            for (const auto& ratio : row.at("ratios"))
                worst_ratio = std::max(worst_ratio, ratio.get<double>());
        }
    }
    pass = pass && worst_rel <= 0.01 && worst_ratio <= 1.0 + 1e-3;
    return {pass,
            fmt("(2,0)+(0,2) at s in {1,2,3} -> 2s/(Q+4+s); (1,1),(3,0),(2,1) "
                "-> 1-l10/l: worst rel %.2e (tol 1e-2), max raw ratio %1.6f "
                "(cap 1+1e-3)", worst_rel, worst_ratio)};
}

// ---------------------------------------------------------------------------
// 5. Dual remainder terms: completion-of-squares identity at 1e-8 relative
//    on 50 random positive f; i1 >= C*i2 - 1e-8 on 100; local ratio equals
//    (Q+4+s)/(Q+4-s)*C within 1% for s in {1, 2}.

Outcome criterion_dual(const ExperimentContext& base) {
    bool pass = true;
    double worst_ratio_rel = 0.0;
    double s2_value = 0.0;
    for (const double s : {1.0, 2.0}) {
        ExperimentContext ctx = base;
        ctx.config.s = s;
        ctx.params = make_params(1, s);
        ctx.config.samples = (s == 2.0) ? 50 : 5;
        const ScanResult r = run_dual_ratio_scan(ctx);
        pass = pass && r.pass;
        // The scan extrapolates i1/(C i2), so the i1/i2 limit is the
        // extrapolated value times the sharp constant.
        const double extrap = r.report.at("summary").at("extrapolated").get<double>();
        const double target = (ctx.params.Q + 4.0 + s) / (ctx.params.Q + 4.0 - s) *
                              sharp_constant(ctx.params);
        const double value = extrap * sharp_constant(ctx.params);
        if (s == 2.0) s2_value = value;
        worst_ratio_rel = std::max(worst_ratio_rel,
                                   std::abs(value / target - 1.0));
    }

    const double c_sharp = sharp_constant(base.params);
    std::mt19937_64 rng(base.config.seed + 1);
    double min_margin = 1e300;
    for (int i = 0; i < 100; ++i) {
        const GridFunction f = random_positive_field(base, rng);
        const DualRemainderPair pr = dual_remainder_pair(base.table, f, base.params);
        min_margin = std::min(min_margin, pr.i1 - c_sharp * pr.i2);
    }
    pass = pass && min_margin >= -1e-8 && worst_ratio_rel <= 0.01;
    return {pass,
            fmt("square identity 50/50 at 1e-8; global bound on 100 fields "
                "min(i1 - C i2) = %.2e (floor -1e-8); local i1/i2 limit s in "
                "{1,2} worst rel %.2e (tol 1e-2; s=2 value %.4f vs 5pi/6 = "
                "2.6180)", min_margin, worst_ratio_rel, s2_value)};
}

// ---------------------------------------------------------------------------
// 6. Limiting inequality: deficit >= dual RHS - 1e-8 on 50 pluriharmonic
//    fields; deficit vanishes to 1e-6 on log-Jacobian members; mode-ratio
//    limits 3 and 6 within 2%; eigenvalue bridge converges with order >= 0.8.

Outcome criterion_limit(const ExperimentContext& base) {
    ExperimentContext ctx = base;
    ctx.config.samples = 50;
    const ScanResult vbo = run_verify(ctx, "bo");

    std::mt19937_64 rng(base.config.seed + 7);
    double word_max = 0.0;
    for (int i = 0; i < 5; ++i) {
        const ConformalMap w = random_word(base, rng);
        const GridFunction f = act_log(spectral_zero(base.table), w);
        word_max = std::max(word_max,
                            std::abs(bo_deficit(base.table, f).deficit));
    }

    const ScanResult lim = run_limit_case_scan(base);
    double worst_mode_rel = 0.0;
    for (const auto& row : lim.report.at("mode_ratios"))
        worst_mode_rel = std::max(worst_mode_rel,
                                  row.at("rel_error").get<double>());
    double min_order = 1e300;
    for (const auto& o : lim.report.at("bridge_orders"))
        min_order = std::min(min_order, o.get<double>());
    for (const auto& row : lim.report.at("eigen_bridge"))
        for (const auto& o : row.at("orders"))
            min_order = std::min(min_order, o.get<double>());

    const bool pass = vbo.pass && word_max <= 1e-6 && lim.pass;
    return {pass,
            fmt("dual bound on 50 pluriharmonic fields; log-Jacobian members "
                "max deficit %.2e (tol 1e-6); ratio limits 3 and 6 worst rel "
                "%.2e (tol 2e-2); bridge orders >= %.2f (floor 0.8)",
                word_max, worst_mode_rel, min_order)};
}

// ---------------------------------------------------------------------------
// 7. Conformal invariance audit: five functionals invariant under 20 random
//    words to 1e-5; two-point kernel covariance to 1e-8.

Outcome criterion_invariance(const ExperimentContext& ctx) {
    const ScanResult audit = run_invariance_audit(ctx);
    double worst = 0.0, worst_kernel = 0.0;
    for (const auto& row : audit.report.at("results")) {
        for (const char* k : {"lq_norm", "sobolev_norm_sq",
                              "hls_normalized_deficit", "exp_integral",
                              "fs_deficit"})
            worst = std::max(worst, row.at(k).at("rel_error").get<double>());
        worst_kernel = std::max(
            worst_kernel, row.at("kernel_covariance_max_rel").get<double>());
    }
    return {audit.pass,
            fmt("20 words: max functional deviation %.2e (tol 1e-5), kernel "
                "covariance max %.2e (tol 1e-8)", worst, worst_kernel)};
}

// ---------------------------------------------------------------------------
// 8. Infrastructure: quadrature exactness at band 12 (1e-12); projector
//    idempotence/orthogonality/completeness (1e-9); zonal vs Gram route
//    (1e-9); spectral vs kernel inverse eigenvalues on j+k <= 4 (1e-6);
//    analyze/synthesize round trip (1e-10).

Outcome criterion_infrastructure(const ExperimentContext& ctx) {
    const auto& g = *ctx.grid;
    const double S = sphere_measure(1);

    // Monomial moments |z1|^{2a} |z2|^{2b}: closed form S * a! b! / (a+b+1)!.
    double worst_moment = 0.0;
    for (int a = 0; a <= 24; a += 2) {
        for (int b = 0; a + b <= 24; b += 3) {
            GridFunction f = grid_constant(ctx.grid, 0.0);
            for (int i = 0; i < g.nodes(); ++i)
                f.values(i) = std::pow(std::norm(g.zeta1(i)), a) *
                              std::pow(std::norm(g.zeta2(i)), b);
            const double closed =
                S * std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                             std::lgamma(a + b + 2.0));
            worst_moment = std::max(worst_moment,
                                    rel(integrate(f).real(), closed));
        }
    }
    // Unmatched phases integrate to zero.
    for (const auto& e : std::vector<std::array<int, 4>>{
             {1, 0, 0, 0}, {3, 1, 2, 0}, {5, 3, 3, 5}, {12, 0, 0, 12}}) {
        GridFunction f = grid_constant(ctx.grid, 0.0);
        for (int i = 0; i < g.nodes(); ++i)
            f.values(i) = std::pow(g.zeta1(i), e[0]) * std::pow(g.zeta2(i), e[1]) *
                          std::pow(std::conj(g.zeta1(i)), e[2]) *
                          std::pow(std::conj(g.zeta2(i)), e[3]);
        worst_moment = std::max(worst_moment, std::abs(integrate(f)) / S);
    }

    // Projectors on a band-4 field.
    std::mt19937_64 rng(101);
    const SpectralFunction F4 = random_band_field(ctx, rng, 4, false);
    const GridFunction f4 = synthesize(F4);
    const double scale4 = 1.0 + max_abs_value(f4);
    double worst_proj = 0.0;
    const GridFunction p11 = apply_zonal_projector(f4, {1, 1});
    worst_proj = std::max(worst_proj,
                          max_abs_value(sub(apply_zonal_projector(p11, {1, 1}),
                                            p11)) / scale4);
    worst_proj = std::max(
        worst_proj, max_abs_value(apply_zonal_projector(p11, {2, 0})) / scale4);
    GridFunction acc = grid_constant(ctx.grid, 0.0);
    for (int d = 0; d <= 4; ++d)
        for (int j = 0; j <= d; ++j)
            acc = add(acc, apply_zonal_projector(f4, {j, d - j}));
    worst_proj = std::max(worst_proj, max_abs_value(sub(acc, f4)) / scale4);

    // Zonal route vs Gram route.
    double worst_gram = 0.0;
    for (const ModeIndex m : {ModeIndex{2, 0}, ModeIndex{1, 1}, ModeIndex{2, 2}}) {
        SpectralFunction sel = spectral_zero(ctx.table);
        sel.is_real = false;
        const int bi = ctx.table->block_index(m);
        sel.coeffs[static_cast<size_t>(bi)] =
            F4.coeffs[static_cast<size_t>(bi)];
        worst_gram = std::max(
            worst_gram,
            max_abs_value(sub(apply_zonal_projector(f4, m), synthesize(sel))) /
                scale4);
    }

    // Spectral eigenvalues vs the independent two-point-kernel route.
    const double kc = kernel_sphere_constant(ctx.params);
    double worst_kernel = 0.0;
    for (int j = 0; j <= 4; ++j)
        for (int k = 0; j + k <= 4; ++k)
            worst_kernel = std::max(
                worst_kernel,
                rel(oracle::inverse_eigenvalue_kernel_route(ctx.params.s, j, k, kc),
                    1.0 / eigenvalue(ctx.params, {j, k})));

    // Analyze/synthesize round trip on a band-10 field.
    const SpectralFunction F10 = random_band_field(ctx, rng, 10, false);
    const SpectralFunction back = analyze(ctx.table, synthesize(F10));
    double worst_rt = 0.0;
    for (size_t b = 0; b < F10.coeffs.size(); ++b)
        worst_rt = std::max(worst_rt,
                            (F10.coeffs[b] - back.coeffs[b]).cwiseAbs().maxCoeff());
    worst_rt /= std::sqrt(F10.coeff_energy());

    const bool pass = worst_moment <= 1e-12 && worst_proj <= 1e-9 &&
                      worst_gram <= 1e-9 && worst_kernel <= 1e-6 &&
                      worst_rt <= 1e-10;
    return {pass,
            fmt("moments to degree 24: %.2e (tol 1e-12); projectors %.2e "
                "(tol 1e-9); zonal-vs-Gram %.2e (tol 1e-9); kernel-route "
                "eigenvalues j+k<=4: %.2e (tol 1e-6); round trip %.2e "
                "(tol 1e-10)",
                worst_moment, worst_proj, worst_gram, worst_kernel, worst_rt)};
}

// ---------------------------------------------------------------------------
// 9. Lebesgue-family stability probes (property-based; no sharp constants
//    claimed): normalized deficit two-sidedly comparable to the relative
//    manifold distance along 1 + eps*phi; distance <= |f|_p always; the
//    second-variation functional is negative on normal perturbations.

Outcome criterion_probes(const ExperimentContext& ctx) {
    const GridFunction phi11 = real_mode(ctx, {1, 1});
    double ratio_min = 1e300, ratio_max = 0.0;
    bool dist_bounded = true;
    for (const double eps : {0.03, 0.06, 0.12}) {
        const GridFunction f = add_constant(scale(phi11, eps), 1.0);
        const double nd = hls_deficit(ctx.table, f, ctx.params).normalized *
                          sharp_constant(ctx.params);
        const DistanceResult dr = distance_hls(ctx.table, f, ctx.params);
        const double fp = lp_norm(f, ctx.params.p);
        dist_bounded = dist_bounded && dr.distance <= fp * (1.0 + 1e-9);
        const double r = nd / std::pow(dr.distance / fp, 2.0);
        ratio_min = std::min(ratio_min, r);
        ratio_max = std::max(ratio_max, r);
    }
    const bool window = ratio_min > 1e-3 && ratio_max < 1e3 &&
                        ratio_max / ratio_min <= 4.0;

    std::mt19937_64 rng(ctx.config.seed + 9);
    for (int i = 0; i < 2; ++i) {
        const GridFunction f = random_positive_field(ctx, rng);
        const DistanceResult dr = distance_hls(ctx.table, f, ctx.params);
        dist_bounded = dist_bounded &&
                       dr.distance <= lp_norm(f, ctx.params.p) * (1.0 + 1e-9);
    }

    // The second-variation functional acts on the perturbation direction
    // itself (mean-zero, orthogonal to the manifold tangent at constants).
    bool negative = true;
    double worst_phi = -1e300;
    for (const ModeIndex m : {ModeIndex{1, 1}, ModeIndex{2, 1}}) {
        const double v = christ_phi(ctx.table, real_mode(ctx, m), ctx.params);
        worst_phi = std::max(worst_phi, v);
        negative = negative && v < 0.0;
    }

    return {window && dist_bounded && negative,
            fmt("deficit/(d_p/|f|_p)^2 in [%.3f, %.3f] along 1+eps*phi "
                "(window spread %.2f <= 4); distance <= |f|_p on all probes; "
                "second variation < 0 on normal modes (max %.2e); sharp "
                "stability constants deliberately not claimed",
                ratio_min, ratio_max, ratio_max / ratio_min, worst_phi)};
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        std::function<Outcome()> run;
    };

    const ExperimentContext ctx = make_context(ExperimentConfig{});

    const std::vector<Entry> entries = {
        {"closed-form constant identities", [] { return criterion_constants(); }},
        {"s=2 golden values vs 200-bit oracle", [] { return criterion_goldens(); }},
        {"deficits vanish on chart members", [&] { return criterion_members(ctx); }},
        {"quadratic local stability ratios", [&] { return criterion_local_stability(ctx); }},
        {"dual remainder identities and bounds", [&] { return criterion_dual(ctx); }},
        {"limiting inequality and bridges", [&] { return criterion_limit(ctx); }},
        {"conformal invariance audit", [&] { return criterion_invariance(ctx); }},
        {"quadrature, projector, kernel infrastructure", [&] { return criterion_infrastructure(ctx); }},
        {"stability probes for the Lebesgue family", [&] { return criterion_probes(ctx); }},
    };

    bool all = true;
    for (size_t i = 0; i < entries.size(); ++i) {
        Outcome o;
        try {
            o = entries[i].run();
        } catch (const std::exception& e) {
            o = {false, fmt("exception: %s", e.what())};
        }
        all = all && o.pass;
        std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                    entries[i].name, o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
