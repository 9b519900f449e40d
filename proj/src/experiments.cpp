#include "crss/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "crss/errors.hpp"
#include "crss/functionals.hpp"
#include "crss/heisenberg.hpp"

namespace crss {
namespace {

std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

nlohmann::ordered_json modes_to_json(const std::vector<ModeIndex>& modes) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& m : modes)
        arr.push_back(nlohmann::ordered_json::array({m.j, m.k}));
    return arr;
}

nlohmann::ordered_json base_report(const std::string& name,
                                   const ExperimentContext& ctx) {
    nlohmann::ordered_json r;
    r["experiment"] = name;
    nlohmann::ordered_json prov;
    prov["revision"] = git_revision();
    prov["rng"] = "mt19937_64";
    prov["seed"] = ctx.config.seed;
    r["provenance"] = prov;
    r["config"] = config_to_json(ctx.config);
    return r;
}

// Real unit-L^2 representative of a block: the first basis function on the
// diagonal, sqrt(2) Re(first basis function) otherwise (this spans the
// (j,k) + (k,j) pair through the conjugate-mirror symmetry).
GridFunction mode_phi(const ExperimentContext& ctx, ModeIndex mode) {
    GridFunction e = basis_function(ctx.table, mode, 0);
    if (mode.j == mode.k) return e;
    GridFunction out;
    out.grid = e.grid;
    Eigen::VectorXd re = e.values.real();
    out.values = (std::sqrt(2.0) * re).cast<Complex>();
    out.is_real = true;
    return out;
}

double rel_gap(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

GridFunction values_to_real_fn(const std::shared_ptr<const SphereGrid>& grid,
                               const Eigen::VectorXd& values) {
    GridFunction f;
    f.grid = grid;
    f.values = values.cast<Complex>();
    f.is_real = true;
    return f;
}

}  // namespace

nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["n"] = c.n;
    j["s"] = c.s;
    j["grid_band"] = c.grid_band;
    j["basis_band"] = c.basis_band;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["epsilons"] = c.epsilons;
    j["modes"] = modes_to_json(c.modes);
    j["tolerance"] = c.tolerance;
    j["max_xi"] = c.max_xi;
    j["amplitude"] = c.amplitude;
    j["field_band"] = c.field_band;
    j["word_count"] = c.word_count;
    j["max_word_len"] = c.max_word_len;
    j["word_r_eff_cap"] = c.word_r_eff_cap;
    j["output"] = c.output;
    j["csv_output"] = c.csv_output;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw IoError("config: expected a JSON object");
    ExperimentConfig c;
    auto num = [&](const char* key, double& slot) {
        if (j.contains(key)) {
            if (!j[key].is_number()) throw IoError(std::string("config: ") + key + " must be a number");
            slot = j[key].get<double>();
        }
    };
    auto integer = [&](const char* key, int& slot) {
        if (j.contains(key)) {
            if (!j[key].is_number_integer())
                throw IoError(std::string("config: ") + key + " must be an integer");
            slot = j[key].get<int>();
        }
    };
    integer("n", c.n);
    num("s", c.s);
    integer("grid_band", c.grid_band);
    integer("basis_band", c.basis_band);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
            throw IoError("config: seed must be a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    integer("samples", c.samples);
    if (j.contains("epsilons")) {
        if (!j["epsilons"].is_array()) throw IoError("config: epsilons must be an array");
        c.epsilons.clear();
        for (const auto& e : j["epsilons"]) {
            if (!e.is_number()) throw IoError("config: epsilons must be numbers");
            c.epsilons.push_back(e.get<double>());
        }
    }
    if (j.contains("modes")) {
        if (!j["modes"].is_array()) throw IoError("config: modes must be an array");
        c.modes.clear();
        for (const auto& m : j["modes"]) {
            if (!m.is_array() || m.size() != 2 || !m[0].is_number_integer() ||
                !m[1].is_number_integer())
                throw IoError("config: each mode must be a [j, k] pair");
            c.modes.push_back({m[0].get<int>(), m[1].get<int>()});
        }
    }
    num("tolerance", c.tolerance);
    num("max_xi", c.max_xi);
    num("amplitude", c.amplitude);
    integer("field_band", c.field_band);
    integer("word_count", c.word_count);
    integer("max_word_len", c.max_word_len);
    num("word_r_eff_cap", c.word_r_eff_cap);
    if (j.contains("output")) {
        if (!j["output"].is_string()) throw IoError("config: output must be a string");
        c.output = j["output"].get<std::string>();
    }
    if (j.contains("csv_output")) {
        if (!j["csv_output"].is_string())
            throw IoError("config: csv_output must be a string");
        c.csv_output = j["csv_output"].get<std::string>();
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file: " + path);
    nlohmann::ordered_json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw IoError("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

ExperimentContext make_context(const ExperimentConfig& config) {
    ExperimentContext ctx;
    ctx.config = config;
    ctx.params = make_params(config.n, config.s);
    ctx.grid = build_grid(config.grid_band);
    ctx.table = build_basis(ctx.grid, config.basis_band);
    return ctx;
}

SpectralFunction random_band_field(const ExperimentContext& ctx, std::mt19937_64& rng,
                                   int band_limit, bool pluriharmonic_only) {
    SpectralFunction F = spectral_zero(ctx.table);
    std::normal_distribution<double> nd(0.0, 1.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (size_t bi = 0; bi < ctx.table->blocks.size(); ++bi) {
        const auto& blk = ctx.table->blocks[bi];
        const ModeIndex m = blk.mode;
        if (m.j + m.k == 0 || m.j + m.k > band_limit) continue;
        if (pluriharmonic_only && m.j >= 1 && m.k >= 1) continue;
        if (m.j > m.k) {
            const int mi = ctx.table->block_index({m.k, m.j});
            for (int i = 0; i < blk.dim; ++i) {
                const Complex c(nd(rng) * inv_sqrt2, nd(rng) * inv_sqrt2);
                F.coeffs[bi](i) = c;
                F.coeffs[static_cast<size_t>(mi)](i) = std::conj(c);
            }
        } else if (m.j == m.k) {
            for (int i = 0; i < blk.dim; ++i) F.coeffs[bi](i) = nd(rng);
        }
    }
    F.is_real = true;
    F.l2_sq = F.coeff_energy();
    F.tail_energy = 0.0;
    return F;
}

GridFunction random_positive_field(const ExperimentContext& ctx, std::mt19937_64& rng) {
    const SpectralFunction F =
        random_band_field(ctx, rng, ctx.config.field_band, false);
    GridFunction fh = synthesize(F);
    const double m = max_abs_value(fh);
    if (m == 0.0) throw ZeroFunction("random_positive_field: degenerate draw");
    return add_constant(scale(fh, ctx.config.amplitude / m), 1.0);
}

GridFunction random_pluriharmonic_field(const ExperimentContext& ctx,
                                        std::mt19937_64& rng, double amplitude) {
    const SpectralFunction F =
        random_band_field(ctx, rng, ctx.config.field_band, true);
    GridFunction fh = synthesize(F);
    const double m = max_abs_value(fh);
    if (m == 0.0) throw ZeroFunction("random_pluriharmonic_field: degenerate draw");
    return scale(fh, amplitude / m);
}

Eigen::Vector2cd random_chart_point(const ExperimentContext& ctx,
                                    std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Eigen::Vector4d d;
    for (int i = 0; i < 4; ++i) d(i) = nd(rng);
    if (d.norm() < 1e-12) d = Eigen::Vector4d::UnitX();
    d.normalize();
    const double r = ctx.config.max_xi * std::pow(u01(rng), 0.25);
    return Eigen::Vector2cd(r * Complex(d(0), d(1)), r * Complex(d(2), d(3)));
}

ConformalMap random_word(const ExperimentContext& ctx, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double kTransCap = 0.4;
    for (int attempt = 0; attempt < 200; ++attempt) {
        ConformalMap map;
        const int len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                 ctx.config.max_word_len));
        for (int gi = 0; gi < len; ++gi) {
            const int type = static_cast<int>(rng() % 3);
            if (type == 0) {
                Complex a, b;
                double nrm = 0.0;
                do {
                    a = Complex(nd(rng), nd(rng));
                    b = Complex(nd(rng), nd(rng));
                    nrm = std::sqrt(std::norm(a) + std::norm(b));
                } while (nrm < 1e-8);
                const Complex phase = std::polar(1.0, 2.0 * M_PI * u01(rng));
                Eigen::Matrix2cd u;
                u << a / nrm, -std::conj(b) / nrm, b / nrm, std::conj(a) / nrm;
                map.word.push_back(make_rotation(phase * u));
            } else if (type == 1) {
                Complex z;
                double t = 0.0;
                do {
                    const double r = kTransCap * std::sqrt(u01(rng));
                    z = std::polar(r, 2.0 * M_PI * u01(rng));
                    t = (2.0 * u01(rng) - 1.0) * kTransCap * kTransCap;
                } while (std::pow(std::pow(std::abs(z), 4) + t * t, 0.25) > kTransCap);
                Eigen::VectorXcd zv(1);
                zv(0) = z;
                map.word.push_back(make_translation(make_group_point(zv, t)));
            } else {
                const double lo = std::log(0.8), hi = std::log(1.25);
                map.word.push_back(make_dilation(std::exp(lo + u01(rng) * (hi - lo))));
            }
        }
        if (map_diagnostics(map, *ctx.grid).r_eff <= ctx.config.word_r_eff_cap)
            return map;
    }
    throw ResourceLimit("random_word: could not satisfy the Jacobian guard in 200 draws");
}

ExtrapolationResult richardson_extrapolate(const std::vector<double>& eps,
                                           const std::vector<double>& values) {
    if (eps.size() != values.size() || eps.size() < 2)
        throw PreconditionViolation("richardson_extrapolate: need matching lists, >= 2 points");
    const size_t m = eps.size();
    const double e1 = eps[m - 2], e2 = eps[m - 1];
    const double r1 = values[m - 2], r2 = values[m - 1];
    if (e1 == e2) throw PreconditionViolation("richardson_extrapolate: repeated eps");
    ExtrapolationResult out;
    out.value = (r2 * e1 - r1 * e2) / (e1 - e2);

    // Order estimate: slope of log|r_i - value| against log eps_i on the
    // points not used by the extrapolation step.
    std::vector<double> xs, ys;
    for (size_t i = 0; i + 1 < m; ++i) {
        const double d = std::abs(values[i] - out.value);
        if (d > 1e-15 * (1.0 + std::abs(out.value))) {
            xs.push_back(std::log(eps[i]));
            ys.push_back(std::log(d));
        }
    }
    if (xs.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= static_cast<double>(xs.size());
        my /= static_cast<double>(xs.size());
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) {
            num += (xs[i] - mx) * (ys[i] - my);
            den += (xs[i] - mx) * (xs[i] - mx);
        }
        out.order = den > 0.0 ? num / den : 0.0;
    }
    return out;
}

ScanResult run_fs_stability_scan(const ExperimentContext& ctx) {
    ScanResult out;
    out.report = base_report("fs-stability", ctx);
    std::ostringstream csv;
    csv << "mode_j,mode_k,eps,ratio,extrapolated,expected,rel_error,order\n";
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    bool pass = true;
    const double lam1 = eigenvalue(ctx.params, {1, 0});
    for (const ModeIndex mode : ctx.config.modes) {
        if (ctx.table->block_index(mode) < 0)
            throw DomainViolation("fs-stability scan: mode outside basis band");
        const GridFunction phi = mode_phi(ctx, mode);
        const double lam = eigenvalue(ctx.params, mode);
        const double expected = 1.0 - lam1 / lam;
        std::vector<double> ratios;
        for (const double eps : ctx.config.epsilons) {
            const GridFunction f = add_constant(scale(phi, eps), 1.0);
            const double deficit = fs_deficit(ctx.table, f, ctx.params).deficit;
            const double ratio = deficit / (eps * eps * lam);
            ratios.push_back(ratio);
            if (!(ratio <= 1.0 + 1e-3)) pass = false;
        }
        const ExtrapolationResult ex =
            richardson_extrapolate(ctx.config.epsilons, ratios);
        const double rel = std::abs(ex.value / expected - 1.0);
        if (!(rel <= 0.01)) pass = false;
        nlohmann::ordered_json row;
        row["mode"] = nlohmann::ordered_json::array({mode.j, mode.k});
        row["eps"] = ctx.config.epsilons;
        row["ratios"] = ratios;
        row["extrapolated"] = ex.value;
        row["expected"] = expected;
        row["rel_error"] = rel;
        row["order"] = ex.order;
        rows.push_back(row);
        for (size_t i = 0; i < ratios.size(); ++i)
            csv << mode.j << ',' << mode.k << ',' << g17(ctx.config.epsilons[i]) << ','
                << g17(ratios[i]) << ',' << g17(ex.value) << ',' << g17(expected)
                << ',' << g17(rel) << ',' << g17(ex.order) << '\n';
    }
    out.report["results"] = rows;
    out.report["pass"] = pass;
    out.csv = csv.str();
    out.pass = pass;
    return out;
}

ScanResult run_dual_ratio_scan(const ExperimentContext& ctx) {
    ScanResult out;
    out.report = base_report("dual-ratio", ctx);
    std::ostringstream csv;
    csv << "eps,i1,i2,ratio,extrapolated,expected,rel_error,order\n";
    bool pass = true;

    const GridFunction phi = mode_phi(ctx, {2, 0});
    const double expected =
        (ctx.params.Q + 4.0 + ctx.params.s) / (ctx.params.Q + 4.0 - ctx.params.s);
    std::vector<double> ratios;
    nlohmann::ordered_json ratio_rows = nlohmann::ordered_json::array();
    std::vector<DualRemainderPair> pairs;
    for (const double eps : ctx.config.epsilons) {
        const GridFunction f = add_constant(scale(phi, eps), 1.0);
        const DualRemainderPair pr = dual_remainder_pair(ctx.table, f, ctx.params);
        pairs.push_back(pr);
        ratios.push_back(pr.ratio);
        if (!(pr.ratio >= 1.0 - 1e-9)) pass = false;  // comparison inequality
    }
    const ExtrapolationResult ex = richardson_extrapolate(ctx.config.epsilons, ratios);
    const double rel = std::abs(ex.value / expected - 1.0);
    if (!(rel <= 0.01)) pass = false;
    for (size_t i = 0; i < ratios.size(); ++i) {
        nlohmann::ordered_json row;
        row["eps"] = ctx.config.epsilons[i];
        row["i1"] = pairs[i].i1;
        row["i2"] = pairs[i].i2;
        row["ratio"] = ratios[i];
        ratio_rows.push_back(row);
        csv << g17(ctx.config.epsilons[i]) << ',' << g17(pairs[i].i1) << ','
            << g17(pairs[i].i2) << ',' << g17(ratios[i]) << ',' << g17(ex.value)
            << ',' << g17(expected) << ',' << g17(rel) << ',' << g17(ex.order) << '\n';
    }
    out.report["results"] = ratio_rows;
    nlohmann::ordered_json summary;
    summary["extrapolated"] = ex.value;
    summary["expected"] = expected;
    summary["rel_error"] = rel;
    summary["order"] = ex.order;
    out.report["summary"] = summary;

    // Square identity on random positive fields.
    std::mt19937_64 rng(ctx.config.seed);
    nlohmann::ordered_json sq_rows = nlohmann::ordered_json::array();
    for (int i = 0; i < ctx.config.samples; ++i) {
        const GridFunction f = random_positive_field(ctx, rng);
        const SquareIdentity si = square_identity(ctx.table, f, ctx.params);
        const bool ok = si.mismatch <= 1e-8 * std::max(1.0, si.residual_sum);
        if (!ok) pass = false;
        nlohmann::ordered_json row;
        row["sample"] = i;
        row["residual_sum"] = si.residual_sum;
        row["difference"] = si.difference;
        row["mismatch"] = si.mismatch;
        row["pass"] = ok;
        sq_rows.push_back(row);
    }
    out.report["square_identity"] = sq_rows;
    out.report["pass"] = pass;
    out.csv = csv.str();
    out.pass = pass;
    return out;
}

ScanResult run_limit_case_scan(const ExperimentContext& ctx) {
    ScanResult out;
    out.report = base_report("limit-case", ctx);
    std::ostringstream csv;
    csv << "section,index,eps,value,expected,rel_error,order\n";
    bool pass = true;
    const double q_hom = ctx.params.Q;

    // a) deficit / dual-rhs mode ratios -> lambda'_j / 2.
    nlohmann::ordered_json mode_rows = nlohmann::ordered_json::array();
    for (const int j : {2, 3}) {
        const GridFunction phi = mode_phi(ctx, {j, 0});
        const double expected = eigenvalue_limit(ctx.params.n, j) / 2.0;
        std::vector<double> ratios;
        for (const double eps : ctx.config.epsilons) {
            const GridFunction f = scale(phi, eps);
            const double num = bo_deficit(ctx.table, f).deficit;
            const double den = bo_dual_rhs(ctx.table, f);
            ratios.push_back(num / den);
        }
        const ExtrapolationResult ex =
            richardson_extrapolate(ctx.config.epsilons, ratios);
        const double rel = std::abs(ex.value / expected - 1.0);
        if (!(rel <= 0.02)) pass = false;
        nlohmann::ordered_json row;
        row["mode_j"] = j;
        row["ratios"] = ratios;
        row["extrapolated"] = ex.value;
        row["expected"] = expected;
        row["rel_error"] = rel;
        row["order"] = ex.order;
        mode_rows.push_back(row);
        for (size_t i = 0; i < ratios.size(); ++i)
            csv << "mode_ratio," << j << ',' << g17(ctx.config.epsilons[i]) << ','
                << g17(ratios[i]) << ',' << g17(expected) << ',' << g17(rel) << ','
                << g17(ex.order) << '\n';
    }
    out.report["mode_ratios"] = mode_rows;

    // b) scaled comparison functional along s -> Q.
    const std::vector<double> lambdas = {0.2, 0.1, 0.05};
    std::mt19937_64 rng(ctx.config.seed);
    const GridFunction f = random_pluriharmonic_field(ctx, rng, 0.5);
    const double target = bo_deficit(ctx.table, f).deficit;
    std::vector<double> errors;
    nlohmann::ordered_json bridge_rows = nlohmann::ordered_json::array();
    for (const double lam : lambdas) {
        const InequalityParams ps = make_params(ctx.params.n, q_hom - lam);
        const GridFunction g = add_constant(scale(f, lam / (2.0 * q_hom)), 1.0);
        const double i_val = bridge_functional(ctx.table, g, ps);
        const double scaled = q_hom * 16.0 * i_val / (lam * lam * lam);
        errors.push_back(scaled - target);
        nlohmann::ordered_json row;
        row["lambda"] = lam;
        row["scaled"] = scaled;
        row["target"] = target;
        row["error"] = scaled - target;
        bridge_rows.push_back(row);
        csv << "bridge,0," << g17(lam) << ',' << g17(scaled) << ',' << g17(target)
            << ',' << g17(std::abs(scaled - target)) << ",0\n";
    }
    std::vector<double> bridge_orders;
    for (size_t i = 0; i + 1 < errors.size(); ++i)
        bridge_orders.push_back(std::log2(std::abs(errors[i]) /
                                          std::max(std::abs(errors[i + 1]), 1e-300)));
    for (const double o : bridge_orders)
        if (!(o >= 0.8)) pass = false;
    out.report["bridge"] = bridge_rows;
    out.report["bridge_orders"] = bridge_orders;

    // c) eigenvalue bridge 4 lambda^mod_{j,0} / (Q - s) -> lambda'_j.
    nlohmann::ordered_json eig_rows = nlohmann::ordered_json::array();
    for (int j = 1; j <= 3; ++j) {
        const double expected = eigenvalue_limit(ctx.params.n, j);
        std::vector<double> errs;
        for (const double lam : lambdas) {
            const InequalityParams ps = make_params(ctx.params.n, q_hom - lam);
            const double v = 4.0 * modified_eigenvalue(ps, {j, 0}) / lam;
            errs.push_back(v - expected);
            csv << "eigen_bridge," << j << ',' << g17(lam) << ',' << g17(v) << ','
                << g17(expected) << ',' << g17(std::abs(v - expected) / expected)
                << ",0\n";
        }
        std::vector<double> orders;
        for (size_t i = 0; i + 1 < errs.size(); ++i)
            orders.push_back(std::log2(std::abs(errs[i]) /
                                       std::max(std::abs(errs[i + 1]), 1e-300)));
        for (const double o : orders)
            if (!(o >= 0.8)) pass = false;
        nlohmann::ordered_json row;
        row["mode_j"] = j;
        row["errors"] = errs;
        row["orders"] = orders;
        eig_rows.push_back(row);
    }
    out.report["eigen_bridge"] = eig_rows;

    out.report["pass"] = pass;
    out.csv = csv.str();
    out.pass = pass;
    return out;
}

ScanResult run_invariance_audit(const ExperimentContext& ctx) {
    ScanResult out;
    out.report = base_report("invariance-audit", ctx);
    std::ostringstream csv;
    csv << "word,check,reference,transformed,rel_error\n";
    bool pass = true;
    constexpr double kTol = 1e-5;
    constexpr double kKernelTol = 1e-8;

    std::mt19937_64 rng(ctx.config.seed);
    const GridFunction f = random_positive_field(ctx, rng);
    const SpectralFunction F = analyze(ctx.table, f);
    const SphereGrid& g = *ctx.grid;
    const int N = g.nodes();

    const double ref_q = lp_norm(f, ctx.params.q);
    const double ref_sob = sobolev_norm_sq(F, ctx.params);
    const double ref_hls = hls_deficit(ctx.table, f, ctx.params).normalized;
    const double ref_exp = mean_integral(exp_fn(f)).real();
    const double c_sharp = sharp_constant(ctx.params);
    const double ref_fsd = ref_sob - c_sharp * ref_q * ref_q;

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int w = 0; w < ctx.config.word_count; ++w) {
        const ConformalMap map = random_word(ctx, rng);

        std::vector<SpherePoint> pts;
        pts.reserve(static_cast<size_t>(N));
        Eigen::VectorXd jac(N);
        for (int i = 0; i < N; ++i) {
            auto [p, jv] = apply_with_jacobian(map, g.point(i));
            pts.push_back(std::move(p));
            jac(i) = jv;
        }
        const Eigen::VectorXcd vals = evaluate_at(F, pts);
        const Eigen::VectorXd re_vals = vals.real();

        Eigen::VectorXd hq(N), hp(N), hlog(N);
        for (int i = 0; i < N; ++i) {
            hq(i) = re_vals(i) * std::pow(jac(i), 1.0 / ctx.params.q);
            hp(i) = re_vals(i) * std::pow(jac(i), 1.0 / ctx.params.p);
            hlog(i) = re_vals(i) + std::log(jac(i));
        }
        const GridFunction fq = values_to_real_fn(ctx.grid, hq);
        const GridFunction fp = values_to_real_fn(ctx.grid, hp);
        const GridFunction flog = values_to_real_fn(ctx.grid, hlog);

        const double got_q = lp_norm(fq, ctx.params.q);
        const SpectralFunction Fq = analyze(ctx.table, fq);
        const double got_sob = sobolev_norm_sq(Fq, ctx.params);
        const double got_hls = hls_deficit(ctx.table, fp, ctx.params).normalized;
        const double got_exp = mean_integral(exp_fn(flog)).real();
        const double got_fsd = got_sob - c_sharp * got_q * got_q;

        const double e_q = rel_gap(got_q, ref_q);
        const double e_sob = rel_gap(got_sob, ref_sob);
        const double e_hls = rel_gap(got_hls, ref_hls);
        const double e_exp = rel_gap(got_exp, ref_exp);
        const double e_fsd = rel_gap(got_fsd, ref_fsd);

        double kernel_err = 0.0;
        for (int samp = 0; samp < 5; ++samp) {
            int i = static_cast<int>(rng() % static_cast<std::uint64_t>(N));
            int l = static_cast<int>(rng() % static_cast<std::uint64_t>(N));
            while (l == i) l = static_cast<int>(rng() % static_cast<std::uint64_t>(N));
            const double k_ref = kernel_sphere(ctx.params, g.point(i), g.point(l));
            const double k_map = kernel_sphere(ctx.params, pts[static_cast<size_t>(i)],
                                               pts[static_cast<size_t>(l)]);
            const double cofactor = std::pow(
                jac(i) * jac(l),
                (ctx.params.Q - ctx.params.s) / (2.0 * ctx.params.Q));
            kernel_err = std::max(kernel_err,
                                  std::abs(k_map * cofactor - k_ref) / std::abs(k_ref));
        }

        const bool ok = e_q <= kTol && e_sob <= kTol && e_hls <= kTol &&
                        e_exp <= kTol && e_fsd <= kTol && kernel_err <= kKernelTol;
        if (!ok) pass = false;

        const TransformDiagnostics diag = map_diagnostics(map, g);
        nlohmann::ordered_json row;
        row["word_index"] = w;
        row["word"] = word_to_json(map);
        row["r_eff"] = diag.r_eff;
        row["lq_norm"] = nlohmann::ordered_json{{"reference", ref_q},
                                                {"transformed", got_q},
                                                {"rel_error", e_q}};
        row["sobolev_norm_sq"] = nlohmann::ordered_json{{"reference", ref_sob},
                                                        {"transformed", got_sob},
                                                        {"rel_error", e_sob}};
        row["hls_normalized_deficit"] = nlohmann::ordered_json{
            {"reference", ref_hls}, {"transformed", got_hls}, {"rel_error", e_hls}};
        row["exp_integral"] = nlohmann::ordered_json{{"reference", ref_exp},
                                                     {"transformed", got_exp},
                                                     {"rel_error", e_exp}};
        row["fs_deficit"] = nlohmann::ordered_json{{"reference", ref_fsd},
                                                   {"transformed", got_fsd},
                                                   {"rel_error", e_fsd}};
        row["kernel_covariance_max_rel"] = kernel_err;
        row["pass"] = ok;
        rows.push_back(row);

        csv << w << ",lq_norm," << g17(ref_q) << ',' << g17(got_q) << ',' << g17(e_q) << '\n';
        csv << w << ",sobolev_norm_sq," << g17(ref_sob) << ',' << g17(got_sob) << ','
            << g17(e_sob) << '\n';
        csv << w << ",hls_normalized_deficit," << g17(ref_hls) << ',' << g17(got_hls)
            << ',' << g17(e_hls) << '\n';
        csv << w << ",exp_integral," << g17(ref_exp) << ',' << g17(got_exp) << ','
            << g17(e_exp) << '\n';
        csv << w << ",fs_deficit," << g17(ref_fsd) << ',' << g17(got_fsd) << ','
            << g17(e_fsd) << '\n';
        csv << w << ",kernel_covariance," << g17(0.0) << ',' << g17(kernel_err) << ','
            << g17(kernel_err) << '\n';
    }
    out.report["results"] = rows;
    out.report["tolerance"] = kTol;
    out.report["kernel_tolerance"] = kKernelTol;
    out.report["pass"] = pass;
    out.csv = csv.str();
    out.pass = pass;
    return out;
}

ScanResult run_verify(const ExperimentContext& ctx, const std::string& which) {
    if (which != "fs" && which != "hls" && which != "bo" && which != "loghls")
        throw DomainViolation("verify: unknown target '" + which + "'");
    ScanResult out;
    out.report = base_report("verify-" + which, ctx);
    std::ostringstream csv;
    csv << "kind,sample,value,threshold\n";
    bool pass = true;
    const double tol = ctx.config.tolerance;
    std::mt19937_64 rng(ctx.config.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();

    auto push_row = [&](const char* kind, int i, double value, double threshold,
                        bool ok) {
        nlohmann::ordered_json row;
        row["kind"] = kind;
        row["sample"] = i;
        row["value"] = value;
        row["threshold"] = threshold;
        row["pass"] = ok;
        rows.push_back(row);
        csv << kind << ',' << i << ',' << g17(value) << ',' << g17(threshold) << '\n';
        if (!ok) pass = false;
    };

    if (which == "fs") {
        for (int i = 0; i < ctx.config.samples; ++i) {
            const Eigen::Vector2cd xi = random_chart_point(ctx, rng);
            const double c = 0.5 + u01(rng);
            const GridFunction m = extremizer_fs(ctx.grid, ctx.params, c, xi);
            const FsDeficitBreakdown d = fs_deficit(ctx.table, m, ctx.params);
            const double rel = std::abs(d.deficit) / d.sobolev_norm_sq;
            push_row("extremizer", i, rel, tol, rel <= tol);
        }
        for (int i = 0; i < ctx.config.samples; ++i) {
            const GridFunction f = random_positive_field(ctx, rng);
            const FsDeficitBreakdown d = fs_deficit(ctx.table, f, ctx.params);
            const double rel = d.deficit / d.sobolev_norm_sq;
            push_row("random", i, rel, -tol, rel >= -tol);
        }
    } else if (which == "hls") {
        const double c_sharp = sharp_constant(ctx.params);
        for (int i = 0; i < ctx.config.samples; ++i) {
            const Eigen::Vector2cd xi = random_chart_point(ctx, rng);
            const double c = 0.5 + u01(rng);
            const GridFunction m = extremizer_hls(ctx.grid, ctx.params, c, xi);
            const HlsDeficitBreakdown d = hls_deficit(ctx.table, m, ctx.params);
            const double rel = std::abs(d.normalized) * c_sharp;
            push_row("extremizer", i, rel, tol, rel <= tol);
        }
        for (int i = 0; i < ctx.config.samples; ++i) {
            const GridFunction f = random_positive_field(ctx, rng);
            const HlsDeficitBreakdown d = hls_deficit(ctx.table, f, ctx.params);
            const double rel = d.normalized * c_sharp;
            push_row("random", i, rel, -tol, rel >= -tol);
        }
    } else if (which == "bo") {
        const double member_tol = std::max(10.0 * tol, 1e-6);
        for (int i = 0; i < ctx.config.samples; ++i) {
            const Eigen::Vector2cd xi = random_chart_point(ctx, rng);
            const double c = 0.5 + u01(rng);
            const GridFunction m = extremizer_bo(ctx.grid, c, xi);
            const double d = bo_deficit(ctx.table, m).deficit;
            push_row("extremizer", i, std::abs(d), member_tol,
                     std::abs(d) <= member_tol);
        }
        for (int i = 0; i < ctx.config.samples; ++i) {
            const GridFunction f = random_pluriharmonic_field(ctx, rng, 0.5);
            const double d = bo_deficit(ctx.table, f).deficit;
            const double rhs = bo_dual_rhs(ctx.table, f);
            push_row("random_nonneg", i, d, -1e-8, d >= -1e-8);
            push_row("random_dual", i, d - rhs, -1e-8, d - rhs >= -1e-8);
        }
    } else {  // loghls
        const double member_tol = std::max(10.0 * tol, 1e-6);
        const double q_hom = ctx.params.Q;
        for (int i = 0; i < ctx.config.samples; ++i) {
            const Eigen::Vector2cd xi = random_chart_point(ctx, rng);
            // moment-map density (1-|xi|^2)^{Q/2} |1 - <xi,zeta>|^{-Q}: mean 1.
            GridFunction m;
            m.grid = ctx.grid;
            m.values.resize(ctx.grid->nodes());
            m.is_real = true;
            const double amp = std::pow(1.0 - xi.squaredNorm(), q_hom / 2.0);
            for (int l = 0; l < ctx.grid->nodes(); ++l) {
                const Complex b = 1.0 - xi(0) * std::conj(ctx.grid->zeta1(l)) -
                                  xi(1) * std::conj(ctx.grid->zeta2(l));
                m.values(l) = amp * std::pow(std::norm(b), -q_hom / 2.0);
            }
            // The closed form has mean exactly 1; the quadrature mean is off
            // by the spectral tail beyond the grid band.  Renormalize so the
            // mean-1 precondition sees the discretized density, not the tail.
            m = scale(m, 1.0 / mean_integral(m).real());
            const double d = loghls_deficit(ctx.table, m).deficit;
            push_row("extremizer", i, std::abs(d), member_tol,
                     std::abs(d) <= member_tol);
        }
        for (int i = 0; i < ctx.config.samples; ++i) {
            GridFunction f = random_positive_field(ctx, rng);
            f = scale(f, 1.0 / mean_integral(f).real());
            const double d = loghls_deficit(ctx.table, f).deficit;
            push_row("random", i, d, -tol, d >= -tol);
        }
    }

    out.report["results"] = rows;
    out.report["pass"] = pass;
    out.csv = csv.str();
    out.pass = pass;
    return out;
}

void write_report(const ScanResult& result, const ExperimentConfig& config) {
    if (!config.output.empty()) {
        std::ofstream os(config.output);
        if (!os) throw IoError("cannot write report: " + config.output);
        os << result.report.dump(2) << '\n';
        if (!os) throw IoError("failed while writing report: " + config.output);
    }
    if (!config.csv_output.empty()) {
        std::ofstream os(config.csv_output);
        if (!os) throw IoError("cannot write CSV: " + config.csv_output);
        os << result.csv;
        if (!os) throw IoError("failed while writing CSV: " + config.csv_output);
    }
}

std::string git_revision() {
    FILE* pipe = popen("git describe --always --dirty 2>/dev/null", "r");
    if (!pipe) return "unknown";
    char buf[256];
    std::string out;
    while (fgets(buf, sizeof(buf), pipe) != nullptr) out += buf;
    pclose(pipe);
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
    return out.empty() ? "unknown" : out;
}

}  // namespace crss
