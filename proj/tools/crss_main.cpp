// crss — command-line front end for the CR-sphere stability toolkit.
//
// Exit codes: 0 = all tolerances met, 2 = a tolerance was violated,
// 1 = usage or runtime error.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "crss/conformal.hpp"
#include "crss/constants.hpp"
#include "crss/errors.hpp"
#include "crss/experiments.hpp"
#include "crss/functionals.hpp"
#include "crss/grid.hpp"
#include "crss/harmonics.hpp"
#include "crss/heisenberg.hpp"
#include "crss/manifold.hpp"

namespace {

int run_constants(int n, double s) {
    using crss::make_params;
    const crss::InequalityParams params = make_params(n, s);
    const crss::TheoremConstants tc = crss::theorem_constants(params);
    nlohmann::ordered_json j;
    j["n"] = params.n;
    j["s"] = params.s;
    j["Q"] = params.Q;
    j["q"] = params.q;
    j["p"] = params.p;
    j["sharp_constant"] = crss::sharp_constant(params);
    j["sphere_measure"] = crss::sphere_measure(params.n);
    j["lambda_00"] = crss::eigenvalue(params, {0, 0});
    j["lambda_10"] = crss::eigenvalue(params, {1, 0});
    j["lambda_11"] = crss::eigenvalue(params, {1, 1});
    j["lambda_20"] = crss::eigenvalue(params, {2, 0});
    j["fs_local"] = tc.fs_local;
    j["dual_ratio"] = tc.dual_ratio;
    j["bo_ratio"] = tc.bo_ratio;
    j["spectral_gap"] = tc.spectral_gap;
    j["kernel_group_constant"] = crss::kernel_group_constant(params);
    j["kernel_sphere_constant"] = crss::kernel_sphere_constant(params);
    std::cout << j.dump(2) << '\n';
    return 0;
}

int run_eigen(int n, double s, int jmax) {
    const crss::InequalityParams params = crss::make_params(n, s);
    nlohmann::ordered_json j;
    j["n"] = params.n;
    j["s"] = params.s;
    j["jmax"] = jmax;
    nlohmann::ordered_json modes = nlohmann::ordered_json::array();
    for (int a = 0; a <= jmax; ++a) {
        for (int b = 0; b <= jmax; ++b) {
            const crss::ModeIndex m{a, b};
            nlohmann::ordered_json row;
            row["j"] = a;
            row["k"] = b;
            row["eigenvalue"] = crss::eigenvalue(params, m);
            row["modified"] = crss::modified_eigenvalue(params, m);
            row["dim"] = crss::subspace_dimension(params.n, m);
            modes.push_back(row);
        }
    }
    j["modes"] = modes;
    nlohmann::ordered_json limit = nlohmann::ordered_json::array();
    for (int a = 1; a <= jmax; ++a) {
        nlohmann::ordered_json row;
        row["j"] = a;
        row["value"] = crss::eigenvalue_limit(params.n, a);
        limit.push_back(row);
    }
    j["limit"] = limit;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int emit_scan(const crss::ScanResult& result, const crss::ExperimentConfig& config) {
    crss::write_report(result, config);
    std::cout << result.report.dump(2) << '\n';
    return result.pass ? 0 : 2;
}

int run_distance(const std::string& input, const std::string& metric, int n,
                 double s, int basis_band) {
    const crss::GridFunction f = crss::read_grid_function_csv(input);
    const crss::InequalityParams params = crss::make_params(n, s);
    if (basis_band <= 0) basis_band = std::min(10, f.grid->band);
    const auto table = crss::build_basis(f.grid, basis_band);
    const crss::DistanceResult r = metric == "sobolev"
                                       ? crss::distance_fs(table, f, params)
                                       : crss::distance_hls(table, f, params);
    nlohmann::ordered_json j;
    j["input"] = input;
    j["metric"] = metric;
    j["n"] = n;
    j["s"] = s;
    j["basis_band"] = basis_band;
    j["distance"] = r.distance;
    j["c"] = r.c;
    j["xi"] = nlohmann::ordered_json::array(
        {r.xi(0).real(), r.xi(0).imag(), r.xi(1).real(), r.xi(1).imag()});
    j["objective"] = r.objective;
    j["gradient_norm"] = r.gradient_norm;
    j["zero_limit"] = r.zero_limit;
    j["evaluations"] = r.evaluations;
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CR-sphere stability toolkit"};
    app.require_subcommand(1);

    int n = 1;
    double s = 2.0;
    int jmax = 6;
    std::string config_path;
    std::string which;
    std::string input_path;
    std::string metric;
    int basis_band = 0;
    std::uint64_t seed = crss::ExperimentConfig{}.seed;
    bool seed_given = false;

    CLI::App* c_constants = app.add_subcommand("constants", "Print theorem constants");
    c_constants->add_option("--n", n, "Heisenberg dimension n");
    c_constants->add_option("--s", s, "Operator order s in (0, Q)");

    CLI::App* c_eigen = app.add_subcommand("eigen", "Print eigenvalue tables");
    c_eigen->add_option("--n", n, "Heisenberg dimension n");
    c_eigen->add_option("--s", s, "Operator order s in (0, Q)");
    c_eigen->add_option("--jmax", jmax, "Largest mode index");

    CLI::App* c_verify = app.add_subcommand("verify", "Equality / inequality checks");
    c_verify->add_option("target", which, "One of fs, hls, bo, loghls")
        ->required()
        ->check(CLI::IsMember({"fs", "hls", "bo", "loghls"}));
    c_verify->add_option("--config", config_path, "Experiment config JSON")->required();

    CLI::App* c_scan = app.add_subcommand("scan", "Limit-ratio scans");
    c_scan->add_option("target", which, "One of fs-stability, dual-ratio, limit-case")
        ->required()
        ->check(CLI::IsMember({"fs-stability", "dual-ratio", "limit-case"}));
    c_scan->add_option("--config", config_path, "Experiment config JSON")->required();

    CLI::App* c_distance = app.add_subcommand("distance", "Distance to the extremizer manifold");
    c_distance->add_option("--input", input_path, "Grid-function CSV")->required();
    c_distance->add_option("--metric", metric, "sobolev or lp")
        ->required()
        ->check(CLI::IsMember({"sobolev", "lp"}));
    c_distance->add_option("--n", n, "Heisenberg dimension n");
    c_distance->add_option("--s", s, "Operator order s in (0, Q)");
    c_distance->add_option("--band", basis_band, "Basis band (default min(10, grid band))");

    CLI::App* c_audit = app.add_subcommand("audit", "Conformal invariance audit");
    c_audit->add_option("target", which, "invariance")
        ->required()
        ->check(CLI::IsMember({"invariance"}));
    c_audit->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) {
        seed_given = true;
    });
    c_audit->add_option("--config", config_path, "Experiment config JSON (optional)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (c_constants->parsed()) return run_constants(n, s);
        if (c_eigen->parsed()) return run_eigen(n, s, jmax);
        if (c_verify->parsed()) {
            const crss::ExperimentConfig config = crss::load_config(config_path);
            const crss::ExperimentContext ctx = crss::make_context(config);
            return emit_scan(crss::run_verify(ctx, which), config);
        }
        if (c_scan->parsed()) {
            const crss::ExperimentConfig config = crss::load_config(config_path);
            const crss::ExperimentContext ctx = crss::make_context(config);
            if (which == "fs-stability")
                return emit_scan(crss::run_fs_stability_scan(ctx), config);
            if (which == "dual-ratio")
                return emit_scan(crss::run_dual_ratio_scan(ctx), config);
            return emit_scan(crss::run_limit_case_scan(ctx), config);
        }
        if (c_distance->parsed())
            return run_distance(input_path, metric, n, s, basis_band);
        if (c_audit->parsed()) {
            crss::ExperimentConfig config;
            if (!config_path.empty()) config = crss::load_config(config_path);
            if (seed_given || config_path.empty()) config.seed = seed;
            const crss::ExperimentContext ctx = crss::make_context(config);
            return emit_scan(crss::run_invariance_audit(ctx), config);
        }
    } catch (const crss::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
