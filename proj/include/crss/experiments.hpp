#pragma once

// Reproducible numerical experiments over the toolkit: local stability scans
// with Richardson extrapolation, conformal-invariance audits over random
// generator words, and sample-based verification of the deficit
// inequalities.  Every runner consumes an ExperimentConfig, drives a named
// mt19937_64 stream, and emits a deterministic JSON report (plus an optional
// CSV flat file); rerunning with the same config and build reproduces the
// report byte for byte.

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "crss/conformal.hpp"
#include "crss/constants.hpp"
#include "crss/grid.hpp"
#include "crss/harmonics.hpp"

namespace crss {

struct ExperimentConfig {
    int n = 1;
    double s = 2.0;
    int grid_band = 12;   // quadrature resolution
    int basis_band = 10;  // spectral truncation (<= grid_band)
    std::uint64_t seed = 20240817;
    int samples = 20;
    std::vector<double> epsilons = {3e-2, 1e-2, 3e-3, 1e-3};
    std::vector<ModeIndex> modes = {{2, 0}, {1, 1}, {3, 0}, {2, 1}};
    double tolerance = 1e-7;
    double max_xi = 0.5;      // chart radius for sampled extremizers
    double amplitude = 0.2;   // relative size of random perturbations
    int field_band = 4;       // band limit of random fields
    int word_count = 20;      // conformal words per audit
    int max_word_len = 4;
    double word_r_eff_cap = 0.25;  // keeps transported fields resolvable at basis_band
    std::string output;            // JSON report path ("" = stdout only)
    std::string csv_output;        // CSV path ("" = none)
};

nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::ordered_json& j);
ExperimentConfig load_config(const std::string& path);  // IoError on failure

// Grid + basis + parameters bundle shared by the runners.
struct ExperimentContext {
    ExperimentConfig config;
    InequalityParams params;
    std::shared_ptr<const SphereGrid> grid;
    std::shared_ptr<const BasisTable> table;
};
ExperimentContext make_context(const ExperimentConfig& config);

// --- seeded draws (all deterministic given the rng state) ---

// Real band-limited field with iid standard-normal coefficients over the
// blocks with 0 < j + k <= band_limit (pluriharmonic_only restricts to
// (j,0)/(0,j)); conjugate-mirror symmetry is enforced exactly.
SpectralFunction random_band_field(const ExperimentContext& ctx, std::mt19937_64& rng,
                                   int band_limit, bool pluriharmonic_only);

// 1 + amplitude * fhat / max|fhat|  (positive, band-limited).
GridFunction random_positive_field(const ExperimentContext& ctx, std::mt19937_64& rng);

// Zero-mean pluriharmonic field scaled to sup-norm `amplitude`.
GridFunction random_pluriharmonic_field(const ExperimentContext& ctx,
                                        std::mt19937_64& rng, double amplitude);

// Chart point with |xi| <= max_xi (radius biased toward the boundary).
Eigen::Vector2cd random_chart_point(const ExperimentContext& ctx, std::mt19937_64& rng);

// Word of 1..max_word_len generators drawn from: exact unitaries, Heisenberg
// translations with homogeneous norm <= 0.4, dilations delta in [0.8, 1.25].
// Words are redrawn until the Jacobian dynamic-range guard r_eff <=
// word_r_eff_cap holds (ResourceLimit after 200 attempts).
ConformalMap random_word(const ExperimentContext& ctx, std::mt19937_64& rng);

// --- extrapolation helper ---

struct ExtrapolationResult {
    double value = 0.0;  // first-order Richardson limit from the last two points
    double order = 0.0;  // least-squares slope of log|r_i - value| vs log eps_i
};
ExtrapolationResult richardson_extrapolate(const std::vector<double>& eps,
                                           const std::vector<double>& values);

// --- runners ---

struct ScanResult {
    nlohmann::ordered_json report;
    std::string csv;  // flat table mirroring the report rows
    bool pass = false;
};

// Deficit ratios of 1 + eps*phi per mode -> 1 - lambda_{1,0}/lambda_mode.
ScanResult run_fs_stability_scan(const ExperimentContext& ctx);

// Remainder-pair ratio i1/(C i2) along the second-level perturbation
// -> (Q+4+s)/(Q+4-s); also checks the square identity on random fields.
ScanResult run_dual_ratio_scan(const ExperimentContext& ctx);

// Exponential-limit bridges: deficit/dual-rhs mode ratios, the scaled
// comparison functional along s -> Q, and the eigenvalue bridge.
ScanResult run_limit_case_scan(const ExperimentContext& ctx);

// Conformal-invariance audit over random words: L^q norm, quadratic norm,
// deficits, exponential integral, and pointwise kernel covariance.
ScanResult run_invariance_audit(const ExperimentContext& ctx);

// Sample-based verification of one inequality family:
// which in {"fs", "hls", "bo", "loghls"}.
ScanResult run_verify(const ExperimentContext& ctx, const std::string& which);

// Writes report JSON / CSV to the paths named in the config (no-op for empty
// paths).  IoError on failure.
void write_report(const ScanResult& result, const ExperimentConfig& config);

// `git describe --always --dirty` of the working tree, or "unknown".
std::string git_revision();

}  // namespace crss
