#pragma once

// Bigraded spherical harmonics on S^3.  The space of restrictions of
// polynomials in (zeta, conj zeta) splits into mutually orthogonal blocks
// H_{j,k} (holomorphic degree j, antiholomorphic degree k) of dimension
// j + k + 1.  This module constructs an orthonormal basis of every block
// with j + k <= band by restricting bidegree-(j,k) monomials to the grid,
// projecting out the lower chain H_{j-1,k-1}, H_{j-2,k-2}, ..., and
// orthonormalizing with a rank check; mirrors guarantee the conjugation
// symmetry
//   basis of H_{k,j} = elementwise conjugate of basis of H_{j,k},
// with real-valued basis functions on the diagonal blocks H_{j,j}.
//
// Every basis function also carries its exact polynomial representation in
// the bidegree-(j,k) monomials, so spectral synthesis can be evaluated at
// arbitrary points of the sphere (needed by the conformal actions).

#include <functional>
#include <memory>
#include <vector>

#include "crss/constants.hpp"
#include "crss/grid.hpp"

namespace crss {

// Block modes (j, k) with j + k <= band, listed by total degree and, within
// a degree, by descending j.  This is the canonical block order used by
// BasisTable and SpectralFunction.
std::vector<ModeIndex> all_modes(int band);

struct BasisTable {
    struct Block {
        ModeIndex mode;
        int dim = 0;
        // nodes x dim tabulated values of the orthonormal basis functions.
        Eigen::MatrixXcd tab;
        // (j+1)(k+1) x dim polynomial coefficients over the bidegree-(j,k)
        // monomials zeta1^a zeta2^{j-a} conj(zeta1)^c conj(zeta2)^{k-c},
        // row index a*(k+1) + c.
        Eigen::MatrixXcd mono;
    };

    std::shared_ptr<const SphereGrid> grid;
    int band = 0;
    std::vector<Block> blocks;
    double max_gram_residual = 0.0;  // worst orthonormality defect seen in build

    int block_index(ModeIndex mode) const;  // -1 when absent
    int total_dim() const;
};

// Builds the basis for all modes with j + k <= band.  Requires the grid
// exactness degree (2 * grid->band) to cover products of basis polynomials,
// i.e. grid->band >= band; throws RankDeficiency if any block comes out with
// the wrong dimension.
std::shared_ptr<const BasisTable> build_basis(
    std::shared_ptr<const SphereGrid> grid, int band);

// Coefficients of a function against a BasisTable, in table block order.
struct SpectralFunction {
    std::shared_ptr<const BasisTable> table;
    std::vector<Eigen::VectorXcd> coeffs;
    bool is_real = false;
    double l2_sq = 0.0;        // int |f|^2 of the analyzed input
    double tail_energy = 0.0;  // l2_sq minus captured coefficient energy

    double coeff_energy() const;
    double relative_tail() const;
};

// Quadrature analysis of f; tail_energy records the L^2 mass the band-limited
// expansion misses.  A relative tail above `tail_warn` is reported through
// the optional flag (never an error here).
SpectralFunction analyze(const std::shared_ptr<const BasisTable>& table,
                         const GridFunction& f);

GridFunction synthesize(const SpectralFunction& F);

// Band-limited evaluation of F at arbitrary sphere points (exact for the
// polynomial the coefficients represent).
Eigen::VectorXcd evaluate_at(const SpectralFunction& F,
                             const std::vector<SpherePoint>& points);
Complex evaluate_at(const SpectralFunction& F, const SpherePoint& point);

// Spectral algebra.
SpectralFunction spectral_zero(const std::shared_ptr<const BasisTable>& table);
SpectralFunction spectral_add(const SpectralFunction& a, const SpectralFunction& b);
SpectralFunction spectral_scale(const SpectralFunction& a, Complex c);
Complex spectral_inner(const SpectralFunction& a, const SpectralFunction& b);

// Diagonal multipliers m(j,k) acting blockwise.
using Multiplier = std::function<double(ModeIndex)>;

SpectralFunction apply_multiplier(const SpectralFunction& F, const Multiplier& m);

enum class KernelPolicy {
    kProject,  // silently drop energy on zero-multiplier modes
    kStrict,   // KernelModePresent if such energy exceeds 1e-12 relative
};

// Applies 1/m(j,k) on modes where m is nonzero; kernel modes (m == 0) are
// handled per policy.
SpectralFunction apply_inverse_multiplier(const SpectralFunction& F,
                                          const Multiplier& m, KernelPolicy policy);

// lambda_{j,k} multiplier for the given parameters.
Multiplier sobolev_multiplier(const InequalityParams& params);

// Limiting pluriharmonic multiplier: lambda'_j on H_{j,0} and H_{0,j} for
// j >= 1, zero elsewhere (including H_{0,0}).
Multiplier limit_multiplier(int n);

// Quadratic forms.
double sobolev_norm_sq(const SpectralFunction& F, const InequalityParams& params);
double negative_norm_sq(const SpectralFunction& F, const InequalityParams& params);

// Mean-normalized limiting form  |S^3|^{-1} sum_{j>=1} lambda'_j
// (|c_{j,0}|^2 + |c_{0,j}|^2).  Requires the input to be pluriharmonic
// within 1e-10 relative energy (NotPluriharmonic otherwise).
double bo_form(const SpectralFunction& F);

// Energy fraction outside the pluriharmonic modes (j,0), (0,j), (0,0).
double non_pluriharmonic_fraction(const SpectralFunction& F);

// Zeroes every block with j >= 1 and k >= 1.
SpectralFunction pluriharmonic_project(const SpectralFunction& F);

// Convenience: analyze + sobolev_norm_sq.
double sobolev_norm_sq(const std::shared_ptr<const BasisTable>& table,
                       const GridFunction& f, const InequalityParams& params);
double negative_norm_sq(const std::shared_ptr<const BasisTable>& table,
                        const GridFunction& f, const InequalityParams& params);

// Jacobi polynomial P_m^{(alpha,beta)}(x) by the three-term recurrence.
double jacobi_poly(int m, double alpha, double beta, double x);

// Disk polynomial R_{j,k}(w) = w^{j-k} (or conj(w)^{k-j}) *
// P_min^{(0,|j-k|)}(2|w|^2 - 1) / P_min^{(0,|j-k|)}(1); R_{j,k}(1) = 1.
Complex disk_poly(ModeIndex mode, Complex w);

// Zonal reproducing kernel K_{j,k}(zeta, eta) =
//   (dim H_{j,k} / |S^3|) R_{j,k}(<zeta, eta>).
Complex zonal_kernel(ModeIndex mode, const SpherePoint& zeta, const SpherePoint& eta);

// Projection onto H_{j,k} realized by quadrature against the zonal kernel
// (O(nodes^2); used to cross-check the Gram-Schmidt basis).
GridFunction apply_zonal_projector(const GridFunction& f, ModeIndex mode);

// One basis function as a grid function (tests, diagnostics).
GridFunction basis_function(const std::shared_ptr<const BasisTable>& table,
                            ModeIndex mode, int which);

}  // namespace crss
