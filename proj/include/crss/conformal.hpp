#pragma once

// Conformal (CR) automorphisms of S^3 presented as words in three generator
// types: unitary rotations of C^2, and Cayley conjugates of Heisenberg left
// translations and dilations.  A word [g1, g2, ..., gN] acts as the
// composition gN o ... o g1 (g1 applied first).
//
// Each generator is conformal: its sphere action carries a positive Jacobian
// factor, and the Jacobian of a word is the cocycle product of the factors
// along the partially applied word.  The L^q-normalized action
//   (tau . f)(zeta) = f(tau zeta) |J_tau(zeta)|^{1/q}
// preserves the L^q norm; the additive action f(tau zeta) + log|J_tau(zeta)|
// preserves integrals of e^f.

#include <variant>
#include <vector>

#include "json.hpp"

#include "crss/constants.hpp"
#include "crss/grid.hpp"
#include "crss/harmonics.hpp"
#include "crss/heisenberg.hpp"

namespace crss {

struct RotationGen {
    Eigen::Matrix2cd u;  // unitary within 1e-9
};

struct TranslationGen {
    GroupPoint point;  // left translation on the Heisenberg side
};

struct DilationGen {
    double delta = 1.0;  // positive
};

using Generator = std::variant<RotationGen, TranslationGen, DilationGen>;

struct ConformalMap {
    std::vector<Generator> word;
};

// Validating constructors.
Generator make_rotation(const Eigen::Matrix2cd& u);
Generator make_translation(const GroupPoint& point);
Generator make_dilation(double delta);

ConformalMap inverse(const ConformalMap& map);

SpherePoint apply_map(const ConformalMap& map, const SpherePoint& p);

// Image point together with the Jacobian |J_tau| at p.
std::pair<SpherePoint, double> apply_with_jacobian(const ConformalMap& map,
                                                   const SpherePoint& p);

double jacobian(const ConformalMap& map, const SpherePoint& p);

// Images of all grid nodes / Jacobian tabulated on the grid.
std::vector<SpherePoint> mapped_points(const ConformalMap& map,
                                       const SphereGrid& grid);
GridFunction jacobian_grid(const ConformalMap& map,
                           const std::shared_ptr<const SphereGrid>& grid);

struct TransformDiagnostics {
    double min_jacobian = 0.0;
    double max_jacobian = 0.0;
    // Radius r of the single Moebius pull with the same Jacobian dynamic
    // range: (max/min)^{1/Q} = (1+r)/(1-r).
    double r_eff = 0.0;
};
TransformDiagnostics map_diagnostics(const ConformalMap& map, const SphereGrid& grid);

// Normalized actions on a band-limited function (evaluated off-grid through
// its polynomial representation, then re-tabulated).
GridFunction act_power(const SpectralFunction& f, const ConformalMap& map,
                       double exponent);  // f(tau zeta) |J|^exponent
GridFunction act_q(const SpectralFunction& f, const ConformalMap& map,
                   const InequalityParams& params);  // exponent 1/q
GridFunction act_p(const SpectralFunction& f, const ConformalMap& map,
                   const InequalityParams& params);  // exponent 1/p
GridFunction act_log(const SpectralFunction& f, const ConformalMap& map);

// Extremizer families on the sphere, parametrized by amplitude c and a chart
// point xi in C^2 with |xi| <= 1 - 1e-6 (DomainViolation beyond).  Writing
// b(zeta) = 1 - <xi, zeta>:
//   fs:   c |b|^{-(Q-s)/2}   (equality case of the quadratic inequality)
//   hls:  c |b|^{-(Q+s)/2}   (equality case of the dual inequality)
//   bo:   log c - Q log |b|  (equality case of the exponential inequality)
GridFunction extremizer_fs(const std::shared_ptr<const SphereGrid>& grid,
                           const InequalityParams& params, double c,
                           const Eigen::Vector2cd& xi);
GridFunction extremizer_hls(const std::shared_ptr<const SphereGrid>& grid,
                            const InequalityParams& params, double c,
                            const Eigen::Vector2cd& xi);
GridFunction extremizer_bo(const std::shared_ptr<const SphereGrid>& grid, double c,
                           const Eigen::Vector2cd& xi);

// Closed forms on the fs extremizer orbit (n = 1 only):
//   int |b|^{-Q} dsigma = |S^3| (1 - |xi|^2)^{-Q/2}
//   ||extremizer_fs(c,xi)||_*^2 = c^2 lambda_{0,0} |S^3| (1-|xi|^2)^{-(Q-s)/2}
//   |extremizer_fs(c,xi)|_q^q  = c^q |S^3| (1-|xi|^2)^{-Q/2}
double extremizer_fs_norm_sq(const InequalityParams& params, double c,
                             double xi_norm_sq);
double extremizer_fs_q_norm(const InequalityParams& params, double c,
                            double xi_norm_sq);

// JSON serialization of words (used by experiment reports and configs).
nlohmann::ordered_json word_to_json(const ConformalMap& map);
ConformalMap word_from_json(const nlohmann::ordered_json& j);

}  // namespace crss
