#pragma once

// Deficit functionals for the three sharp inequalities on S^3 and the
// remainder-term quantities that compare them:
//
//   quadratic (Sobolev-type):   ||f||_*^2 - C |f|_q^2           >= 0
//   dual (HLS-type):            C^{-1} |f|_p^2 - ||f||_{-*}^2   >= 0
//   exponential (limit case):   quadratic form of log-density   >= Jensen term
//
// plus the paired remainders (i1, i2) whose ratio tends to the dual-ratio
// constant on the extremizer manifold, the exact square identity connecting
// them, the logarithmic dual deficit, and the small building blocks used by
// the concentration-compactness probes.

#include <memory>

#include "crss/constants.hpp"
#include "crss/grid.hpp"
#include "crss/harmonics.hpp"

namespace crss {

struct FsDeficitBreakdown {
    double sobolev_norm_sq = 0.0;
    double q_norm = 0.0;
    double deficit = 0.0;  // sobolev_norm_sq - C * q_norm^2
};

// Quadratic-inequality deficit of a real function.
FsDeficitBreakdown fs_deficit(const std::shared_ptr<const BasisTable>& table,
                              const GridFunction& f, const InequalityParams& params);

struct HlsDeficitBreakdown {
    double negative_norm_sq = 0.0;
    double p_norm = 0.0;
    double absolute = 0.0;    // C^{-1} p_norm^2 - negative_norm_sq
    double normalized = 0.0;  // C^{-1} - negative_norm_sq / p_norm^2
};

// Dual-inequality deficit of a real function (ZeroFunction when |f|_p = 0).
HlsDeficitBreakdown hls_deficit(const std::shared_ptr<const BasisTable>& table,
                                const GridFunction& f, const InequalityParams& params);

struct DualRemainderPair {
    double i1 = 0.0;     // |f|_q^{2(q-2)} * fs deficit of f
    double i2 = 0.0;     // dual deficit of g = f^{q/p}, scaled: |g|_p^2 - C ||g||_{-*}^2
    double ratio = 0.0;  // i1 / (C * i2)
};

// Remainder pair for nonnegative f.  Values below 1e-12 * max|f| are floored
// before taking the fractional power f^{q/p}; if more than 0.1% of nodes need
// flooring the input is rejected (NegativeFunction).  DegenerateDenominator
// when i2 is not positive.
DualRemainderPair dual_remainder_pair(const std::shared_ptr<const BasisTable>& table,
                                      const GridFunction& f,
                                      const InequalityParams& params);

struct SquareIdentity {
    double residual_sum = 0.0;  // sum_modes | |f|_q^{q-2} sqrt(l) c_f - C c_g / sqrt(l) |^2
    double difference = 0.0;    // i1 - C * i2
    double mismatch = 0.0;      // | residual_sum - difference |
};

// The exact algebraic identity linking the two remainders; for band-limited
// nonnegative f the mismatch is floating-point noise.
SquareIdentity square_identity(const std::shared_ptr<const BasisTable>& table,
                               const GridFunction& f, const InequalityParams& params);

struct BoDeficitBreakdown {
    double form = 0.0;      // mean-normalized limiting quadratic form
    double log_term = 0.0;  // log of mean integral of exp(f - mean f)
    double deficit = 0.0;   // form / (2 (n+1)!) - log_term
};

// Exponential-inequality deficit of a real pluriharmonic function
// (NotPluriharmonic beyond 1e-10 relative off-energy).
BoDeficitBreakdown bo_deficit(const std::shared_ptr<const BasisTable>& table,
                              const GridFunction& f);

// Dual comparison functional: with E = mean integral of e^f and
// u = e^f - E,
//   rhs = E^{-1} mean(e^f f) - ((n+1)!/2) E^{-2} mean(u A'^{-1} P u) - log E.
// The exponential deficit dominates this quantity; equality holds on the
// extremizer family.
double bo_dual_rhs(const std::shared_ptr<const BasisTable>& table,
                   const GridFunction& f);

struct LogHlsBreakdown {
    double entropy = 0.0;    // mean integral of f log f
    double quadratic = 0.0;  // ((n+1)!/2) mean(u A'^{-1} P u), u = f - 1
    double deficit = 0.0;    // entropy - quadratic
};

// Logarithmic dual deficit for a nonnegative density with mean 1
// (NegativeFunction / NotNormalized on violated preconditions).
LogHlsBreakdown loghls_deficit(const std::shared_ptr<const BasisTable>& table,
                               const GridFunction& f);

// Direct double-integral form of the logarithmic quadratic term:
//   (n+1) * mean_zeta mean_eta log(1/|1 - <zeta,eta>|) f(zeta) f(eta),
// diagonal quadrature terms excluded (the kernel is log-singular there).
double loghls_double_integral(const GridFunction& f);

// Concentration probe phi(f) = (lambda_{0,0} ||f||_{-*}^2 - (p-1) |f|_2^2)
// / (2 |S^3|); nonpositive exactly when the spectrum of f sits above the
// first nontrivial level.
double christ_phi(const std::shared_ptr<const BasisTable>& table,
                  const GridFunction& f, const InequalityParams& params);

struct ChristBound {
    double phi_f1 = 0.0;
    double f1_p_norm = 0.0;
    double f2_p_norm = 0.0;
    double bound = 0.0;
};

// Level-cut decomposition bound: f1 = f restricted to {|f| <= eta}, f2 the
// remainder, and
//   bound = 1 + phi(f1) + c1 eta |f1|_p^2 |S|^{-2/p} - c0 eta^{2-p} |f2|_p^p |S|^{-1}.
ChristBound christ_bound(const std::shared_ptr<const BasisTable>& table,
                         const GridFunction& f, const InequalityParams& params,
                         double eta, double c0 = 1.0, double c1 = 1.0);

// Mean-normalized comparison functional with the modified eigenvalues,
//   I(g) = mean(g A^mod g) - (Gamma((Q+s)/4)/Gamma((Q-s)/4))^2 (mean |g|^q)^{2/q},
// which vanishes at g = 1 and whose scaled limit along s -> Q reproduces the
// exponential deficit.
double bridge_functional(const std::shared_ptr<const BasisTable>& table,
                         const GridFunction& g, const InequalityParams& params);

}  // namespace crss
