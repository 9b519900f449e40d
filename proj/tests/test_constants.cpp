#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "crss/constants.hpp"
#include "crss/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace crss;

namespace {
const std::vector<double> kSGrid = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
}

TEST_CASE("parameter derivation and guards") {
    const InequalityParams p = make_params(1, 2.0);
    CHECK(p.Q == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(p.q == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(p.p == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

    for (const double s : kSGrid) {
        const InequalityParams pr = make_params(1, s);
        // q - 2 = 2s/(Q - s) and q/p = q - 1 (conjugate-pair identities).
        CHECK(pr.q - 2.0 ==
              doctest::Approx(2.0 * s / (pr.Q - s)).epsilon(1e-14));
        CHECK(pr.q / pr.p == doctest::Approx(pr.q - 1.0).epsilon(1e-14));
    }

    CHECK_THROWS_AS(make_params(0, 2.0), DomainViolation);
    CHECK_THROWS_AS(make_params(1, 0.0), DomainViolation);
    CHECK_THROWS_AS(make_params(1, 4.0), DomainViolation);
    CHECK_THROWS_AS(make_params(1, 4.0 - 1e-7), DomainViolation);
    CHECK_NOTHROW(make_params(1, 4.0 - 1e-5));
    CHECK_NOTHROW(make_params(2, 5.0));  // Q = 6 admits s up to 6
}

TEST_CASE("exact constant identities across the s-grid") {
    const double surf = sphere_measure(1);
    CHECK(surf == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-15));
    for (const double s : kSGrid) {
        const InequalityParams p = make_params(1, s);
        const double c = sharp_constant(p);
        const double l00 = eigenvalue(p, {0, 0});
        const double l10 = eigenvalue(p, {1, 0});
        const double l20 = eigenvalue(p, {2, 0});

        CHECK(l00 == doctest::Approx(c * std::pow(surf, -s / p.Q)).epsilon(1e-12));
        CHECK(l10 == doctest::Approx((p.q - 1.0) * l00).epsilon(1e-12));
        CHECK(1.0 - l10 / l20 ==
              doctest::Approx(2.0 * s / (p.Q + 4.0 + s)).epsilon(1e-12));
        CHECK(l20 / l10 ==
              doctest::Approx((p.Q + 4.0 + s) / (p.Q + 4.0 - s)).epsilon(1e-12));

        const TheoremConstants tc = theorem_constants(p);
        CHECK(tc.fs_local ==
              doctest::Approx(2.0 * s / (p.Q + 4.0 + s)).epsilon(1e-14));
        CHECK(tc.dual_ratio ==
              doctest::Approx((p.Q + 4.0 + s) / (p.Q + 4.0 - s) * c).epsilon(1e-14));
        CHECK(tc.bo_ratio == doctest::Approx(3.0).epsilon(1e-15));
        CHECK(tc.spectral_gap == doctest::Approx(1.0 - l10 / l20).epsilon(1e-13));
    }
}

TEST_CASE("golden values at n = 1, s = 2") {
    const InequalityParams p = make_params(1, 2.0);
    CHECK(sharp_constant(p) == doctest::Approx(M_PI / 2.0).epsilon(1e-14));
    const double rt2 = std::sqrt(2.0);
    for (int j = 0; j <= 6; ++j) {
        for (int k = 0; k <= 6; ++k) {
            CHECK(eigenvalue(p, {j, k}) ==
                  doctest::Approx(rt2 * (j + 0.5) * (k + 0.5)).epsilon(1e-13));
            // modified eigenvalue drops the 2^{s/Q} prefactor
            CHECK(modified_eigenvalue(p, {j, k}) ==
                  doctest::Approx((j + 0.5) * (k + 0.5)).epsilon(1e-13));
        }
    }
    for (int j = 1; j <= 6; ++j) {
        CHECK(eigenvalue_limit(1, j) ==
              doctest::Approx(static_cast<double>(j * (j + 1))).epsilon(1e-15));
    }
    const TheoremConstants tc = theorem_constants(p);
    CHECK(tc.dual_ratio == doctest::Approx(5.0 * M_PI / 6.0).epsilon(1e-14));
}

TEST_CASE("agreement with the 200-bit oracle") {
    for (const int n : {1, 2, 3}) {
        for (const double s : kSGrid) {
            const InequalityParams p = make_params(n, s);
            CHECK(sharp_constant(p) ==
                  doctest::Approx(oracle::sharp_constant(n, s)).epsilon(1e-12));
            for (int j = 0; j <= 6; j += 2) {
                for (int k = 0; k <= 5; k += 5) {
                    CHECK(eigenvalue(p, {j, k}) ==
                          doctest::Approx(oracle::eigenvalue(n, s, j, k))
                              .epsilon(1e-12));
                    CHECK(modified_eigenvalue(p, {j, k}) ==
                          doctest::Approx(oracle::modified_eigenvalue(n, s, j, k))
                              .epsilon(1e-12));
                }
            }
        }
        for (int j = 1; j <= 6; ++j) {
            CHECK(eigenvalue_limit(n, j) ==
                  doctest::Approx(oracle::eigenvalue_limit(n, j)).epsilon(1e-13));
        }
    }
}

TEST_CASE("gamma helpers") {
    CHECK(gamma_ratio(7.5, 3.5) ==
          doctest::Approx(oracle::gamma_ratio(7.5, 3.5)).epsilon(1e-13));
    CHECK(gamma_ratio(2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
}

TEST_CASE("iwasawa-type dual ratios") {
    // (Q + 2 + 2 sign(m) + s) / (Q + 2 + 2 sign(m) - s) over the four
    // division-algebra branches m in {0, 1, 3, 7}; m = 0 has sign 0.  Each
    // branch carries its own homogeneous dimension (m = 3 is the smallest
    // quaternionic group, m = 7 the octonionic one).
    const std::vector<std::pair<int, double>> branches = {
        {0, 4.0}, {1, 4.0}, {3, 10.0}, {7, 22.0}};
    for (const double s : {1.0, 2.0}) {
        for (const auto& [m, q_hom] : branches) {
            const double sgn = m > 0 ? 1.0 : 0.0;
            const double expect =
                (q_hom + 2.0 + 2.0 * sgn + s) / (q_hom + 2.0 + 2.0 * sgn - s);
            CHECK(iwasawa_dual_ratio(q_hom, s, m) ==
                  doctest::Approx(expect).epsilon(1e-14));
        }
        CHECK_THROWS_AS(iwasawa_dual_ratio(4.0, s, 2), DomainViolation);
        // s outside the branch-dependent admissible window
        CHECK_THROWS_AS(iwasawa_dual_ratio(4.0, s, 3), DomainViolation);
    }
}

TEST_CASE("subspace dimensions at n = 1") {
    for (int j = 0; j <= 5; ++j)
        for (int k = 0; k <= 5; ++k)
            CHECK(subspace_dimension(1, {j, k}) == j + k + 1);
}
