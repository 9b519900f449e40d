// Conformal automorphisms of S^3: generator validation, group structure,
// Jacobian cocycle and measure identities, norm-preserving actions, the
// extremizer families with their closed-form norms, and JSON round trips.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "crss/conformal.hpp"
#include "crss/errors.hpp"
#include "crss/functionals.hpp"
#include "crss/grid.hpp"
#include "crss/harmonics.hpp"
#include "crss/heisenberg.hpp"

using namespace crss;

namespace {

std::mt19937_64& rng() {
    static std::mt19937_64 gen(20260817ULL);
    return gen;
}

double unif(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

Eigen::Matrix2cd random_unitary() {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::Matrix2cd m;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m(r, c) = Complex(nd(rng()), nd(rng()));
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(m);
    Eigen::Matrix2cd q = qr.householderQ();
    // Normalize column phases so Q is exactly unitary up to roundoff.
    return q;
}

SpherePoint random_point() {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXcd z(2);
    z << Complex(nd(rng()), nd(rng())), Complex(nd(rng()), nd(rng()));
    z /= z.norm();
    return make_sphere_point(z);
}

// A mild word mixing all three generator types.  Kept well inside the grid
// resolution so transformed integrands remain resolvable.
ConformalMap mild_word() {
    ConformalMap w;
    w.word.push_back(make_rotation(random_unitary()));
    GroupPoint u;
    u.z = Eigen::VectorXcd(1);
    u.z << Complex(unif(-0.25, 0.25), unif(-0.25, 0.25));
    u.t = unif(-0.2, 0.2);
    w.word.push_back(make_translation(u));
    w.word.push_back(make_dilation(unif(0.85, 1.18)));
    w.word.push_back(make_rotation(random_unitary()));
    return w;
}

double point_distance(const SpherePoint& a, const SpherePoint& b) {
    return (a.zeta - b.zeta).norm();
}

}  // namespace

TEST_CASE("generator validation") {
    Eigen::Matrix2cd bad;
    bad << 1.0, 0.5, 0.0, 1.0;
    CHECK_THROWS_AS(make_rotation(bad), DomainViolation);
    CHECK_THROWS_AS(make_dilation(0.0), DomainViolation);
    CHECK_THROWS_AS(make_dilation(-2.0), DomainViolation);
    CHECK_NOTHROW(make_rotation(random_unitary()));
    CHECK_NOTHROW(make_dilation(2.5));
    GroupPoint u;
    u.z = Eigen::VectorXcd(1);
    u.z << Complex(0.3, -0.1);
    u.t = 0.7;
    CHECK_NOTHROW(make_translation(u));
}

TEST_CASE("rotations act isometrically with unit Jacobian") {
    for (int trial = 0; trial < 8; ++trial) {
        ConformalMap w;
        w.word.push_back(make_rotation(random_unitary()));
        w.word.push_back(make_rotation(random_unitary()));
        const SpherePoint p = random_point();
        const SpherePoint q = random_point();
        const auto [pp, jp] = apply_with_jacobian(w, p);
        CHECK(std::abs(pp.zeta.norm() - 1.0) < 1e-12);
        CHECK(jp == doctest::Approx(1.0).epsilon(1e-12));
        // Inner products (hence chordal distances) are preserved.
        const SpherePoint qq = apply_map(w, q);
        CHECK(std::abs(sphere_inner(pp, qq) - sphere_inner(p, q)) < 1e-12);
    }
}

TEST_CASE("jacobian cocycle along a word") {
    for (int trial = 0; trial < 6; ++trial) {
        const ConformalMap w = mild_word();
        for (int pt = 0; pt < 5; ++pt) {
            const SpherePoint p = random_point();
            // Accumulate the cocycle by hand, one generator at a time.
            SpherePoint cur = p;
            double jac = 1.0;
            for (const auto& g : w.word) {
                ConformalMap step;
                step.word.push_back(g);
                const auto [next, jg] = apply_with_jacobian(step, cur);
                jac *= jg;
                cur = next;
            }
            const auto [img, jw] = apply_with_jacobian(w, p);
            CHECK(point_distance(img, cur) < 1e-10);
            CHECK(jw == doctest::Approx(jac).epsilon(1e-10));
            CHECK(jw > 0.0);
        }
    }
}

TEST_CASE("inverse word undoes the map and inverts the Jacobian") {
    for (int trial = 0; trial < 6; ++trial) {
        const ConformalMap w = mild_word();
        const ConformalMap winv = inverse(w);
        for (int pt = 0; pt < 5; ++pt) {
            const SpherePoint p = random_point();
            const auto [img, jw] = apply_with_jacobian(w, p);
            const auto [back, jb] = apply_with_jacobian(winv, img);
            CHECK(point_distance(back, p) < 1e-9);
            CHECK(jw * jb == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("Jacobian integrates to the full measure") {
    const auto g = build_grid(14);
    for (int trial = 0; trial < 3; ++trial) {
        const ConformalMap w = mild_word();
        const GridFunction jac = jacobian_grid(w, g);
        // J is smooth but not band-limited; quadrature converges fast for
        // words of modest dynamic range.
        const double mean = mean_integral(jac).real();
        CHECK(mean == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(min_real_value(jac) > 0.0);
        // jacobian_grid matches the pointwise jacobian at the nodes.
        const SpherePoint p0 = g->point(17);
        CHECK(jac.values(17).real() ==
              doctest::Approx(jacobian(w, p0)).epsilon(1e-12));
        CHECK(std::abs(jac.values(17).imag()) < 1e-15);
    }
}

TEST_CASE("diagnostics: rotations have r_eff 0, pulls have positive r_eff") {
    const auto g = build_grid(10);
    ConformalMap rot;
    rot.word.push_back(make_rotation(random_unitary()));
    const auto dr = map_diagnostics(rot, *g);
    CHECK(dr.r_eff < 1e-10);
    CHECK(dr.min_jacobian == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(dr.max_jacobian == doctest::Approx(1.0).epsilon(1e-10));

    ConformalMap dil;
    dil.word.push_back(make_dilation(1.5));
    const auto dd = map_diagnostics(dil, *g);
    CHECK(dd.r_eff > 0.05);
    CHECK(dd.max_jacobian > dd.min_jacobian);
    // Dynamic range identity: (max/min)^{1/Q} = (1+r)/(1-r).
    const double lhs = std::pow(dd.max_jacobian / dd.min_jacobian, 0.25);
    const double rhs = (1.0 + dd.r_eff) / (1.0 - dd.r_eff);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("normalized actions preserve their norms") {
    const auto g = build_grid(14);
    const auto t = build_basis(g, 6);
    const auto params = make_params(1, 2.0);

    // Band-limited strictly positive test function.
    SpectralFunction F = spectral_zero(t);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (size_t b = 0; b < t->blocks.size(); ++b) {
        const auto& blk = t->blocks[b];
        const int bj = blk.mode.j, bk = blk.mode.k;
        if (bj + bk > 4) continue;
        for (int c = 0; c < blk.dim; ++c) {
            if (bj == bk) {
                F.coeffs[b](c) = Complex(0.15 * nd(rng()), 0.0);
            } else if (bj > bk) {
                const Complex v(0.1 * nd(rng()), 0.1 * nd(rng()));
                F.coeffs[b](c) = v;
                // Conjugate-mirror so the function is real valued.
                const int mirror = t->block_index(ModeIndex{bk, bj});
                F.coeffs[static_cast<size_t>(mirror)](c) = std::conj(v);
            }
        }
    }
    F.coeffs[0](0) = 8.0;  // dominant constant keeps the function positive
    F.is_real = true;
    const GridFunction f = synthesize(F);
    REQUIRE(min_real_value(f) > 0.1);

    for (int trial = 0; trial < 4; ++trial) {
        const ConformalMap w = mild_word();
        const GridFunction fq = act_q(F, w, params);
        CHECK(lp_norm(fq, params.q) ==
              doctest::Approx(lp_norm(f, params.q)).epsilon(1e-6));
        const GridFunction fp = act_p(F, w, params);
        CHECK(lp_norm(fp, params.p) ==
              doctest::Approx(lp_norm(f, params.p)).epsilon(1e-6));
        const GridFunction fl = act_log(F, w);
        CHECK(mean_integral(exp_fn(fl)).real() ==
              doctest::Approx(mean_integral(exp_fn(f)).real()).epsilon(1e-6));
    }
}

TEST_CASE("extremizer tabulations and closed-form norms") {
    const auto g = build_grid(14);
    const auto t = build_basis(g, 12);
    const double c = 1.3;
    Eigen::Vector2cd xi;
    xi << Complex(0.25, 0.10), Complex(-0.20, 0.05);
    const double xi_sq = xi.squaredNorm();
    REQUIRE(xi_sq < 0.16);

    for (double s : {1.0, 2.0, 3.0}) {
        const auto params = make_params(1, s);
        const GridFunction f = extremizer_fs(g, params, c, xi);
        CHECK(min_real_value(f) > 0.0);

        // q-norm closed form:  |f|_q^q = c^q |S^3| (1-|xi|^2)^{-Q/2}.
        const double qn = lp_norm(f, params.q);
        const double qn_closed = extremizer_fs_q_norm(params, c, xi_sq);
        CHECK(qn == doctest::Approx(qn_closed).epsilon(1e-8));

        // Quadratic-form closed form via spectral analysis.
        const double sob = sobolev_norm_sq(t, f, params);
        const double sob_closed = extremizer_fs_norm_sq(params, c, xi_sq);
        CHECK(sob == doctest::Approx(sob_closed).epsilon(1e-6));
    }

    // Normalization integral: mean of |1-<xi,zeta>|^{-Q} equals
    // (1-|xi|^2)^{-Q/2}; exercised through the exponential-family tabulation.
    const GridFunction h = extremizer_bo(g, 1.0, xi);
    const double mean = mean_integral(exp_fn(h)).real();
    CHECK(mean == doctest::Approx(std::pow(1.0 - xi_sq, -2.0)).epsilon(1e-9));

    // hls family: |b|^{-(Q+s)/2} with the p-norm finite and positive.
    const auto params = make_params(1, 2.0);
    const GridFunction fh = extremizer_hls(g, params, 0.7, xi);
    CHECK(min_real_value(fh) > 0.0);
    CHECK(lp_norm(fh, params.p) > 0.0);

    // Chart boundary is rejected.
    Eigen::Vector2cd far;
    far << Complex(0.999999999, 0.0), Complex(0.0, 0.0);
    CHECK_THROWS_AS(extremizer_fs(g, params, 1.0, far), DomainViolation);
    CHECK_THROWS_AS(extremizer_fs_norm_sq(params, 1.0, 1.0), DomainViolation);
}

TEST_CASE("fs extremizers annihilate the deficit across the orbit") {
    const auto g = build_grid(14);
    const auto t = build_basis(g, 12);
    for (double s : {1.0, 2.0}) {
        const auto params = make_params(1, s);
        for (int trial = 0; trial < 3; ++trial) {
            Eigen::Vector2cd xi;
            xi << Complex(unif(-0.3, 0.3), unif(-0.3, 0.3)),
                Complex(unif(-0.3, 0.3), unif(-0.3, 0.3));
            if (xi.norm() > 0.45) xi *= 0.45 / xi.norm();
            const double c = unif(0.5, 2.0);
            const GridFunction f = extremizer_fs(g, params, c, xi);
            const auto rep = fs_deficit(t, f, params);
            CHECK(std::abs(rep.deficit) <
                  1e-7 * std::max(1.0, rep.sobolev_norm_sq));
        }
    }
}

TEST_CASE("word JSON round trip") {
    const ConformalMap w = mild_word();
    const auto j = word_to_json(w);
    const ConformalMap w2 = word_from_json(j);
    REQUIRE(w2.word.size() == w.word.size());
    for (int pt = 0; pt < 6; ++pt) {
        const SpherePoint p = random_point();
        const auto [a, ja] = apply_with_jacobian(w, p);
        const auto [b, jb] = apply_with_jacobian(w2, p);
        CHECK(point_distance(a, b) < 1e-14);
        CHECK(ja == doctest::Approx(jb).epsilon(1e-14));
    }
    CHECK_THROWS_AS(word_from_json(nlohmann::ordered_json::object()), IoError);
    nlohmann::ordered_json badgen = nlohmann::ordered_json::array();
    badgen.push_back({{"type", "squeeze"}});
    CHECK_THROWS_AS(word_from_json(badgen), IoError);
}
