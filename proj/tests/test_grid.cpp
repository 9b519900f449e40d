#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <random>

#include "crss/errors.hpp"
#include "crss/grid.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace crss;

namespace {

double moment_closed_form(int a, int b) {
    // int |zeta1|^{2a} |zeta2|^{2b} dsigma = 2 pi^2 a! b! / (a+b+1)!
    double v = 2.0 * M_PI * M_PI;
    for (int i = 1; i <= a + b + 1; ++i) v /= i;
    for (int i = 1; i <= a; ++i) v *= i;
    for (int i = 1; i <= b; ++i) v *= i;
    return v;
}

}  // namespace

TEST_CASE("grid structure and total measure") {
    for (int band : {1, 4, 12}) {
        const auto g = build_grid(band);
        CHECK(g->band == band);
        CHECK(g->n_theta == band + 1);
        CHECK(g->n_phi == 2 * band + 1);
        CHECK(g->nodes() == (band + 1) * (2 * band + 1) * (2 * band + 1));
        CHECK(g->weight.minCoeff() > 0.0);
        // sum of weights = |S^3| = 2 pi^2
        CHECK(pairwise_sum(g->weight) ==
              doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
        for (int i : {0, g->nodes() / 2, g->nodes() - 1}) {
            const SpherePoint p = g->point(i);
            CHECK(p.zeta.norm() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(p.zeta(0) == g->zeta1(i));
            CHECK(p.zeta(1) == g->zeta2(i));
        }
    }
    CHECK_THROWS_AS(build_grid(0), DomainViolation);
    CHECK_THROWS_AS(build_grid(65), ResourceLimit);
}

TEST_CASE("quadrature is exact on monomial moments up to degree 2 band") {
    const int band = 12;
    const auto g = build_grid(band);
    // diagonal moments: every (a, b) with a + b <= 2 band
    for (int a = 0; a <= 2 * band; ++a) {
        for (int b = 0; a + b <= 2 * band; b += 3) {
            GridFunction f = grid_constant(g, 0.0);
            f.values = monomial_values(*g, a, b, a, b);
            const double got = integrate(f).real();
            CHECK(got == doctest::Approx(moment_closed_form(a, b)).epsilon(1e-12));
        }
    }
    // off-diagonal monomials integrate to zero
    for (const auto& [a1, a2, b1, b2] :
         std::vector<std::array<int, 4>>{{1, 0, 0, 0},
                                         {2, 1, 1, 0},
                                         {3, 0, 1, 0},
                                         {2, 2, 2, 1},
                                         {5, 3, 3, 5}}) {
        GridFunction f = grid_constant(g, 0.0);
        f.values = monomial_values(*g, a1, a2, b1, b2);
        const Complex got = integrate(f);
        CHECK(std::abs(got) <= 1e-12);
    }
}

TEST_CASE("quadrature agrees with an adaptive 1-D reduction") {
    // int |z1|^{2a} |z2|^{2b} dsigma = 4 pi^2 int_0^{pi/2} cos^{2a+1} sin^{2b+1}
    const auto g = build_grid(8);
    for (const auto& [a, b] : std::vector<std::pair<int, int>>{
             {0, 0}, {1, 0}, {3, 2}, {5, 7}, {8, 8}}) {
        const auto integrand = [&](double th) {
            return std::pow(std::cos(th), 2 * a + 1) *
                   std::pow(std::sin(th), 2 * b + 1);
        };
        const double expect =
            4.0 * M_PI * M_PI * oracle::integrate(integrand, 0.0, M_PI / 2.0);
        GridFunction f = grid_constant(g, 0.0);
        f.values = monomial_values(*g, a, b, a, b);
        CHECK(integrate(f).real() == doctest::Approx(expect).epsilon(1e-11));
    }
}

TEST_CASE("field algebra and norms") {
    const auto g = build_grid(6);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd(0.0, 1.0);
    GridFunction f = grid_constant(g, 0.0);
    f.is_real = true;
    for (int i = 0; i < f.nodes(); ++i) f.values(i) = nd(rng);

    const double l2 = l2_norm_sq(f);
    CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(l2)).epsilon(1e-13));
    CHECK(l2 == doctest::Approx(integrate(multiply(f, conjugate(f))).real())
                    .epsilon(1e-13));
    CHECK(mean_integral(f).real() ==
          doctest::Approx(integrate(f).real() / (2.0 * M_PI * M_PI))
              .epsilon(1e-12));

    const GridFunction g2 = add(scale(f, 2.0), f);
    CHECK(lp_norm(g2, 2.0) == doctest::Approx(3.0 * std::sqrt(l2)).epsilon(1e-13));
    const GridFunction z = sub(g2, scale(f, 3.0));
    CHECK(max_abs_value(z) <= 1e-13);

    const GridFunction af = abs_fn(f);
    CHECK(min_real_value(af) >= 0.0);
    CHECK(lp_norm(af, 3.0) == doctest::Approx(lp_norm(f, 3.0)).epsilon(1e-13));

    // exp / log are inverse on positive fields
    const GridFunction pos = add_constant(scale(af, 0.5), 1.0);
    const GridFunction back = exp_fn(log_fn(pos));
    CHECK(max_abs_value(sub(back, pos)) <= 1e-12 * max_abs_value(pos));

    // power with flooring clips the base at the floor before powering
    int floored = 0;
    const GridFunction pw = power_floored(f, 2.0, 1e-3, &floored);
    CHECK(floored > 0);
    CHECK(min_real_value(pw) >= 1e-6 * (1.0 - 1e-12));
}

TEST_CASE("pairwise summation matches extended-precision accumulation") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXd v(10000);
    for (int i = 0; i < v.size(); ++i) v(i) = nd(rng);
    long double acc = 0.0L;
    for (int i = 0; i < v.size(); ++i) acc += v(i);
    CHECK(pairwise_sum(v) ==
          doctest::Approx(static_cast<double>(acc)).epsilon(1e-14));
}

TEST_CASE("grid function CSV round trip") {
    const auto g = build_grid(3);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd(0.0, 1.0);
    GridFunction f = grid_constant(g, 0.0);
    for (int i = 0; i < f.nodes(); ++i) f.values(i) = Complex(nd(rng), nd(rng));

    const std::string path = "roundtrip_test.csv";
    write_grid_function_csv(f, path);
    const GridFunction back = read_grid_function_csv(path);
    REQUIRE(back.grid->band == 3);
    CHECK((back.values - f.values).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());

    CHECK_THROWS_AS(read_grid_function_csv("does_not_exist.csv"), IoError);

    // malformed header
    {
        FILE* bad = std::fopen("bad_header.csv", "w");
        std::fputs("x,y\n1,2\n", bad);
        std::fclose(bad);
    }
    CHECK_THROWS_AS(read_grid_function_csv("bad_header.csv"), IoError);
    std::remove("bad_header.csv");
}

TEST_CASE("tabulate matches monomial tables") {
    const auto g = build_grid(5);
    GridFunction direct = grid_constant(g, 0.0);
    direct.values = monomial_values(*g, 2, 1, 1, 0);
    const GridFunction tab = tabulate(g, [](const SpherePoint& p) {
        return std::pow(p.zeta(0), 2) * p.zeta(1) * std::conj(p.zeta(0));
    });
    CHECK(max_abs_value(sub(direct, tab)) <= 1e-14);
}
