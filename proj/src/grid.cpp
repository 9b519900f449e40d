#include "crss/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "crss/errors.hpp"

namespace crss {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] via Newton iteration on P_N.
// Standard construction; accurate to ~1e-15 for the sizes used here.
void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-based initial guess for the i-th root (descending order).
        double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_n and P_n' by the three-term recurrence.
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            const double dx = p1 / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        x(i) = xi;
        w(i) = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
}

template <typename Scalar>
Scalar pairwise_sum_impl(const Scalar* data, Eigen::Index n) {
    if (n <= 32) {
        Scalar acc{};
        for (Eigen::Index i = 0; i < n; ++i) acc += data[i];
        return acc;
    }
    const Eigen::Index half = n / 2;
    return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

void require_same_grid(const GridFunction& a, const GridFunction& b,
                       const char* op) {
    if (a.grid.get() != b.grid.get()) {
        if (!a.grid || !b.grid || a.grid->band != b.grid->band ||
            a.nodes() != b.nodes()) {
            throw DomainViolation(std::string(op) + ": operands on different grids");
        }
    }
}

void require_real(const GridFunction& f, const char* op) {
    if (!f.is_real) {
        throw DomainViolation(std::string(op) + ": input must be a real-valued function");
    }
}

}  // namespace

SpherePoint SphereGrid::point(int i) const {
    SpherePoint p;
    p.zeta.resize(2);
    p.zeta(0) = zeta1(i);
    p.zeta(1) = zeta2(i);
    return p;
}

std::shared_ptr<const SphereGrid> build_grid(int band_limit) {
    if (band_limit < 1) throw DomainViolation("build_grid: band_limit must be >= 1");
    if (band_limit > 64) {
        throw ResourceLimit("build_grid: band_limit > 64 exceeds the supported range");
    }
    auto g = std::make_shared<SphereGrid>();
    g->band = band_limit;
    g->n_theta = band_limit + 1;
    g->n_phi = 2 * band_limit + 1;

    Eigen::VectorXd x, wx;
    gauss_legendre(g->n_theta, x, wx);

    const int n_nodes = g->n_theta * g->n_phi * g->n_phi;
    g->theta.resize(n_nodes);
    g->phi1.resize(n_nodes);
    g->phi2.resize(n_nodes);
    g->weight.resize(n_nodes);
    g->zeta1.resize(n_nodes);
    g->zeta2.resize(n_nodes);

    // cos(theta) sin(theta) dtheta = -(1/4) d cos(2 theta); the measure in
    // x = cos(2 theta) is dx/4 on [-1, 1].
    const double dphi = 2.0 * M_PI / g->n_phi;
    std::vector<double> phi(g->n_phi), cphi(g->n_phi), sphi(g->n_phi);
    for (int a = 0; a < g->n_phi; ++a) {
        phi[a] = dphi * a;
        cphi[a] = std::cos(phi[a]);
        sphi[a] = std::sin(phi[a]);
    }

    int idx = 0;
    for (int it = 0; it < g->n_theta; ++it) {
        const double ct = std::sqrt(0.5 * (1.0 + x(it)));
        const double st = std::sqrt(0.5 * (1.0 - x(it)));
        const double th = std::atan2(st, ct);
        const double w_theta = 0.25 * wx(it) * dphi * dphi;
        for (int a = 0; a < g->n_phi; ++a) {
            const Complex z1 = ct * Complex(cphi[a], sphi[a]);
            for (int b = 0; b < g->n_phi; ++b, ++idx) {
                g->theta(idx) = th;
                g->phi1(idx) = phi[a];
                g->phi2(idx) = phi[b];
                g->weight(idx) = w_theta;
                g->zeta1(idx) = z1;
                g->zeta2(idx) = st * Complex(cphi[b], sphi[b]);
            }
        }
    }
    return g;
}

GridFunction grid_constant(std::shared_ptr<const SphereGrid> grid, Complex value) {
    GridFunction f;
    f.values = Eigen::VectorXcd::Constant(grid->nodes(), value);
    f.grid = std::move(grid);
    f.is_real = (value.imag() == 0.0);
    return f;
}

GridFunction tabulate(std::shared_ptr<const SphereGrid> grid,
                      const std::function<Complex(const SpherePoint&)>& fn,
                      bool is_real) {
    GridFunction f;
    f.values.resize(grid->nodes());
    for (int i = 0; i < grid->nodes(); ++i) f.values(i) = fn(grid->point(i));
    f.grid = std::move(grid);
    f.is_real = is_real;
    return f;
}

double pairwise_sum(const Eigen::VectorXd& v) {
    return v.size() == 0 ? 0.0 : pairwise_sum_impl(v.data(), v.size());
}

Complex pairwise_sum(const Eigen::VectorXcd& v) {
    return v.size() == 0 ? Complex{} : pairwise_sum_impl(v.data(), v.size());
}

Complex integrate(const GridFunction& f) {
    Eigen::VectorXcd terms = f.grid->weight.cast<Complex>().cwiseProduct(f.values);
    return pairwise_sum(terms);
}

Complex mean_integral(const GridFunction& f) {
    return integrate(f) / sphere_measure(1);
}

double lp_norm(const GridFunction& f, double r) {
    if (!(r > 0.0)) throw DomainViolation("lp_norm: exponent must be positive");
    Eigen::VectorXd terms =
        f.grid->weight.cwiseProduct(f.values.cwiseAbs().array().pow(r).matrix());
    return std::pow(pairwise_sum(terms), 1.0 / r);
}

double l2_norm_sq(const GridFunction& f) {
    Eigen::VectorXd terms = f.grid->weight.cwiseProduct(f.values.cwiseAbs2());
    return pairwise_sum(terms);
}

GridFunction add(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "add");
    return GridFunction{a.grid, a.values + b.values, a.is_real && b.is_real};
}

GridFunction sub(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "sub");
    return GridFunction{a.grid, a.values - b.values, a.is_real && b.is_real};
}

GridFunction scale(const GridFunction& f, Complex c) {
    return GridFunction{f.grid, c * f.values, f.is_real && c.imag() == 0.0};
}

GridFunction add_constant(const GridFunction& f, Complex c) {
    return GridFunction{f.grid, f.values.array() + c,
                        f.is_real && c.imag() == 0.0};
}

GridFunction multiply(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "multiply");
    return GridFunction{a.grid, a.values.cwiseProduct(b.values),
                        a.is_real && b.is_real};
}

GridFunction conjugate(const GridFunction& f) {
    return GridFunction{f.grid, f.values.conjugate(), f.is_real};
}

GridFunction abs_fn(const GridFunction& f) {
    return GridFunction{f.grid, f.values.cwiseAbs().cast<Complex>(), true};
}

double min_real_value(const GridFunction& f) {
    return f.values.real().minCoeff();
}

double max_abs_value(const GridFunction& f) {
    return f.values.cwiseAbs().maxCoeff();
}

GridFunction power(const GridFunction& f, double a) {
    require_real(f, "power");
    const double lo = min_real_value(f);
    if (lo < 0.0) throw NegativeFunction("power: input has negative values");
    if (lo <= 1e-12) {
        throw DomainViolation("power: input must be strictly positive (min > 1e-12)");
    }
    GridFunction g;
    g.grid = f.grid;
    g.is_real = true;
    g.values = f.values.real().array().pow(a).cast<Complex>();
    return g;
}

GridFunction power_floored(const GridFunction& f, double a, double floor,
                           int* floored_count) {
    require_real(f, "power_floored");
    GridFunction g;
    g.grid = f.grid;
    g.is_real = true;
    g.values.resize(f.nodes());
    int clipped = 0;
    for (int i = 0; i < f.nodes(); ++i) {
        double v = f.values(i).real();
        if (v < floor) {
            v = floor;
            ++clipped;
        }
        g.values(i) = std::pow(v, a);
    }
    if (floored_count) *floored_count = clipped;
    return g;
}

GridFunction exp_fn(const GridFunction& f) {
    require_real(f, "exp_fn");
    return GridFunction{f.grid, f.values.real().array().exp().cast<Complex>(), true};
}

GridFunction log_fn(const GridFunction& f) {
    require_real(f, "log_fn");
    if (min_real_value(f) <= 1e-12) {
        throw DomainViolation("log_fn: input must be strictly positive (min > 1e-12)");
    }
    return GridFunction{f.grid, f.values.real().array().log().cast<Complex>(), true};
}

Eigen::VectorXcd monomial_values(const SphereGrid& grid, int a1, int a2, int b1,
                                 int b2) {
    if (a1 < 0 || a2 < 0 || b1 < 0 || b2 < 0) {
        throw DomainViolation("monomial_values: exponents must be nonnegative");
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(grid.nodes());
    auto apply = [&v](const Eigen::VectorXcd& base, int e, bool conj) {
        if (e == 0) return;
        Eigen::VectorXcd b = conj ? base.conjugate() : base;
        for (int r = 0; r < e; ++r) v = v.cwiseProduct(b);
    };
    apply(grid.zeta1, a1, false);
    apply(grid.zeta2, a2, false);
    apply(grid.zeta1, b1, true);
    apply(grid.zeta2, b2, true);
    return v;
}

void write_grid_function_csv(const GridFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_grid_function_csv: cannot open " + path);
    out << "theta,phi1,phi2,re,im\n";
    char line[160];
    for (int i = 0; i < f.nodes(); ++i) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      f.grid->theta(i), f.grid->phi1(i), f.grid->phi2(i),
                      f.values(i).real(), f.values(i).imag());
        out << line;
    }
    if (!out) throw IoError("write_grid_function_csv: write failed for " + path);
}

GridFunction read_grid_function_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_grid_function_csv: cannot open " + path);
    std::string header;
    if (!std::getline(in, header) || header != "theta,phi1,phi2,re,im") {
        throw IoError("read_grid_function_csv: bad header in " + path);
    }
    std::vector<double> th, p1, p2, re, im;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double a, b, c, d, e;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg,%lg", &a, &b, &c, &d, &e) != 5) {
            throw IoError("read_grid_function_csv: malformed row in " + path);
        }
        th.push_back(a);
        p1.push_back(b);
        p2.push_back(c);
        re.push_back(d);
        im.push_back(e);
    }
    const long rows = static_cast<long>(th.size());
    int band = -1;
    for (int b = 1; b <= 64; ++b) {
        const long expect = static_cast<long>(b + 1) * (2 * b + 1) * (2 * b + 1);
        if (expect == rows) {
            band = b;
            break;
        }
    }
    if (band < 0) {
        throw IoError("read_grid_function_csv: row count " + std::to_string(rows) +
                      " does not match any grid size");
    }
    GridFunction f;
    f.grid = build_grid(band);
    f.values.resize(rows);
    bool real_vals = true;
    for (long i = 0; i < rows; ++i) {
        if (std::abs(th[i] - f.grid->theta(i)) > 1e-9 ||
            std::abs(p1[i] - f.grid->phi1(i)) > 1e-9 ||
            std::abs(p2[i] - f.grid->phi2(i)) > 1e-9) {
            throw IoError("read_grid_function_csv: node coordinates do not match "
                          "the canonical grid layout");
        }
        f.values(i) = Complex(re[i], im[i]);
        if (im[i] != 0.0) real_vals = false;
    }
    f.is_real = real_vals;
    return f;
}

}  // namespace crss
