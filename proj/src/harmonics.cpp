#include "crss/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "crss/errors.hpp"

namespace crss {
namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
    return r;
}

std::vector<Eigen::VectorXcd> power_table(const Eigen::VectorXcd& base, int maxp) {
    std::vector<Eigen::VectorXcd> p(static_cast<size_t>(maxp) + 1);
    p[0] = Eigen::VectorXcd::Ones(base.size());
    for (int a = 1; a <= maxp; ++a) p[a] = p[a - 1].cwiseProduct(base);
    return p;
}

// sum_i w_i a_i conj(b_i)
Complex wdot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b,
             const Eigen::VectorXd& w) {
    return (w.asDiagonal() * b).dot(a);
}

// Multiplying by (|zeta1|^2 + |zeta2|^2)^m == 1 on the sphere lifts a
// bidegree-(j-m,k-m) polynomial into bidegree (j,k) without changing its
// values; slot (a,c) picks up (a+i, c+i) with weight binom(m,i).
Eigen::MatrixXcd lift_mono(const Eigen::MatrixXcd& src, int m, int j, int k) {
    const int sj = j - m, sk = k - m;
    Eigen::MatrixXcd out =
        Eigen::MatrixXcd::Zero((j + 1) * (k + 1), src.cols());
    for (int a = 0; a <= sj; ++a)
        for (int c = 0; c <= sk; ++c) {
            const int srow = a * (sk + 1) + c;
            for (int i = 0; i <= m; ++i)
                out.row((a + i) * (k + 1) + (c + i)) += binom(m, i) * src.row(srow);
        }
    return out;
}

void require_same_table(const SpectralFunction& a, const SpectralFunction& b) {
    if (a.table != b.table)
        throw PreconditionViolation("spectral operands use different basis tables");
}

std::string mode_str(ModeIndex m) {
    return "(" + std::to_string(m.j) + "," + std::to_string(m.k) + ")";
}

}  // namespace

std::vector<ModeIndex> all_modes(int band) {
    std::vector<ModeIndex> out;
    for (int d = 0; d <= band; ++d)
        for (int j = d; j >= 0; --j) out.push_back({j, d - j});
    return out;
}

int BasisTable::block_index(ModeIndex mode) const {
    const int d = mode.j + mode.k;
    if (mode.j < 0 || mode.k < 0 || d > band) return -1;
    return d * (d + 1) / 2 + (d - mode.j);
}

int BasisTable::total_dim() const {
    int t = 0;
    for (const auto& b : blocks) t += b.dim;
    return t;
}

std::shared_ptr<const BasisTable> build_basis(
    std::shared_ptr<const SphereGrid> grid, int band) {
    if (!grid) throw PreconditionViolation("build_basis: null grid");
    if (band < 0 || band > 64)
        throw DomainViolation("build_basis: band out of range [0,64]");
    if (grid->band < band)
        throw PreconditionViolation(
            "build_basis: grid band " + std::to_string(grid->band) +
            " cannot integrate products of band-" + std::to_string(band) +
            " polynomials exactly");

    auto table = std::make_shared<BasisTable>();
    table->grid = grid;
    table->band = band;

    const int nodes = grid->nodes();
    const Eigen::VectorXd& w = grid->weight;
    const auto p1 = power_table(grid->zeta1, band);
    const auto p2 = power_table(grid->zeta2, band);
    const auto q1 = power_table(grid->zeta1.conjugate(), band);
    const auto q2 = power_table(grid->zeta2.conjugate(), band);

    auto finish = [&](BasisTable::Block b) {
        Eigen::MatrixXcd G = b.tab.adjoint() * (w.asDiagonal() * b.tab);
        G.diagonal().array() -= 1.0;
        table->max_gram_residual =
            std::max(table->max_gram_residual, G.cwiseAbs().maxCoeff());
        table->blocks.push_back(std::move(b));
    };

    for (ModeIndex mode : all_modes(band)) {
        const int j = mode.j, k = mode.k;
        const int nm = (j + 1) * (k + 1);
        const int dim_expect = j + k + 1;

        if (j < k) {
            // conjugate mirror of the already-built block (k, j)
            const auto& src = table->blocks[static_cast<size_t>(
                table->block_index({k, j}))];
            BasisTable::Block blk;
            blk.mode = mode;
            blk.dim = src.dim;
            blk.tab = src.tab.conjugate();
            blk.mono.resize(nm, src.dim);
            for (int a = 0; a <= k; ++a)
                for (int c = 0; c <= j; ++c)
                    blk.mono.row(c * (k + 1) + a) =
                        src.mono.row(a * (j + 1) + c).conjugate();
            finish(std::move(blk));
            continue;
        }

        // Tabulate the bidegree-(j,k) monomials.
        Eigen::MatrixXcd M(nodes, nm);
        for (int a = 0; a <= j; ++a)
            for (int c = 0; c <= k; ++c)
                M.col(a * (k + 1) + c) = p1[a]
                                             .cwiseProduct(p2[j - a])
                                             .cwiseProduct(q1[c])
                                             .cwiseProduct(q2[k - c]);

        // Seed coefficient vectors.  Diagonal blocks use real seeds
        // (coefficients with u[c,a] = conj(u[a,c])) so the output basis is
        // real-valued.
        std::vector<Eigen::VectorXcd> seeds;
        if (j == k) {
            for (int a = 0; a <= j; ++a)
                for (int c = a; c <= k; ++c) {
                    if (c == a) {
                        Eigen::VectorXcd u = Eigen::VectorXcd::Zero(nm);
                        u(a * (k + 1) + c) = 1.0;
                        seeds.push_back(std::move(u));
                    } else {
                        Eigen::VectorXcd re = Eigen::VectorXcd::Zero(nm);
                        re(a * (k + 1) + c) = 0.5;
                        re(c * (k + 1) + a) = 0.5;
                        seeds.push_back(std::move(re));
                        Eigen::VectorXcd im = Eigen::VectorXcd::Zero(nm);
                        im(a * (k + 1) + c) = Complex(0.0, 0.5);
                        im(c * (k + 1) + a) = Complex(0.0, -0.5);
                        seeds.push_back(std::move(im));
                    }
                }
        } else {
            for (int m = 0; m < nm; ++m) {
                Eigen::VectorXcd u = Eigen::VectorXcd::Zero(nm);
                u(m) = 1.0;
                seeds.push_back(std::move(u));
            }
        }

        // Chain subspace H_{j-m,k-m}, m = 1..k, lifted into bidegree (j,k).
        int chain_total = 0;
        for (int m = 1; m <= k; ++m) chain_total += j + k + 1 - 2 * m;
        Eigen::MatrixXcd chain_tab(nodes, chain_total);
        Eigen::MatrixXcd chain_mono(nm, chain_total);
        {
            int col = 0;
            for (int m = 1; m <= k; ++m) {
                const auto& src = table->blocks[static_cast<size_t>(
                    table->block_index({j - m, k - m}))];
                chain_tab.middleCols(col, src.dim) = src.tab;
                chain_mono.middleCols(col, src.dim) =
                    lift_mono(src.mono, m, j, k);
                col += src.dim;
            }
        }

        // Gram-Schmidt with reorthogonalization against chain + accepted.
        Eigen::MatrixXcd acc_tab(nodes, dim_expect);
        Eigen::MatrixXcd acc_mono(nm, dim_expect);
        int ndim = 0;
        for (const auto& u : seeds) {
            Eigen::VectorXcd v = M * u;
            Eigen::VectorXcd mu = u;
            const double r0 = std::sqrt(std::abs(wdot(v, v, w)));
            for (int pass = 0; pass < 2; ++pass) {
                if (chain_total > 0) {
                    Eigen::VectorXcd c = chain_tab.adjoint() * (w.asDiagonal() * v);
                    v.noalias() -= chain_tab * c;
                    mu.noalias() -= chain_mono * c;
                }
                if (ndim > 0) {
                    Eigen::VectorXcd c =
                        acc_tab.leftCols(ndim).adjoint() * (w.asDiagonal() * v);
                    v.noalias() -= acc_tab.leftCols(ndim) * c;
                    mu.noalias() -= acc_mono.leftCols(ndim) * c;
                }
            }
            const double r = std::sqrt(std::abs(wdot(v, v, w)));
            if (r <= 1e-8 * (r0 + 1.0)) continue;  // dependent seed
            if (ndim >= dim_expect)
                throw RankDeficiency("block " + mode_str(mode) +
                                     ": dimension exceeds " +
                                     std::to_string(dim_expect));
            acc_tab.col(ndim) = v / r;
            acc_mono.col(ndim) = mu / r;
            ++ndim;
        }
        if (ndim != dim_expect)
            throw RankDeficiency("block " + mode_str(mode) + ": found dimension " +
                                 std::to_string(ndim) + ", expected " +
                                 std::to_string(dim_expect));

        if (j == k) {
            // Scrub floating-point drift off the exact conjugation symmetry.
            Eigen::MatrixXd re_tab = acc_tab.real();
            acc_tab = re_tab.cast<Complex>();
            for (int q = 0; q < ndim; ++q)
                for (int a = 0; a <= j; ++a) {
                    acc_mono(a * (k + 1) + a, q) =
                        acc_mono(a * (k + 1) + a, q).real();
                    for (int c = a + 1; c <= k; ++c) {
                        const Complex s = 0.5 * (acc_mono(a * (k + 1) + c, q) +
                                                 std::conj(acc_mono(c * (k + 1) + a, q)));
                        acc_mono(a * (k + 1) + c, q) = s;
                        acc_mono(c * (k + 1) + a, q) = std::conj(s);
                    }
                }
        }

        BasisTable::Block blk;
        blk.mode = mode;
        blk.dim = ndim;
        blk.tab = std::move(acc_tab);
        blk.mono = std::move(acc_mono);
        finish(std::move(blk));
    }
    return table;
}

double SpectralFunction::coeff_energy() const {
    double e = 0.0;
    for (const auto& c : coeffs) e += c.squaredNorm();
    return e;
}

double SpectralFunction::relative_tail() const {
    return l2_sq > 0.0 ? tail_energy / l2_sq : 0.0;
}

SpectralFunction analyze(const std::shared_ptr<const BasisTable>& table,
                         const GridFunction& f) {
    if (!table) throw PreconditionViolation("analyze: null basis table");
    if (!f.grid) throw PreconditionViolation("analyze: grid function has no grid");
    if (f.grid->band != table->grid->band)
        throw PreconditionViolation("analyze: grid/basis band mismatch");
    SpectralFunction F;
    F.table = table;
    F.is_real = f.is_real;
    const Eigen::VectorXcd wf = table->grid->weight.asDiagonal() * f.values;
    F.coeffs.reserve(table->blocks.size());
    for (const auto& blk : table->blocks)
        F.coeffs.emplace_back(blk.tab.adjoint() * wf);
    F.l2_sq = l2_norm_sq(f);
    F.tail_energy = F.l2_sq - F.coeff_energy();
    return F;
}

GridFunction synthesize(const SpectralFunction& F) {
    if (!F.table) throw PreconditionViolation("synthesize: null basis table");
    GridFunction f;
    f.grid = F.table->grid;
    f.values = Eigen::VectorXcd::Zero(F.table->grid->nodes());
    for (size_t i = 0; i < F.table->blocks.size(); ++i)
        f.values.noalias() += F.table->blocks[i].tab * F.coeffs[i];
    f.is_real = F.is_real;
    if (f.is_real) {
        Eigen::VectorXd re = f.values.real();
        f.values = re.cast<Complex>();
    }
    return f;
}

Eigen::VectorXcd evaluate_at(const SpectralFunction& F,
                             const std::vector<SpherePoint>& points) {
    if (!F.table) throw PreconditionViolation("evaluate_at: null basis table");
    const int band = F.table->band;
    std::vector<Eigen::VectorXcd> poly;
    poly.reserve(F.table->blocks.size());
    for (size_t i = 0; i < F.table->blocks.size(); ++i)
        poly.emplace_back(F.table->blocks[i].mono * F.coeffs[i]);

    Eigen::VectorXcd out(points.size());
    std::vector<Complex> P1(band + 1), P2(band + 1), Q1(band + 1), Q2(band + 1);
    for (size_t idx = 0; idx < points.size(); ++idx) {
        const SpherePoint& p = points[idx];
        if (p.n() != 1)
            throw DomainViolation("evaluate_at: point is not on S^3");
        const Complex z1 = p.zeta(0), z2 = p.zeta(1);
        P1[0] = P2[0] = Q1[0] = Q2[0] = 1.0;
        for (int a = 1; a <= band; ++a) {
            P1[a] = P1[a - 1] * z1;
            P2[a] = P2[a - 1] * z2;
            Q1[a] = Q1[a - 1] * std::conj(z1);
            Q2[a] = Q2[a - 1] * std::conj(z2);
        }
        Complex acc = 0.0;
        for (size_t i = 0; i < poly.size(); ++i) {
            const ModeIndex m = F.table->blocks[i].mode;
            const auto& pl = poly[i];
            for (int a = 0; a <= m.j; ++a) {
                const Complex za = P1[a] * P2[m.j - a];
                for (int c = 0; c <= m.k; ++c)
                    acc += pl(a * (m.k + 1) + c) * za * Q1[c] * Q2[m.k - c];
            }
        }
        out(static_cast<Eigen::Index>(idx)) = acc;
    }
    return out;
}

Complex evaluate_at(const SpectralFunction& F, const SpherePoint& point) {
    return evaluate_at(F, std::vector<SpherePoint>{point})(0);
}

SpectralFunction spectral_zero(const std::shared_ptr<const BasisTable>& table) {
    if (!table) throw PreconditionViolation("spectral_zero: null basis table");
    SpectralFunction F;
    F.table = table;
    F.is_real = true;
    F.coeffs.reserve(table->blocks.size());
    for (const auto& blk : table->blocks)
        F.coeffs.emplace_back(Eigen::VectorXcd::Zero(blk.dim));
    return F;
}

SpectralFunction spectral_add(const SpectralFunction& a, const SpectralFunction& b) {
    require_same_table(a, b);
    SpectralFunction F = a;
    for (size_t i = 0; i < F.coeffs.size(); ++i) F.coeffs[i] += b.coeffs[i];
    F.is_real = a.is_real && b.is_real;
    F.l2_sq = F.coeff_energy();
    F.tail_energy = 0.0;
    return F;
}

SpectralFunction spectral_scale(const SpectralFunction& a, Complex c) {
    SpectralFunction F = a;
    for (auto& v : F.coeffs) v *= c;
    F.is_real = a.is_real && c.imag() == 0.0;
    F.l2_sq = F.coeff_energy();
    F.tail_energy = 0.0;
    return F;
}

Complex spectral_inner(const SpectralFunction& a, const SpectralFunction& b) {
    require_same_table(a, b);
    Complex s = 0.0;
    for (size_t i = 0; i < a.coeffs.size(); ++i) s += b.coeffs[i].dot(a.coeffs[i]);
    return s;
}

SpectralFunction apply_multiplier(const SpectralFunction& F, const Multiplier& m) {
    if (!F.table) throw PreconditionViolation("apply_multiplier: null basis table");
    SpectralFunction G = F;
    for (size_t i = 0; i < G.coeffs.size(); ++i)
        G.coeffs[i] *= m(F.table->blocks[i].mode);
    G.l2_sq = G.coeff_energy();
    G.tail_energy = 0.0;
    return G;
}

SpectralFunction apply_inverse_multiplier(const SpectralFunction& F,
                                          const Multiplier& m, KernelPolicy policy) {
    if (!F.table) throw PreconditionViolation("apply_inverse_multiplier: null basis table");
    SpectralFunction G = F;
    const double total = F.coeff_energy();
    double kernel_energy = 0.0;
    for (size_t i = 0; i < G.coeffs.size(); ++i) {
        const double mv = m(F.table->blocks[i].mode);
        if (mv == 0.0) {
            kernel_energy += G.coeffs[i].squaredNorm();
            G.coeffs[i].setZero();
        } else {
            G.coeffs[i] /= mv;
        }
    }
    if (policy == KernelPolicy::kStrict && kernel_energy > 1e-12 * total)
        throw KernelModePresent(
            "inverse multiplier: kernel modes carry relative energy " +
            std::to_string(total > 0.0 ? kernel_energy / total : 0.0));
    G.l2_sq = G.coeff_energy();
    G.tail_energy = 0.0;
    return G;
}

Multiplier sobolev_multiplier(const InequalityParams& params) {
    return [params](ModeIndex m) { return eigenvalue(params, m); };
}

Multiplier limit_multiplier(int n) {
    return [n](ModeIndex m) {
        if (m.j >= 1 && m.k == 0) return eigenvalue_limit(n, m.j);
        if (m.k >= 1 && m.j == 0) return eigenvalue_limit(n, m.k);
        return 0.0;
    };
}

double sobolev_norm_sq(const SpectralFunction& F, const InequalityParams& params) {
    double s = 0.0;
    for (size_t i = 0; i < F.coeffs.size(); ++i)
        s += eigenvalue(params, F.table->blocks[i].mode) * F.coeffs[i].squaredNorm();
    return s;
}

double negative_norm_sq(const SpectralFunction& F, const InequalityParams& params) {
    double s = 0.0;
    for (size_t i = 0; i < F.coeffs.size(); ++i)
        s += F.coeffs[i].squaredNorm() / eigenvalue(params, F.table->blocks[i].mode);
    return s;
}

double non_pluriharmonic_fraction(const SpectralFunction& F) {
    double total = 0.0, off = 0.0;
    for (size_t i = 0; i < F.coeffs.size(); ++i) {
        const double e = F.coeffs[i].squaredNorm();
        total += e;
        const ModeIndex m = F.table->blocks[i].mode;
        if (m.j >= 1 && m.k >= 1) off += e;
    }
    return total > 0.0 ? off / total : 0.0;
}

double bo_form(const SpectralFunction& F) {
    const double frac = non_pluriharmonic_fraction(F);
    if (frac > 1e-10)
        throw NotPluriharmonic("bo_form: non-pluriharmonic energy fraction " +
                               std::to_string(frac));
    double s = 0.0;
    for (size_t i = 0; i < F.coeffs.size(); ++i) {
        const ModeIndex m = F.table->blocks[i].mode;
        if ((m.j >= 1 && m.k == 0) || (m.k >= 1 && m.j == 0))
            s += eigenvalue_limit(1, std::max(m.j, m.k)) * F.coeffs[i].squaredNorm();
    }
    return s / sphere_measure(1);
}

SpectralFunction pluriharmonic_project(const SpectralFunction& F) {
    SpectralFunction G = F;
    for (size_t i = 0; i < G.coeffs.size(); ++i) {
        const ModeIndex m = F.table->blocks[i].mode;
        if (m.j >= 1 && m.k >= 1) G.coeffs[i].setZero();
    }
    G.l2_sq = G.coeff_energy();
    G.tail_energy = 0.0;
    return G;
}

double sobolev_norm_sq(const std::shared_ptr<const BasisTable>& table,
                       const GridFunction& f, const InequalityParams& params) {
    return sobolev_norm_sq(analyze(table, f), params);
}

double negative_norm_sq(const std::shared_ptr<const BasisTable>& table,
                        const GridFunction& f, const InequalityParams& params) {
    return negative_norm_sq(analyze(table, f), params);
}

double jacobi_poly(int m, double alpha, double beta, double x) {
    if (m < 0) throw DomainViolation("jacobi_poly: negative degree");
    if (m == 0) return 1.0;
    double pm1 = 1.0;
    double p = (alpha + 1.0) + 0.5 * (alpha + beta + 2.0) * (x - 1.0);
    for (int i = 2; i <= m; ++i) {
        const double ab = alpha + beta;
        const double a1 = 2.0 * i * (i + ab) * (2.0 * i + ab - 2.0);
        const double a2 = (2.0 * i + ab - 1.0) * (alpha * alpha - beta * beta);
        const double a3 =
            (2.0 * i + ab - 1.0) * (2.0 * i + ab) * (2.0 * i + ab - 2.0);
        const double a4 = 2.0 * (i + alpha - 1.0) * (i + beta - 1.0) * (2.0 * i + ab);
        const double pn = ((a2 + a3 * x) * p - a4 * pm1) / a1;
        pm1 = p;
        p = pn;
    }
    return p;
}

Complex disk_poly(ModeIndex mode, Complex w) {
    if (mode.j < 0 || mode.k < 0)
        throw DomainViolation("disk_poly: negative mode index");
    const int mn = std::min(mode.j, mode.k);
    const int df = std::abs(mode.j - mode.k);
    // P_m^{(0,df)}(1) == 1, so no normalization denominator is needed.
    const double p = jacobi_poly(mn, 0.0, static_cast<double>(df),
                                 2.0 * std::norm(w) - 1.0);
    Complex ang = 1.0;
    const Complex base = (mode.j >= mode.k) ? w : std::conj(w);
    for (int i = 0; i < df; ++i) ang *= base;
    return ang * p;
}

Complex zonal_kernel(ModeIndex mode, const SpherePoint& zeta, const SpherePoint& eta) {
    const double scale = (mode.j + mode.k + 1) / sphere_measure(1);
    return scale * disk_poly(mode, sphere_inner(zeta, eta));
}

GridFunction apply_zonal_projector(const GridFunction& f, ModeIndex mode) {
    if (!f.grid) throw PreconditionViolation("apply_zonal_projector: no grid");
    const SphereGrid& g = *f.grid;
    const int N = g.nodes();
    GridFunction out;
    out.grid = f.grid;
    out.values.resize(N);
    out.is_real = f.is_real && mode.j == mode.k;
    const double scale = (mode.j + mode.k + 1) / sphere_measure(1);
    for (int i = 0; i < N; ++i) {
        Complex acc = 0.0;
        const Complex zi1 = g.zeta1(i), zi2 = g.zeta2(i);
        for (int l = 0; l < N; ++l) {
            const Complex win =
                zi1 * std::conj(g.zeta1(l)) + zi2 * std::conj(g.zeta2(l));
            acc += g.weight(l) * disk_poly(mode, win) * f.values(l);
        }
        out.values(i) = scale * acc;
    }
    return out;
}

GridFunction basis_function(const std::shared_ptr<const BasisTable>& table,
                            ModeIndex mode, int which) {
    if (!table) throw PreconditionViolation("basis_function: null basis table");
    const int idx = table->block_index(mode);
    if (idx < 0)
        throw DomainViolation("basis_function: mode " + mode_str(mode) +
                              " outside band");
    const auto& blk = table->blocks[static_cast<size_t>(idx)];
    if (which < 0 || which >= blk.dim)
        throw DomainViolation("basis_function: index out of range");
    GridFunction f;
    f.grid = table->grid;
    f.values = blk.tab.col(which);
    f.is_real = (mode.j == mode.k);
    return f;
}

}  // namespace crss
