#include "crss/conformal.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "crss/errors.hpp"

namespace crss {
namespace {

constexpr double kChartGuard = 1e-6;  // extremizer charts stay inside |xi| <= 1 - guard

SpherePoint apply_generator(const Generator& g, const SpherePoint& p) {
    if (std::holds_alternative<RotationGen>(g)) {
        if (p.n() != 1)
            throw DomainViolation("rotation generator requires a point on S^3");
        return make_sphere_point(std::get<RotationGen>(g).u * p.zeta);
    }
    if (std::holds_alternative<TranslationGen>(g)) {
        const GroupPoint w = cayley_inverse(p);
        return cayley(group_multiply(std::get<TranslationGen>(g).point, w));
    }
    const GroupPoint w = cayley_inverse(p);
    return cayley(dilate(w, std::get<DilationGen>(g).delta));
}

double generator_jacobian(const Generator& g, const SpherePoint& p) {
    if (std::holds_alternative<RotationGen>(g)) return 1.0;
    const GroupPoint w = cayley_inverse(p);
    const double q_hom = 2.0 * w.n() + 2.0;
    if (std::holds_alternative<TranslationGen>(g)) {
        const GroupPoint image = group_multiply(std::get<TranslationGen>(g).point, w);
        return cayley_jacobian(image) / cayley_jacobian(w);
    }
    const double delta = std::get<DilationGen>(g).delta;
    const GroupPoint image = dilate(w, delta);
    return cayley_jacobian(image) * std::pow(delta, q_hom) / cayley_jacobian(w);
}

Eigen::Vector2cd require_chart(const Eigen::Vector2cd& xi) {
    if (xi.norm() > 1.0 - kChartGuard)
        throw DomainViolation("extremizer chart point has |xi| > 1 - 1e-6");
    return xi;
}

// 1 - <xi, zeta> on every grid node.
Eigen::VectorXcd chart_factor(const SphereGrid& g, const Eigen::Vector2cd& xi) {
    return Eigen::VectorXcd::Ones(g.nodes()) - xi(0) * g.zeta1.conjugate() -
           xi(1) * g.zeta2.conjugate();
}

nlohmann::ordered_json complex_to_json(Complex z) {
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

Complex complex_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw IoError("conformal word: complex entry must be a [re, im] pair");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

Generator make_rotation(const Eigen::Matrix2cd& u) {
    const double defect =
        (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
    if (!(defect <= 1e-9))
        throw DomainViolation("rotation generator is not unitary (defect " +
                              std::to_string(defect) + ")");
    return RotationGen{u};
}

Generator make_translation(const GroupPoint& point) {
    return TranslationGen{point};
}

Generator make_dilation(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw DomainViolation("dilation generator requires delta > 0");
    return DilationGen{delta};
}

ConformalMap inverse(const ConformalMap& map) {
    ConformalMap inv;
    inv.word.reserve(map.word.size());
    for (auto it = map.word.rbegin(); it != map.word.rend(); ++it) {
        if (std::holds_alternative<RotationGen>(*it))
            inv.word.push_back(RotationGen{std::get<RotationGen>(*it).u.adjoint()});
        else if (std::holds_alternative<TranslationGen>(*it))
            inv.word.push_back(
                TranslationGen{group_inverse(std::get<TranslationGen>(*it).point)});
        else
            inv.word.push_back(DilationGen{1.0 / std::get<DilationGen>(*it).delta});
    }
    return inv;
}

SpherePoint apply_map(const ConformalMap& map, const SpherePoint& p) {
    SpherePoint cur = p;
    for (const auto& g : map.word) cur = apply_generator(g, cur);
    return cur;
}

std::pair<SpherePoint, double> apply_with_jacobian(const ConformalMap& map,
                                                   const SpherePoint& p) {
    SpherePoint cur = p;
    double jac = 1.0;
    for (const auto& g : map.word) {
        jac *= generator_jacobian(g, cur);
        cur = apply_generator(g, cur);
    }
    return {cur, jac};
}

double jacobian(const ConformalMap& map, const SpherePoint& p) {
    return apply_with_jacobian(map, p).second;
}

std::vector<SpherePoint> mapped_points(const ConformalMap& map,
                                       const SphereGrid& grid) {
    std::vector<SpherePoint> pts;
    pts.reserve(static_cast<size_t>(grid.nodes()));
    for (int i = 0; i < grid.nodes(); ++i) pts.push_back(apply_map(map, grid.point(i)));
    return pts;
}

GridFunction jacobian_grid(const ConformalMap& map,
                           const std::shared_ptr<const SphereGrid>& grid) {
    if (!grid) throw PreconditionViolation("jacobian_grid: null grid");
    GridFunction j;
    j.grid = grid;
    j.values.resize(grid->nodes());
    for (int i = 0; i < grid->nodes(); ++i)
        j.values(i) = jacobian(map, grid->point(i));
    j.is_real = true;
    return j;
}

TransformDiagnostics map_diagnostics(const ConformalMap& map, const SphereGrid& grid) {
    TransformDiagnostics d;
    double jmin = std::numeric_limits<double>::infinity();
    double jmax = 0.0;
    for (int i = 0; i < grid.nodes(); ++i) {
        const double j = jacobian(map, grid.point(i));
        jmin = std::min(jmin, j);
        jmax = std::max(jmax, j);
    }
    d.min_jacobian = jmin;
    d.max_jacobian = jmax;
    const double q_hom = 2.0 * 1 + 2.0;  // S^3
    const double rho = std::pow(jmax / jmin, 1.0 / q_hom);
    d.r_eff = (rho - 1.0) / (rho + 1.0);
    return d;
}

GridFunction act_power(const SpectralFunction& f, const ConformalMap& map,
                       double exponent) {
    if (!f.table) throw PreconditionViolation("act_power: spectral function has no table");
    const auto grid = f.table->grid;
    const int N = grid->nodes();
    std::vector<SpherePoint> pts;
    pts.reserve(static_cast<size_t>(N));
    Eigen::VectorXd jac(N);
    for (int i = 0; i < N; ++i) {
        auto [q, j] = apply_with_jacobian(map, grid->point(i));
        pts.push_back(std::move(q));
        jac(i) = j;
    }
    Eigen::VectorXcd vals = evaluate_at(f, pts);
    GridFunction h;
    h.grid = grid;
    h.values.resize(N);
    for (int i = 0; i < N; ++i)
        h.values(i) = vals(i) * std::pow(jac(i), exponent);
    h.is_real = f.is_real;
    if (h.is_real) {
        Eigen::VectorXd re = h.values.real();
        h.values = re.cast<Complex>();
    }
    return h;
}

GridFunction act_q(const SpectralFunction& f, const ConformalMap& map,
                   const InequalityParams& params) {
    return act_power(f, map, 1.0 / params.q);
}

GridFunction act_p(const SpectralFunction& f, const ConformalMap& map,
                   const InequalityParams& params) {
    return act_power(f, map, 1.0 / params.p);
}

GridFunction act_log(const SpectralFunction& f, const ConformalMap& map) {
    if (!f.table) throw PreconditionViolation("act_log: spectral function has no table");
    const auto grid = f.table->grid;
    const int N = grid->nodes();
    std::vector<SpherePoint> pts;
    pts.reserve(static_cast<size_t>(N));
    Eigen::VectorXd jac(N);
    for (int i = 0; i < N; ++i) {
        auto [q, j] = apply_with_jacobian(map, grid->point(i));
        pts.push_back(std::move(q));
        jac(i) = j;
    }
    Eigen::VectorXcd vals = evaluate_at(f, pts);
    GridFunction h;
    h.grid = grid;
    h.values.resize(N);
    for (int i = 0; i < N; ++i) h.values(i) = vals(i) + std::log(jac(i));
    h.is_real = f.is_real;
    if (h.is_real) {
        Eigen::VectorXd re = h.values.real();
        h.values = re.cast<Complex>();
    }
    return h;
}

GridFunction extremizer_fs(const std::shared_ptr<const SphereGrid>& grid,
                           const InequalityParams& params, double c,
                           const Eigen::Vector2cd& xi) {
    if (!grid) throw PreconditionViolation("extremizer_fs: null grid");
    require_chart(xi);
    const double expo = -(params.Q - params.s) / 2.0;
    const Eigen::VectorXcd b = chart_factor(*grid, xi);
    GridFunction f;
    f.grid = grid;
    f.values.resize(grid->nodes());
    for (int i = 0; i < grid->nodes(); ++i)
        f.values(i) = c * std::pow(std::abs(b(i)), expo);
    f.is_real = true;
    return f;
}

GridFunction extremizer_hls(const std::shared_ptr<const SphereGrid>& grid,
                            const InequalityParams& params, double c,
                            const Eigen::Vector2cd& xi) {
    if (!grid) throw PreconditionViolation("extremizer_hls: null grid");
    require_chart(xi);
    const double expo = -(params.Q + params.s) / 2.0;
    const Eigen::VectorXcd b = chart_factor(*grid, xi);
    GridFunction f;
    f.grid = grid;
    f.values.resize(grid->nodes());
    for (int i = 0; i < grid->nodes(); ++i)
        f.values(i) = c * std::pow(std::abs(b(i)), expo);
    f.is_real = true;
    return f;
}

GridFunction extremizer_bo(const std::shared_ptr<const SphereGrid>& grid, double c,
                           const Eigen::Vector2cd& xi) {
    if (!grid) throw PreconditionViolation("extremizer_bo: null grid");
    if (!(c > 0.0)) throw DomainViolation("extremizer_bo: amplitude must be positive");
    require_chart(xi);
    const double q_hom = 4.0;  // S^3
    const Eigen::VectorXcd b = chart_factor(*grid, xi);
    GridFunction f;
    f.grid = grid;
    f.values.resize(grid->nodes());
    for (int i = 0; i < grid->nodes(); ++i)
        f.values(i) = std::log(c) - q_hom * std::log(std::abs(b(i)));
    f.is_real = true;
    return f;
}

double extremizer_fs_norm_sq(const InequalityParams& params, double c,
                             double xi_norm_sq) {
    if (params.n != 1)
        throw DomainViolation("extremizer_fs_norm_sq: closed form requires n = 1");
    if (xi_norm_sq < 0.0 || std::sqrt(xi_norm_sq) > 1.0 - kChartGuard)
        throw DomainViolation("extremizer_fs_norm_sq: |xi| outside chart");
    const double lam00 = eigenvalue(params, {0, 0});
    return c * c * lam00 * sphere_measure(params.n) *
           std::pow(1.0 - xi_norm_sq, -(params.Q - params.s) / 2.0);
}

double extremizer_fs_q_norm(const InequalityParams& params, double c,
                            double xi_norm_sq) {
    if (params.n != 1)
        throw DomainViolation("extremizer_fs_q_norm: closed form requires n = 1");
    if (xi_norm_sq < 0.0 || std::sqrt(xi_norm_sq) > 1.0 - kChartGuard)
        throw DomainViolation("extremizer_fs_q_norm: |xi| outside chart");
    return c * std::pow(sphere_measure(params.n), 1.0 / params.q) *
           std::pow(1.0 - xi_norm_sq, -params.Q / (2.0 * params.q));
}

nlohmann::ordered_json word_to_json(const ConformalMap& map) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& g : map.word) {
        nlohmann::ordered_json e;
        if (std::holds_alternative<RotationGen>(g)) {
            const auto& u = std::get<RotationGen>(g).u;
            e["type"] = "rotation";
            e["matrix"] = nlohmann::ordered_json::array(
                {nlohmann::ordered_json::array(
                     {complex_to_json(u(0, 0)), complex_to_json(u(0, 1))}),
                 nlohmann::ordered_json::array(
                     {complex_to_json(u(1, 0)), complex_to_json(u(1, 1))})});
        } else if (std::holds_alternative<TranslationGen>(g)) {
            const auto& p = std::get<TranslationGen>(g).point;
            e["type"] = "translation";
            nlohmann::ordered_json z = nlohmann::ordered_json::array();
            for (int i = 0; i < p.z.size(); ++i) z.push_back(complex_to_json(p.z(i)));
            e["z"] = z;
            e["t"] = p.t;
        } else {
            e["type"] = "dilation";
            e["delta"] = std::get<DilationGen>(g).delta;
        }
        arr.push_back(e);
    }
    return arr;
}

ConformalMap word_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_array()) throw IoError("conformal word: expected a JSON array");
    ConformalMap map;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("type") || !e["type"].is_string())
            throw IoError("conformal word: generator must be an object with a type");
        const std::string type = e["type"].get<std::string>();
        if (type == "rotation") {
            if (!e.contains("matrix") || !e["matrix"].is_array() ||
                e["matrix"].size() != 2)
                throw IoError("conformal word: rotation needs a 2x2 matrix");
            Eigen::Matrix2cd u;
            for (int r = 0; r < 2; ++r) {
                const auto& row = e["matrix"][static_cast<size_t>(r)];
                if (!row.is_array() || row.size() != 2)
                    throw IoError("conformal word: rotation needs a 2x2 matrix");
                for (int c = 0; c < 2; ++c)
                    u(r, c) = complex_from_json(row[static_cast<size_t>(c)]);
            }
            map.word.push_back(make_rotation(u));
        } else if (type == "translation") {
            if (!e.contains("z") || !e["z"].is_array() || !e.contains("t") ||
                !e["t"].is_number())
                throw IoError("conformal word: translation needs z (array) and t");
            Eigen::VectorXcd z(static_cast<Eigen::Index>(e["z"].size()));
            for (size_t i = 0; i < e["z"].size(); ++i)
                z(static_cast<Eigen::Index>(i)) = complex_from_json(e["z"][i]);
            map.word.push_back(make_translation(make_group_point(z, e["t"].get<double>())));
        } else if (type == "dilation") {
            if (!e.contains("delta") || !e["delta"].is_number())
                throw IoError("conformal word: dilation needs delta");
            map.word.push_back(make_dilation(e["delta"].get<double>()));
        } else {
            throw IoError("conformal word: unknown generator type '" + type + "'");
        }
    }
    return map;
}

}  // namespace crss
