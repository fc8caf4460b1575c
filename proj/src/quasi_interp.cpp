#include "phasefield/quasi_interp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "phasefield/report.hpp"
#include "phasefield/threads.hpp"

namespace pf {

namespace {

// Quadrature layout over the support of one basis function: local basis set,
// points (parametric, per axis) and the Gram factorization of the local
// basis restricted to that support. For uniform knot vectors the layout is
// translation invariant, so it is cached by the clamp distances to each end.
struct LocalSolve {
    int nloc_x = 0, nloc_y = 0;                // local basis counts per axis
    std::vector<double> bval_x, dummy;         // bval_x[qx * nloc_x + a]
    std::vector<double> bval_y;                // bval_y[qy * nloc_y + a]
    std::vector<double> wx, wy;                // per-axis quadrature weights
    Eigen::LDLT<Eigen::MatrixXd> gram;
};

struct AxisLayout {
    int first_basis = 0;
    int first_elem = 0, last_elem = 0;
    std::vector<double> points;   // parametric
    std::vector<double> weights;  // parametric
    int nloc = 0;
    std::vector<double> bval;     // bval[q * nloc + a]
};

AxisLayout axis_layout(const KnotVector& kv, int j, const QuadratureRule& rule) {
    AxisLayout L;
    auto [el, eh] = kv.basis_element_range(j);
    L.first_elem = el;
    L.last_elem = eh;
    L.first_basis = kv.first_basis_on_element(el);
    const int last_basis = kv.first_basis_on_element(eh) + KnotVector::degree;
    L.nloc = last_basis - L.first_basis + 1;
    for (int e = el; e <= eh; ++e) {
        auto [a, b] = kv.element_interval(e);
        for (int i = 0; i < rule.q; ++i) {
            L.points.push_back(a + (b - a) * rule.nodes[i]);
            L.weights.push_back((b - a) * rule.weights[i]);
        }
    }
    std::array<std::array<double, 3>, 3> vals{};
    L.bval.assign(L.points.size() * L.nloc, 0.0);
    for (size_t q = 0; q < L.points.size(); ++q) {
        const int fb = kv.eval(L.points[q], 0, vals);
        for (int i = 0; i < 3; ++i) {
            const int a = fb + i - L.first_basis;
            L.bval[q * L.nloc + a] = vals[0][i];
        }
    }
    return L;
}

bool is_uniform(const KnotVector& kv) {
    return kv.max_element_width() - kv.min_element_width() < 1e-12 * kv.max_element_width();
}

}  // namespace

SplineField project(const SplineSpace& space, const ScalarFn& target, int quad_points) {
    const QuadratureRule rule(quad_points);
    const int dim = space.dim();
    const int nbx = space.basis_per_axis(0);
    const int nby = dim == 2 ? space.basis_per_axis(1) : 1;

    const bool cache_ok = is_uniform(space.axis(0)) && (dim == 1 || is_uniform(space.axis(1)));
    std::map<std::array<int, 4>, Eigen::LDLT<Eigen::MatrixXd>> gram_cache;

    auto clampd = [](int j, int nb) {
        return std::array<int, 2>{std::min(j, 4), std::min(nb - 1 - j, 4)};
    };

    SplineField out(space, 1);
    const int nb = space.num_basis();
    std::vector<AxisLayout> lay_x(nbx), lay_y(nby);
    for (int jx = 0; jx < nbx; ++jx) lay_x[jx] = axis_layout(space.axis(0), jx, rule);
    if (dim == 2)
        for (int jy = 0; jy < nby; ++jy) lay_y[jy] = axis_layout(space.axis(1), jy, rule);
    else {
        lay_y[0].nloc = 1;
        lay_y[0].points = {0.0};
        lay_y[0].weights = {1.0};
        lay_y[0].bval = {1.0};
    }

    for (int j = 0; j < nb; ++j) {
        const auto [jx, jy] = space.basis_coords(j);
        const AxisLayout& LX = lay_x[jx];
        const AxisLayout& LY = lay_y[dim == 2 ? jy : 0];
        const int nloc = LX.nloc * LY.nloc;
        const size_t nqx = LX.points.size();
        const size_t nqy = LY.points.size();

        // Gram matrix of the local tensor basis over the support, factored
        // once per clamp signature when the mesh is uniform.
        std::array<int, 4> key{clampd(jx, nbx)[0], clampd(jx, nbx)[1], 0, 0};
        if (dim == 2) {
            const auto cy = clampd(jy, nby);
            key[2] = cy[0];
            key[3] = cy[1];
        }
        const Eigen::LDLT<Eigen::MatrixXd>* fact = nullptr;
        Eigen::LDLT<Eigen::MatrixXd> local_fact;
        auto assemble_gram = [&]() {
            Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nloc, nloc);
            for (size_t qy = 0; qy < nqy; ++qy)
                for (size_t qx = 0; qx < nqx; ++qx) {
                    const double w = LX.weights[qx] * LY.weights[qy];
                    for (int ay = 0; ay < LY.nloc; ++ay)
                        for (int ax = 0; ax < LX.nloc; ++ax) {
                            const double va = LX.bval[qx * LX.nloc + ax] * LY.bval[qy * LY.nloc + ay];
                            const int a = ay * LX.nloc + ax;
                            for (int by = 0; by < LY.nloc; ++by)
                                for (int bx = 0; bx < LX.nloc; ++bx) {
                                    const double vb =
                                        LX.bval[qx * LX.nloc + bx] * LY.bval[qy * LY.nloc + by];
                                    G(a, by * LX.nloc + bx) += w * va * vb;
                                }
                        }
                }
            return Eigen::LDLT<Eigen::MatrixXd>(G);
        };
        if (cache_ok) {
            auto it = gram_cache.find(key);
            if (it == gram_cache.end()) it = gram_cache.emplace(key, assemble_gram()).first;
            fact = &it->second;
        } else {
            local_fact = assemble_gram();
            fact = &local_fact;
        }

        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nloc);
        for (size_t qy = 0; qy < nqy; ++qy)
            for (size_t qx = 0; qx < nqx; ++qx) {
                Point p{LX.points[qx], dim == 2 ? LY.points[qy] : 0.0};
                const double f = target(space.map().to_physical(p));
                const double w = LX.weights[qx] * LY.weights[qy] * f;
                for (int ay = 0; ay < LY.nloc; ++ay)
                    for (int ax = 0; ax < LX.nloc; ++ax)
                        rhs[ay * LX.nloc + ax] +=
                            w * LX.bval[qx * LX.nloc + ax] * LY.bval[qy * LY.nloc + ay];
            }

        const Eigen::VectorXd a = fact->solve(rhs);
        const int loc = (dim == 2 ? (jy - LY.first_basis) * LX.nloc : 0) + (jx - LX.first_basis);
        out.coeff(j) = a[loc];
    }
    return out;
}

SplineField project_vector(const SplineSpace& space, const std::vector<ScalarFn>& components,
                           int quad_points) {
    SplineField out(space, static_cast<int>(components.size()));
    for (size_t c = 0; c < components.size(); ++c) {
        const SplineField fc = project(space, components[c], quad_points);
        for (int j = 0; j < space.num_basis(); ++j) out.coeff(j, static_cast<int>(c)) = fc.coeff(j);
    }
    return out;
}

std::string ProjectionReport::to_csv() const {
    std::string s = "element,h_K,err_L2,err_H1,err_H2\n";
    for (const auto& r : rows) {
        s += csv_line({std::to_string(r.element), format_double(r.h_K), format_double(r.err[0]),
                       format_double(r.err[1]), format_double(r.err[2])});
    }
    return s;
}

ProjectionReport error_report(const SplineSpace& space, const SmoothTarget& target,
                              const SplineField& projected, const QuadratureRule& rule) {
    ProjectionReport rep;
    const int ne = space.num_elements();
    rep.rows.resize(ne);
    double acc[3] = {0.0, 0.0, 0.0};
    parallel_for(ne, [&](int e) {
        const auto eq = element_quadrature(space, rule, e);
        double s[3] = {0.0, 0.0, 0.0};
        for (size_t i = 0; i < eq.points.size(); ++i) {
            const Point& x = eq.points[i];
            const double w = eq.weights[i];
            const Deriv d = eval_field(projected, x, 2);
            const double e0 = target.value(x) - d.value;
            const Vec2 g = target.grad(x);
            const Vec2 e1{g[0] - d.grad[0], g[1] - d.grad[1]};
            const Sym2 H = target.hess(x);
            const Sym2 e2{H.xx - d.hess.xx, H.xy - d.hess.xy, H.yy - d.hess.yy};
            s[0] += w * e0 * e0;
            s[1] += w * norm_sq(e1);
            s[2] += w * e2.frobenius_sq();
        }
        Point lo, hi;
        space.element_box(e, lo, hi);
        double d2 = 0.0;
        for (int a = 0; a < space.dim(); ++a) d2 += (hi[a] - lo[a]) * (hi[a] - lo[a]);
        rep.rows[e] = {e, std::sqrt(d2), {std::sqrt(s[0]), std::sqrt(s[1]), std::sqrt(s[2])}};
    });
    for (const auto& r : rep.rows)
        for (int k = 0; k < 3; ++k) acc[k] += r.err[k] * r.err[k];
    for (int k = 0; k < 3; ++k) rep.global[k] = std::sqrt(acc[k]);
    return rep;
}

SupNormReport sup_norm_estimate_check(const SplineField& z, const QuadratureRule& rule,
                                      int samples_per_dim) {
    const SplineSpace& space = *z.space;
    const double h = space.mesh_size();
    SupNormReport rep;
    rep.rows.resize(space.num_elements());
    parallel_for(space.num_elements(), [&](int e) {
        Point lo, hi;
        space.element_box(e, lo, hi);
        double sup = 0.0;
        const int ny = space.dim() == 2 ? samples_per_dim : 1;
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < samples_per_dim; ++ix) {
                Point p{lo[0] + (hi[0] - lo[0]) * ix / (samples_per_dim - 1.0),
                        space.dim() == 2 ? lo[1] + (hi[1] - lo[1]) * iy / (ny - 1.0) : 0.0};
                sup = std::max(sup, std::abs(eval_field(z, p, 0).value));
            }
        const auto eq = element_quadrature(space, rule, e);
        double l2 = 0.0, h1 = 0.0, h2 = 0.0;
        for (size_t i = 0; i < eq.points.size(); ++i) {
            const Deriv d = eval_field(z, eq.points[i], 2);
            l2 += eq.weights[i] * d.value * d.value;
            h1 += eq.weights[i] * norm_sq(d.grad);
            h2 += eq.weights[i] * d.hess.frobenius_sq();
        }
        const double rhs = std::sqrt(l2 / (h * h * h) + h1 / h + h * h2);
        rep.rows[e] = {e, sup, rhs, rhs > 0.0 ? sup / rhs : 0.0};
    });
    for (const auto& r : rep.rows) rep.max_ratio = std::max(rep.max_ratio, r.ratio);
    return rep;
}

}  // namespace pf
