#include "phasefield/energy.hpp"

#include <cmath>

#include "phasefield/report.hpp"
#include "phasefield/threads.hpp"

namespace pf {

namespace {

void require_compatible(const SplineSpace& a, const SplineSpace& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("energy: spaces have different dimension");
    for (int ax = 0; ax < a.dim(); ++ax) {
        if (a.elements_per_axis(ax) != b.elements_per_axis(ax))
            throw std::invalid_argument("energy: spaces have different meshes");
        if (a.map().lo(ax) != b.map().lo(ax) || a.map().hi(ax) != b.map().hi(ax))
            throw std::invalid_argument("energy: spaces live on different patches");
    }
}

}  // namespace

void PhaseFieldParams::validate() const {
    if (!(eps > 0.0)) throw std::invalid_argument("PhaseFieldParams: eps must be positive");
    if (eta < 0.0) throw std::invalid_argument("PhaseFieldParams: eta must be nonnegative");
    if (!(gc > 0.0)) throw std::invalid_argument("PhaseFieldParams: gc must be positive");
    if (law == ElasticLaw::Isotropic2D && (!(mu > 0.0) || lambda < 0.0))
        throw std::invalid_argument("PhaseFieldParams: need mu > 0, lambda >= 0");
}

std::string EnergyBreakdown::csv_header() {
    return "eps,h,eta,elastic,reaction,gradient,laplacian,total\n";
}

std::string EnergyBreakdown::to_csv_row(double eps, double h, double eta) const {
    return csv_line({format_double(eps), format_double(h), format_double(eta), format_double(elastic),
                     format_double(reaction), format_double(gradient), format_double(laplacian),
                     format_double(total)});
}

double elastic_density_from_strain(const PhaseFieldParams& params, const Sym2& E) {
    if (params.law == ElasticLaw::Scalar) return 0.5 * E.frobenius_sq();
    const double tr = E.trace();
    return params.mu * E.frobenius_sq() + 0.5 * params.lambda * tr * tr;
}

double elastic_energy(const SplineField& u, const SplineField& v, const PhaseFieldParams& params,
                      const QuadratureRule& rule) {
    params.validate();
    require_compatible(*u.space, *v.space);
    if (params.law == ElasticLaw::Scalar && u.components != 1)
        throw std::invalid_argument("elastic_energy: scalar law expects one displacement component");
    if (params.law == ElasticLaw::Isotropic2D && u.components != u.space->dim())
        throw std::invalid_argument("elastic_energy: vector law expects dim components");

    const SplineSpace& us = *u.space;
    const int ne = us.num_elements();
    std::vector<double> partial(ne, 0.0);
    parallel_for(ne, [&](int e) {
        const auto eq = element_quadrature(us, rule, e);
        double s = 0.0;
        for (size_t i = 0; i < eq.points.size(); ++i) {
            const Point& x = eq.points[i];
            double W;
            if (params.law == ElasticLaw::Scalar) {
                const Deriv du = eval_field(u, x, 1);
                W = 0.5 * norm_sq(du.grad);
            } else {
                const Deriv dx = eval_field(u, x, 1, 0);
                const Deriv dy = eval_field(u, x, 1, 1);
                const Sym2 E{dx.grad[0], 0.5 * (dx.grad[1] + dy.grad[0]), dy.grad[1]};
                W = elastic_density_from_strain(params, E);
            }
            const double vv = eval_field(v, x, 0).value;
            s += eq.weights[i] * (vv * vv + params.eta) * W;
        }
        partial[e] = s;
    });
    double total = 0.0;
    for (int e = 0; e < ne; ++e) total += partial[e];
    return total;
}

std::array<double, 3> phase_energy(const SplineField& v, double eps, const QuadratureRule& rule) {
    if (v.components != 1) throw std::invalid_argument("phase_energy: v must be scalar");
    const SplineSpace& s = *v.space;
    const int ne = s.num_elements();
    std::vector<std::array<double, 3>> partial(ne, {0.0, 0.0, 0.0});
    parallel_for(ne, [&](int e) {
        const auto eq = element_quadrature(s, rule, e);
        std::array<double, 3> acc{0.0, 0.0, 0.0};
        for (size_t i = 0; i < eq.points.size(); ++i) {
            const Deriv d = eval_field(v, eq.points[i], 2);
            const double w = eq.weights[i];
            const double m = d.value - 1.0;
            const double lap = d.laplacian();
            acc[0] += w * m * m;
            acc[1] += w * norm_sq(d.grad);
            acc[2] += w * lap * lap;
        }
        partial[e] = acc;
    });
    std::array<double, 3> sum{0.0, 0.0, 0.0};
    for (int e = 0; e < ne; ++e)
        for (int k = 0; k < 3; ++k) sum[k] += partial[e][k];
    return {sum[0] / eps, 2.0 * eps * sum[1], eps * eps * eps * sum[2]};
}

void check_box_constraint(const SplineField& v, const PhaseFieldParams& params) {
    if (params.check == ConstraintCheck::Coefficients) {
        for (int j = 0; j < v.space->num_basis(); ++j) {
            const double c = v.coeff(j);
            if (c < 0.0 || c > 1.0) {
                throw BoxConstraintViolation(
                    "phase field coefficient " + std::to_string(j) + " = " + format_double(c) +
                        " outside [0,1]",
                    v.space->greville(j), c);
            }
        }
        return;
    }
    const SplineSpace& s = *v.space;
    const int n = params.samples_per_dim;
    const double tol = 1e-12;
    for (int e = 0; e < s.num_elements(); ++e) {
        Point lo, hi;
        s.element_box(e, lo, hi);
        const int ny = s.dim() == 2 ? n : 1;
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                Point p{lo[0] + (hi[0] - lo[0]) * ix / (n - 1.0),
                        s.dim() == 2 ? lo[1] + (hi[1] - lo[1]) * iy / (ny - 1.0) : 0.0};
                const double val = eval_field(v, p, 0).value;
                if (val < -tol || val > 1.0 + tol)
                    throw BoxConstraintViolation("phase field value " + format_double(val) +
                                                     " outside [0,1] at sample point",
                                                 p, val);
            }
    }
}

EnergyBreakdown total_energy(const SplineField& u, const SplineField& v,
                             const PhaseFieldParams& params, const QuadratureRule& rule) {
    params.validate();
    check_box_constraint(v, params);
    EnergyBreakdown b;
    b.elastic = elastic_energy(u, v, params, rule);
    const auto ph = phase_energy(v, params.eps, rule);
    b.reaction = ph[0];
    b.gradient = ph[1];
    b.laplacian = ph[2];
    b.total = b.elastic + 0.25 * params.gc * (b.reaction + b.gradient + b.laplacian);
    return b;
}

LaplacianHessianResult laplacian_hessian_check(const SplineField& v, const QuadratureRule& rule) {
    const SplineSpace& s = *v.space;
    double lap2 = 0.0, hess2 = 0.0;
    for (int e = 0; e < s.num_elements(); ++e) {
        const auto eq = element_quadrature(s, rule, e);
        for (size_t i = 0; i < eq.points.size(); ++i) {
            const Deriv d = eval_field(v, eq.points[i], 2);
            const double lap = d.laplacian();
            lap2 += eq.weights[i] * lap * lap;
            hess2 += eq.weights[i] * d.hess.frobenius_sq();
        }
    }
    const double scale = std::max(lap2, hess2);
    return {lap2, hess2, scale > 0.0 ? std::abs(lap2 - hess2) / scale : 0.0};
}

void zero_boundary_layers(SplineField& v, int layers) {
    const SplineSpace& s = *v.space;
    for (int j = 0; j < s.num_basis(); ++j) {
        auto [jx, jy] = s.basis_coords(j);
        bool boundary = jx < layers || jx >= s.basis_per_axis(0) - layers;
        if (s.dim() == 2) boundary = boundary || jy < layers || jy >= s.basis_per_axis(1) - layers;
        if (boundary)
            for (int c = 0; c < v.components; ++c) v.coeff(j, c) = 0.0;
    }
}

}  // namespace pf
