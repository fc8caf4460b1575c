#pragma once

#include <array>
#include <string>

#include "phasefield/errors.hpp"
#include "phasefield/quadrature.hpp"
#include "phasefield/space.hpp"

namespace pf {

enum class ElasticLaw {
    Scalar,       // antiplane density 1/2 |grad u|^2, one displacement component
    Isotropic2D,  // W(E) = mu |E|^2 + lambda/2 (tr E)^2 on the symmetric gradient
};

enum class ConstraintCheck {
    Coefficients,  // coefficient bounds; sufficient via the convex-hull property
    Sample,        // dense value sampling; used when validating repaired fields
};

struct PhaseFieldParams {
    double eps = 0.1;
    double eta = 0.0;
    double gc = 4.0;  // default 4 matches the normalized functionals
    ElasticLaw law = ElasticLaw::Scalar;
    double mu = 1.0;
    double lambda = 0.0;
    ConstraintCheck check = ConstraintCheck::Coefficients;
    int samples_per_dim = 5;

    void validate() const;
};

// Per-term values of the discrete functional. The three surface terms carry
// their eps-weights but not the toughness: total = elastic + gc/4 * (sum).
struct EnergyBreakdown {
    double elastic = 0.0;
    double reaction = 0.0;   // eps^-1 |v-1|^2
    double gradient = 0.0;   // 2 eps |grad v|^2
    double laplacian = 0.0;  // eps^3 |lap v|^2
    double total = 0.0;

    std::string to_csv_row(double eps, double h, double eta) const;
    static std::string csv_header();
};

// Elastic density W at a strain; Scalar mode treats E.xx as 1/2|grad u|^2
// carrier, so use elastic_density for fields instead.
double elastic_density_from_strain(const PhaseFieldParams& params, const Sym2& E);

// (v^2 + eta) W(eps(u)) integrated over the patch.
double elastic_energy(const SplineField& u, const SplineField& v, const PhaseFieldParams& params,
                      const QuadratureRule& rule);

// The three surface terms of the phase energy for a scalar field v.
std::array<double, 3> phase_energy(const SplineField& v, double eps, const QuadratureRule& rule);

// Full breakdown; throws BoxConstraintViolation when v leaves [0,1] (the
// "+infinity" branch of the constrained functional).
EnergyBreakdown total_energy(const SplineField& u, const SplineField& v,
                             const PhaseFieldParams& params, const QuadratureRule& rule);

// Checks 0 <= v <= 1 according to params.check; throws on violation.
void check_box_constraint(const SplineField& v, const PhaseFieldParams& params);

// int |lap v|^2 vs int |D^2 v|^2; they agree for fields with H^2_0-type
// support (two zero coefficient layers at the boundary).
struct LaplacianHessianResult {
    double int_lap_sq = 0.0;
    double int_hess_sq = 0.0;
    double rel_diff = 0.0;
};

LaplacianHessianResult laplacian_hessian_check(const SplineField& v, const QuadratureRule& rule);

// Zeroes the outermost `layers` coefficient layers (used to construct
// H^2_0-type fields).
void zero_boundary_layers(SplineField& v, int layers);

}  // namespace pf
