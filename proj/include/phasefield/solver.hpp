#pragma once

#include <string>
#include <vector>

#include "phasefield/energy.hpp"
#include "phasefield/space.hpp"

namespace pf {

// Pinned coefficients for the displacement (boundary layers of the spline
// space) and an optional crack seed for the phase field initializer.
struct DirichletData {
    std::vector<int> indices;  // flat indices into SplineField::coeffs
    std::vector<double> values;

    void pin_side(const SplineSpace& space, int components, int component, int axis, int side,
                  double value);
    void apply(SplineField& u) const;
};

struct SolverOptions {
    double rtol = 1e-10;      // u-step CG relative residual
    int max_cg = 0;           // 0: 40 * sqrt(N) + 200
    double pg_tol = 1e-8;     // v-step projected-gradient norm
    int max_pg = 200000;
    double outer_tol = 1e-8;  // staggered loop energy stall
    int max_outer = 200;
};

struct SolveReport {
    int outer_iterations = 0;
    std::vector<double> energy_trace;  // one value per outer iteration, nonincreasing
    EnergyBreakdown final_breakdown;
    bool converged = false;
    double wall_time_s = 0.0;

    std::string to_json() const;
};

// Exact minimization of the quadratic elastic term at fixed v: assembles the
// degraded stiffness and solves by diagonally preconditioned CG, warm-started
// so the energy cannot increase.
SplineField minimize_u(const SplineField& u0, const SplineField& v, const PhaseFieldParams& params,
                       const DirichletData& dirichlet, const QuadratureRule& rule,
                       const SolverOptions& opts);

// Box-constrained quadratic minimization in v by projected gradient descent
// with Barzilai-Borwein steps and backtracking; coefficients stay in [0,1].
SplineField minimize_v(const SplineField& u, const SplineField& v0, const PhaseFieldParams& params,
                       const QuadratureRule& rule, const SolverOptions& opts);

struct SolveResult {
    SplineField u;
    SplineField v;
    SolveReport report;
};

// Staggered minimization from (u0, v0); v0 coefficients are clamped to [0,1]
// on entry, Dirichlet values are imposed on u0. Each accepted half-step is
// verified not to increase the computed energy.
SolveResult alternate_minimize(SplineField u0, SplineField v0, const PhaseFieldParams& params,
                               const DirichletData& dirichlet, const QuadratureRule& rule,
                               const SolverOptions& opts);

// Crack-seed initializer: the 1D recovery transition across the hyperplane
// {x_axis = position}, sampled at Greville points (so coefficients stay in
// [0,1]).
SplineField crack_seed_v(const SplineSpace& vspace, int axis, double position, double eps);

}  // namespace pf
