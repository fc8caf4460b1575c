#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phasefield/quadrature.hpp"
#include "phasefield/space.hpp"

namespace pf {

using ScalarFn = std::function<double(const Point&)>;

// Scalar target with derivatives, used for projection error reporting.
struct SmoothTarget {
    ScalarFn value;
    std::function<Vec2(const Point&)> grad;
    std::function<Sym2(const Point&)> hess;
};

// Local least-squares quasi-interpolant: the coefficient of basis j is read
// off an L^2 fit over the support of basis j. Linear and local, reproduces
// every spline of the space (hence all quadratics) and constants.
// Note: it is a projection, not an interpolant, so targets with values in
// [0,1] may be projected outside [0,1].
SplineField project(const SplineSpace& space, const ScalarFn& target, int quad_points = 4);

// Component-wise projection of a vector target.
SplineField project_vector(const SplineSpace& space, const std::vector<ScalarFn>& components,
                           int quad_points = 4);

// Per-element H^k seminorm errors |v - Pv|_{H^k(K)}, k = 0,1,2; the global
// error is the square root of the sum of squared element errors.
struct ProjectionReport {
    struct Row {
        int element = 0;
        double h_K = 0.0;
        double err[3] = {0.0, 0.0, 0.0};
    };
    std::vector<Row> rows;
    double global[3] = {0.0, 0.0, 0.0};

    std::string to_csv() const;
};

ProjectionReport error_report(const SplineSpace& space, const SmoothTarget& target,
                              const SplineField& projected, const QuadratureRule& rule);

// Element-wise check of the inverse Sobolev bound
//   ||z||_Linf(K) <= C (h^-3 ||z||^2_L2(K) + h^-1 |z|^2_H1(K) + h |z|^2_H2(K))^1/2,
// with C = 1 in rhs; the reported ratios calibrate the empirical constant.
struct SupNormReport {
    struct Row {
        int element = 0;
        double lhs = 0.0;
        double rhs = 0.0;
        double ratio = 0.0;
    };
    std::vector<Row> rows;
    double max_ratio = 0.0;
};

SupNormReport sup_norm_estimate_check(const SplineField& z, const QuadratureRule& rule,
                                      int samples_per_dim = 9);

}  // namespace pf
