#pragma once

#include <functional>
#include <vector>

#include "phasefield/space.hpp"

namespace pf {

// Gauss-Legendre rule with q points per direction per element; exact for
// polynomials of degree <= 2q-1 on each element.
struct QuadratureRule {
    int q = 4;
    std::vector<double> nodes;    // on (0,1)
    std::vector<double> weights;  // sum to 1

    explicit QuadratureRule(int points = 4);
};

// Quadrature points of one element, in physical coordinates. Points are
// ordered lexicographically (x fastest) so sums are reproducible.
struct ElementQuadrature {
    std::vector<Point> points;
    std::vector<double> weights;  // include the physical cell measure
};

ElementQuadrature element_quadrature(const SplineSpace& space, const QuadratureRule& rule, int element);

// Integral over the physical patch: per-element partial sums evaluated in a
// fixed element order, then reduced in that order (bitwise reproducible, and
// safe to parallelize over elements).
double integrate(const SplineSpace& space, const QuadratureRule& rule,
                 const std::function<double(const Point&)>& integrand);

// Composite Gauss integration of a 1D callable on [a,b] with `segments`
// equal subintervals.
double integrate_1d(const std::function<double(double)>& f, double a, double b, int segments, int q = 8);

}  // namespace pf
