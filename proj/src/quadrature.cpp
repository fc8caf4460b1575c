#include "phasefield/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "phasefield/threads.hpp"

namespace pf {

namespace {

// Gauss-Legendre nodes on (-1,1) by Newton iteration on P_q.
void gauss_legendre(int q, std::vector<double>& x, std::vector<double>& w) {
    x.resize(q);
    w.resize(q);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < q; ++i) {
        double t = std::cos(pi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= q; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

QuadratureRule::QuadratureRule(int points) : q(points) {
    if (points < 1 || points > 64) throw std::invalid_argument("QuadratureRule: q out of range");
    std::vector<double> x, w;
    gauss_legendre(points, x, w);
    nodes.resize(points);
    weights.resize(points);
    for (int i = 0; i < points; ++i) {
        nodes[i] = 0.5 * (x[i] + 1.0);
        weights[i] = 0.5 * w[i];
    }
}

ElementQuadrature element_quadrature(const SplineSpace& space, const QuadratureRule& rule, int element) {
    auto [ex, ey] = space.element_coords(element);
    auto [ax, bx] = space.axis(0).element_interval(ex);
    double ay = 0.0, by = 1.0;
    if (space.dim() == 2) std::tie(ay, by) = space.axis(1).element_interval(ey);

    const double wx = bx - ax;
    const double wy = by - ay;
    const double sx = space.map().scale(0);
    const double sy = space.dim() == 2 ? space.map().scale(1) : 1.0;
    const double cell = space.dim() == 2 ? wx * sx * wy * sy : wx * sx;

    ElementQuadrature out;
    const int ny = space.dim() == 2 ? rule.q : 1;
    out.points.reserve(static_cast<size_t>(rule.q) * ny);
    out.weights.reserve(out.points.capacity());
    for (int iy = 0; iy < ny; ++iy) {
        const double py = space.dim() == 2 ? ay + wy * rule.nodes[iy] : 0.0;
        const double qwy = space.dim() == 2 ? rule.weights[iy] : 1.0;
        for (int ix = 0; ix < rule.q; ++ix) {
            Point p{ax + wx * rule.nodes[ix], py};
            out.points.push_back(space.map().to_physical(p));
            out.weights.push_back(rule.weights[ix] * qwy * cell);
        }
    }
    return out;
}

double integrate(const SplineSpace& space, const QuadratureRule& rule,
                 const std::function<double(const Point&)>& integrand) {
    const int ne = space.num_elements();
    std::vector<double> partial(ne, 0.0);
    parallel_for(ne, [&](int e) {
        const auto eq = element_quadrature(space, rule, e);
        double s = 0.0;
        for (size_t i = 0; i < eq.points.size(); ++i) s += eq.weights[i] * integrand(eq.points[i]);
        partial[e] = s;
    });
    double total = 0.0;
    for (int e = 0; e < ne; ++e) total += partial[e];
    return total;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, int segments, int q) {
    const QuadratureRule rule(q);
    const double w = (b - a) / segments;
    double total = 0.0;
    for (int s = 0; s < segments; ++s) {
        const double lo = a + s * w;
        double part = 0.0;
        for (int i = 0; i < q; ++i) part += rule.weights[i] * f(lo + w * rule.nodes[i]);
        total += part * w;
    }
    return total;
}

}  // namespace pf
