#include <doctest.h>

#include <cmath>
#include <random>

#include "phasefield/quasi_interp.hpp"
#include "phasefield/report.hpp"

using namespace pf;

namespace {

const double pi = std::acos(-1.0);

SmoothTarget sine_2d() {
    return SmoothTarget{
        [](const Point& x) { return std::sin(2 * pi * x[0]) * std::sin(2 * pi * x[1]); },
        [](const Point& x) {
            return Vec2{2 * pi * std::cos(2 * pi * x[0]) * std::sin(2 * pi * x[1]),
                        2 * pi * std::sin(2 * pi * x[0]) * std::cos(2 * pi * x[1])};
        },
        [](const Point& x) {
            const double s = 4 * pi * pi;
            return Sym2{-s * std::sin(2 * pi * x[0]) * std::sin(2 * pi * x[1]),
                        s * std::cos(2 * pi * x[0]) * std::cos(2 * pi * x[1]),
                        -s * std::sin(2 * pi * x[0]) * std::sin(2 * pi * x[1])};
        }};
}

}  // namespace

TEST_CASE("constants and quadratics are reproduced") {
    auto s1 = SplineSpace::uniform_1d(9);
    auto s2 = SplineSpace::uniform_2d(5, 7);

    auto c = project(s2, [](const Point&) { return 1.0; });
    for (int j = 0; j < s2.num_basis(); ++j) CHECK(c.coeff(j) == doctest::Approx(1.0).epsilon(1e-13));

    auto q = project(s1, [](const Point& x) { return x[0] * x[0]; });
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 200; ++it) {
        const double x = u(rng);
        CHECK(eval_field(q, {x, 0.0}, 0).value == doctest::Approx(x * x).epsilon(1e-11));
    }

    // Total degree 2 in 2D, including the mixed term.
    auto p2 = project(s2, [](const Point& x) { return 0.3 + x[0] - 2 * x[1] + x[0] * x[1] + x[1] * x[1]; });
    for (int it = 0; it < 200; ++it) {
        const Point x{u(rng), u(rng)};
        const double ref = 0.3 + x[0] - 2 * x[1] + x[0] * x[1] + x[1] * x[1];
        CHECK(eval_field(p2, x, 0).value == doctest::Approx(ref).epsilon(1e-11));
    }
}

TEST_CASE("projection is linear in the target") {
    auto s = SplineSpace::uniform_1d(6);
    auto f = [](const Point& x) { return std::sin(3 * x[0]); };
    auto g = [](const Point& x) { return std::exp(x[0]); };
    auto fg = [&](const Point& x) { return 0.4 * f(x) - 2.5 * g(x); };
    auto pf_ = project(s, f);
    auto pg = project(s, g);
    auto pfg = project(s, fg);
    for (int j = 0; j < s.num_basis(); ++j)
        CHECK(pfg.coeff(j) == doctest::Approx(0.4 * pf_.coeff(j) - 2.5 * pg.coeff(j)).epsilon(1e-12));
}

TEST_CASE("locality: the field on K ignores the target outside the extended support of K") {
    auto s = SplineSpace::uniform_1d(12);
    const int K = 5;
    const auto ext = s.extended_support(K);
    // Smooth bump supported on elements 10..11, well outside ext(5) = 3..7.
    auto bump = [](const Point& x) {
        const double t = (x[0] - 10.0 / 12.0) / (2.0 / 12.0);
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return std::exp(-1.0 / (t * (1.0 - t)));
    };
    CHECK(std::find(ext.begin(), ext.end(), 10) == ext.end());
    auto f = [](const Point& x) { return std::cos(2.0 * x[0]); };
    auto p1 = project(s, f);
    auto p2 = project(s, [&](const Point& x) { return f(x) + 3.0 * bump(x); });
    auto [a, b] = s.axis(0).element_interval(K);
    for (int i = 0; i <= 20; ++i) {
        const double x = a + (b - a) * i / 20.0;
        CHECK(eval_field(p1, {x, 0.0}, 0).value == doctest::Approx(eval_field(p2, {x, 0.0}, 0).value).epsilon(1e-13));
    }
}

TEST_CASE("projection does not preserve [0,1] bounds") {
    // A steep monotone step in [0,1] overshoots after projection; this failure
    // is what the repair construction exists for.
    auto s = SplineSpace::uniform_1d(16);
    auto step = [](const Point& x) { return 0.5 * (1.0 + std::tanh((x[0] - 0.5) / 0.02)); };
    auto p = project(s, step);
    double lo = 1e30, hi = -1e30;
    for (int i = 0; i <= 2000; ++i) {
        const double v = eval_field(p, {i / 2000.0, 0.0}, 0).value;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK((lo < 0.0 || hi > 1.0));
}

TEST_CASE("rates: L2 ~ h^3, H1 ~ h^2, H2 ~ h^1") {
    const QuadratureRule rule(4);
    const auto target = sine_2d();
    std::vector<double> hs, e0, e1, e2;
    for (int n : {8, 16, 32, 64}) {
        auto s = SplineSpace::uniform_2d(n, n);
        auto p = project(s, target.value);
        auto rep = error_report(s, target, p, rule);
        hs.push_back(1.0 / n);
        e0.push_back(rep.global[0]);
        e1.push_back(rep.global[1]);
        e2.push_back(rep.global[2]);
    }
    CHECK(fit_log_slope(hs, e0) > 2.7);
    CHECK(fit_log_slope(hs, e1) > 1.7);
    CHECK(fit_log_slope(hs, e2) > 0.7);
    // 1D sanity: halving h divides the L2 error by about 8.
    auto t1 = [](const Point& x) { return std::sin(2 * pi * x[0]); };
    auto s8 = SplineSpace::uniform_1d(8);
    auto s16 = SplineSpace::uniform_1d(16);
    SmoothTarget t1d{t1,
                     [](const Point& x) { return Vec2{2 * pi * std::cos(2 * pi * x[0]), 0.0}; },
                     [](const Point& x) { return Sym2{-4 * pi * pi * std::sin(2 * pi * x[0]), 0.0, 0.0}; }};
    const double c8 = error_report(s8, t1d, project(s8, t1), rule).global[0];
    const double c16 = error_report(s16, t1d, project(s16, t1), rule).global[0];
    CHECK(c8 / c16 == doctest::Approx(8.0).epsilon(0.25));
}

TEST_CASE("error report of a spline against itself is zero") {
    auto s = SplineSpace::uniform_1d(7);
    auto f = project(s, [](const Point& x) { return std::sin(x[0]); });
    SmoothTarget self{[&](const Point& x) { return eval_field(f, x, 0).value; },
                      [&](const Point& x) { return eval_field(f, x, 1).grad; },
                      [&](const Point& x) { return eval_field(f, x, 2).hess; }};
    auto rep = error_report(s, self, f, QuadratureRule(4));
    for (int k = 0; k < 3; ++k) CHECK(rep.global[k] < 1e-12);
}

TEST_CASE("sup-norm estimate check") {
    SUBCASE("zero field") {
        auto s = SplineSpace::uniform_1d(8);
        auto rep = sup_norm_estimate_check(constant_field(s, 0.0), QuadratureRule(4));
        CHECK(rep.max_ratio == 0.0);
        for (const auto& r : rep.rows) {
            CHECK(r.lhs == 0.0);
            CHECK(r.rhs == 0.0);
        }
    }
    SUBCASE("constant field: ratio finite, bounded under refinement") {
        double prev = 1e30;
        for (int n : {8, 16, 32}) {
            auto s = SplineSpace::uniform_1d(n);
            auto rep = sup_norm_estimate_check(constant_field(s, 1.0), QuadratureRule(4));
            CHECK(rep.rows[0].lhs == doctest::Approx(1.0));
            CHECK(rep.max_ratio > 0.0);
            CHECK(rep.max_ratio < prev + 1e-12);  // h^-3 weight grows, so ratios shrink
            prev = rep.max_ratio;
        }
    }
    SUBCASE("oscillatory spline: ratio bounded by a common constant across h") {
        double bound = 0.0;
        for (int n : {8, 16, 32}) {
            auto s = SplineSpace::uniform_2d(n, n);
            SplineField z(s);
            for (int j = 0; j < s.num_basis(); ++j) {
                auto [jx, jy] = s.basis_coords(j);
                z.coeff(j) = ((jx + jy) % 2 == 0) ? 1.0 : -1.0;
            }
            bound = std::max(bound, sup_norm_estimate_check(z, QuadratureRule(4)).max_ratio);
        }
        CHECK(bound < 1.0);  // empirical constant for quadratic splines
        CHECK(bound > 0.0);
    }
}
