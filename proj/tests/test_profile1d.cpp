#include <doctest.h>

#include <cmath>
#include <random>

#include "phasefield/profile1d.hpp"
#include "phasefield/quadrature.hpp"

using namespace pf;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

C2Profile optimal3() {
    return [](double r) {
        const auto w = optimal_profile(r);
        return std::array<double, 3>{w[0], w[1], w[2]};
    };
}
}  // namespace

TEST_CASE("optimal profile values") {
    auto w0 = optimal_profile(0.0);
    CHECK(w0[0] == 1.0);
    CHECK(w0[1] == 0.0);
    CHECK(optimal_profile(1.0)[0] == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-12));
    CHECK(optimal_profile(40.0)[0] < 1e-15);
    CHECK_THROWS_AS(optimal_profile(-0.1), std::domain_error);
    // Monotone decreasing, values in (0,1].
    double prev = 1.0;
    for (double r = 0.05; r < 20.0; r += 0.05) {
        const double v = optimal_profile(r)[0];
        CHECK(v > 0.0);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("Euler-Lagrange residual vanishes on [0,30]") {
    for (double r = 0.0; r <= 30.0; r += 0.01) CHECK(std::abs(optimal_profile_el_residual(r)) < 1e-10);
}

TEST_CASE("profile energies") {
    CHECK(j_functional([](double) { return std::array<double, 3>{0, 0, 0}; }, kInf) == 0.0);
    CHECK(j_functional(optimal3(), kInf) == doctest::Approx(2.0).epsilon(1e-9));
    // w = e^{-r}: density 4 e^{-2r}, integral 2.
    auto expdec = [](double r) {
        const double e = std::exp(-r);
        return std::array<double, 3>{e, -e, e};
    };
    CHECK(j_functional(expdec, kInf) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("minimality witness: admissible perturbations do not lower J") {
    const double j_star = j_functional(optimal3(), kInf);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), center(1.0, 12.0), width(0.3, 0.9);
    for (int it = 0; it < 50; ++it) {
        const double a0 = coef(rng), a1 = coef(rng), a2 = coef(rng);
        const double c = center(rng), w = width(rng);
        // Smooth bump supported in (c-w, c+w), c-w > 0, so p(0)=p'(0)=0.
        auto p = [&](double r) -> std::array<double, 3> {
            const double t = (r - c) / w;
            if (std::abs(t) >= 1.0) return {0.0, 0.0, 0.0};
            const double d = 1.0 - t * t;
            const double b = std::exp(-1.0 / d);
            const double g = -2.0 * t / (d * d);
            const double gp = -2.0 / (d * d) - 8.0 * t * t / (d * d * d);
            const double db = b * g / w;
            const double d2b = b * (g * g + gp) / (w * w);
            const double poly = a0 + a1 * t + a2 * t * t;
            const double dpoly = (a1 + 2.0 * a2 * t) / w;
            const double d2poly = 2.0 * a2 / (w * w);
            return {poly * b, dpoly * b + poly * db, d2poly * b + 2.0 * dpoly * db + poly * d2b};
        };
        for (double t : {0.1, -0.1, 0.01, -0.01}) {
            auto wt = [&](double r) {
                const auto u = optimal_profile(r);
                const auto q = p(r);
                return std::array<double, 3>{u[0] + t * q[0], u[1] + t * q[1], u[2] + t * q[2]};
            };
            CHECK(j_functional(wt, kInf) >= j_star - 1e-9);
        }
    }
}

TEST_CASE("truncated profile meets the energy bracket") {
    for (double delta : {0.5, 0.1, 0.05}) {
        auto p = build_truncated_profile(delta);
        CHECK(p.j_value() >= 2.0);
        CHECK(p.j_value() < 2.0 + delta);
        CHECK(p.spec().r_flat > 0.0);
        CHECK(p.spec().r_flat < 1.0);
        CHECK(p.spec().r_sharp > 1.0);
        // Exact plateaus.
        CHECK(p.eval(0.5 * p.spec().r_flat)[0] == 1.0);
        CHECK(p.eval(p.spec().r_sharp)[0] == 0.0);
        CHECK(p.eval(p.spec().r_sharp + 3.0)[0] == 0.0);
        // Values stay in [0,1].
        for (double r = 1e-3; r < p.spec().r_sharp + 1.0; r += 1e-2) {
            const double v = p.eval(r)[0];
            CHECK(v >= -1e-12);
            CHECK(v <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("smaller delta pushes the cutoff out") {
    auto loose = build_truncated_profile(0.5);
    auto tight = build_truncated_profile(0.05);
    CHECK(tight.spec().r_sharp > loose.spec().r_sharp);
}

TEST_CASE("profile derivatives are consistent (finite differences)") {
    auto p = build_truncated_profile(0.5);
    const double e = 1e-5;
    for (double r : {0.3, 0.9, 1.7, 2.9, p.spec().Rk - 0.5}) {
        const auto v = p.eval(r);
        const auto vp = p.eval(r + e);
        const auto vm = p.eval(r - e);
        CHECK((vp[0] - vm[0]) / (2 * e) == doctest::Approx(v[1]).epsilon(1e-5));
        CHECK((vp[1] - vm[1]) / (2 * e) == doctest::Approx(v[2]).epsilon(1e-5));
        CHECK((vp[2] - vm[2]) / (2 * e) == doctest::Approx(v[3]).epsilon(2e-4));
    }
}

TEST_CASE("recovery profile") {
    auto p = build_truncated_profile(0.1);
    SUBCASE("plateaus and range") {
        for (double eps : {0.1, 0.01}) {
            RescaledProfile z(p, eps);
            CHECK(z.value(0.0) == 0.0);
            CHECK(z.value(0.5 * z.eps_flat()) == 0.0);
            CHECK(z.value(2.0 * z.eps_sharp()) == 1.0);
            CHECK(z.value(-2.0 * z.eps_sharp()) == 1.0);
            for (double s = -1.5 * z.eps_sharp(); s < 1.5 * z.eps_sharp(); s += z.eps_sharp() / 200) {
                const double v = z.value(s);
                CHECK(v >= -1e-12);
                CHECK(v <= 1.0 + 1e-12);
            }
        }
    }
    SUBCASE("transition energy < 4 + 2 delta, independent of eps") {
        for (double eps : {0.1, 0.01}) {
            RescaledProfile z(p, eps);
            const double en = z.transition_energy();
            CHECK(en >= 4.0 * (1.0 - 1e-6));
            CHECK(en < 4.0 + 2.0 * p.spec().delta);
            CHECK(en == doctest::Approx(2.0 * p.j_value()).epsilon(1e-8));
        }
    }
    SUBCASE("symmetry") {
        RescaledProfile z(p, 0.05);
        for (double s = 0.01; s < 2 * z.eps_sharp(); s += 0.013) {
            CHECK(z.value(s) == doctest::Approx(z.value(-s)).epsilon(1e-14));
        }
    }
    SUBCASE("derivative scaling is eps^{-k}") {
        // sup |z^(k)| * eps^k is an eps-independent constant (= sup |w^(k)|).
        std::array<double, 4> ref{};
        bool first = true;
        for (double eps : {0.1, 0.05, 0.025}) {
            RescaledProfile z(p, eps);
            std::array<double, 4> sup{};
            for (double s = 0.0; s <= z.eps_sharp() * 1.05; s += z.eps_sharp() / 400) {
                const auto v = z.eval(s);
                for (int k = 0; k < 4; ++k) sup[k] = std::max(sup[k], std::abs(v[k]) * std::pow(eps, k));
            }
            if (first) {
                ref = sup;
                first = false;
            } else {
                for (int k = 0; k < 4; ++k) CHECK(sup[k] == doctest::Approx(ref[k]).epsilon(1e-6));
            }
        }
    }
}
