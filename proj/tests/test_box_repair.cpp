#include <doctest.h>

#include <cmath>

#include "phasefield/box_repair.hpp"
#include "phasefield/profile1d.hpp"

using namespace pf;

namespace {

// 1D recovery target z(x - crack) with exact plateau queries.
PhaseTarget recovery_target_1d(const RescaledProfile& z, double crack) {
    PhaseTarget t;
    t.value = [&z, crack](const Point& x) { return z.value(x[0] - crack); };
    t.plateau = [&z, crack](const Point& lo, const Point& hi) {
        const double a = lo[0] - crack, b = hi[0] - crack;
        const double flat = z.eps_flat(), sharp = z.eps_sharp();
        if (a >= -flat && b <= flat) return Plateau::Zero;
        if (a >= sharp || b <= -sharp) return Plateau::One;
        return Plateau::Unknown;
    };
    return t;
}

}  // namespace

TEST_CASE("classification of constant targets") {
    auto s = SplineSpace::uniform_1d(12);
    auto one = PhaseTarget::from_function([](const Point&) { return 1.0; });
    auto zero = PhaseTarget::from_function([](const Point&) { return 0.0; });
    const auto c1 = classify(s, one, 0.01);
    const auto c0 = classify(s, zero, 0.01);
    CHECK(c1.families[4].size() == 12);
    CHECK(c0.families[0].size() == 12);
}

TEST_CASE("classification partitions the mesh and splits the transition") {
    // eps small enough that both plateaus sit inside the domain, mesh fine
    // enough that the zero plateau contains whole extended supports.
    const double eps = 0.05, crack = 0.5;
    auto prof = build_truncated_profile(0.1);
    RescaledProfile z(prof, eps);
    const int n = 2000;
    auto s = SplineSpace::uniform_1d(n);
    auto target = recovery_target_1d(z, crack);
    const double c = 0.01;
    const auto cls = classify(s, target, c);

    size_t total = 0;
    for (const auto& fam : cls.families) total += fam.size();
    CHECK(total == static_cast<size_t>(n));

    CHECK(!cls.families[0].empty());
    CHECK(!cls.families[1].empty());
    CHECK(!cls.families[2].empty());
    CHECK(!cls.families[3].empty());
    CHECK(!cls.families[4].empty());

    // Elements fully inside the zero plateau are in K^0, deep outside in K^4.
    const int e_mid = s.axis(0).element_of(crack);
    CHECK(cls.family_of[e_mid] == 0);
    CHECK(cls.family_of[0] == 4);
    CHECK(cls.family_of[n - 1] == 4);

    // K^1 sits against the flat zone: walking right from the crack the
    // families appear in order 0,1,2,3,4.
    std::vector<int> seen;
    for (int e = e_mid; e < n; ++e) {
        if (seen.empty() || seen.back() != cls.family_of[e]) seen.push_back(cls.family_of[e]);
    }
    CHECK(seen == std::vector<int>{0, 1, 2, 3, 4});

    // Enlarged sets disjoint.
    for (int e = 0; e < n; ++e) CHECK(!(cls.ext1[e] && cls.ext3[e]));
}

TEST_CASE("classification refuses overlapping transition bands") {
    // Coarse mesh: one extended support spans the whole z transition.
    const double eps = 0.05;
    auto prof = build_truncated_profile(0.5);
    RescaledProfile z(prof, eps);
    auto s = SplineSpace::uniform_1d(6);
    CHECK_THROWS_AS(classify(s, recovery_target_1d(z, 0.5), 0.01), RepairError);
}

TEST_CASE("correction field properties") {
    auto s = SplineSpace::uniform_1d(14);
    ElementClassification cls;
    cls.c = 0.01;
    cls.family_of.assign(14, 2);
    cls.ext1.assign(14, 0);
    cls.ext3.assign(14, 0);

    SUBCASE("empty family gives the zero field") {
        const auto f = correction_field(s, cls, 1);
        for (double v : f.coeffs) CHECK(v == 0.0);
    }
    SUBCASE("single interior element") {
        cls.families[1] = {7};
        const auto f = correction_field(s, cls, 1);
        int nonzero = 0;
        for (double v : f.coeffs) nonzero += (v != 0.0);
        CHECK(nonzero == 3);  // the three bases active on the element
        auto [a, b] = s.axis(0).element_interval(7);
        for (int i = 0; i <= 10; ++i) {
            const double x = a + (b - a) * i / 10.0;
            CHECK(eval_field(f, {x, 0.0}, 0).value == doctest::Approx(1.0).epsilon(1e-14));
        }
        // Supported inside the extended support of element 7.
        CHECK(eval_field(f, {a - 2.5 / 14.0, 0.0}, 0).value == 0.0);
        CHECK(eval_field(f, {b + 2.5 / 14.0, 0.0}, 0).value == 0.0);
        // Values within [0,1].
        for (int i = 0; i <= 200; ++i) {
            const double v = eval_field(f, {i / 200.0, 0.0}, 0).value;
            CHECK(v >= 0.0);
            CHECK(v <= 1.0 + 1e-15);
        }
    }
    SUBCASE("all elements: partition of unity") {
        for (int e = 0; e < 14; ++e) cls.families[1].push_back(e);
        const auto f = correction_field(s, cls, 1);
        for (double v : f.coeffs) CHECK(v == 1.0);
    }
}

TEST_CASE("repair restores [0,1] and is local") {
    auto s = SplineSpace::uniform_1d(40);
    // Synthetic projection dipping below zero on a left block and above one
    // on a right block, mimicking the overshoot pattern of a projection.
    const double c = 0.05;
    auto vfun = [&](const Point& x) {
        if (x[0] < 0.2) return 0.0;
        if (x[0] > 0.8) return 1.0;
        return smoothstep7((x[0] - 0.2) / 0.6);
    };
    PhaseTarget target = PhaseTarget::from_function(vfun);
    const auto cls = classify(s, target, c);

    SplineField w_h(s);
    for (int j = 0; j < s.num_basis(); ++j) w_h.coeff(j) = vfun({s.greville(j)[0], 0.0});
    // Push a dip of -c/2 into the zero-side transition band and a bump above 1
    // on the one-side band.
    for (int e : cls.families[1])
        for (int j : s.element_basis(e)) w_h.coeff(j) = std::min(w_h.coeff(j), -c / 2);
    for (int e : cls.families[3])
        for (int j : s.element_basis(e)) w_h.coeff(j) = std::max(w_h.coeff(j), 1.0 + c / 2);

    const QuadratureRule rule(4);
    const auto out = repair(w_h, cls, c, rule, 7);
    for (int i = 0; i <= 4000; ++i) {
        const double v = eval_field(out.field, {i / 4000.0, 0.0}, 0).value;
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }
    // Unchanged outside the enlarged sets.
    for (int e = 0; e < s.num_elements(); ++e) {
        if (cls.ext1[e] || cls.ext3[e]) continue;
        auto [a, b] = s.axis(0).element_interval(e);
        const double mid = 0.5 * (a + b);
        CHECK(eval_field(out.field, {mid, 0.0}, 0).value ==
              doctest::Approx(eval_field(w_h, {mid, 0.0}, 0).value).epsilon(1e-15));
    }
    CHECK(out.correction_l2_sq > 0.0);

    SUBCASE("under-calibrated c is rejected with a witness") {
        SplineField worse = w_h;
        for (int e : cls.families[1])
            for (int j : s.element_basis(e)) worse.coeff(j) = -3.0 * c;
        CHECK_THROWS_AS(repair(worse, cls, c, rule, 7), RepairError);
    }
}

TEST_CASE("calibrator") {
    const double eps = 0.1;
    auto prof = build_truncated_profile(0.1);
    RescaledProfile z(prof, eps);
    const double crack = 0.5;

    SUBCASE("exactly reproduced targets still get a positive c") {
        auto s = SplineSpace::uniform_1d(16);
        auto quad = PhaseTarget::from_function([](const Point& x) { return 0.25 + 0.5 * x[0] * x[0]; });
        auto w = project(s, quad.value);
        RepairCalibrator cal;
        const double c = cal.calibrate(quad, w, eps);
        CHECK(measure_sup_error(quad, w, 9).max_err < 1e-11);
        CHECK(c > 0.0);
    }
    SUBCASE("constant one projects exactly") {
        auto s = SplineSpace::uniform_1d(16);
        auto one = PhaseTarget::from_function([](const Point&) { return 1.0; });
        auto w = project(s, one.value);
        CHECK(measure_sup_error(one, w, 9).max_err < 1e-13);
    }
    SUBCASE("sup error decays like (h/eps)^3") {
        auto t = recovery_target_1d(z, crack);
        const int n8 = static_cast<int>(std::round(8.0 / eps));
        const int n16 = 2 * n8;
        auto s8 = SplineSpace::uniform_1d(n8);
        auto s16 = SplineSpace::uniform_1d(n16);
        const double e8 = measure_sup_error(t, project(s8, t.value), 9).max_err;
        const double e16 = measure_sup_error(t, project(s16, t.value), 9).max_err;
        CHECK(e8 / e16 == doctest::Approx(8.0).epsilon(0.5));

        RepairCalibrator cal;
        const double c8 = cal.calibrate(t, project(s8, t.value), eps);
        CHECK(c8 >= e8);
        std::string warning;
        const double c16 = cal.calibrate(t, project(s16, t.value), eps, 5, &warning);
        CHECK(c16 >= measure_sup_error(t, project(s16, t.value), 5).max_err);
        CHECK(c16 < c8);
    }
}

TEST_CASE("clamp baseline") {
    auto s = SplineSpace::uniform_1d(6);
    SplineField f(s);
    for (int j = 0; j < s.num_basis(); ++j) f.coeff(j) = 0.1 * j;
    auto g = clamp_baseline(f);
    for (int j = 0; j < s.num_basis(); ++j) {
        if (f.coeff(j) <= 1.0) CHECK(g.coeff(j) == f.coeff(j));
    }
    f.coeff(2) = 1.3;
    f.coeff(3) = -0.4;
    g = clamp_baseline(f);
    CHECK(g.coeff(2) == 1.0);
    CHECK(g.coeff(3) == 0.0);
}

TEST_CASE("rescale anti-pattern") {
    const QuadratureRule rule(4);
    auto s = SplineSpace::uniform_1d(10);

    SUBCASE("c = 0 is the identity") {
        auto w = constant_field(s, 0.7);
        const auto rep = rescale_antipattern(w, 0.0, 0.1, rule);
        CHECK(rep.reaction_energy == doctest::Approx((0.3 * 0.3) / 0.1).epsilon(1e-12));
        CHECK(rep.field.coeff(4) == 0.7);
    }
    SUBCASE("w = 1 picks up the eps^-1 c^2 penalty") {
        const double c = 0.02, eps = 0.05;
        auto w = constant_field(s, 1.0);
        const auto rep = rescale_antipattern(w, c, eps, rule);
        const double ell1 = (1.0 + c) / (1.0 + 2.0 * c);
        CHECK(rep.field.coeff(0) == doctest::Approx(ell1));
        CHECK(rep.reaction_energy == doctest::Approx((1.0 - ell1) * (1.0 - ell1) / eps).epsilon(1e-10));
        CHECK(rep.reaction_on_overshoot == doctest::Approx(rep.reaction_energy).epsilon(1e-10));
        CHECK(rep.reaction_energy > 0.2 * rep.eps_inv_c_sq);
    }
    SUBCASE("penalty does not vanish along an h = eps schedule") {
        // c ~ (h/eps)^3 is constant when h = eps, so eps^-1 c^2 blows up.
        double prev = 0.0;
        for (double eps : {0.2, 0.1, 0.05}) {
            const double c = 0.125;  // (h/eps)^3 with h = eps/2
            auto w = constant_field(s, 1.0);
            const auto rep = rescale_antipattern(w, c, eps, rule);
            CHECK(rep.reaction_energy > prev);
            prev = rep.reaction_energy;
        }
    }
}
