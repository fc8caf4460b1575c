#include "phasefield/profile1d.hpp"

#include <algorithm>
#include <cmath>

#include "phasefield/quadrature.hpp"

namespace pf {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Compactly supported bump exp(-1/(1-t^2)) on (-1,1), normalized to unit mass.
double bump_mass() {
    static const double mass = [] {
        return integrate_1d([](double t) { return std::exp(-1.0 / (1.0 - t * t)); }, -1.0, 1.0, 64, 12);
    }();
    return mass;
}

double mollifier(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t)) / bump_mass();
}

double mollifier_deriv(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    const double d = 1.0 - t * t;
    return mollifier(t) * (-2.0 * t / (d * d));
}

}  // namespace

std::array<double, 5> optimal_profile(double r) {
    if (r < 0.0) throw std::domain_error("optimal_profile: r must be nonnegative");
    const double e = std::exp(-r);
    return {e * (1.0 + r), -e * r, e * (r - 1.0), e * (2.0 - r), e * (r - 3.0)};
}

double optimal_profile_el_residual(double r) {
    const auto w = optimal_profile(r);
    return w[4] - 2.0 * w[2] + w[0];
}

double j_functional(const C2Profile& w, double R, double segment, int q) {
    if (std::isinf(R)) R = 40.0;  // e^{-2r}(1+r)^2 < 1e-16 beyond
    if (R <= 0.0) return 0.0;
    const int segments = std::max(1, static_cast<int>(std::ceil(R / segment)));
    return integrate_1d(
        [&](double r) {
            const auto v = w(r);
            return v[0] * v[0] + 2.0 * v[1] * v[1] + v[2] * v[2];
        },
        0.0, R, segments, q);
}

double smoothstep7(double x, int deriv) {
    if (x <= 0.0 || x >= 1.0) {
        if (deriv == 0) return x >= 1.0 ? 1.0 : 0.0;
        return 0.0;
    }
    const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x, x6 = x5 * x, x7 = x6 * x;
    switch (deriv) {
        case 0: return 35 * x4 - 84 * x5 + 70 * x6 - 20 * x7;
        case 1: return 140 * x3 - 420 * x4 + 420 * x5 - 140 * x6;
        case 2: return 420 * x2 - 1680 * x3 + 2100 * x4 - 840 * x5;
        case 3: return 840 * x - 5040 * x2 + 8400 * x3 - 4200 * x4;
        default: throw std::invalid_argument("smoothstep7: deriv out of range");
    }
}

TruncatedProfile::TruncatedProfile(ProfileSpec spec) : spec_(spec) {
    if (!(spec_.rk > spec_.moll_width) || !(spec_.moll_width > 0.0))
        throw std::invalid_argument("TruncatedProfile: need 0 < moll_width < rk");
    spec_.r_flat = spec_.rk - spec_.moll_width;
    spec_.r_sharp = spec_.Rk + spec_.moll_width;
    if (!(spec_.r_flat > 0.0 && spec_.r_flat < 1.0 && spec_.r_sharp > 1.0))
        throw std::invalid_argument("TruncatedProfile: need 0 < r_flat < 1 < r_sharp");
    j_value_ = j_functional([this](double r) { return eval3(r); }, spec_.r_sharp);
}

// Profile before mollification: 1 on (0, rk], then the shifted optimal
// profile times the cutoff phi(r - Rk), phi = 1 below Rk-1 and 0 above Rk.
std::array<double, 4> TruncatedProfile::kernel(double r) const {
    if (r <= spec_.rk) return {1.0, 0.0, 0.0, 0.0};
    const auto u = optimal_profile(r - spec_.rk);
    const double t = r - spec_.Rk;
    double p, dp, d2p;
    if (t <= -1.0) {
        p = 1.0; dp = 0.0; d2p = 0.0;
    } else if (t >= 0.0) {
        p = 0.0; dp = 0.0; d2p = 0.0;
    } else {
        p = smoothstep7(-t, 0);
        dp = -smoothstep7(-t, 1);
        d2p = smoothstep7(-t, 2);
    }
    return {u[0] * p, u[1] * p + u[0] * dp, u[2] * p + 2.0 * u[1] * dp + u[0] * d2p, 0.0};
}

std::array<double, 4> TruncatedProfile::eval(double r) const {
    const double s = spec_.moll_width;
    if (r <= spec_.r_flat) return {1.0, 0.0, 0.0, 0.0};
    if (r >= spec_.r_sharp) return {0.0, 0.0, 0.0, 0.0};

    // Convolution against the bump; the integrand kinks where r - s*t crosses
    // the kernel junctions, so the quadrature interval is split there.
    std::array<double, 3> breaks_at = {spec_.rk, spec_.Rk - 1.0, spec_.Rk};
    std::vector<double> cuts = {-1.0, 1.0};
    for (double a : breaks_at) {
        const double t = (r - a) / s;
        if (t > -1.0 && t < 1.0) cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());

    std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
    double mass = 0.0;
    static const QuadratureRule rule(24);
    for (size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double a = cuts[seg], b = cuts[seg + 1];
        const double w = b - a;
        if (w <= 0.0) continue;
        for (int i = 0; i < rule.q; ++i) {
            const double t = a + w * rule.nodes[i];
            const double ww = w * rule.weights[i];
            const auto k = kernel(r - s * t);
            const double rho = mollifier(t);
            mass += ww * rho;
            out[0] += ww * rho * k[0];
            out[1] += ww * rho * k[1];
            out[2] += ww * rho * k[2];
            out[3] += ww * mollifier_deriv(t) / s * k[2];
        }
    }
    // Normalizing by the mass under the same segmentation makes the value a
    // convex combination of kernel values, so 0 <= w <= 1 holds exactly.
    for (auto& v : out) v /= mass;
    return out;
}

std::array<double, 3> TruncatedProfile::eval3(double r) const {
    const auto v = eval(r);
    return {v[0], v[1], v[2]};
}

TruncatedProfile build_truncated_profile(double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("build_truncated_profile: delta must be positive");
    const double accept = 2.0 + 0.9 * delta;
    const std::array<std::pair<double, double>, 4> plateau_grid = {
        {{0.1, 0.01}, {0.05, 0.005}, {0.02, 0.002}, {0.01, 0.001}}};
    double best_j = kInf;

    for (const auto& [rk, s] : plateau_grid) {
        double lo = 0.0, hi = 0.0;
        double j_hi = kInf;
        for (double Rk = 4.0; Rk <= 12.0; Rk += 1.0) {
            TruncatedProfile p(ProfileSpec{delta, rk, Rk, s});
            best_j = std::min(best_j, p.j_value());
            if (p.j_value() <= accept) {
                hi = Rk;
                j_hi = p.j_value();
                lo = Rk - 1.0;
                break;
            }
        }
        if (hi == 0.0) continue;  // plateau too expensive for this delta
        // Bisection on the cutoff location, the dominant parameter.
        while (lo >= 4.0 && hi - lo > 0.25) {
            const double mid = 0.5 * (lo + hi);
            TruncatedProfile p(ProfileSpec{delta, rk, mid, s});
            if (p.j_value() <= accept) {
                hi = mid;
                j_hi = p.j_value();
            } else {
                lo = mid;
            }
        }
        TruncatedProfile result(ProfileSpec{delta, rk, hi, s});
        if (result.j_value() >= 2.0 && result.j_value() < 2.0 + delta) return result;
        best_j = std::min(best_j, result.j_value());
    }
    throw ProfileSearchError("build_truncated_profile: no grid point reaches J < 2 + delta; best J = " +
                                 std::to_string(best_j),
                             best_j);
}

RescaledProfile::RescaledProfile(const TruncatedProfile& profile, double eps)
    : profile_(profile), eps_(eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("RescaledProfile: eps must be positive");
}

std::array<double, 4> RescaledProfile::eval(double s) const {
    const double sgn = s < 0.0 ? -1.0 : 1.0;
    const auto w = profile_.eval(std::abs(s) / eps_);
    const double e1 = eps_, e2 = eps_ * eps_, e3 = e2 * eps_;
    return {1.0 - w[0], -sgn * w[1] / e1, -w[2] / e2, -sgn * w[3] / e3};
}

double RescaledProfile::transition_energy() const {
    const double R = eps_sharp();
    const int segments = std::max(64, static_cast<int>(std::ceil(profile_.spec().r_sharp / 0.05)));
    auto density = [&](double s) {
        const auto z = eval(s);
        const double zm1 = z[0] - 1.0;
        return (zm1 * zm1) / eps_ + 2.0 * eps_ * z[1] * z[1] + eps_ * eps_ * eps_ * z[2] * z[2];
    };
    return integrate_1d(density, -R, 0.0, segments, 10) + integrate_1d(density, 0.0, R, segments, 10);
}

}  // namespace pf
