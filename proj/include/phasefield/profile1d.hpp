#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "phasefield/errors.hpp"

namespace pf {

// Optimal transition profile w(r) = e^{-r}(1+r): the minimizer of the
// second-order profile energy among w(0)=1, w'(0)=0, with energy 2.
// Returns (w, w', w'', w''', w'''') for r >= 0.
std::array<double, 5> optimal_profile(double r);

// Residual of the profile Euler-Lagrange equation w'''' - 2 w'' + w at r.
double optimal_profile_el_residual(double r);

// Profile energy J_R(w) = int_0^R w^2 + 2 w'^2 + w''^2 dr for a callable
// giving (w, w', w''). R may be infinity: the integral is then truncated
// where the analytic envelope e^{-2r}(1+r)^2 drops below 1e-16 (r = 40).
using C2Profile = std::function<std::array<double, 3>(double)>;
double j_functional(const C2Profile& w, double R, double segment = 0.05, int q = 10);

// Polynomial smoothstep with three vanishing derivatives at both ends:
// s(x) = 0 for x <= 0, 1 for x >= 1, C^3 across the junctions.
double smoothstep7(double x, int deriv = 0);

// Parameters of the truncated, mollified profile of the limsup construction:
// identically 1 on (0, r_flat), identically 0 beyond (r_sharp, inf).
struct ProfileSpec {
    double delta = 0.0;       // energy slack: J in [2, 2+delta)
    double rk = 0.0;          // inner plateau half-width before mollification
    double Rk = 0.0;          // cutoff location
    double moll_width = 0.0;  // mollifier scale
    double r_flat = 0.0;      // rk - moll_width
    double r_sharp = 0.0;     // Rk + moll_width
};

// Mollified truncation of the optimal profile. Evaluation is by numerical
// convolution against a compactly supported bump; the plateaus are exact by
// construction.
class TruncatedProfile {
  public:
    TruncatedProfile(ProfileSpec spec);

    const ProfileSpec& spec() const { return spec_; }
    // (w, w', w'', w''') at r >= 0.
    std::array<double, 4> eval(double r) const;
    std::array<double, 3> eval3(double r) const;
    double j_value() const { return j_value_; }

  private:
    ProfileSpec spec_;
    double j_value_ = 0.0;

    std::array<double, 4> kernel(double r) const;  // pre-mollification w_k
    friend TruncatedProfile build_truncated_profile(double delta);
};

// Parameter search for a profile with J in [2, 2+delta); throws
// ProfileSearchError carrying the best J achieved when the grid fails.
TruncatedProfile build_truncated_profile(double delta);

// Recovery phase profile z(s) = 1 - w(|s|/eps): zero for |s| <= eps_flat,
// one for |s| >= eps_sharp, with k-th derivative bounded by C eps^{-k}.
class RescaledProfile {
  public:
    RescaledProfile(const TruncatedProfile& profile, double eps);

    double eps() const { return eps_; }
    double eps_flat() const { return eps_ * profile_.spec().r_flat; }
    double eps_sharp() const { return eps_ * profile_.spec().r_sharp; }
    const TruncatedProfile& profile() const { return profile_; }

    // (z, z', z'', z''') at any real s.
    std::array<double, 4> eval(double s) const;
    double value(double s) const { return eval(s)[0]; }

    // int_R eps^{-1}|z-1|^2 + 2 eps |z'|^2 + eps^3 |z''|^2 ds; equals
    // 2 J_inf(w) by the rescaling identity, hence < 4 + 2 delta.
    double transition_energy() const;

  private:
    TruncatedProfile profile_;
    double eps_;
};

// One row of the discrete 1D sharp-limit experiment: the minimal energy of
// the discrete tearing problem approaches min(g^2/2, 4) as eps -> 0.
struct LiminfRow {
    double eps = 0.0;
    double h = 0.0;
    double eta = 0.0;
    double intact_energy = 0.0;
    double seeded_energy = 0.0;
    double min_energy = 0.0;
    bool converged = true;
};

std::vector<LiminfRow> liminf_experiment_1d(const std::vector<double>& eps_schedule, int h_divisor,
                                            double g, double gc = 4.0);

}  // namespace pf
