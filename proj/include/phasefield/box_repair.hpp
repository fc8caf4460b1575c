#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "phasefield/errors.hpp"
#include "phasefield/quadrature.hpp"
#include "phasefield/quasi_interp.hpp"
#include "phasefield/space.hpp"

namespace pf {

enum class Plateau { Zero, One, Unknown };

// Scalar target with values in [0,1] and, when known analytically, exact
// plateau information for axis-aligned boxes. The plateau query is the
// short-circuit used when classifying recovery fields; sampling is the
// fallback for generic targets.
struct PhaseTarget {
    ScalarFn value;
    std::function<Plateau(const Point& lo, const Point& hi)> plateau;  // may be null

    static PhaseTarget from_function(ScalarFn f) { return {std::move(f), nullptr}; }
};

// Dense-lattice scan of the projection error and of the raw projection range.
struct SupErrorScan {
    double max_err = 0.0;
    Point err_witness{0.0, 0.0};
    double min_value = 0.0;  // extrema of w_h
    double max_value = 0.0;
    Point min_witness{0.0, 0.0};
    Point max_witness{0.0, 0.0};
};

SupErrorScan measure_sup_error(const PhaseTarget& v, const SplineField& w_h, int samples_per_dim = 5);

// Fixes c_hat in c = c_hat (h/eps)^3 from the first measured sup error and
// keeps it for the rest of the study. Later levels whose measured error
// exceeds c_hat (h/eps)^3 violate the cubic rate: a warning is recorded and
// c is lifted to cover the measurement (the repair needs c >= sup error).
class RepairCalibrator {
  public:
    explicit RepairCalibrator(double safety = 1.1) : safety_(safety) {}

    double calibrate(const PhaseTarget& v, const SplineField& w_h, double eps,
                     int samples_per_dim = 5, std::string* warning = nullptr);

    bool calibrated() const { return c_hat_ > 0.0; }
    double c_hat() const { return c_hat_; }

  private:
    double safety_;
    double c_hat_ = 0.0;
    static constexpr double c_hat_floor_ = 1e-10;  // keeps c positive for exactly reproduced targets
};

// Element families of the local modification: K^0/K^4 where the extended
// support sits inside an exact plateau, K^2 where values stay in
// [2c, 1-2c], K^1/K^3 where the extended support meets (0,2c) or (1-2c,1).
struct ElementClassification {
    double c = 0.0;
    std::vector<int> family_of;                 // per element, 0..4
    std::array<std::vector<int>, 5> families;   // element lists
    std::vector<char> ext1, ext3;               // element in the enlarged sets A~1 / A~3

    std::string to_csv() const;
};

// Throws RepairError when an extended support meets both (0,2c) and
// (1-2c,1), or when the enlarged sets A~1 and A~3 overlap: the mesh is too
// coarse relative to eps for the construction.
ElementClassification classify(const SplineSpace& space, const PhaseTarget& v, double c,
                               int samples_per_dim = 5);

// Sum of all basis functions whose support meets an element of the family
// (1 or 3): equals 1 on the family, supported in its enlarged set.
SplineField correction_field(const SplineSpace& space, const ElementClassification& cls, int family);

struct RepairOutcome {
    SplineField field;
    double c = 0.0;
    double correction_l2_sq = 0.0;  // int |v_h - w_h|^2
    double correction_h1_sq = 0.0;
    double correction_h2_sq = 0.0;

    std::string to_csv_row(double eps, double h, double sup_error) const;
    static std::string csv_header();
};

// v_h = w_h + c v^1 - c v^3. Verifies -c <= w_h <= 1+c beforehand and
// 0 <= v_h <= 1 (tolerance 1e-12) afterwards by dense sampling; violations
// throw RepairError carrying the offending point.
RepairOutcome repair(const SplineField& w_h, const ElementClassification& cls, double c,
                     const QuadratureRule& rule, int samples_per_dim = 5);

// Engineering baseline: clamp coefficients to [0,1] (values follow by the
// convex-hull property).
SplineField clamp_baseline(const SplineField& w_h);

// The failing global rescaling l(t) = (t+c)/(1+2c): values land in [0,1] but
// the reaction term picks up an eps^-1 c^2 penalty wherever w_h ~ 1.
struct RescaleReport {
    SplineField field;
    double reaction_energy = 0.0;           // eps^-1 int (l(w)-1)^2
    double reaction_on_overshoot = 0.0;     // same integrand restricted to {w_h >= 1}
    double eps_inv_c_sq = 0.0;              // the blow-up scale of the remark
};

RescaleReport rescale_antipattern(const SplineField& w_h, double c, double eps,
                                  const QuadratureRule& rule);

}  // namespace pf
