#include "phasefield/box_repair.hpp"

#include <algorithm>
#include <cmath>

#include "phasefield/report.hpp"
#include "phasefield/threads.hpp"

namespace pf {

namespace {

// Lattice of samples_per_dim^d points covering element e, corners included.
template <typename F>
void for_each_sample(const SplineSpace& s, int e, int n, F&& body) {
    Point lo, hi;
    s.element_box(e, lo, hi);
    const int ny = s.dim() == 2 ? n : 1;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            Point p{lo[0] + (hi[0] - lo[0]) * ix / (n - 1.0),
                    s.dim() == 2 ? lo[1] + (hi[1] - lo[1]) * iy / (ny - 1.0) : 0.0};
            body(p);
        }
}

struct Range {
    double lo = 0.0, hi = 0.0;
};

// Value range of the target over one element, using the exact plateau query
// when available and lattice sampling otherwise.
Range element_range(const SplineSpace& s, const PhaseTarget& v, int e, int n) {
    if (v.plateau) {
        Point lo, hi;
        s.element_box(e, lo, hi);
        const Plateau p = v.plateau(lo, hi);
        if (p == Plateau::Zero) return {0.0, 0.0};
        if (p == Plateau::One) return {1.0, 1.0};
    }
    Range r{1e300, -1e300};
    for_each_sample(s, e, n, [&](const Point& p) {
        const double val = v.value(p);
        r.lo = std::min(r.lo, val);
        r.hi = std::max(r.hi, val);
    });
    return r;
}

}  // namespace

SupErrorScan measure_sup_error(const PhaseTarget& v, const SplineField& w_h, int samples_per_dim) {
    const SplineSpace& s = *w_h.space;
    const int ne = s.num_elements();
    std::vector<SupErrorScan> partial(ne);
    parallel_for(ne, [&](int e) {
        SupErrorScan scan;
        scan.min_value = 1e300;
        scan.max_value = -1e300;
        for_each_sample(s, e, samples_per_dim, [&](const Point& p) {
            const double w = eval_field(w_h, p, 0).value;
            const double err = std::abs(v.value(p) - w);
            if (err > scan.max_err) {
                scan.max_err = err;
                scan.err_witness = p;
            }
            if (w < scan.min_value) {
                scan.min_value = w;
                scan.min_witness = p;
            }
            if (w > scan.max_value) {
                scan.max_value = w;
                scan.max_witness = p;
            }
        });
        partial[e] = scan;
    });
    SupErrorScan out;
    out.min_value = 1e300;
    out.max_value = -1e300;
    for (const auto& scan : partial) {
        if (scan.max_err > out.max_err) {
            out.max_err = scan.max_err;
            out.err_witness = scan.err_witness;
        }
        if (scan.min_value < out.min_value) {
            out.min_value = scan.min_value;
            out.min_witness = scan.min_witness;
        }
        if (scan.max_value > out.max_value) {
            out.max_value = scan.max_value;
            out.max_witness = scan.max_witness;
        }
    }
    return out;
}

double RepairCalibrator::calibrate(const PhaseTarget& v, const SplineField& w_h, double eps,
                                   int samples_per_dim, std::string* warning) {
    const double h = w_h.space->element_width_max();
    const double ratio = h / eps;
    const double measured = measure_sup_error(v, w_h, samples_per_dim).max_err;
    if (!calibrated()) {
        c_hat_ = std::max(safety_ * measured / (ratio * ratio * ratio), c_hat_floor_);
        return c_hat_ * ratio * ratio * ratio;
    }
    double c = c_hat_ * ratio * ratio * ratio;
    if (measured > c) {
        if (warning)
            *warning = "sup error " + format_double(measured) + " exceeds calibrated c = " +
                       format_double(c) + " (rate violation at h/eps = " + format_double(ratio) + ")";
        c = safety_ * measured;
    }
    return c;
}

std::string ElementClassification::to_csv() const {
    std::string s = "element,family\n";
    for (size_t e = 0; e < family_of.size(); ++e)
        s += csv_line({std::to_string(e), std::to_string(family_of[e])});
    return s;
}

ElementClassification classify(const SplineSpace& space, const PhaseTarget& v, double c,
                               int samples_per_dim) {
    if (!(c > 0.0) || c > 1.0 / 6.0)
        throw RepairError("classify: need 0 < c <= 1/6 (h/eps too large for repair construction)");
    const int ne = space.num_elements();
    std::vector<Range> ranges(ne);
    parallel_for(ne, [&](int e) { ranges[e] = element_range(space, v, e, samples_per_dim); });

    ElementClassification cls;
    cls.c = c;
    cls.family_of.assign(ne, -1);
    cls.ext1.assign(ne, 0);
    cls.ext3.assign(ne, 0);

    for (int e = 0; e < ne; ++e) {
        Range r{1e300, -1e300};
        for (int k : space.extended_support(e)) {
            r.lo = std::min(r.lo, ranges[k].lo);
            r.hi = std::max(r.hi, ranges[k].hi);
        }
        if (r.lo < 0.0 || r.hi > 1.0)
            throw RepairError("classify: target takes values outside [0,1]");
        int family;
        if (r.lo == 0.0 && r.hi == 0.0) {
            family = 0;
        } else if (r.lo == 1.0 && r.hi == 1.0) {
            family = 4;
        } else if (r.lo >= 2.0 * c && r.hi <= 1.0 - 2.0 * c) {
            family = 2;
        } else {
            const bool meets1 = r.lo < 2.0 * c && r.hi > 0.0;
            const bool meets3 = r.hi > 1.0 - 2.0 * c && r.lo < 1.0;
            if (meets1 && meets3)
                throw RepairError("classify: extended support meets both transition bands; "
                                  "h/eps too large for repair construction");
            family = meets1 ? 1 : 3;
        }
        cls.family_of[e] = family;
        cls.families[family].push_back(e);
    }

    for (int e : cls.families[1])
        for (int k : space.extended_support(e)) cls.ext1[k] = 1;
    for (int e : cls.families[3])
        for (int k : space.extended_support(e)) cls.ext3[k] = 1;
    for (int e = 0; e < ne; ++e) {
        if (cls.ext1[e] && cls.ext3[e])
            throw RepairError("classify: enlarged sets of K^1 and K^3 overlap; "
                              "h/eps too large for repair construction");
    }
    return cls;
}

SplineField correction_field(const SplineSpace& space, const ElementClassification& cls, int family) {
    if (family != 1 && family != 3) throw std::invalid_argument("correction_field: family must be 1 or 3");
    SplineField f(space, 1);
    for (int e : cls.families[family])
        for (int j : space.element_basis(e)) f.coeff(j) = 1.0;
    return f;
}

std::string RepairOutcome::csv_header() {
    return "eps,h,c,sup_error,corr_l2_sq,corr_h1_sq,corr_h2_sq\n";
}

std::string RepairOutcome::to_csv_row(double eps, double h, double sup_error) const {
    return csv_line({format_double(eps), format_double(h), format_double(c), format_double(sup_error),
                     format_double(correction_l2_sq), format_double(correction_h1_sq),
                     format_double(correction_h2_sq)});
}

RepairOutcome repair(const SplineField& w_h, const ElementClassification& cls, double c,
                     const QuadratureRule& rule, int samples_per_dim) {
    const SplineSpace& space = *w_h.space;
    const SplineField v1 = correction_field(space, cls, 1);
    const SplineField v3 = correction_field(space, cls, 3);

    RepairOutcome out;
    out.c = c;
    out.field = w_h;
    for (int j = 0; j < space.num_basis(); ++j)
        out.field.coeff(j) += c * v1.coeff(j) - c * v3.coeff(j);

    // Precondition -c <= w_h <= 1+c and postcondition 0 <= v_h <= 1, both
    // checked on the same lattice.
    const double tol = 1e-12;
    const int ne = space.num_elements();
    std::vector<std::string> bad(ne);
    parallel_for(ne, [&](int e) {
        for_each_sample(space, e, samples_per_dim, [&](const Point& p) {
            if (!bad[e].empty()) return;
            const double w = eval_field(w_h, p, 0).value;
            if (w < -c - tol || w > 1.0 + c + tol)
                bad[e] = "repair: w_h = " + format_double(w) + " outside [-c, 1+c] at (" +
                         format_double(p[0]) + "," + format_double(p[1]) + ")";
            const double r = eval_field(out.field, p, 0).value;
            if (r < -tol || r > 1.0 + tol)
                bad[e] = "repair: repaired value " + format_double(r) + " outside [0,1] at (" +
                         format_double(p[0]) + "," + format_double(p[1]) + "); c under-calibrated";
        });
    });
    for (const auto& msg : bad)
        if (!msg.empty()) throw RepairError(msg);

    // Correction norms; the difference is c v^1 - c v^3 with disjoint supports.
    SplineField diff(space, 1);
    for (int j = 0; j < space.num_basis(); ++j) diff.coeff(j) = out.field.coeff(j) - w_h.coeff(j);
    for (int e = 0; e < ne; ++e) {
        if (!cls.ext1[e] && !cls.ext3[e]) continue;
        const auto eq = element_quadrature(space, rule, e);
        for (size_t i = 0; i < eq.points.size(); ++i) {
            const Deriv d = eval_field(diff, eq.points[i], 2);
            out.correction_l2_sq += eq.weights[i] * d.value * d.value;
            out.correction_h1_sq += eq.weights[i] * norm_sq(d.grad);
            out.correction_h2_sq += eq.weights[i] * d.hess.frobenius_sq();
        }
    }
    return out;
}

SplineField clamp_baseline(const SplineField& w_h) {
    SplineField out = w_h;
    for (auto& c : out.coeffs) c = std::clamp(c, 0.0, 1.0);
    return out;
}

RescaleReport rescale_antipattern(const SplineField& w_h, double c, double eps,
                                  const QuadratureRule& rule) {
    if (c < 0.0) throw std::invalid_argument("rescale_antipattern: c must be nonnegative");
    RescaleReport rep;
    rep.field = w_h;
    for (auto& v : rep.field.coeffs) v = (v + c) / (1.0 + 2.0 * c);
    rep.eps_inv_c_sq = c * c / eps;

    const SplineSpace& space = *w_h.space;
    auto reaction = [&](bool only_overshoot) {
        return integrate(space, rule, [&](const Point& p) {
                   if (only_overshoot && eval_field(w_h, p, 0).value < 1.0 - 1e-12) return 0.0;
                   const double d = eval_field(rep.field, p, 0).value - 1.0;
                   return d * d;
               }) /
               eps;
    };
    rep.reaction_energy = reaction(false);
    rep.reaction_on_overshoot = reaction(true);
    return rep;
}

}  // namespace pf
