#pragma once

#include <functional>
#include <vector>

#include "phasefield/geometry.hpp"
#include "phasefield/knots.hpp"

namespace pf {

// Value and physical-space derivatives of a scalar quantity at a point.
struct Deriv {
    double value = 0.0;
    Vec2 grad{0.0, 0.0};
    Sym2 hess;

    double laplacian() const { return hess.xx + hess.yy; }
};

struct BasisValue {
    int index = 0;  // flat basis index
    Deriv d;
};

// Tensor-product quadratic B-spline space on a patch, dim in {1,2}.
// Elements and basis functions are indexed lexicographically, x fastest.
class SplineSpace {
  public:
    SplineSpace(KnotVector kx, BoxMap map);                 // 1D
    SplineSpace(KnotVector kx, KnotVector ky, BoxMap map);  // 2D

    static SplineSpace uniform_1d(int elements, BoxMap map = BoxMap::identity(1));
    static SplineSpace uniform_2d(int ex, int ey, BoxMap map = BoxMap::identity(2));

    int dim() const { return dim_; }
    const BoxMap& map() const { return map_; }
    const KnotVector& axis(int a) const { return a == 0 ? kx_ : ky_; }

    int num_basis() const;
    int num_elements() const;
    int basis_per_axis(int a) const { return axis(a).num_basis(); }
    int elements_per_axis(int a) const { return a < dim_ ? axis(a).num_elements() : 1; }

    int element_index(int ex, int ey = 0) const { return ey * elements_per_axis(0) + ex; }
    std::pair<int, int> element_coords(int e) const;
    int basis_index(int jx, int jy = 0) const { return jy * basis_per_axis(0) + jx; }
    std::pair<int, int> basis_coords(int j) const;

    // Physical bounding box of element e.
    void element_box(int e, Point& lo, Point& hi) const;
    // Max physical element diameter (the mesh size h).
    double mesh_size() const;
    // Max physical element width over axes; the h used in h/eps ratios.
    double element_width_max() const;

    // Physical Greville point of basis j.
    Point greville(int j) const;

    // Elements covered by the support of basis j.
    std::vector<int> basis_support_elements(int j) const;
    // Basis functions active on element e ((degree+1)^d of them).
    std::vector<int> element_basis(int e) const;

    // Extended support of element e: union of supports of all basis functions
    // whose support meets e, as a sorted element list (contains e).
    std::vector<int> extended_support(int e) const;
    // Same as a per-axis inclusive element range.
    void extended_support_range(int e, int lo[2], int hi[2]) const;

    // Active basis values/derivatives at a physical point.
    std::vector<BasisValue> eval_basis(const Point& x_phys, int deriv_order) const;

    bool contains(const Point& x_phys) const { return map_.contains_physical(x_phys); }

  private:
    int dim_;
    KnotVector kx_;
    KnotVector ky_;
    BoxMap map_;
};

// Coefficient vector over a SplineSpace; `components` is 1 for phase fields
// and scalar displacements, dim for vector displacements.
struct SplineField {
    const SplineSpace* space = nullptr;
    int components = 1;
    std::vector<double> coeffs;  // component-major: coeffs[c * num_basis + j]

    SplineField() = default;
    SplineField(const SplineSpace& s, int comps = 1)
        : space(&s), components(comps), coeffs(static_cast<size_t>(comps) * s.num_basis(), 0.0) {}

    double& coeff(int j, int c = 0) { return coeffs[static_cast<size_t>(c) * space->num_basis() + j]; }
    double coeff(int j, int c = 0) const { return coeffs[static_cast<size_t>(c) * space->num_basis() + j]; }
};

// Value / gradient / Hessian of one component at a physical point.
Deriv eval_field(const SplineField& f, const Point& x_phys, int deriv_order, int component = 0);

SplineField constant_field(const SplineSpace& s, double value, int components = 1);

}  // namespace pf
