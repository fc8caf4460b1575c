#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace pf {

// Points and small tensors for d in {1,2}. Unused trailing entries are zero.
using Point = std::array<double, 2>;
using Vec2 = std::array<double, 2>;

// Symmetric 2x2 matrix stored as (xx, xy, yy).
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double trace() const { return xx + yy; }
    double frobenius_sq() const { return xx * xx + 2.0 * xy * xy + yy * yy; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm_sq(const Vec2& a) { return dot(a, a); }

// Axis-aligned affine map from the parametric patch (0,1)^d to a physical box.
// This is the desk-scale stand-in for a smooth parametrization: the Jacobian is
// constant and diagonal, so derivative transforms are exact.
class BoxMap {
  public:
    BoxMap() = default;

    BoxMap(int dim, Point lo, Point hi) : dim_(dim), lo_(lo), hi_(hi) {
        for (int i = 0; i < dim_; ++i) {
            if (!(hi_[i] > lo_[i])) throw std::invalid_argument("BoxMap: empty box side");
        }
        for (int i = dim_; i < 2; ++i) { lo_[i] = 0.0; hi_[i] = 1.0; }
    }

    static BoxMap identity(int dim) { return BoxMap(dim, {0.0, 0.0}, {1.0, 1.0}); }

    int dim() const { return dim_; }
    double scale(int axis) const { return hi_[axis] - lo_[axis]; }
    double lo(int axis) const { return lo_[axis]; }
    double hi(int axis) const { return hi_[axis]; }

    double jacobian_det() const {
        double j = 1.0;
        for (int i = 0; i < dim_; ++i) j *= scale(i);
        return j;
    }

    Point to_physical(const Point& x) const {
        Point y{0.0, 0.0};
        for (int i = 0; i < dim_; ++i) y[i] = lo_[i] + scale(i) * x[i];
        return y;
    }

    Point to_parametric(const Point& y) const {
        Point x{0.0, 0.0};
        for (int i = 0; i < dim_; ++i) x[i] = (y[i] - lo_[i]) / scale(i);
        return x;
    }

    bool contains_physical(const Point& y, double tol = 1e-12) const {
        for (int i = 0; i < dim_; ++i) {
            if (y[i] < lo_[i] - tol * scale(i) || y[i] > hi_[i] + tol * scale(i)) return false;
        }
        return true;
    }

  private:
    int dim_ = 1;
    Point lo_{0.0, 0.0};
    Point hi_{1.0, 1.0};
};

}  // namespace pf
