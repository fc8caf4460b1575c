#pragma once

#include <array>
#include <utility>
#include <vector>

namespace pf {

// Open (clamped) knot vector for quadratic B-splines on [0,1].
// End knots have multiplicity 3, interior knots are simple, so the spline
// space is C^1 and its fields have element-wise second derivatives.
class KnotVector {
  public:
    static constexpr int degree = 2;

    explicit KnotVector(std::vector<double> knots);

    // n equal elements on [0,1].
    static KnotVector uniform_open(int elements);

    int num_basis() const { return static_cast<int>(knots_.size()) - degree - 1; }
    int num_elements() const { return static_cast<int>(spans_.size()); }
    const std::vector<double>& knots() const { return knots_; }

    // Parametric interval of element e.
    std::pair<double, double> element_interval(int e) const;
    double element_width(int e) const;
    double max_element_width() const { return hmax_; }
    double min_element_width() const { return hmin_; }

    // Knot-span index containing x (right-closed at x = 1).
    int find_span(double x) const;
    int element_of(double x) const;
    int span_of_element(int e) const { return spans_[e]; }

    // Values and derivatives (orders 0..derivOrder <= 2) of the degree+1 basis
    // functions active at x. out[k][i] is the k-th derivative of basis
    // (first_basis + i). Returns first_basis.
    int eval(double x, int deriv_order, std::array<std::array<double, 3>, 3>& out) const;

    // Greville abscissa of basis j: mean of knots j+1, j+2.
    double greville(int j) const;

    // Elements covered by the support of basis j (contiguous range, inclusive).
    std::pair<int, int> basis_element_range(int j) const;

    // Basis indices active on element e: span-2 .. span.
    int first_basis_on_element(int e) const { return spans_[e] - degree; }

  private:
    std::vector<double> knots_;
    std::vector<int> spans_;  // knot-span index of each nonempty element
    double hmax_ = 0.0;
    double hmin_ = 0.0;
};

}  // namespace pf
