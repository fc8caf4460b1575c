#include "phasefield/knots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pf {

KnotVector::KnotVector(std::vector<double> knots) : knots_(std::move(knots)) {
    const int p = degree;
    const int m = static_cast<int>(knots_.size());
    if (m < 2 * (p + 1)) throw std::invalid_argument("KnotVector: too few knots");
    for (int i = 1; i < m; ++i) {
        if (knots_[i] < knots_[i - 1]) throw std::invalid_argument("KnotVector: knots must be nondecreasing");
    }
    for (int i = 1; i <= p; ++i) {
        if (knots_[i] != knots_.front() || knots_[m - 1 - i] != knots_.back())
            throw std::invalid_argument("KnotVector: end knots must have multiplicity degree+1");
    }
    // Interior knots must be simple: multiplicity <= degree-1 = 1 keeps C^1.
    for (int i = p + 1; i < m - p - 1; ++i) {
        if (knots_[i] == knots_[i + 1])
            throw std::invalid_argument("KnotVector: interior knots must be simple (C^1 required)");
    }
    for (int i = p; i < m - p - 1; ++i) {
        if (knots_[i + 1] > knots_[i]) {
            spans_.push_back(i);
            const double w = knots_[i + 1] - knots_[i];
            hmax_ = std::max(hmax_, w);
            hmin_ = (hmin_ == 0.0) ? w : std::min(hmin_, w);
        }
    }
}

KnotVector KnotVector::uniform_open(int elements) {
    if (elements < 1) throw std::invalid_argument("KnotVector: need at least one element");
    std::vector<double> k;
    k.reserve(elements + 5);
    for (int i = 0; i < 3; ++i) k.push_back(0.0);
    for (int i = 1; i < elements; ++i) k.push_back(static_cast<double>(i) / elements);
    for (int i = 0; i < 3; ++i) k.push_back(1.0);
    return KnotVector(std::move(k));
}

std::pair<double, double> KnotVector::element_interval(int e) const {
    const int s = spans_[e];
    return {knots_[s], knots_[s + 1]};
}

double KnotVector::element_width(int e) const {
    auto [a, b] = element_interval(e);
    return b - a;
}

int KnotVector::find_span(double x) const {
    const double a = knots_.front();
    const double b = knots_.back();
    if (x < a || x > b) throw std::domain_error("KnotVector: point outside patch");
    if (x >= b) return spans_.back();
    // Binary search over nonempty spans.
    int lo = 0, hi = static_cast<int>(spans_.size()) - 1;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (x < knots_[spans_[mid] + 1])
            hi = mid;
        else
            lo = mid + 1;
    }
    return spans_[lo];
}

int KnotVector::element_of(double x) const {
    const int s = find_span(x);
    const auto it = std::lower_bound(spans_.begin(), spans_.end(), s);
    return static_cast<int>(it - spans_.begin());
}

int KnotVector::eval(double x, int deriv_order, std::array<std::array<double, 3>, 3>& out) const {
    if (deriv_order > 2) throw std::invalid_argument("KnotVector: derivatives beyond order 2 unsupported");
    const int p = degree;
    const int span = find_span(x);
    const auto& t = knots_;

    // Cox-de Boor triangle up to degree 2, with derivative recursions carried
    // alongside (quadratic case written out; spans are guaranteed nonempty).
    // Degree 0.
    double n0[1] = {1.0};
    // Degree 1.
    double n1[2], d1[2];
    {
        const double den0 = t[span + 1] - t[span];
        const double a = (x - t[span]) / den0;
        n1[0] = (1.0 - a) * n0[0];
        n1[1] = a * n0[0];
        d1[0] = -n0[0] / den0;
        d1[1] = n0[0] / den0;
    }
    // Degree 2: the degree-1 basis j = span-1+i feeds the left term of
    // N_{j,2} (slot i+1) and the right term of N_{j-1,2} (slot i), both with
    // denominator t_{j+2} - t_j.
    double n2[3] = {0, 0, 0}, d2[3] = {0, 0, 0}, s2[3] = {0, 0, 0};
    for (int i = 0; i < 2; ++i) {
        const int j = span - 1 + i;
        const double den = t[j + p] - t[j];
        const double aL = (x - t[j]) / den;
        const double aR = (t[j + p] - x) / den;
        const double g = 1.0 / den;
        n2[i + 1] += aL * n1[i];
        d2[i + 1] += g * n1[i] + aL * d1[i];
        s2[i + 1] += 2.0 * g * d1[i];
        n2[i] += aR * n1[i];
        d2[i] += -g * n1[i] + aR * d1[i];
        s2[i] += -2.0 * g * d1[i];
    }

    for (auto& row : out) row = {0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        out[0][i] = n2[i];
        if (deriv_order >= 1) out[1][i] = d2[i];
        if (deriv_order >= 2) out[2][i] = s2[i];
    }
    return span - p;
}

double KnotVector::greville(int j) const {
    return 0.5 * (knots_[j + 1] + knots_[j + 2]);
}

std::pair<int, int> KnotVector::basis_element_range(int j) const {
    // Support of basis j is [t_j, t_{j+3}]; clamp to nonempty spans.
    const double a = knots_[j];
    const double b = knots_[j + degree + 1];
    int lo = 0;
    while (lo + 1 < num_elements() && element_interval(lo).second <= a) ++lo;
    int hi = num_elements() - 1;
    while (hi > 0 && element_interval(hi).first >= b) --hi;
    return {lo, hi};
}

}  // namespace pf
