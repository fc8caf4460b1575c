#include "phasefield/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pf {

SplineSpace::SplineSpace(KnotVector kx, BoxMap map)
    : dim_(1), kx_(std::move(kx)), ky_(KnotVector::uniform_open(1)), map_(std::move(map)) {
    if (map_.dim() != 1) throw std::invalid_argument("SplineSpace: map dimension mismatch");
}

SplineSpace::SplineSpace(KnotVector kx, KnotVector ky, BoxMap map)
    : dim_(2), kx_(std::move(kx)), ky_(std::move(ky)), map_(std::move(map)) {
    if (map_.dim() != 2) throw std::invalid_argument("SplineSpace: map dimension mismatch");
}

SplineSpace SplineSpace::uniform_1d(int elements, BoxMap map) {
    return SplineSpace(KnotVector::uniform_open(elements), std::move(map));
}

SplineSpace SplineSpace::uniform_2d(int ex, int ey, BoxMap map) {
    return SplineSpace(KnotVector::uniform_open(ex), KnotVector::uniform_open(ey), std::move(map));
}

int SplineSpace::num_basis() const {
    int n = kx_.num_basis();
    if (dim_ == 2) n *= ky_.num_basis();
    return n;
}

int SplineSpace::num_elements() const {
    int n = kx_.num_elements();
    if (dim_ == 2) n *= ky_.num_elements();
    return n;
}

std::pair<int, int> SplineSpace::element_coords(int e) const {
    const int nx = elements_per_axis(0);
    return {e % nx, e / nx};
}

std::pair<int, int> SplineSpace::basis_coords(int j) const {
    const int nx = basis_per_axis(0);
    return {j % nx, j / nx};
}

void SplineSpace::element_box(int e, Point& lo, Point& hi) const {
    auto [ex, ey] = element_coords(e);
    auto [ax, bx] = kx_.element_interval(ex);
    lo = {ax, 0.0};
    hi = {bx, 0.0};
    if (dim_ == 2) {
        auto [ay, by] = ky_.element_interval(ey);
        lo[1] = ay;
        hi[1] = by;
    }
    lo = map_.to_physical(lo);
    hi = map_.to_physical(hi);
}

double SplineSpace::mesh_size() const {
    double h = 0.0;
    for (int e = 0; e < num_elements(); ++e) {
        Point lo, hi;
        element_box(e, lo, hi);
        double d2 = 0.0;
        for (int a = 0; a < dim_; ++a) d2 += (hi[a] - lo[a]) * (hi[a] - lo[a]);
        h = std::max(h, std::sqrt(d2));
    }
    return h;
}

double SplineSpace::element_width_max() const {
    double h = kx_.max_element_width() * map_.scale(0);
    if (dim_ == 2) h = std::max(h, ky_.max_element_width() * map_.scale(1));
    return h;
}

Point SplineSpace::greville(int j) const {
    auto [jx, jy] = basis_coords(j);
    Point g{kx_.greville(jx), 0.0};
    if (dim_ == 2) g[1] = ky_.greville(jy);
    return map_.to_physical(g);
}

std::vector<int> SplineSpace::basis_support_elements(int j) const {
    auto [jx, jy] = basis_coords(j);
    auto [lx, hx] = kx_.basis_element_range(jx);
    int ly = 0, hy = 0;
    if (dim_ == 2) std::tie(ly, hy) = ky_.basis_element_range(jy);
    std::vector<int> out;
    out.reserve(static_cast<size_t>(hx - lx + 1) * (hy - ly + 1));
    for (int ey = ly; ey <= hy; ++ey)
        for (int ex = lx; ex <= hx; ++ex) out.push_back(element_index(ex, ey));
    return out;
}

std::vector<int> SplineSpace::element_basis(int e) const {
    auto [ex, ey] = element_coords(e);
    const int fx = kx_.first_basis_on_element(ex);
    const int fy = dim_ == 2 ? ky_.first_basis_on_element(ey) : 0;
    std::vector<int> out;
    out.reserve(dim_ == 2 ? 9 : 3);
    const int ny = dim_ == 2 ? 3 : 1;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < 3; ++ix) out.push_back(basis_index(fx + ix, fy + iy));
    return out;
}

void SplineSpace::extended_support_range(int e, int lo[2], int hi[2]) const {
    auto [ex, ey] = element_coords(e);
    const int ec[2] = {ex, ey};
    for (int a = 0; a < dim_; ++a) {
        const KnotVector& kv = axis(a);
        const int fb = kv.first_basis_on_element(ec[a]);
        int l = ec[a], h = ec[a];
        for (int i = 0; i < 3; ++i) {
            auto [bl, bh] = kv.basis_element_range(fb + i);
            l = std::min(l, bl);
            h = std::max(h, bh);
        }
        lo[a] = l;
        hi[a] = h;
    }
    for (int a = dim_; a < 2; ++a) { lo[a] = 0; hi[a] = 0; }
}

std::vector<int> SplineSpace::extended_support(int e) const {
    int lo[2], hi[2];
    extended_support_range(e, lo, hi);
    std::vector<int> out;
    out.reserve(static_cast<size_t>(hi[0] - lo[0] + 1) * (hi[1] - lo[1] + 1));
    for (int ey = lo[1]; ey <= hi[1]; ++ey)
        for (int ex = lo[0]; ex <= hi[0]; ++ex) out.push_back(element_index(ex, ey));
    return out;
}

std::vector<BasisValue> SplineSpace::eval_basis(const Point& x_phys, int deriv_order) const {
    if (deriv_order > 2) throw std::invalid_argument("eval_basis: derivatives beyond order 2 unsupported");
    if (!map_.contains_physical(x_phys)) throw std::domain_error("eval_basis: point outside patch");
    const Point x = map_.to_parametric(x_phys);
    const double sx = map_.scale(0);
    const double sy = dim_ == 2 ? map_.scale(1) : 1.0;

    std::array<std::array<double, 3>, 3> bx{}, by{};
    const int fx = kx_.eval(std::clamp(x[0], 0.0, 1.0), deriv_order, bx);
    int fy = 0;
    if (dim_ == 2) fy = ky_.eval(std::clamp(x[1], 0.0, 1.0), deriv_order, by);

    std::vector<BasisValue> out;
    out.reserve(dim_ == 2 ? 9 : 3);
    const int ny = dim_ == 2 ? 3 : 1;
    for (int iy = 0; iy < ny; ++iy) {
        const double vy = dim_ == 2 ? by[0][iy] : 1.0;
        const double dy = dim_ == 2 ? by[1][iy] / sy : 0.0;
        const double sy2 = dim_ == 2 ? by[2][iy] / (sy * sy) : 0.0;
        for (int ix = 0; ix < 3; ++ix) {
            BasisValue b;
            b.index = basis_index(fx + ix, fy + iy);
            b.d.value = bx[0][ix] * vy;
            if (deriv_order >= 1) {
                b.d.grad[0] = (bx[1][ix] / sx) * vy;
                b.d.grad[1] = bx[0][ix] * dy;
            }
            if (deriv_order >= 2) {
                b.d.hess.xx = (bx[2][ix] / (sx * sx)) * vy;
                b.d.hess.xy = (bx[1][ix] / sx) * dy;
                b.d.hess.yy = bx[0][ix] * sy2;
            }
            out.push_back(b);
        }
    }
    return out;
}

Deriv eval_field(const SplineField& f, const Point& x_phys, int deriv_order, int component) {
    const auto basis = f.space->eval_basis(x_phys, deriv_order);
    Deriv r;
    for (const auto& b : basis) {
        const double c = f.coeff(b.index, component);
        r.value += c * b.d.value;
        r.grad[0] += c * b.d.grad[0];
        r.grad[1] += c * b.d.grad[1];
        r.hess.xx += c * b.d.hess.xx;
        r.hess.xy += c * b.d.hess.xy;
        r.hess.yy += c * b.d.hess.yy;
    }
    return r;
}

SplineField constant_field(const SplineSpace& s, double value, int components) {
    SplineField f(s, components);
    std::fill(f.coeffs.begin(), f.coeffs.end(), value);
    return f;
}

}  // namespace pf
