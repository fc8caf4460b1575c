#include "phasefield/solver.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <chrono>
#include <cmath>

#include <nlohmann/json.hpp>

#include "phasefield/profile1d.hpp"
#include "phasefield/report.hpp"

namespace pf {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

int default_max_cg(int n) { return 40 * static_cast<int>(std::sqrt(static_cast<double>(n))) + 200; }

// Degraded stiffness a(ui, uj) = int (v^2 + eta) dW(eps(ui), eps(uj)); the
// elastic energy is 1/2 u^T A u.
SpMat assemble_stiffness(const SplineField& v, const PhaseFieldParams& params,
                         const SplineSpace& us, int components, const QuadratureRule& rule) {
    const int nb = us.num_basis();
    const int n = nb * components;
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(us.num_elements()) * 81);
    for (int e = 0; e < us.num_elements(); ++e) {
        const auto eq = element_quadrature(us, rule, e);
        for (size_t q = 0; q < eq.points.size(); ++q) {
            const auto basis = us.eval_basis(eq.points[q], 1);
            const double vv = eval_field(v, eq.points[q], 0).value;
            const double w = eq.weights[q] * (vv * vv + params.eta);
            for (const auto& bi : basis)
                for (const auto& bj : basis) {
                    if (params.law == ElasticLaw::Scalar) {
                        trips.emplace_back(bi.index, bj.index, w * dot(bi.d.grad, bj.d.grad));
                    } else {
                        const double gx_i = bi.d.grad[0], gy_i = bi.d.grad[1];
                        const double gx_j = bj.d.grad[0], gy_j = bj.d.grad[1];
                        // 2 mu E_c(phi_i) : E_d(phi_j) + lambda div_c div_d
                        const double mu2 = 2.0 * params.mu;
                        const double a00 = mu2 * (gx_i * gx_j + 0.5 * gy_i * gy_j) +
                                           params.lambda * gx_i * gx_j;
                        const double a01 = mu2 * 0.5 * gy_i * gx_j + params.lambda * gx_i * gy_j;
                        const double a10 = mu2 * 0.5 * gx_i * gy_j + params.lambda * gy_i * gx_j;
                        const double a11 = mu2 * (gy_i * gy_j + 0.5 * gx_i * gx_j) +
                                           params.lambda * gy_i * gy_j;
                        trips.emplace_back(bi.index, bj.index, w * a00);
                        trips.emplace_back(bi.index, bj.index + nb, w * a01);
                        trips.emplace_back(bi.index + nb, bj.index, w * a10);
                        trips.emplace_back(bi.index + nb, bj.index + nb, w * a11);
                    }
                }
        }
    }
    SpMat A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

// Hessian H and linear term b of the v-quadratic: E(v) = v^T H v - 2 b^T v + const.
void assemble_v_quadratic(const SplineField& u, const PhaseFieldParams& params,
                          const SplineSpace& vs, const QuadratureRule& rule, SpMat& H,
                          Eigen::VectorXd& b) {
    const int n = vs.num_basis();
    const double gcq = 0.25 * params.gc;
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(vs.num_elements()) * 81);
    b = Eigen::VectorXd::Zero(n);
    for (int e = 0; e < vs.num_elements(); ++e) {
        const auto eq = element_quadrature(vs, rule, e);
        for (size_t q = 0; q < eq.points.size(); ++q) {
            const Point& x = eq.points[q];
            const auto basis = vs.eval_basis(x, 2);
            double W;
            if (params.law == ElasticLaw::Scalar) {
                W = 0.5 * norm_sq(eval_field(u, x, 1).grad);
            } else {
                const Deriv dx = eval_field(u, x, 1, 0);
                const Deriv dy = eval_field(u, x, 1, 1);
                const Sym2 E{dx.grad[0], 0.5 * (dx.grad[1] + dy.grad[0]), dy.grad[1]};
                W = elastic_density_from_strain(params, E);
            }
            const double w = eq.weights[q];
            for (const auto& bi : basis) {
                b[bi.index] += w * gcq / params.eps * bi.d.value;
                for (const auto& bj : basis) {
                    double a = W * bi.d.value * bj.d.value;
                    a += gcq / params.eps * bi.d.value * bj.d.value;
                    a += gcq * 2.0 * params.eps * dot(bi.d.grad, bj.d.grad);
                    a += gcq * std::pow(params.eps, 3) * bi.d.laplacian() * bj.d.laplacian();
                    trips.emplace_back(bi.index, bj.index, w * a);
                }
            }
        }
    }
    H.resize(n, n);
    H.setFromTriplets(trips.begin(), trips.end());
}

Eigen::VectorXd clamp01(const Eigen::VectorXd& v) {
    return v.cwiseMax(0.0).cwiseMin(1.0);
}

}  // namespace

void DirichletData::pin_side(const SplineSpace& space, int components, int component, int axis,
                             int side, double value) {
    const int nb = space.num_basis();
    for (int j = 0; j < nb; ++j) {
        auto [jx, jy] = space.basis_coords(j);
        const int ja = axis == 0 ? jx : jy;
        const int last = space.basis_per_axis(axis) - 1;
        if ((side == 0 && ja == 0) || (side != 0 && ja == last)) {
            indices.push_back(component * nb + j);
            values.push_back(value);
        }
    }
}

void DirichletData::apply(SplineField& u) const {
    for (size_t i = 0; i < indices.size(); ++i) u.coeffs[indices[i]] = values[i];
}

std::string SolveReport::to_json() const {
    nlohmann::json j;
    j["outer_iterations"] = outer_iterations;
    j["energy_trace"] = energy_trace;
    j["converged"] = converged;
    j["wall_time_s"] = wall_time_s;
    j["final"] = {{"elastic", final_breakdown.elastic},
                  {"reaction", final_breakdown.reaction},
                  {"gradient", final_breakdown.gradient},
                  {"laplacian", final_breakdown.laplacian},
                  {"total", final_breakdown.total}};
    return j.dump(2);
}

SplineField minimize_u(const SplineField& u0, const SplineField& v, const PhaseFieldParams& params,
                       const DirichletData& dirichlet, const QuadratureRule& rule,
                       const SolverOptions& opts) {
    params.validate();
    const SplineSpace& us = *u0.space;
    const int components = u0.components;
    const int n = us.num_basis() * components;
    const SpMat A = assemble_stiffness(v, params, us, components, rule);

    std::vector<char> fixed(n, 0);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) full[i] = u0.coeffs[i];
    for (size_t i = 0; i < dirichlet.indices.size(); ++i) {
        fixed[dirichlet.indices[i]] = 1;
        full[dirichlet.indices[i]] = dirichlet.values[i];
    }
    std::vector<int> free_of;
    std::vector<int> pos(n, -1);
    for (int i = 0; i < n; ++i)
        if (!fixed[i]) {
            pos[i] = static_cast<int>(free_of.size());
            free_of.push_back(i);
        }
    const int nf = static_cast<int>(free_of.size());
    if (nf == 0) {
        SplineField out = u0;
        for (int i = 0; i < n; ++i) out.coeffs[i] = full[i];
        return out;
    }

    // Reduced system A_ff x = -A_fc u_c.
    std::vector<Triplet> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
            if (fixed[r]) continue;
            if (fixed[c])
                rhs[pos[r]] -= it.value() * full[c];
            else
                trips.emplace_back(pos[r], pos[c], it.value());
        }
    SpMat Aff(nf, nf);
    Aff.setFromTriplets(trips.begin(), trips.end());

    Eigen::VectorXd guess(nf);
    for (int i = 0; i < nf; ++i) guess[i] = full[free_of[i]];

    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(opts.rtol);
    cg.setMaxIterations(opts.max_cg > 0 ? opts.max_cg : default_max_cg(nf));
    cg.compute(Aff);
    const Eigen::VectorXd x = cg.solveWithGuess(rhs, guess);
    if (cg.info() != Eigen::Success && cg.error() > std::sqrt(opts.rtol))
        throw SolverError("minimize_u: CG did not converge, relative residual " +
                              format_double(cg.error()),
                          cg.error());

    SplineField out = u0;
    for (int i = 0; i < n; ++i) out.coeffs[i] = full[i];
    for (int i = 0; i < nf; ++i) out.coeffs[free_of[i]] = x[i];
    return out;
}

SplineField minimize_v(const SplineField& u, const SplineField& v0, const PhaseFieldParams& params,
                       const QuadratureRule& rule, const SolverOptions& opts) {
    params.validate();
    const SplineSpace& vs = *v0.space;
    const int n = vs.num_basis();
    SpMat H;
    Eigen::VectorXd b;
    assemble_v_quadratic(u, params, vs, rule, H, b);

    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = v0.coeffs[i];
    v = clamp01(v);

    // Gradient projection with subspace acceleration: Barzilai-Borwein steps
    // along the feasible arc settle the active set, then CG on the free
    // variables finishes the quadratic. Every accepted move is an exact line
    // search over a feasible segment, so the energy is nonincreasing.
    Eigen::VectorXd g = 2.0 * (H * v - b);

    // Exact minimization over the segment [v, clamp(v + d)]; returns false
    // when no descent is possible along it.
    auto segment_step = [&](const Eigen::VectorXd& d) {
        const Eigen::VectorXd cand = clamp01(v + d);
        Eigen::VectorXd step = cand - v;
        if (step.squaredNorm() == 0.0) return false;
        const double gd = g.dot(step);
        if (gd >= 0.0) return false;
        const Eigen::VectorXd Hs = H * step;
        const double curv = step.dot(Hs);
        const double alpha = curv > 0.0 ? std::clamp(-0.5 * gd / curv, 0.0, 1.0) : 1.0;
        if (alpha == 0.0) return false;
        v += alpha * step;
        g += 2.0 * alpha * Hs;
        return true;
    };

    double t = 1.0 / std::max(1e-30, H.coeffs().maxCoeff());
    Eigen::VectorXd v_prev = v, g_prev = g;
    bool converged = false;
    int used = 0;
    const int max_rounds = std::max(20, opts.max_pg / 100);
    for (int round = 0; round < max_rounds && !converged; ++round) {
        // Phase 1: a few projected-arc BB steps.
        for (int it = 0; it < 8; ++it, ++used) {
            if ((v - clamp01(v - g)).norm() <= opts.pg_tol) {
                converged = true;
                break;
            }
            if (used > 0) {
                const Eigen::VectorXd dv = v - v_prev;
                const Eigen::VectorXd dg = g - g_prev;
                const double num = dv.dot(dv), den = dv.dot(dg);
                if (den > 1e-300) t = std::clamp(num / den, 1e-14, 1e14);
            }
            v_prev = v;
            g_prev = g;
            if (!segment_step(clamp01(v - t * g) - v)) break;
        }
        if (converged) break;
        g = 2.0 * (H * v - b);
        if ((v - clamp01(v - g)).norm() <= opts.pg_tol) {
            converged = true;
            break;
        }

        // Phase 2: CG on the free variables (moves with inward gradient are
        // free as well), then a projected segment step along the result.
        std::vector<int> free_idx;
        free_idx.reserve(n);
        for (int i = 0; i < n; ++i) {
            const bool at_lo = v[i] <= 0.0 && g[i] > 0.0;
            const bool at_hi = v[i] >= 1.0 && g[i] < 0.0;
            if (!at_lo && !at_hi) free_idx.push_back(i);
        }
        if (!free_idx.empty()) {
            std::vector<int> pos(n, -1);
            for (size_t a = 0; a < free_idx.size(); ++a) pos[free_idx[a]] = static_cast<int>(a);
            std::vector<Triplet> trips;
            for (int k = 0; k < H.outerSize(); ++k)
                for (SpMat::InnerIterator itH(H, k); itH; ++itH) {
                    const int r = pos[itH.row()], c = pos[itH.col()];
                    if (r >= 0 && c >= 0) trips.emplace_back(r, c, 2.0 * itH.value());
                }
            SpMat Hff(free_idx.size(), free_idx.size());
            Hff.setFromTriplets(trips.begin(), trips.end());
            Eigen::VectorXd rhs(free_idx.size());
            for (size_t a = 0; a < free_idx.size(); ++a) rhs[a] = -g[free_idx[a]];
            Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                                     Eigen::DiagonalPreconditioner<double>> cg;
            cg.setTolerance(std::max(1e-12, 1e-2 * std::pow(0.25, round)));
            cg.setMaxIterations(4000);
            cg.compute(Hff);
            const Eigen::VectorXd dF = cg.solve(rhs);
            Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
            for (size_t a = 0; a < free_idx.size(); ++a) d[free_idx[a]] = dF[a];
            // Projection can spoil descent; halve until the segment descends.
            for (int bt = 0; bt < 30; ++bt) {
                if (segment_step(d)) break;
                d *= 0.5;
            }
            g = 2.0 * (H * v - b);
        }
    }
    {
        g = 2.0 * (H * v - b);
        const double pg = (v - clamp01(v - g)).norm();
        if (pg > opts.pg_tol)
            throw SolverError("minimize_v: projected gradient did not reach tolerance (pg = " +
                                  format_double(pg) + ")",
                              pg);
    }

    SplineField out = v0;
    for (int i = 0; i < n; ++i) out.coeffs[i] = v[i];
    return out;
}

SolveResult alternate_minimize(SplineField u0, SplineField v0, const PhaseFieldParams& params,
                               const DirichletData& dirichlet, const QuadratureRule& rule,
                               const SolverOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    params.validate();
    for (auto& c : v0.coeffs) c = std::clamp(c, 0.0, 1.0);
    dirichlet.apply(u0);

    SolveResult res{std::move(u0), std::move(v0), {}};
    double E = total_energy(res.u, res.v, params, rule).total;
    res.report.energy_trace.push_back(E);

    bool converged = false;
    int k = 0;
    for (; k < opts.max_outer; ++k) {
        // u half-step; kept only if the computed energy does not increase.
        SplineField u_new = minimize_u(res.u, res.v, params, dirichlet, rule, opts);
        double E_half = total_energy(u_new, res.v, params, rule).total;
        if (E_half <= E) {
            res.u = std::move(u_new);
            E = E_half;
        }
        // v half-step, same guard.
        SplineField v_new = minimize_v(res.u, res.v, params, rule, opts);
        double E_full = total_energy(res.u, v_new, params, rule).total;
        if (E_full <= E) {
            res.v = std::move(v_new);
            E = E_full;
        }
        const double E_prev = res.report.energy_trace.back();
        res.report.energy_trace.push_back(E);
        if (E_prev - E < opts.outer_tol) {
            converged = true;
            ++k;
            break;
        }
    }
    res.report.outer_iterations = k;
    res.report.converged = converged;
    res.report.final_breakdown = total_energy(res.u, res.v, params, rule);
    res.report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

SplineField crack_seed_v(const SplineSpace& vspace, int axis, double position, double eps) {
    static const TruncatedProfile seed_profile = build_truncated_profile(0.5);
    RescaledProfile z(seed_profile, eps);
    SplineField v(vspace, 1);
    for (int j = 0; j < vspace.num_basis(); ++j) {
        const Point g = vspace.greville(j);
        v.coeff(j) = std::clamp(z.value(g[axis] - position), 0.0, 1.0);
    }
    return v;
}

}  // namespace pf
