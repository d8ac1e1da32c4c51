#pragma once

// Time marching for both model variants.  Every step solves one tridiagonal
// system; the memory term applies the spatial operator once to the weighted
// sum of past increments, so a run costs O(N^2 nx) vector work total.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracfp/fem1d.hpp"
#include "fracfp/fracops.hpp"
#include "fracfp/meshing.hpp"
#include "fracfp/models.hpp"

namespace fracfp {

/// All completed time levels psi_0..psi_n; the memory term needs every one.
struct History {
    std::vector<NodalField> fields;

    std::size_t levels() const { return fields.size(); }
    const NodalField& at(std::size_t n) const { return fields.at(n); }
};

struct StepRecord {
    std::size_t n = 0;
    double t = 0.0;
    double mass = 0.0;
    double l2_norm = 0.0;
    double max_value = 0.0;
    double min_value = 0.0;
};

struct RunReport {
    std::vector<StepRecord> records; // one per step n = 1..N
    History history;                 // levels 0..N
    double wall_seconds = 0.0;
};

namespace detail {

inline void check_step_preconditions(const ProblemSpec& spec, const History& history,
                                     std::size_t n) {
    if (n < 1 || n > spec.tmesh.N)
        throw std::invalid_argument("step: index " + std::to_string(n) + " out of range");
    if (history.levels() != n)
        throw std::invalid_argument("step: history holds " + std::to_string(history.levels()) +
                                    " levels, expected " + std::to_string(n));
    const std::size_t m = spec.grid.num_nodes();
    for (const NodalField& f : history.fields)
        if (f.size() != m) throw std::invalid_argument("step: field size mismatch");
}

/// Weighted sum of past increments
///   sum_{j=1}^{n-1} w[n-j-1] (psi_{n-j} - psi_{n-j-1}),
/// the explicit part of the L1 memory term.
inline NodalField weighted_increments(const History& history, std::span<const double> w,
                                      std::size_t n) {
    NodalField acc(history.at(0).size());
    for (std::size_t j = 1; j < n; ++j) {
        const double wj = w[n - j - 1];
        const NodalField& hi = history.at(n - j);
        const NodalField& lo = history.at(n - j - 1);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += wj * (hi[i] - lo[i]);
    }
    return acc;
}

inline NodalField source_load(const ProblemSpec& spec, double t) {
    if (!spec.source) return NodalField(spec.grid.num_nodes());
    return assemble_load(spec.grid, spec.source, t);
}

} // namespace detail

/// One step of the Riemann-Liouville form.  The fully discrete equation at
/// t_n, with A = D K - C(t_n) and L1 weights of exponent alpha, reads
///   M (psi_n - psi_{n-1})/dt_n
///     + sum_{j=0}^{n-1} (w_{n-j-1,n}/Gamma(1+a)) A (psi_{n-j} - psi_{n-j-1})
///   = b_f(t_n) - g_a(t_n) A psi_0,
/// and only the j = 0 term is implicit.  The force matrix is frozen at t_n
/// for every history term.
inline NodalField step_riemann_liouville(const ProblemSpec& spec, const History& history,
                                         std::size_t n) {
    detail::check_step_preconditions(spec, history, n);
    const double a = spec.alpha.value();
    const double dt = spec.tmesh.dt(n);
    const double tn = spec.tmesh.node(n);
    const std::size_t m = spec.grid.num_nodes();

    const TriDiagMatrix M = assemble_mass(spec.grid);
    const TriDiagMatrix K = assemble_stiffness(spec.grid);
    const TriDiagMatrix C = assemble_convection(spec.grid, spec.force, tn);
    const TriDiagMatrix A = tridiag_lincomb(spec.D, K, -1.0, C);

    L1WeightRow row = l1_weights(spec.tmesh, spec.alpha, n);
    const double inv_gamma = 1.0 / gamma_fn(1.0 + a);
    for (double& w : row.weights) w *= inv_gamma;
    const double c_implicit = row.weights[n - 1];

    const NodalField acc = detail::weighted_increments(history, row.weights, n);
    const NodalField& prev = history.at(n - 1);
    const NodalField& psi0 = history.at(0);

    NodalField m_prev = M.apply(prev);
    NodalField a_prev = A.apply(prev);
    NodalField a_acc = A.apply(acc);
    NodalField a_psi0 = A.apply(psi0);
    NodalField load = detail::source_load(spec, tn);
    const double ga = g_kernel(a, tn);

    NodalField rhs(m);
    for (std::size_t i = 0; i < m; ++i)
        rhs[i] = m_prev[i] / dt + c_implicit * a_prev[i] - a_acc[i] - ga * a_psi0[i] + load[i];

    TriDiagMatrix lhs = tridiag_lincomb(1.0 / dt, M, c_implicit, A);
    if (spec.boundary == BoundaryTreatment::Dirichlet) apply_dirichlet(lhs, rhs);
    try {
        return solve_tridiag(lhs, rhs);
    } catch (const SingularSystem& e) {
        throw SingularSystem(std::string(e.what()) + " (step " + std::to_string(n) + ")");
    }
}

/// One step of the Caputo-left comparator
///   d_t^a psi - D Lap psi + div(F psi) = f,
/// discretized with L1 weights of exponent 1-a:
///   (w_{n-1,n}/Gamma(2-a)) M psi_n + A psi_n = rhs.
/// At a = 1 the memory collapses and the step is plain backward Euler,
/// identical to the Riemann-Liouville form.
inline NodalField step_caputo_left(const ProblemSpec& spec, const History& history,
                                   std::size_t n) {
    detail::check_step_preconditions(spec, history, n);
    const double a = spec.alpha.value();
    const double dt = spec.tmesh.dt(n);
    const double tn = spec.tmesh.node(n);
    const std::size_t m = spec.grid.num_nodes();

    const TriDiagMatrix M = assemble_mass(spec.grid);
    const TriDiagMatrix K = assemble_stiffness(spec.grid);
    const TriDiagMatrix C = assemble_convection(spec.grid, spec.force, tn);
    const TriDiagMatrix A = tridiag_lincomb(spec.D, K, -1.0, C);

    std::vector<double> w;
    if (a == 1.0) {
        w.assign(n, 0.0);
        w[n - 1] = 1.0 / dt;
    } else {
        L1WeightRow row = l1_weights(spec.tmesh, FractionalOrder(1.0 - a), n);
        const double inv_gamma = 1.0 / gamma_fn(2.0 - a);
        for (double& wk : row.weights) wk *= inv_gamma;
        w = std::move(row.weights);
    }
    const double d_implicit = w[n - 1];

    const NodalField acc = detail::weighted_increments(history, w, n);
    const NodalField& prev = history.at(n - 1);

    NodalField m_prev = M.apply(prev);
    NodalField m_acc = M.apply(acc);
    NodalField load = detail::source_load(spec, tn);

    NodalField rhs(m);
    for (std::size_t i = 0; i < m; ++i)
        rhs[i] = d_implicit * m_prev[i] - m_acc[i] + load[i];

    TriDiagMatrix lhs = tridiag_lincomb(d_implicit, M, 1.0, A);
    if (spec.boundary == BoundaryTreatment::Dirichlet) apply_dirichlet(lhs, rhs);
    try {
        return solve_tridiag(lhs, rhs);
    } catch (const SingularSystem& e) {
        throw SingularSystem(std::string(e.what()) + " (step " + std::to_string(n) + ")");
    }
}

namespace detail {

inline StepRecord make_record(const ProblemSpec& spec, const TriDiagMatrix& M,
                              const NodalField& psi, std::size_t n, double t) {
    StepRecord rec;
    rec.n = n;
    rec.t = t;
    rec.mass = discrete_mass(spec.grid, psi);
    NodalField mp = M.apply(psi);
    double quad = 0.0;
    double mx = psi[0], mn = psi[0];
    for (std::size_t i = 0; i < psi.size(); ++i) {
        quad += mp[i] * psi[i];
        mx = std::max(mx, psi[i]);
        mn = std::min(mn, psi[i]);
    }
    rec.l2_norm = std::sqrt(std::max(0.0, quad));
    rec.max_value = mx;
    rec.min_value = mn;
    return rec;
}

} // namespace detail

/// March n = 1..N with the variant's step, keeping the full history (the
/// memory term needs it) and one diagnostics record per step.
inline RunReport run(const ProblemSpec& spec) {
    spec.validate();
    const auto t_start = std::chrono::steady_clock::now();

    RunReport report;
    report.history.fields.reserve(spec.tmesh.N + 1);
    report.history.fields.push_back(spec.initial.resolve(spec.grid));
    report.records.reserve(spec.tmesh.N);

    const TriDiagMatrix M = assemble_mass(spec.grid);
    for (std::size_t n = 1; n <= spec.tmesh.N; ++n) {
        NodalField next = (spec.variant == ModelVariant::RiemannLiouville)
                              ? step_riemann_liouville(spec, report.history, n)
                              : step_caputo_left(spec, report.history, n);
        report.history.fields.push_back(std::move(next));
        report.records.push_back(detail::make_record(spec, M, report.history.fields.back(), n,
                                                     spec.tmesh.node(n)));
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

} // namespace fracfp
