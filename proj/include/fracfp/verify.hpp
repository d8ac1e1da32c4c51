#pragma once

// Independent references and study drivers: the Mittag-Leffler separable
// solution of the subdiffusion equation, a backward-Euler oracle that shares
// no marching code with the stepper, convergence tables, and the model-gap
// comparison between the two variants.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracfp/fem1d.hpp"
#include "fracfp/fracops.hpp"
#include "fracfp/meshing.hpp"
#include "fracfp/models.hpp"
#include "fracfp/stepper.hpp"

namespace fracfp {

/// Exact separable solution of  d_t^a psi = psi_xx  on (0,1) with psi = 0 at
/// the ends and psi(0,x) = sin(m pi x):
///   psi(t,x) = E_a(-(m pi)^2 t^a) sin(m pi x).
inline double subdiffusion_reference(FractionalOrder alpha, int wavenumber, double t, double x) {
    if (wavenumber < 1) throw std::invalid_argument("subdiffusion_reference: wavenumber >= 1");
    if (t < 0.0) throw std::invalid_argument("subdiffusion_reference: t must be >= 0");
    const double pi = 3.14159265358979323846;
    const double lambda = (wavenumber * pi) * (wavenumber * pi);
    const double amp = mittag_leffler(alpha, -lambda * std::pow(t, alpha.value()));
    return amp * std::sin(wavenumber * pi * x);
}

/// Classical backward Euler for the alpha = 1 limit,
///   M (psi_n - psi_{n-1})/dt_n + (D K - C(t_n)) psi_n = b_f(t_n).
/// Deliberately a separate marching loop from stepper::run so the two paths
/// can check each other.
inline RunReport backward_euler_oracle(const ProblemSpec& spec) {
    if (spec.alpha.value() != 1.0)
        throw std::invalid_argument("backward_euler_oracle: requires alpha = 1");
    spec.validate();
    const auto t_start = std::chrono::steady_clock::now();

    RunReport report;
    report.history.fields.push_back(spec.initial.resolve(spec.grid));

    const TriDiagMatrix M = assemble_mass(spec.grid);
    const TriDiagMatrix K = assemble_stiffness(spec.grid);
    const std::size_t m = spec.grid.num_nodes();

    for (std::size_t n = 1; n <= spec.tmesh.N; ++n) {
        const double dt = spec.tmesh.dt(n);
        const double tn = spec.tmesh.node(n);
        const TriDiagMatrix C = assemble_convection(spec.grid, spec.force, tn);
        const TriDiagMatrix A = tridiag_lincomb(spec.D, K, -1.0, C);

        const NodalField& prev = report.history.fields.back();
        NodalField m_prev = M.apply(prev);
        NodalField rhs(m);
        if (spec.source) {
            NodalField load = assemble_load(spec.grid, spec.source, tn);
            for (std::size_t i = 0; i < m; ++i) rhs[i] = m_prev[i] / dt + load[i];
        } else {
            for (std::size_t i = 0; i < m; ++i) rhs[i] = m_prev[i] / dt;
        }

        TriDiagMatrix lhs = tridiag_lincomb(1.0 / dt, M, 1.0, A);
        if (spec.boundary == BoundaryTreatment::Dirichlet) apply_dirichlet(lhs, rhs);
        NodalField next = solve_tridiag(lhs, rhs);
        report.history.fields.push_back(std::move(next));
        report.records.push_back(detail::make_record(spec, M, report.history.fields.back(), n, tn));
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

/// One resolution level of a convergence study.
struct ErrorTable {
    struct Row {
        std::size_t resolution = 0;
        double error = 0.0;
        std::optional<double> observed_order; // log2(e_coarse/e_fine) vs previous row
    };
    std::vector<Row> rows;
};

namespace detail {

/// Discrete L2(Omega) norm weighted by the mass matrix.
inline double m_norm(const TriDiagMatrix& M, const NodalField& v) {
    NodalField mv = M.apply(v);
    double quad = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) quad += mv[i] * v[i];
    return std::sqrt(std::max(0.0, quad));
}

/// Linear-in-time evaluation of a history at time t (graded meshes do not
/// nest, so self-reference comparisons interpolate the fine run).
inline NodalField interp_history(const History& hist, const GradedTimeMesh& mesh, double t) {
    if (t <= 0.0) return hist.at(0);
    if (t >= mesh.T) return hist.at(mesh.N);
    std::size_t hi = 1;
    while (mesh.nodes[hi] < t) ++hi;
    const double t0 = mesh.nodes[hi - 1], t1 = mesh.nodes[hi];
    const double w = (t - t0) / (t1 - t0);
    const NodalField& f0 = hist.at(hi - 1);
    const NodalField& f1 = hist.at(hi);
    NodalField out(f0.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - w) * f0[i] + w * f1[i];
    return out;
}

} // namespace detail

/// Temporal convergence study: rerun `base` at each step count in `levels`
/// and record the max-over-time-nodes L2-in-space error.  When the problem
/// is a pure sine-mode diffusion (zero force, zero source), the exact
/// Mittag-Leffler amplitude is the reference; otherwise a run with 4x the
/// finest level serves as the reference.
inline ErrorTable convergence_study(const ProblemSpec& base, std::span<const std::size_t> levels) {
    if (levels.empty()) throw std::invalid_argument("convergence_study: no levels");
    base.validate();

    const bool exact_reference = base.force.kind == ForceKind::Zero &&
                                 base.initial.kind == InitialKind::SineMode && !base.source;

    std::optional<RunReport> fine;
    std::optional<GradedTimeMesh> fine_mesh;
    if (!exact_reference) {
        std::size_t max_level = 0;
        for (std::size_t l : levels) max_level = std::max(max_level, l);
        ProblemSpec ref = base;
        ref.tmesh = graded_time_mesh(4 * max_level, base.tmesh.gamma, base.tmesh.T);
        fine_mesh = ref.tmesh;
        fine = run(ref);
    }

    const TriDiagMatrix M = assemble_mass(base.grid);
    const double pi = 3.14159265358979323846;
    const double length = base.grid.b - base.grid.a;
    const double lambda = exact_reference
                              ? base.D * std::pow(base.initial.wavenumber * pi / length, 2.0)
                              : 0.0;

    ErrorTable table;
    for (std::size_t level : levels) {
        ProblemSpec spec = base;
        spec.tmesh = graded_time_mesh(level, base.tmesh.gamma, base.tmesh.T);
        RunReport report = run(spec);

        double emax = 0.0;
        for (std::size_t n = 0; n <= spec.tmesh.N; ++n) {
            const double t = spec.tmesh.nodes[n];
            NodalField ref(spec.grid.num_nodes());
            if (exact_reference) {
                const double amp =
                    mittag_leffler(base.alpha, -lambda * std::pow(t, base.alpha.value()));
                const NodalField mode = base.initial.resolve(spec.grid);
                for (std::size_t i = 0; i < ref.size(); ++i) ref[i] = amp * mode[i];
            } else {
                ref = detail::interp_history(fine->history, *fine_mesh, t);
            }
            for (std::size_t i = 0; i < ref.size(); ++i) ref[i] = report.history.at(n)[i] - ref[i];
            emax = std::max(emax, detail::m_norm(M, ref));
        }

        ErrorTable::Row row;
        row.resolution = level;
        row.error = emax;
        if (!table.rows.empty() && emax > 0.0)
            row.observed_order = std::log2(table.rows.back().error / emax);
        table.rows.push_back(row);
    }
    return table;
}

/// Max-norm distance between the two model variants at one (alpha, t).
struct GapRecord {
    double alpha = 0.0;
    double t = 0.0;
    double gap = 0.0;
};

/// Run both variants on identical meshes for each alpha and record the
/// max-norm gap at the mesh node nearest each requested sample time.
inline std::vector<GapRecord> model_gap_study(std::span<const double> alphas,
                                              const ProblemSpec& tmpl,
                                              std::span<const double> sample_times) {
    std::vector<GapRecord> records;
    records.reserve(alphas.size() * sample_times.size());
    for (double a : alphas) {
        ProblemSpec rl = tmpl;
        rl.alpha = FractionalOrder(a);
        rl.variant = ModelVariant::RiemannLiouville;
        ProblemSpec cl = rl;
        cl.variant = ModelVariant::CaputoLeft;

        const RunReport rep_rl = run(rl);
        const RunReport rep_cl = run(cl);

        for (double t : sample_times) {
            const std::size_t n = nearest_node_index(tmpl.tmesh, t);
            const NodalField& u = rep_rl.history.at(n);
            const NodalField& v = rep_cl.history.at(n);
            double gap = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i)
                gap = std::max(gap, std::abs(u[i] - v[i]));
            records.push_back(GapRecord{a, tmpl.tmesh.nodes[n], gap});
        }
    }
    return records;
}

} // namespace fracfp
