#pragma once

// Graded time meshes t_n = (n/N)^gamma T, the L1 quadrature weight rows, and
// the uniform spatial grid with Dirichlet boundary flags.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracfp/fracops.hpp"

namespace fracfp {

/// Time mesh with nodes t_n = (n/N)^gamma * T.  gamma = 1 is uniform;
/// gamma > 1 concentrates steps near t = 0 where fractional solutions are
/// weakly singular.  Nodes come straight from the closed form, never from
/// accumulation, so a mesh is bit-reproducible from (N, gamma, T).
struct GradedTimeMesh {
    std::size_t N = 0;
    double gamma = 1.0;
    double T = 0.0;
    std::vector<double> nodes;

    double node(std::size_t n) const { return nodes.at(n); }
    /// Increment dt_n = t_n - t_{n-1}, defined for 1 <= n <= N.
    double dt(std::size_t n) const {
        if (n < 1 || n > N) throw std::out_of_range("GradedTimeMesh::dt: index");
        return nodes[n] - nodes[n - 1];
    }
};

inline GradedTimeMesh graded_time_mesh(std::size_t N, double gamma, double T) {
    if (N < 1) throw std::invalid_argument("graded_time_mesh: N must be >= 1");
    if (!(gamma >= 1.0))
        throw std::invalid_argument("graded_time_mesh: gamma must be >= 1, got " +
                                    std::to_string(gamma));
    if (!(T > 0.0)) throw std::invalid_argument("graded_time_mesh: T must be positive");

    GradedTimeMesh mesh;
    mesh.N = N;
    mesh.gamma = gamma;
    mesh.T = T;
    mesh.nodes.resize(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
        mesh.nodes[n] = std::pow(static_cast<double>(n) / static_cast<double>(N), gamma) * T;
    mesh.nodes[0] = 0.0;
    mesh.nodes[N] = T;
    return mesh;
}

/// One row of L1 quadrature weights for target step n:
///   w_{k,n} = [(t_n - t_k)^a - (t_n - t_{k+1})^a] / (t_{k+1} - t_k),
/// k = 0..n-1.  All weights are strictly positive; at a = 1 the numerator
/// telescopes and every weight equals 1.
struct L1WeightRow {
    std::size_t n = 0;
    std::vector<double> weights;
};

inline L1WeightRow l1_weights(const GradedTimeMesh& mesh, FractionalOrder order, std::size_t n) {
    if (n < 1 || n > mesh.N)
        throw std::out_of_range("l1_weights: step index out of range");
    const double a = order.value();
    L1WeightRow row;
    row.n = n;
    row.weights.resize(n);
    const double tn = mesh.nodes[n];
    for (std::size_t k = 0; k < n; ++k) {
        row.weights[k] = (std::pow(tn - mesh.nodes[k], a) - std::pow(tn - mesh.nodes[k + 1], a)) /
                         (mesh.nodes[k + 1] - mesh.nodes[k]);
    }
    return row;
}

namespace detail {

/// Weight row with the reversed denominator dt_{n-k} instead of dt_{k+1}.
/// Only a test-side compatibility probe: the two conventions coincide on
/// uniform meshes and only the dt_{k+1} form telescopes at a = 1 on graded
/// ones.
inline L1WeightRow l1_weights_reversed_denominator(const GradedTimeMesh& mesh,
                                                   FractionalOrder order, std::size_t n) {
    if (n < 1 || n > mesh.N)
        throw std::out_of_range("l1_weights_reversed_denominator: step index out of range");
    const double a = order.value();
    L1WeightRow row;
    row.n = n;
    row.weights.resize(n);
    const double tn = mesh.nodes[n];
    for (std::size_t k = 0; k < n; ++k) {
        const double denom = mesh.nodes[n - k] - mesh.nodes[n - k - 1];
        row.weights[k] =
            (std::pow(tn - mesh.nodes[k], a) - std::pow(tn - mesh.nodes[k + 1], a)) / denom;
    }
    return row;
}

} // namespace detail

/// Index of the mesh node closest to t; the lower index wins ties.
inline std::size_t nearest_node_index(const GradedTimeMesh& mesh, double t) {
    std::size_t best = 0;
    double dist = std::abs(mesh.nodes[0] - t);
    for (std::size_t n = 1; n <= mesh.N; ++n) {
        const double d = std::abs(mesh.nodes[n] - t);
        if (d < dist) {
            dist = d;
            best = n;
        }
    }
    return best;
}

/// Uniform partition of [a, b] into nx cells; the end nodes carry the
/// homogeneous Dirichlet constraint.
struct SpaceGrid {
    double a = 0.0;
    double b = 1.0;
    std::size_t nx = 0;
    double h = 0.0;
    std::vector<double> nodes;

    std::size_t num_nodes() const { return nx + 1; }
    double node(std::size_t i) const { return nodes.at(i); }
    bool is_boundary(std::size_t i) const { return i == 0 || i == nx; }
};

inline SpaceGrid uniform_space_grid(double a, double b, std::size_t nx) {
    if (!(a < b)) throw std::invalid_argument("uniform_space_grid: need a < b");
    if (nx < 2) throw std::invalid_argument("uniform_space_grid: need nx >= 2");
    SpaceGrid grid;
    grid.a = a;
    grid.b = b;
    grid.nx = nx;
    grid.h = (b - a) / static_cast<double>(nx);
    grid.nodes.resize(nx + 1);
    for (std::size_t i = 0; i <= nx; ++i)
        grid.nodes[i] = a + grid.h * static_cast<double>(i);
    grid.nodes[nx] = b;
    return grid;
}

} // namespace fracfp
