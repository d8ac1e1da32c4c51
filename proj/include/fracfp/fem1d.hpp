#pragma once

// P1 finite elements on the uniform 1D grid: tridiagonal mass, stiffness,
// convection and load assembly, Dirichlet row replacement, and the Thomas
// solver.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracfp/meshing.hpp"

namespace fracfp {

/// Thrown by solve_tridiag on a zero or near-zero pivot.
struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Vector of P1 nodal coefficients, one value per grid node.
struct NodalField {
    std::vector<double> values;

    NodalField() = default;
    explicit NodalField(std::size_t n, double fill = 0.0) : values(n, fill) {}
    explicit NodalField(std::vector<double> v) : values(std::move(v)) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Tridiagonal matrix in banded storage: sub/sup have length size()-1.
struct TriDiagMatrix {
    std::vector<double> sub, diag, sup;

    TriDiagMatrix() = default;
    explicit TriDiagMatrix(std::size_t m) : sub(m - 1, 0.0), diag(m, 0.0), sup(m - 1, 0.0) {}

    std::size_t size() const { return diag.size(); }

    void apply(std::span<const double> x, std::span<double> y) const {
        const std::size_t m = size();
        for (std::size_t i = 0; i < m; ++i) {
            double acc = diag[i] * x[i];
            if (i > 0) acc += sub[i - 1] * x[i - 1];
            if (i + 1 < m) acc += sup[i] * x[i + 1];
            y[i] = acc;
        }
    }

    NodalField apply(const NodalField& x) const {
        NodalField y(size());
        apply(x.values, y.values);
        return y;
    }
};

/// c1*A + c2*B, entrywise on the bands.
inline TriDiagMatrix tridiag_lincomb(double c1, const TriDiagMatrix& A, double c2,
                                     const TriDiagMatrix& B) {
    if (A.size() != B.size()) throw std::invalid_argument("tridiag_lincomb: size mismatch");
    TriDiagMatrix R(A.size());
    for (std::size_t i = 0; i < A.diag.size(); ++i) R.diag[i] = c1 * A.diag[i] + c2 * B.diag[i];
    for (std::size_t i = 0; i < A.sub.size(); ++i) {
        R.sub[i] = c1 * A.sub[i] + c2 * B.sub[i];
        R.sup[i] = c1 * A.sup[i] + c2 * B.sup[i];
    }
    return R;
}

/// Exact P1 mass matrix: interior rows (h/6, 2h/3, h/6).
inline TriDiagMatrix assemble_mass(const SpaceGrid& grid) {
    const std::size_t m = grid.num_nodes();
    TriDiagMatrix M(m);
    const double h = grid.h;
    for (std::size_t e = 0; e < grid.nx; ++e) {
        M.diag[e] += h / 3.0;
        M.diag[e + 1] += h / 3.0;
        M.sup[e] += h / 6.0;
        M.sub[e] += h / 6.0;
    }
    return M;
}

/// P1 stiffness matrix: interior rows (-1/h, 2/h, -1/h).
inline TriDiagMatrix assemble_stiffness(const SpaceGrid& grid) {
    const std::size_t m = grid.num_nodes();
    TriDiagMatrix K(m);
    const double invh = 1.0 / grid.h;
    for (std::size_t e = 0; e < grid.nx; ++e) {
        K.diag[e] += invh;
        K.diag[e + 1] += invh;
        K.sup[e] -= invh;
        K.sub[e] -= invh;
    }
    return K;
}

template <class F>
concept ScalarField = std::invocable<F, double, double>;

/// Convection matrix C_ij = int F(x,t) phi_j(x) phi_i'(x) dx at fixed t,
/// by 2-point Gauss per cell (exact whenever F is affine in x).  Column sums
/// vanish identically because the two local test gradients cancel, which is
/// what discrete mass conservation rests on.
template <ScalarField F>
inline TriDiagMatrix assemble_convection(const SpaceGrid& grid, F&& force, double t) {
    const std::size_t m = grid.num_nodes();
    TriDiagMatrix C(m);
    const double h = grid.h;
    constexpr double gauss = 0.57735026918962576451; // 1/sqrt(3)
    const double w = 0.5 * h;
    for (std::size_t e = 0; e < grid.nx; ++e) {
        const double x0 = grid.nodes[e];
        const double x1 = grid.nodes[e + 1];
        const double xm = 0.5 * (x0 + x1);
        for (int g = 0; g < 2; ++g) {
            const double xg = xm + (g == 0 ? -gauss : gauss) * 0.5 * h;
            const double fv = force(xg, t);
            const double pl = (x1 - xg) / h; // phi_e
            const double pr = (xg - x0) / h; // phi_{e+1}
            const double dl = -1.0 / h;      // phi_e'
            const double dr = 1.0 / h;       // phi_{e+1}'
            C.diag[e] += w * fv * pl * dl;
            C.sup[e] += w * fv * pr * dl;
            C.sub[e] += w * fv * pl * dr;
            C.diag[e + 1] += w * fv * pr * dr;
        }
    }
    return C;
}

/// Load vector b_i = int f(x,t) phi_i dx by 2-point Gauss per cell.
template <ScalarField F>
inline NodalField assemble_load(const SpaceGrid& grid, F&& f, double t) {
    NodalField b(grid.num_nodes());
    const double h = grid.h;
    constexpr double gauss = 0.57735026918962576451;
    const double w = 0.5 * h;
    for (std::size_t e = 0; e < grid.nx; ++e) {
        const double x0 = grid.nodes[e];
        const double x1 = grid.nodes[e + 1];
        const double xm = 0.5 * (x0 + x1);
        for (int g = 0; g < 2; ++g) {
            const double xg = xm + (g == 0 ? -gauss : gauss) * 0.5 * h;
            const double fv = f(xg, t);
            b[e] += w * fv * (x1 - xg) / h;
            b[e + 1] += w * fv * (xg - x0) / h;
        }
    }
    return b;
}

/// Homogeneous Dirichlet rows: first/last rows become identity rows with
/// zero right-hand side, and the interior couplings into the boundary
/// columns are removed (the boundary values are zero, so the interior
/// equations are unchanged).  Keeps symmetric inputs symmetric.
inline void apply_dirichlet(TriDiagMatrix& A, NodalField& rhs) {
    const std::size_t m = A.size();
    if (rhs.size() != m) throw std::invalid_argument("apply_dirichlet: size mismatch");
    A.diag[0] = 1.0;
    A.sup[0] = 0.0;
    A.sub[0] = 0.0;
    A.diag[m - 1] = 1.0;
    A.sub[m - 2] = 0.0;
    A.sup[m - 2] = 0.0;
    rhs[0] = 0.0;
    rhs[m - 1] = 0.0;
}

/// Thomas algorithm, no pivoting.  The per-step system matrices of the
/// scheme are strictly diagonally dominant for the intended parameter
/// ranges; a near-zero pivot still raises SingularSystem.
inline NodalField solve_tridiag(const TriDiagMatrix& A, const NodalField& rhs) {
    const std::size_t m = A.size();
    if (rhs.size() != m) throw std::invalid_argument("solve_tridiag: size mismatch");
    if (m == 0) return NodalField();

    std::vector<double> c(m - 1, 0.0);
    NodalField x(m);
    std::vector<double> scale(m);
    for (std::size_t i = 0; i < m; ++i) {
        double s = std::abs(A.diag[i]);
        if (i > 0) s += std::abs(A.sub[i - 1]);
        if (i + 1 < m) s += std::abs(A.sup[i]);
        scale[i] = s;
    }

    double piv = A.diag[0];
    if (std::abs(piv) < 1e-14 * scale[0] || piv == 0.0)
        throw SingularSystem("solve_tridiag: zero pivot at row 0");
    if (m > 1) c[0] = A.sup[0] / piv;
    x[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < m; ++i) {
        piv = A.diag[i] - A.sub[i - 1] * c[i - 1];
        if (std::abs(piv) < 1e-14 * scale[i] || piv == 0.0)
            throw SingularSystem("solve_tridiag: near-zero pivot at row " + std::to_string(i));
        if (i + 1 < m) c[i] = A.sup[i] / piv;
        x[i] = (rhs[i] - A.sub[i - 1] * x[i - 1]) / piv;
    }
    for (std::size_t i = m - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

} // namespace fracfp
