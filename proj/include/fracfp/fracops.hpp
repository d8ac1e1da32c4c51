#pragma once

// Fractional-calculus core: the singular kernel g_a(t) = t^(a-1)/Gamma(a),
// the Mittag-Leffler function E_a(z), product-integration convolution with
// g_a, the discrete L1 fractional derivative on arbitrary time meshes, and
// the L^p_a seminorm sup_t (g_a * |f|^p)(t).

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracfp {

/// Thrown when an iterative evaluation does not reach its tolerance within
/// the iteration budget.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fractional order a with 0 < a <= 1.  a = 1 is the classical limit.
struct FractionalOrder {
    double alpha;

    explicit FractionalOrder(double a) : alpha(a) {
        if (!(a > 0.0) || !(a <= 1.0))
            throw std::domain_error("FractionalOrder: alpha must lie in (0,1], got " +
                                    std::to_string(a));
    }
    double value() const { return alpha; }
};

/// Real samples of a function on strictly increasing time nodes starting at 0.
struct SampledFunction {
    std::vector<double> nodes;
    std::vector<double> values;

    SampledFunction() = default;
    SampledFunction(std::vector<double> n, std::vector<double> v)
        : nodes(std::move(n)), values(std::move(v)) {
        if (nodes.empty())
            throw std::invalid_argument("SampledFunction: empty node list");
        if (nodes.size() != values.size())
            throw std::invalid_argument("SampledFunction: nodes/values length mismatch");
        if (nodes.front() != 0.0)
            throw std::invalid_argument("SampledFunction: nodes must start at 0");
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (!(nodes[i] > nodes[i - 1]))
                throw std::invalid_argument("SampledFunction: nodes must be strictly increasing");
    }

    std::size_t size() const { return nodes.size(); }
};

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients.  Relative error well below
// 1e-13 on the positive axis in the ranges used here.
inline constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

/// log Gamma(x) for x > 0.
inline double log_gamma_pos(double x) {
    double acc = kLanczos[0];
    for (int k = 1; k < 9; ++k) acc += kLanczos[k] / (x - 1.0 + k);
    const double t = x + 6.5;
    constexpr double half_log_two_pi = 0.91893853320467274178;
    return half_log_two_pi + (x - 0.5) * std::log(t) - t + std::log(acc);
}

} // namespace detail

/// Euler Gamma function for x > 0.
inline double gamma_fn(double x) {
    if (!(x > 0.0))
        throw std::domain_error("gamma_fn: argument must be positive, got " + std::to_string(x));
    if (x < 0.5) {
        // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
        constexpr double pi = 3.14159265358979323846;
        return pi / (std::sin(pi * x) * std::exp(detail::log_gamma_pos(1.0 - x)));
    }
    return std::exp(detail::log_gamma_pos(x));
}

/// Singular kernel g_q(t) = t^(q-1)/Gamma(q), q > 0.
/// t = 0 is rejected for q < 1: the kernel is singular there and every caller
/// of the scheme starts at t_1 > 0.
inline double g_kernel(double order, double t) {
    if (!(order > 0.0))
        throw std::domain_error("g_kernel: order must be positive");
    if (t < 0.0)
        throw std::domain_error("g_kernel: t must be nonnegative");
    if (t == 0.0) {
        if (order < 1.0)
            throw std::domain_error("g_kernel: t = 0 is singular for order < 1");
        if (order == 1.0) return 1.0;
        return 0.0;
    }
    return std::pow(t, order - 1.0) / gamma_fn(order);
}

namespace detail {

// Power series E_a(z) = sum_j z^j / Gamma(j a + 1).  Terms are formed in
// log space so large indices cannot overflow prematurely.  Safe in double
// precision only while |z|^(1/a) stays small (cancellation for z < 0 grows
// like exp(|z|^(1/a))).
inline double ml_series(double a, double z, std::size_t budget = 10000) {
    const double lz = std::log(std::abs(z));
    const bool negative = z < 0.0;
    double sum = 1.0;
    int consecutive_small = 0;
    for (std::size_t j = 1; j < budget; ++j) {
        const double lt = static_cast<double>(j) * lz - log_gamma_pos(static_cast<double>(j) * a + 1.0);
        if (lt > 700.0)
            throw NonConvergence("mittag_leffler: series term overflows double range");
        double term = std::exp(lt);
        if (negative && (j & 1u)) term = -term;
        sum += term;
        if (std::abs(term) < 1e-16 * (1.0 + std::abs(sum))) {
            if (++consecutive_small >= 2) return sum;
        } else {
            consecutive_small = 0;
        }
    }
    throw NonConvergence("mittag_leffler: series did not converge within budget");
}

// E_a(z) for z < 0, 0 < a < 1, via the real-line integral representation
//   E_a(z) = int_0^inf  e^{-r^{1/a}} (-z) sin(pi a)
//            / (pi a (r^2 - 2 r z cos(pi a) + z^2))  dr,
// a positive smooth integrand with no cancellation.  The e^{-r^{1/a}} factor
// makes the tail beyond r = 40^a negligible.
inline double ml_negative_integral(double a, double z) {
    constexpr double pi = 3.14159265358979323846;
    const double sa = std::sin(pi * a);
    const double ca = std::cos(pi * a);
    const auto f = [&](double r) {
        return std::exp(-std::pow(r, 1.0 / a)) * (-z) * sa /
               (pi * a * (r * r - 2.0 * r * z * ca + z * z));
    };

    const double upper = std::max(1.0, std::pow(40.0, a));
    std::size_t evals = 0;
    constexpr std::size_t eval_budget = 200000;
    const auto fe = [&](double r) {
        if (++evals > eval_budget)
            throw NonConvergence("mittag_leffler: quadrature evaluation budget exhausted");
        return f(r);
    };

    // adaptive Simpson
    struct Rec {
        const decltype(fe)& g;
        double operator()(double lo, double hi, double flo, double fmid, double fhi,
                          double whole, double eps, int depth) const {
            const double mid = 0.5 * (lo + hi);
            const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
            const double flm = g(lmid), frm = g(rmid);
            const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
            const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
            const double delta = left + right - whole;
            if (depth <= 0)
                throw NonConvergence("mittag_leffler: quadrature depth exhausted");
            if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
            return (*this)(lo, mid, flo, flm, fmid, left, 0.5 * eps, depth - 1) +
                   (*this)(mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth - 1);
        }
    };
    const double flo = fe(0.0), fhi = fe(upper), fmid = fe(0.5 * upper);
    const double whole = upper / 6.0 * (flo + 4.0 * fmid + fhi);
    return Rec{fe}(0.0, upper, flo, fmid, fhi, whole, 1e-12, 60);
}

} // namespace detail

/// Mittag-Leffler function E_a(z) = sum_{j>=0} z^j / Gamma(j a + 1) for real z.
/// Absolute error <= 1e-10 on z in [-50, 5].  E_1(z) = exp(z).
inline double mittag_leffler(FractionalOrder alpha, double z) {
    const double a = alpha.value();
    if (a == 1.0) return std::exp(z);
    if (z == 0.0) return 1.0;
    // The series is exact arithmetic-wise but cancels catastrophically for
    // z < 0 once |z|^(1/a) is large; switch to the integral representation
    // where both branches agree far inside double range.
    if (z < 0.0 && std::pow(-z, 1.0 / a) > 4.0)
        return detail::ml_negative_integral(a, z);
    return detail::ml_series(a, z);
}

/// Convolution (g_q * f)(t) at the sample nodes of f by product integration:
/// f is taken piecewise linear between nodes and g_q is integrated exactly
/// against each linear segment, so the t^(q-1) endpoint singularity costs no
/// accuracy.  Entry 0 of the result is (g_q * f)(0) = 0.
inline SampledFunction conv_quadrature(double kernel_order, const SampledFunction& f) {
    if (!(kernel_order > 0.0))
        throw std::domain_error("conv_quadrature: kernel order must be positive");
    if (f.size() == 0)
        throw std::invalid_argument("conv_quadrature: empty input");

    const double q = kernel_order;
    const double gq = gamma_fn(q);
    const double gq1 = q * gq; // Gamma(q+1)
    const std::size_t m_count = f.size() - 1;

    std::vector<double> out(f.size(), 0.0);
    for (std::size_t m = 1; m <= m_count; ++m) {
        const double tm = f.nodes[m];
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double hi = tm - f.nodes[k];       // > 0
            const double lo = tm - f.nodes[k + 1];   // >= 0
            const double dt = f.nodes[k + 1] - f.nodes[k];
            // hi^q - lo^q and hi^(q+1) - lo^(q+1), written with expm1 to
            // survive lo/hi -> 1 in far-history cells.
            double p0, p1;
            if (lo > 0.0) {
                const double r = std::log(lo / hi);
                p0 = -std::pow(hi, q) * std::expm1(q * r);
                p1 = -std::pow(hi, q + 1.0) * std::expm1((q + 1.0) * r);
            } else {
                p0 = std::pow(hi, q);
                p1 = std::pow(hi, q + 1.0);
            }
            const double i0 = p0 / gq1;                    // int g_q
            const double i1 = p1 / ((q + 1.0) * gq);       // int u g_q(u) du
            acc += (f.values[k] * (i1 - lo * i0) + f.values[k + 1] * (hi * i0 - i1)) / dt;
        }
        out[m] = acc;
    }
    return SampledFunction(f.nodes, std::move(out));
}

template <class TimeMesh>
concept TimeMeshLike = requires(const TimeMesh& m) {
    { std::span<const double>(m.nodes) };
};

/// Nonuniform L1 approximation of the Caputo derivative of order
/// beta in (0,1) at mesh node n, from the history u_0..u_n:
///   (1/Gamma(2-beta)) sum_k (u_{k+1}-u_k)
///       [(t_n-t_k)^{1-beta} - (t_n-t_{k+1})^{1-beta}] / dt_{k+1}.
/// Exact on data that is piecewise linear between mesh nodes.
template <TimeMeshLike TimeMesh>
inline double l1_frac_derivative(double beta, const TimeMesh& mesh,
                                 std::span<const double> history, std::size_t n) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw std::domain_error("l1_frac_derivative: beta must lie in (0,1)");
    const std::span<const double> t(mesh.nodes);
    if (n < 1 || n >= t.size())
        throw std::out_of_range("l1_frac_derivative: step index out of range");
    if (history.size() < n + 1)
        throw std::invalid_argument("l1_frac_derivative: history shorter than n+1");

    const double q = 1.0 - beta;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (std::pow(t[n] - t[k], q) - std::pow(t[n] - t[k + 1], q)) /
                         (t[k + 1] - t[k]);
        acc += w * (history[k + 1] - history[k]);
    }
    return acc / gamma_fn(2.0 - beta);
}

/// Discrete L^p_a seminorm: max over the sample nodes of (g_a * |f|^p)(t).
/// Diagnostic for the admissibility of source terms.
inline double lp_alpha_seminorm(FractionalOrder alpha, double p, const SampledFunction& f) {
    if (!(p >= 1.0))
        throw std::domain_error("lp_alpha_seminorm: p must be >= 1");
    std::vector<double> powered(f.values.size());
    for (std::size_t i = 0; i < powered.size(); ++i)
        powered[i] = std::pow(std::abs(f.values[i]), p);
    const SampledFunction conv =
        conv_quadrature(alpha.value(), SampledFunction(f.nodes, std::move(powered)));
    double sup = 0.0;
    for (double v : conv.values) sup = std::max(sup, v);
    return sup;
}

} // namespace fracfp
