#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace harq {

/// Adaptive Gauss-Kronrod (G7,K15) integration on [a,b] with absolute
/// error control. Bisects intervals whose embedded error estimate exceeds
/// the locally apportioned tolerance.
namespace detail {

// 15-point Kronrod nodes/weights on [-1,1] and the embedded 7-point Gauss weights.
inline constexpr double kKronrodNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline constexpr double kKronrodWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr double kGaussWeights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870};

struct GkResult {
    double value;
    double error;
};

template <typename F>
GkResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double fx = f(c + h * kKronrodNodes[i]);
        kron += kKronrodWeights[i] * fx;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fx;
    }
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

template <typename F>
double integrate_rec(const F& f, double a, double b, double tol, int depth) {
    const GkResult r = gk15(f, a, b);
    if (r.error <= tol || depth >= 60) {
        if (depth >= 60 && r.error > 1e3 * tol)
            throw std::runtime_error("adaptive quadrature failed to converge");
        return r.value;
    }
    const double c = 0.5 * (a + b);
    return integrate_rec(f, a, c, 0.5 * tol, depth + 1) +
           integrate_rec(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Integrate f over [a,b] to absolute tolerance abs_tol.
template <typename F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-10) {
    if (!(b > a)) return 0.0;
    return detail::integrate_rec(f, a, b, abs_tol, 0);
}

/// Integrate with interior breakpoints (for integrands with a sharp
/// feature whose location is known, e.g. a capacity crossing).
template <typename F>
double integrate_split(const F& f, double a, double b, std::initializer_list<double> breaks,
                       double abs_tol = 1e-10) {
    std::vector<double> pts{a};
    for (double p : breaks)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    const double per = abs_tol / static_cast<double>(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate(f, pts[i], pts[i + 1], per);
    return total;
}

/// Gaussian Q-function.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace harq
