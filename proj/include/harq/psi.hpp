#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "harq/quadrature.hpp"
#include "harq/types.hpp"

namespace harq {

/// IR-HARQ outage coefficient psi_m(R): the m-fold high-SNR tail
/// coefficient of the accumulated mutual information. Finite series
/// with the 1/(-1)! = 0 convention for the i = 0 term, which makes
/// psi_1 = e^R - 1 and matches the convolution recursion.
inline double psi_series(int m, double rate_nats) {
    if (m < 0) throw std::invalid_argument("psi_series: m must be >= 0");
    if (m == 0) return 1.0;
    const double eR = std::exp(rate_nats);
    double sum = 1.0;
    double inv_fact = 1.0;  // 1/(i-1)! starting at i = 1
    double r_pow = 1.0;     // R^(i-1)
    double sign = -1.0;     // (-1)^i
    for (int i = 1; i <= m; ++i) {
        sum += sign * inv_fact * eR * r_pow;
        sign = -sign;
        r_pow *= rate_nats;
        inv_fact /= static_cast<double>(i);
    }
    return (m % 2 == 0 ? sum : -sum);
}

/// psi_0..psi_M evaluated at one rate argument.
struct PsiTable {
    double rate_argument;
    std::vector<double> values;  // index m = 0..M

    PsiTable(int max_m, double rate_nats) : rate_argument(rate_nats) {
        values.reserve(max_m + 1);
        for (int m = 0; m <= max_m; ++m) values.push_back(psi_series(m, rate_nats));
    }
};

/// Independent oracle for psi_series: evaluates the recursive convolution
/// psi_m(R) = integral_0^R psi_{m-1}(R - x) e^x dx numerically, one
/// quadrature level per recursion step. Lower levels are tabulated on a
/// Chebyshev grid and interpolated so the nesting stays tractable.
namespace detail {

class ChebInterp {
public:
    ChebInterp(std::vector<double> nodes, std::vector<double> vals)
        : nodes_(std::move(nodes)), vals_(std::move(vals)) {
        const std::size_t n = nodes_.size();
        weights_.assign(n, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) weights_[i] /= (nodes_[i] - nodes_[j]);
        }
    }

    double operator()(double x) const {
        // barycentric form
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const double d = x - nodes_[i];
            if (std::abs(d) < 1e-14) return vals_[i];
            const double w = weights_[i] / d;
            num += w * vals_[i];
            den += w;
        }
        return num / den;
    }

private:
    std::vector<double> nodes_, vals_, weights_;
};

inline std::vector<double> cheb_nodes(double a, double b, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        const double t = std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * n));
        x[i] = 0.5 * (a + b) + 0.5 * (b - a) * t;
    }
    return x;
}

}  // namespace detail

inline double psi_convolution_oracle(int m, double rate_nats, double abs_tol = 1e-10) {
    if (m < 1) throw std::invalid_argument("psi_convolution_oracle: m must be >= 1");
    constexpr int kNodes = 48;
    const auto grid = detail::cheb_nodes(0.0, rate_nats, kNodes);

    // level 1 exactly: psi_1(t) = integral_0^t e^x dx of psi_0 = 1
    auto eval_level = [&](const auto& prev, double t) {
        return integrate([&](double x) { return prev(t - x) * std::exp(x); }, 0.0, t, abs_tol);
    };

    std::function<double(double)> prev = [](double) { return 1.0; };
    for (int level = 1; level < m; ++level) {
        std::vector<double> vals(kNodes);
        for (int i = 0; i < kNodes; ++i) vals[i] = eval_level(prev, grid[i]);
        prev = detail::ChebInterp(grid, vals);
    }
    return eval_level(prev, rate_nats);
}

}  // namespace harq
