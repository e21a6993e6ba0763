#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "harq/psi.hpp"
#include "harq/quadrature.hpp"
#include "harq/types.hpp"

namespace harq {

/// Single-round outage under the asymptotic Taylor model; the raw value
/// phi/rho is returned even when it exceeds 1 (the allocator algebra
/// needs it). in_validity_region() reports whether the Taylor expansion
/// applies at this operating point.
struct OutageValue {
    double probability;
    bool in_validity_region;
};

namespace detail {

inline void require_positive_power(double rho) {
    if (!(rho > 0.0)) throw std::domain_error("transmit power must be positive");
}

/// Fading-averaged dispersion integral: E_z[ Q( sqrt(n) (log(1+rho z) - R) / sqrt(V(rho z)) ) ]
/// with V(x) = 1 - (1+x)^-2 and z ~ Exp(1), truncated at z = 40 where the
/// exponential envelope is below 5e-18.
inline double fbl_integral(double rho, double rate_nats, int n) {
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    auto integrand = [&](double z) {
        const double x = rho * z;
        const double cap = std::log1p(x);
        const double disp = 1.0 - 1.0 / ((1.0 + x) * (1.0 + x));
        if (disp <= 0.0) return std::exp(-z) * (cap < rate_nats ? 1.0 : 0.0);
        return std::exp(-z) * q_function(sqrt_n * (cap - rate_nats) / std::sqrt(disp));
    };
    // the integrand transitions sharply around the capacity crossing z*
    const double z_star = std::expm1(rate_nats) / rho;
    return integrate_split(integrand, 0.0, 40.0,
                           {0.5 * z_star, z_star, 2.0 * z_star, 10.0 * z_star}, 1e-10);
}

/// Closed-form finite-blocklength approximation:
/// 1 - (delta/sqrt(2 pi)) e^-kappa (e^t - e^-t), t = sqrt(pi/(2 delta^2)),
/// kappa = (e^R - 1)/rho, delta = sqrt(n rho^2 / (e^{2R} - 1)).
inline double fbl_closed_form(double rho, double rate_nats, int n) {
    const double kappa = std::expm1(rate_nats) / rho;
    const double delta = std::sqrt(n * rho * rho / std::expm1(2.0 * rate_nats));
    const double t = std::sqrt(M_PI / 2.0) / delta;
    const double v = 1.0 - (2.0 * delta / std::sqrt(2.0 * M_PI)) * std::exp(-kappa) * std::sinh(t);
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace detail

inline OutageValue outage_single_round(double rho, Rate rate, const OutageModel& model) {
    detail::require_positive_power(rho);
    model.validate();
    const double p = phi(rate);
    switch (model.kind) {
        case OutageKind::AsymptoticTaylor: {
            const double v = p / rho;
            return {v, v <= 1.0};
        }
        case OutageKind::ExactRayleigh:
            return {-std::expm1(-p / rho), true};
        case OutageKind::FblClosedForm:
            return {detail::fbl_closed_form(rho, rate.nats_per_use, model.blocklength->n), true};
        case OutageKind::FblIntegral:
            return {detail::fbl_integral(rho, rate.nats_per_use, model.blocklength->n), true};
    }
    throw std::logic_error("unreachable");
}

/// Log-domain packet-drop probabilities after M rounds. Products of
/// per-round powers reach ~1e8^M, so everything is summed in logs.
inline double log_pdp_arq(const std::vector<double>& powers, Rate rate) {
    double log_prod = 0.0;
    for (double rho : powers) {
        detail::require_positive_power(rho);
        log_prod += std::log(rho);
    }
    return static_cast<double>(powers.size()) * std::log(phi(rate)) - log_prod;
}

inline double log_pdp_cc(const std::vector<double>& powers, Rate rate) {
    const auto m = static_cast<double>(powers.size());
    return log_pdp_arq(powers, rate) - std::lgamma(m + 1.0);
}

/// IR pdp against an explicit threshold argument (used for schedule
/// prefixes, where the ParentRate threshold is fixed by the full M).
inline double log_pdp_ir_threshold(const std::vector<double>& powers, double threshold_nats) {
    const int m = static_cast<int>(powers.size());
    double log_prod = 0.0;
    for (double rho : powers) {
        detail::require_positive_power(rho);
        log_prod += std::log(rho);
    }
    const double psi_m = psi_series(m, threshold_nats);
    if (!(psi_m > 0.0)) throw std::domain_error("psi_m must be positive at the requested rate");
    return std::log(psi_m) - log_prod;
}

inline double log_pdp_ir(const std::vector<double>& powers, Rate rate,
                         IrThresholdMode mode = IrThresholdMode::PerRoundRate) {
    const int m = static_cast<int>(powers.size());
    const double arg =
        mode == IrThresholdMode::ParentRate ? m * rate.nats_per_use : rate.nats_per_use;
    double log_prod = 0.0;
    for (double rho : powers) {
        detail::require_positive_power(rho);
        log_prod += std::log(rho);
    }
    const double psi_m = psi_series(m, arg);
    if (!(psi_m > 0.0)) throw std::domain_error("psi_m must be positive at the requested rate");
    return std::log(psi_m) - log_prod;
}

inline double pdp_arq(const std::vector<double>& powers, Rate rate) {
    return std::exp(log_pdp_arq(powers, rate));
}
inline double pdp_cc(const std::vector<double>& powers, Rate rate) {
    return std::exp(log_pdp_cc(powers, rate));
}
inline double pdp_ir(const std::vector<double>& powers, Rate rate,
                     IrThresholdMode mode = IrThresholdMode::PerRoundRate) {
    return std::exp(log_pdp_ir(powers, rate, mode));
}

/// Protocol-dispatched pdp of a schedule prefix (empty prefix gives 1,
/// i.e. E_0 = 1).
inline double log_pdp(ProtocolKind protocol, const std::vector<double>& powers, Rate rate,
                      IrThresholdMode mode = IrThresholdMode::PerRoundRate) {
    if (powers.empty()) return 0.0;
    switch (protocol) {
        case ProtocolKind::ARQ: return log_pdp_arq(powers, rate);
        case ProtocolKind::CCHARQ: return log_pdp_cc(powers, rate);
        case ProtocolKind::IRHARQ: return log_pdp_ir(powers, rate, mode);
    }
    throw std::logic_error("unreachable");
}

inline double pdp(ProtocolKind protocol, const std::vector<double>& powers, Rate rate,
                  IrThresholdMode mode = IrThresholdMode::PerRoundRate) {
    return std::exp(log_pdp(protocol, powers, rate, mode));
}

}  // namespace harq
