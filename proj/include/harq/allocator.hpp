#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "harq/outage.hpp"
#include "harq/psi.hpp"
#include "harq/types.hpp"

namespace harq {

struct AllocationRequest {
    ProtocolKind protocol;
    int rounds;
    Rate rate;
    double target_eps;
    IrThresholdMode ir_mode = IrThresholdMode::PerRoundRate;

    void validate() const {
        if (rounds < 1 || rounds > 20)
            throw std::invalid_argument("rounds must be in [1, 20]");
        if (!(target_eps > 0.0) || !(target_eps < 1.0))
            throw std::invalid_argument("target outage must be in (0, 1)");
    }
};

/// Per-round transmit SNRs with the Lagrange multiplier that produced
/// them. validity_warning is set when some rho_m <= phi, i.e. the
/// asymptotic Taylor outage exceeds 1 in that round.
struct PowerSchedule {
    std::vector<double> powers;
    double lagrange = 0.0;
    bool validity_warning = false;

    int rounds() const { return static_cast<int>(powers.size()); }
};

/// Round-index exponents shared by the three closed forms.
struct ExponentTable {
    int rounds;

    explicit ExponentTable(int m_rounds) : rounds(m_rounds) {}

    double a(int m) const { return 2.0 - std::exp2(-(rounds - m - 1)); }
    double b(int m) const { return 2.0 - std::exp2(-(rounds - m)); }
    double c(int m) const { return std::exp2(-(rounds - m)); }
    double d(int i) const { return std::exp2(-i); }
    double o() const { return std::exp2(rounds) - 1.0; }
    double p() const { return std::exp2(rounds); }
    double q() const { return (rounds - 2) * std::exp2(rounds) + 2.0; }
};

namespace detail {

constexpr double kLog2 = 0.6931471805599453094;

inline PowerSchedule finish(std::vector<double> log_powers, double log_lambda, double phi_val) {
    PowerSchedule s;
    s.powers.reserve(log_powers.size());
    const double log_phi = std::log(phi_val);
    for (double lp : log_powers) {
        s.powers.push_back(std::exp(lp));
        if (lp <= log_phi) s.validity_warning = true;
    }
    s.lagrange = std::exp(log_lambda);
    return s;
}

}  // namespace detail

/// ARQ allocation: lambda from the closed form, rho_M = sqrt(M lambda phi),
/// then the backward recursion rho_m = sqrt(2 phi rho_{m+1}). All in logs;
/// exponent-table terms reach 2^M.
inline PowerSchedule allocate_arq(const AllocationRequest& req) {
    req.validate();
    if (req.protocol != ProtocolKind::ARQ)
        throw std::invalid_argument("allocate_arq requires protocol = ARQ");
    const int m_max = req.rounds;
    const double log_phi = std::log(phi(req.rate));
    const double log_eps = std::log(req.target_eps);
    const ExponentTable t(m_max);

    const double log_lambda =
        (t.o() * log_phi - t.o() * std::log(m_max) - t.p() * log_eps - t.q() * detail::kLog2) /
        t.o();

    std::vector<double> lp(m_max);
    lp[m_max - 1] = 0.5 * (std::log(m_max) + log_lambda + log_phi);
    for (int m = m_max - 2; m >= 0; --m)
        lp[m] = 0.5 * (detail::kLog2 + log_phi + lp[m + 1]);
    return detail::finish(std::move(lp), log_lambda, phi(req.rate));
}

/// CC-HARQ allocation: rho_M = sqrt(phi lambda), rho_m = sqrt(2 phi rho_{m+1} / m).
inline PowerSchedule allocate_cc(const AllocationRequest& req) {
    req.validate();
    if (req.protocol != ProtocolKind::CCHARQ)
        throw std::invalid_argument("allocate_cc requires protocol = CCHARQ");
    const int m_max = req.rounds;
    const double log_phi = std::log(phi(req.rate));
    const double log_eps = std::log(req.target_eps);
    const ExponentTable t(m_max);

    // lambda^o = phi^o * prod_{m=1}^{M-1} (M-m)^{p(M)-p(m)} / ((M! eps)^p 2^q)
    double log_prod = 0.0;
    for (int m = 1; m < m_max; ++m)
        log_prod += (t.p() - std::exp2(m)) * std::log(static_cast<double>(m_max - m));
    const double log_lambda = (t.o() * log_phi + log_prod -
                               t.p() * (std::lgamma(m_max + 1.0) + log_eps) -
                               t.q() * detail::kLog2) /
                              t.o();

    std::vector<double> lp(m_max);
    lp[m_max - 1] = 0.5 * (log_phi + log_lambda);
    for (int m = m_max - 2; m >= 0; --m)
        lp[m] = 0.5 * (detail::kLog2 + log_phi + lp[m + 1] - std::log(m + 1.0));
    return detail::finish(std::move(lp), log_lambda, phi(req.rate));
}

/// IR-HARQ allocation: rho_M = sqrt(lambda M psi_M / psi_{M-1}),
/// rho_m = sqrt(2 rho_{m+1} psi_m / psi_{m-1}), psi evaluated at the
/// configured threshold argument.
inline PowerSchedule allocate_ir(const AllocationRequest& req) {
    req.validate();
    if (req.protocol != ProtocolKind::IRHARQ)
        throw std::invalid_argument("allocate_ir requires protocol = IRHARQ");
    const int m_max = req.rounds;
    const double arg = req.ir_mode == IrThresholdMode::ParentRate
                           ? m_max * req.rate.nats_per_use
                           : req.rate.nats_per_use;
    const double log_eps = std::log(req.target_eps);
    const ExponentTable t(m_max);

    std::vector<double> log_psi(m_max + 1);
    for (int m = 0; m <= m_max; ++m) {
        const double v = psi_series(m, arg);
        if (!(v > 0.0)) throw std::domain_error("psi_m must be positive at the requested rate");
        log_psi[m] = std::log(v);
    }

    // lambda^o = psi_M * prod_{j=1}^{M-1} psi_j^{2^(M-j-1)} / (M^o eps^p 2^q)
    double log_num = log_psi[m_max];
    for (int j = 1; j < m_max; ++j) log_num += std::exp2(m_max - j - 1) * log_psi[j];
    const double log_lambda =
        (log_num - t.o() * std::log(m_max) - t.p() * log_eps - t.q() * detail::kLog2) / t.o();

    std::vector<double> lp(m_max);
    lp[m_max - 1] = 0.5 * (log_lambda + std::log(m_max) + log_psi[m_max] - log_psi[m_max - 1]);
    for (int m = m_max - 2; m >= 0; --m)
        lp[m] = 0.5 * (detail::kLog2 + lp[m + 1] + log_psi[m + 1] - log_psi[m]);
    return detail::finish(std::move(lp), log_lambda, phi(req.rate));
}

inline PowerSchedule allocate(const AllocationRequest& req) {
    switch (req.protocol) {
        case ProtocolKind::ARQ: return allocate_arq(req);
        case ProtocolKind::CCHARQ: return allocate_cc(req);
        case ProtocolKind::IRHARQ: return allocate_ir(req);
    }
    throw std::logic_error("unreachable");
}

/// Direct exponent-table closed form for round m (1-based), the second
/// route of the recursion/closed-form duality check.
inline double closed_form_log_power(const AllocationRequest& req, double log_lambda, int m) {
    const int m_max = req.rounds;
    const ExponentTable t(m_max);
    const double log_phi = std::log(phi(req.rate));
    switch (req.protocol) {
        case ProtocolKind::ARQ:
            return 0.5 * (t.a(m) * detail::kLog2 + t.b(m) * log_phi +
                          t.c(m) * (std::log(m_max) + log_lambda));
        case ProtocolKind::CCHARQ: {
            double ksum = 0.0;
            for (int j = 0; j < m_max - m; ++j) ksum += std::exp2(-j) * std::log(m + j + 0.0);
            return 0.5 *
                   (t.a(m) * detail::kLog2 + t.b(m) * log_phi + t.c(m) * log_lambda - ksum);
        }
        case ProtocolKind::IRHARQ: {
            const double arg = req.ir_mode == IrThresholdMode::ParentRate
                                   ? m_max * req.rate.nats_per_use
                                   : req.rate.nats_per_use;
            double rsum = 0.0;
            for (int i = m; i <= m_max; ++i)
                rsum += std::exp2(-(i - m)) *
                        (std::log(psi_series(i, arg)) - std::log(psi_series(i - 1, arg)));
            return 0.5 *
                   (t.a(m) * detail::kLog2 + t.c(m) * (std::log(m_max) + log_lambda) + rsum);
        }
    }
    throw std::logic_error("unreachable");
}

/// Two-round fast path: eliminate rho_2 through the active
/// constraint and zero the derivative. ARQ: rho_1 = phi (2/eps)^(1/3),
/// rho_2 = (phi/eps)(eps/2)^(1/3); CC and IR follow the same elimination
/// with their own pdp coefficients.
inline PowerSchedule allocate_two_shot(ProtocolKind protocol, Rate rate, double eps,
                                       IrThresholdMode ir_mode = IrThresholdMode::PerRoundRate) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("target outage must be in (0, 1)");
    const double p = phi(rate);
    PowerSchedule s;
    s.powers.resize(2);
    // pdp = coef / (rho_1 rho_2); objective rho_1 + rho_2 eps_1 with
    // eps_1 = c1 / rho_1. Substitution gives rho_1^3 = 2 c1 coef / eps.
    double log_coef, log_c1;
    switch (protocol) {
        case ProtocolKind::ARQ:
            log_coef = 2.0 * std::log(p);
            log_c1 = std::log(p);
            break;
        case ProtocolKind::CCHARQ:
            log_coef = 2.0 * std::log(p) - detail::kLog2;
            log_c1 = std::log(p);
            break;
        case ProtocolKind::IRHARQ: {
            const double arg = ir_mode == IrThresholdMode::ParentRate ? 2.0 * rate.nats_per_use
                                                                      : rate.nats_per_use;
            log_coef = std::log(psi_series(2, arg));
            log_c1 = std::log(psi_series(1, arg));
            break;
        }
        default: throw std::logic_error("unreachable");
    }
    const double log_eps = std::log(eps);
    const double lr1 = (detail::kLog2 + log_c1 + log_coef - log_eps) / 3.0;
    const double lr2 = log_coef - log_eps - lr1;
    s.powers[0] = std::exp(lr1);
    s.powers[1] = std::exp(lr2);
    // lambda consistent with the general allocator: rho_2^2 = 2 lambda * (coef/c1)
    s.lagrange = std::exp(2.0 * lr2 - detail::kLog2 - (log_coef - log_c1));
    s.validity_warning = lr1 <= std::log(p) || lr2 <= std::log(p);
    return s;
}

struct PowerMetrics {
    double avg_power;    // sum rho_m E_{m-1}, E_0 = 1
    double total_power;  // sum rho_m (all transmissions exhausted)
    std::vector<double> per_round_db;
};

/// Expected consumed power: each round's power weighted by the probability
/// all earlier rounds failed under the protocol's pdp law. No 1/M
/// prefactor; callers wanting the per-transmission convention divide by M.
inline PowerMetrics power_metrics(const PowerSchedule& schedule, Rate rate, ProtocolKind protocol,
                                  IrThresholdMode ir_mode = IrThresholdMode::PerRoundRate) {
    PowerMetrics m{0.0, 0.0, {}};
    const int rounds = schedule.rounds();
    const double threshold_arg = ir_mode == IrThresholdMode::ParentRate
                                     ? rounds * rate.nats_per_use
                                     : rate.nats_per_use;
    for (int i = 0; i < rounds; ++i) {
        const double rho = schedule.powers[i];
        std::vector<double> prefix(schedule.powers.begin(), schedule.powers.begin() + i);
        double log_e;
        if (prefix.empty()) {
            log_e = 0.0;
        } else if (protocol == ProtocolKind::IRHARQ) {
            log_e = log_pdp_ir_threshold(prefix, threshold_arg);
        } else {
            log_e = log_pdp(protocol, prefix, rate);
        }
        m.avg_power += rho * std::exp(log_e);
        m.total_power += rho;
        m.per_round_db.push_back(to_db(rho));
    }
    return m;
}

/// The unique equal-power schedule meeting the target exactly under the
/// protocol's pdp law.
inline PowerSchedule equal_power_baseline(ProtocolKind protocol, int rounds, Rate rate, double eps,
                                          IrThresholdMode ir_mode = IrThresholdMode::PerRoundRate) {
    AllocationRequest probe{protocol, rounds, rate, eps, ir_mode};
    probe.validate();
    double log_coef;  // pdp = coef / rho^M
    switch (protocol) {
        case ProtocolKind::ARQ: log_coef = rounds * std::log(phi(rate)); break;
        case ProtocolKind::CCHARQ:
            log_coef = rounds * std::log(phi(rate)) - std::lgamma(rounds + 1.0);
            break;
        case ProtocolKind::IRHARQ: {
            const double arg = ir_mode == IrThresholdMode::ParentRate
                                   ? rounds * rate.nats_per_use
                                   : rate.nats_per_use;
            log_coef = std::log(psi_series(rounds, arg));
            break;
        }
        default: throw std::logic_error("unreachable");
    }
    const double lrho = (log_coef - std::log(eps)) / rounds;
    PowerSchedule s;
    s.powers.assign(rounds, std::exp(lrho));
    s.validity_warning = lrho <= std::log(phi(rate));
    return s;
}

}  // namespace harq
