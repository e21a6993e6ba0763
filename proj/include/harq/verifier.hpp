#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "harq/allocator.hpp"
#include "harq/outage.hpp"
#include "harq/rng.hpp"
#include "harq/types.hpp"

namespace harq {

struct OracleConfig {
    int max_iterations = 20000;
    double tolerance = 1e-10;  // relative convergence tolerance on the objective
    int starts = 7;            // multi-start count
    double start_spread_db = 20.0;
    std::uint64_t seed = 12345;
};

struct VerificationReport {
    std::string check;
    bool pass = true;
    double worst_deviation = 0.0;
    std::string worst_location;
    int checked = 0;
    int skipped = 0;
};

namespace detail {

/// Nelder-Mead over R^n. Plain implementation; the oracle problems are
/// smooth and at most 5-dimensional.
inline std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x0, double step, int max_iter,
                                       double ftol_rel) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<std::size_t> order(n + 1);
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (std::abs(fv[worst] - fv[best]) <=
            ftol_rel * (std::abs(fv[best]) + std::abs(fv[worst])) + 1e-300)
            break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != worst)
                for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;

        auto blend = [&](double coeff) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + coeff * (simplex[worst][j] - centroid[j]);
            return x;
        };

        auto xr = blend(-1.0);
        const double fr = f(xr);
        if (fr < fv[best]) {
            auto xe = blend(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
        } else {
            auto xc = blend(fr < fv[worst] ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[worst])) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    return simplex[best];
}

inline double log_coefficient(ProtocolKind protocol, int rounds, Rate rate,
                              IrThresholdMode ir_mode) {
    switch (protocol) {
        case ProtocolKind::ARQ: return rounds * std::log(phi(rate));
        case ProtocolKind::CCHARQ:
            return rounds * std::log(phi(rate)) - std::lgamma(rounds + 1.0);
        case ProtocolKind::IRHARQ: {
            const double arg = ir_mode == IrThresholdMode::ParentRate
                                   ? rounds * rate.nats_per_use
                                   : rate.nats_per_use;
            return std::log(psi_series(rounds, arg));
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace detail

/// Average power of a full schedule under the asymptotic model,
/// protocol-dispatched (the objective of Problem 1).
inline double oracle_avg_power(ProtocolKind protocol, const std::vector<double>& powers, Rate rate,
                               IrThresholdMode ir_mode = IrThresholdMode::PerRoundRate) {
    PowerSchedule s;
    s.powers = powers;
    return power_metrics(s, rate, protocol, ir_mode).avg_power;
}

/// Brute-force constrained minimizer: eliminates rho_M through the active
/// reliability constraint and minimizes the remaining unconstrained
/// objective over log-powers with multi-start Nelder-Mead.
inline PowerSchedule numeric_allocation_oracle(ProtocolKind protocol, int rounds, Rate rate,
                                               double eps, const OracleConfig& config = {},
                                               IrThresholdMode ir_mode =
                                                   IrThresholdMode::PerRoundRate) {
    if (rounds < 1 || rounds > 6) throw std::invalid_argument("oracle supports M in [1, 6]");
    const double log_coef = detail::log_coefficient(protocol, rounds, rate, ir_mode);
    const double log_eps = std::log(eps);

    auto expand = [&](const std::vector<double>& free_log) {
        std::vector<double> powers(rounds);
        double sum = 0.0;
        for (int i = 0; i < rounds - 1; ++i) {
            powers[i] = std::exp(free_log[i]);
            sum += free_log[i];
        }
        powers[rounds - 1] = std::exp(log_coef - log_eps - sum);
        return powers;
    };
    auto objective = [&](const std::vector<double>& free_log) {
        return oracle_avg_power(protocol, expand(free_log), rate, ir_mode);
    };

    PowerSchedule result;
    if (rounds == 1) {
        result.powers = {std::exp(log_coef - log_eps)};
        return result;
    }

    const double equal_log = (log_coef - log_eps) / rounds;
    const double spread = config.start_spread_db / 10.0 * std::log(10.0);
    SplitMix64 rng(config.seed);
    double best_val = 0.0;
    std::vector<double> best_x;
    for (int s = 0; s < config.starts; ++s) {
        std::vector<double> x0(rounds - 1, equal_log);
        if (s > 0)
            for (auto& v : x0) v += (2.0 * rng.uniform() - 1.0) * spread;
        auto x = detail::nelder_mead(objective, x0, 0.5, config.max_iterations,
                                     config.tolerance);
        // polish with a shrinking restart
        x = detail::nelder_mead(objective, x, 0.01, config.max_iterations, config.tolerance);
        const double v = objective(x);
        if (best_x.empty() || v < best_val) {
            best_val = v;
            best_x = x;
        }
    }
    result.powers = expand(best_x);
    return result;
}

/// Chord-sampling convexity probe over linear power vectors with
/// log-uniform endpoints in [0, 80] dB. Checks both the protocol's pdp
/// law and the average-power objective.
inline VerificationReport convexity_probe(ProtocolKind protocol, int rounds, Rate rate,
                                          int samples, std::uint64_t seed = 2024,
                                          IrThresholdMode ir_mode =
                                              IrThresholdMode::PerRoundRate) {
    VerificationReport rep;
    rep.check = "convexity";
    SplitMix64 rng(seed);
    auto draw_point = [&]() {
        std::vector<double> x(rounds);
        for (auto& v : x) v = from_db(rng.uniform() * 80.0);
        return x;
    };
    auto probe_fn = [&](const char* name, auto&& f) {
        for (int s = 0; s < samples; ++s) {
            const auto x = draw_point();
            const auto y = draw_point();
            const double theta = rng.uniform();
            std::vector<double> mid(rounds);
            for (int i = 0; i < rounds; ++i) mid[i] = theta * x[i] + (1.0 - theta) * y[i];
            const double fx = f(x), fy = f(y), fm = f(mid);
            const double bound = theta * fx + (1.0 - theta) * fy;
            const double scale = std::max({std::abs(fx), std::abs(fy), 1e-300});
            const double violation = (fm - bound) / scale;
            rep.checked++;
            if (violation > 1e-12) {
                rep.pass = false;
                if (violation > rep.worst_deviation) {
                    rep.worst_deviation = violation;
                    rep.worst_location = std::string(name) + " sample " + std::to_string(s);
                }
            }
        }
    };
    probe_fn("pdp", [&](const std::vector<double>& v) { return pdp(protocol, v, rate, ir_mode); });
    probe_fn("avg_power",
             [&](const std::vector<double>& v) { return oracle_avg_power(protocol, v, rate, ir_mode); });
    return rep;
}

/// Same chord probe but in log-power coordinates, where the problem is a
/// geometric program: both the pdp law and the objective are sums of
/// exponentials of affine forms and therefore convex.
inline VerificationReport convexity_probe_log_domain(ProtocolKind protocol, int rounds, Rate rate,
                                                     int samples, std::uint64_t seed = 2024,
                                                     IrThresholdMode ir_mode =
                                                         IrThresholdMode::PerRoundRate) {
    VerificationReport rep;
    rep.check = "convexity-log";
    SplitMix64 rng(seed);
    const double lo = 0.0, hi = 80.0 / 10.0 * std::log(10.0);
    auto draw_point = [&]() {
        std::vector<double> x(rounds);
        for (auto& v : x) v = lo + rng.uniform() * (hi - lo);
        return x;
    };
    auto lin = [](const std::vector<double>& logv) {
        std::vector<double> out(logv.size());
        for (std::size_t i = 0; i < logv.size(); ++i) out[i] = std::exp(logv[i]);
        return out;
    };
    auto probe_fn = [&](const char* name, auto&& f) {
        for (int s = 0; s < samples; ++s) {
            const auto x = draw_point();
            const auto y = draw_point();
            const double theta = rng.uniform();
            std::vector<double> mid(rounds);
            for (int i = 0; i < rounds; ++i) mid[i] = theta * x[i] + (1.0 - theta) * y[i];
            const double fx = f(lin(x)), fy = f(lin(y)), fm = f(lin(mid));
            const double bound = theta * fx + (1.0 - theta) * fy;
            const double scale = std::max({std::abs(fx), std::abs(fy), 1e-300});
            const double violation = (fm - bound) / scale;
            rep.checked++;
            if (violation > 1e-12) {
                rep.pass = false;
                if (violation > rep.worst_deviation) {
                    rep.worst_deviation = violation;
                    rep.worst_location = std::string(name) + " sample " + std::to_string(s);
                }
            }
        }
    };
    probe_fn("pdp", [&](const std::vector<double>& v) { return pdp(protocol, v, rate, ir_mode); });
    probe_fn("avg_power",
             [&](const std::vector<double>& v) { return oracle_avg_power(protocol, v, rate, ir_mode); });
    return rep;
}

/// Finite-difference KKT stationarity check of the Lagrangian
/// L = rho_avg + lambda_true (E_M - eps), with mu_m = 0. The multiplier
/// of this Lagrangian is M times the normalized value the schedule
/// carries in `lagrange`.
inline VerificationReport stationarity_check(const PowerSchedule& schedule, ProtocolKind protocol,
                                             Rate rate,
                                             IrThresholdMode ir_mode =
                                                 IrThresholdMode::PerRoundRate) {
    VerificationReport rep;
    rep.check = "kkt-stationarity";
    const int rounds = schedule.rounds();
    const double lambda_true = schedule.lagrange * rounds;
    const double eps_ach = pdp(protocol, schedule.powers, rate, ir_mode);

    auto lagrangian = [&](const std::vector<double>& powers) {
        return oracle_avg_power(protocol, powers, rate, ir_mode) +
               lambda_true * (pdp(protocol, powers, rate, ir_mode) - eps_ach);
    };
    const double scale = oracle_avg_power(protocol, schedule.powers, rate, ir_mode);
    const double h = 1e-6;  // relative step in log-power
    for (int m = 0; m < rounds; ++m) {
        auto up = schedule.powers, dn = schedule.powers;
        up[m] *= std::exp(h);
        dn[m] *= std::exp(-h);
        // gradient with respect to log rho_m
        const double grad = (lagrangian(up) - lagrangian(dn)) / (2.0 * h);
        const double rel = std::abs(grad) / scale;
        rep.checked++;
        if (rel > rep.worst_deviation) {
            rep.worst_deviation = rel;
            rep.worst_location = "round " + std::to_string(m + 1) +
                                 (grad > 0 ? " (positive gradient)" : " (negative gradient)");
        }
    }
    rep.pass = rep.worst_deviation <= 1e-6;
    return rep;
}

/// Strict per-round power increase of an optimal schedule, asserted only
/// inside the ultra-reliable region (eps <= 1e-4); grid points outside
/// it are recorded as skipped.
inline VerificationReport monotonicity_check(ProtocolKind protocol,
                                             const std::vector<int>& rounds_grid,
                                             const std::vector<double>& rate_grid,
                                             const std::vector<double>& eps_grid,
                                             IrThresholdMode ir_mode =
                                                 IrThresholdMode::PerRoundRate) {
    VerificationReport rep;
    rep.check = "monotonicity";
    for (int m_max : rounds_grid) {
        for (double r : rate_grid) {
            for (double eps : eps_grid) {
                if (eps > 1e-4) {
                    rep.skipped++;
                    continue;  // outside the URR, not asserted
                }
                const AllocationRequest req{protocol, m_max, Rate(r), eps, ir_mode};
                const auto sched = allocate(req);
                rep.checked++;
                for (int i = 0; i + 1 < m_max; ++i) {
                    const double gap = sched.powers[i] / sched.powers[i + 1] - 1.0;
                    if (gap >= 0.0) {
                        rep.pass = false;
                        if (gap > rep.worst_deviation) {
                            rep.worst_deviation = gap;
                            rep.worst_location = std::string(protocol_name(protocol)) + " M=" +
                                                 std::to_string(m_max) + " R=" + std::to_string(r) +
                                                 " eps=" + std::to_string(eps) + " round " +
                                                 std::to_string(i + 1);
                        }
                    }
                }
            }
        }
    }
    return rep;
}

}  // namespace harq
