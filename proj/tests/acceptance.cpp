// Acceptance gate: one line per criterion, exit 0 only if all pass.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "harq/harq.hpp"

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", idx, name,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++g_failures;
}

const std::vector<harq::ProtocolKind> kProtocols{
    harq::ProtocolKind::ARQ, harq::ProtocolKind::CCHARQ, harq::ProtocolKind::IRHARQ};

harq::PowerSchedule make(harq::ProtocolKind p, int m, double r, double eps) {
    return harq::allocate({p, m, harq::Rate(r), eps, harq::IrThresholdMode::PerRoundRate});
}

double avg_power(harq::ProtocolKind p, const harq::PowerSchedule& s, double r) {
    return harq::power_metrics(s, harq::Rate(r), p).avg_power;
}

std::string run_capture(const std::string& cmd) {
    std::string out;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) return out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    pclose(pipe);
    return out;
}

// ------------------------------------------------------------------------

void criterion_1() {
    const double eps = 1e-5;
    const double p = harq::phi(harq::Rate(1.0));
    const auto s = make(harq::ProtocolKind::ARQ, 2, 1.0, eps);
    const double r1 = p * std::cbrt(2.0 / eps);
    const double r2 = p / eps * std::cbrt(eps / 2.0);
    const bool vals = std::abs(s.powers[0] / r1 - 1.0) < 1e-12 &&
                      std::abs(s.powers[1] / r2 - 1.0) < 1e-12;
    const double log_gap = std::log(s.powers[0]) + std::log(s.powers[1]) -
                           (2.0 * std::log(p) - std::log(eps));
    const bool active = std::abs(log_gap) < 1e-13;
    char d[128];
    std::snprintf(d, sizeof(d), "rho=(%.6f, %.6f), constraint log gap %.1e", s.powers[0],
                  s.powers[1], log_gap);
    report(1, "two-round closed form", vals && active, d);
}

void criterion_2() {
    double worst_pdp = 0.0, worst_route = 0.0;
    for (auto proto : kProtocols)
        for (int m_rounds = 1; m_rounds <= 8; ++m_rounds)
            for (double r : {0.5, 1.0, 2.0, 3.0})
                for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
                    const harq::AllocationRequest req{proto, m_rounds, harq::Rate(r), eps,
                                                      harq::IrThresholdMode::PerRoundRate};
                    const auto s = harq::allocate(req);
                    const double achieved = harq::pdp(proto, s.powers, harq::Rate(r));
                    worst_pdp = std::max(worst_pdp, std::abs(achieved / eps - 1.0));
                    const double ll = std::log(s.lagrange);
                    for (int m = 1; m <= m_rounds; ++m)
                        worst_route = std::max(
                            worst_route, std::abs(std::log(s.powers[m - 1]) -
                                                  harq::closed_form_log_power(req, ll, m)));
                }
    char d[128];
    std::snprintf(d, sizeof(d), "worst pdp rel %.2e, worst route gap %.2e", worst_pdp,
                  worst_route);
    report(2, "constraint activity and dual closed-form routes", worst_pdp < 1e-9 && worst_route < 1e-12,
           d);
}

void criterion_3() {
    double worst = 0.0;
    std::string at;
    for (auto proto : kProtocols)
        for (int m : {2, 3, 4})
            for (double eps : {1e-3, 1e-5, 1e-7})
                for (double r : {1.0, 2.0}) {
                    const auto closed = make(proto, m, r, eps);
                    const auto oracle =
                        harq::numeric_allocation_oracle(proto, m, harq::Rate(r), eps);
                    const double a = avg_power(proto, closed, r);
                    const double b = avg_power(proto, oracle, r);
                    const double dev = std::abs(a - b) / a;
                    if (dev > worst) {
                        worst = dev;
                        at = std::string(harq::protocol_name(proto)) + " M=" + std::to_string(m);
                    }
                }
    char d[128];
    std::snprintf(d, sizeof(d), "worst avg-power gap %.2e (%s)", worst, at.c_str());
    report(3, "independent numeric optimizer equivalence", worst < 1e-3, d);
}

void criterion_4() {
    double worst = 0.0;
    bool pass = true;
    for (auto proto : kProtocols)
        for (int m = 1; m <= 8; ++m)
            for (double r : {0.5, 1.0, 2.0, 3.0})
                for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
                    const auto rep =
                        harq::stationarity_check(make(proto, m, r, eps), proto, harq::Rate(r));
                    worst = std::max(worst, rep.worst_deviation);
                    pass = pass && rep.pass;
                }
    auto bumped = make(harq::ProtocolKind::ARQ, 2, 1.0, 1e-5);
    bumped.powers[0] *= 1.05;
    const bool control =
        !harq::stationarity_check(bumped, harq::ProtocolKind::ARQ, harq::Rate(1.0)).pass;
    char d[128];
    std::snprintf(d, sizeof(d), "worst relative gradient %.2e, negative control %s", worst,
                  control ? "detected" : "MISSED");
    report(4, "KKT stationarity with negative control", pass && control, d);
}

void criterion_5() {
    bool pass = true;
    std::string detail;
    for (auto proto : kProtocols) {
        const auto rep = harq::monotonicity_check(proto, {2, 3, 4, 5, 6}, {0.5, 1.0, 2.0, 3.0},
                                                  {1e-5, 1e-7, 1e-9});
        if (!detail.empty()) detail += "; ";
        detail += std::string(harq::protocol_name(proto)) + (rep.pass ? " ok" : " violated");
        if (!rep.pass) detail += " at " + rep.worst_location;
        pass = pass && rep.pass;
    }
    report(5, "strict per-round power increase", pass, detail);
    if (!pass)
        std::printf("       note: the true optima (confirmed by the criterion-3 optimizer) are\n"
                    "       non-monotone for chase combining at M >= 5 and incremental\n"
                    "       redundancy at M >= 4; strict ordering holds for plain ARQ.\n");
}

void criterion_6() {
    double worst = 0.0;
    for (int m = 1; m <= 5; ++m)
        for (double r : {0.5, 1.0, 2.0, 3.0})
            worst = std::max(worst, std::abs(harq::psi_series(m, r) -
                                             harq::psi_convolution_oracle(m, r)));
    const bool anchors = std::abs(harq::psi_series(2, 1.0) - 1.0) < 1e-12 &&
                         std::abs(harq::psi_series(3, 1.0) - (std::exp(1.0) / 2.0 - 1.0)) < 1e-12;
    char d[128];
    std::snprintf(d, sizeof(d), "worst series-vs-oracle gap %.2e", worst);
    report(6, "accumulated-information failure series", worst < 1e-8 && anchors, d);
}

void criterion_7() {
    double worst_cf = 0.0, worst_asym = 0.0;
    for (double k : {200.0, 400.0, 600.0}) {
        const harq::BlocklengthSpec bl(200, k);
        const harq::Rate rate = bl.rate();
        const auto integral = harq::OutageModel::fbl_integral(bl);
        const auto closed = harq::OutageModel::fbl_closed(bl);
        for (int db = 0; db <= 70; ++db) {
            const double rho = harq::from_db(static_cast<double>(db));
            const double ref = harq::outage_single_round(rho, rate, integral).probability;
            if (ref < 1e-5 || ref > 1e-1) continue;
            const double cf = harq::outage_single_round(rho, rate, closed).probability;
            worst_cf = std::max(worst_cf, std::abs(cf / ref - 1.0));
            if (ref <= 1e-2) {
                const double asym = harq::phi(rate) / rho;
                worst_asym = std::max(worst_asym, std::abs(asym / ref - 1.0));
            }
        }
    }
    char d[128];
    std::snprintf(d, sizeof(d), "closed form %.2f%%, first-order %.2f%%", 100.0 * worst_cf,
                  100.0 * worst_asym);
    report(7, "finite-blocklength model agreement", worst_cf < 0.05 && worst_asym < 0.10, d);
}

void criterion_8() {
    const double open5 = harq::to_db(harq::phi(harq::Rate(1.0)) / 1e-5);
    const double open7 = harq::to_db(harq::phi(harq::Rate(1.0)) / 1e-7);
    bool pass = std::abs(open5 - 52.35) < 0.5 && std::abs(open7 - 70.0) < 3.0;

    const auto ir3 = make(harq::ProtocolKind::IRHARQ, 3, 1.0, 1e-7);
    const double avg_db = harq::to_db(avg_power(harq::ProtocolKind::IRHARQ, ir3, 1.0));
    const double per_tx_db = harq::to_db(avg_power(harq::ProtocolKind::IRHARQ, ir3, 1.0) / 3.0);
    pass = pass && std::abs(per_tx_db - 10.0) < 2.0 && std::abs(avg_db - 15.0) < 2.0;

    double worst_saving_lo = 1e9, worst_saving_hi = -1e9;
    for (auto proto : kProtocols) {
        const auto s = make(proto, 2, 1.0, 1e-5);
        const double saving = open5 - harq::to_db(s.powers[0]);
        worst_saving_lo = std::min(worst_saving_lo, saving);
        worst_saving_hi = std::max(worst_saving_hi, saving);
    }
    pass = pass && worst_saving_lo >= 30.0 && worst_saving_hi <= 35.0;
    char d[192];
    std::snprintf(d, sizeof(d),
                  "open loop %.2f / %.2f dB; 3-round IR avg %.2f dB (%.2f per tx); first-round "
                  "savings %.1f..%.1f dB",
                  open5, open7, avg_db, per_tx_db, worst_saving_lo, worst_saving_hi);
    report(8, "headline operating points", pass, d);
}

void criterion_9() {
    bool pass = true;
    for (double eps : {1e-3, 1e-5, 1e-7}) {
        for (int m : {2, 3}) {
            double tot[3], avg[3];
            for (int i = 0; i < 3; ++i) {
                const auto s = make(kProtocols[i], m, 1.0, eps);
                tot[i] = 0.0;
                for (double r : s.powers) tot[i] += r;
                avg[i] = avg_power(kProtocols[i], s, 1.0);
            }
            pass = pass && tot[2] < tot[1] && tot[1] < tot[0];  // IR < CC < ARQ
            pass = pass && avg[2] < avg[1] && avg[1] < avg[0];
        }
        for (auto proto : kProtocols) {
            double t2 = 0.0, t3 = 0.0;
            for (double r : make(proto, 2, 1.0, eps).powers) t2 += r;
            for (double r : make(proto, 3, 1.0, eps).powers) t3 += r;
            pass = pass && t3 < t2;
        }
    }
    report(9, "protocol and round-count power ordering", pass);
}

void criterion_10() {
    bool pass = true;
    std::string detail;
    const harq::Rate rate(1.0);
    const double p = harq::phi(rate);
    harq::SimulationOptions opts;
    opts.workers = 4;

    // plain retransmission, modest target: exact product law
    {
        const auto s = make(harq::ProtocolKind::ARQ, 2, 1.0, 1e-2);
        const double exact = std::expm1(-p / s.powers[0]) * std::expm1(-p / s.powers[1]);
        pass = pass && std::abs(exact / 8.928127229950063e-3 - 1.0) < 1e-10;
        const auto rep = harq::run_monte_carlo(harq::ProtocolKind::ARQ, s.powers, rate,
                                               1'000'000, 2024, opts);
        const double sigma = std::sqrt(exact * (1.0 - exact) / 1e6);
        const double z = std::abs(rep.empirical_pdp - exact) / sigma;
        pass = pass && z <= 3.0;
        char d[96];
        std::snprintf(d, sizeof(d), "plain z=%.2f", z);
        detail += d;
    }
    // combining protocols: quadrature oracles for the exact two-round laws
    const auto cc = make(harq::ProtocolKind::CCHARQ, 2, 1.0, 1e-3);
    const double cc_exact = harq::integrate(
        [&](double z) {
            return std::exp(-z) * -std::expm1(-(p - cc.powers[0] * z) / cc.powers[1]);
        },
        0.0, p / cc.powers[0], 1e-14);
    const auto ir = make(harq::ProtocolKind::IRHARQ, 2, 1.0, 1e-3);
    const double ir_exact = harq::integrate(
        [&](double z1) {
            const double c1 = std::log1p(ir.powers[0] * z1);
            return std::exp(-z1) * -std::expm1(-std::expm1(1.0 - c1) / ir.powers[1]);
        },
        0.0, p / ir.powers[0], 1e-14);
    pass = pass && std::abs(cc_exact / 9.610128755e-4 - 1.0) < 1e-8;
    pass = pass && std::abs(ir_exact / 9.622313465e-4 - 1.0) < 1e-8;
    pass = pass && std::abs(1e-3 / cc_exact - 1.0) < 0.15 && std::abs(1e-3 / ir_exact - 1.0) < 0.15;

    const std::pair<harq::ProtocolKind, double> combos[] = {
        {harq::ProtocolKind::CCHARQ, cc_exact}, {harq::ProtocolKind::IRHARQ, ir_exact}};
    for (const auto& [proto, exact] : combos) {
        const auto s = make(proto, 2, 1.0, 1e-3);
        const auto rep = harq::run_monte_carlo(proto, s.powers, rate, 10'000'000, 2024, opts);
        const double sigma = std::sqrt(exact * (1.0 - exact) / 1e7);
        const double z = std::abs(rep.empirical_pdp - exact) / sigma;
        pass = pass && z <= 3.0;
        char d[96];
        std::snprintf(d, sizeof(d), ", %s z=%.2f", harq::protocol_name(proto), z);
        detail += d;
    }
    report(10, "Monte Carlo consistency with exact laws", pass, detail);
}

void criterion_11() {
    bool pass = true;
    std::string detail;
    for (auto proto : kProtocols)
        for (int m : {2, 4}) {
            const auto rep = harq::convexity_probe(proto, m, harq::Rate(1.0), 10000);
            if (!rep.pass) {
                pass = false;
                if (detail.empty())
                    detail = std::string(harq::protocol_name(proto)) + " M=" + std::to_string(m) +
                             " violation " + std::to_string(rep.worst_deviation) + " (" +
                             rep.worst_location + ")";
            }
        }
    report(11, "chord convexity in linear power coordinates", pass, detail);
    if (!pass) {
        bool log_pass = true;
        for (auto proto : kProtocols)
            for (int m : {2, 4})
                log_pass =
                    log_pass && harq::convexity_probe_log_domain(proto, m, harq::Rate(1.0), 10000).pass;
        std::printf("       note: the expected-power objective is not convex in linear powers\n"
                    "       (only the drop-probability constraint is); the same probe in\n"
                    "       log-power coordinates passes everywhere: %s.\n",
                    log_pass ? "confirmed" : "NOT CONFIRMED");
    }
}

void criterion_12(const std::string& cli) {
    const std::string sim_base = cli +
                                 " simulate --protocol cc --powers 40,700 --rate 1 --trials 200000"
                                 " --seed 3 --format json --workers ";
    const std::string a = run_capture(sim_base + "1");
    const std::string b = run_capture(sim_base + "4");
    const std::string c = run_capture(sim_base + "4");
    const std::string sweep_cmd = cli + " sweep --figure fig3";
    const std::string s1 = run_capture(sweep_cmd);
    const std::string s2 = run_capture(sweep_cmd);
    const bool pass = !a.empty() && a == b && b == c && !s1.empty() && s1 == s2;
    char d[96];
    std::snprintf(d, sizeof(d), "simulate %zu bytes, sweep %zu bytes", a.size(), s1.size());
    report(12, "byte-identical repeated CLI runs", pass, d);
}

}  // namespace

int main(int argc, char** argv) {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (argc > 1) {
        criterion_12(argv[1]);
    } else {
        report(12, "byte-identical repeated CLI runs", false, "CLI path not supplied");
    }
    std::printf("%d of 12 criteria passed\n", 12 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
