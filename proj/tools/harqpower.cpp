// harqpower: optimal per-round power schedules for ARQ / CC-HARQ / IR-HARQ,
// Monte Carlo validation, and numeric verification suites.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "harq/harq.hpp"

using nlohmann::json;

namespace {

harq::ProtocolKind parse_protocol(const std::string& s) {
    if (s == "arq") return harq::ProtocolKind::ARQ;
    if (s == "cc") return harq::ProtocolKind::CCHARQ;
    if (s == "ir") return harq::ProtocolKind::IRHARQ;
    throw CLI::ValidationError("--protocol", "must be one of arq|cc|ir");
}

harq::IrThresholdMode parse_ir_mode(const std::string& s) {
    if (s == "per-round") return harq::IrThresholdMode::PerRoundRate;
    if (s == "parent") return harq::IrThresholdMode::ParentRate;
    throw CLI::ValidationError("--ir-threshold", "must be per-round|parent");
}

std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string json_dump(const json& j) { return j.dump(2) + "\n"; }

struct RateArgs {
    double rate = 0.0;
    int blocklength = 0;
    double nats = 0.0;

    harq::Rate resolve() const {
        if (rate > 0.0) return harq::Rate(rate);
        if (blocklength > 0 && nats > 0.0)
            return harq::BlocklengthSpec(blocklength, nats).rate();
        throw CLI::ValidationError("--rate", "give --rate R or --blocklength N --nats K");
    }
};

// ---------------------------------------------------------------- allocate

int cmd_allocate(harq::ProtocolKind protocol, int rounds, const RateArgs& rate_args,
                 double target, harq::IrThresholdMode ir_mode, bool normalize, bool strict,
                 const std::string& format) {
    const harq::Rate rate = rate_args.resolve();
    const harq::AllocationRequest req{protocol, rounds, rate, target, ir_mode};
    const harq::PowerSchedule sched = harq::allocate(req);
    const harq::PowerMetrics metrics = harq::power_metrics(sched, rate, protocol, ir_mode);
    // achieved pdp recomputed from the emitted powers, not allocator state
    const double achieved = harq::pdp(protocol, sched.powers, rate, ir_mode);
    const double norm = normalize ? static_cast<double>(rounds) : 1.0;

    if (format == "json") {
        json j;
        j["protocol"] = harq::protocol_name(protocol);
        j["rounds"] = rounds;
        j["rate"] = rate.nats_per_use;
        j["eps_target"] = target;
        j["powers_linear"] = sched.powers;
        j["powers_db"] = metrics.per_round_db;
        j["lambda"] = sched.lagrange;
        j["avg_power"] = metrics.avg_power / norm;
        j["avg_power_db"] = harq::to_db(metrics.avg_power / norm);
        j["total_power"] = metrics.total_power;
        j["total_power_db"] = harq::to_db(metrics.total_power);
        j["achieved_pdp"] = achieved;
        j["validity_warning"] = sched.validity_warning;
        std::cout << json_dump(j);
    } else if (format == "csv") {
        std::cout << "protocol,M,R,eps_target,round,rho_linear,rho_db\n";
        for (int m = 0; m < rounds; ++m)
            std::cout << harq::protocol_name(protocol) << ',' << rounds << ','
                      << csv_num(rate.nats_per_use) << ',' << csv_num(target) << ',' << (m + 1)
                      << ',' << csv_num(sched.powers[m]) << ',' << csv_num(metrics.per_round_db[m])
                      << '\n';
    } else {
        std::printf("protocol       %s, M = %d, R = %.6g ncpu, target pdp = %.3e\n",
                    harq::protocol_name(protocol), rounds, rate.nats_per_use, target);
        for (int m = 0; m < rounds; ++m)
            std::printf("rho_%d          %.6f  (%.2f dB)\n", m + 1, sched.powers[m],
                        metrics.per_round_db[m]);
        std::printf("lambda         %.10e\n", sched.lagrange);
        std::printf("avg power      %.6f  (%.2f dB)%s\n", metrics.avg_power / norm,
                    harq::to_db(metrics.avg_power / norm),
                    normalize ? "  [per transmission]" : "");
        std::printf("total power    %.6f  (%.2f dB)\n", metrics.total_power,
                    harq::to_db(metrics.total_power));
        std::printf("achieved pdp   %.10e\n", achieved);
        if (sched.validity_warning)
            std::printf("warning        some rho_m <= phi: outside the Taylor validity region\n");
    }
    if (strict && sched.validity_warning) return 3;
    return 0;
}

// ------------------------------------------------------------------ sweep

struct SweepRow {
    std::string protocol;
    int rounds = 0;
    double rate = 0.0;
    int n = 0;       // 0 = not applicable
    double k = 0.0;  // 0 = not applicable
    double eps = 0.0;
    std::vector<double> powers_db;
    double avg_power_db = 0.0;
    double total_power_db = 0.0;
    std::string model = "asymptotic";
    double achieved_pdp = 0.0;
};

std::vector<double> log_eps_grid(double hi, double lo, int per_decade) {
    std::vector<double> g;
    const int decades = static_cast<int>(std::round(std::log10(hi / lo)));
    const int points = decades * per_decade + 1;
    for (int i = 0; i < points; ++i)
        g.push_back(hi * std::pow(lo / hi, static_cast<double>(i) / (points - 1)));
    return g;
}

SweepRow allocation_row(harq::ProtocolKind protocol, int rounds, harq::Rate rate, double eps,
                        bool normalize) {
    const harq::AllocationRequest req{protocol, rounds, rate, eps,
                                      harq::IrThresholdMode::PerRoundRate};
    const auto sched = harq::allocate(req);
    const auto metrics = harq::power_metrics(sched, rate, protocol);
    SweepRow row;
    row.protocol = harq::protocol_name(protocol);
    row.rounds = rounds;
    row.rate = rate.nats_per_use;
    row.eps = eps;
    row.powers_db = metrics.per_round_db;
    row.avg_power_db = harq::to_db(metrics.avg_power / (normalize ? rounds : 1));
    row.total_power_db = harq::to_db(metrics.total_power);
    row.achieved_pdp = harq::pdp(protocol, sched.powers, rate);
    return row;
}

std::vector<SweepRow> sweep_fig1() {
    std::vector<SweepRow> rows;
    const int n = 200;
    for (double k : {200.0, 400.0, 600.0}) {
        const harq::BlocklengthSpec bl(n, k);
        const harq::Rate rate = bl.rate();
        for (double eps : log_eps_grid(1e-1, 1e-5, 4)) {
            const double rho = harq::phi(rate) / eps;  // open-loop operating point
            for (const auto& [name, model] :
                 std::vector<std::pair<std::string, harq::OutageModel>>{
                     {"fbl_integral", harq::OutageModel::fbl_integral(bl)},
                     {"fbl_closed", harq::OutageModel::fbl_closed(bl)},
                     {"asymptotic", harq::OutageModel::asymptotic()}}) {
                SweepRow row;
                row.protocol = "open-loop";
                row.rounds = 1;
                row.rate = rate.nats_per_use;
                row.n = n;
                row.k = k;
                row.eps = eps;
                row.powers_db = {harq::to_db(rho)};
                row.avg_power_db = row.total_power_db = harq::to_db(rho);
                row.model = name;
                row.achieved_pdp = harq::outage_single_round(rho, rate, model).probability;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::vector<SweepRow> sweep_allocations(const std::vector<harq::ProtocolKind>& protocols,
                                        const std::vector<int>& rounds_grid,
                                        const std::vector<harq::Rate>& rates,
                                        const std::vector<double>& eps_grid, bool normalize) {
    std::vector<SweepRow> rows;
    for (auto p : protocols)
        for (int m : rounds_grid)
            for (auto r : rates)
                for (double eps : eps_grid) rows.push_back(allocation_row(p, m, r, eps, normalize));
    return rows;
}

std::vector<SweepRow> sweep_fig4() {
    std::vector<SweepRow> rows;
    const double eps = 1e-5;
    for (auto p : {harq::ProtocolKind::ARQ, harq::ProtocolKind::CCHARQ, harq::ProtocolKind::IRHARQ})
        for (double k : {200.0, 300.0})
            for (int n = 300; n <= 2000; n += 100) {
                const harq::BlocklengthSpec bl(n, k);
                SweepRow row = allocation_row(p, 2, bl.rate(), eps, false);
                row.n = n;
                row.k = k;
                rows.push_back(row);
            }
    return rows;
}

int cmd_sweep(const std::string& figure, const std::string& out_path, const std::string& format,
              bool normalize) {
    const std::vector<harq::ProtocolKind> all_protocols{
        harq::ProtocolKind::ARQ, harq::ProtocolKind::CCHARQ, harq::ProtocolKind::IRHARQ};
    std::vector<SweepRow> rows;
    if (figure == "fig1") {
        rows = sweep_fig1();
    } else if (figure == "fig3") {
        rows = sweep_allocations(all_protocols, {2}, {harq::Rate(1.0)},
                                 log_eps_grid(1e-1, 1e-9, 4), normalize);
    } else if (figure == "fig4") {
        rows = sweep_fig4();
    } else if (figure == "fig6" || figure == "fig8") {
        rows = sweep_allocations(all_protocols, {2, 3}, {harq::Rate(1.0)},
                                 log_eps_grid(1e-1, 1e-9, 4), figure == "fig6" ? true : normalize);
    } else {
        std::cerr << "unknown figure preset: " << figure << "\n";
        return 2;
    }

    std::size_t max_rounds = 0;
    for (const auto& r : rows) max_rounds = std::max(max_rounds, r.powers_db.size());

    std::ostringstream out;
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            json j;
            j["protocol"] = r.protocol;
            j["m"] = r.rounds;
            j["r"] = r.rate;
            if (r.n > 0) j["n"] = r.n;
            if (r.k > 0) j["k"] = r.k;
            j["eps_target"] = r.eps;
            j["rho_db"] = r.powers_db;
            j["avg_power_db"] = r.avg_power_db;
            j["total_power_db"] = r.total_power_db;
            j["model"] = r.model;
            j["achieved_pdp"] = r.achieved_pdp;
            arr.push_back(j);
        }
        out << json_dump(arr);
    } else {
        out << "# harqpower sweep v1\n";
        out << "protocol,M,R,n,K,eps_target";
        for (std::size_t i = 1; i <= max_rounds; ++i) out << ",rho_" << i << "_db";
        out << ",avg_power_db,total_power_db,model,achieved_pdp\n";
        for (const auto& r : rows) {
            out << r.protocol << ',' << r.rounds << ',' << csv_num(r.rate) << ','
                << (r.n > 0 ? std::to_string(r.n) : "") << ','
                << (r.k > 0 ? csv_num(r.k) : "") << ',' << csv_num(r.eps);
            for (std::size_t i = 0; i < max_rounds; ++i)
                out << ',' << (i < r.powers_db.size() ? csv_num(r.powers_db[i]) : "");
            out << ',' << csv_num(r.avg_power_db) << ',' << csv_num(r.total_power_db) << ','
                << r.model << ',' << csv_num(r.achieved_pdp) << '\n';
        }
    }

    if (out_path.empty() || out_path == "-") {
        std::cout << out.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot write " << out_path << "\n";
            return 2;
        }
        f << out.str();
    }
    return 0;
}

// --------------------------------------------------------------- simulate

int cmd_simulate(harq::ProtocolKind protocol, std::vector<double> powers, bool from_allocation,
                 int rounds, const RateArgs& rate_args, double target, std::uint64_t trials,
                 std::uint64_t seed, const std::string& decision, harq::IrThresholdMode ir_mode,
                 int workers, const std::string& format) {
    const harq::Rate rate = rate_args.resolve();
    if (from_allocation) {
        const harq::AllocationRequest req{protocol, rounds, rate, target, ir_mode};
        powers = harq::allocate(req).powers;
    }
    if (powers.empty()) {
        std::cerr << "give --powers or --from-allocation\n";
        return 2;
    }
    harq::SimulationOptions opts;
    opts.ir_mode = ir_mode;
    opts.workers = workers;
    if (decision == "exact") {
        opts.decision = harq::DecisionRule::Exact;
    } else if (decision == "asymptotic") {
        opts.decision = harq::DecisionRule::Asymptotic;
    } else if (decision == "fbl") {
        opts.decision = harq::DecisionRule::Fbl;
        if (rate_args.blocklength <= 0) {
            std::cerr << "--decision fbl requires --blocklength and --nats\n";
            return 2;
        }
        opts.blocklength = harq::BlocklengthSpec(rate_args.blocklength, rate_args.nats);
    } else {
        std::cerr << "--decision must be exact|asymptotic|fbl\n";
        return 2;
    }

    const auto report = harq::run_monte_carlo(protocol, powers, rate, trials, seed, opts);
    const auto cmp = harq::empirical_power_metrics(report, protocol, powers, rate, ir_mode);
    const double analytic_pdp = harq::pdp(protocol, powers, rate, ir_mode);

    if (format == "json") {
        json j;
        j["protocol"] = harq::protocol_name(protocol);
        j["powers"] = powers;
        j["rate"] = rate.nats_per_use;
        j["trials"] = report.trials;
        j["seed"] = report.seed;
        j["drops"] = report.drops;
        j["empirical_pdp"] = report.empirical_pdp;
        j["pdp_ci_halfwidth"] = report.pdp_ci_halfwidth;
        j["mean_consumed_power"] = report.mean_consumed_power;
        j["mean_rounds"] = report.mean_rounds;
        j["analytic_pdp_closed_form"] = analytic_pdp;
        j["analytic_avg_power"] = cmp.analytic_avg;
        j["avg_power_relative_gap"] = cmp.relative_gap;
        std::cout << json_dump(j);
    } else {
        std::printf("trials               %" PRIu64 "  (seed %" PRIu64 ")\n", report.trials,
                    report.seed);
        std::printf("empirical pdp        %.6e +- %.3e (95%%)\n", report.empirical_pdp,
                    report.pdp_ci_halfwidth);
        std::printf("closed-form pdp      %.6e\n", analytic_pdp);
        std::printf("mean consumed power  %.6f (analytic %.6f, gap %+.3f%%)\n",
                    report.mean_consumed_power, cmp.analytic_avg, 100.0 * cmp.relative_gap);
        std::printf("mean rounds          %.6f\n", report.mean_rounds);
    }
    return 0;
}

// ----------------------------------------------------------------- verify

json report_to_json(const harq::VerificationReport& r) {
    json j;
    j["check"] = r.check;
    j["pass"] = r.pass;
    j["worst_deviation"] = r.worst_deviation;
    j["worst_location"] = r.worst_location;
    j["checked"] = r.checked;
    j["skipped"] = r.skipped;
    return j;
}

json suite_psi() {
    json j;
    j["suite"] = "psi";
    double worst = 0.0;
    for (int m = 1; m <= 5; ++m)
        for (double r : {0.5, 1.0, 2.0, 3.0})
            worst = std::max(worst, std::abs(harq::psi_series(m, r) -
                                             harq::psi_convolution_oracle(m, r)));
    const bool anchors = std::abs(harq::psi_series(2, 1.0) - 1.0) < 1e-12 &&
                         std::abs(harq::psi_series(3, 1.0) - (std::exp(1.0) / 2.0 - 1.0)) < 1e-12;
    j["worst_abs_deviation"] = worst;
    j["pass"] = worst <= 1e-8 && anchors;
    return j;
}

json suite_kkt() {
    json j;
    j["suite"] = "kkt";
    bool pass = true;
    double worst = 0.0;
    std::string at;
    for (auto p : {harq::ProtocolKind::ARQ, harq::ProtocolKind::CCHARQ, harq::ProtocolKind::IRHARQ})
        for (int m = 1; m <= 8; ++m)
            for (double r : {0.5, 1.0, 2.0, 3.0})
                for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
                    const harq::AllocationRequest req{p, m, harq::Rate(r), eps,
                                                      harq::IrThresholdMode::PerRoundRate};
                    auto rep = harq::stationarity_check(harq::allocate(req), p, harq::Rate(r));
                    if (rep.worst_deviation > worst) {
                        worst = rep.worst_deviation;
                        at = std::string(harq::protocol_name(p)) + " M=" + std::to_string(m);
                    }
                    pass = pass && rep.pass;
                }
    // negative control: a 5% perturbation must be rejected
    {
        const harq::AllocationRequest req{harq::ProtocolKind::ARQ, 2, harq::Rate(1.0), 1e-5,
                                          harq::IrThresholdMode::PerRoundRate};
        auto sched = harq::allocate(req);
        sched.powers[0] *= 1.05;
        auto rep = harq::stationarity_check(sched, harq::ProtocolKind::ARQ, harq::Rate(1.0));
        j["negative_control_detected"] = !rep.pass;
        pass = pass && !rep.pass;
    }
    j["worst_relative_gradient"] = worst;
    j["worst_location"] = at;
    j["pass"] = pass;
    return j;
}

json suite_oracle() {
    json j;
    j["suite"] = "oracle";
    bool pass = true;
    double worst = 0.0;
    std::string at;
    for (auto p : {harq::ProtocolKind::ARQ, harq::ProtocolKind::CCHARQ, harq::ProtocolKind::IRHARQ})
        for (int m : {2, 3, 4})
            for (double eps : {1e-3, 1e-5, 1e-7})
                for (double r : {1.0, 2.0}) {
                    const harq::Rate rate(r);
                    const harq::AllocationRequest req{p, m, rate, eps,
                                                      harq::IrThresholdMode::PerRoundRate};
                    const auto closed = harq::allocate(req);
                    const auto oracle = harq::numeric_allocation_oracle(p, m, rate, eps);
                    const double a = harq::oracle_avg_power(p, closed.powers, rate);
                    const double b = harq::oracle_avg_power(p, oracle.powers, rate);
                    const double dev = std::abs(a - b) / a;
                    if (dev > worst) {
                        worst = dev;
                        at = std::string(harq::protocol_name(p)) + " M=" + std::to_string(m) +
                             " eps=" + std::to_string(eps);
                    }
                    pass = pass && dev <= 1e-3;
                }
    j["worst_relative_avg_power_gap"] = worst;
    j["worst_location"] = at;
    j["pass"] = pass;
    return j;
}

json suite_monotonic() {
    json j;
    j["suite"] = "monotonic";
    bool pass = true;
    json per;
    for (auto p : {harq::ProtocolKind::ARQ, harq::ProtocolKind::CCHARQ,
                   harq::ProtocolKind::IRHARQ}) {
        auto rep = harq::monotonicity_check(p, {2, 3, 4, 5, 6}, {0.5, 1.0, 2.0, 3.0},
                                            {1e-5, 1e-7, 1e-9});
        per[harq::protocol_name(p)] = report_to_json(rep);
        pass = pass && rep.pass;
    }
    j["protocols"] = per;
    j["pass"] = pass;
    return j;
}

json suite_convexity() {
    json j;
    j["suite"] = "convexity";
    bool pass = true;
    json probes = json::array();
    for (auto p : {harq::ProtocolKind::ARQ, harq::ProtocolKind::CCHARQ,
                   harq::ProtocolKind::IRHARQ})
        for (int m : {2, 4}) {
            auto lin = harq::convexity_probe(p, m, harq::Rate(1.0), 10000);
            auto log = harq::convexity_probe_log_domain(p, m, harq::Rate(1.0), 10000);
            json e;
            e["protocol"] = harq::protocol_name(p);
            e["m"] = m;
            e["linear_domain"] = report_to_json(lin);
            e["log_domain_gp"] = report_to_json(log);
            probes.push_back(e);
            pass = pass && lin.pass && log.pass;
        }
    j["probes"] = probes;
    j["pass"] = pass;
    return j;
}

int cmd_verify(const std::string& suite, const std::string& out_path) {
    json report = json::array();
    if (suite == "psi" || suite == "all") report.push_back(suite_psi());
    if (suite == "kkt" || suite == "all") report.push_back(suite_kkt());
    if (suite == "oracle" || suite == "all") report.push_back(suite_oracle());
    if (suite == "monotonic" || suite == "all") report.push_back(suite_monotonic());
    if (suite == "convexity" || suite == "all") report.push_back(suite_convexity());
    if (report.empty()) {
        std::cerr << "unknown suite: " << suite << "\n";
        return 2;
    }
    bool pass = true;
    for (const auto& s : report) pass = pass && s.at("pass").get<bool>();
    json top;
    top["suites"] = report;
    top["pass"] = pass;
    if (out_path.empty()) {
        std::cout << json_dump(top);
    } else {
        std::ofstream f(out_path, std::ios::binary);
        f << json_dump(top);
    }
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal HARQ retransmission power scheduling"};
    app.require_subcommand(1);
    app.set_config("--config")->configurable(false);
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::string protocol_str = "arq", ir_mode_str = "per-round", format = "text";
    RateArgs rate_args;
    int rounds = 2;
    double target = 1e-5;
    bool normalize = false, strict = false;

    auto add_common = [&](CLI::App* cmd, bool with_target) {
        cmd->add_option("--protocol", protocol_str, "arq|cc|ir");
        cmd->add_option("--rate", rate_args.rate, "coding rate in nats per channel use");
        cmd->add_option("--blocklength", rate_args.blocklength, "channel uses n");
        cmd->add_option("--nats", rate_args.nats, "information nats K");
        cmd->add_option("--ir-threshold", ir_mode_str, "per-round|parent");
        if (with_target) {
            cmd->add_option("--rounds", rounds, "maximum transmissions M");
            cmd->add_option("--target", target, "target packet-drop probability");
        }
    };

    auto* alloc_cmd = app.add_subcommand("allocate", "compute an optimal power schedule");
    add_common(alloc_cmd, true);
    alloc_cmd->add_flag("--normalize-per-transmission", normalize,
                        "report avg power divided by M");
    alloc_cmd->add_flag("--strict", strict, "exit 3 when outside the validity region");
    alloc_cmd->add_option("--format", format, "text|json|csv");

    std::string figure = "fig6", out_path;
    auto* sweep_cmd = app.add_subcommand("sweep", "emit figure-reproduction data");
    sweep_cmd->add_option("--figure", figure, "fig1|fig3|fig4|fig6|fig8");
    sweep_cmd->add_option("--out", out_path, "output file (default stdout)");
    sweep_cmd->add_option("--format", format, "csv|json");
    sweep_cmd->add_flag("--normalize-per-transmission", normalize,
                        "divide avg power by M in sweep rows");

    std::string powers_str, decision = "exact";
    std::uint64_t trials = 1000000, seed = 1;
    int workers = 1;
    bool from_allocation = false;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo over Rayleigh block fading");
    add_common(sim_cmd, true);
    sim_cmd->add_option("--powers", powers_str, "comma-separated linear SNRs");
    sim_cmd->add_flag("--from-allocation", from_allocation,
                      "simulate the allocator's schedule for --rounds/--target");
    sim_cmd->add_option("--trials", trials, "number of trials");
    sim_cmd->add_option("--seed", seed, "RNG seed");
    sim_cmd->add_option("--decision", decision, "exact|asymptotic|fbl");
    sim_cmd->add_option("--workers", workers, "worker threads (result independent of count)");
    sim_cmd->add_option("--format", format, "text|json");

    std::string suite = "all", verify_out;
    auto* verify_cmd = app.add_subcommand("verify", "run numeric verification suites");
    verify_cmd->add_option("--suite", suite, "kkt|convexity|psi|oracle|monotonic|all");
    verify_cmd->add_option("--out", verify_out, "write JSON report to file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (alloc_cmd->parsed())
            return cmd_allocate(parse_protocol(protocol_str), rounds, rate_args, target,
                                parse_ir_mode(ir_mode_str), normalize, strict, format);
        if (sweep_cmd->parsed())
            return cmd_sweep(figure, out_path, format == "text" ? "csv" : format, normalize);
        if (sim_cmd->parsed()) {
            std::vector<double> powers;
            if (!powers_str.empty()) {
                std::stringstream ss(powers_str);
                std::string tok;
                while (std::getline(ss, tok, ',')) powers.push_back(std::stod(tok));
            }
            return cmd_simulate(parse_protocol(protocol_str), powers, from_allocation, rounds,
                                rate_args, target, trials, seed, decision,
                                parse_ir_mode(ir_mode_str), workers, format);
        }
        if (verify_cmd->parsed()) return cmd_verify(suite, verify_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
