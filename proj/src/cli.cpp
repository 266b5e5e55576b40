#include "sarg04/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sarg04/channel.hpp"
#include "sarg04/config.hpp"
#include "sarg04/errors.hpp"
#include "sarg04/optimize.hpp"
#include "sarg04/sweep.hpp"

namespace sarg04 {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void print_kv(std::ostream& os, const std::string& key, const std::string& value) {
    os << key;
    for (size_t i = key.size(); i < 26; ++i) os << ' ';
    os << value << '\n';
}

struct PointEvaluation {
    double eta = 0.0;
    double mu = 0.0;
    std::optional<OptimizeResult> optimization;
};

PointEvaluation evaluate_point(const RunConfig& cfg) {
    PointEvaluation point;
    point.eta = cfg.evaluation_eta();
    if (cfg.mu_mode == MuMode::optimized) {
        point.optimization = optimize_mu(point.eta, cfg.det, cfg.mu_range);
        point.mu = point.optimization->mu_star;
    } else {
        point.mu = cfg.mu;
    }
    return point;
}

int cmd_keyrate(const RunConfig& cfg, std::ostream& out) {
    const PointEvaluation point = evaluate_point(cfg);
    const RateBreakdown b =
        secret_key_rate(SourceParams{point.mu}, point.eta, cfg.det);

    out << "SARG04 analytic key rate\n";
    if (point.optimization) {
        print_kv(out, "mu_star", fmt(point.mu));
        print_kv(out, "optimizer_evaluations",
                 std::to_string(point.optimization->evaluations));
    } else {
        print_kv(out, "mu", fmt(point.mu));
    }
    print_kv(out, "eta", fmt(b.eta));
    print_kv(out, "eta_1", fmt(b.eta_1));
    print_kv(out, "eta_2", fmt(b.eta_2));
    print_kv(out, "y_1", fmt(b.y_1));
    print_kv(out, "y_2", fmt(b.y_2));
    print_kv(out, "e_1", fmt(b.e_1));
    print_kv(out, "e_2", fmt(b.e_2));
    print_kv(out, "q_1", fmt(b.q_1));
    print_kv(out, "q_2", fmt(b.q_2));
    print_kv(out, "q_mu", fmt(b.q_mu));
    print_kv(out, "e_mu", fmt(b.e_mu));
    print_kv(out, "skr_raw", fmt(b.skr));
    print_kv(out, "skr_clamped", fmt(b.clamped_skr()));
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    const std::vector<SweepRow> rows = build_sweep(cfg);
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file)
        throw std::invalid_argument("cannot open output path: " + cfg.out);
    write_sweep_csv(file, rows);
    if (!file)
        throw std::invalid_argument("failed writing output path: " + cfg.out);
    out << "wrote " << rows.size() << " rows to " << cfg.out << '\n';
    return kExitOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
    const double eta = cfg.evaluation_eta();
    const OptimizeResult r = optimize_mu(eta, cfg.det, cfg.mu_range);
    out << "SARG04 mean-photon-number optimization\n";
    print_kv(out, "eta", fmt(eta));
    print_kv(out, "mu_star", fmt(r.mu_star));
    print_kv(out, "skr_star", fmt(r.skr_star));
    print_kv(out, "evaluations", std::to_string(r.evaluations));
    return kExitOk;
}

int cmd_cutoff(const RunConfig& cfg, std::ostream& out) {
    const CutoffResult r = find_cutoff_loss(
        cfg.det, cfg.channel.eta_bob, cfg.loss_convention,
        LossInterval{cfg.cutoff_lo_db, cfg.cutoff_hi_db}, cfg.mu_range,
        cfg.tol_db);

    const double offset = eta_bob_db_offset(cfg.channel.eta_bob);
    const bool searched_excl =
        cfg.loss_convention == LossConvention::exclude_eta_bob;
    const double cutoff_excl =
        searched_excl ? r.loss_db_cutoff : r.loss_db_cutoff - offset;
    const double cutoff_incl =
        searched_excl ? r.loss_db_cutoff + offset : r.loss_db_cutoff;

    out << "SARG04 loss-budget cutoff (optimized mu per point)\n";
    print_kv(out, "searched_convention", to_string(cfg.loss_convention));
    print_kv(out, "cutoff_exclude_eta_bob_db", fmt(cutoff_excl));
    print_kv(out, "cutoff_include_eta_bob_db", fmt(cutoff_incl));
    print_kv(out, "eta_bob_db_equivalent", fmt(offset));
    print_kv(out, "bracket_width_db", fmt(r.bracket_width_db));
    print_kv(out, "mu_star_at_cutoff", fmt(r.mu_star_at_cutoff));
    return kExitOk;
}

SimEstimates run_configured_simulation(const RunConfig& cfg, double eta) {
    SimConfig sim;
    sim.mu = cfg.mu;
    sim.eta = eta;
    sim.det = cfg.det;
    sim.pulses = cfg.pulses;
    sim.seed = cfg.seed;
    sim.batch_size = cfg.batch_size;
    sim.threads = cfg.threads;
    return run_simulation(sim);
}

void print_estimate(std::ostream& out, const std::string& name,
                    const std::optional<Estimate>& e) {
    if (e)
        print_kv(out, name, fmt(e->value) + " (std_err " + fmt(e->std_err) + ")");
    else
        print_kv(out, name, "n/a (no samples)");
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const double eta = cfg.evaluation_eta();
    const SimEstimates est = run_configured_simulation(cfg, eta);

    out << "SARG04 Monte Carlo simulation\n";
    print_kv(out, "pulses", std::to_string(est.pulses));
    print_kv(out, "seed", std::to_string(est.seed));
    print_kv(out, "mu", fmt(cfg.mu));
    print_kv(out, "eta", fmt(eta));
    print_kv(out, "detected", std::to_string(est.counts.detected));
    print_kv(out, "dark_counts", std::to_string(est.counts.dark));
    print_kv(out, "conclusive", std::to_string(est.counts.conclusive));
    print_kv(out, "errors", std::to_string(est.counts.errors));
    print_kv(out, "emitted_1", std::to_string(est.counts.emitted_n[0]));
    print_kv(out, "emitted_2", std::to_string(est.counts.emitted_n[1]));
    print_estimate(out, "q_mu_hat", est.q_mu_hat);
    print_estimate(out, "e_mu_hat", est.e_mu_hat);
    print_estimate(out, "y_1_hat", est.y_n_hat[0]);
    print_estimate(out, "y_2_hat", est.y_n_hat[1]);
    print_estimate(out, "e_1_hat", est.e_n_hat[0]);
    print_estimate(out, "e_2_hat", est.e_n_hat[1]);
    return kExitOk;
}

constexpr double kValidateZThreshold = 5.0;
constexpr std::uint64_t kValidateMinPulses = 100'000;

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    if (cfg.pulses < kValidateMinPulses)
        throw std::invalid_argument(
            "validate requires pulses >= 100000; got " + std::to_string(cfg.pulses));

    const double eta = cfg.evaluation_eta();
    const SimEstimates est = run_configured_simulation(cfg, eta);
    const RateBreakdown analytic =
        secret_key_rate(SourceParams{cfg.mu}, eta, cfg.det);
    const ValidationReport report = build_validation_report(analytic, est);

    out << "SARG04 Monte Carlo vs analytic validation\n";
    print_kv(out, "pulses", std::to_string(est.pulses));
    print_kv(out, "seed", std::to_string(est.seed));
    print_kv(out, "mu", fmt(cfg.mu));
    print_kv(out, "eta", fmt(eta));
    out << '\n';
    out << "statistic   analytic            estimate            null_std_err        z\n";
    for (const ValidationRow& row : report.rows) {
        out << row.name;
        for (size_t i = row.name.size(); i < 12; ++i) out << ' ';
        std::string est_text = row.estimate ? fmt(*row.estimate) : "n/a";
        std::string z_text = row.z ? fmt(*row.z) : "n/a";
        out << fmt(row.analytic);
        for (size_t i = fmt(row.analytic).size(); i < 20; ++i) out << ' ';
        out << est_text;
        for (size_t i = est_text.size(); i < 20; ++i) out << ' ';
        out << fmt(row.null_std_err);
        for (size_t i = fmt(row.null_std_err).size(); i < 20; ++i) out << ' ';
        out << z_text << '\n';
    }
    out << '\n';
    const bool pass = report.pass(kValidateZThreshold);
    out << "result: " << (pass ? "PASS" : "FAIL") << " (max |z| = "
        << fmt(report.max_abs_z()) << ", threshold " << fmt(kValidateZThreshold)
        << ")\n";
    return pass ? kExitOk : kExitValidationFailure;
}

const std::vector<std::string> kConfigKeys = {
    "d_r_mm", "d_t_mm", "divergence_mrad", "alpha_db_per_km", "eta_bob",
    "p_dark", "e_det", "f_ec", "mu", "mu_mode", "mu_lo", "mu_hi", "axis",
    "start", "stop", "steps", "loss_convention", "loss_db", "distance_km",
    "pulses", "seed", "batch_size", "threads", "cutoff_lo_db", "cutoff_hi_db",
    "tol_db", "out"};

void add_config_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option_function<std::string>(
           "--config",
           [&cfg](const std::string& path) {
               cfg = parse_config_file(path, std::move(cfg));
           },
           "configuration file (key = value lines, '#' comments)")
        ->option_text("PATH");
    for (const std::string& key : kConfigKeys) {
        cmd->add_option_function<std::string>(
               "--" + key,
               [&cfg, key](const std::string& value) { cfg.apply(key, value); },
               "override config key '" + key + "'")
            ->option_text("VALUE")
            ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
}

}  // namespace

double ValidationReport::max_abs_z() const {
    double worst = 0.0;
    for (const ValidationRow& row : rows)
        if (row.z) worst = std::max(worst, std::abs(*row.z));
    return worst;
}

bool ValidationReport::pass(double z_threshold) const {
    for (const ValidationRow& row : rows)
        if (row.z && !(std::abs(*row.z) <= z_threshold)) return false;
    return true;
}

ValidationReport build_validation_report(const RateBreakdown& analytic,
                                         const SimEstimates& sim) {
    ValidationReport report;
    const auto add = [&report](const std::string& name, double expected,
                               std::uint64_t successes, std::uint64_t trials) {
        ValidationRow row;
        row.name = name;
        row.analytic = expected;
        if (trials > 0) {
            const double hat =
                static_cast<double>(successes) / static_cast<double>(trials);
            row.estimate = hat;
            row.null_std_err =
                std::sqrt(expected * (1.0 - expected) / static_cast<double>(trials));
            if (row.null_std_err > 0.0)
                row.z = (hat - expected) / row.null_std_err;
            else
                row.z = hat == expected
                            ? 0.0
                            : std::numeric_limits<double>::infinity();
        }
        report.rows.push_back(row);
    };

    const SimCounts& c = sim.counts;
    add("q_mu", analytic.q_mu, c.conclusive, c.pulses);
    add("e_mu", analytic.e_mu, c.errors, c.conclusive);
    add("y_1", analytic.y_1, c.conclusive_n[0], c.emitted_n[0]);
    add("y_2", analytic.y_2, c.conclusive_n[1], c.emitted_n[1]);
    add("e_1", analytic.e_1, c.errors_n[0], c.conclusive_n[0]);
    add("e_2", analytic.e_2, c.errors_n[1], c.conclusive_n[1]);
    return report;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"SARG04 free-space secret-key-rate calculator"};
    app.require_subcommand(1);

    int code = kExitOk;
    const struct {
        const char* name;
        const char* description;
        int (*handler)(const RunConfig&, std::ostream&);
    } commands[] = {
        {"keyrate", "evaluate the analytic rate model at one point", cmd_keyrate},
        {"sweep", "evaluate the model over a loss or distance grid (CSV)", cmd_sweep},
        {"optimize", "find the mean photon number maximizing the key rate", cmd_optimize},
        {"cutoff", "bisect the loss budget where the optimized rate reaches zero", cmd_cutoff},
        {"simulate", "pulse-level Monte Carlo of the prepare-measure-sift chain", cmd_simulate},
        {"validate", "Monte Carlo vs analytic z-score comparison", cmd_validate},
    };
    for (const auto& command : commands) {
        CLI::App* sub = app.add_subcommand(command.name, command.description);
        add_config_options(sub, cfg);
        sub->callback([&cfg, &out, &code, handler = command.handler] {
            code = handler(cfg, out);
        });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int cli_code = app.exit(e, out, err);
        return cli_code == 0 ? kExitOk : kExitInvalidInput;
    } catch (const UndefinedRateError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumericalFailure;
    } catch (const NoSignChangeError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumericalFailure;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    }
    return code;
}

}  // namespace sarg04
