#include "sarg04/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace sarg04 {

const char* const kSweepCsvHeader =
    "axis,mu,eta,eta_1,eta_2,y_1,y_2,e_1,e_2,q_1,q_2,q_mu,e_mu,skr_raw,skr_clamped";

std::vector<SweepRow> build_sweep(const RunConfig& config) {
    if (!(config.start < config.stop))
        throw std::invalid_argument("sweep requires start < stop");
    if (config.steps < 2) throw std::invalid_argument("sweep requires steps >= 2");
    if (config.axis == SweepAxis::distance_km &&
        std::isnan(config.channel.alpha_db_per_km))
        throw std::invalid_argument(
            "alpha_db_per_km must be set for distance sweeps");
    config.det.validate();

    std::vector<SweepRow> rows;
    rows.reserve(config.steps);
    for (int i = 0; i < config.steps; ++i) {
        const double t = static_cast<double>(i) / (config.steps - 1);
        const double value = config.start + t * (config.stop - config.start);

        double eta = 0.0;
        if (config.axis == SweepAxis::loss_db) {
            eta = eta_from_loss_db(value, config.channel.eta_bob,
                                   config.loss_convention);
        } else {
            eta = overall_transmittance(config.channel, LinkPoint{value});
        }

        SweepRow row;
        row.axis_value = value;
        row.mu = config.mu_mode == MuMode::optimized
                     ? optimize_mu(eta, config.det, config.mu_range).mu_star
                     : config.mu;
        row.breakdown = secret_key_rate(SourceParams{row.mu}, eta, config.det);
        rows.push_back(row);
    }
    return rows;
}

std::string format_csv_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kSweepCsvHeader << '\n';
    for (const SweepRow& row : rows) {
        const RateBreakdown& b = row.breakdown;
        os << format_csv_value(row.axis_value) << ',' << format_csv_value(row.mu)
           << ',' << format_csv_value(b.eta) << ',' << format_csv_value(b.eta_1)
           << ',' << format_csv_value(b.eta_2) << ',' << format_csv_value(b.y_1)
           << ',' << format_csv_value(b.y_2) << ',' << format_csv_value(b.e_1)
           << ',' << format_csv_value(b.e_2) << ',' << format_csv_value(b.q_1)
           << ',' << format_csv_value(b.q_2) << ',' << format_csv_value(b.q_mu)
           << ',' << format_csv_value(b.e_mu) << ',' << format_csv_value(b.skr)
           << ',' << format_csv_value(b.clamped_skr()) << '\n';
    }
}

}  // namespace sarg04
