#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sarg04/config.hpp"

namespace sarg04 {

struct SweepRow {
    double axis_value = 0.0;
    double mu = 0.0;
    RateBreakdown breakdown;
};

/// Evaluates the analytic model on the configured axis grid (linear,
/// endpoints included, ordered by axis value). With mu_mode = optimized,
/// each point carries its own maximizing mu.
std::vector<SweepRow> build_sweep(const RunConfig& config);

/// Fixed CSV schema, one row per grid point, 10 significant digits,
/// newline-terminated rows.
extern const char* const kSweepCsvHeader;
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// %.10g rendering used for every CSV value.
std::string format_csv_value(double v);

}  // namespace sarg04
