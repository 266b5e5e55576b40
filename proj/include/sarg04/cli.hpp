#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sarg04/protocol.hpp"
#include "sarg04/ratemodel.hpp"

namespace sarg04 {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitInvalidInput = 1,
    kExitNumericalFailure = 2,
    kExitValidationFailure = 3,
};

struct ValidationRow {
    std::string name;
    double analytic = 0.0;
    std::optional<double> estimate;  // absent when the denominator is empty
    double null_std_err = 0.0;
    std::optional<double> z;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;

    /// Largest |z| among testable rows (0 when none are testable).
    double max_abs_z() const;
    bool pass(double z_threshold) const;
};

/// Side-by-side comparison of the analytic Q_mu, E_mu, Y_1, Y_2, e_1, e_2
/// against one simulation's estimates. z uses the null-hypothesis binomial
/// standard error sqrt(p (1-p) / N) with p the analytic value; rows whose
/// denominator count is zero carry no z and never fail the report.
ValidationReport build_validation_report(const RateBreakdown& analytic,
                                         const SimEstimates& sim);

/// Whole CLI behind a stream interface so tests can drive it in-process.
/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace sarg04
