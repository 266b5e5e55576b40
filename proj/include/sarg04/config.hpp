#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "sarg04/channel.hpp"
#include "sarg04/optimize.hpp"
#include "sarg04/ratemodel.hpp"

namespace sarg04 {

enum class MuMode { fixed, optimized };
enum class SweepAxis { loss_db, distance_km };

/// Everything a CLI run needs. Defaults are the reference operating point
/// (P_dark = 1e-6, eta_Bob = 4.5%, e_det = 0.033, f = 1.22, 70/10 mm
/// apertures, 0.025 mrad divergence); alpha_db_per_km has no default and
/// must be supplied for distance-based evaluation.
struct RunConfig {
    RunConfig();

    ChannelParams channel;
    DetectorParams det;

    double mu = 0.5;
    MuMode mu_mode = MuMode::fixed;
    MuInterval mu_range;

    SweepAxis axis = SweepAxis::loss_db;
    double start = 0.0;
    double stop = 60.0;
    int steps = 61;

    LossConvention loss_convention = LossConvention::exclude_eta_bob;
    double loss_db = 0.0;                 // point evaluation on the loss axis
    std::optional<double> distance_km;    // point evaluation via link geometry

    std::uint64_t pulses = 1'000'000;
    std::uint64_t seed = 1;
    std::uint64_t batch_size = 1u << 20;
    int threads = 1;

    double cutoff_lo_db = 0.0;
    double cutoff_hi_db = 60.0;
    double tol_db = 0.01;

    std::string out = "sweep.csv";

    /// Applies one key=value pair; throws std::invalid_argument for
    /// unknown keys or unparsable values.
    void apply(const std::string& key, const std::string& value);

    /// Transmittance of the configured evaluation point (distance mode
    /// when distance_km is set, loss-dB mode otherwise).
    double evaluation_eta() const;
};

/// Parses the flat key=value format ('#' starts a comment, blank lines
/// ignored) on top of the given defaults. Throws std::invalid_argument
/// with the line number on malformed input.
RunConfig parse_config(std::istream& in, RunConfig defaults = {});
RunConfig parse_config_file(const std::string& path, RunConfig defaults = {});

/// Canonical key=value rendering; parse_config(serialize_config(c))
/// reproduces c exactly.
std::string serialize_config(const RunConfig& config);

std::string to_string(MuMode mode);
std::string to_string(SweepAxis axis);
std::string to_string(LossConvention convention);

}  // namespace sarg04
