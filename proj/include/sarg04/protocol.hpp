#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "sarg04/ratemodel.hpp"
#include "sarg04/rng.hpp"

namespace sarg04 {

/// The four signal polarizations. H/V span the Z basis, P45/M45 the X
/// basis; cross-basis overlap probability is 1/2.
enum class Polarization : int { H = 0, V = 1, P45 = 2, M45 = 3 };

enum class Basis : int { Z = 0, X = 1 };

/// Announcement sets s1..s4; each pairs one Z state with one X state and
/// every polarization belongs to exactly two sets.
enum class AnnouncementSet : int { s1 = 0, s2 = 1, s3 = 2, s4 = 3 };

constexpr Basis basis_of(Polarization p) {
    return static_cast<int>(p) < 2 ? Basis::Z : Basis::X;
}

constexpr Polarization orthogonal(Polarization p) {
    switch (p) {
        case Polarization::H: return Polarization::V;
        case Polarization::V: return Polarization::H;
        case Polarization::P45: return Polarization::M45;
        default: return Polarization::P45;
    }
}

/// |<a|b>|^2 for the four-state set: 1 on the diagonal, 0 for same-basis
/// partners, 1/2 across bases.
constexpr double overlap_probability(Polarization a, Polarization b) {
    if (a == b) return 1.0;
    if (basis_of(a) == basis_of(b)) return 0.0;
    return 0.5;
}

constexpr std::array<Polarization, 2> members(AnnouncementSet s) {
    switch (s) {
        case AnnouncementSet::s1: return {Polarization::H, Polarization::P45};
        case AnnouncementSet::s2: return {Polarization::V, Polarization::P45};
        case AnnouncementSet::s3: return {Polarization::H, Polarization::M45};
        default: return {Polarization::V, Polarization::M45};
    }
}

constexpr bool contains(AnnouncementSet s, Polarization p) {
    const auto m = members(s);
    return m[0] == p || m[1] == p;
}

/// The two sets Alice may announce for a given prepared state.
constexpr std::array<AnnouncementSet, 2> sets_containing(Polarization p) {
    switch (p) {
        case Polarization::H: return {AnnouncementSet::s1, AnnouncementSet::s3};
        case Polarization::V: return {AnnouncementSet::s2, AnnouncementSet::s4};
        case Polarization::P45: return {AnnouncementSet::s1, AnnouncementSet::s2};
        default: return {AnnouncementSet::s3, AnnouncementSet::s4};
    }
}

constexpr std::array<Polarization, 2> basis_states(Basis b) {
    return b == Basis::Z
               ? std::array<Polarization, 2>{Polarization::H, Polarization::V}
               : std::array<Polarization, 2>{Polarization::P45, Polarization::M45};
}

/// Bob's sift decision for one announced pair and one measurement outcome.
struct SiftDecision {
    bool conclusive = false;
    std::optional<Polarization> inferred;
};

/// Conclusive iff the outcome is orthogonal to exactly one member of the
/// announced pair; the inferred state is the other member. Throws
/// ProtocolViolation when the announcement does not contain the sent state
/// or the outcome is not a state of the measured basis.
SiftDecision sift(Polarization sent, AnnouncementSet announced,
                  Basis measured_basis, Polarization outcome);

/// Result of one simulated pulse. n_photons is the emitted photon number,
/// which the simulator knows and the per-n yield estimates condition on.
struct SiftOutcome {
    int n_photons = 0;
    bool detected = false;
    bool dark_count = false;
    bool conclusive = false;
    std::optional<Polarization> inferred_state;
    bool error = false;
};

/// One prepare-transmit-measure-sift round. Draw order (fixed):
/// sent state, announcement, photon number, detection, then either
/// misalignment flip + basis + Born outcome (detected) or dark trigger +
/// basis + uniform outcome (not detected).
SiftOutcome simulate_pulse(RngStream& rng, double mu, double eta,
                           const DetectorParams& det);

struct SimConfig {
    double mu = 0.5;
    double eta = 0.045;
    DetectorParams det;
    std::uint64_t pulses = 1'000'000;
    std::uint64_t seed = 1;
    std::uint64_t batch_size = 1u << 20;  // pulses per RNG substream
    int threads = 1;

    void validate() const;
};

/// Raw tallies; merging batches is plain addition.
struct SimCounts {
    std::uint64_t pulses = 0;
    std::uint64_t detected = 0;
    std::uint64_t dark = 0;
    std::uint64_t conclusive = 0;
    std::uint64_t errors = 0;
    std::array<std::uint64_t, 2> emitted_n{};     // exactly 1 / exactly 2 photons
    std::array<std::uint64_t, 2> conclusive_n{};
    std::array<std::uint64_t, 2> errors_n{};

    SimCounts& operator+=(const SimCounts& other);
    bool operator==(const SimCounts& other) const = default;
};

struct Estimate {
    double value = 0.0;
    double std_err = 0.0;
};

/// Empirical counterparts of the overall gain/QBER and the n=1,2
/// yields/error rates, with binomial standard errors. Ratios with empty
/// denominators are absent rather than NaN.
struct SimEstimates {
    std::uint64_t pulses = 0;
    std::uint64_t seed = 0;
    SimCounts counts;
    Estimate q_mu_hat;
    std::optional<Estimate> e_mu_hat;
    std::array<std::optional<Estimate>, 2> y_n_hat;
    std::array<std::optional<Estimate>, 2> e_n_hat;
};

/// Runs pulses partitioned into fixed-size batches, each on its own
/// substream (see stream_seed). The result is a pure function of
/// (config minus threads): any thread count merges to identical counts.
SimEstimates run_simulation(const SimConfig& config);

/// Single-stream batch kernel, exposed for the parallel-vs-sequential
/// equivalence tests.
SimCounts run_batch(std::uint64_t stream, std::uint64_t pulses, double mu,
                    double eta, const DetectorParams& det);

}  // namespace sarg04
