#pragma once

#include "sarg04/ratemodel.hpp"

namespace sarg04 {

/// Half-open search interval for the mean photon number, required to sit
/// inside (0, 2].
struct MuInterval {
    double lo = 1e-4;
    double hi = 1.0;

    void validate() const;
};

struct LossInterval {
    double lo_db = 0.0;
    double hi_db = 60.0;

    void validate() const;
};

/// Whether the dB loss axis already contains the receiver efficiency
/// eta_bob or counts channel loss only (eta_bob applied on top).
enum class LossConvention {
    exclude_eta_bob,  // eta = eta_bob * 10^(-loss/10)
    include_eta_bob,  // eta = 10^(-loss/10)
};

struct OptimizeResult {
    double mu_star = 0.0;
    double skr_star = 0.0;
    long evaluations = 0;
};

struct CutoffResult {
    double loss_db_cutoff = 0.0;
    double bracket_width_db = 0.0;
    double mu_star_at_cutoff = 0.0;
};

/// Maximizes the secret key rate over mu at fixed transmittance.
/// Coarse log-spaced scan (grid_points, default 64) followed by
/// golden-section refinement of the bracket around the best grid point;
/// if refinement fails to beat the grid (non-unimodal bracket), the grid
/// argmax is returned instead. tol is relative on mu. Deterministic.
OptimizeResult optimize_mu(double eta, const DetectorParams& det,
                           MuInterval mu_range, double tol = 1e-10,
                           int grid_points = 64);

/// Bisects the dB loss at which the per-point mu-optimized key rate
/// crosses zero. eta at each probe comes from db_to_transmittance under
/// the given convention. Requires a sign change over loss_range
/// (optimized SKR > 0 at lo_db, <= 0 at hi_db), else throws
/// NoSignChangeError with both endpoint rates. Terminates when the
/// bracket is at most tol_db wide; the reported cutoff is the bracket
/// midpoint.
CutoffResult find_cutoff_loss(const DetectorParams& det, double eta_bob,
                              LossConvention convention, LossInterval loss_range,
                              MuInterval mu_range, double tol_db = 0.01);

/// Transmittance for a loss-dB axis value under a convention.
double eta_from_loss_db(double loss_db, double eta_bob, LossConvention convention);

/// dB equivalent of eta_bob, the exact offset between the two cutoff
/// conventions.
double eta_bob_db_offset(double eta_bob);

}  // namespace sarg04
