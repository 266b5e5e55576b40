#pragma once

namespace sarg04 {

/// Free-space link description. Apertures in mm, full beam divergence in
/// mrad, atmospheric attenuation in dB/km, receiver-side optical+detector
/// efficiency as a fraction.
struct ChannelParams {
    double d_r_mm = 70.0;
    double d_t_mm = 10.0;
    double divergence_mrad = 0.025;
    double alpha_db_per_km = 0.0;
    double eta_bob = 0.045;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct LinkPoint {
    double distance_km = 0.0;

    void validate() const;
};

/// Squared aperture-ratio term of the link transmittance:
/// (d_r / (d_t + D*L))^2 with the beam spread D*L in mm
/// (mrad * km = m, times 1000). Clamped to 1 by default since a passive
/// link cannot amplify; pass clamp=false for the raw formula value.
double geometric_factor(const ChannelParams& ch, LinkPoint link, bool clamp = true);

/// exp(-alpha_natural * L) with alpha_natural = alpha_db_per_km * ln(10)/10.
double atmospheric_factor(const ChannelParams& ch, LinkPoint link);

/// Overall single-photon transmittance eta = eta_bob * geometric * atmospheric.
double overall_transmittance(const ChannelParams& ch, LinkPoint link);

/// n-photon transmittance 1 - (1 - eta)^n. Rejects n < 1; no vacuum
/// transmittance is defined.
double n_photon_transmittance(double eta, int n);

/// Loss in dB: -10*log10(eta). eta = 0 maps to +infinity, never a throw.
double transmittance_to_db(double eta);

/// Inverse of transmittance_to_db; requires loss_db >= 0.
double db_to_transmittance(double loss_db);

}  // namespace sarg04
