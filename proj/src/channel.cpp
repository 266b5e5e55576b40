#include "sarg04/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sarg04 {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

constexpr double kLn10Over10 = 0.23025850929940457;  // ln(10)/10

}  // namespace

void ChannelParams::validate() const {
    require(d_r_mm > 0.0, "d_r_mm must be > 0");
    require(d_t_mm > 0.0, "d_t_mm must be > 0");
    require(divergence_mrad >= 0.0, "divergence_mrad must be >= 0");
    require(alpha_db_per_km >= 0.0, "alpha_db_per_km must be >= 0");
    require(eta_bob > 0.0 && eta_bob <= 1.0, "eta_bob must be in (0, 1]");
}

void LinkPoint::validate() const {
    require(distance_km >= 0.0, "distance_km must be >= 0");
}

double geometric_factor(const ChannelParams& ch, LinkPoint link, bool clamp) {
    ch.validate();
    link.validate();
    // mrad * km = m; apertures are in mm.
    const double spread_mm = ch.divergence_mrad * link.distance_km * 1000.0;
    const double ratio = ch.d_r_mm / (ch.d_t_mm + spread_mm);
    const double raw = ratio * ratio;
    return clamp ? std::min(1.0, raw) : raw;
}

double atmospheric_factor(const ChannelParams& ch, LinkPoint link) {
    ch.validate();
    link.validate();
    return std::exp(-ch.alpha_db_per_km * kLn10Over10 * link.distance_km);
}

double overall_transmittance(const ChannelParams& ch, LinkPoint link) {
    return ch.eta_bob * geometric_factor(ch, link) * atmospheric_factor(ch, link);
}

double n_photon_transmittance(double eta, int n) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must be in [0, 1]");
    if (n < 1)
        throw std::invalid_argument("n must be >= 1; no vacuum transmittance is defined");
    if (n == 1) return eta;
    return 1.0 - std::pow(1.0 - eta, n);
}

double transmittance_to_db(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must be in [0, 1]");
    if (eta == 0.0) return std::numeric_limits<double>::infinity();
    return -10.0 * std::log10(eta);
}

double db_to_transmittance(double loss_db) {
    if (!(loss_db >= 0.0))
        throw std::invalid_argument("loss_db must be >= 0");
    return std::pow(10.0, -loss_db / 10.0);
}

}  // namespace sarg04
