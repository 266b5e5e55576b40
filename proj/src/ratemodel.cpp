#include "sarg04/ratemodel.hpp"

#include <cmath>
#include <stdexcept>

#include "sarg04/channel.hpp"
#include "sarg04/errors.hpp"

namespace sarg04 {

namespace {

// Probabilities below this are treated as vanished denominators.
constexpr double kProbabilityFloor = 1e-300;

}  // namespace

void SourceParams::validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
}

void DetectorParams::validate() const {
    if (!(p_dark >= 0.0 && p_dark < 1.0))
        throw std::invalid_argument("p_dark must be in [0, 1)");
    if (!(e_det >= 0.0 && e_det < 0.5))
        throw std::invalid_argument("e_det must be in [0, 0.5)");
    if (!(f_ec >= 1.0)) throw std::invalid_argument("f_ec must be >= 1");
}

double poisson_pn(double mu, int n) {
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    return std::exp(-mu + n * std::log(mu) - std::lgamma(n + 1.0));
}

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("binary_entropy argument must be in [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double yield_n(double eta_n, const DetectorParams& det) {
    det.validate();
    if (!(eta_n >= 0.0 && eta_n <= 1.0))
        throw std::invalid_argument("eta_n must be in [0, 1]");
    return eta_n * (det.e_det / 2.0 + 0.25) + (1.0 - eta_n) * det.p_dark * 0.5;
}

double error_n(double eta_n, const DetectorParams& det) {
    const double y = yield_n(eta_n, det);
    if (y < kProbabilityFloor)
        throw UndefinedRateError("Y_n vanished; e_n undefined (p_dark = 0 and eta_n = 0)");
    return (eta_n * det.e_det / 2.0 + (1.0 - eta_n) * det.p_dark * 0.25) / y;
}

double gain_n(const SourceParams& src, int n, double y_n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    return y_n * poisson_pn(src.mu, n);
}

double overall_gain(const SourceParams& src, double eta, const DetectorParams& det) {
    src.validate();
    det.validate();
    const double vac = std::exp(-eta * src.mu);
    return 0.5 * det.p_dark * vac + (det.e_det / 2.0 + 0.25) * (1.0 - vac);
}

double overall_qber(const SourceParams& src, double eta, const DetectorParams& det) {
    const double q = overall_gain(src, eta, det);
    if (q < kProbabilityFloor)
        throw UndefinedRateError("Q_mu vanished; E_mu undefined");
    const double vac = std::exp(-eta * src.mu);
    return (0.25 * det.p_dark * vac + (det.e_det / 2.0) * (1.0 - vac)) / q;
}

RateBreakdown secret_key_rate(const SourceParams& src, double eta,
                              const DetectorParams& det) {
    src.validate();
    det.validate();

    RateBreakdown b;
    b.eta = eta;
    b.eta_1 = n_photon_transmittance(eta, 1);
    b.eta_2 = n_photon_transmittance(eta, 2);
    b.y_1 = yield_n(b.eta_1, det);
    b.y_2 = yield_n(b.eta_2, det);
    b.e_1 = error_n(b.eta_1, det);
    b.e_2 = error_n(b.eta_2, det);
    b.q_1 = gain_n(src, 1, b.y_1);
    b.q_2 = gain_n(src, 2, b.y_2);
    b.q_mu = overall_gain(src, eta, det);
    b.e_mu = overall_qber(src, eta, det);
    b.skr = -b.q_mu * det.f_ec * binary_entropy(b.e_mu) +
            b.q_1 * (1.0 - binary_entropy(b.e_1)) +
            b.q_2 * (1.0 - binary_entropy(b.e_2));
    return b;
}

}  // namespace sarg04
