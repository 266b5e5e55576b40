#pragma once

#include <algorithm>

namespace sarg04 {

/// Weak coherent pulse source: mu is the Poisson mean photon number.
struct SourceParams {
    double mu = 0.5;

    void validate() const;
};

/// Detector-side model: dark-count probability per gate, misalignment
/// error probability, and error-correction inefficiency factor.
struct DetectorParams {
    double p_dark = 1e-6;
    double e_det = 0.033;
    double f_ec = 1.22;

    void validate() const;
};

/// Every intermediate quantity of one key-rate evaluation. skr carries the
/// raw value, which goes negative past the loss cutoff.
struct RateBreakdown {
    double eta = 0.0;
    double eta_1 = 0.0;
    double eta_2 = 0.0;
    double y_1 = 0.0;
    double y_2 = 0.0;
    double e_1 = 0.0;
    double e_2 = 0.0;
    double q_1 = 0.0;
    double q_2 = 0.0;
    double q_mu = 0.0;
    double e_mu = 0.0;
    double skr = 0.0;

    double clamped_skr() const { return std::max(0.0, skr); }
};

/// Poisson pmf e^(-mu) mu^n / n!, evaluated in log space so it stays
/// stable out to n ~ 50.
double poisson_pn(double mu, int n);

/// Shannon binary entropy in bits, with H(0) = H(1) = 0 taken as limits.
/// Rejects x outside [0, 1].
double binary_entropy(double x);

/// Conditional detection probability given an n-photon emission:
/// Y_n = eta_n (e_det/2 + 1/4) + (1 - eta_n) p_dark / 2.
double yield_n(double eta_n, const DetectorParams& det);

/// n-photon bit error rate:
/// e_n = [eta_n e_det/2 + (1 - eta_n) p_dark/4] / Y_n.
/// Throws UndefinedRateError when Y_n vanishes.
double error_n(double eta_n, const DetectorParams& det);

/// n-photon gain Q_n = Y_n * poisson_pn(mu, n).
double gain_n(const SourceParams& src, int n, double y_n);

/// Overall gain Q_mu = p_dark/2 e^(-eta mu) + (e_det/2 + 1/4)(1 - e^(-eta mu)).
double overall_gain(const SourceParams& src, double eta, const DetectorParams& det);

/// Overall QBER E_mu = [p_dark/4 e^(-eta mu) + e_det/2 (1 - e^(-eta mu))] / Q_mu.
/// Throws UndefinedRateError when Q_mu vanishes.
double overall_qber(const SourceParams& src, double eta, const DetectorParams& det);

/// Full pipeline for the single- and two-photon key rate:
/// skr = -Q_mu f H2(E_mu) + Q_1 [1 - H2(e_1)] + Q_2 [1 - H2(e_2)].
RateBreakdown secret_key_rate(const SourceParams& src, double eta,
                              const DetectorParams& det);

}  // namespace sarg04
