#pragma once

#include <stdexcept>
#include <string>

namespace sarg04 {

/// A rate denominator (Y_n or Q_mu) vanished, so the conditional error
/// rate is undefined. Only reachable with p_dark = 0 and zero transmittance.
class UndefinedRateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Sift called with an announcement set that does not contain the sent
/// state, or with a measurement record whose outcome is not in the
/// measured basis.
class ProtocolViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Bisection bracket has no sign change; carries the secret-key rates
/// observed at both endpoints for diagnostics.
class NoSignChangeError : public std::runtime_error {
public:
    NoSignChangeError(double skr_low, double skr_high)
        : std::runtime_error("no sign change in bracket: skr(low)=" +
                             std::to_string(skr_low) +
                             ", skr(high)=" + std::to_string(skr_high)),
          skr_low(skr_low),
          skr_high(skr_high) {}

    double skr_low;
    double skr_high;
};

}  // namespace sarg04
