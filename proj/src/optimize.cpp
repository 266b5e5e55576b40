#include "sarg04/optimize.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sarg04/channel.hpp"
#include "sarg04/errors.hpp"

namespace sarg04 {

namespace {

constexpr double kInvGolden = 0.6180339887498949;  // 1/phi

double skr_at_mu(double mu, double eta, const DetectorParams& det, long& evals) {
    ++evals;
    return secret_key_rate(SourceParams{mu}, eta, det).skr;
}

}  // namespace

void MuInterval::validate() const {
    if (!(lo > 0.0 && lo < hi && hi <= 2.0))
        throw std::invalid_argument("mu interval must satisfy 0 < lo < hi <= 2");
}

void LossInterval::validate() const {
    if (!(lo_db >= 0.0 && lo_db < hi_db))
        throw std::invalid_argument("loss interval must satisfy 0 <= lo_db < hi_db");
}

double eta_from_loss_db(double loss_db, double eta_bob, LossConvention convention) {
    const double channel = db_to_transmittance(loss_db);
    return convention == LossConvention::include_eta_bob ? channel
                                                         : eta_bob * channel;
}

double eta_bob_db_offset(double eta_bob) { return transmittance_to_db(eta_bob); }

OptimizeResult optimize_mu(double eta, const DetectorParams& det,
                           MuInterval mu_range, double tol, int grid_points) {
    mu_range.validate();
    det.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (grid_points < 3) throw std::invalid_argument("grid_points must be >= 3");

    long evals = 0;

    // Coarse log-spaced scan, endpoints included.
    const double log_lo = std::log(mu_range.lo);
    const double log_hi = std::log(mu_range.hi);
    std::vector<double> mu(grid_points), f(grid_points);
    int best = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double t = static_cast<double>(i) / (grid_points - 1);
        mu[i] = std::exp(log_lo + t * (log_hi - log_lo));
        f[i] = skr_at_mu(mu[i], eta, det, evals);
        if (f[i] > f[best]) best = i;
    }

    // Golden-section refinement on the bracket around the best grid point.
    double a = mu[best > 0 ? best - 1 : 0];
    double b = mu[best < grid_points - 1 ? best + 1 : grid_points - 1];
    double c = b - (b - a) * kInvGolden;
    double d = a + (b - a) * kInvGolden;
    double fc = skr_at_mu(c, eta, det, evals);
    double fd = skr_at_mu(d, eta, det, evals);
    while (b - a > tol * 0.5 * (a + b)) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * kInvGolden;
            fc = skr_at_mu(c, eta, det, evals);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * kInvGolden;
            fd = skr_at_mu(d, eta, det, evals);
        }
    }
    double mu_refined = 0.5 * (a + b);
    // Clamp interval arithmetic drift back into the search range.
    mu_refined = std::min(std::max(mu_refined, mu_range.lo), mu_range.hi);
    const double f_refined = skr_at_mu(mu_refined, eta, det, evals);

    // Fall back to the raw grid argmax if refinement lost the maximum
    // (bracket was not unimodal).
    OptimizeResult result;
    if (f_refined >= f[best]) {
        result.mu_star = mu_refined;
        result.skr_star = f_refined;
    } else {
        result.mu_star = mu[best];
        result.skr_star = f[best];
    }
    result.evaluations = evals;
    return result;
}

CutoffResult find_cutoff_loss(const DetectorParams& det, double eta_bob,
                              LossConvention convention, LossInterval loss_range,
                              MuInterval mu_range, double tol_db) {
    loss_range.validate();
    if (!(eta_bob > 0.0 && eta_bob <= 1.0))
        throw std::invalid_argument("eta_bob must be in (0, 1]");
    if (!(tol_db > 0.0)) throw std::invalid_argument("tol_db must be > 0");

    const auto optimized_skr = [&](double loss_db) {
        return optimize_mu(eta_from_loss_db(loss_db, eta_bob, convention), det,
                           mu_range);
    };

    double lo = loss_range.lo_db;
    double hi = loss_range.hi_db;
    const OptimizeResult at_lo = optimized_skr(lo);
    const OptimizeResult at_hi = optimized_skr(hi);
    if (!(at_lo.skr_star > 0.0) || !(at_hi.skr_star <= 0.0))
        throw NoSignChangeError(at_lo.skr_star, at_hi.skr_star);

    OptimizeResult at_positive = at_lo;
    while (hi - lo > tol_db) {
        const double mid = 0.5 * (lo + hi);
        const OptimizeResult at_mid = optimized_skr(mid);
        if (at_mid.skr_star > 0.0) {
            lo = mid;
            at_positive = at_mid;
        } else {
            hi = mid;
        }
    }

    CutoffResult result;
    result.loss_db_cutoff = 0.5 * (lo + hi);
    result.bracket_width_db = hi - lo;
    result.mu_star_at_cutoff = at_positive.mu_star;
    return result;
}

}  // namespace sarg04
