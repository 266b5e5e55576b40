#include "sarg04/protocol.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>
#include <vector>

#include "sarg04/errors.hpp"

namespace sarg04 {

SiftDecision sift(Polarization sent, AnnouncementSet announced,
                  Basis measured_basis, Polarization outcome) {
    if (!contains(announced, sent))
        throw ProtocolViolation("announced set does not contain the sent state");
    if (basis_of(outcome) != measured_basis)
        throw ProtocolViolation("outcome is not a state of the measured basis");

    const auto pair = members(announced);
    const bool rules_out_first = overlap_probability(outcome, pair[0]) == 0.0;
    const bool rules_out_second = overlap_probability(outcome, pair[1]) == 0.0;

    SiftDecision decision;
    if (rules_out_first != rules_out_second) {
        decision.conclusive = true;
        decision.inferred = rules_out_first ? pair[1] : pair[0];
    }
    return decision;
}

namespace {

/// Born-rule measurement of a pure polarization state in a basis: the
/// state itself when it lies in the basis, otherwise a fair coin between
/// the two basis states.
Polarization measure(RngStream& rng, Polarization state, Basis basis) {
    if (basis_of(state) == basis) return state;
    const auto states = basis_states(basis);
    return states[rng.bernoulli(0.5) ? 1 : 0];
}

SiftOutcome simulate_pulse_impl(RngStream& rng, double exp_neg_mu, double eta,
                                const DetectorParams& det) {
    SiftOutcome out;

    const auto sent = static_cast<Polarization>(rng.uniform_index(4));
    const AnnouncementSet announced =
        sets_containing(sent)[rng.bernoulli(0.5) ? 1 : 0];

    out.n_photons = rng.poisson(exp_neg_mu);

    Basis bob_basis = Basis::Z;
    Polarization outcome = Polarization::H;
    bool clicked = false;

    if (out.n_photons > 0) {
        // Threshold detector: clicks if any of the n photons survives.
        const double eta_n = 1.0 - std::pow(1.0 - eta, out.n_photons);
        out.detected = rng.bernoulli(eta_n);
    }
    if (out.detected) {
        // Misalignment flips the arriving state to its orthogonal partner.
        const Polarization arriving =
            rng.bernoulli(det.e_det) ? orthogonal(sent) : sent;
        bob_basis = rng.bernoulli(0.5) ? Basis::X : Basis::Z;
        outcome = measure(rng, arriving, bob_basis);
        clicked = true;
    } else if (rng.bernoulli(det.p_dark)) {
        // Dark count: uniformly random outcome in a uniformly chosen basis.
        out.dark_count = true;
        bob_basis = rng.bernoulli(0.5) ? Basis::X : Basis::Z;
        outcome = basis_states(bob_basis)[rng.bernoulli(0.5) ? 1 : 0];
        clicked = true;
    }

    if (clicked) {
        const SiftDecision decision = sift(sent, announced, bob_basis, outcome);
        out.conclusive = decision.conclusive;
        out.inferred_state = decision.inferred;
        out.error = decision.conclusive && decision.inferred != sent;
    }
    return out;
}

Estimate binomial_estimate(std::uint64_t successes, std::uint64_t trials) {
    const double p = static_cast<double>(successes) / static_cast<double>(trials);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

}  // namespace

SiftOutcome simulate_pulse(RngStream& rng, double mu, double eta,
                           const DetectorParams& det) {
    SourceParams{mu}.validate();
    det.validate();
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must be in [0, 1]");
    return simulate_pulse_impl(rng, std::exp(-mu), eta, det);
}

void SimConfig::validate() const {
    SourceParams{mu}.validate();
    det.validate();
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must be in [0, 1]");
    if (pulses < 1) throw std::invalid_argument("pulses must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

SimCounts& SimCounts::operator+=(const SimCounts& other) {
    pulses += other.pulses;
    detected += other.detected;
    dark += other.dark;
    conclusive += other.conclusive;
    errors += other.errors;
    for (int i = 0; i < 2; ++i) {
        emitted_n[i] += other.emitted_n[i];
        conclusive_n[i] += other.conclusive_n[i];
        errors_n[i] += other.errors_n[i];
    }
    return *this;
}

SimCounts run_batch(std::uint64_t stream, std::uint64_t pulses, double mu,
                    double eta, const DetectorParams& det) {
    RngStream rng(stream);
    const double exp_neg_mu = std::exp(-mu);
    SimCounts counts;
    counts.pulses = pulses;
    for (std::uint64_t i = 0; i < pulses; ++i) {
        const SiftOutcome out = simulate_pulse_impl(rng, exp_neg_mu, eta, det);
        counts.detected += out.detected;
        counts.dark += out.dark_count;
        counts.conclusive += out.conclusive;
        counts.errors += out.error;
        if (out.n_photons == 1 || out.n_photons == 2) {
            const int k = out.n_photons - 1;
            ++counts.emitted_n[k];
            counts.conclusive_n[k] += out.conclusive;
            counts.errors_n[k] += out.error;
        }
    }
    return counts;
}

SimEstimates run_simulation(const SimConfig& config) {
    config.validate();

    const std::uint64_t n_batches =
        (config.pulses + config.batch_size - 1) / config.batch_size;
    const auto batch_pulses = [&](std::uint64_t b) {
        return b + 1 < n_batches ? config.batch_size
                                 : config.pulses - b * config.batch_size;
    };
    const auto batch_counts = [&](std::uint64_t b) {
        return run_batch(stream_seed(config.seed, b), batch_pulses(b), config.mu,
                         config.eta, config.det);
    };

    SimCounts total;
    if (config.threads == 1 || n_batches == 1) {
        for (std::uint64_t b = 0; b < n_batches; ++b) total += batch_counts(b);
    } else {
        // Static round-robin schedule; merge order is irrelevant because
        // merging is integer addition, but keep it by batch index anyway.
        const int workers = static_cast<int>(
            std::min<std::uint64_t>(config.threads, n_batches));
        std::vector<SimCounts> per_batch(n_batches);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t b = w; b < n_batches; b += workers)
                    per_batch[b] = batch_counts(b);
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& c : per_batch) total += c;
    }

    SimEstimates est;
    est.pulses = config.pulses;
    est.seed = config.seed;
    est.counts = total;
    est.q_mu_hat = binomial_estimate(total.conclusive, total.pulses);
    if (total.conclusive > 0)
        est.e_mu_hat = binomial_estimate(total.errors, total.conclusive);
    for (int k = 0; k < 2; ++k) {
        if (total.emitted_n[k] > 0)
            est.y_n_hat[k] = binomial_estimate(total.conclusive_n[k], total.emitted_n[k]);
        if (total.conclusive_n[k] > 0)
            est.e_n_hat[k] = binomial_estimate(total.errors_n[k], total.conclusive_n[k]);
    }
    return est;
}

}  // namespace sarg04
