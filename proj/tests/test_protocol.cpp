#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "sarg04/errors.hpp"
#include "sarg04/protocol.hpp"

using namespace sarg04;

namespace {

const DetectorParams kPaperDetector{1e-6, 0.033, 1.22};

struct SiftTableRow {
    Polarization sent;
    AnnouncementSet announced;
    Basis basis;
    Polarization outcome;
    bool conclusive;
    std::optional<Polarization> inferred;
    bool error;
};

// Frozen output of an independent enumeration of the sifting rule
// (announced pair member is ruled out iff its overlap probability with the
// outcome vanishes), one row per valid combination.
const SiftTableRow kSiftTable[] = {
    {Polarization::H, AnnouncementSet::s1, Basis::Z, Polarization::H, false, std::nullopt, false},
    {Polarization::H, AnnouncementSet::s1, Basis::Z, Polarization::V, true, Polarization::P45, true},
    {Polarization::H, AnnouncementSet::s1, Basis::X, Polarization::P45, false, std::nullopt, false},
    {Polarization::H, AnnouncementSet::s1, Basis::X, Polarization::M45, true, Polarization::H, false},
    {Polarization::H, AnnouncementSet::s3, Basis::Z, Polarization::H, false, std::nullopt, false},
    {Polarization::H, AnnouncementSet::s3, Basis::Z, Polarization::V, true, Polarization::M45, true},
    {Polarization::H, AnnouncementSet::s3, Basis::X, Polarization::P45, true, Polarization::H, false},
    {Polarization::H, AnnouncementSet::s3, Basis::X, Polarization::M45, false, std::nullopt, false},
    {Polarization::V, AnnouncementSet::s2, Basis::Z, Polarization::H, true, Polarization::P45, true},
    {Polarization::V, AnnouncementSet::s2, Basis::Z, Polarization::V, false, std::nullopt, false},
    {Polarization::V, AnnouncementSet::s2, Basis::X, Polarization::P45, false, std::nullopt, false},
    {Polarization::V, AnnouncementSet::s2, Basis::X, Polarization::M45, true, Polarization::V, false},
    {Polarization::V, AnnouncementSet::s4, Basis::Z, Polarization::H, true, Polarization::M45, true},
    {Polarization::V, AnnouncementSet::s4, Basis::Z, Polarization::V, false, std::nullopt, false},
    {Polarization::V, AnnouncementSet::s4, Basis::X, Polarization::P45, true, Polarization::V, false},
    {Polarization::V, AnnouncementSet::s4, Basis::X, Polarization::M45, false, std::nullopt, false},
    {Polarization::P45, AnnouncementSet::s1, Basis::Z, Polarization::H, false, std::nullopt, false},
    {Polarization::P45, AnnouncementSet::s1, Basis::Z, Polarization::V, true, Polarization::P45, false},
    {Polarization::P45, AnnouncementSet::s1, Basis::X, Polarization::P45, false, std::nullopt, false},
    {Polarization::P45, AnnouncementSet::s1, Basis::X, Polarization::M45, true, Polarization::H, true},
    {Polarization::P45, AnnouncementSet::s2, Basis::Z, Polarization::H, true, Polarization::P45, false},
    {Polarization::P45, AnnouncementSet::s2, Basis::Z, Polarization::V, false, std::nullopt, false},
    {Polarization::P45, AnnouncementSet::s2, Basis::X, Polarization::P45, false, std::nullopt, false},
    {Polarization::P45, AnnouncementSet::s2, Basis::X, Polarization::M45, true, Polarization::V, true},
    {Polarization::M45, AnnouncementSet::s3, Basis::Z, Polarization::H, false, std::nullopt, false},
    {Polarization::M45, AnnouncementSet::s3, Basis::Z, Polarization::V, true, Polarization::M45, false},
    {Polarization::M45, AnnouncementSet::s3, Basis::X, Polarization::P45, true, Polarization::H, true},
    {Polarization::M45, AnnouncementSet::s3, Basis::X, Polarization::M45, false, std::nullopt, false},
    {Polarization::M45, AnnouncementSet::s4, Basis::Z, Polarization::H, true, Polarization::M45, false},
    {Polarization::M45, AnnouncementSet::s4, Basis::Z, Polarization::V, false, std::nullopt, false},
    {Polarization::M45, AnnouncementSet::s4, Basis::X, Polarization::P45, true, Polarization::V, true},
    {Polarization::M45, AnnouncementSet::s4, Basis::X, Polarization::M45, false, std::nullopt, false},
};

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("state geometry") {
    CHECK(basis_of(Polarization::H) == Basis::Z);
    CHECK(basis_of(Polarization::M45) == Basis::X);
    CHECK(orthogonal(Polarization::H) == Polarization::V);
    CHECK(orthogonal(Polarization::P45) == Polarization::M45);
    CHECK(overlap_probability(Polarization::H, Polarization::H) == 1.0);
    CHECK(overlap_probability(Polarization::H, Polarization::V) == 0.0);
    CHECK(overlap_probability(Polarization::H, Polarization::P45) == 0.5);

    // every polarization belongs to exactly two announcement sets
    for (int p = 0; p < 4; ++p) {
        const auto state = static_cast<Polarization>(p);
        int member_count = 0;
        for (int s = 0; s < 4; ++s)
            member_count += contains(static_cast<AnnouncementSet>(s), state);
        CHECK(member_count == 2);
        for (AnnouncementSet s : sets_containing(state)) CHECK(contains(s, state));
    }
}

TEST_CASE("sift matches the frozen truth table on every valid combination") {
    int checked = 0;
    for (const SiftTableRow& row : kSiftTable) {
        const SiftDecision d = sift(row.sent, row.announced, row.basis, row.outcome);
        CHECK(d.conclusive == row.conclusive);
        CHECK(d.inferred == row.inferred);
        if (d.conclusive)
            CHECK((d.inferred != row.sent) == row.error);
        ++checked;
    }
    CHECK(checked == 32);
}

TEST_CASE("sift examples") {
    // outcome orthogonal to one member rules it out and infers the other
    const SiftDecision a =
        sift(Polarization::H, AnnouncementSet::s1, Basis::X, Polarization::M45);
    CHECK(a.conclusive);
    CHECK(a.inferred == Polarization::H);

    // outcome compatible with both members is inconclusive
    const SiftDecision b =
        sift(Polarization::H, AnnouncementSet::s1, Basis::Z, Polarization::H);
    CHECK_FALSE(b.conclusive);
    CHECK(!b.inferred.has_value());

    // orthogonal outcome in the sender's own basis infers the wrong member
    const SiftDecision c =
        sift(Polarization::H, AnnouncementSet::s1, Basis::Z, Polarization::V);
    CHECK(c.conclusive);
    CHECK(c.inferred == Polarization::P45);
}

TEST_CASE("sift rejects inconsistent records") {
    CHECK_THROWS_AS(sift(Polarization::H, AnnouncementSet::s2, Basis::Z, Polarization::H),
                    ProtocolViolation);
    CHECK_THROWS_AS(sift(Polarization::H, AnnouncementSet::s1, Basis::Z, Polarization::P45),
                    ProtocolViolation);
}

TEST_CASE("stream seeding is stable") {
    CHECK(stream_seed(1, 0) == 10451216379200822465ULL);
    CHECK(stream_seed(1, 1) == 13757245211066428519ULL);
    CHECK(stream_seed(12345, 7) == 7959005890829367068ULL);
}

TEST_CASE("pulse outcomes satisfy the structural invariants") {
    RngStream rng(99);
    DetectorParams det{1e-3, 0.1, 1.22};
    int conclusive_seen = 0;
    for (int i = 0; i < 20000; ++i) {
        const SiftOutcome out = simulate_pulse(rng, 0.8, 0.3, det);
        if (out.conclusive) {
            CHECK((out.detected || out.dark_count));
            CHECK(out.inferred_state.has_value());
            ++conclusive_seen;
        } else {
            CHECK(!out.inferred_state.has_value());
            CHECK_FALSE(out.error);
        }
        if (out.error) CHECK(out.conclusive);
        CHECK_FALSE((out.detected && out.dark_count));
        CHECK(out.n_photons >= 0);
    }
    CHECK(conclusive_seen > 0);
}

TEST_CASE("dead channel never clicks") {
    SimConfig cfg;
    cfg.mu = 0.5;
    cfg.eta = 0.0;
    cfg.det = DetectorParams{0.0, 0.033, 1.22};
    cfg.pulses = 50000;
    cfg.seed = 7;
    const SimEstimates est = run_simulation(cfg);
    CHECK(est.counts.detected == 0);
    CHECK(est.counts.conclusive == 0);
    CHECK(est.q_mu_hat.value == 0.0);
    CHECK(!est.e_mu_hat.has_value());
    CHECK(est.counts.pulses == 50000);
}

TEST_CASE("ideal channel: quarter conclusive, zero errors") {
    SimConfig cfg;
    cfg.mu = 30.0;  // effectively always >= 1 photon
    cfg.eta = 1.0;
    cfg.det = DetectorParams{0.0, 0.0, 1.0};
    cfg.pulses = 200000;
    cfg.seed = 11;
    const SimEstimates est = run_simulation(cfg);
    const double se = std::sqrt(0.25 * 0.75 / static_cast<double>(cfg.pulses));
    CHECK(std::abs(est.q_mu_hat.value - 0.25) <= 5.0 * se);
    CHECK(est.counts.errors == 0);
}

TEST_CASE("dark-only channel gives a half error rate") {
    SimConfig cfg;
    cfg.mu = 0.5;
    cfg.eta = 0.0;
    cfg.det = DetectorParams{1e-3, 0.033, 1.22};
    cfg.pulses = 1'000'000;
    cfg.seed = 3;
    const SimEstimates est = run_simulation(cfg);
    REQUIRE(est.e_mu_hat.has_value());
    const double n = static_cast<double>(est.counts.conclusive);
    CHECK(std::abs(est.e_mu_hat->value - 0.5) <= 5.0 * std::sqrt(0.25 / n));
    // conclusive-given-dark is 1/2
    const double p = 0.5e-3;
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(cfg.pulses));
    CHECK(std::abs(est.q_mu_hat.value - p) <= 5.0 * se);
}

TEST_CASE("estimates converge to the analytic model at the reference point") {
    SimConfig cfg;
    cfg.mu = 0.5;
    cfg.eta = 0.045;
    cfg.det = kPaperDetector;
    cfg.pulses = 1'000'000;
    cfg.seed = 20240901;
    const SimEstimates est = run_simulation(cfg);

    const auto z = [](double hat, double p, double n) {
        return std::abs(hat - p) / std::sqrt(p * (1.0 - p) / n);
    };
    // analytic values pinned by the rate-model tests
    CHECK(z(est.q_mu_hat.value, 0.005929784163594461,
            static_cast<double>(est.counts.pulses)) <= 4.0);
    REQUIRE(est.e_mu_hat.has_value());
    CHECK(z(est.e_mu_hat->value, 0.06194981368370287,
            static_cast<double>(est.counts.conclusive)) <= 4.0);
    REQUIRE(est.y_n_hat[0].has_value());
    CHECK(z(est.y_n_hat[0]->value, 0.0119929775,
            static_cast<double>(est.counts.emitted_n[0])) <= 4.0);
    REQUIRE(est.y_n_hat[1].has_value());
    CHECK(z(est.y_n_hat[1]->value, 0.0234457935125,
            static_cast<double>(est.counts.emitted_n[1])) <= 4.0);
    REQUIRE(est.e_n_hat[0].has_value());
    CHECK(z(est.e_n_hat[0]->value, 0.06193113845164805,
            static_cast<double>(est.counts.conclusive_n[0])) <= 4.0);
    REQUIRE(est.e_n_hat[1].has_value());
    CHECK(z(est.e_n_hat[1]->value, 0.06192221668573394,
            static_cast<double>(est.counts.conclusive_n[1])) <= 4.0);
}

TEST_CASE("fixed seed reproduces bit-identical estimates") {
    SimConfig cfg;
    cfg.mu = 0.4;
    cfg.eta = 0.02;
    cfg.det = kPaperDetector;
    cfg.pulses = 300000;
    cfg.seed = 555;
    cfg.batch_size = 1u << 16;
    const SimEstimates a = run_simulation(cfg);
    const SimEstimates b = run_simulation(cfg);
    CHECK(a.counts == b.counts);
    CHECK(a.q_mu_hat.value == b.q_mu_hat.value);
    CHECK(a.q_mu_hat.std_err == b.q_mu_hat.std_err);

    cfg.seed = 556;
    const SimEstimates c = run_simulation(cfg);
    CHECK(a.counts.conclusive != c.counts.conclusive);
}

TEST_CASE("batch-parallel execution equals sequential execution") {
    SimConfig cfg;
    cfg.mu = 0.5;
    cfg.eta = 0.045;
    cfg.det = kPaperDetector;
    cfg.pulses = 1'000'000;
    cfg.seed = 42;
    cfg.batch_size = 1u << 16;  // forces 16 substreams

    cfg.threads = 1;
    const SimEstimates sequential = run_simulation(cfg);
    cfg.threads = 4;
    const SimEstimates parallel = run_simulation(cfg);
    CHECK(sequential.counts == parallel.counts);

    // merged batches equal one manual pass over the same substreams
    SimCounts manual;
    for (std::uint64_t b = 0; b * cfg.batch_size < cfg.pulses; ++b) {
        const std::uint64_t remaining = cfg.pulses - b * cfg.batch_size;
        manual += run_batch(stream_seed(cfg.seed, b),
                            std::min(cfg.batch_size, remaining), cfg.mu, cfg.eta,
                            cfg.det);
    }
    CHECK(manual == sequential.counts);
}

TEST_CASE("simulation rejects invalid configurations") {
    SimConfig cfg;
    cfg.pulses = 0;
    CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
    cfg.pulses = 10;
    cfg.eta = 1.5;
    CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
    cfg.eta = 0.5;
    cfg.mu = 0.0;
    CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
}

}  // TEST_SUITE
