#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gsl/gsl_sf_bessel.h>

#include <cmath>
#include <complex>

#include "uavcov/coverage.hpp"
#include "uavcov/quad.hpp"
#include "uavcov/rng.hpp"

using namespace uavcov;
using quad::cplx;

namespace {

NetworkParams table_params() { return NetworkParams::defaults(); }

NetworkParams no_interference() {
    auto p = table_params();
    p.g_t_min = 0.0;
    p.g_r_min = 0.0;
    return p;
}

MobilityState still_at(double t = 0.0) { return {MobilityScheme::Scheme2, 40.0, t}; }

// CCDF of the normalised Rician power gain by direct quadrature of the
// noncentral density; independent of the inversion path under test
double rician_ccdf_oracle(double k_factor, double z) {
    if (z <= 0.0) return 1.0;
    if (k_factor == 0.0) return std::exp(-z);
    auto dens = [&](double u) {
        const double arg = 2.0 * std::sqrt(k_factor * (k_factor + 1.0) * u);
        return (k_factor + 1.0) * std::exp(-k_factor - (k_factor + 1.0) * u + arg) *
               gsl_sf_bessel_I0_scaled(arg);
    };
    return quad::integrate_semi_infinite(dens, z, quad::Spec(1e-12, 1e-12), 1.0).value;
}

// Monte-Carlo coverage of the second hop with the serving RN pinned at a
// fixed initial distance: interfering RNs as a PPP beyond the exclusion
// radius, LoS and fading drawn per interferer.
struct PinnedEstimate {
    double value;
    double half_width;
};

PinnedEstimate pinned_rd_cp(const NetworkParams& p, double r0, double t, double beta,
                            bool force_los, bool mix_los, int n_samples, uint64_t seed) {
    const double v = 40.0;
    const double moved = serving_rn_distance(r0, v, t);
    const double r_max = 60e3;
    const double g_t = beamforming_gain(LinkKind::RD, GainRole::Target, p);
    const double g_i = beamforming_gain(LinkKind::RD, GainRole::Interference, p);
    int64_t hits = 0;
    for (int i = 0; i < n_samples; ++i) {
        RngStream rng(derive_seed(seed, 0xBEE5, static_cast<uint64_t>(i)));
        // serving link
        const auto pl = path_loss(LinkKind::RD, p, moved);
        bool los = force_los;
        if (mix_los) los = rng.uniform() < los_probability(LinkKind::RD, p, moved);
        const double k =
            p.rician.k(PropagationClass::A2G, los ? LosState::Los : LosState::Nlos, moved);
        const double signal = p.p_r * g_t * rng.rician_power(k) / (los ? pl.los : pl.nlos);
        // interferers: hole of radius r0 at t = 0 (static case used here)
        const double lam = p.lambda_r;
        const int n = rng.poisson(lam * M_PI * (r_max * r_max - r0 * r0));
        double interference = 0.0;
        for (int j = 0; j < n; ++j) {
            const double r = std::sqrt(r0 * r0 + (r_max * r_max - r0 * r0) * rng.uniform());
            const bool jl = rng.uniform() < los_probability(LinkKind::RD, p, r);
            const double kj =
                p.rician.k(PropagationClass::A2G, jl ? LosState::Los : LosState::Nlos, r);
            const auto plj = path_loss(LinkKind::RD, p, r);
            interference += p.p_r * g_i * rng.rician_power(kj) / (jl ? plj.los : plj.nlos);
        }
        const double sinr = signal / (interference + p.sigma2);
        if (sinr >= beta) hits++;
    }
    const double v_hat = static_cast<double>(hits) / n_samples;
    return {v_hat, 1.96 * std::sqrt(v_hat * (1.0 - v_hat) / n_samples)};
}

}  // namespace

TEST_CASE("interference transform trivial points") {
    auto p = table_params();
    CHECK(interference_lt(LinkKind::SD, p, still_at(), 1000.0, cplx{}) == cplx{1.0, 0.0});

    // empty interferer set via vanishing density
    auto thin = table_params();
    thin.lambda_r = 1e-30;
    const auto lt = interference_lt(LinkKind::RD, thin, still_at(), 500.0, cplx{0.0, 3e8});
    CHECK(std::abs(lt - cplx{1.0, 0.0}) < 1e-9);
}

TEST_CASE("interference transform has modulus at most one on the imaginary axis") {
    auto p = table_params();
    for (double w : {1e6, 1e8, 1e10}) {
        for (auto link : {LinkKind::SD, LinkKind::SR, LinkKind::RD}) {
            const auto lt = interference_lt(link, p, still_at(), 1200.0, cplx{0.0, w});
            CHECK(std::abs(lt) <= 1.0 + 1e-10);
        }
    }
}

TEST_CASE("interference-free coverage matches the exponential tail") {
    auto p = no_interference();
    for (double r : {500.0, 1500.0, 3000.0}) {
        for (double beta : {0.1, 1.0, 5.0}) {
            const double loss = path_loss(LinkKind::SD, p, r).nlos;
            const double z = beta * p.sigma2 * loss /
                             (p.p_t * beamforming_gain(LinkKind::SD, GainRole::Target, p));
            const double expected = std::exp(-z);
            const double got = conditional_cp(LinkKind::SD, LosState::Nlos, r, beta, p,
                                              still_at(), CoverageSpecs::tight());
            CHECK(std::abs(got - expected) < 1e-6);
        }
    }
}

TEST_CASE("interference-free coverage matches the noncentral tail for k=10") {
    auto p = no_interference();
    for (double r : {6000.0, 12000.0, 20000.0}) {
        for (double beta : {0.5, 2.0, 8.0}) {
            const double loss = path_loss(LinkKind::SD, p, r).los;
            const double z = beta * p.sigma2 * loss /
                             (p.p_t * beamforming_gain(LinkKind::SD, GainRole::Target, p));
            const double expected = rician_ccdf_oracle(10.0, z);
            const double got = conditional_cp(LinkKind::SD, LosState::Los, r, beta, p,
                                              still_at(), CoverageSpecs::tight());
            CHECK(std::abs(got - expected) < 1e-5);
        }
    }
}

TEST_CASE("coverage approaches one as the threshold vanishes") {
    auto p = table_params();
    p.h_r = 500.0;
    const double cp = conditional_cp(LinkKind::RD, LosState::Los, 800.0, 1e-9, p, still_at());
    CHECK(cp == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("degenerate mixture reduces to the single-state coverage") {
    auto p = table_params();
    // below the near-field distance the ground link is in LoS surely
    REQUIRE(los_probability(LinkKind::SD, p, 10.0) == 1.0);
    const double mixed = link_cp(LinkKind::SD, 10.0, 1.0, p, still_at());
    const double pure = conditional_cp(LinkKind::SD, LosState::Los, 10.0, 1.0, p, still_at());
    CHECK(mixed == pure);
}

TEST_CASE("mixture equals the probability-weighted states") {
    auto p = table_params();
    p.h_r = 1000.0;
    const double r = 900.0;
    const double beta = 1.0;
    const double pl = los_probability(LinkKind::RD, p, r);
    const double mixed = link_cp(LinkKind::RD, r, beta, p, still_at());
    const double split =
        pl * conditional_cp(LinkKind::RD, LosState::Los, r, beta, p, still_at()) +
        (1.0 - pl) * conditional_cp(LinkKind::RD, LosState::Nlos, r, beta, p, still_at());
    CHECK(mixed == doctest::Approx(split).epsilon(1e-6));
}

TEST_CASE("second-hop coverage against a pinned monte-carlo sampler") {
    auto p = table_params();
    p.h_r = 1000.0;
    const double beta = 1.0;

    const double analytic_los =
        conditional_cp(LinkKind::RD, LosState::Los, 1000.0, beta, p, still_at());
    const auto mc_los = pinned_rd_cp(p, 1000.0, 0.0, beta, true, false, 20000, 7);
    CHECK(std::abs(analytic_los - mc_los.value) < 3.0 * mc_los.half_width);

    const double analytic_mix = link_cp(LinkKind::RD, 500.0, beta, p, still_at());
    const auto mc_mix = pinned_rd_cp(p, 500.0, 0.0, beta, false, true, 20000, 11);
    CHECK(std::abs(analytic_mix - mc_mix.value) < 3.0 * mc_mix.half_width);
}

TEST_CASE("region terms are consistent with the association split") {
    auto p = table_params();
    p.h_r = 500.0;
    for (double t : {0.0, 60.0}) {
        const auto m = still_at(t);
        const auto breakdown = total_cp(p, 1e-9, m);
        CHECK(breakdown.total() == doctest::Approx(1.0).epsilon(1e-3));
        const double relay_share = breakdown.i_srd_a + breakdown.i_srd_b;
        CHECK(relay_share ==
              doctest::Approx(relay_association_probability(p, m)).epsilon(1e-3));
    }
}

TEST_CASE("vanishing relay density reduces the total to the direct link") {
    auto p = table_params();
    p.lambda_r = 1e-30;
    p.h_r = 1000.0;
    const double beta = 1.0;
    const auto breakdown = total_cp(p, beta, still_at());
    const double direct = direct_link_cp(p, beta);
    CHECK(std::abs(breakdown.total() - direct) < 1e-4);
    CHECK(breakdown.i_srd_a + breakdown.i_srd_b < 1e-12);
}

TEST_CASE("first hop does not depend on time") {
    auto p = table_params();
    p.h_r = 1000.0;
    const auto early = relay_cp(p, 1.0, still_at(0.0));
    const auto late = relay_cp(p, 1.0, still_at(100.0));
    CHECK(std::abs(early.first_hop - late.first_hop) < 1e-6);
    CHECK(early.two_hop <= std::min(early.first_hop, early.second_hop) + 1e-12);
    CHECK(late.two_hop <= std::min(late.first_hop, late.second_hop) + 1e-12);
}

TEST_CASE("static schemes alias the mobile scheme at time zero") {
    auto p = table_params();
    p.h_r = 300.0;
    const double beta = 2.0;
    const MobilityState hover{MobilityScheme::Hover, 40.0, 77.0};
    const MobilityState s1{MobilityScheme::Scheme1, 40.0, 77.0};
    const MobilityState s2{MobilityScheme::Scheme2, 40.0, 0.0};
    const double ref = total_cp(p, beta, s2).total();
    CHECK(total_cp(p, beta, hover).total() == ref);
    CHECK(total_cp(p, beta, s1).total() == ref);
}

TEST_CASE("total coverage is nonincreasing in the threshold") {
    auto p = table_params();
    p.h_r = 1000.0;
    double prev = 1.1;
    for (double beta_db : {-10.0, -3.0, 3.0, 10.0, 20.0}) {
        const double cp = total_cp(p, db_to_linear(beta_db), still_at()).total();
        CHECK(cp <= prev + 1e-6);
        CHECK(cp >= 0.0);
        CHECK(cp <= 1.0);
        prev = cp;
    }
}

TEST_CASE("query dispatch covers every quantity") {
    auto p = table_params();
    p.h_r = 1000.0;
    const auto m = still_at();
    for (auto q : {Quantity::Total, Quantity::DirectLink, Quantity::FirstHop,
                   Quantity::SecondHop, Quantity::RelayLink, Quantity::Association}) {
        const double v = evaluate(p, CoverageQuery{1.0, 0.0, q}, m);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK(quantity_from_string("second_hop") == Quantity::SecondHop);
    CHECK_THROWS_AS(quantity_from_string("bogus"), std::invalid_argument);
}
