#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "irsnet/interference.hpp"
#include "irsnet/metrics.hpp"
#include "irsnet/scenario.hpp"
#include "irsnet/util.hpp"

#include <cmath>
#include <numbers>

using namespace irsnet;

TEST_CASE("link power budgets") {
    ScenarioConfig sc;
    PowerModel pm = power_model(sc);
    CHECK(std::abs(pm.p_irs() - 3.9) < 1e-12);
    CHECK(std::abs(pm.p_id() - 33.91) < 1e-12);
    CHECK(std::abs(pm.p_d() - 30.01) < 1e-12);
    CHECK(power_consumption(pm, LinkMode::indirect) == pm.p_id());
    CHECK(power_consumption(pm, LinkMode::direct) == pm.p_d());

    sc.n_elements = 32;
    CHECK(std::abs(power_model(sc).p_id() - 32.506) < 1e-12);
    sc.power_direct_w = 5.0;
    CHECK(std::abs(power_model(sc).p_d() - 15.01) < 1e-12);

    PowerModel bad = pm;
    bad.p_bs = -1.0;
    CHECK_THROWS_AS(power_consumption(bad, LinkMode::direct), DomainError);
}

TEST_CASE("service mix fractions") {
    ScenarioConfig sc;
    sc.n_irs = 500;
    UserMix um = user_fraction(sc, MixSource::intensity_ratio);
    double lr = 500.0 / (kPi * sc.disk_radius_m * sc.disk_radius_m);
    CHECK(std::abs(um.a - lr / (lr + sc.lambda_bs_per_m2)) < 1e-15);
    CHECK(std::abs(um.a - 0.7646) < 1e-4);

    sc.blockage_eta_per_m = 0.01;
    sc.blockage_u = 2.0;
    UserMix ub = user_fraction(sc, MixSource::blockage);
    CHECK(std::abs(ub.a - (1.0 - std::exp(-(0.01 * sc.d0_cond() + 2.0)))) < 1e-12);
    UserMix u100 = user_fraction(sc, MixSource::blockage, 100.0);
    CHECK(std::abs(u100.a - (1.0 - std::exp(-3.0))) < 1e-12);

    sc.n_irs = 0;
    CHECK(user_fraction(sc, MixSource::intensity_ratio).a == 0.0);
}

TEST_CASE("direct coverage closed form and anchor") {
    ScenarioConfig sc;
    double tau = 0.1;
    double cd = coverage_direct(sc, tau, Conditioning::conditional);

    double d0 = sc.d0_cond();
    double s = tau * std::pow(d0, sc.alpha) / (sc.beta_sq() * sc.power_direct_w);
    double ref = std::exp(-s * sc.noise_w) *
                 lt_bs_interference(s, d0, sc.lambda_bs_per_m2, sc.power_direct_w, sc.alpha,
                                    sc.beta_gain()) *
                 lt_irs_interference(s, LinkMode::direct, sc);
    CHECK(std::abs(cd - ref) < 1e-12);
    CHECK(std::abs(cd - 0.7958) < 1e-3);

    // reflector interference costs the direct link about 1.3% here
    ScenarioConfig bare = sc;
    bare.n_irs = 0;
    double cd0 = coverage_direct(bare, tau, Conditioning::conditional);
    CHECK(std::abs(cd0 - 0.8065) < 1e-3);
    CHECK(cd < cd0);

    // monotone in the threshold and anchored at the limits
    double prev = 1.0;
    for (double t : {1e-4, 1e-2, 0.1, 1.0, 10.0, 1e3}) {
        double v = coverage_direct(sc, t, Conditioning::conditional);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
    CHECK(coverage_direct(sc, 1e-9, Conditioning::conditional) > 0.999);
    CHECK(coverage_direct(sc, 1e9, Conditioning::conditional) < 1e-3);
}

TEST_CASE("blockage-scaled direct coverage inflates the threshold") {
    ScenarioConfig scaled;
    scaled.blockage_scaled_direct = true;
    ScenarioConfig plain;
    UserMix half{0.5, MixSource::blockage};
    double a = coverage_direct(scaled, 0.1, Conditioning::conditional, half);
    double b = coverage_direct(plain, 0.2, Conditioning::conditional);
    CHECK(std::abs(a - b) < 1e-14);
    UserMix zero{0.0, MixSource::blockage};
    CHECK(coverage_direct(scaled, 0.1, Conditioning::conditional, zero) == 0.0);
}

TEST_CASE("cascade coverage: limits, monotonicity, conditioning split") {
    ScenarioConfig sc;
    sc.n_irs = 500;
    sc.n_elements = 32;
    CHECK(coverage_indirect(sc, 1e-9, Conditioning::conditional) > 0.999);
    CHECK(coverage_indirect(sc, 1e9, Conditioning::conditional) < 1e-3);
    double prev = 1.0 + 1e-12;
    for (double t : {1e-3, 0.03, 0.3, 3.0, 100.0}) {
        double v = coverage_indirect(sc, t, Conditioning::conditional);
        CHECK(v <= prev + 1e-5); // inversion noise floor
        prev = v;
    }
    CHECK_THROWS_AS(coverage_indirect(sc, 0.0, Conditioning::conditional), DomainError);
    ScenarioConfig none = sc;
    none.n_irs = 0;
    CHECK_THROWS_AS(coverage_indirect(none, 0.1, Conditioning::conditional), DomainError);

    // the two conditioning laws answer different questions: pinning the median
    // distances leaves this deployment noise-limited at tau = 0.1 while the
    // marginal law keeps the favorable-geometry mass
    double cond = coverage_indirect(sc, 0.1, Conditioning::conditional);
    double marg = coverage_indirect(sc, 0.1, Conditioning::marginal);
    CHECK(std::abs(cond - marg) > 0.05);
    CHECK(std::abs(marg - 0.1528) < 1e-3);
}

TEST_CASE("interference-free rate reduces to the exponential integral") {
    ScenarioConfig sc;
    sc.n_irs = 0;
    sc.lambda_bs_per_m2 = 1e-12;
    sc.sim_bs_radius_m = 3000.0;
    // unit mean SNR: d0^alpha = beta^2 P / N0
    sc.cond_d0_m = std::pow(sc.beta_sq() * sc.power_direct_w / sc.noise_w, 0.25);
    double r = ergodic_rate(LinkMode::direct, sc, Conditioning::conditional);
    CHECK(std::abs(r - 0.59634736232319407) < 1e-5);
}

TEST_CASE("rate routes agree and energy efficiency is rate per watt") {
    ScenarioConfig sc;
    double mgf = ergodic_rate(LinkMode::direct, sc, Conditioning::conditional);
    double ccdf = rate_via_ccdf(LinkMode::direct, sc, Conditioning::conditional);
    CHECK(std::abs(mgf - ccdf) < 2e-3 * mgf);

    PowerModel pm = power_model(sc);
    double ee = energy_efficiency(LinkMode::direct, sc, Conditioning::conditional);
    CHECK(std::abs(ee - mgf / pm.p_d()) < 1e-15 * ee);
}

TEST_CASE("mixture report endpoints and weighting") {
    ScenarioConfig sc;
    sc.n_irs = 400;
    sc.n_elements = 32;
    sc.n_trials = 1; // metrics only
    MetricReport rd = overall_metrics(sc, Conditioning::conditional,
                                      UserMix{0.0, MixSource::intensity_ratio});
    CHECK(rd.c == rd.c_d);
    CHECK(rd.r == rd.r_d);
    CHECK(rd.ee == rd.ee_d);
    MetricReport ri = overall_metrics(sc, Conditioning::conditional,
                                      UserMix{1.0, MixSource::intensity_ratio});
    CHECK(ri.c == ri.c_id);
    CHECK(ri.r == ri.r_id);
    CHECK(ri.ee == ri.ee_id);

    MetricReport rm = overall_metrics(sc, Conditioning::conditional,
                                      UserMix{0.3, MixSource::intensity_ratio});
    CHECK(rm.c == 0.7 * rm.c_d + 0.3 * rm.c_id);
    CHECK(rm.r == 0.7 * rm.r_d + 0.3 * rm.r_id);
    CHECK(rm.ee == 0.7 * rm.ee_d + 0.3 * rm.ee_id);

    // rates are reported in bits
    CHECK(std::abs(rm.r_d - ergodic_rate(LinkMode::direct, sc, Conditioning::conditional) / std::numbers::ln2) <
          1e-14 * rm.r_d);
    CHECK(rm.rates_in_bits);

    // default mix comes from the deployment intensities
    MetricReport rdef = overall_metrics(sc, Conditioning::conditional);
    double lr = 400.0 / (kPi * sc.disk_radius_m * sc.disk_radius_m);
    CHECK(std::abs(rdef.a - lr / (lr + sc.lambda_bs_per_m2)) < 1e-15);

    ScenarioConfig none = sc;
    none.n_irs = 0;
    MetricReport r0 = overall_metrics(none, Conditioning::conditional);
    CHECK(r0.a == 0.0);
    CHECK(std::isnan(r0.c_id));
    CHECK(std::isnan(r0.r_id));
    CHECK(r0.c == r0.c_d);
    CHECK_THROWS_AS(
        overall_metrics(none, Conditioning::conditional, UserMix{0.5, MixSource::intensity_ratio}),
        DomainError);
    CHECK_THROWS_AS(
        overall_metrics(sc, Conditioning::conditional, UserMix{1.5, MixSource::intensity_ratio}),
        DomainError);
}
