#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "irsnet/interference.hpp"
#include "irsnet/montecarlo.hpp"
#include "irsnet/scenario.hpp"
#include "irsnet/signal.hpp"
#include "irsnet/util.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <vector>

using namespace irsnet;

namespace {

ScenarioConfig desk_scenario() {
    ScenarioConfig sc;
    sc.n_irs = 60;
    sc.n_elements = 8;
    sc.n_trials = 4000;
    sc.seed = 7;
    return sc;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double se_of(const std::vector<double>& v) {
    double m = mean_of(v);
    double s2 = 0.0;
    for (double x : v) s2 += (x - m) * (x - m);
    return std::sqrt(s2 / double(v.size()) / double(v.size() - 1));
}

bool batches_equal(const TrialBatch& a, const TrialBatch& b) {
    return a.seed == b.seed && a.scenario_hash == b.scenario_hash && a.s_r0 == b.s_r0 &&
           a.s_d0 == b.s_d0 && a.i_b == b.i_b && a.i_r == b.i_r && a.i_b_hat == b.i_b_hat &&
           a.i_r_hat == b.i_r_hat;
}

} // namespace

TEST_CASE("batch persistence round-trips bitwise and rejects corruption") {
    ScenarioConfig sc = desk_scenario();
    TrialBatch batch = run_conditional_batch(sc, 200, 11);
    auto path = std::filesystem::temp_directory_path() / "irsnet_batch_test.bin";
    save_batch(batch, path.string());
    TrialBatch back = load_batch(path.string());
    CHECK(batches_equal(batch, back));

    // magic
    {
        std::ofstream out(path, std::ios::binary);
        out << "XXXXgarbage";
    }
    CHECK_THROWS_AS(load_batch(path.string()), std::runtime_error);

    // version
    save_batch(batch, path.string());
    {
        std::fstream out(path, std::ios::binary | std::ios::in | std::ios::out);
        out.seekp(4);
        std::uint32_t v = 99;
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    CHECK_THROWS_AS(load_batch(path.string()), std::runtime_error);

    // truncation
    save_batch(batch, path.string());
    std::filesystem::resize_file(path, std::filesystem::file_size(path) / 2);
    CHECK_THROWS_AS(load_batch(path.string()), std::runtime_error);

    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_batch("/nonexistent/batch.bin"), std::runtime_error);
}

TEST_CASE("samplers are deterministic in seed and thread count") {
    ScenarioConfig sc = desk_scenario();
    TrialBatch a = run_matched_batch(sc, 300, 5);
    TrialBatch b = run_matched_batch(sc, 300, 5);
    CHECK(batches_equal(a, b));
    TrialBatch c = run_matched_batch(sc, 300, 6);
    CHECK(!batches_equal(a, c));

    setenv("IRSNET_THREADS", "1", 1);
    TrialBatch t1 = run_conditional_batch(sc, 300, 5);
    setenv("IRSNET_THREADS", "3", 1);
    TrialBatch t3 = run_conditional_batch(sc, 300, 5);
    unsetenv("IRSNET_THREADS");
    CHECK(batches_equal(t1, t3));

    // trial prefix is stable under batch growth
    TrialBatch big = run_matched_batch(sc, 400, 5);
    for (std::size_t i = 0; i < 300; ++i) CHECK(big.s_r0[i] == a.s_r0[i]);
}

TEST_CASE("snapshots reproduce and expose exact aggregates") {
    ScenarioConfig sc = desk_scenario();
    RandomStream r1(31), r2(31), r3(32);
    NetworkRealization n1 = simulate_snapshot(sc, r1);
    NetworkRealization n2 = simulate_snapshot(sc, r2);
    NetworkRealization n3 = simulate_snapshot(sc, r3);
    CHECK(n1.bs_points.size() == n2.bs_points.size());
    CHECK(n1.irs_points.size() == sc.n_irs);
    CHECK(n1.serving_bs == n2.serving_bs);
    CHECK(n1.user_mag == n2.user_mag);
    CHECK(exact_signal_indirect(n1) == exact_signal_indirect(n2));
    CHECK(exact_signal_indirect(n1) != exact_signal_indirect(n3));

    // serving associations minimize the 3-D distances
    for (std::size_t j = 0; j < n1.bs_points.size(); ++j)
        CHECK(n1.bs_dist3(n1.serving_bs) <= n1.bs_dist3(j));
    for (std::size_t m = 0; m < n1.irs_points.size(); ++m)
        CHECK(n1.irs_dist3(n1.serving_irs) <= n1.irs_dist3(m));
}

TEST_CASE("empty deployment degenerates to the direct link") {
    ScenarioConfig sc = desk_scenario();
    sc.n_irs = 0;
    RandomStream rng(3);
    NetworkRealization net = simulate_snapshot(sc, rng);
    CHECK(net.irs_points.empty());
    CHECK(exact_signal_indirect(net) == 0.0);
    CHECK(exact_cascade_interference(net, LinkMode::indirect) == 0.0);
    CHECK(exact_cascade_interference(net, LinkMode::direct) == 0.0);
    double d0 = net.bs_dist3(net.serving_bs);
    double want = net.p_dir * net.beta_sq * std::pow(d0, -net.alpha) * net.exp_direct;
    CHECK(std::abs(exact_signal_direct(net) - want) < 1e-15 * want);
}

TEST_CASE("aligned per-pair configuration bounds the faded aggregate") {
    ScenarioConfig sc;
    sc.disk_radius_m = 300.0;
    sc.sim_bs_radius_m = 1000.0;
    sc.n_irs = 200;
    sc.n_elements = 8;
    RandomStream rng(77);
    for (int snap = 0; snap < 300; ++snap) {
        NetworkRealization net = simulate_snapshot(sc, rng);
        double actual = exact_cascade_interference(net, LinkMode::indirect);
        double bound = worst_case_ir_bound(net);
        CHECK(actual <= bound * (1.0 + 1e-12));
        CHECK(bound == exact_cascade_interference(net, LinkMode::indirect, true));
    }
}

TEST_CASE("empirical transform estimates") {
    std::vector<double> sgrid{0.0, 0.5, 2.0};
    std::vector<double> constant(500, 3.0);
    auto lc = empirical_lt(constant, sgrid);
    CHECK(lc[0].value == 1.0);
    CHECK(lc[0].std_error == 0.0);
    CHECK(std::abs(lc[1].value - std::exp(-1.5)) < 1e-15);
    CHECK(lc[1].std_error < 1e-15);

    RandomStream rng(9);
    std::vector<double> expo(200000);
    for (double& x : expo) x = rng.exponential();
    auto le = empirical_lt(expo, sgrid);
    for (std::size_t i = 0; i < sgrid.size(); ++i) {
        double ref = 1.0 / (1.0 + sgrid[i]);
        CHECK(std::abs(le[i].value - ref) < 4.0 * le[i].std_error + 1e-12);
    }
    CHECK_THROWS_AS(empirical_lt(std::vector<double>{}, sgrid), DomainError);
}

TEST_CASE("annulus interference draws obey the Campbell mean") {
    ScenarioConfig sc = desk_scenario();
    sc.power_direct_w = 5.0;
    double d0 = sc.d0_cond();
    auto draws = bs_interference_draws(sc, LinkMode::direct, d0, 20000, 13);
    double l0sq = d0 * d0 - sc.height_bs_m * sc.height_bs_m;
    double hi = sc.sim_bs_radius_m * sc.sim_bs_radius_m + sc.height_bs_m * sc.height_bs_m;
    double radial = 0.5 * (1.0 / (l0sq + sc.height_bs_m * sc.height_bs_m) - 1.0 / hi);
    double want = 2.0 * kPi * sc.lambda_bs_per_m2 * sc.power_direct_w * sc.beta_sq() * radial;
    CHECK(std::abs(mean_of(draws) - want) < 4.0 * se_of(draws));
    CHECK_THROWS_AS(bs_interference_draws(sc, LinkMode::direct, 5.0, 10, 1), DomainError);
}

TEST_CASE("conditional sampler means match the model ingredients") {
    ScenarioConfig sc = desk_scenario();
    sc.power_direct_w = 5.0; // distinct from the cascade power
    const std::uint64_t n = 20000;
    TrialBatch batch = run_conditional_batch(sc, n, 21);
    REQUIRE(batch.size() == n);

    double r00 = sc.r00_cond();
    double d0 = sc.d0_cond();
    double h = sc.height_bs_m - sc.height_irs_m;
    double l0 = std::sqrt(d0 * d0 - sc.height_bs_m * sc.height_bs_m);
    double t00 = std::sqrt(0.25 * l0 * l0 + h * h);

    CascadeGeometry geo{r00, t00, sc.alpha, sc.power_indirect_w, sc.beta_gain()};
    SignalMoments sm = mean_var_signal_optimal(geo, sc.n_elements);
    CHECK(std::abs(mean_of(batch.s_r0) - sm.mean) < 4.0 * se_of(batch.s_r0));

    double want_sd = sc.power_direct_w * sc.beta_sq() * std::pow(d0, -sc.alpha);
    CHECK(std::abs(mean_of(batch.s_d0) - want_sd) < 4.0 * se_of(batch.s_d0));

    double hi = sc.sim_bs_radius_m * sc.sim_bs_radius_m + sc.height_bs_m * sc.height_bs_m;
    double radial = 0.5 * (1.0 / (d0 * d0) - 1.0 / hi);
    double want_ib = 2.0 * kPi * sc.lambda_bs_per_m2 * sc.power_indirect_w * sc.beta_sq() * radial;
    CHECK(std::abs(mean_of(batch.i_b) - want_ib) < 4.0 * se_of(batch.i_b));

    // the direct-mode BS column reuses the same point draws at P_hat
    double ratio = sc.power_direct_w / sc.power_indirect_w;
    for (std::size_t i = 0; i < 50; ++i)
        CHECK(std::abs(batch.i_b_hat[i] - ratio * batch.i_b[i]) <= 1e-14 * batch.i_b[i]);

    CHECK(std::abs(mean_of(batch.i_r) - ir_mean(LinkMode::indirect, sc)) <
          4.0 * se_of(batch.i_r));
    CHECK(std::abs(mean_of(batch.i_r_hat) - ir_mean(LinkMode::direct, sc)) <
          4.0 * se_of(batch.i_r_hat));
}

TEST_CASE("coverage estimates: limits, monotonicity, interval shape") {
    ScenarioConfig sc = desk_scenario();
    TrialBatch batch = run_conditional_batch(sc, 3000, 17);
    std::vector<double> taus{1e-30, 1e-4, 1e-2, 1.0, 1e30};
    auto cov = empirical_coverage(batch, sc.noise_w, taus, LinkMode::indirect);
    CHECK(cov[0].p == 1.0);
    CHECK(cov.back().p == 0.0);
    for (std::size_t i = 0; i + 1 < cov.size(); ++i) CHECK(cov[i].p >= cov[i + 1].p);
    for (const auto& c : cov) {
        CHECK(c.wilson_lo <= c.p + 1e-12);
        CHECK(c.wilson_hi >= c.p - 1e-12);
        CHECK(c.wilson_lo >= 0.0);
        CHECK(c.wilson_hi <= 1.0);
    }
    auto covd = empirical_coverage(sc, {1e-30}, 500, LinkMode::direct);
    CHECK(covd[0].p == 1.0);
}

TEST_CASE("validation verdicts flag out-of-tolerance series") {
    ValidationSeries ok;
    ok.name = "identity";
    ok.grid = {0.1, 1.0, 10.0};
    ok.analytic = {0.9, 0.5, 0.1};
    ok.empirical = ok.analytic;
    ok.tolerance = 0.03;
    ValidationReport rep = validation_report({ok});
    CHECK(rep.all_pass);
    CHECK(rep.series[0].pass);
    CHECK(rep.series[0].max_abs_gap == 0.0);

    ValidationSeries bad = ok;
    bad.name = "corrupted";
    bad.empirical[1] += 0.1;
    rep = validation_report({ok, bad});
    CHECK(!rep.all_pass);
    CHECK(rep.series[0].pass);
    CHECK(!rep.series[1].pass);
    CHECK(std::abs(rep.series[1].max_abs_gap - 0.1) < 1e-12);

    ValidationSeries mismatched = ok;
    mismatched.empirical.pop_back();
    CHECK_THROWS_AS(validation_report({mismatched}), DomainError);
}
