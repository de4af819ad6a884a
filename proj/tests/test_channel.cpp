#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "irsnet/channel.hpp"
#include "irsnet/specfun.hpp"
#include "irsnet/util.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace irsnet;

TEST_CASE("two-hop product moments carry the sigma-squared scaling") {
    ProductMoments unit = rayleigh_product_moments(1.0);
    CHECK(std::abs(unit.mean - kPi / 2.0) < 1e-14);
    CHECK(std::abs(unit.variance - 4.0 * (1.0 - kPi * kPi / 16.0)) < 1e-14);

    ProductMoments up = rayleigh_product_moments(kUnitPowerSigma);
    CHECK(std::abs(up.mean - kPi / 4.0) < 1e-14);
    // E[x^2] = mean^2 + var = 4 sigma^4 = 1 at unit power
    CHECK(std::abs(up.mean * up.mean + up.variance - 1.0) < 1e-14);

    double s = 0.35;
    ProductMoments gen = rayleigh_product_moments(s);
    CHECK(std::abs(gen.mean - s * s * unit.mean) < 1e-14);
    CHECK(std::abs(gen.variance - s * s * s * s * unit.variance) < 1e-14);
}

TEST_CASE("sampled hops reproduce the product moments") {
    RandomStream rng(4711);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, pow2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = sample_rayleigh(kUnitPowerSigma, rng) * sample_rayleigh(kUnitPowerSigma, rng);
        sum += x;
        sum2 += x * x;
        double r = sample_rayleigh(0.5, rng);
        pow2 += r * r;
    }
    ProductMoments up = rayleigh_product_moments(kUnitPowerSigma);
    double mean = sum / n;
    double se = std::sqrt(up.variance / n);
    CHECK(std::abs(mean - up.mean) < 4.0 * se);
    CHECK(std::abs(sum2 / n - 1.0) < 0.02);
    CHECK(std::abs(pow2 / n - 2.0 * 0.25) < 0.01); // E[r^2] = 2 sigma^2
}

TEST_CASE("gamma fit constants and scaling") {
    GammaApproxParams g1 = gamma_approx_of_product();
    CHECK(g1.kappa == 1.6467);
    CHECK(g1.zeta == 0.9539);
    // fitted amplitude mean kappa*zeta tracks the exact product mean within 2%
    CHECK(std::abs(g1.kappa * g1.zeta - kPi / 2.0) < 0.02 * kPi / 2.0);

    GammaApproxParams gu = gamma_approx_of_product(kUnitPowerSigma);
    CHECK(gu.kappa == g1.kappa);
    CHECK(std::abs(gu.zeta - 0.47695) < 1e-12);

    GGParams gg = gg_from_gamma(gu);
    CHECK(std::abs(gg.a - gu.zeta * gu.zeta) < 1e-15);
    CHECK(std::abs(gg.d - gu.kappa / 2.0) < 1e-15);
    CHECK(gg.p == 0.5);
}

TEST_CASE("squared-fit moments") {
    GGParams gg = gg_from_gamma(gamma_approx_of_product(kUnitPowerSigma));
    GGMoments m = gg_moments(gg);
    double z2 = gg.a; // zeta^2
    double kappa = 2.0 * gg.d;
    // fit preserves amplitude mean/variance, not power: E[X] = zeta^2 k(k+1),
    // 0.86% below the exact unit second moment
    CHECK(std::abs(m.mean - z2 * kappa * (kappa + 1.0)) < 1e-12);
    CHECK(std::abs(m.mean - 0.991437) < 1e-6);
    CHECK(std::abs(m.mean - 1.0) < 0.01);
    double second = z2 * z2 * std::exp(ln_gamma(kappa + 4.0) - ln_gamma(kappa));
    CHECK(std::abs(m.variance - (second - m.mean * m.mean)) < 1e-12);
}

TEST_CASE("squared-sum statistics compose the exact gaussian moments") {
    const std::size_t N = 32;
    NoncentralChiSqStats nc = noncentral_stats(N, kUnitPowerSigma);
    ProductMoments pm = rayleigh_product_moments(kUnitPowerSigma);
    double mu = double(N) * pm.mean;
    double s2 = double(N) * pm.variance;
    CHECK(std::abs(nc.scale - s2) < 1e-12);
    CHECK(std::abs(nc.lambda_ncp - mu * mu / s2) < 1e-10);
    CHECK(std::abs(nc.mean - (1.0 + nc.lambda_ncp)) < 1e-12);
    CHECK(std::abs(nc.variance - 2.0 * (1.0 + 2.0 * nc.lambda_ncp)) < 1e-10);
    CHECK(nc.dof == 1);
    CHECK(std::abs(nc.lambda_text - 0.5 * mu / s2) < 1e-12);

    YStats ya = y_stats_aligned(N, kUnitPowerSigma);
    CHECK(std::abs(ya.mean - (mu * mu + s2)) < 1e-9);
    CHECK(std::abs(ya.mean - nc.scale * nc.mean) < 1e-9);
    double m4 = mu * mu * mu * mu + 6.0 * mu * mu * s2 + 3.0 * s2 * s2;
    CHECK(std::abs(ya.second_moment - m4) < 1e-6 * m4);

    YStats yr = y_stats_random(N, kUnitPowerSigma);
    CHECK(std::abs(yr.mean - double(N)) < 1e-12); // N E[x^2], unit power
    CHECK(std::abs(yr.second_moment - 2.0 * yr.mean * yr.mean) < 1e-9);
}

TEST_CASE("sampled inner sums agree with both phase models") {
    const std::size_t N = 8;
    RandomStream rng(2718);
    const int n = 200000;
    double sa = 0.0, sa2 = 0.0, sr = 0.0;
    for (int i = 0; i < n; ++i) {
        double amp = 0.0;
        std::complex<double> vec(0.0, 0.0);
        for (std::size_t q = 0; q < N; ++q) {
            double x = sample_rayleigh(kUnitPowerSigma, rng) *
                       sample_rayleigh(kUnitPowerSigma, rng);
            amp += x;
            vec += std::polar(x, 2.0 * kPi * rng.uniform());
        }
        double y = amp * amp;
        sa += y;
        sa2 += y * y;
        sr += std::norm(vec);
    }
    YStats ya = y_stats_aligned(N, kUnitPowerSigma);
    YStats yr = y_stats_random(N, kUnitPowerSigma);
    double mean = sa / n;
    double se = std::sqrt((sa2 / n - mean * mean) / n);
    CHECK(std::abs(mean - ya.mean) < 4.0 * se);
    CHECK(std::abs(sa2 / n - ya.second_moment) < 0.05 * ya.second_moment);
    CHECK(std::abs(sr / n - yr.mean) < 0.02 * yr.mean);
}

TEST_CASE("amplitude quantile table matches the sum moments") {
    const std::size_t N = 8;
    ProductAmplitudeTable table(N, kUnitPowerSigma);
    ProductMoments pm = rayleigh_product_moments(kUnitPowerSigma);
    CHECK(std::abs(table.mean() - double(N) * pm.mean) < 2e-3 * double(N) * pm.mean);
    CHECK(std::abs(table.variance() - double(N) * pm.variance) < 2e-2 * double(N) * pm.variance);

    RandomStream rng(12);
    const int n = 100000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double a = table.sample(rng);
        CHECK(a >= 0.0);
        s1 += a;
        s2 += a * a;
    }
    double mean = s1 / n;
    double se = std::sqrt(table.variance() / n);
    CHECK(std::abs(mean - table.mean()) < 4.0 * se);
    CHECK(std::abs(s2 / n - mean * mean - table.variance()) < 0.05 * table.variance());

    // same stream, same draws
    RandomStream a1(77), a2(77);
    for (int i = 0; i < 32; ++i) CHECK(table.sample(a1) == table.sample(a2));
}
