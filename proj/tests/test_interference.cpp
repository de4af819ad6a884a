#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "irsnet/channel.hpp"
#include "irsnet/geometry.hpp"
#include "irsnet/interference.hpp"
#include "irsnet/quadrature.hpp"
#include "irsnet/scenario.hpp"
#include "irsnet/util.hpp"

#include <cmath>
#include <complex>

using namespace irsnet;

TEST_CASE("alpha=4 closed form matches the hypergeometric expression") {
    const double lambda = 1e-4;
    // the hypergeometric form is the cross-check expression; it loses digits
    // once s P / d0^alpha grows past ~1e4, so compare where both are sound
    for (double P : {1.0, 20.0})
        for (double d0 : {10.0, 51.05, 200.0})
            for (double s : {1e4, 1e6, 1e8, 1e10, 1e12}) {
                if (s * P / (d0 * d0 * d0 * d0) > 2e3) continue;
                double fast = lt_bs_interference(s, d0, lambda, P, 4.0, 1.0);
                double gen = lt_bs_interference_general(s, d0, lambda, P, 4.0, 1.0);
                // log domain keeps the comparison meaningful when the
                // transform itself underflows toward zero
                CHECK(std::abs(std::log(fast) - std::log(gen)) <
                      1e-9 * (std::abs(std::log(gen)) + 1.0));
            }
}

TEST_CASE("transform equals the void-probability integral") {
    const double lambda = 1e-4, beta = 1.0;
    QuadratureSpec tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-300;
    tight.max_subdivisions = 2000;
    for (double alpha : {4.0, 3.7})
        for (double P : {1.0, 20.0})
            for (double s : {1e5, 1e7, 1e9}) {
                double d0 = 51.05;
                double c = s * P * beta * beta;
                // x = d0^2 / (l^2 + H_B^2) maps the tail onto (0, 1]
                double da = std::pow(d0, alpha);
                QuadResult q = integrate_interval(
                    [&](double x) {
                        double xa = std::pow(x, 0.5 * alpha);
                        return 0.5 * c * d0 * d0 * xa / (x * x * (da + c * xa));
                    },
                    0.0, 1.0, tight);
                double lt = lt_bs_interference(s, d0, lambda, P, alpha, beta);
                CHECK(std::abs(std::log(lt) + 2.0 * kPi * lambda * q.value) <
                      1e-8 * (2.0 * kPi * lambda * q.value + 1.0));
            }
}

TEST_CASE("complex serving-exclusion transform against frozen value") {
    std::complex<double> v =
        lt_bs_interference(std::complex<double>(0.0, -1e6), 51.05, 1e-4, 20.0, 4.0, 1.0);
    CHECK(std::abs(v.real() - 0.04609591107) < 1e-9);
    CHECK(std::abs(v.imag() - 0.4655994909) < 1e-9);
    // conjugate symmetry and real-axis agreement
    std::complex<double> vc =
        lt_bs_interference(std::complex<double>(0.0, 1e6), 51.05, 1e-4, 20.0, 4.0, 1.0);
    CHECK(std::abs(vc - std::conj(v)) < 1e-12 * std::abs(v));
    double sr = 3e6;
    std::complex<double> vr =
        lt_bs_interference(std::complex<double>(sr, 0.0), 51.05, 1e-4, 20.0, 4.0, 1.0);
    double vd = lt_bs_interference(sr, 51.05, 1e-4, 20.0, 4.0, 1.0);
    CHECK(std::abs(vr.imag()) < 1e-12);
    CHECK(std::abs(vr.real() - vd) < 1e-10 * vd);
}

TEST_CASE("aggregate reflector statistics compose the inner-sum moments") {
    DeploymentParams dp;
    const std::size_t N = 16, M_eff = 1499;
    const double alpha = 4.0, t_j = 10.0;
    // exclusion at the median nearest-reflector ring of an M = 1500 deployment
    ScenarioConfig ring_sc;
    double r00 = ring_sc.r00_cond();
    double lmin = std::sqrt(r00 * r00 - ring_sc.height_irs_m * ring_sc.height_irs_m);
    NoncentralChiSqStats nc = noncentral_stats(N, kUnitPowerSigma);
    double er_a = moment_r_inv_alpha(1, alpha, dp, RMomentVariant::corrected, lmin);
    double er_2a = moment_r_inv_alpha(2, alpha, dp, RMomentVariant::corrected, lmin);
    ZStats z = z_stats(M_eff, t_j, alpha, nc, er_a, er_2a);

    YStats ys = y_stats_aligned(N, kUnitPowerSigma);
    CHECK(std::abs(z.EY - ys.mean) < 1e-12 * ys.mean);
    CHECK(std::abs(z.EY2 - ys.second_moment) < 1e-12 * ys.second_moment);
    CHECK(z.M_eff == double(M_eff));
    CHECK(std::abs(z.mu_base - double(M_eff) * ys.mean * er_a) < 1e-12 * z.mu_base);
    double vb = double(M_eff) * (ys.second_moment * er_2a - ys.mean * ys.mean * er_a * er_a);
    CHECK(std::abs(z.var_base - vb) < 1e-12 * z.var_base);
    CHECK(std::abs(z.mu_Z - z.mu_base * std::pow(t_j, -alpha)) < 1e-15 * z.mu_Z);
    CHECK(std::abs(z.var_Z - z.var_base * std::pow(t_j, -2.0 * alpha)) < 1e-15 * z.var_Z);

    // reference values for the worst-case aligned composition
    CHECK(std::abs(z.mu_base - 0.001537) < 1e-3 * 0.001537);
    CHECK(std::abs(z.var_base - 9.039e-7) < 1e-3 * 9.039e-7);

    // random-phase inner sums carry the exponential moments
    ZStats zr = z_stats_random(M_eff, t_j, alpha, N, kUnitPowerSigma, er_a, er_2a);
    YStats yr = y_stats_random(N, kUnitPowerSigma);
    CHECK(std::abs(zr.EY - yr.mean) < 1e-12 * yr.mean);
    CHECK(std::abs(zr.EY2 - 2.0 * yr.mean * yr.mean) < 1e-12 * zr.EY2);
    CHECK(zr.EY < z.EY); // alignment dominates the mean inner sum
}

TEST_CASE("mode-resolved statistics select exclusion, power and phase model") {
    ScenarioConfig sc;
    IrModeStats ind = ir_mode_stats(LinkMode::indirect, sc, -1.0);
    IrModeStats dir = ir_mode_stats(LinkMode::direct, sc, -1.0);
    CHECK(ind.z.M_eff == double(sc.n_irs - 1));
    CHECK(dir.z.M_eff == double(sc.n_irs));
    CHECK(ind.P_tx == sc.power_indirect_w);
    CHECK(dir.P_tx == sc.power_direct_w);
    CHECK(dir.lmin == 0.0);
    double r00 = sc.r00_cond();
    double ring = std::sqrt(r00 * r00 - sc.height_irs_m * sc.height_irs_m);
    CHECK(std::abs(ind.lmin - ring) < 1e-12 * ring);
    CHECK(ind.z.EY > dir.z.EY); // aligned vs random inner sums
    CHECK(ind.z.Er_a < dir.z.Er_a); // exclusion trims the near-field moment

    ScenarioConfig none = sc;
    none.n_irs = 0;
    CHECK_THROWS_AS(ir_mode_stats(LinkMode::indirect, none, -1.0), DomainError);
    IrModeStats d0 = ir_mode_stats(LinkMode::direct, none, -1.0);
    CHECK(d0.z.M_eff == 0.0);
    CHECK(d0.z.mu_base == 0.0);
    CHECK(lt_irs_interference(1e8, LinkMode::direct, none) == 1.0);
    CHECK(ir_mean(LinkMode::direct, none) == 0.0);
}

TEST_CASE("reflector transform matches its generating-functional integral") {
    ScenarioConfig sc;
    double h = sc.height_bs_m - sc.height_irs_m;
    QuadratureSpec tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-300;
    tight.max_subdivisions = 2000;
    double R = sc.disk_radius_m;
    for (LinkMode mode : {LinkMode::indirect, LinkMode::direct})
        for (double s : {1e7, 1e8, 1e9}) {
            IrLtParams pr = ir_lt_params(s, mode, sc);
            // v = l^2/4 + h^2, l dl = 2 dv; interfering BSs carry reflector
            // load only while inside the deployment disk, so l runs to R
            QuadResult q = integrate_interval(
                [&](double v) {
                    double X = std::pow(v, -0.5 * sc.alpha);
                    return -std::expm1(-pr.k1 * X - pr.k2 * X * X);
                },
                h * h, R * R / 4.0 + h * h, tight);
            double ref = std::exp(-2.0 * kPi * sc.lambda_bs_per_m2 * 2.0 * q.value);
            double lt = lt_irs_interference(s, mode, sc);
            CHECK(std::abs(lt - ref) < 1e-6 * ref);
        }
}

TEST_CASE("reflector transform bounds, ordering and series stability") {
    ScenarioConfig sc;
    double prev = 1.0;
    for (double s : {1e6, 1e7, 1e8, 1e9, 1e10}) {
        double v = lt_irs_interference(s, LinkMode::indirect, sc);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }

    // wider reflector exclusion and a lifted BS ring both weaken interference
    double base = lt_irs_interference(1e8, LinkMode::indirect, sc);
    CHECK(lt_irs_interference(1e8, LinkMode::indirect, sc, 50.0) > base);
    CHECK(lt_irs_interference(1e8, LinkMode::indirect, sc, -1.0, 100.0) > base);

    // truncation order does not move the result
    ScenarioConfig lo = sc, hi = sc;
    lo.taylor_order = 10;
    hi.taylor_order = 20;
    for (double s : {1e7, 1e9}) {
        double a = lt_irs_interference(s, LinkMode::indirect, lo);
        double b = lt_irs_interference(s, LinkMode::indirect, hi);
        CHECK(std::abs(a - b) < 1e-10 * b);
    }
}

TEST_CASE("aggregate mean is linear in density and transmit power") {
    ScenarioConfig sc;
    double h = sc.height_bs_m - sc.height_irs_m;
    double R = sc.disk_radius_m;
    for (LinkMode mode : {LinkMode::indirect, LinkMode::direct}) {
        IrModeStats st = ir_mode_stats(mode, sc, -1.0);
        double radial = (4.0 / (sc.alpha - 2.0)) *
                        (std::pow(h, 2.0 - sc.alpha) -
                         std::pow(R * R / 4.0 + h * h, 1.0 - 0.5 * sc.alpha));
        double ref =
            2.0 * kPi * sc.lambda_bs_per_m2 * st.P_tx * sc.beta_sq() * st.z.mu_base * radial;
        double m = ir_mean(mode, sc);
        CHECK(std::abs(m - ref) < 1e-6 * ref);
    }
    ScenarioConfig dbl = sc;
    dbl.lambda_bs_per_m2 = 2.0 * sc.lambda_bs_per_m2;
    CHECK(std::abs(ir_mean(LinkMode::indirect, dbl) - 2.0 * ir_mean(LinkMode::indirect, sc)) <
          1e-12);
    ScenarioConfig pow5 = sc;
    pow5.power_indirect_w = 5.0 * sc.power_indirect_w;
    CHECK(std::abs(ir_mean(LinkMode::indirect, pow5) - 5.0 * ir_mean(LinkMode::indirect, sc)) <
          1e-12);
}

TEST_CASE("characteristic-function kernel agrees with the direct transform") {
    ScenarioConfig sc;
    const IrCfKernel& k = ir_cf_kernel(LinkMode::indirect, sc);
    CHECK(k.cf(0.0) == std::complex<double>(1.0, 0.0));
    for (double w : {1e5, 1e6, 1e7, 3e8, 1e9, 2e10}) {
        std::complex<double> c = k.cf(w);
        CHECK(std::abs(c) <= 1.0 + 1e-12);
        std::complex<double> cneg = k.cf(-w);
        CHECK(std::abs(cneg - std::conj(c)) < 1e-14);
        std::complex<double> direct =
            lt_irs_interference(std::complex<double>(0.0, -w), LinkMode::indirect, sc);
        CHECK(std::abs(c - direct) < 1e-6);
    }
    // cached instance is reused
    CHECK(&ir_cf_kernel(LinkMode::indirect, sc) == &k);
}
