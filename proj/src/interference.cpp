#include "irsnet/interference.hpp"
#include "irsnet/specfun.hpp"
#include "irsnet/util.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>

namespace irsnet {

namespace {

ZStats compose_z(double M_eff, double t_j, double alpha, double EY, double EY2, double er_a,
                 double er_2a, double printed_mean_factor, double printed_var_factor) {
    ZStats z;
    z.M_eff = M_eff;
    z.EY = EY;
    z.EY2 = EY2;
    z.Er_a = er_a;
    z.Er_2a = er_2a;
    z.mu_base = M_eff * er_a * EY;
    z.var_base = M_eff * (er_2a * EY2 - er_a * er_a * EY * EY);
    double ta = std::pow(t_j, -alpha);
    z.mu_Z = z.mu_base * ta;
    z.var_Z = z.var_base * ta * ta;
    double mt2 = M_eff * t_j * t_j;
    z.mu_printed = er_a * std::pow(mt2, -alpha / 2.0) * printed_mean_factor;
    z.var_printed = 2.0 * (er_2a - er_a * er_a) * std::pow(mt2, -alpha) * printed_var_factor;
    return z;
}

} // namespace

ZStats z_stats(std::size_t M_eff, double t_j, double alpha, const NoncentralChiSqStats& nc,
               double er_a, double er_2a) {
    if (M_eff < 1) throw DomainError("z_stats: M_eff must be >= 1");
    if (!(t_j > 0.0) || !(alpha > 2.0)) throw DomainError("z_stats: t_j > 0 and alpha > 2 required");
    double EY = nc.scale * nc.mean; // mu'^2 + sigma'^2
    double EY2 = nc.scale * nc.scale * (nc.variance + nc.mean * nc.mean);
    return compose_z(static_cast<double>(M_eff), t_j, alpha, EY, EY2, er_a, er_2a, nc.mean,
                     1.0 + 2.0 * nc.lambda_ncp);
}

ZStats z_stats_random(std::size_t M_eff, double t_j, double alpha, std::size_t N, double sigma,
                      double er_a, double er_2a) {
    if (M_eff < 1) throw DomainError("z_stats_random: M_eff must be >= 1");
    if (!(t_j > 0.0) || !(alpha > 2.0))
        throw DomainError("z_stats_random: t_j > 0 and alpha > 2 required");
    YStats ys = y_stats_random(N, sigma);
    return compose_z(static_cast<double>(M_eff), t_j, alpha, ys.mean, ys.second_moment, er_a,
                     er_2a, 1.0, 1.0);
}

namespace {

void check_bs_args(double d0, double lambda_B, double P_tx, double alpha, double beta_gain) {
    if (!(alpha > 2.0)) throw DomainError("lt_bs_interference: alpha must be > 2");
    if (!(d0 > 0.0)) throw DomainError("lt_bs_interference: d0 must be > 0");
    if (!(lambda_B > 0.0) || !(P_tx > 0.0) || !(beta_gain > 0.0))
        throw DomainError("lt_bs_interference: lambda_B, P_tx, beta_gain must be > 0");
}

} // namespace

double lt_bs_interference_general(double s, double d0, double lambda_B, double P_tx, double alpha,
                                  double beta_gain) {
    check_bs_args(d0, lambda_B, P_tx, alpha, beta_gain);
    if (!(s >= 0.0)) throw DomainError("lt_bs_interference: s must be >= 0");
    if (s == 0.0) return 1.0;
    double p = P_tx * beta_gain * beta_gain;
    double X = s * p * std::pow(d0, -alpha);
    double F = gauss_2f1(1.0, 1.0 - 2.0 / alpha, 2.0 - 2.0 / alpha, -X);
    double expo = -2.0 * kPi * lambda_B * std::pow(d0, 2.0 - alpha) * s * p / (alpha - 2.0) * F;
    return std::exp(expo);
}

double lt_bs_interference(double s, double d0, double lambda_B, double P_tx, double alpha,
                          double beta_gain) {
    check_bs_args(d0, lambda_B, P_tx, alpha, beta_gain);
    if (!(s >= 0.0)) throw DomainError("lt_bs_interference: s must be >= 0");
    if (s == 0.0) return 1.0;
    if (alpha == 4.0) {
        double sp = std::sqrt(s * P_tx * beta_gain * beta_gain);
        return std::exp(-kPi * lambda_B * sp * std::atan(sp / (d0 * d0)));
    }
    return lt_bs_interference_general(s, d0, lambda_B, P_tx, alpha, beta_gain);
}

std::complex<double> lt_bs_interference(std::complex<double> s, double d0, double lambda_B,
                                        double P_tx, double alpha, double beta_gain) {
    check_bs_args(d0, lambda_B, P_tx, alpha, beta_gain);
    if (std::abs(s) == 0.0) return 1.0;
    double p = P_tx * beta_gain * beta_gain;
    if (alpha == 4.0) {
        std::complex<double> sp = std::sqrt(s * p);
        return std::exp(-kPi * lambda_B * sp * std::atan(sp / (d0 * d0)));
    }
    // PGFL over interferers beyond d0, mapped to w = d0/u in (0, 1]
    std::complex<double> sp = s * p;
    auto g = [&](double w) -> std::complex<double> {
        double ua = std::pow(d0 / w, -alpha);
        std::complex<double> f = sp * ua / (1.0 + sp * ua);
        return f / (w * w * w);
    };
    QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    spec.abs_tol = 1e-14;
    CQuadResult q = integrate_interval_c(g, 0.0, 1.0, spec);
    return std::exp(-2.0 * kPi * lambda_B * d0 * d0 * q.value);
}

IrModeStats ir_mode_stats(LinkMode mode, const ScenarioConfig& sc, double irs_exclusion_lmin) {
    if (sc.n_irs == 0) {
        if (mode == LinkMode::indirect)
            throw DomainError("ir_mode_stats: indirect mode needs n_irs >= 1");
        IrModeStats st;
        st.lmin = std::max(irs_exclusion_lmin, 0.0);
        st.P_tx = sc.power_direct_w;
        st.z = ZStats{};
        return st;
    }
    DeploymentParams dp = sc.deployment();
    double h = sc.height_bs_m - sc.height_irs_m;
    double lmin = irs_exclusion_lmin;
    if (lmin < 0.0) {
        if (mode == LinkMode::indirect) {
            double r00 = sc.r00_cond();
            lmin = std::sqrt(std::max(0.0, r00 * r00 - sc.height_irs_m * sc.height_irs_m));
        } else {
            lmin = 0.0;
        }
    }
    RMomentVariant variant =
        sc.r_moment_verbatim ? RMomentVariant::verbatim : RMomentVariant::corrected;
    double er_a = moment_r_inv_alpha(1, sc.alpha, dp, variant, lmin);
    double er_2a = moment_r_inv_alpha(2, sc.alpha, dp, variant, lmin);

    IrModeStats st;
    st.lmin = lmin;
    if (mode == LinkMode::indirect) {
        st.P_tx = sc.power_indirect_w;
        std::size_t m_eff = sc.n_irs - 1;
        if (m_eff == 0) {
            st.z = ZStats{};
            st.z.Er_a = er_a;
            st.z.Er_2a = er_2a;
        } else {
            NoncentralChiSqStats nc = noncentral_stats(sc.n_elements, kUnitPowerSigma);
            st.z = z_stats(m_eff, h, sc.alpha, nc, er_a, er_2a);
        }
    } else {
        st.P_tx = sc.power_direct_w;
        st.z = z_stats_random(sc.n_irs, h, sc.alpha, sc.n_elements, kUnitPowerSigma, er_a, er_2a);
    }
    return st;
}

IrLtParams ir_lt_params(double s, LinkMode mode, const ScenarioConfig& sc,
                        double irs_exclusion_lmin) {
    IrModeStats st = ir_mode_stats(mode, sc, irs_exclusion_lmin);
    double h = sc.height_bs_m - sc.height_irs_m;
    double p = st.P_tx * sc.beta_sq();
    IrLtParams pr;
    pr.k1 = s * p * st.z.mu_base;
    pr.k2 = s * p * s * p * st.z.var_base / 2.0;
    pr.X0 = std::pow(h, -sc.alpha);
    pr.XR = std::pow(sc.disk_radius_m * sc.disk_radius_m / 4.0 + h * h, -sc.alpha / 2.0);
    pr.taylor_order = sc.taylor_order;
    return pr;
}

namespace {

// X(l) = (l^2/4 + h^2)^(-alpha/2), the midpoint-distance kernel
double x_of_l(double l, double h, double alpha) {
    return std::pow(l * l / 4.0 + h * h, -alpha / 2.0);
}

struct SeriesEval {
    double value = 0.0;
    bool ok = false;
};

// sum_i c_i (Xhi^{p_i} - XR^{p_i}) / p_i with c_i the Taylor coefficients of
// exp(-k1 X - k2 X^2), rescaled so the expansion variable is u = X/Xhi
SeriesEval damped_series(double k1, double k2, double Xhi, double XR, double alpha, int order) {
    SeriesEval ev;
    double rho = XR / Xhi;
    TaylorCoeffs tc = taylor_exp_quad(k1 * Xhi, k2 * Xhi * Xhi, order);
    KahanSum sum;
    double max_term = 0.0;
    for (int i = 1; i <= order; ++i) {
        double p = static_cast<double>(i) - 2.0 / alpha;
        double term = tc.coeffs[static_cast<std::size_t>(i - 1)] * (1.0 - std::pow(rho, p)) / p;
        sum.add(term);
        max_term = std::max(max_term, std::abs(term));
        if (!std::isfinite(sum.value())) return ev;
    }
    // catastrophic cancellation leaves no trustworthy digits
    if (max_term > std::max(std::abs(sum.value()), 1e-300) * 1e13) return ev;
    ev.value = std::pow(Xhi, -2.0 / alpha) * sum.value();
    ev.ok = true;
    return ev;
}

std::atomic<bool> g_clamp_warned{false};

double clamp_lt(double v) {
    if (v > 1.0 + 1e-9 && !g_clamp_warned.exchange(true))
        std::fprintf(stderr, "lt_irs_interference: clamping transform value %.3e to 1\n", v);
    return std::clamp(v, 0.0, 1.0);
}

} // namespace

double lt_irs_interference(double s, LinkMode mode, const ScenarioConfig& sc,
                           double irs_exclusion_lmin, double bs_exclusion_l) {
    if (!(s >= 0.0)) throw DomainError("lt_irs_interference: s must be >= 0");
    if (s == 0.0) return 1.0;
    IrModeStats st = ir_mode_stats(mode, sc, irs_exclusion_lmin);
    if (st.z.mu_base == 0.0) return 1.0;
    double h = sc.height_bs_m - sc.height_irs_m;
    double R = sc.disk_radius_m;
    if (!(bs_exclusion_l >= 0.0) || bs_exclusion_l >= R)
        throw DomainError("lt_irs_interference: bs_exclusion_l must be in [0, R)");
    double p = st.P_tx * sc.beta_sq();
    double k1 = s * p * st.z.mu_base;
    double k2 = s * p * s * p * st.z.var_base / 2.0;
    double Xhi = x_of_l(bs_exclusion_l, h, sc.alpha);
    double XR = x_of_l(R, h, sc.alpha);

    // series only while the damped exponent keeps the alternating sum short
    // of cancellation; otherwise integrate the PGFL kernel directly
    if (k1 * Xhi + k2 * Xhi * Xhi < 20.0) {
        int order = std::max(sc.taylor_order, 4);
        SeriesEval prev = damped_series(k1, k2, Xhi, XR, sc.alpha, order);
        while (prev.ok && order <= 640) {
            SeriesEval next = damped_series(k1, k2, Xhi, XR, sc.alpha, 2 * order);
            if (!next.ok) {
                prev.ok = false;
                break;
            }
            if (std::abs(next.value - prev.value) <=
                1e-12 * std::max(std::abs(next.value), 1e-300)) {
                double expo = 2.0 * kPi * sc.lambda_bs_per_m2 * (4.0 / sc.alpha) * next.value;
                return clamp_lt(std::exp(expo));
            }
            prev = next;
            order *= 2;
        }
    }

    auto integrand = [&](double l) {
        double X = x_of_l(l, h, sc.alpha);
        return (1.0 - std::exp(-k1 * X - k2 * X * X)) * l;
    };
    QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    spec.abs_tol = 1e-14;
    QuadResult q = integrate_interval(integrand, bs_exclusion_l, R, spec);
    return clamp_lt(std::exp(-2.0 * kPi * sc.lambda_bs_per_m2 * q.value));
}

namespace {

// (4/alpha) integral of (1 - exp(-k1 X + k2g X^2)) X^{-2/alpha-1} dX over
// [XR, Xhi], the PGFL exponent after substituting X = (l^2/4 + h^2)^-alpha/2.
// On the imaginary axis Re k2g < 0 extinguishes the exponential past
// sqrt(40 / -Re k2g), capping the phase k1 X at a few turns; the tail where
// only the constant 1 survives integrates in closed form. ln X as the
// quadrature variable resolves the small-X weight mass and the large-X
// oscillation at comparable cost.
std::complex<double> damped_cf_integral(std::complex<double> k1, std::complex<double> k2g,
                                        double Xhi, double XR, double alpha) {
    double w = -2.0 / alpha;
    double damp = -k2g.real();
    double Xcut = Xhi;
    if (damp > 0.0) Xcut = std::min(Xcut, std::sqrt(40.0 / damp));
    if (Xcut <= XR) return 2.0 * (std::pow(XR, w) - std::pow(Xhi, w));
    auto f = [&](double y) -> std::complex<double> {
        double X = std::exp(y);
        std::complex<double> e = std::exp(-k1 * X + k2g * (X * X));
        return (1.0 - e) * ((4.0 / alpha) * std::pow(X, w));
    };
    QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    spec.abs_tol = 1e-10;
    CQuadResult q = integrate_interval_c(f, std::log(XR), std::log(Xcut), spec);
    std::complex<double> I = q.value;
    if (Xcut < Xhi) I += 2.0 * (std::pow(Xcut, w) - std::pow(Xhi, w));
    return I;
}

} // namespace

std::complex<double> lt_irs_interference(std::complex<double> s, LinkMode mode,
                                         const ScenarioConfig& sc, double irs_exclusion_lmin,
                                         double bs_exclusion_l) {
    if (std::abs(s) == 0.0) return 1.0;
    IrModeStats st = ir_mode_stats(mode, sc, irs_exclusion_lmin);
    if (st.z.mu_base == 0.0) return 1.0;
    double h = sc.height_bs_m - sc.height_irs_m;
    double R = sc.disk_radius_m;
    if (!(bs_exclusion_l >= 0.0) || bs_exclusion_l >= R)
        throw DomainError("lt_irs_interference: bs_exclusion_l must be in [0, R)");
    std::complex<double> sp = s * st.P_tx * sc.beta_sq();
    std::complex<double> k1 = sp * st.z.mu_base;
    std::complex<double> k2g = sp * sp * st.z.var_base / 2.0; // exact Gaussian sign: -k1 X + k2g X^2
    double Xhi = x_of_l(bs_exclusion_l, h, sc.alpha);
    double XR = x_of_l(R, h, sc.alpha);
    std::complex<double> I = damped_cf_integral(k1, k2g, Xhi, XR, sc.alpha);
    return std::exp(-2.0 * kPi * sc.lambda_bs_per_m2 * I);
}

double ir_mean(LinkMode mode, const ScenarioConfig& sc, double irs_exclusion_lmin) {
    IrModeStats st = ir_mode_stats(mode, sc, irs_exclusion_lmin);
    double h = sc.height_bs_m - sc.height_irs_m;
    double R = sc.disk_radius_m;
    double p1 = 1.0 - 2.0 / sc.alpha;
    double X0 = x_of_l(0.0, h, sc.alpha);
    double XR = x_of_l(R, h, sc.alpha);
    double integral = (4.0 / sc.alpha) * (std::pow(X0, p1) - std::pow(XR, p1)) / p1;
    return 2.0 * kPi * sc.lambda_bs_per_m2 * st.P_tx * sc.beta_sq() * st.z.mu_base * integral;
}

IrCfKernel::IrCfKernel(LinkMode mode, const ScenarioConfig& sc, double irs_exclusion_lmin,
                       double bs_exclusion_l) {
    IrModeStats st = ir_mode_stats(mode, sc, irs_exclusion_lmin);
    double h = sc.height_bs_m - sc.height_irs_m;
    double R = sc.disk_radius_m;
    if (!(bs_exclusion_l >= 0.0) || bs_exclusion_l >= R)
        throw DomainError("ir_cf_kernel: bs_exclusion_l must be in [0, R)");
    p_ = st.P_tx * sc.beta_sq();
    lambda_ = sc.lambda_bs_per_m2;
    alpha_ = sc.alpha;
    mu_base_ = st.z.mu_base;
    var_base_ = st.z.var_base;
    Xhi_ = x_of_l(bs_exclusion_l, h, alpha_);
    XR_ = x_of_l(R, h, alpha_);
    if (mu_base_ == 0.0) return;
    if (!(var_base_ > 0.0)) throw DomainError("ir_cf_kernel: var_base must be > 0");
    double p1 = 1.0 - 2.0 / alpha_;
    double p2 = 2.0 - 2.0 / alpha_;
    J1_ = (4.0 / alpha_) * (std::pow(Xhi_, p1) - std::pow(XR_, p1)) / p1;
    J2_ = (4.0 / alpha_) * (std::pow(Xhi_, p2) - std::pow(XR_, p2)) / p2;
    T_inf_ = 2.0 * (std::pow(XR_, -2.0 / alpha_) - std::pow(Xhi_, -2.0 / alpha_));
    // from phase onset at the inner rim to damping cutoff at the outer rim
    double v_lo = 1e-3 / (mu_base_ * Xhi_);
    double v_hi = std::sqrt(80.0 / var_base_) / XR_;
    constexpr int per_decade = 64;
    int n = std::max(2, static_cast<int>(std::ceil(std::log10(v_hi / v_lo) * per_decade)) + 1);
    lv0_ = std::log(v_lo);
    dlv_ = (std::log(v_hi) - lv0_) / (n - 1);
    table_.resize(n);
    for (int k = 0; k < n; ++k) {
        double v = std::exp(lv0_ + k * dlv_);
        std::complex<double> k1(0.0, -v * mu_base_); // sp = -j v
        std::complex<double> k2g(-v * v * var_base_ / 2.0, 0.0);
        table_[k] = damped_cf_integral(k1, k2g, Xhi_, XR_, alpha_);
    }
}

std::complex<double> IrCfKernel::exponent_at(double v) const {
    double x = (std::log(v) - lv0_) / dlv_;
    if (x <= 0.0)
        return {v * v * (var_base_ + mu_base_ * mu_base_) * J2_ / 2.0, -v * mu_base_ * J1_};
    if (x >= static_cast<double>(table_.size()) - 1.0) return T_inf_;
    int i = static_cast<int>(x);
    double t = x - i;
    auto at = [&](int j) {
        return table_[static_cast<std::size_t>(std::clamp(j, 0, static_cast<int>(table_.size()) - 1))];
    };
    std::complex<double> p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
    return 0.5 * (2.0 * p1 + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (t * t) +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * (t * t * t));
}

std::complex<double> IrCfKernel::cf(double w) const {
    if (mu_base_ == 0.0 || w == 0.0) return 1.0;
    std::complex<double> e = std::exp(-2.0 * kPi * lambda_ * exponent_at(std::abs(w) * p_));
    return w > 0.0 ? e : std::conj(e);
}

const IrCfKernel& ir_cf_kernel(LinkMode mode, const ScenarioConfig& sc, double irs_exclusion_lmin,
                               double bs_exclusion_l) {
    static std::mutex cache_mu;
    static std::map<std::array<double, 7>, std::unique_ptr<IrCfKernel>> cache;
    IrModeStats st = ir_mode_stats(mode, sc, irs_exclusion_lmin);
    double h = sc.height_bs_m - sc.height_irs_m;
    std::array<double, 7> key{st.P_tx * sc.beta_sq(),
                              sc.lambda_bs_per_m2,
                              sc.alpha,
                              st.z.mu_base,
                              st.z.var_base,
                              x_of_l(bs_exclusion_l, h, sc.alpha),
                              x_of_l(sc.disk_radius_m, h, sc.alpha)};
    std::lock_guard<std::mutex> lock(cache_mu);
    auto& slot = cache[key];
    if (!slot)
        slot = std::make_unique<IrCfKernel>(mode, sc, irs_exclusion_lmin, bs_exclusion_l);
    return *slot;
}

} // namespace irsnet
