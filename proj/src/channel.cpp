#include "irsnet/channel.hpp"
#include "irsnet/specfun.hpp"
#include "irsnet/util.hpp"

#include <algorithm>
#include <cmath>

namespace irsnet {

double sample_rayleigh(double sigma, RandomStream& rng) {
    // |CN(0, 2 sigma^2)| = sigma * sqrt(2 E), E ~ Exp(1)
    return sigma * std::sqrt(2.0 * rng.exponential());
}

ProductMoments rayleigh_product_moments(double sigma) {
    if (!(sigma > 0.0)) throw DomainError("rayleigh_product_moments: sigma must be > 0");
    double s2 = sigma * sigma;
    double mean = s2 * kPi / 2.0;
    double variance = 4.0 * s2 * s2 * (1.0 - kPi * kPi / 16.0);
    return {mean, variance};
}

GammaApproxParams gamma_approx_of_product() { return {}; }

GammaApproxParams gamma_approx_of_product(double sigma) {
    if (!(sigma > 0.0)) throw DomainError("gamma_approx_of_product: sigma must be > 0");
    GammaApproxParams g;
    g.zeta *= sigma * sigma; // product amplitude scales as sigma^2
    return g;
}

GGParams gg_from_gamma(const GammaApproxParams& g) {
    // X ~ Gamma(kappa, zeta)  =>  X^2 ~ GG(a, d, p) with density
    // p x^{d-1} exp(-(x/a)^p) / (a^d Gamma(d/p))
    return {g.zeta * g.zeta, g.kappa / 2.0, 0.5};
}

GGMoments gg_moments(const GGParams& p) {
    if (!(p.a > 0.0) || !(p.d > 0.0) || !(p.p > 0.0))
        throw DomainError("gg_moments: a, d, p must be > 0");
    // E[X^k] = a^k Gamma((d+k)/p) / Gamma(d/p)
    double lg0 = ln_gamma(p.d / p.p);
    double m1 = p.a * std::exp(ln_gamma((p.d + 1.0) / p.p) - lg0);
    double m2 = p.a * p.a * std::exp(ln_gamma((p.d + 2.0) / p.p) - lg0);
    return {m1, m2 - m1 * m1};
}

NoncentralChiSqStats noncentral_stats(std::size_t N, double sigma) {
    if (N == 0) throw DomainError("noncentral_stats: N must be >= 1");
    ProductMoments pm = rayleigh_product_moments(sigma);
    double mu_p = static_cast<double>(N) * pm.mean;        // mean of the Gaussian sum
    double sig2_p = static_cast<double>(N) * pm.variance;  // its variance
    NoncentralChiSqStats st;
    st.lambda_ncp = mu_p * mu_p / sig2_p; // Y / sigma'^2 ~ chi^2_1(lambda)
    st.mean = 1.0 + st.lambda_ncp;
    st.variance = 2.0 * (1.0 + 2.0 * st.lambda_ncp);
    st.dof = 1;
    st.scale = sig2_p;
    st.lambda_text = 0.5 * mu_p / sig2_p; // as-printed form, kept for reference
    return st;
}

YStats y_stats_aligned(std::size_t N, double sigma) {
    if (N == 0) throw DomainError("y_stats_aligned: N must be >= 1");
    ProductMoments pm = rayleigh_product_moments(sigma);
    double mu_p = static_cast<double>(N) * pm.mean;
    double s2_p = static_cast<double>(N) * pm.variance;
    double mean = mu_p * mu_p + s2_p;
    // Gaussian fourth moment: E[(mu+sigma Z)^4]
    double second = mu_p * mu_p * mu_p * mu_p + 6.0 * mu_p * mu_p * s2_p + 3.0 * s2_p * s2_p;
    return {mean, second};
}

YStats y_stats_random(std::size_t N, double sigma) {
    if (N == 0) throw DomainError("y_stats_random: N must be >= 1");
    // uniform phases: the inner sum is CN(0, N E[x^2]), so Y ~ Exp with that mean
    double s2 = sigma * sigma;
    double ex2 = 4.0 * s2 * s2; // E[|f|^2] E[|g|^2]
    double mean = static_cast<double>(N) * ex2;
    return {mean, 2.0 * mean * mean};
}

namespace {

// density of |f||g| for i.i.d. Rayleigh(sigma): f(z) = z K0(z / sigma^2) / sigma^4
double product_density(double z, double sigma) {
    if (z <= 0.0) return 0.0;
    double s2 = sigma * sigma;
    double arg = z / s2;
    if (arg > 700.0) return 0.0; // K0 underflows
    return z * std::cyl_bessel_k(0.0, arg) / (s2 * s2);
}

// out = a (*) b on a common uniform grid, truncated to n bins
void convolve_masses(const std::vector<double>& a, const std::vector<double>& b,
                     std::vector<double>& out, std::size_t n) {
    auto last = [](const std::vector<double>& v) {
        std::size_t i = v.size();
        while (i > 0 && v[i - 1] <= 1e-320) --i;
        return i;
    };
    std::size_t la = last(a), lb = last(b);
    std::size_t lo = std::min(n, la + lb > 0 ? la + lb - 1 : 0);
    out.assign(n, 0.0);
    for (std::size_t k = 0; k < lo; ++k) {
        std::size_t i0 = (k + 1 > lb) ? k + 1 - lb : 0;
        std::size_t i1 = std::min(k + 1, la);
        double acc = 0.0;
        for (std::size_t i = i0; i < i1; ++i) acc += a[i] * b[k - i];
        out[k] = acc;
    }
    double mass = 0.0;
    for (double v : out) mass += v;
    if (!(mass > 0.0)) throw DomainError("convolve_masses: mass vanished");
    for (double& v : out) v /= mass;
}

} // namespace

ProductAmplitudeTable::ProductAmplitudeTable(std::size_t N, double sigma, std::size_t grid,
                                             std::size_t quantiles) {
    if (N == 0 || !(sigma > 0.0) || grid < 16 || quantiles < 16)
        throw DomainError("ProductAmplitudeTable: bad arguments");
    ProductMoments pm = rayleigh_product_moments(sigma);
    double nd = static_cast<double>(N);
    double zmax = nd * pm.mean + 12.0 * std::sqrt(nd * pm.variance);
    double h = zmax / static_cast<double>(grid);

    std::vector<double> base(grid);
    double mass = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
        base[i] = product_density(static_cast<double>(i) * h, sigma) * h;
        mass += base[i];
    }
    for (double& v : base) v /= mass;

    // N-fold convolution by binary powering; identity is a point mass at 0
    std::vector<double> result(grid, 0.0), tmp;
    result[0] = 1.0;
    std::size_t n = N;
    while (n > 0) {
        if (n & 1) {
            convolve_masses(result, base, tmp, grid);
            result.swap(tmp);
        }
        n >>= 1;
        if (n > 0) {
            convolve_masses(base, base, tmp, grid);
            base.swap(tmp);
        }
    }

    KahanSum m1, m2;
    for (std::size_t i = 0; i < grid; ++i) {
        double z = static_cast<double>(i) * h;
        m1.add(result[i] * z);
        m2.add(result[i] * z * z);
    }
    mean_ = m1.value();
    var_ = m2.value() - mean_ * mean_;

    // quantile table on a uniform u-grid; each node mass is spread over a
    // centered width-h bin so the tabulated law keeps the grid mean
    q_.assign(quantiles + 1, 0.0);
    double cum_prev = 0.0, cum = result[0];
    std::size_t bin = 0;
    for (std::size_t j = 0; j <= quantiles; ++j) {
        double u = static_cast<double>(j) / static_cast<double>(quantiles);
        if (j == quantiles) u = std::nextafter(1.0, 0.0);
        while (cum < u && bin + 1 < grid) {
            ++bin;
            cum_prev = cum;
            cum += result[bin];
        }
        double p = cum - cum_prev;
        double frac = (p > 0.0) ? (u - cum_prev) / p : 0.0;
        frac = std::clamp(frac, 0.0, 1.0);
        double z_lo = std::max(0.0, (static_cast<double>(bin) - 0.5) * h);
        double z_hi = (static_cast<double>(bin) + 0.5) * h;
        q_[j] = z_lo + (z_hi - z_lo) * frac;
    }
}

double ProductAmplitudeTable::sample(RandomStream& rng) const {
    double u = rng.uniform() * static_cast<double>(q_.size() - 1);
    std::size_t idx = std::min(static_cast<std::size_t>(u), q_.size() - 2);
    double frac = u - static_cast<double>(idx);
    return q_[idx] + (q_[idx + 1] - q_[idx]) * frac;
}

} // namespace irsnet
