#pragma once

#include "irsnet/rng.hpp"

#include <cstddef>
#include <vector>

namespace irsnet {

// Gamma fit to the product of two i.i.d. Rayleigh magnitudes. The shape/scale
// constants are for unit-scale (sigma = 1) Rayleighs; the product scales as
// sigma^2, so zeta carries that factor for other parameterizations.
struct GammaApproxParams {
    double kappa = 1.6467;
    double zeta = 0.9539;
};

struct GGParams {
    double a; // scale = zeta^2
    double d; // shape = kappa/2
    double p; // power = 1/2
};

struct NoncentralChiSqStats {
    double lambda_ncp;       // mu'^2 / sigma'^2 (moment-locked normalization)
    double mean;             // 1 + lambda, chi^2(1) units
    double variance;         // 2(1 + 2 lambda), chi^2(1) units
    int dof = 1;
    double scale;            // sigma'^2 = N sigma_x^2; physical Y moments are
                             // E[Y] = scale*mean, Var[Y] = scale^2*variance
    double lambda_text;      // (1/2) mu'/sigma'^2 as written in the derivation
};

// Unit-power convention: E[|h|^2] = 1 per channel, i.e. sigma = 1/sqrt(2).
inline constexpr double kUnitPowerSigma = 0.70710678118654752440;

double sample_rayleigh(double sigma, RandomStream& rng);

struct ProductMoments {
    double mean;     // sigma^2 pi / 2
    double variance; // 4 sigma^4 (1 - pi^2/16)
};
ProductMoments rayleigh_product_moments(double sigma);

GammaApproxParams gamma_approx_of_product();                 // sigma = 1 constants
GammaApproxParams gamma_approx_of_product(double sigma);     // zeta scaled by sigma^2

GGParams gg_from_gamma(const GammaApproxParams& g);

struct GGMoments {
    double mean;     // zeta^2 kappa (kappa+1)
    double variance; // zeta^4 Gamma(kappa+4)/Gamma(kappa) - mean^2
};
GGMoments gg_moments(const GGParams& p);

NoncentralChiSqStats noncentral_stats(std::size_t N, double sigma);

// Exact moments of Y = (sum of N i.i.d. Rayleigh products)^2 used by the
// interference statistics: E[Y] = mu'^2 + sigma'^2 and the Gaussian
// fourth-moment identity for E[Y^2].
struct YStats {
    double mean;
    double second_moment;
};
YStats y_stats_aligned(std::size_t N, double sigma);
// Random-phase inner sum: |CN(0, N E[x^2])|^2, exponential with mean N E[x^2].
YStats y_stats_random(std::size_t N, double sigma);

// O(1) sampler for A = sum of N i.i.d. Rayleigh-product magnitudes, built by
// N-fold numerical convolution of the exact product density z K0 / sigma-scaled
// and frozen into a uniform-u quantile table.
class ProductAmplitudeTable {
public:
    ProductAmplitudeTable(std::size_t N, double sigma, std::size_t grid = 8192,
                          std::size_t quantiles = 16384);
    double sample(RandomStream& rng) const;
    double mean() const { return mean_; }
    double variance() const { return var_; }

private:
    std::vector<double> q_; // quantiles_ + 1 entries
    double mean_ = 0.0;
    double var_ = 0.0;
};

} // namespace irsnet
