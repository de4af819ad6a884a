#pragma once

#include "irsnet/channel.hpp"
#include "irsnet/rng.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace irsnet {

enum class PhaseMode { optimal, random, custom };

struct PhaseConfig {
    std::vector<double> thetas; // one reflection phase per element
    PhaseMode mode = PhaseMode::custom;
};

struct CascadeGeometry {
    double r00;       // user to nearest-IRS distance, m
    double t0j;       // nearest-IRS to serving-BS distance, m
    double alpha;     // path-loss exponent
    double P;         // transmit power, W
    double beta_gain; // per-hop amplitude gain at 1 m; two-hop power factor is beta_gain^2
    void validate() const;
    // P * beta_gain^2 * r00^-alpha * t0j^-alpha
    double channel_const() const;
};

struct AqWeights {
    std::vector<double> a; // N^2 entries cos(beta_n - beta_k), n-major
    std::size_t n_elements = 0;
    // row sum over k for fixed n; collapses the quadratic form to one weight
    // per element
    double row_weight(std::size_t n) const;
};

struct FadingRealization {
    std::vector<double> f_mag, g_mag;     // per-element hop magnitudes
    std::vector<double> f_phase, g_phase; // per-element hop phases
    std::size_t size() const { return f_mag.size(); }
};

FadingRealization sample_fading(std::size_t N, double sigma, RandomStream& rng);

PhaseConfig optimal_phases(const std::vector<double>& g_phases,
                           const std::vector<double>& f_phases);
PhaseConfig random_phases(std::size_t N, RandomStream& rng);

// residual beta_n = theta_n - psi_n - phi_n for a configured realization
std::vector<double> beta_residuals(const FadingRealization& fad, const PhaseConfig& phases);

// |sum_n m_n e^{j beta_n}|^2, the distance/power-free received gain
double signal_gain(const FadingRealization& fad, const PhaseConfig& phases);
double signal_power(const FadingRealization& fad, const PhaseConfig& phases,
                    const CascadeGeometry& geo);

AqWeights aq_weights(const std::vector<double>& beta_residuals);
AqWeights aq_weights_optimal(std::size_t N);

// Laplace transform of the scaled-GG signal model. Each element carries a
// squared-Gamma(kappa, zeta) term weighted by its residual-phase row sum;
// negative row sums enter by magnitude and |s * a_hat| < 1e-12 saturates the
// factor to 1. Default fit is the unit-power (sigma = 1/sqrt(2)) scaling.
double lt_signal(double s, const CascadeGeometry& geo, const AqWeights& weights,
                 const GammaApproxParams& gg = gamma_approx_of_product(kUnitPowerSigma));
std::complex<double> lt_signal(std::complex<double> s, const CascadeGeometry& geo,
                               const AqWeights& weights,
                               const GammaApproxParams& gg = gamma_approx_of_product(kUnitPowerSigma));

// random-phase LT: expectation over phase draws of the conditional product
double lt_signal_random(double s, const CascadeGeometry& geo, std::size_t N,
                        std::size_t n_draws, RandomStream& rng,
                        const GammaApproxParams& gg = gamma_approx_of_product(kUnitPowerSigma));

// single model factor E[exp(-c G^2)], G ~ Gamma(kappa, 1), evaluated stably
// through the parabolic-cylinder integral; exposed for transform assembly
double gg_square_lt_factor(double c, double kappa);
std::complex<double> gg_square_lt_factor(std::complex<double> c, double kappa);

// aggregate-gain moments under phase alignment, N^2-fold GG composition
struct SignalMoments {
    double mean;     // W
    double variance; // W^2
};
SignalMoments mean_var_signal_optimal(const CascadeGeometry& geo, std::size_t N,
                                      const GammaApproxParams& gg = gamma_approx_of_product(kUnitPowerSigma));

} // namespace irsnet
