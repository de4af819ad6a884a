#pragma once

#include "irsnet/scenario.hpp"

#include <cstddef>
#include <optional>

namespace irsnet {

// conditional fixes the link distances at their configured (default median)
// values; marginal integrates them against the nearest-node distance laws
enum class Conditioning { conditional, marginal };

// per-link power budget, watts
struct PowerModel {
    double p_bs = 10.0;
    double p_user = 0.01;
    double power_indirect = 20.0;
    double power_direct = 20.0;
    double p_phase_element = 0.078; // per reflecting element at the set resolution
    std::size_t n_elements = 50;

    double p_irs() const { return static_cast<double>(n_elements) * p_phase_element; }
    double p_id() const { return p_bs + p_user + power_indirect + p_irs(); }
    double p_d() const { return p_bs + p_user + power_direct; }
};

PowerModel power_model(const ScenarioConfig& sc);
double power_consumption(const PowerModel& pm, LinkMode mode);

enum class MixSource { intensity_ratio, blockage };

struct UserMix {
    double a = 0.0; // fraction of users served through the reflecting plane
    MixSource source = MixSource::intensity_ratio;
};

// intensity_ratio: a = lambda_R / (lambda_R + lambda_B), lambda_R = M/(pi R^2);
// blockage: a = 1 - exp(-(eta d0 + u)) with d0 < 0 resolving to the median
UserMix user_fraction(const ScenarioConfig& sc, MixSource source, double d0 = -1.0);

// P(SINR > tau) for the cascaded link, Gil-Pelaez inversion of the
// signal/interference transform product
double coverage_indirect(const ScenarioConfig& sc, double tau, Conditioning cond);

// P(SINR > tau) for the direct link, closed form in the transform products.
// With the blockage-scaled flag set the SINR is multiplied by the blockage
// fraction, i.e. the threshold inflates to tau / a.
double coverage_direct(const ScenarioConfig& sc, double tau, Conditioning cond,
                       std::optional<UserMix> mix = std::nullopt);

// moment-generating-function ergodic rate, nats per channel use
double ergodic_rate(LinkMode mode, const ScenarioConfig& sc, Conditioning cond);

// same quantity as the integral of coverage over the threshold,
// int_0^inf P(SINR > t)/(1 + t) dt; consistency check of the two routes
double rate_via_ccdf(LinkMode mode, const ScenarioConfig& sc, Conditioning cond);

// ergodic rate divided by the mode's power draw, nats per channel use per W
double energy_efficiency(LinkMode mode, const ScenarioConfig& sc, Conditioning cond);

struct MetricReport {
    double a = 0.0;                           // mixing fraction used
    double c_id = 0.0, c_d = 0.0, c = 0.0;    // coverage at the scenario tau
    double r_id = 0.0, r_d = 0.0, r = 0.0;    // bits per channel use
    double ee_id = 0.0, ee_d = 0.0, ee = 0.0; // bits per channel use per W
    Conditioning conditioning = Conditioning::marginal;
    bool rates_in_bits = true;
};

// mixture report; a = 0 / a = 1 reproduce the pure-mode metrics exactly.
// n_irs = 0 requires a = 0 and reports NaN for the indirect components.
MetricReport overall_metrics(const ScenarioConfig& sc, Conditioning cond,
                             std::optional<UserMix> mix = std::nullopt);

} // namespace irsnet
