#pragma once

#include "irsnet/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace irsnet {

enum class LinkMode { indirect, direct };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key=value scenario description. All stored values are linear units;
// dB/dBm keys are converted once at parse time.
struct ScenarioConfig {
    // deployment
    double lambda_bs_per_m2 = 1e-4;
    std::size_t n_irs = 1500; // M
    double disk_radius_m = 700.0;
    double height_bs_m = 20.0;
    double height_irs_m = 10.0;
    double alpha = 4.0;

    // radio
    double power_indirect_w = 20.0; // P
    double power_direct_w = 20.0;   // P_hat
    double fc_ghz = 4.77;
    double noise_w = 1e-10;
    std::size_t n_elements = 50; // N per IRS
    double tau = 0.1;            // SINR threshold, linear (config key tau_db)

    // power consumption model
    double p_bs_w = 10.0;     // config key p_bs_dbm
    double p_user_w = 0.01;   // config key p_user_dbm
    double p_phase_w = 0.078; // config key p_phase_mw

    // user mix (blockage variant)
    double blockage_eta_per_m = 0.0;
    double blockage_u = 0.0;
    bool blockage_scaled_direct = false; // scale direct SINR by the mix fraction

    // numerics
    std::uint64_t n_trials = 100000;
    std::uint64_t seed = 1;
    double sim_bs_radius_m = 3000.0;
    int taylor_order = 20;
    double cond_r00_m = -1.0; // <0: condition on the median nearest-IRS distance
    double cond_d0_m = -1.0;  // <0: condition on the median nearest-BS distance
    bool r_moment_verbatim = false;

    void validate() const;
    DeploymentParams deployment() const;

    // per-hop amplitude gain at 1 m; the two-hop (and direct-link) power
    // factor used throughout is beta_gain()^2
    double beta_gain() const;
    double beta_sq() const;

    // conditioning distances, resolving <0 to the distribution medians
    double r00_cond() const;
    double d0_cond() const;

    std::uint64_t hash() const;
    std::string canonical() const;
};

// Parses `key = value` lines ('#' comments). Unknown keys, malformed values
// and failed invariants raise ConfigError naming the line and field.
ScenarioConfig parse_scenario(std::istream& in);
ScenarioConfig load_scenario(const std::string& path);
// applies a single key=value override (same syntax and checks as file lines)
void apply_override(ScenarioConfig& sc, const std::string& key, const std::string& value);

} // namespace irsnet
