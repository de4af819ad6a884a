#include "irsnet/scenario.hpp"
#include "irsnet/util.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace irsnet {

void ScenarioConfig::validate() const {
    auto fail = [](const char* what) { throw ConfigError(std::string("config invariant: ") + what); };
    if (!(lambda_bs_per_m2 > 0.0)) fail("lambda_bs_per_m2 > 0");
    if (!(disk_radius_m > 0.0)) fail("disk_radius_m > 0");
    if (!(height_bs_m > height_irs_m)) fail("height_bs_m > height_irs_m");
    if (!(height_irs_m >= 0.0)) fail("height_irs_m >= 0");
    if (!(alpha > 2.0)) fail("alpha > 2");
    if (!(power_indirect_w > 0.0)) fail("power_indirect_w > 0");
    if (!(power_direct_w > 0.0)) fail("power_direct_w > 0");
    if (!(fc_ghz > 0.0)) fail("fc_ghz > 0");
    if (!(noise_w >= 0.0)) fail("noise_w >= 0");
    if (n_elements < 1) fail("n_elements >= 1");
    if (!(tau > 0.0)) fail("tau > 0");
    if (!(p_bs_w >= 0.0) || !(p_user_w >= 0.0) || !(p_phase_w >= 0.0)) fail("static powers >= 0");
    if (!(blockage_eta_per_m >= 0.0) || !(blockage_u >= 0.0)) fail("blockage parameters >= 0");
    if (n_trials < 1) fail("n_trials >= 1");
    if (!(sim_bs_radius_m > 0.0)) fail("sim_bs_radius_m > 0");
    if (taylor_order < 1) fail("taylor_order >= 1");
    if (n_irs >= 1) deployment().validate(); // n_irs = 0 legal: direct mode without the disk
    if (!(sim_bs_radius_m >= disk_radius_m)) fail("sim_bs_radius_m >= disk_radius_m");
}

DeploymentParams ScenarioConfig::deployment() const {
    DeploymentParams dp;
    dp.lambda_B = lambda_bs_per_m2;
    dp.M = n_irs;
    dp.R = disk_radius_m;
    dp.H_B = height_bs_m;
    dp.H_R = height_irs_m;
    return dp;
}

double ScenarioConfig::beta_gain() const {
    return kSpeedOfLight / (4.0 * kPi * fc_ghz * 1e9);
}

double ScenarioConfig::beta_sq() const {
    double b = beta_gain();
    return b * b;
}

double ScenarioConfig::r00_cond() const {
    if (cond_r00_m > 0.0) return cond_r00_m;
    return nearest_irs_cdf_inv(0.5, deployment());
}

double ScenarioConfig::d0_cond() const {
    if (cond_d0_m > 0.0) return cond_d0_m;
    return nearest_bs_cdf_inv(0.5, deployment());
}

namespace {

struct FieldBinding {
    std::function<void(ScenarioConfig&, double)> set_num;
    std::function<void(ScenarioConfig&, bool)> set_bool;
    std::function<double(const ScenarioConfig&)> get; // canonical (stored) value
};

const std::map<std::string, FieldBinding>& field_table() {
    static const std::map<std::string, FieldBinding> table = [] {
        std::map<std::string, FieldBinding> t;
        auto num = [&t](const char* key, double ScenarioConfig::* f) {
            t[key] = {[f](ScenarioConfig& s, double v) { s.*f = v; }, nullptr,
                      [f](const ScenarioConfig& s) { return s.*f; }};
        };
        num("lambda_bs_per_m2", &ScenarioConfig::lambda_bs_per_m2);
        num("disk_radius_m", &ScenarioConfig::disk_radius_m);
        num("height_bs_m", &ScenarioConfig::height_bs_m);
        num("height_irs_m", &ScenarioConfig::height_irs_m);
        num("alpha", &ScenarioConfig::alpha);
        num("power_indirect_w", &ScenarioConfig::power_indirect_w);
        num("power_direct_w", &ScenarioConfig::power_direct_w);
        num("fc_ghz", &ScenarioConfig::fc_ghz);
        num("noise_w", &ScenarioConfig::noise_w);
        num("blockage_eta_per_m", &ScenarioConfig::blockage_eta_per_m);
        num("blockage_u", &ScenarioConfig::blockage_u);
        num("sim_bs_radius_m", &ScenarioConfig::sim_bs_radius_m);
        num("cond_r00_m", &ScenarioConfig::cond_r00_m);
        num("cond_d0_m", &ScenarioConfig::cond_d0_m);

        t["n_irs"] = {[](ScenarioConfig& s, double v) { s.n_irs = static_cast<std::size_t>(v); },
                      nullptr, [](const ScenarioConfig& s) { return double(s.n_irs); }};
        t["n_elements"] = {[](ScenarioConfig& s, double v) { s.n_elements = static_cast<std::size_t>(v); },
                           nullptr, [](const ScenarioConfig& s) { return double(s.n_elements); }};
        t["n_trials"] = {[](ScenarioConfig& s, double v) { s.n_trials = static_cast<std::uint64_t>(v); },
                         nullptr, [](const ScenarioConfig& s) { return double(s.n_trials); }};
        t["seed"] = {[](ScenarioConfig& s, double v) { s.seed = static_cast<std::uint64_t>(v); },
                     nullptr, [](const ScenarioConfig& s) { return double(s.seed); }};
        t["taylor_order"] = {[](ScenarioConfig& s, double v) { s.taylor_order = static_cast<int>(v); },
                             nullptr, [](const ScenarioConfig& s) { return double(s.taylor_order); }};

        // unit-converting keys; canonical value is the stored linear one
        t["tau_db"] = {[](ScenarioConfig& s, double v) { s.tau = db_to_linear(v); }, nullptr,
                       [](const ScenarioConfig& s) { return s.tau; }};
        t["p_bs_dbm"] = {[](ScenarioConfig& s, double v) { s.p_bs_w = dbm_to_watt(v); }, nullptr,
                         [](const ScenarioConfig& s) { return s.p_bs_w; }};
        t["p_user_dbm"] = {[](ScenarioConfig& s, double v) { s.p_user_w = dbm_to_watt(v); }, nullptr,
                           [](const ScenarioConfig& s) { return s.p_user_w; }};
        t["p_phase_mw"] = {[](ScenarioConfig& s, double v) { s.p_phase_w = v * 1e-3; }, nullptr,
                           [](const ScenarioConfig& s) { return s.p_phase_w; }};

        t["r_moment_verbatim"] = {nullptr,
                                  [](ScenarioConfig& s, bool v) { s.r_moment_verbatim = v; },
                                  [](const ScenarioConfig& s) { return double(s.r_moment_verbatim); }};
        t["blockage_scaled_direct"] = {nullptr,
                                       [](ScenarioConfig& s, bool v) { s.blockage_scaled_direct = v; },
                                       [](const ScenarioConfig& s) { return double(s.blockage_scaled_direct); }};
        return t;
    }();
    return table;
}

void apply_field(ScenarioConfig& sc, const std::string& key, const std::string& value,
                 const std::string& where) {
    auto it = field_table().find(key);
    if (it == field_table().end())
        throw ConfigError(where + ": unknown key '" + key + "'");
    const FieldBinding& fb = it->second;
    if (fb.set_bool) {
        if (value == "1" || value == "true")
            fb.set_bool(sc, true);
        else if (value == "0" || value == "false")
            fb.set_bool(sc, false);
        else
            throw ConfigError(where + ": field '" + key + "' expects 0/1/true/false, got '" + value + "'");
        return;
    }
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError(where + ": field '" + key + "' expects a number, got '" + value + "'");
    }
    while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
    if (pos != value.size())
        throw ConfigError(where + ": field '" + key + "' has trailing garbage in '" + value + "'");
    fb.set_num(sc, v);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

ScenarioConfig parse_scenario(std::istream& in) {
    ScenarioConfig sc;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = "line " + std::to_string(lineno);
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected key = value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(where + ": empty key or value");
        apply_field(sc, key, value, where);
    }
    sc.validate();
    return sc;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return parse_scenario(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void apply_override(ScenarioConfig& sc, const std::string& key, const std::string& value) {
    apply_field(sc, key, value, "override");
}

std::string ScenarioConfig::canonical() const {
    std::ostringstream out;
    for (const auto& [key, fb] : field_table()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", fb.get(*this));
        out << key << '=' << buf << '\n';
    }
    return out.str();
}

std::uint64_t ScenarioConfig::hash() const {
    return fnv1a64(canonical());
}

} // namespace irsnet
