#include "irsnet/channel.hpp"
#include "irsnet/interference.hpp"
#include "irsnet/metrics.hpp"
#include "irsnet/montecarlo.hpp"
#include "irsnet/scenario.hpp"
#include "irsnet/signal.hpp"
#include "irsnet/specfun.hpp"
#include "irsnet/util.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace irsnet;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTolerance = 3;

struct Options {
    std::string config;
    std::string out;
    std::string command = "analytic";
    std::string figure;
    std::string axis;
    std::vector<std::string> sets;
    std::uint64_t trials = 0; // 0: per-command default
    bool trials_given = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

// deterministic CSV writer: metadata comments, header, "%.12g" cells
class CsvFile {
public:
    explicit CsvFile(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file " + path);
    }
    void meta(const std::string& key, const std::string& value) {
        out_ << "# " << key << "=" << value << "\n";
    }
    void meta(const std::string& key, std::uint64_t value) {
        out_ << "# " << key << "=" << value << "\n";
    }
    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            out_ << (i ? "," : "") << cols[i];
        out_ << "\n";
    }
    void row(const std::vector<double>& cells) {
        char buf[32];
        for (std::size_t i = 0; i < cells.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.12g", cells[i]);
            out_ << (i ? "," : "") << buf;
        }
        out_ << "\n";
    }
    void row_named(const std::string& name, const std::vector<double>& cells) {
        char buf[32];
        out_ << name;
        for (double c : cells) {
            std::snprintf(buf, sizeof(buf), "%.12g", c);
            out_ << "," << buf;
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

ScenarioConfig make_scenario(const Options& opt) {
    ScenarioConfig sc;
    if (!opt.config.empty()) sc = load_scenario(opt.config);
    for (const std::string& kv : opt.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        apply_override(sc, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (opt.seed_given) sc.seed = opt.seed;
    if (opt.trials_given) sc.n_trials = opt.trials;
    sc.validate();
    return sc;
}

std::uint64_t pick_trials(const Options& opt, std::uint64_t fallback) {
    return opt.trials_given ? opt.trials : fallback;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                  static_cast<double>(n - 1));
    return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

struct AxisSpec {
    std::string key;
    std::vector<double> values;
};

AxisSpec parse_axis(const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--axis expects key=start:step:stop, got '" + spec + "'");
    AxisSpec axis;
    axis.key = spec.substr(0, eq);
    std::string range = spec.substr(eq + 1);
    double start, step, stop;
    char c1, c2;
    std::istringstream in(range);
    if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step == 0.0)
        throw ConfigError("--axis range must be start:step:stop with nonzero step, got '" +
                          range + "'");
    double n_real = (stop - start) / step;
    if (n_real < -1e-9) throw ConfigError("--axis range is empty");
    auto n = static_cast<std::size_t>(std::floor(n_real + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i) axis.values.push_back(start + step * static_cast<double>(i));
    return axis;
}

std::string format_value(double v) {
    char buf[32];
    // integer-valued axis points print without a decimal point so integer
    // config fields (n_elements, n_irs) accept them
    if (v == std::floor(v) && std::abs(v) < 1e15)
        std::snprintf(buf, sizeof(buf), "%.0f", v);
    else
        std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void emit_report_rows(CsvFile& csv, const MetricReport& rc, const MetricReport& rm) {
    csv.header({"metric", "conditional", "marginal"});
    csv.row_named("coverage_indirect", {rc.c_id, rm.c_id});
    csv.row_named("coverage_direct", {rc.c_d, rm.c_d});
    csv.row_named("coverage_overall", {rc.c, rm.c});
    csv.row_named("rate_indirect_bits", {rc.r_id, rm.r_id});
    csv.row_named("rate_direct_bits", {rc.r_d, rm.r_d});
    csv.row_named("rate_overall_bits", {rc.r, rm.r});
    csv.row_named("ee_indirect_bits_per_joule", {rc.ee_id, rm.ee_id});
    csv.row_named("ee_direct_bits_per_joule", {rc.ee_d, rm.ee_d});
    csv.row_named("ee_overall_bits_per_joule", {rc.ee, rm.ee});
    csv.row_named("user_fraction", {rc.a, rm.a});
}

int cmd_analytic(const Options& opt) {
    ScenarioConfig sc = make_scenario(opt);
    MetricReport cond = overall_metrics(sc, Conditioning::conditional);
    MetricReport marg = overall_metrics(sc, Conditioning::marginal);
    CsvFile csv(opt.out);
    csv.meta("command", "analytic");
    csv.meta("scenario_hash", sc.hash());
    csv.meta("seed", sc.seed);
    PowerModel pm = power_model(sc);
    emit_report_rows(csv, cond, marg);
    csv.row_named("power_indirect_w", {pm.p_id(), pm.p_id()});
    csv.row_named("power_direct_w", {pm.p_d(), pm.p_d()});
    return kExitOk;
}

int cmd_simulate(const Options& opt) {
    ScenarioConfig sc = make_scenario(opt);
    std::uint64_t trials = pick_trials(opt, sc.n_trials);
    TrialBatch batch = run_matched_batch(sc, trials, sc.seed);
    save_batch(batch, opt.out);
    std::printf("wrote %zu trials (seed %llu, scenario %016llx) to %s\n", batch.size(),
                static_cast<unsigned long long>(batch.seed),
                static_cast<unsigned long long>(batch.scenario_hash), opt.out.c_str());
    return kExitOk;
}

int cmd_validate(const Options& opt) {
    ScenarioConfig sc = make_scenario(opt);
    std::uint64_t trials = pick_trials(opt, sc.n_trials);
    std::vector<double> tau_grid;
    for (double db = -20.0; db <= 20.0 + 1e-9; db += 5.0)
        tau_grid.push_back(db_to_linear(db));
    ValidationReport report = validation_report(sc, tau_grid, trials);
    CsvFile csv(opt.out);
    csv.meta("command", "validate");
    csv.meta("scenario_hash", sc.hash());
    csv.meta("seed", sc.seed);
    csv.meta("trials", trials);
    csv.header({"series", "max_abs_gap", "mean_abs_gap", "tolerance", "pass"});
    for (const SeriesVerdict& v : report.series)
        csv.row_named(v.name, {v.max_abs_gap, v.mean_abs_gap, v.tolerance,
                               v.pass ? 1.0 : 0.0});
    for (const SeriesVerdict& v : report.series)
        std::printf("%-18s max gap %.4f  mean gap %.4f  tol %.3f  %s\n", v.name.c_str(),
                    v.max_abs_gap, v.mean_abs_gap, v.tolerance, v.pass ? "pass" : "FAIL");
    return report.all_pass ? kExitOk : kExitTolerance;
}

int cmd_sweep(const Options& opt) {
    if (opt.axis.empty()) throw ConfigError("sweep requires --axis key=start:step:stop");
    ScenarioConfig base = make_scenario(opt);
    AxisSpec axis = parse_axis(opt.axis);
    CsvFile csv(opt.out);
    csv.meta("command", "sweep");
    csv.meta("axis", axis.key);
    csv.meta("scenario_hash", base.hash());
    csv.meta("seed", base.seed);
    csv.header({axis.key, "c_id", "c_d", "c", "r_id_bits", "r_d_bits", "r_bits", "ee_id",
                "ee_d", "ee", "p_id_w", "p_d_w", "a"});
    for (double v : axis.values) {
        ScenarioConfig sc = base;
        apply_override(sc, axis.key, format_value(v));
        sc.validate();
        MetricReport m = overall_metrics(sc, Conditioning::conditional);
        PowerModel pm = power_model(sc);
        csv.row({v, m.c_id, m.c_d, m.c, m.r_id, m.r_d, m.r, m.ee_id, m.ee_d, m.ee,
                 pm.p_id(), pm.p_d(), m.a});
    }
    return kExitOk;
}

// signal-transform validation: analytic optimal/random LT against sampled
// cascade gains at the median conditioning distances
int emit_fig2(const Options& opt) {
    ScenarioConfig sc = make_scenario(opt);
    std::uint64_t trials = pick_trials(opt, 20000);

    double d0 = sc.d0_cond();
    double l0 = std::sqrt(std::max(0.0, d0 * d0 - sc.height_bs_m * sc.height_bs_m));
    double h = sc.height_bs_m - sc.height_irs_m;
    double t00 = std::sqrt(0.25 * l0 * l0 + h * h);
    CascadeGeometry geo{sc.r00_cond(), t00, sc.alpha, sc.power_indirect_w, sc.beta_gain()};
    std::size_t N = sc.n_elements;

    SignalMoments sm = mean_var_signal_optimal(geo, N);
    std::vector<double> s_grid = log_grid(0.01 / sm.mean, 30.0 / sm.mean, 15);

    AqWeights opt_w = aq_weights_optimal(N);
    std::vector<double> lt_opt(s_grid.size()), lt_rnd(s_grid.size());
    for (std::size_t i = 0; i < s_grid.size(); ++i)
        lt_opt[i] = lt_signal(s_grid[i], geo, opt_w);
    {
        RandomStream rng(sc.seed, 1);
        for (std::size_t i = 0; i < s_grid.size(); ++i)
            lt_rnd[i] = lt_signal_random(s_grid[i], geo, N, 2000, rng);
    }

    std::vector<double> draw_opt(trials), draw_rnd(trials);
    parallel_for_blocks(trials, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            RandomStream rng(sc.seed, 1000 + t);
            FadingRealization fad = sample_fading(N, kUnitPowerSigma, rng);
            PhaseConfig rnd = random_phases(N, rng);
            PhaseConfig best = optimal_phases(fad.g_phase, fad.f_phase);
            draw_opt[t] = signal_power(fad, best, geo);
            draw_rnd[t] = signal_power(fad, rnd, geo);
        }
    });
    auto emp_opt = empirical_lt(draw_opt, s_grid);
    auto emp_rnd = empirical_lt(draw_rnd, s_grid);

    CsvFile csv(opt.out);
    csv.meta("figure", "fig2");
    csv.meta("scenario_hash", sc.hash());
    csv.meta("seed", sc.seed);
    csv.meta("trials", trials);
    csv.header({"s", "lt_optimal_analytic", "lt_optimal_empirical", "lt_optimal_stderr",
                "lt_random_analytic", "lt_random_empirical", "lt_random_stderr"});
    for (std::size_t i = 0; i < s_grid.size(); ++i)
        csv.row({s_grid[i], lt_opt[i], emp_opt[i].value, emp_opt[i].std_error, lt_rnd[i],
                 emp_rnd[i].value, emp_rnd[i].std_error});
    return kExitOk;
}

// cascade-interference transform against matched-geometry draws for the four
// (M, P) corner scenarios
int emit_fig5(const Options& opt) {
    ScenarioConfig base = make_scenario(opt);
    std::uint64_t trials = pick_trials(opt, 4000);

    struct Combo {
        std::size_t m;
        double p;
    };
    std::vector<Combo> combos{{300, 1.0}, {300, 20.0}, {1500, 1.0}, {1500, 20.0}};

    ScenarioConfig strongest = base;
    strongest.n_irs = 1500;
    strongest.power_indirect_w = 20.0;
    strongest.validate();
    double mean_ref = ir_mean(LinkMode::indirect, strongest);
    std::vector<double> s_grid = log_grid(0.03 / mean_ref, 30.0 / mean_ref, 13);

    CsvFile csv(opt.out);
    csv.meta("figure", "fig5");
    csv.meta("scenario_hash", base.hash());
    csv.meta("seed", base.seed);
    csv.meta("trials", trials);
    std::vector<std::string> cols{"s"};
    for (const Combo& c : combos) {
        std::string tag = "m" + std::to_string(c.m) + "_p" + format_value(c.p);
        cols.push_back("lt_analytic_" + tag);
        cols.push_back("lt_empirical_" + tag);
        cols.push_back("lt_stderr_" + tag);
    }
    csv.header(cols);

    std::vector<std::vector<double>> analytic, emp, err;
    for (const Combo& c : combos) {
        ScenarioConfig sc = base;
        sc.n_irs = c.m;
        sc.power_indirect_w = c.p;
        sc.validate();
        std::vector<double> ana(s_grid.size());
        for (std::size_t i = 0; i < s_grid.size(); ++i)
            ana[i] = lt_irs_interference(s_grid[i], LinkMode::indirect, sc);
        TrialBatch batch = run_matched_batch(sc, trials, sc.seed);
        auto est = empirical_lt(batch, BatchColumn::i_r, s_grid);
        std::vector<double> ev(s_grid.size()), se(s_grid.size());
        for (std::size_t i = 0; i < s_grid.size(); ++i) {
            ev[i] = est[i].value;
            se[i] = est[i].std_error;
        }
        analytic.push_back(std::move(ana));
        emp.push_back(std::move(ev));
        err.push_back(std::move(se));
    }
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        std::vector<double> cells{s_grid[i]};
        for (std::size_t k = 0; k < combos.size(); ++k) {
            cells.push_back(analytic[k][i]);
            cells.push_back(emp[k][i]);
            cells.push_back(err[k][i]);
        }
        csv.row(cells);
    }
    return kExitOk;
}

// BS-interference transform against fixed-exclusion PPP draws, P_hat 1 and 20
int emit_fig6(const Options& opt) {
    ScenarioConfig base = make_scenario(opt);
    std::uint64_t trials = pick_trials(opt, 20000);
    double d0 = base.d0_cond();

    ScenarioConfig strongest = base;
    strongest.power_direct_w = 20.0;
    strongest.validate();
    double mean_ref = strongest.power_direct_w * strongest.beta_sq() * kPi *
                      strongest.lambda_bs_per_m2 / (d0 * d0); // alpha = 4 mean
    std::vector<double> s_grid = log_grid(0.03 / mean_ref, 30.0 / mean_ref, 13);

    CsvFile csv(opt.out);
    csv.meta("figure", "fig6");
    csv.meta("scenario_hash", base.hash());
    csv.meta("seed", base.seed);
    csv.meta("trials", trials);
    csv.header({"s", "lt_analytic_p1", "lt_empirical_p1", "lt_stderr_p1", "lt_analytic_p20",
                "lt_empirical_p20", "lt_stderr_p20"});

    std::vector<std::vector<double>> table;
    for (double p : {1.0, 20.0}) {
        ScenarioConfig sc = base;
        sc.power_direct_w = p;
        sc.validate();
        std::vector<double> ana(s_grid.size());
        for (std::size_t i = 0; i < s_grid.size(); ++i)
            ana[i] = lt_bs_interference(s_grid[i], d0, sc.lambda_bs_per_m2, p, sc.alpha,
                                        sc.beta_gain());
        auto draws = bs_interference_draws(sc, LinkMode::direct, d0, trials, sc.seed);
        auto est = empirical_lt(draws, s_grid);
        std::vector<double> ev(s_grid.size()), se(s_grid.size());
        for (std::size_t i = 0; i < s_grid.size(); ++i) {
            ev[i] = est[i].value;
            se[i] = est[i].std_error;
        }
        table.push_back(std::move(ana));
        table.push_back(std::move(ev));
        table.push_back(std::move(se));
    }
    for (std::size_t i = 0; i < s_grid.size(); ++i)
        csv.row({s_grid[i], table[0][i], table[1][i], table[2][i], table[3][i], table[4][i],
                 table[5][i]});
    return kExitOk;
}

// marginal coverage curves, analytic vs matched-oracle empirical
int emit_fig7(const Options& opt) {
    ScenarioConfig sc = make_scenario(opt);
    std::uint64_t trials = pick_trials(opt, sc.n_trials);
    std::vector<double> tau_db = linear_grid(-20.0, 20.0, 17);
    std::vector<double> tau_grid;
    for (double db : tau_db) tau_grid.push_back(db_to_linear(db));

    TrialBatch batch = run_conditional_batch(sc, trials, sc.seed);
    auto emp_id = empirical_coverage(batch, sc.noise_w, tau_grid, LinkMode::indirect);
    auto emp_d = empirical_coverage(batch, sc.noise_w, tau_grid, LinkMode::direct);

    CsvFile csv(opt.out);
    csv.meta("figure", "fig7");
    csv.meta("scenario_hash", sc.hash());
    csv.meta("seed", sc.seed);
    csv.meta("trials", trials);
    csv.meta("conditioning", "median");
    csv.header({"tau_dB", "C_ID_analytic", "C_ID_empirical", "C_D_analytic", "C_D_empirical",
                "C_ID_stderr", "C_D_stderr"});
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        double cid = coverage_indirect(sc, tau_grid[i], Conditioning::conditional);
        double cd = coverage_direct(sc, tau_grid[i], Conditioning::conditional);
        csv.row({tau_db[i], cid, emp_id[i].p, cd, emp_d[i].p, emp_id[i].std_error,
                 emp_d[i].std_error});
    }
    return kExitOk;
}

// conditional rate / energy efficiency against element count, direct power 1 and 5 W
int emit_fig89(const Options& opt, bool energy) {
    ScenarioConfig base = make_scenario(opt);
    base.n_irs = 1200;
    base.validate();

    CsvFile csv(opt.out);
    csv.meta("figure", energy ? "fig9" : "fig8");
    csv.meta("scenario_hash", base.hash());
    csv.meta("seed", base.seed);
    if (energy)
        csv.header({"n_elements", "p_id_w", "p_d_w", "ee_id_bits_per_joule",
                    "ee_d_p1_bits_per_joule", "ee_d_p5_bits_per_joule"});
    else
        csv.header({"n_elements", "r_id_bits", "r_d_p1_bits", "r_d_p5_bits"});
    const double ln2 = 0.69314718055994530942;
    for (std::size_t n = 10; n <= 150; n += 10) {
        ScenarioConfig sc = base;
        sc.n_elements = n;
        sc.validate();
        double r_id = ergodic_rate(LinkMode::indirect, sc, Conditioning::conditional) / ln2;
        PowerModel pm = power_model(sc);
        std::vector<double> cells{static_cast<double>(n)};
        if (energy) {
            cells.push_back(pm.p_id());
            cells.push_back(pm.p_d());
            cells.push_back(r_id / pm.p_id());
        } else {
            cells.push_back(r_id);
        }
        for (double p : {1.0, 5.0}) {
            ScenarioConfig scd = sc;
            scd.power_direct_w = p;
            scd.validate();
            double r_d = ergodic_rate(LinkMode::direct, scd, Conditioning::conditional) / ln2;
            cells.push_back(energy ? r_d / pm.p_d() : r_d);
        }
        csv.row(cells);
    }
    return kExitOk;
}

// conditional coverage and rate against element count for sparse/dense surfaces
int emit_fig10(const Options& opt) {
    ScenarioConfig base = make_scenario(opt);
    CsvFile csv(opt.out);
    csv.meta("figure", "fig10");
    csv.meta("scenario_hash", base.hash());
    csv.meta("seed", base.seed);
    csv.header({"n_elements", "c_id_m300", "c_d_m300", "r_id_m300_bits", "r_d_m300_bits",
                "c_id_m1500", "c_d_m1500", "r_id_m1500_bits", "r_d_m1500_bits"});
    const double ln2 = 0.69314718055994530942;
    for (std::size_t n = 10; n <= 150; n += 10) {
        std::vector<double> cells{static_cast<double>(n)};
        for (std::size_t m : {std::size_t{300}, std::size_t{1500}}) {
            ScenarioConfig sc = base;
            sc.n_irs = m;
            sc.n_elements = n;
            sc.validate();
            cells.push_back(coverage_indirect(sc, sc.tau, Conditioning::conditional));
            cells.push_back(coverage_direct(sc, sc.tau, Conditioning::conditional));
            cells.push_back(ergodic_rate(LinkMode::indirect, sc, Conditioning::conditional) / ln2);
            cells.push_back(ergodic_rate(LinkMode::direct, sc, Conditioning::conditional) / ln2);
        }
        csv.row(cells);
    }
    return kExitOk;
}

// surface count coupled to the served-user fraction through the intensity
// ratio: M(a) = a/(1-a) * lambda_B * pi R^2
std::size_t coupled_m(double a, const ScenarioConfig& sc) {
    double m = a / (1.0 - a) * sc.lambda_bs_per_m2 * kPi * sc.disk_radius_m * sc.disk_radius_m;
    return static_cast<std::size_t>(std::llround(std::max(1.0, m)));
}

// overall coverage (fig11) or power/energy efficiency (fig13) against the
// served-user fraction, N in {50, 100}
int emit_fig11_13(const Options& opt, bool energy) {
    ScenarioConfig base = make_scenario(opt);
    CsvFile csv(opt.out);
    csv.meta("figure", energy ? "fig13" : "fig11");
    csv.meta("scenario_hash", base.hash());
    csv.meta("seed", base.seed);
    if (energy)
        csv.header({"a", "m_coupled", "p_overall_n50_w", "ee_id_n50", "ee_d_n50", "ee_n50",
                    "p_overall_n100_w", "ee_id_n100", "ee_d_n100", "ee_n100"});
    else
        csv.header({"a", "m_coupled", "c_id_n50", "c_d_n50", "c_n50", "c_id_n100",
                    "c_d_n100", "c_n100"});
    for (double a = 0.05; a <= 0.95 + 1e-9; a += 0.05) {
        std::vector<double> cells{a, 0.0};
        for (std::size_t n : {std::size_t{50}, std::size_t{100}}) {
            ScenarioConfig sc = base;
            sc.n_elements = n;
            sc.n_irs = coupled_m(a, base);
            sc.validate();
            cells[1] = static_cast<double>(sc.n_irs);
            MetricReport m =
                overall_metrics(sc, Conditioning::conditional, UserMix{a, MixSource::intensity_ratio});
            PowerModel pm = power_model(sc);
            if (energy) {
                cells.push_back(a * pm.p_id() + (1.0 - a) * pm.p_d());
                cells.push_back(m.ee_id);
                cells.push_back(m.ee_d);
                cells.push_back(m.ee);
            } else {
                cells.push_back(m.c_id);
                cells.push_back(m.c_d);
                cells.push_back(m.c);
            }
        }
        csv.row(cells);
    }
    return kExitOk;
}

// conditional coverage and rate against surface count for two BS intensities
int emit_fig12(const Options& opt) {
    ScenarioConfig base = make_scenario(opt);
    base.n_elements = 100;
    base.validate();
    CsvFile csv(opt.out);
    csv.meta("figure", "fig12");
    csv.meta("scenario_hash", base.hash());
    csv.meta("seed", base.seed);
    csv.header({"n_irs", "c_id_lam1e4", "c_d_lam1e4", "r_id_lam1e4_bits", "r_d_lam1e4_bits",
                "c_id_lam5e5", "c_d_lam5e5", "r_id_lam5e5_bits", "r_d_lam5e5_bits"});
    const double ln2 = 0.69314718055994530942;
    for (std::size_t m = 200; m <= 3000; m += 200) {
        std::vector<double> cells{static_cast<double>(m)};
        for (double lam : {1e-4, 0.5e-4}) {
            ScenarioConfig sc = base;
            sc.n_irs = m;
            sc.lambda_bs_per_m2 = lam;
            sc.validate();
            cells.push_back(coverage_indirect(sc, sc.tau, Conditioning::conditional));
            cells.push_back(coverage_direct(sc, sc.tau, Conditioning::conditional));
            cells.push_back(ergodic_rate(LinkMode::indirect, sc, Conditioning::conditional) / ln2);
            cells.push_back(ergodic_rate(LinkMode::direct, sc, Conditioning::conditional) / ln2);
        }
        csv.row(cells);
    }
    return kExitOk;
}

int cmd_figure(const Options& opt) {
    if (opt.figure == "fig2") return emit_fig2(opt);
    if (opt.figure == "fig5") return emit_fig5(opt);
    if (opt.figure == "fig6") return emit_fig6(opt);
    if (opt.figure == "fig7") return emit_fig7(opt);
    if (opt.figure == "fig8") return emit_fig89(opt, false);
    if (opt.figure == "fig9") return emit_fig89(opt, true);
    if (opt.figure == "fig10") return emit_fig10(opt);
    if (opt.figure == "fig11") return emit_fig11_13(opt, false);
    if (opt.figure == "fig12") return emit_fig12(opt);
    if (opt.figure == "fig13") return emit_fig11_13(opt, true);
    throw ConfigError("unknown figure id '" + opt.figure +
                      "' (expected fig2, fig5..fig13)");
}

int run(const Options& opt) {
    if (opt.out.empty()) throw ConfigError("--out is required");
    if (opt.command == "analytic") return cmd_analytic(opt);
    if (opt.command == "simulate") return cmd_simulate(opt);
    if (opt.command == "validate") return cmd_validate(opt);
    if (opt.command == "sweep") return cmd_sweep(opt);
    if (opt.command == "figure") return cmd_figure(opt);
    throw ConfigError("unknown command '" + opt.command + "'");
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"stochastic-geometry analysis and simulation of IRS-assisted cellular downlinks"};
    app.add_option("--config", opt.config, "scenario file (key = value lines); defaults used if omitted");
    app.add_option("--out", opt.out, "output path (CSV, or binary batch for simulate)");
    app.add_option("--command", opt.command,
                   "analytic | simulate | validate | sweep | figure");
    app.add_option("--figure", opt.figure, "figure id for --command figure");
    app.add_option("--axis", opt.axis, "sweep axis, key=start:step:stop");
    auto* topt = app.add_option("--trials", opt.trials, "Monte-Carlo trial count override");
    auto* sopt = app.add_option("--seed", opt.seed, "random seed override");
    app.add_option("--set", opt.sets, "config override key=value (repeatable)");

    try {
        app.parse(argc, argv);
        opt.trials_given = topt->count() > 0;
        opt.seed_given = sopt->count() > 0;
        return run(opt);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    } catch (const irsnet::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
