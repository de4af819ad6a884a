#pragma once

#include "irsnet/geometry.hpp"
#include "irsnet/rng.hpp"
#include "irsnet/scenario.hpp"
#include "irsnet/signal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace irsnet {

// One full network draw with exact 3-D geometry. User-side cascade hops and
// the per-IRS phase configurations are stored; BS-side cascade hops are
// regenerated on demand from per-(IRS, BS) substreams of fading_seed, so the
// worst-case bound and the phase-bearing interference see identical fading.
struct NetworkRealization {
    std::vector<PlanarPoint> bs_points;  // PPP on the simulation disk
    std::vector<PlanarPoint> irs_points; // BPP on the coverage disk
    std::size_t serving_bs = 0;          // min 3-D distance
    std::size_t serving_irs = 0;         // min 3-D distance

    // user-side hop per IRS element, n_irs * n_elements, IRS-major
    std::vector<double> user_mag;
    std::vector<double> user_phase;
    // applied reflection config per IRS: optimal toward the typical user at
    // the serving IRS, i.i.d. uniform elsewhere (each interferer IRS aligns
    // to its own independently faded user)
    std::vector<PhaseConfig> phases;
    // uniform draw used for the serving IRS when the typical user is direct
    // and that IRS serves somebody else
    PhaseConfig serving_irs_random;

    std::vector<double> exp_bs; // per-BS direct-hop power draws, Exp(1)
    double exp_direct = 1.0;    // serving-BS direct-hop power draw

    std::uint64_t fading_seed = 0; // root of the (IRS, BS) cascade substreams

    double h_b = 20.0, h_r = 10.0, alpha = 4.0, beta_sq = 0.0;
    double p_ind = 20.0, p_dir = 20.0, r_cov = 700.0;
    std::size_t n_elements = 0;

    double bs_dist3(std::size_t j) const;
    double irs_dist3(std::size_t m) const;
    double cascade_dist3(std::size_t m, std::size_t j) const; // exact IRS-BS hop
};

// Draws BS/IRS positions, serving associations, user-side fading, phase
// configurations and direct-hop powers. All later aggregate evaluations are
// deterministic functions of the returned realization.
NetworkRealization simulate_snapshot(const ScenarioConfig& sc, RandomStream& rng);

// Exact-geometry aggregates: direct evaluation with 3-D hop distances, no
// midpoint or common-element-distance shortcuts. Cascade interference sums
// BSs whose horizontal distance lies within the coverage disk, matching the
// transform's integration range; the serving IRS is excluded in indirect mode
// and treated as an interferer (uniform config) in direct mode.
double exact_signal_indirect(const NetworkRealization& net);
double exact_signal_direct(const NetworkRealization& net);
double exact_bs_interference(const NetworkRealization& net, LinkMode mode);
double exact_cascade_interference(const NetworkRealization& net, LinkMode mode,
                                  bool aligned_worst_case = false);

// Per-trial aggregate columns from the distance-matched sampler: cascade hop
// distances follow the same midpoint rule as the transforms, inner amplitude
// sums come from the N-fold product-convolution table, so gaps against the
// closed forms measure fit error rather than geometric approximation error.
struct TrialBatch {
    std::uint64_t seed = 0;
    std::uint64_t scenario_hash = 0;
    std::vector<double> s_r0, s_d0, i_b, i_r, i_b_hat, i_r_hat;
    std::size_t size() const { return s_r0.size(); }
};

TrialBatch run_matched_batch(const ScenarioConfig& sc, std::uint64_t n_trials,
                             std::uint64_t seed);
TrialBatch run_matched_batch(const ScenarioConfig& sc); // sc.n_trials, sc.seed

// Matched sampler at the fixed median conditioning used by the conditional
// closed forms: cascade signal drawn from its fitted Gamma model, serving-BS
// and nearest-reflector distances pinned, interferer exclusions applied
// exactly. Gaps against the conditional transforms isolate inversion and
// level-2 fit error; exact-geometry deltas live in run_matched_batch.
TrialBatch run_conditional_batch(const ScenarioConfig& sc, std::uint64_t n_trials,
                                 std::uint64_t seed);

// Columnar binary persistence: "IRSB", u32 version, u64 seed, u64 scenario
// hash, u64 trial count, then the six float64 columns in declaration order.
// Byte layout is little-endian (host order on every supported target).
void save_batch(const TrialBatch& batch, const std::string& path);
TrialBatch load_batch(const std::string& path);

enum class BatchColumn { s_r0, s_d0, i_b, i_r, i_b_hat, i_r_hat };
const std::vector<double>& batch_column(const TrialBatch& batch, BatchColumn col);

// aggregate BS interference draws at a fixed exclusion distance d0: PPP on
// the annulus between the exclusion ring and the simulation radius
std::vector<double> bs_interference_draws(const ScenarioConfig& sc, LinkMode mode,
                                          double d0, std::uint64_t n_draws,
                                          std::uint64_t seed);

// exact-geometry cascade interference draws, one snapshot per draw
std::vector<double> cascade_interference_draws(const ScenarioConfig& sc, LinkMode mode,
                                               bool aligned_worst_case,
                                               std::uint64_t n_draws, std::uint64_t seed);

struct LtEstimate {
    double value = 0.0;
    double std_error = 0.0;
};
// mean of exp(-s X) over the draws with its standard error, per grid point
std::vector<LtEstimate> empirical_lt(const std::vector<double>& draws,
                                     const std::vector<double>& s_grid);
std::vector<LtEstimate> empirical_lt(const TrialBatch& batch, BatchColumn col,
                                     const std::vector<double>& s_grid);

struct CoverageEstimate {
    double p = 0.0;
    double std_error = 0.0;
    double wilson_lo = 0.0; // 95% score interval
    double wilson_hi = 0.0;
};
std::vector<CoverageEstimate> empirical_coverage(const TrialBatch& batch, double noise_w,
                                                 const std::vector<double>& tau_grid,
                                                 LinkMode mode);
// conditional-mode oracle (run_conditional_batch), the acceptance-suite
// counterpart of the conditional coverage closed forms
std::vector<CoverageEstimate> empirical_coverage(const ScenarioConfig& sc,
                                                 const std::vector<double>& tau_grid,
                                                 std::uint64_t n_trials, LinkMode mode);

// analytic-vs-oracle comparison with declared tolerances
struct ValidationSeries {
    std::string name;
    std::vector<double> grid;      // abscissae, linear units
    std::vector<double> analytic;  // model values on the grid
    std::vector<double> empirical; // oracle values on the grid
    double tolerance = 0.0;        // max-abs-gap threshold
};
struct SeriesVerdict {
    std::string name;
    double max_abs_gap = 0.0;
    double mean_abs_gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};
struct ValidationReport {
    std::vector<SeriesVerdict> series;
    bool all_pass = true;
};
ValidationReport validation_report(const std::vector<ValidationSeries>& targets);

// standard suite: conditional coverage, both link modes, one shared batch
std::vector<ValidationSeries> coverage_validation_targets(const ScenarioConfig& sc,
                                                          const std::vector<double>& tau_grid,
                                                          std::uint64_t n_trials,
                                                          double tolerance = 0.03);
ValidationReport validation_report(const ScenarioConfig& sc,
                                   const std::vector<double>& tau_grid,
                                   std::uint64_t n_trials, double tolerance = 0.03);

} // namespace irsnet
