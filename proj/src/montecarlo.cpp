#include "irsnet/montecarlo.hpp"

#include "irsnet/interference.hpp"
#include "irsnet/metrics.hpp"
#include "irsnet/specfun.hpp"
#include "irsnet/util.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace irsnet {

namespace {

double horiz2(const PlanarPoint& p) { return p.x * p.x + p.y * p.y; }

std::uint64_t pair_stream(std::size_t irs, std::size_t bs) {
    return (static_cast<std::uint64_t>(irs) << 32) | static_cast<std::uint64_t>(bs);
}

// BS-side hop draws for one (IRS, BS) pair, identical for every evaluation
// that touches the pair. Magnitude and phase are always consumed so aligned
// and phase-bearing passes stay on the same draw sequence.
struct HopDraw {
    double mag;
    double phase;
};
inline HopDraw next_hop(RandomStream& rs) {
    HopDraw h;
    h.mag = sample_rayleigh(kUnitPowerSigma, rs);
    h.phase = 2.0 * kPi * rs.uniform();
    return h;
}

} // namespace

double NetworkRealization::bs_dist3(std::size_t j) const {
    return std::sqrt(horiz2(bs_points[j]) + h_b * h_b);
}

double NetworkRealization::irs_dist3(std::size_t m) const {
    return std::sqrt(horiz2(irs_points[m]) + h_r * h_r);
}

double NetworkRealization::cascade_dist3(std::size_t m, std::size_t j) const {
    double dx = bs_points[j].x - irs_points[m].x;
    double dy = bs_points[j].y - irs_points[m].y;
    double dh = h_b - h_r;
    return std::sqrt(dx * dx + dy * dy + dh * dh);
}

NetworkRealization simulate_snapshot(const ScenarioConfig& sc, RandomStream& rng) {
    sc.validate();
    NetworkRealization net;
    net.h_b = sc.height_bs_m;
    net.h_r = sc.height_irs_m;
    net.alpha = sc.alpha;
    net.beta_sq = sc.beta_sq();
    net.p_ind = sc.power_indirect_w;
    net.p_dir = sc.power_direct_w;
    net.r_cov = sc.disk_radius_m;
    net.n_elements = sc.n_elements;

    net.bs_points = sample_ppp_disk(sc.lambda_bs_per_m2, sc.sim_bs_radius_m, rng);
    while (net.bs_points.empty())
        net.bs_points = sample_ppp_disk(sc.lambda_bs_per_m2, sc.sim_bs_radius_m, rng);
    if (sc.n_irs > 0) net.irs_points = sample_bpp_disk(sc.n_irs, sc.disk_radius_m, rng);

    net.serving_bs = 0;
    for (std::size_t j = 1; j < net.bs_points.size(); ++j)
        if (horiz2(net.bs_points[j]) < horiz2(net.bs_points[net.serving_bs])) net.serving_bs = j;
    net.serving_irs = 0;
    for (std::size_t m = 1; m < net.irs_points.size(); ++m)
        if (horiz2(net.irs_points[m]) < horiz2(net.irs_points[net.serving_irs])) net.serving_irs = m;

    net.exp_bs.resize(net.bs_points.size());
    for (double& e : net.exp_bs) e = rng.exponential();
    net.exp_direct = rng.exponential();

    std::size_t M = net.irs_points.size();
    std::size_t N = net.n_elements;
    net.user_mag.resize(M * N);
    net.user_phase.resize(M * N);
    for (std::size_t i = 0; i < M * N; ++i) {
        net.user_mag[i] = sample_rayleigh(kUnitPowerSigma, rng);
        net.user_phase[i] = 2.0 * kPi * rng.uniform();
    }

    net.fading_seed = rng.next_u64();

    net.phases.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
        if (m == net.serving_irs) {
            RandomStream rs(net.fading_seed, pair_stream(m, net.serving_bs));
            std::vector<double> g_ph(N), f_ph(N);
            for (std::size_t n = 0; n < N; ++n) {
                HopDraw h = next_hop(rs);
                g_ph[n] = h.phase;
                f_ph[n] = net.user_phase[m * N + n];
            }
            net.phases[m] = optimal_phases(g_ph, f_ph);
        } else {
            net.phases[m] = random_phases(N, rng);
        }
    }
    net.serving_irs_random = random_phases(N, rng);
    return net;
}

double exact_signal_indirect(const NetworkRealization& net) {
    if (net.irs_points.empty() || net.n_elements == 0) return 0.0;
    std::size_t m = net.serving_irs;
    std::size_t N = net.n_elements;
    double r00 = net.irs_dist3(m);
    double t00 = net.cascade_dist3(m, net.serving_bs);
    RandomStream rs(net.fading_seed, pair_stream(m, net.serving_bs));
    const PhaseConfig& cfg = net.phases[m];
    std::complex<double> inner{0.0, 0.0};
    for (std::size_t n = 0; n < N; ++n) {
        HopDraw h = next_hop(rs);
        double amp = net.user_mag[m * N + n] * h.mag;
        double ang = cfg.thetas[n] - h.phase - net.user_phase[m * N + n];
        inner += std::polar(amp, ang);
    }
    double gain = std::norm(inner);
    return net.p_ind * net.beta_sq * std::pow(r00, -net.alpha) * std::pow(t00, -net.alpha) * gain;
}

double exact_signal_direct(const NetworkRealization& net) {
    double d0 = net.bs_dist3(net.serving_bs);
    return net.p_dir * net.beta_sq * std::pow(d0, -net.alpha) * net.exp_direct;
}

double exact_bs_interference(const NetworkRealization& net, LinkMode mode) {
    double p = (mode == LinkMode::indirect) ? net.p_ind : net.p_dir;
    KahanSum sum;
    for (std::size_t j = 0; j < net.bs_points.size(); ++j) {
        if (j == net.serving_bs) continue;
        sum.add(std::pow(net.bs_dist3(j), -net.alpha) * net.exp_bs[j]);
    }
    return p * net.beta_sq * sum.value();
}

double exact_cascade_interference(const NetworkRealization& net, LinkMode mode,
                                  bool aligned_worst_case) {
    std::size_t M = net.irs_points.size();
    std::size_t N = net.n_elements;
    if (M == 0 || N == 0) return 0.0;
    double p = (mode == LinkMode::indirect) ? net.p_ind : net.p_dir;
    double r_cov2 = net.r_cov * net.r_cov;

    std::vector<double> ra(M);
    for (std::size_t m = 0; m < M; ++m) ra[m] = std::pow(net.irs_dist3(m), -net.alpha);

    KahanSum total;
    for (std::size_t j = 0; j < net.bs_points.size(); ++j) {
        if (horiz2(net.bs_points[j]) > r_cov2) continue;
        KahanSum acc;
        for (std::size_t m = 0; m < M; ++m) {
            if (mode == LinkMode::indirect && m == net.serving_irs) continue;
            const PhaseConfig& cfg = (mode == LinkMode::direct && m == net.serving_irs)
                                         ? net.serving_irs_random
                                         : net.phases[m];
            RandomStream rs(net.fading_seed, pair_stream(m, j));
            double gain;
            if (aligned_worst_case) {
                double t = 0.0;
                for (std::size_t n = 0; n < N; ++n) {
                    HopDraw h = next_hop(rs);
                    t += net.user_mag[m * N + n] * h.mag;
                }
                gain = t * t;
            } else {
                std::complex<double> inner{0.0, 0.0};
                for (std::size_t n = 0; n < N; ++n) {
                    HopDraw h = next_hop(rs);
                    double amp = net.user_mag[m * N + n] * h.mag;
                    double ang = cfg.thetas[n] - h.phase - net.user_phase[m * N + n];
                    inner += std::polar(amp, ang);
                }
                gain = std::norm(inner);
            }
            acc.add(ra[m] * std::pow(net.cascade_dist3(m, j), -net.alpha) * gain);
        }
        total.add(acc.value());
    }
    return p * net.beta_sq * total.value();
}

double worst_case_ir_bound(const NetworkRealization& net) {
    return exact_cascade_interference(net, LinkMode::indirect, true);
}

TrialBatch run_matched_batch(const ScenarioConfig& sc, std::uint64_t n_trials,
                             std::uint64_t seed) {
    sc.validate();
    TrialBatch batch;
    batch.seed = seed;
    batch.scenario_hash = sc.hash();
    batch.s_r0.resize(n_trials);
    batch.s_d0.resize(n_trials);
    batch.i_b.resize(n_trials);
    batch.i_r.resize(n_trials);
    batch.i_b_hat.resize(n_trials);
    batch.i_r_hat.resize(n_trials);

    const std::size_t M = sc.n_irs;
    const std::size_t N = sc.n_elements;
    const double alpha = sc.alpha;
    const double beta2 = sc.beta_sq();
    const double hb = sc.height_bs_m, hr = sc.height_irs_m;
    const double h = hb - hr;
    const double r_cov2 = sc.disk_radius_m * sc.disk_radius_m;

    // inner amplitude sampler for the aligned cascade; built once, read-only
    const ProductAmplitudeTable* table = nullptr;
    ProductAmplitudeTable table_store = (M > 0 && N > 0)
                                            ? ProductAmplitudeTable(N, kUnitPowerSigma)
                                            : ProductAmplitudeTable(1, kUnitPowerSigma);
    if (M > 0 && N > 0) table = &table_store;

    parallel_for_blocks(n_trials, [&](std::size_t begin, std::size_t end) {
        std::vector<double> ra;
        for (std::size_t t = begin; t < end; ++t) {
            RandomStream rng(seed, t);

            auto bs = sample_ppp_disk(sc.lambda_bs_per_m2, sc.sim_bs_radius_m, rng);
            while (bs.empty()) bs = sample_ppp_disk(sc.lambda_bs_per_m2, sc.sim_bs_radius_m, rng);
            std::size_t serving = 0;
            for (std::size_t j = 1; j < bs.size(); ++j)
                if (horiz2(bs[j]) < horiz2(bs[serving])) serving = j;
            double d0 = std::sqrt(horiz2(bs[serving]) + hb * hb);

            KahanSum ib_base;
            for (std::size_t j = 0; j < bs.size(); ++j) {
                if (j == serving) continue;
                double d = std::sqrt(horiz2(bs[j]) + hb * hb);
                ib_base.add(std::pow(d, -alpha) * rng.exponential());
            }
            batch.i_b[t] = sc.power_indirect_w * beta2 * ib_base.value();
            batch.i_b_hat[t] = sc.power_direct_w * beta2 * ib_base.value();

            auto irs = sample_bpp_disk(M, sc.disk_radius_m, rng);
            std::size_t nearest = 0;
            for (std::size_t m = 1; m < irs.size(); ++m)
                if (horiz2(irs[m]) < horiz2(irs[nearest])) nearest = m;

            // serving cascade, aligned inner sum, midpoint hop distance
            if (M > 0 && N > 0) {
                double tsum = 0.0;
                for (std::size_t n = 0; n < N; ++n)
                    tsum += sample_rayleigh(kUnitPowerSigma, rng) *
                            sample_rayleigh(kUnitPowerSigma, rng);
                double r00 = std::sqrt(horiz2(irs[nearest]) + hr * hr);
                double l0 = std::sqrt(std::max(0.0, d0 * d0 - hb * hb));
                double t00 = std::sqrt(0.25 * l0 * l0 + h * h);
                batch.s_r0[t] = sc.power_indirect_w * beta2 * std::pow(r00, -alpha) *
                                std::pow(t00, -alpha) * tsum * tsum;
            } else {
                batch.s_r0[t] = 0.0;
            }
            batch.s_d0[t] = sc.power_direct_w * beta2 * std::pow(d0, -alpha) * rng.exponential();

            ra.assign(irs.size(), 0.0);
            for (std::size_t m = 0; m < irs.size(); ++m)
                ra[m] = std::pow(std::sqrt(horiz2(irs[m]) + hr * hr), -alpha);

            KahanSum ir_acc, ir_hat_acc;
            if (M > 0 && N > 0) {
                for (std::size_t j = 0; j < bs.size(); ++j) {
                    double l2 = horiz2(bs[j]);
                    if (l2 > r_cov2) continue;
                    double tja = std::pow(std::sqrt(0.25 * l2 + h * h), -alpha);
                    KahanSum inner_ind, inner_dir;
                    for (std::size_t m = 0; m < irs.size(); ++m) {
                        if (m != nearest) {
                            double a = table->sample(rng);
                            inner_ind.add(ra[m] * a * a);
                        }
                        inner_dir.add(ra[m] * static_cast<double>(N) * rng.exponential());
                    }
                    ir_acc.add(tja * inner_ind.value());
                    ir_hat_acc.add(tja * inner_dir.value());
                }
            }
            batch.i_r[t] = sc.power_indirect_w * beta2 * ir_acc.value();
            batch.i_r_hat[t] = sc.power_direct_w * beta2 * ir_hat_acc.value();
        }
    });
    return batch;
}

TrialBatch run_matched_batch(const ScenarioConfig& sc) {
    return run_matched_batch(sc, sc.n_trials, sc.seed);
}

TrialBatch run_conditional_batch(const ScenarioConfig& sc, std::uint64_t n_trials,
                                 std::uint64_t seed) {
    sc.validate();
    TrialBatch batch;
    batch.seed = seed;
    batch.scenario_hash = sc.hash();
    batch.s_r0.resize(n_trials);
    batch.s_d0.resize(n_trials);
    batch.i_b.resize(n_trials);
    batch.i_r.resize(n_trials);
    batch.i_b_hat.resize(n_trials);
    batch.i_r_hat.resize(n_trials);

    const std::size_t M = sc.n_irs;
    const std::size_t N = sc.n_elements;
    const bool cascade = M > 0 && N > 0;
    const double alpha = sc.alpha;
    const double beta2 = sc.beta_sq();
    const double hb = sc.height_bs_m, hr = sc.height_irs_m;
    const double h = hb - hr;
    const double disk2 = sc.disk_radius_m * sc.disk_radius_m;
    const double rext2 = sc.sim_bs_radius_m * sc.sim_bs_radius_m;

    // same pinned medians and midpoint hop the conditional transforms use
    const double d0 = sc.d0_cond();
    const double l0_2 = std::max(0.0, d0 * d0 - hb * hb);
    const double t00 = std::sqrt(0.25 * l0_2 + h * h);
    double u_min = 0.0;
    GammaApproxParams gg = gamma_approx_of_product(kUnitPowerSigma);
    double sig_coef = 0.0;
    if (cascade) {
        double r00 = sc.r00_cond();
        u_min = std::max(0.0, r00 * r00 - hr * hr) / disk2;
        // collapsed aligned model: S = P b2 (r00 t00)^-a * N zeta^2 sum_q G_q^2
        sig_coef = sc.power_indirect_w * beta2 * std::pow(r00, -alpha) * std::pow(t00, -alpha) *
                   static_cast<double>(N) * gg.zeta * gg.zeta;
    }
    const double dir_coef = sc.power_direct_w * beta2 * std::pow(d0, -alpha);
    const double mean_b = sc.lambda_bs_per_m2 * kPi * (rext2 - l0_2);
    const double mean_r = sc.lambda_bs_per_m2 * kPi * disk2;

    const ProductAmplitudeTable* table = nullptr;
    ProductAmplitudeTable table_store = cascade ? ProductAmplitudeTable(N, kUnitPowerSigma)
                                                : ProductAmplitudeTable(1, kUnitPowerSigma);
    if (cascade) table = &table_store;

    parallel_for_blocks(n_trials, [&](std::size_t begin, std::size_t end) {
        std::vector<double> ra_ind, ra_dir;
        for (std::size_t t = begin; t < end; ++t) {
            RandomStream rng(seed, t);

            double qsum = 0.0;
            if (cascade) {
                for (std::size_t q = 0; q < N; ++q) {
                    double g = rng.gamma(gg.kappa, 1.0);
                    qsum += g * g;
                }
            }
            batch.s_r0[t] = sig_coef * qsum;
            batch.s_d0[t] = dir_coef * rng.exponential();

            // BS aggregate beyond the serving ring, marks shared across modes
            auto nb = rng.poisson(mean_b);
            KahanSum ib;
            for (std::uint64_t j = 0; j < nb; ++j) {
                double l2 = l0_2 + rng.uniform() * (rext2 - l0_2);
                ib.add(std::pow(l2 + hb * hb, -0.5 * alpha) * rng.exponential());
            }
            batch.i_b[t] = sc.power_indirect_w * beta2 * ib.value();
            batch.i_b_hat[t] = sc.power_direct_w * beta2 * ib.value();

            // reflected aggregates: BS disk of radius R, midpoint hop rule,
            // per-trial reflector radii shared across BSs
            KahanSum ir_acc, ir_hat_acc;
            if (cascade) {
                ra_ind.assign(M - 1, 0.0); // serving reflector excluded
                for (auto& v : ra_ind) {
                    double u = u_min + rng.uniform() * (1.0 - u_min);
                    v = std::pow(u * disk2 + hr * hr, -0.5 * alpha);
                }
                ra_dir.assign(M, 0.0); // direct users keep every reflector
                for (auto& v : ra_dir)
                    v = std::pow(rng.uniform() * disk2 + hr * hr, -0.5 * alpha);

                auto nr = rng.poisson(mean_r);
                for (std::uint64_t j = 0; j < nr; ++j) {
                    double tja = std::pow(0.25 * rng.uniform() * disk2 + h * h, -0.5 * alpha);
                    KahanSum inner_ind, inner_dir;
                    for (double rm : ra_ind) {
                        double a = table->sample(rng);
                        inner_ind.add(rm * a * a);
                    }
                    for (double rm : ra_dir)
                        inner_dir.add(rm * static_cast<double>(N) * rng.exponential());
                    ir_acc.add(tja * inner_ind.value());
                    ir_hat_acc.add(tja * inner_dir.value());
                }
            }
            batch.i_r[t] = sc.power_indirect_w * beta2 * ir_acc.value();
            batch.i_r_hat[t] = sc.power_direct_w * beta2 * ir_hat_acc.value();
        }
    });
    return batch;
}

namespace {

constexpr char kBatchMagic[4] = {'I', 'R', 'S', 'B'};
constexpr std::uint32_t kBatchVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

void write_column(std::ofstream& out, const std::vector<double>& col) {
    out.write(reinterpret_cast<const char*>(col.data()),
              static_cast<std::streamsize>(col.size() * sizeof(double)));
}

void read_column(std::ifstream& in, std::vector<double>& col, std::size_t n) {
    col.resize(n);
    in.read(reinterpret_cast<char*>(col.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
}

} // namespace

void save_batch(const TrialBatch& batch, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_batch: cannot open " + path);
    out.write(kBatchMagic, 4);
    write_pod(out, kBatchVersion);
    write_pod(out, batch.seed);
    write_pod(out, batch.scenario_hash);
    std::uint64_t n = batch.size();
    write_pod(out, n);
    write_column(out, batch.s_r0);
    write_column(out, batch.s_d0);
    write_column(out, batch.i_b);
    write_column(out, batch.i_r);
    write_column(out, batch.i_b_hat);
    write_column(out, batch.i_r_hat);
    if (!out) throw std::runtime_error("save_batch: write failed for " + path);
}

TrialBatch load_batch(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_batch: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kBatchMagic, 4) != 0)
        throw std::runtime_error("load_batch: bad magic in " + path);
    std::uint32_t version = 0;
    read_pod(in, version);
    if (version != kBatchVersion)
        throw std::runtime_error("load_batch: unsupported version in " + path);
    TrialBatch batch;
    read_pod(in, batch.seed);
    read_pod(in, batch.scenario_hash);
    std::uint64_t n = 0;
    read_pod(in, n);
    read_column(in, batch.s_r0, n);
    read_column(in, batch.s_d0, n);
    read_column(in, batch.i_b, n);
    read_column(in, batch.i_r, n);
    read_column(in, batch.i_b_hat, n);
    read_column(in, batch.i_r_hat, n);
    if (!in) throw std::runtime_error("load_batch: truncated file " + path);
    return batch;
}

const std::vector<double>& batch_column(const TrialBatch& batch, BatchColumn col) {
    switch (col) {
        case BatchColumn::s_r0: return batch.s_r0;
        case BatchColumn::s_d0: return batch.s_d0;
        case BatchColumn::i_b: return batch.i_b;
        case BatchColumn::i_r: return batch.i_r;
        case BatchColumn::i_b_hat: return batch.i_b_hat;
        case BatchColumn::i_r_hat: return batch.i_r_hat;
    }
    throw DomainError("batch_column: unknown column");
}

std::vector<double> bs_interference_draws(const ScenarioConfig& sc, LinkMode mode,
                                          double d0, std::uint64_t n_draws,
                                          std::uint64_t seed) {
    sc.validate();
    double hb = sc.height_bs_m;
    if (!(d0 >= hb)) throw DomainError("bs_interference_draws: d0 must be >= height_bs_m");
    double p = (mode == LinkMode::indirect) ? sc.power_indirect_w : sc.power_direct_w;
    double pb = p * sc.beta_sq();
    double l0_sq = d0 * d0 - hb * hb;
    double r_ext = sc.sim_bs_radius_m;
    double mean_count = sc.lambda_bs_per_m2 * kPi * (r_ext * r_ext - l0_sq);
    std::vector<double> out(n_draws);
    parallel_for_blocks(n_draws, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            RandomStream rng(seed, t);
            std::uint64_t n = rng.poisson(mean_count);
            KahanSum sum;
            for (std::uint64_t j = 0; j < n; ++j) {
                double l_sq = l0_sq + rng.uniform() * (r_ext * r_ext - l0_sq);
                sum.add(std::pow(l_sq + hb * hb, -0.5 * sc.alpha) * rng.exponential());
            }
            out[t] = pb * sum.value();
        }
    });
    return out;
}

std::vector<double> cascade_interference_draws(const ScenarioConfig& sc, LinkMode mode,
                                               bool aligned_worst_case,
                                               std::uint64_t n_draws, std::uint64_t seed) {
    sc.validate();
    std::vector<double> out(n_draws);
    parallel_for_blocks(n_draws, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            RandomStream rng(seed, t);
            NetworkRealization net = simulate_snapshot(sc, rng);
            out[t] = exact_cascade_interference(net, mode, aligned_worst_case);
        }
    });
    return out;
}

std::vector<LtEstimate> empirical_lt(const std::vector<double>& draws,
                                     const std::vector<double>& s_grid) {
    if (draws.empty()) throw DomainError("empirical_lt: no draws");
    std::vector<LtEstimate> out(s_grid.size());
    double n = static_cast<double>(draws.size());
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        double s = s_grid[k];
        KahanSum m1, m2;
        for (double v : draws) {
            double e = std::exp(-s * v);
            m1.add(e);
            m2.add(e * e);
        }
        double mean = m1.value() / n;
        double var = std::max(0.0, m2.value() / n - mean * mean);
        out[k] = LtEstimate{mean, std::sqrt(var / n)};
    }
    return out;
}

std::vector<LtEstimate> empirical_lt(const TrialBatch& batch, BatchColumn col,
                                     const std::vector<double>& s_grid) {
    return empirical_lt(batch_column(batch, col), s_grid);
}

std::vector<CoverageEstimate> empirical_coverage(const TrialBatch& batch, double noise_w,
                                                 const std::vector<double>& tau_grid,
                                                 LinkMode mode) {
    std::size_t n = batch.size();
    if (n == 0) throw DomainError("empirical_coverage: empty batch");
    std::vector<double> sinr(n);
    for (std::size_t t = 0; t < n; ++t) {
        if (mode == LinkMode::indirect)
            sinr[t] = batch.s_r0[t] / (batch.i_b[t] + batch.i_r[t] + noise_w);
        else
            sinr[t] = batch.s_d0[t] / (batch.i_b_hat[t] + batch.i_r_hat[t] + noise_w);
    }
    std::sort(sinr.begin(), sinr.end());
    const double z = 1.959963984540054; // 97.5% normal quantile
    std::vector<CoverageEstimate> out(tau_grid.size());
    double nn = static_cast<double>(n);
    for (std::size_t k = 0; k < tau_grid.size(); ++k) {
        auto it = std::lower_bound(sinr.begin(), sinr.end(), tau_grid[k]);
        double count = static_cast<double>(sinr.end() - it);
        double p = count / nn;
        double se = std::sqrt(p * (1.0 - p) / nn);
        double denom = 1.0 + z * z / nn;
        double center = (p + z * z / (2.0 * nn)) / denom;
        double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
        out[k] = CoverageEstimate{p, se, std::max(0.0, center - half),
                                  std::min(1.0, center + half)};
    }
    return out;
}

std::vector<CoverageEstimate> empirical_coverage(const ScenarioConfig& sc,
                                                 const std::vector<double>& tau_grid,
                                                 std::uint64_t n_trials, LinkMode mode) {
    TrialBatch batch = run_conditional_batch(sc, n_trials, sc.seed);
    return empirical_coverage(batch, sc.noise_w, tau_grid, mode);
}

ValidationReport validation_report(const std::vector<ValidationSeries>& targets) {
    ValidationReport report;
    for (const ValidationSeries& s : targets) {
        if (s.analytic.size() != s.grid.size() || s.empirical.size() != s.grid.size())
            throw DomainError("validation_report: series size mismatch in " + s.name);
        SeriesVerdict v;
        v.name = s.name;
        v.tolerance = s.tolerance;
        KahanSum abs_sum;
        for (std::size_t i = 0; i < s.grid.size(); ++i) {
            double gap = std::abs(s.analytic[i] - s.empirical[i]);
            v.max_abs_gap = std::max(v.max_abs_gap, gap);
            abs_sum.add(gap);
        }
        v.mean_abs_gap = s.grid.empty() ? 0.0 : abs_sum.value() / static_cast<double>(s.grid.size());
        v.pass = v.max_abs_gap <= v.tolerance;
        report.all_pass = report.all_pass && v.pass;
        report.series.push_back(std::move(v));
    }
    return report;
}

std::vector<ValidationSeries> coverage_validation_targets(const ScenarioConfig& sc,
                                                          const std::vector<double>& tau_grid,
                                                          std::uint64_t n_trials,
                                                          double tolerance) {
    TrialBatch batch = run_conditional_batch(sc, n_trials, sc.seed);

    ValidationSeries ind, dir;
    ind.name = "coverage_indirect";
    dir.name = "coverage_direct";
    ind.grid = dir.grid = tau_grid;
    ind.tolerance = dir.tolerance = tolerance;

    auto emp_ind = empirical_coverage(batch, sc.noise_w, tau_grid, LinkMode::indirect);
    auto emp_dir = empirical_coverage(batch, sc.noise_w, tau_grid, LinkMode::direct);
    for (std::size_t k = 0; k < tau_grid.size(); ++k) {
        ind.analytic.push_back(coverage_indirect(sc, tau_grid[k], Conditioning::conditional));
        dir.analytic.push_back(coverage_direct(sc, tau_grid[k], Conditioning::conditional));
        ind.empirical.push_back(emp_ind[k].p);
        dir.empirical.push_back(emp_dir[k].p);
    }
    return {std::move(ind), std::move(dir)};
}

ValidationReport validation_report(const ScenarioConfig& sc,
                                   const std::vector<double>& tau_grid,
                                   std::uint64_t n_trials, double tolerance) {
    return validation_report(coverage_validation_targets(sc, tau_grid, n_trials, tolerance));
}

} // namespace irsnet
