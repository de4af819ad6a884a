#include "irsnet/signal.hpp"
#include "irsnet/specfun.hpp"
#include "irsnet/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

namespace irsnet {

void CascadeGeometry::validate() const {
    if (!(r00 > 0.0) || !(t0j > 0.0)) throw DomainError("cascade: distances must be > 0");
    if (!(alpha >= 2.0)) throw DomainError("cascade: alpha must be >= 2");
    if (!(P > 0.0) || !(beta_gain > 0.0)) throw DomainError("cascade: P, beta_gain must be > 0");
}

double CascadeGeometry::channel_const() const {
    return P * beta_gain * beta_gain * std::pow(r00, -alpha) * std::pow(t0j, -alpha);
}

double AqWeights::row_weight(std::size_t n) const {
    KahanSum w;
    for (std::size_t k = 0; k < n_elements; ++k) w.add(a[n * n_elements + k]);
    return w.value();
}

namespace {

double wrap_angle(double x) {
    double y = std::fmod(x, 2.0 * kPi);
    if (y < 0.0) y += 2.0 * kPi;
    return y;
}

} // namespace

FadingRealization sample_fading(std::size_t N, double sigma, RandomStream& rng) {
    FadingRealization fad;
    fad.f_mag.resize(N);
    fad.g_mag.resize(N);
    fad.f_phase.resize(N);
    fad.g_phase.resize(N);
    for (std::size_t n = 0; n < N; ++n) {
        fad.f_mag[n] = sample_rayleigh(sigma, rng);
        fad.g_mag[n] = sample_rayleigh(sigma, rng);
        fad.f_phase[n] = 2.0 * kPi * rng.uniform();
        fad.g_phase[n] = 2.0 * kPi * rng.uniform();
    }
    return fad;
}

PhaseConfig optimal_phases(const std::vector<double>& g_phases,
                           const std::vector<double>& f_phases) {
    if (g_phases.size() != f_phases.size())
        throw DomainError("optimal_phases: phase lists differ in length");
    PhaseConfig cfg;
    cfg.mode = PhaseMode::optimal;
    cfg.thetas.resize(g_phases.size());
    for (std::size_t n = 0; n < g_phases.size(); ++n)
        cfg.thetas[n] = wrap_angle(g_phases[n] + f_phases[n]);
    return cfg;
}

PhaseConfig random_phases(std::size_t N, RandomStream& rng) {
    PhaseConfig cfg;
    cfg.mode = PhaseMode::random;
    cfg.thetas.resize(N);
    for (std::size_t n = 0; n < N; ++n) cfg.thetas[n] = 2.0 * kPi * rng.uniform();
    return cfg;
}

std::vector<double> beta_residuals(const FadingRealization& fad, const PhaseConfig& phases) {
    if (phases.thetas.size() != fad.size())
        throw DomainError("beta_residuals: phase config does not match realization");
    std::vector<double> beta(fad.size());
    for (std::size_t n = 0; n < fad.size(); ++n)
        beta[n] = phases.thetas[n] - fad.g_phase[n] - fad.f_phase[n];
    return beta;
}

double signal_gain(const FadingRealization& fad, const PhaseConfig& phases) {
    std::vector<double> beta = beta_residuals(fad, phases);
    KahanSum re, im;
    for (std::size_t n = 0; n < fad.size(); ++n) {
        double m = fad.f_mag[n] * fad.g_mag[n];
        re.add(m * std::cos(beta[n]));
        im.add(m * std::sin(beta[n]));
    }
    return re.value() * re.value() + im.value() * im.value();
}

double signal_power(const FadingRealization& fad, const PhaseConfig& phases,
                    const CascadeGeometry& geo) {
    geo.validate();
    return geo.channel_const() * signal_gain(fad, phases);
}

AqWeights aq_weights(const std::vector<double>& beta_residuals) {
    std::size_t N = beta_residuals.size();
    AqWeights w;
    w.n_elements = N;
    w.a.resize(N * N);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k < N; ++k)
            w.a[n * N + k] = std::cos(beta_residuals[n] - beta_residuals[k]);
    return w;
}

AqWeights aq_weights_optimal(std::size_t N) {
    AqWeights w;
    w.n_elements = N;
    w.a.assign(N * N, 1.0);
    return w;
}

namespace {

template <typename T>
T factor_base(T c, double kappa) {
    // E[exp(-c G^2)] = z^kappa I(kappa, z) / Gamma(kappa), z = 1/sqrt(2c);
    // the direct D-function form overflows through exp(z^2/4) long before
    // the factor itself leaves (0, 1]
    T z = 1.0 / std::sqrt(2.0 * c);
    T zk = std::exp(kappa * std::log(z));
    return zk * pcf_integral(kappa, z) / std::exp(ln_gamma(kappa));
}

template <typename T>
T factor_series(T c, double kappa) {
    // E[G^{2m}] = Gamma(kappa+2m)/Gamma(kappa); next term < |c|^4 E[G^8]/24
    double m1 = kappa * (kappa + 1.0);
    double m2 = m1 * (kappa + 2.0) * (kappa + 3.0);
    double m3 = m2 * (kappa + 4.0) * (kappa + 5.0);
    return T(1.0) - c * m1 + c * c * (m2 / 2.0) - c * c * c * (m3 / 6.0);
}

template <typename T>
T factor_asymptotic(T c, double kappa) {
    // expand e^{-u} inside (1/Gamma(kappa)) int u^{kappa-1} e^{-u-cu^2} du:
    // sum_m (-1)^m Gamma((kappa+m)/2) c^{-(kappa+m)/2} / (2 Gamma(kappa) m!)
    T rinv = std::pow(c, -0.5);
    T p = std::pow(c, -0.5 * kappa);
    T sum = 0.0;
    double fact = 1.0;
    for (int m = 0; m <= 10; ++m) {
        if (m > 0) fact *= m;
        T term = p * (std::exp(ln_gamma((kappa + m) * 0.5)) / fact);
        sum += (m % 2 != 0) ? -term : term;
        p *= rinv;
    }
    return sum / (2.0 * std::exp(ln_gamma(kappa)));
}

// log-factor along c = i u, cubic-interpolated in ln u; every coverage
// transform evaluates on this ray, so the quadrature runs once per node
// instead of once per characteristic-function call
struct FactorRayTable {
    double lu0 = 0.0;
    double dlu = 0.0;
    std::vector<std::complex<double>> lf;
};

constexpr double kFactorSeriesCut = 1e-4;
constexpr double kFactorAsymptoticCut = 1e6;

FactorRayTable build_factor_ray_table(double kappa) {
    constexpr int per_decade = 128;
    constexpr double u_lo = 1e-5, u_hi = 1e7; // one pad decade past each cut
    FactorRayTable t;
    t.lu0 = std::log(u_lo);
    t.dlu = std::log(10.0) / per_decade;
    int n = static_cast<int>(std::lround(std::log10(u_hi / u_lo))) * per_decade + 1;
    t.lf.resize(n);
    double prev_ph = 0.0;
    for (int k = 0; k < n; ++k) {
        double u = std::exp(t.lu0 + k * t.dlu);
        std::complex<double> f = factor_base(std::complex<double>(0.0, u), kappa);
        double ph = std::arg(f);
        while (ph - prev_ph > kPi) ph -= 2.0 * kPi;
        while (ph - prev_ph < -kPi) ph += 2.0 * kPi;
        t.lf[k] = {std::log(std::abs(f)), ph};
        prev_ph = ph;
    }
    return t;
}

const FactorRayTable& factor_ray_table(double kappa) {
    static std::mutex mu;
    static std::map<double, std::unique_ptr<FactorRayTable>> cache;
    thread_local double memo_kappa = std::numeric_limits<double>::quiet_NaN();
    thread_local const FactorRayTable* memo = nullptr;
    if (memo != nullptr && memo_kappa == kappa) return *memo;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[kappa];
    if (!slot) slot = std::make_unique<FactorRayTable>(build_factor_ray_table(kappa));
    memo_kappa = kappa;
    memo = slot.get();
    return *memo;
}

bool ray_lookup(const FactorRayTable& t, double u, std::complex<double>& out) {
    double x = (std::log(u) - t.lu0) / t.dlu;
    int i = static_cast<int>(std::floor(x));
    if (i < 1 || i + 2 >= static_cast<int>(t.lf.size())) return false;
    double s = x - i;
    const std::complex<double>&p0 = t.lf[i - 1], &p1 = t.lf[i], &p2 = t.lf[i + 1],
                               &p3 = t.lf[i + 2];
    std::complex<double> v =
        0.5 * (2.0 * p1 + (-p0 + p2) * s + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (s * s) +
               (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * (s * s * s));
    out = std::exp(v);
    return true;
}

double factor_eval(double c, double kappa) {
    if (c <= kFactorSeriesCut) return factor_series(c, kappa);
    if (c >= kFactorAsymptoticCut) return factor_asymptotic(c, kappa);
    return factor_base(c, kappa);
}

std::complex<double> factor_eval(std::complex<double> c, double kappa) {
    if (c.imag() < 0.0) return std::conj(factor_eval(std::conj(c), kappa));
    double u = std::abs(c);
    if (u <= kFactorSeriesCut) return factor_series(c, kappa);
    if (u >= kFactorAsymptoticCut) return factor_asymptotic(c, kappa);
    if (c.real() <= 1e-9 * u) {
        std::complex<double> v;
        if (ray_lookup(factor_ray_table(kappa), u, v)) return v;
    }
    return factor_base(c, kappa);
}

template <typename S>
S lt_signal_impl(S s, const CascadeGeometry& geo, const AqWeights& weights,
                 const GammaApproxParams& gg) {
    geo.validate();
    if (weights.n_elements == 0) throw DomainError("lt_signal: empty weights");
    double cgeo = geo.channel_const();
    double z2 = gg.zeta * gg.zeta;
    std::vector<double> w(weights.n_elements);
    for (std::size_t n = 0; n < weights.n_elements; ++n)
        w[n] = std::abs(weights.row_weight(n));
    std::sort(w.begin(), w.end());
    // equal row weights (the aligned case collapses to one) share a factor
    S prod = 1.0;
    std::size_t i = 0;
    while (i < w.size()) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        S a_hat = s * (cgeo * w[i]);
        if (std::abs(a_hat) >= 1e-12) { // below that the factor saturates to 1
            S f = factor_eval(a_hat * z2, gg.kappa);
            for (std::size_t k = i; k < j; ++k) prod *= f;
        }
        i = j;
    }
    return prod;
}

} // namespace

double gg_square_lt_factor(double c, double kappa) {
    if (!(c >= 0.0)) throw DomainError("gg_square_lt_factor: c must be >= 0");
    if (c < 1e-300) return 1.0;
    return factor_eval(c, kappa);
}

std::complex<double> gg_square_lt_factor(std::complex<double> c, double kappa) {
    if (c.real() < 0.0) throw DomainError("gg_square_lt_factor: Re c must be >= 0");
    if (std::abs(c) < 1e-300) return 1.0;
    return factor_eval(c, kappa);
}

double lt_signal(double s, const CascadeGeometry& geo, const AqWeights& weights,
                 const GammaApproxParams& gg) {
    if (!(s >= 0.0)) throw DomainError("lt_signal: s must be >= 0");
    if (s == 0.0) return 1.0;
    double v = lt_signal_impl(s, geo, weights, gg);
    return std::min(v, 1.0);
}

std::complex<double> lt_signal(std::complex<double> s, const CascadeGeometry& geo,
                               const AqWeights& weights, const GammaApproxParams& gg) {
    if (s.real() < 0.0) throw DomainError("lt_signal: Re s must be >= 0");
    if (std::abs(s) == 0.0) return 1.0;
    return lt_signal_impl(s, geo, weights, gg);
}

double lt_signal_random(double s, const CascadeGeometry& geo, std::size_t N,
                        std::size_t n_draws, RandomStream& rng,
                        const GammaApproxParams& gg) {
    if (N == 0 || n_draws == 0) throw DomainError("lt_signal_random: N, n_draws must be >= 1");
    KahanSum acc;
    std::vector<double> beta(N);
    for (std::size_t d = 0; d < n_draws; ++d) {
        for (std::size_t n = 0; n < N; ++n) beta[n] = 2.0 * kPi * rng.uniform();
        acc.add(lt_signal(s, geo, aq_weights(beta), gg));
    }
    return acc.value() / static_cast<double>(n_draws);
}

SignalMoments mean_var_signal_optimal(const CascadeGeometry& geo, std::size_t N,
                                      const GammaApproxParams& gg) {
    geo.validate();
    if (N == 0) throw DomainError("mean_var_signal_optimal: N must be >= 1");
    GGMoments m = gg_moments(gg_from_gamma(gg));
    double cgeo = geo.channel_const();
    double n2 = static_cast<double>(N) * static_cast<double>(N);
    return {cgeo * n2 * m.mean, cgeo * cgeo * n2 * m.variance};
}

} // namespace irsnet
