#include "irsnet/specfun.hpp"
#include "irsnet/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace irsnet {

double ln_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("ln_gamma: requires x > 0");
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

namespace {

bool near_nonpositive_integer(double c) {
    if (c > 0.0) return false;
    return std::abs(c - std::round(c)) < 1e-12;
}

template <typename Z>
Z hyp2f1_series(double a, double b, double c, Z w) {
    // Plain Gauss series; caller guarantees |w| < 1.
    Z term{1.0};
    Z sum{1.0};
    const int max_terms = 2000000;
    for (int n = 0; n < max_terms; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * w;
        sum += term;
        if (std::abs(term) <= 1e-14 * std::abs(sum) && n > 4) return sum;
    }
    throw QuadratureError("gauss_2f1: series did not converge", std::abs(sum), std::abs(term));
}

template <typename Z>
Z hyp2f1_impl(double a, double b, double c, Z z) {
    if (near_nonpositive_integer(c)) throw DomainError("gauss_2f1: c is a nonpositive integer");
    if (std::abs(z) == 0.0) return Z{1.0};
    if (std::abs(z) < 0.5) return hyp2f1_series(a, b, c, z);
    // Pfaff transformation keeps the series argument inside the unit disk for
    // Re z <= 0: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)).
    Z w = z / (z - 1.0);
    return std::pow(1.0 - z, -a) * hyp2f1_series(a, c - b, c, w);
}

} // namespace

double gauss_2f1(double a, double b, double c, double z) {
    if (z > 0.0) throw DomainError("gauss_2f1: only the z <= 0 branch is supported");
    return hyp2f1_impl(a, b, c, z);
}

std::complex<double> gauss_2f1(double a, double b, double c, std::complex<double> z) {
    if (z.real() > 1e-12) throw DomainError("gauss_2f1: only the Re z <= 0 branch is supported");
    return hyp2f1_impl(a, b, c, z);
}

namespace {

// Watson asymptotic expansion of I(nu, z) for large |z|, Re z >= 0:
// I = sum_k (-1/2)^k / k! * Gamma(nu + 2k) / z^{nu + 2k}. Truncated at the
// smallest term; relative error below 1e-12 for |z| >= 20 with nu <= 6.
template <typename Z>
Z pcf_integral_asymptotic(double nu, Z z) {
    Z zp = std::pow(z, -nu);
    Z sum{0.0};
    double coef = std::exp(ln_gamma(nu));
    Z z2 = z * z;
    Z term = coef * zp;
    double last_mag = std::numeric_limits<double>::max();
    for (int k = 0; k < 20; ++k) {
        double mag = std::abs(term);
        if (mag >= last_mag) break;
        sum += term;
        if (mag <= 1e-17 * std::abs(sum)) break;
        last_mag = mag;
        term *= -0.5 * (nu + 2.0 * k) * (nu + 2.0 * k + 1.0) / ((k + 1.0) * z2);
    }
    return sum;
}

template <typename Z>
Z pcf_integral_impl(double nu, Z z) {
    if (!(nu > 0.0)) throw DomainError("pcf_integral: requires nu > 0");
    if (std::abs(z) >= 20.0) return pcf_integral_asymptotic(nu, z);

    QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    spec.abs_tol = 1e-15;
    spec.max_subdivisions = 600;

    auto integrand = [nu, z](double t) -> Z {
        return std::exp(Z{-0.5 * t * t} - z * t + (nu - 1.0) * std::log(t));
    };

    Z head;
    if (nu >= 1.0) {
        auto f = [&](double t) -> Z { return t <= 0.0 ? Z{0.0} : integrand(t); };
        head = integrate_interval_c([&](double t) { return Z(f(t)); }, 0.0, 1.0, spec).value;
    } else {
        // u = t^nu removes the endpoint singularity.
        double inv_nu = 1.0 / nu;
        auto f = [&](double u) -> Z {
            if (u <= 0.0) return Z{0.0};
            double t = std::pow(u, inv_nu);
            return inv_nu * std::exp(Z{-0.5 * t * t} - z * t);
        };
        head = integrate_interval_c([&](double u) { return Z(f(u)); }, 0.0, 1.0, spec).value;
    }

    Z total = head;
    double lo = 1.0;
    for (int k = 0; k < 12; ++k) {
        double hi = lo * 2.0;
        Z seg = integrate_interval_c([&](double t) { return Z(integrand(t)); }, lo, hi, spec).value;
        total += seg;
        if (std::abs(seg) < 1e-16 * std::abs(total) + 1e-300) break;
        lo = hi;
    }
    return total;
}

} // namespace

std::complex<double> pcf_integral(double nu, std::complex<double> z) {
    if (z.real() < -1e-12) throw DomainError("pcf_integral: requires Re z >= 0");
    return pcf_integral_impl(nu, z);
}

double pcf_integral(double nu, double z) {
    if (z < 0.0) throw DomainError("pcf_integral: requires z >= 0");
    return pcf_integral_impl(nu, std::complex<double>(z, 0.0)).real();
}

double parabolic_cylinder_D(double order, double z) {
    if (order > 0.0) throw DomainError("parabolic_cylinder_D: requires order <= 0");
    if (!(z > 0.0)) throw DomainError("parabolic_cylinder_D: requires z > 0");
    if (order == 0.0) return std::exp(-0.25 * z * z);
    double nu = -order;
    double integral = pcf_integral(nu, z);
    return std::exp(-0.25 * z * z - ln_gamma(nu) + std::log(integral));
}

TaylorCoeffs taylor_exp_quad(double k1, double k2, int order) {
    if (order < 1) throw DomainError("taylor_exp_quad: requires order >= 1");
    TaylorCoeffs out;
    out.k1 = k1;
    out.k2 = k2;
    out.coeffs.resize(static_cast<std::size_t>(order));
    double c_prev2 = 1.0; // c_0
    double c_prev1 = -k1; // c_1
    out.coeffs[0] = c_prev1;
    for (int i = 2; i <= order; ++i) {
        double ci = (-k1 * c_prev1 - 2.0 * k2 * c_prev2) / static_cast<double>(i);
        out.coeffs[static_cast<std::size_t>(i - 1)] = ci;
        c_prev2 = c_prev1;
        c_prev1 = ci;
    }
    return out;
}

namespace {

// One windowed truncation at cutoff W: (1/pi) int_0^W (1 - w/W)^2 Im[phi e^{jwx}]/w dw.
// Octave descent toward 0; each octave is chopped so no piece spans more than
// about a third of an oscillation period, then a single GK15 per piece.
double gp_windowed_integral(const std::function<std::complex<double>(double)>& char_fn, double x,
                            double W, double osc_rate, double abs_tol) {
    auto g = [&](double w) {
        std::complex<double> phase(std::cos(w * x), std::sin(w * x));
        double win = 1.0 - w / W;
        return (char_fn(w) * phase).imag() / w * win * win;
    };
    QuadratureSpec piece_spec;
    piece_spec.rel_tol = 1e-9;
    piece_spec.abs_tol = abs_tol * 1e-3;
    piece_spec.max_subdivisions = 60;

    KahanSum total;
    double hi = W;
    int quiet = 0;
    bool armed = false; // quiet octaves end the descent only below the bulk
    for (int k = 0; k < 64 && (!armed || quiet < 4); ++k) {
        double lo = hi * 0.5;
        double width = hi - lo;

        // envelope pre-scan: |phi| is a smooth envelope, so a few samples
        // bound the octave's contribution and let dead octaves above the
        // CF's support be skipped without paying for the oscillation pieces
        double env = 0.0;
        for (int i = 0; i <= 8; ++i) {
            double w = lo + width * (static_cast<double>(i) / 8.0);
            env = std::max(env, std::abs(char_fn(w)));
        }
        if (3.0 * env * width / lo < 0.02 * abs_tol) {
            if (armed) ++quiet;
            hi = lo;
            continue;
        }

        double periods = width * osc_rate / (2.0 * kPi);
        int n_pieces = std::clamp(static_cast<int>(std::ceil(periods * 3.0)), 1, 400000);
        double h = width / n_pieces;
        KahanSum octave;
        for (int i = 0; i < n_pieces; ++i) {
            double a = lo + i * h;
            double b = (i + 1 == n_pieces) ? hi : a + h;
            octave.add(integrate_interval(g, a, b, piece_spec).value);
        }
        total.add(octave.value());
        if (std::abs(octave.value()) < 0.05 * abs_tol) {
            if (armed) ++quiet;
        } else {
            armed = true;
            quiet = 0;
        }
        hi = lo;
    }
    // Remainder below the last octave: the integrand has a finite limit at 0.
    total.add(g(hi) * hi);
    return total.value() / kPi;
}

} // namespace

double gil_pelaez_ccdf(const std::function<std::complex<double>(double)>& char_fn, double threshold,
                       const QuadratureSpec& quad) {
    double p_tol = std::clamp(quad.abs_tol, 1e-7, 1e-2);

    // Oscillation rate of Im[phi(w) e^{jwx}]: |x| plus the CF's own phase rate,
    // which near 0 is E[X] = -Im phi'(0).
    double probe = 1e-4;
    double mean_est = 0.0;
    for (int i = 0; i < 8; ++i) {
        std::complex<double> p = char_fn(probe);
        if (std::abs(p.imag()) > 1e-12 || std::abs(1.0 - p.real()) > 1e-10) {
            mean_est = std::abs(p.imag()) / probe;
            break;
        }
        probe *= 100.0; // CF flat at this scale; look further out
    }
    double osc_rate = std::abs(threshold) + mean_est;
    if (osc_rate <= 0.0) osc_rate = 1.0;

    double W = 2.0e4 / osc_rate;
    if (W > quad.upper_cutoff) W = quad.upper_cutoff;
    double prev = gp_windowed_integral(char_fn, threshold, W, osc_rate, p_tol);
    for (int k = 0; k < 14; ++k) {
        W *= 2.0;
        double cur = gp_windowed_integral(char_fn, threshold, W, osc_rate, p_tol);
        if (std::abs(cur - prev) < 0.5 * p_tol) return clamp01(0.5 - cur);
        prev = cur;
        if (W > quad.upper_cutoff * 16.0)
            throw QuadratureError("gil_pelaez_ccdf: cutoff doubling did not stabilize",
                                  clamp01(0.5 - cur), std::abs(cur - prev));
    }
    return clamp01(0.5 - prev);
}

} // namespace irsnet
