#include "irsnet/quadrature.hpp"
#include "irsnet/util.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace irsnet {

namespace {

// Kronrod 15 abscissae/weights with embedded Gauss 7 (QUADPACK dqk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> kWg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <typename T>
struct Segment {
    double a, b;
    T value;
    double error;
};

template <typename T, typename F>
Segment<T> gk15(const F& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    T fc = f(c);
    T resk = kWgk[7] * fc;
    T resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        T f1 = f(c - x);
        T f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    Segment<T> s;
    s.a = a;
    s.b = b;
    s.value = resk * h;
    // |K15 - G7| overestimates the Kronrod error, which is the safe direction.
    s.error = std::abs(resk - resg) * std::abs(h);
    return s;
}

template <typename T, typename F>
void adaptive(const F& f, double a, double b, const QuadratureSpec& spec, T& value, double& error,
              int& subdivisions, bool& converged) {
    std::vector<Segment<T>> segs;
    segs.push_back(gk15<T>(f, a, b));
    subdivisions = 1;
    for (;;) {
        T total{};
        double err_total = 0.0;
        for (const auto& s : segs) {
            total += s.value;
            err_total += s.error;
        }
        double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (err_total <= tol) {
            value = total;
            error = err_total;
            converged = true;
            return;
        }
        if (subdivisions >= spec.max_subdivisions) {
            value = total;
            error = err_total;
            converged = false;
            return;
        }
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[worst].error) worst = i;
        Segment<T> s = segs[worst];
        double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b)) { // interval exhausted at double precision
            value = total;
            error = err_total;
            converged = err_total <= 10.0 * tol;
            return;
        }
        segs[worst] = gk15<T>(f, s.a, mid);
        segs.push_back(gk15<T>(f, mid, s.b));
        ++subdivisions;
    }
}

} // namespace

QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              const QuadratureSpec& spec) {
    QuadResult r;
    if (a == b) {
        r.converged = true;
        return r;
    }
    adaptive<double>(f, a, b, spec, r.value, r.error, r.subdivisions, r.converged);
    return r;
}

CQuadResult integrate_interval_c(const std::function<std::complex<double>(double)>& f, double a,
                                 double b, const QuadratureSpec& spec) {
    CQuadResult r;
    if (a == b) {
        r.converged = true;
        return r;
    }
    adaptive<std::complex<double>>(f, a, b, spec, r.value, r.error, r.subdivisions, r.converged);
    return r;
}

QuadResult integrate_semiinf(const std::function<double(double)>& f, const QuadratureSpec& spec) {
    // t = e^y turns (0, inf) into the real line; unit-y octaves are extended in
    // both directions until three consecutive segments are negligible.
    auto g = [&f](double y) {
        double t = std::exp(y);
        return f(t) * t;
    };
    QuadratureSpec seg_spec = spec;
    seg_spec.abs_tol = std::max(spec.abs_tol * 1e-2, 1e-300);
    seg_spec.max_subdivisions = std::max(50, spec.max_subdivisions / 4);

    KahanSum total;
    double err_total = 0.0;
    int segments_used = 0;
    const double y_cap_hi = std::log(spec.upper_cutoff);
    const double y_cap_lo = -700.0;

    auto add_segment = [&](double ya, double yb) {
        QuadResult r = integrate_interval(g, ya, yb, seg_spec);
        total.add(r.value);
        err_total += r.error;
        ++segments_used;
        return std::abs(r.value);
    };

    add_segment(-1.0, 1.0);
    auto tol_now = [&] {
        return std::max(spec.abs_tol, spec.rel_tol * std::abs(total.value()));
    };

    int quiet = 0;
    double y = 1.0;
    while (quiet < 3 && y < y_cap_hi) {
        double ynext = std::min(y + 1.0 + 0.25 * (y - 1.0), y_cap_hi);
        double c = add_segment(y, ynext);
        quiet = (c < 0.1 * tol_now()) ? quiet + 1 : 0;
        y = ynext;
    }
    bool hi_ok = quiet >= 3;

    quiet = 0;
    y = -1.0;
    while (quiet < 3 && y > y_cap_lo) {
        double ynext = std::max(y - 1.0 - 0.25 * (-1.0 - y), y_cap_lo);
        double c = add_segment(ynext, y);
        quiet = (c < 0.1 * tol_now()) ? quiet + 1 : 0;
        y = ynext;
    }
    bool lo_ok = quiet >= 3;

    QuadResult out;
    out.value = total.value();
    out.error = err_total;
    out.subdivisions = segments_used;
    out.converged = hi_ok && lo_ok;
    if (!out.converged)
        throw QuadratureError("integrate_semiinf: octave extension hit the cutoff before decaying",
                              out.value, out.error);
    return out;
}

namespace {

struct Gl64 {
    std::array<double, 64> nodes{};
    std::array<double, 64> weights{};
    Gl64() {
        // Newton iteration on P_64; roots symmetric about 0, mapped to (0, 1).
        const int n = 64;
        for (int i = 0; i < n / 2; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double w = 2.0 / ((1.0 - x * x) * pp * pp);
            nodes[i] = 0.5 * (1.0 - x);
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
    }
};

const Gl64& gl64() {
    static const Gl64 rule;
    return rule;
}

} // namespace

const std::array<double, 64>& gl64_nodes01() { return gl64().nodes; }
const std::array<double, 64>& gl64_weights01() { return gl64().weights; }

} // namespace irsnet
