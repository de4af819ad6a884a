#pragma once

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace irsnet {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-13;
    int max_subdivisions = 400;
    double upper_cutoff = 1e12; // truncation bound for semi-infinite oscillatory integrals
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double partial, double err_est)
        : std::runtime_error(what), partial_value(partial), error_estimate(err_est) {}
    double partial_value;
    double error_estimate;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

struct CQuadResult {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod 7/15 on a finite interval.
QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              const QuadratureSpec& spec = {});
CQuadResult integrate_interval_c(const std::function<std::complex<double>(double)>& f, double a,
                                 double b, const QuadratureSpec& spec = {});

// Integral over (0, inf) of a function with at worst an integrable singularity
// at 0; evaluated in log space with octave extension in both directions.
// Throws QuadratureError if the octave sums fail to stabilize.
QuadResult integrate_semiinf(const std::function<double(double)>& f,
                             const QuadratureSpec& spec = {});

// 64-point Gauss-Legendre rule on (0, 1); used for marginalizing over
// nearest-node distance laws through their quantile transforms.
const std::array<double, 64>& gl64_nodes01();
const std::array<double, 64>& gl64_weights01();

} // namespace irsnet
