#pragma once

#include "irsnet/quadrature.hpp"

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace irsnet {

class DomainError : public std::domain_error {
    using std::domain_error::domain_error;
};

// ln Gamma(x), x > 0.
double ln_gamma(double x);

// Gauss hypergeometric 2F1(a, b; c; z) on the z <= 0 branch required by the
// interference transform: direct series for |z| < 0.5, Pfaff z/(z-1)
// transformation otherwise.
double gauss_2f1(double a, double b, double c, double z);

// Same restricted evaluation with Re(z) <= 0 (argument stays off the [1, inf)
// branch cut after the Pfaff map); used on the characteristic-function axis.
std::complex<double> gauss_2f1(double a, double b, double c, std::complex<double> z);

// Parabolic cylinder function D_order(z) for order <= 0, z > 0, via the
// integral representation D_{-nu}(z) = e^{-z^2/4}/Gamma(nu) * pcf_integral(nu, z).
double parabolic_cylinder_D(double order, double z);

// I(nu, z) = integral_0^inf t^{nu-1} e^{-t^2/2 - z t} dt, nu > 0, Re z >= 0.
// The t^{nu-1} endpoint singularity is removed by substitution; the tail is
// extended in octaves until the Gaussian factor kills it.
std::complex<double> pcf_integral(double nu, std::complex<double> z);
double pcf_integral(double nu, double z);

struct TaylorCoeffs {
    std::vector<double> coeffs; // coeffs[i-1] = c_i, i = 1..order (c_0 = 1 excluded)
    double k1 = 0.0;
    double k2 = 0.0;
};

// Taylor coefficients of exp(-k1 x - k2 x^2):
// c_i = (-k1 c_{i-1} - 2 k2 c_{i-2}) / i with c_0 = 1.
TaylorCoeffs taylor_exp_quad(double k1, double k2, int order);

// P(X >= threshold) = 1/2 - (1/pi) int_0^inf Im[phi(w) e^{j w threshold}]/w dw
// with phi(w) = E[e^{-jwX}]. Truncation uses a quadratic (Riesz) window with
// the cutoff doubled until the estimate stabilizes, which also converges for
// non-decaying characteristic functions (point masses). Result clamped to [0,1].
double gil_pelaez_ccdf(const std::function<std::complex<double>(double)>& char_fn,
                       double threshold, const QuadratureSpec& quad = {});

} // namespace irsnet
