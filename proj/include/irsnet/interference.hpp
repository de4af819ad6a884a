#pragma once

#include "irsnet/channel.hpp"
#include "irsnet/scenario.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace irsnet {

struct NetworkRealization; // montecarlo module

// Per-BS aggregate IRS-interference statistics. Z_j = sum_m r_m^-a t_j^-a Y_m
// over the M_eff interfering IRSs with the common-distance approximation
// t_{m,j} ~ t_j. mu_base/var_base carry everything except the t_j factor:
// mu_Z = mu_base t_j^-a, var_Z = var_base t_j^-2a.
struct ZStats {
    double mu_Z = 0.0;
    double var_Z = 0.0;
    double M_eff = 0.0;
    double mu_base = 0.0;
    double var_base = 0.0;
    double EY = 0.0;   // E[Y] for one inner squared sum
    double EY2 = 0.0;  // E[Y^2]
    double Er_a = 0.0; // E[r^-alpha] over interfering IRS positions
    double Er_2a = 0.0;
    // composed exactly as printed in the source model, kept for reference;
    // the validated fields above use the linear-in-M_eff composition
    double mu_printed = 0.0;
    double var_printed = 0.0;
};

// aligned-phase (worst-case) inner sums: Y = (sum of N Rayleigh products)^2
ZStats z_stats(std::size_t M_eff, double t_j, double alpha, const NoncentralChiSqStats& nc,
               double er_a, double er_2a);
// random-phase inner sums: Y exponential with mean N E[x^2]
ZStats z_stats_random(std::size_t M_eff, double t_j, double alpha, std::size_t N, double sigma,
                      double er_a, double er_2a);

// Laplace transform of aggregate BS interference outside the exclusion
// radius d0, Rayleigh fading per interferer. alpha = 4 uses the arctan
// closed form, other alpha the 2F1 closed form.
double lt_bs_interference(double s, double d0, double lambda_B, double P_tx, double alpha,
                          double beta_gain);
double lt_bs_interference_general(double s, double d0, double lambda_B, double P_tx,
                                  double alpha, double beta_gain);
std::complex<double> lt_bs_interference(std::complex<double> s, double d0, double lambda_B,
                                        double P_tx, double alpha, double beta_gain);

double worst_case_ir_bound(const NetworkRealization& net);

// series/PGFL ingredients of the IRS-interference LT at a given s
struct IrLtParams {
    double k1 = 0.0; // s P beta^2 mu_base
    double k2 = 0.0; // (s P beta^2)^2 var_base / 2
    double X0 = 0.0; // (H_B - H_R)^-alpha, inner end of X(l)
    double XR = 0.0; // (R^2/4 + (H_B - H_R)^2)^-alpha/2, outer end
    int taylor_order = 20;
};

struct IrModeStats {
    ZStats z;        // at the reference midpoint distance t(l) = sqrt(l^2/4 + h^2), l = 0
    double P_tx;     // mode transmit power
    double lmin;     // horizontal exclusion radius applied to the r moments
};

// mode-resolved statistics: indirect excludes the serving IRS (M-1 terms,
// aligned phases, exclusion at the conditioned nearest-IRS ring), direct
// keeps all M IRSs with random phases and no exclusion
IrModeStats ir_mode_stats(LinkMode mode, const ScenarioConfig& sc, double irs_exclusion_lmin);

IrLtParams ir_lt_params(double s, LinkMode mode, const ScenarioConfig& sc,
                        double irs_exclusion_lmin = -1.0);

// Laplace transform of aggregate IRS interference over the BS process,
// damped per-BS Gaussian model exp(-k1 X - k2 X^2) expanded in a Taylor
// series over X = t^-alpha; falls back to direct PGFL quadrature when the
// series cancels catastrophically. irs_exclusion_lmin < 0 resolves to the
// conditioned nearest-IRS ring (indirect) or 0 (direct); bs_exclusion_l
// lifts the lower end of the PGFL integral (default 0, as printed).
double lt_irs_interference(double s, LinkMode mode, const ScenarioConfig& sc,
                           double irs_exclusion_lmin = -1.0, double bs_exclusion_l = 0.0);

// Characteristic-function variant on the imaginary axis: per-BS factor
// exp(-k1 X + k2 X^2) with the exact Gaussian sign, evaluated by quadrature.
std::complex<double> lt_irs_interference(std::complex<double> s, LinkMode mode,
                                         const ScenarioConfig& sc,
                                         double irs_exclusion_lmin = -1.0,
                                         double bs_exclusion_l = 0.0);

// mean of the damped-model aggregate, E[I_R] = 2 pi lambda_B P beta^2
// mu_base integral of X(l) l dl; used for sanity checks
double ir_mean(LinkMode mode, const ScenarioConfig& sc, double irs_exclusion_lmin = -1.0);

// Characteristic function E[exp(j w I)] of the aggregate IRS interference,
// tabulated over ln(w P beta^2) so inversion integrals pay one interpolation
// per evaluation instead of one PGFL quadrature. Outside the table the
// second-order expansion (small w) or the disk void limit (large w) applies.
class IrCfKernel {
  public:
    IrCfKernel(LinkMode mode, const ScenarioConfig& sc, double irs_exclusion_lmin = -1.0,
               double bs_exclusion_l = 0.0);
    std::complex<double> cf(double w) const; // E[exp(j w I)], any real w

    double mu_base() const { return mu_base_; }
    double var_base() const { return var_base_; }

  private:
    std::complex<double> exponent_at(double v) const; // T(v), v = |w| P beta^2

    double p_ = 0.0; // P_tx beta^2
    double lambda_ = 0.0;
    double alpha_ = 4.0;
    double mu_base_ = 0.0;
    double var_base_ = 0.0;
    double Xhi_ = 0.0;
    double XR_ = 0.0;
    double J1_ = 0.0; // weighted first X moment of the kernel
    double J2_ = 0.0;
    std::complex<double> T_inf_; // exponent past the damping cutoff
    double lv0_ = 0.0;
    double dlv_ = 0.0;
    std::vector<std::complex<double>> table_;
};

// process-wide cache keyed by the kernel's determining parameters
const IrCfKernel& ir_cf_kernel(LinkMode mode, const ScenarioConfig& sc,
                               double irs_exclusion_lmin = -1.0, double bs_exclusion_l = 0.0);

} // namespace irsnet
