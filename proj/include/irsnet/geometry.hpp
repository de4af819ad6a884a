#pragma once

#include "irsnet/rng.hpp"
#include "irsnet/specfun.hpp"

#include <cstddef>
#include <vector>

namespace irsnet {

struct DeploymentParams {
    double lambda_B = 1e-4; // BS intensity per m^2
    std::size_t M = 1500;   // IRS count on the disk
    double R = 700.0;       // coverage radius, m
    double H_B = 20.0;      // BS height, m
    double H_R = 10.0;      // IRS height, m
    void validate() const;
};

struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
};

// Poisson point process on a disk of radius R; count ~ Poisson(lambda pi R^2).
std::vector<PlanarPoint> sample_ppp_disk(double lambda, double R, RandomStream& rng);

// Binomial point process: exactly M i.i.d. uniform points on the disk.
std::vector<PlanarPoint> sample_bpp_disk(std::size_t M, double R, RandomStream& rng);

// Nearest-IRS 3-D distance density on [H_R, sqrt(R^2 + H_R^2)]:
// f(r) = (2 M r / R^2) (1 - (r^2 - H_R^2)/R^2)^{M-1}.
double nearest_irs_pdf(double r, const DeploymentParams& params);
double nearest_irs_cdf_inv(double u, const DeploymentParams& params);

// Nearest-BS 3-D distance density on [H_B, inf):
// f(d) = 2 pi lambda_B d e^{-pi lambda_B (d^2 - H_B^2)}.
double nearest_bs_pdf(double d, const DeploymentParams& params);
double nearest_bs_cdf_inv(double u, const DeploymentParams& params);

// Reflector-to-BS distance under the midpoint rule: sqrt((l/2)^2 + (H_B - H_R)^2).
double midpoint_distance(double ell, const DeploymentParams& params);

// Horizontal distance recovered from a 3-D distance at the given height.
double horizontal_from_3d(double dist3d, double height);

enum class RMomentVariant {
    corrected, // true uniform-disk radial density 2l/R^2 (matches sampled moments)
    verbatim   // closed form exactly as printed, kept for comparison
};

// E[r^{-i alpha}] for a uniform-disk point at height H_R, optionally excluding
// the horizontal ball l < lmin (serving-reflector exclusion). Requires i*alpha > 2.
double moment_r_inv_alpha(int i, double alpha, const DeploymentParams& params,
                          RMomentVariant variant = RMomentVariant::corrected,
                          double lmin = 0.0);

// Large-R limit of the first closed-form term, exposed for the limit check.
double moment_r_inv_alpha_limit(int i, double alpha, const DeploymentParams& params);

} // namespace irsnet
