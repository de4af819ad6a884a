#include "irsnet/geometry.hpp"
#include "irsnet/util.hpp"

#include <cmath>

namespace irsnet {

void DeploymentParams::validate() const {
    if (!(lambda_B > 0.0)) throw DomainError("deployment: lambda_B must be > 0");
    if (M < 1) throw DomainError("deployment: M must be >= 1");
    if (!(R > 0.0)) throw DomainError("deployment: R must be > 0");
    if (!(H_B > H_R) || H_R < 0.0) throw DomainError("deployment: requires H_B > H_R >= 0");
}

namespace {

PlanarPoint uniform_disk_point(double R, RandomStream& rng) {
    double r = R * std::sqrt(rng.uniform());
    double theta = 2.0 * kPi * rng.uniform();
    return {r * std::cos(theta), r * std::sin(theta)};
}

} // namespace

std::vector<PlanarPoint> sample_ppp_disk(double lambda, double R, RandomStream& rng) {
    if (!(lambda > 0.0) || !(R > 0.0)) throw DomainError("sample_ppp_disk: lambda, R must be > 0");
    std::uint64_t n = rng.poisson(lambda * kPi * R * R);
    std::vector<PlanarPoint> pts;
    pts.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) pts.push_back(uniform_disk_point(R, rng));
    return pts;
}

std::vector<PlanarPoint> sample_bpp_disk(std::size_t M, double R, RandomStream& rng) {
    if (M < 1) throw DomainError("sample_bpp_disk: M must be >= 1");
    std::vector<PlanarPoint> pts;
    pts.reserve(M);
    for (std::size_t i = 0; i < M; ++i) pts.push_back(uniform_disk_point(R, rng));
    return pts;
}

double nearest_irs_pdf(double r, const DeploymentParams& p) {
    double r_max = std::sqrt(p.R * p.R + p.H_R * p.H_R);
    if (r < p.H_R || r > r_max) throw DomainError("nearest_irs_pdf: r outside support");
    double base = 1.0 - (r * r - p.H_R * p.H_R) / (p.R * p.R);
    double M = static_cast<double>(p.M);
    return 2.0 * M * r / (p.R * p.R) * std::pow(base, M - 1.0);
}

double nearest_irs_cdf_inv(double u, const DeploymentParams& p) {
    if (u < 0.0 || u >= 1.0) throw DomainError("nearest_irs_cdf_inv: u in [0, 1) required");
    double M = static_cast<double>(p.M);
    // F(r) = 1 - (1 - (r^2 - H_R^2)/R^2)^M
    double t = 1.0 - std::pow(1.0 - u, 1.0 / M);
    return std::sqrt(p.H_R * p.H_R + p.R * p.R * t);
}

double nearest_bs_pdf(double d, const DeploymentParams& p) {
    if (d < p.H_B) throw DomainError("nearest_bs_pdf: d below H_B");
    return 2.0 * kPi * p.lambda_B * d * std::exp(-kPi * p.lambda_B * (d * d - p.H_B * p.H_B));
}

double nearest_bs_cdf_inv(double u, const DeploymentParams& p) {
    if (u < 0.0 || u >= 1.0) throw DomainError("nearest_bs_cdf_inv: u in [0, 1) required");
    return std::sqrt(p.H_B * p.H_B - std::log1p(-u) / (kPi * p.lambda_B));
}

double midpoint_distance(double ell, const DeploymentParams& p) {
    if (ell < 0.0) throw DomainError("midpoint_distance: ell must be >= 0");
    double h = p.H_B - p.H_R;
    return std::sqrt(0.25 * ell * ell + h * h);
}

double horizontal_from_3d(double dist3d, double height) {
    double s = dist3d * dist3d - height * height;
    return s > 0.0 ? std::sqrt(s) : 0.0;
}

double moment_r_inv_alpha(int i, double alpha, const DeploymentParams& p, RMomentVariant variant,
                          double lmin) {
    double ia = i * alpha;
    if (i < 1 || !(ia > 2.0)) throw DomainError("moment_r_inv_alpha: requires i >= 1, i*alpha > 2");
    if (variant == RMomentVariant::verbatim) {
        // Closed form exactly as printed; see the corrected variant for the
        // normalization-consistent expression actually used by the pipeline.
        return -2.0 * std::pow(p.H_R * p.H_R + p.R * p.R, -1.0 - 0.5 * ia) / ((ia - 2.0) * p.R * p.R) +
               2.0 * std::pow(p.H_R, 2.0 - ia) / ((ia - 2.0) * p.R * p.R);
    }
    // E[(l^2 + H_R^2)^{-ia/2} | l > lmin] under the radial density 2l/R^2.
    double q = 0.5 * ia; // exponent on (l^2 + H_R^2); q > 1
    double lo = lmin * lmin + p.H_R * p.H_R;
    double hi = p.R * p.R + p.H_R * p.H_R;
    double num = (std::pow(lo, 1.0 - q) - std::pow(hi, 1.0 - q)) / ((q - 1.0) * p.R * p.R);
    double norm = 1.0 - lmin * lmin / (p.R * p.R);
    if (!(norm > 0.0)) throw DomainError("moment_r_inv_alpha: exclusion radius covers the disk");
    return num / norm;
}

double moment_r_inv_alpha_limit(int i, double alpha, const DeploymentParams& p) {
    double ia = i * alpha;
    if (i < 1 || !(ia > 2.0)) throw DomainError("moment_r_inv_alpha_limit: requires i*alpha > 2");
    return 2.0 * std::pow(p.H_R, 2.0 - ia) / ((ia - 2.0) * p.R * p.R);
}

} // namespace irsnet
