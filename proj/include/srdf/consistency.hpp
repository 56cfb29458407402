#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "srdf/errors.hpp"

namespace srdf {

/* Hard cap on cameras per group; keeps per-sample scratch on the stack. */
constexpr int kMaxGroupCameras = 256;

struct ConsistencyParams {
    double sigma_d = 0.01;      // squared-distance scale, world units^2
    double sigma_c = 0.02;      // squared-color scale
    double gamma_srdf = 0.05;   // occlusion floor for the SRDF product
    double gamma_phi = 0.05;    // occlusion floor for the photometric product

    void validate() const
    {
        if (!(sigma_d > 0.0))
            throw ConfigError("consistency: sigma_d must be > 0");
        if (!(sigma_c > 0.0))
            throw ConfigError("consistency: sigma_c must be > 0");
        if (!(gamma_srdf > 0.0 && gamma_srdf < 1.0))
            throw ConfigError("consistency: gamma_srdf must be in (0,1)");
        if (!(gamma_phi > 0.0 && gamma_phi < 1.0))
            throw ConfigError("consistency: gamma_phi must be in (0,1)");
    }
};

struct SrdfConsistency {
    double value = 0.0;
    int valid_count = 0;    // 0 => no visibility, sample must be dropped
};

/* SRDF agreement across one camera group:
 *
 *   value = prod_j ( exp(-s_j^2 / sigma_d) + Gamma )
 *
 * over valid cameras; a camera flagged invalid (occluded) contributes the
 * constant factor Gamma and a zero partial. When `partials` is non-empty
 * it receives d(value)/d(s_j) per camera. */
inline SrdfConsistency c_srdf(std::span<const double> srdf_values,
                              std::span<const std::uint8_t> valid,
                              const ConsistencyParams& params,
                              std::span<double> partials = {})
{
    const int n = static_cast<int>(srdf_values.size());
    assert(static_cast<int>(valid.size()) == n);
    assert(partials.empty() || static_cast<int>(partials.size()) == n);
    if (n > kMaxGroupCameras)
        throw ConfigError("consistency: camera group exceeds the supported size");

    double factor[kMaxGroupCameras];
    double dfactor[kMaxGroupCameras];
    SrdfConsistency out;
    out.value = 1.0;
    for (int j = 0; j < n; ++j) {
        if (valid[j]) {
            const double s = srdf_values[j];
            const double e = std::exp(-s * s / params.sigma_d);
            factor[j] = e + params.gamma_srdf;
            dfactor[j] = -2.0 * s / params.sigma_d * e;
            ++out.valid_count;
        } else {
            factor[j] = params.gamma_srdf;
            dfactor[j] = 0.0;
        }
        out.value *= factor[j];
    }
    if (out.valid_count == 0) {
        out.value = 0.0;
        if (!partials.empty())
            std::fill(partials.begin(), partials.end(), 0.0);
        return out;
    }

    if (!partials.empty()) {
        // prefix/suffix products avoid dividing by factors near zero
        double suffix[kMaxGroupCameras];
        double acc = 1.0;
        for (int j = n - 1; j >= 0; --j) {
            suffix[j] = acc;
            acc *= factor[j];
        }
        double prefix = 1.0;
        for (int j = 0; j < n; ++j) {
            partials[j] = valid[j] ? dfactor[j] * prefix * suffix[j] : 0.0;
            prefix *= factor[j];
        }
    }
    return out;
}

/* Channel-wise median. With an even count the lower middle element is
 * returned by default so the median stays an actually observed color;
 * `average_even` switches to the mean of the two middles. */
inline Eigen::Vector3d median_color(std::span<const Eigen::Vector3d> colors,
                                    bool average_even = false)
{
    const int n = static_cast<int>(colors.size());
    assert(n >= 1);
    if (n > kMaxGroupCameras)
        throw ConfigError("consistency: camera group exceeds the supported size");

    Eigen::Vector3d med;
    double channel[kMaxGroupCameras];
    for (int c = 0; c < 3; ++c) {
        for (int j = 0; j < n; ++j)
            channel[j] = colors[j][c];
        std::sort(channel, channel + n);
        if (n % 2 == 1)
            med[c] = channel[n / 2];
        else if (average_even)
            med[c] = 0.5 * (channel[n / 2 - 1] + channel[n / 2]);
        else
            med[c] = channel[(n - 1) / 2];
    }
    return med;
}

struct PhiConsistency {
    double value = 0.0;
    int valid_count = 0;
};

/* Median-deviation photo-consistency over one camera group:
 *
 *   value = prod_j ( exp(-||phi_j - median||^2 / sigma_c) + Gamma )
 *
 * over valid cameras, Gamma per occluded camera. Treated downstream as a
 * constant per-sample weight; it carries no derivative. */
inline PhiConsistency c_phi_baseline(std::span<const Eigen::Vector3d> colors,
                                     std::span<const std::uint8_t> valid,
                                     const ConsistencyParams& params,
                                     bool average_even = false)
{
    const int n = static_cast<int>(colors.size());
    assert(static_cast<int>(valid.size()) == n);
    if (n > kMaxGroupCameras)
        throw ConfigError("consistency: camera group exceeds the supported size");

    Eigen::Vector3d observed[kMaxGroupCameras];
    PhiConsistency out;
    for (int j = 0; j < n; ++j)
        if (valid[j])
            observed[out.valid_count++] = colors[j];
    if (out.valid_count == 0)
        return out;

    const Eigen::Vector3d med = median_color(
        std::span<const Eigen::Vector3d>(observed, out.valid_count),
        average_even);

    out.value = 1.0;
    for (int j = 0; j < n; ++j) {
        if (valid[j]) {
            const double d2 = (colors[j] - med).squaredNorm();
            out.value *= std::exp(-d2 / params.sigma_c) + params.gamma_phi;
        } else {
            out.value *= params.gamma_phi;
        }
    }
    return out;
}

/* Full per-sample record, mainly for diagnostics and tests; the energy
 * path works on flat arrays instead. */
struct PerSampleEvaluation {
    double c_srdf = 0.0;
    double c_phi = 0.0;
    std::vector<double> srdf_values;
    std::vector<std::uint8_t> valid;
    std::vector<double> d_c_srdf;   // partials w.r.t. each camera's SRDF
};

} // namespace srdf
