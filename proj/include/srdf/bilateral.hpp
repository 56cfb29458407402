#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "srdf/errors.hpp"
#include "srdf/grid.hpp"

namespace srdf {

/* Edge-preserving smoothing of a depth map: weights combine a spatial
 * Gaussian (in pixels) with a depth-range Gaussian (in world units) over
 * a mask-respecting window of half-width 3 x sigma_spatial. The range
 * weight is anchored on the window median rather than the center value,
 * so isolated outlier pixels are pulled back to the local surface instead
 * of preserving themselves as one-pixel edges. Background pixels are left
 * untouched. */
inline DepthMap bilateral_filter(const DepthMap& depth, const Mask& mask,
                                 double sigma_spatial_px,
                                 double sigma_range_world)
{
    if (!(sigma_spatial_px > 0.0) || !(sigma_range_world > 0.0))
        throw ConfigError("fusion: bilateral sigmas must be > 0");

    const int w = depth.width();
    const int h = depth.height();
    const int half = static_cast<int>(std::ceil(3.0 * sigma_spatial_px));
    const double inv_s2 = 1.0 / (2.0 * sigma_spatial_px * sigma_spatial_px);
    const double inv_r2 = 1.0 / (2.0 * sigma_range_world * sigma_range_world);

    DepthMap out(w, h);
    std::vector<double> window;
    window.reserve(static_cast<std::size_t>(2 * half + 1) * (2 * half + 1));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!mask(x, y))
                continue;

            window.clear();
            for (int dy = -half; dy <= half; ++dy)
                for (int dx = -half; dx <= half; ++dx) {
                    const int qx = x + dx;
                    const int qy = y + dy;
                    if (qx >= 0 && qx < w && qy >= 0 && qy < h
                        && mask(qx, qy))
                        window.push_back(depth.at(qx, qy));
                }
            const std::size_t mid = (window.size() - 1) / 2;
            std::nth_element(window.begin(), window.begin() + mid,
                             window.end());
            const double anchor = window[mid];

            double acc = 0.0;
            double norm = 0.0;
            for (int dy = -half; dy <= half; ++dy)
                for (int dx = -half; dx <= half; ++dx) {
                    const int qx = x + dx;
                    const int qy = y + dy;
                    if (qx < 0 || qx >= w || qy < 0 || qy >= h
                        || !mask(qx, qy))
                        continue;
                    const double d = depth.at(qx, qy);
                    const double diff = d - anchor;
                    const double weight =
                        std::exp(-(dx * dx + dy * dy) * inv_s2
                                 - diff * diff * inv_r2);
                    acc += weight * d;
                    norm += weight;
                }
            out.set(x, y, norm > 0.0 ? acc / norm : anchor);
        }
    return out;
}

} // namespace srdf
