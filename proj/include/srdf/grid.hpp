#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace srdf {

/* Row-major 2D grid. */
template <typename T>
class Grid2 {
public:
    Grid2() = default;
    Grid2(int width, int height, T fill = T())
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * height, fill)
    {
        assert(width >= 0 && height >= 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return data_.empty(); }
    std::size_t size() const { return data_.size(); }

    bool contains(int x, int y) const
    {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    std::size_t index(int x, int y) const
    {
        assert(contains(x, y));
        return static_cast<std::size_t>(y) * width_ + x;
    }

    T& operator()(int x, int y) { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const { return data_[index(x, y)]; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    void fill(const T& value) { data_.assign(data_.size(), value); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    bool operator==(const Grid2& other) const
    {
        return width_ == other.width_ && height_ == other.height_
            && data_ == other.data_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using Image = Grid2<Eigen::Vector3d>;   // RGB in [0,1]
using Mask = Grid2<std::uint8_t>;       // 0 background, 255 foreground

/* Bit-level grid comparison; unlike operator== this treats equal NaN
 * payloads as equal, which determinism tests need for depth sentinels. */
inline bool bitwise_equal(const Grid2<double>& a, const Grid2<double>& b)
{
    if (a.width() != b.width() || a.height() != b.height())
        return false;
    return a.empty()
        || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

/* Per-pixel ray distances in world units. Background pixels hold an
 * explicit no-depth state (never 0 or infinity) so accidental reads are
 * loud: the sentinel is NaN and poisons anything computed from it. */
class DepthMap {
public:
    DepthMap() = default;
    DepthMap(int width, int height)
        : grid_(width, height, std::numeric_limits<double>::quiet_NaN()) {}

    int width() const { return grid_.width(); }
    int height() const { return grid_.height(); }
    bool empty() const { return grid_.empty(); }
    bool contains(int x, int y) const { return grid_.contains(x, y); }
    std::size_t index(int x, int y) const { return grid_.index(x, y); }

    bool has_depth(int x, int y) const { return std::isfinite(grid_(x, y)); }
    bool has_depth(std::size_t i) const { return std::isfinite(grid_[i]); }

    double at(int x, int y) const
    {
        assert(has_depth(x, y));
        return grid_(x, y);
    }
    double at(std::size_t i) const
    {
        assert(has_depth(i));
        return grid_[i];
    }

    /* Raw access; may return the NaN sentinel. */
    double raw(int x, int y) const { return grid_(x, y); }
    double raw(std::size_t i) const { return grid_[i]; }

    void set(int x, int y, double d)
    {
        assert(d > 0.0 && std::isfinite(d));
        grid_(x, y) = d;
    }
    void set(std::size_t i, double d)
    {
        assert(d > 0.0 && std::isfinite(d));
        grid_[i] = d;
    }

    void set_no_depth(int x, int y)
    {
        grid_(x, y) = std::numeric_limits<double>::quiet_NaN();
    }
    void set_no_depth(std::size_t i)
    {
        grid_[i] = std::numeric_limits<double>::quiet_NaN();
    }

    void clear() { grid_.fill(std::numeric_limits<double>::quiet_NaN()); }

    Grid2<double>& grid() { return grid_; }
    const Grid2<double>& grid() const { return grid_; }

private:
    Grid2<double> grid_;
};

} // namespace srdf
