#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pfsurf/error.hpp"

namespace pfsurf {

/// Uniform periodic grid over the unit cube [0,1)^3. Voxel (i,j,k) has its
/// centre at ((i+1/2)/nx, (j+1/2)/ny, (k+1/2)/nz); x is the fastest axis.
struct GridSpec {
    int nx = 0;
    int ny = 0;
    int nz = 0;

    GridSpec() = default;
    GridSpec(int nx_, int ny_, int nz_);
    static GridSpec cube(int n) { return GridSpec(n, n, n); }

    std::size_t size() const noexcept {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nz);
    }
    int count(int axis) const noexcept { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
    double spacing(int axis) const noexcept { return 1.0 / count(axis); }
    double voxel_volume() const noexcept { return 1.0 / static_cast<double>(size()); }

    std::size_t index(int i, int j, int k) const noexcept {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(nx) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(ny) * k);
    }
    std::array<int, 3> coords(std::size_t idx) const noexcept {
        const auto i = static_cast<int>(idx % nx);
        const auto rest = idx / nx;
        return {i, static_cast<int>(rest % ny), static_cast<int>(rest / ny)};
    }
    std::array<double, 3> center(int i, int j, int k) const noexcept {
        return {(i + 0.5) / nx, (j + 0.5) / ny, (k + 0.5) / nz};
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// One real value per voxel.
class ScalarField3D {
public:
    ScalarField3D() = default;
    explicit ScalarField3D(const GridSpec& spec, double fill = 0.0);
    ScalarField3D(const GridSpec& spec, std::vector<double> data);

    const GridSpec& spec() const noexcept { return spec_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }
    double& at(int i, int j, int k) noexcept { return data_[spec_.index(i, j, k)]; }
    double at(int i, int j, int k) const noexcept { return data_[spec_.index(i, j, k)]; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool all_finite() const noexcept;

private:
    GridSpec spec_;
    std::vector<double> data_;
};

/// Three components on one grid (w = grad u, and the ADMM multiplier).
struct VectorField3D {
    ScalarField3D x, y, z;

    VectorField3D() = default;
    explicit VectorField3D(const GridSpec& spec, double fill = 0.0)
        : x(spec, fill), y(spec, fill), z(spec, fill) {}
    VectorField3D(ScalarField3D x_, ScalarField3D y_, ScalarField3D z_);

    const GridSpec& spec() const noexcept { return x.spec(); }
    ScalarField3D& operator[](int axis) noexcept { return axis == 0 ? x : (axis == 1 ? y : z); }
    const ScalarField3D& operator[](int axis) const noexcept {
        return axis == 0 ? x : (axis == 1 ? y : z);
    }
};

/// Voxelised indicator of a set.
class BinaryVolume {
public:
    BinaryVolume() = default;
    explicit BinaryVolume(const GridSpec& spec, bool fill = false);
    BinaryVolume(const GridSpec& spec, std::vector<std::uint8_t> bits);

    const GridSpec& spec() const noexcept { return spec_; }
    std::size_t size() const noexcept { return bits_.size(); }

    bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
    bool at(int i, int j, int k) const noexcept { return bits_[spec_.index(i, j, k)] != 0; }
    void set(std::size_t i, bool v) noexcept { bits_[i] = v ? 1 : 0; }
    void set(int i, int j, int k, bool v) noexcept { bits_[spec_.index(i, j, k)] = v ? 1 : 0; }

    std::size_t count() const noexcept;
    bool empty_set() const noexcept { return count() == 0; }
    bool full_set() const noexcept { return count() == bits_.size(); }
    BinaryVolume complement() const;

    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    friend bool operator==(const BinaryVolume&, const BinaryVolume&) = default;

private:
    GridSpec spec_;
    std::vector<std::uint8_t> bits_;
};

/// In-plane binary mask of one slice; u is the fastest in-plane axis.
struct Mask2D {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    Mask2D() = default;
    Mask2D(int w, int h, bool fill = false)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

    std::size_t size() const noexcept { return bits.size(); }
    std::size_t index(int u, int v) const noexcept {
        return static_cast<std::size_t>(u) + static_cast<std::size_t>(width) * v;
    }
    bool at(int u, int v) const noexcept { return bits[index(u, v)] != 0; }
    void set(int u, int v, bool b) noexcept { bits[index(u, v)] = b ? 1 : 0; }
    std::size_t count() const noexcept;

    friend bool operator==(const Mask2D&, const Mask2D&) = default;
};

/// Real values over a slice plane, same layout as Mask2D.
struct Field2D {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double at(int u, int v) const noexcept {
        return values[static_cast<std::size_t>(u) + static_cast<std::size_t>(width) * v];
    }
};

void require_same_spec(const GridSpec& a, const GridSpec& b, const char* what);

ScalarField3D field_map(const ScalarField3D& f, const std::function<double(double)>& fn);

/// a*x + y, elementwise.
ScalarField3D field_axpy(double a, const ScalarField3D& x, const ScalarField3D& y);

struct FieldNorms {
    double l2 = 0.0;
    double linf = 0.0;
};

/// Voxel-volume weighted L2 norm and max norm.
FieldNorms norms(const ScalarField3D& f);

/// Voxel-volume weighted L2 inner product.
double inner(const ScalarField3D& a, const ScalarField3D& b);

}  // namespace pfsurf
