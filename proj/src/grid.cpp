#include "pfsurf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pfsurf/kernels.hpp"

namespace pfsurf {

GridSpec::GridSpec(int nx_, int ny_, int nz_) : nx(nx_), ny(ny_), nz(nz_) {
    if (nx < 4 || ny < 4 || nz < 4) {
        throw ShapeError("grid counts must be >= 4, got " + std::to_string(nx) + "x" +
                         std::to_string(ny) + "x" + std::to_string(nz));
    }
}

ScalarField3D::ScalarField3D(const GridSpec& spec, double fill)
    : spec_(spec), data_(spec.size(), fill) {}

ScalarField3D::ScalarField3D(const GridSpec& spec, std::vector<double> data)
    : spec_(spec), data_(std::move(data)) {
    if (data_.size() != spec_.size()) {
        throw ShapeError("field data length " + std::to_string(data_.size()) +
                         " does not match grid size " + std::to_string(spec_.size()));
    }
}

bool ScalarField3D::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

VectorField3D::VectorField3D(ScalarField3D x_, ScalarField3D y_, ScalarField3D z_)
    : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {
    require_same_spec(x.spec(), y.spec(), "vector field components");
    require_same_spec(x.spec(), z.spec(), "vector field components");
}

BinaryVolume::BinaryVolume(const GridSpec& spec, bool fill)
    : spec_(spec), bits_(spec.size(), fill ? 1 : 0) {}

BinaryVolume::BinaryVolume(const GridSpec& spec, std::vector<std::uint8_t> bits)
    : spec_(spec), bits_(std::move(bits)) {
    if (bits_.size() != spec_.size()) {
        throw ShapeError("binary volume length does not match grid size");
    }
    for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryVolume::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryVolume BinaryVolume::complement() const {
    BinaryVolume out(spec_);
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] ? 0 : 1;
    return out;
}

std::size_t Mask2D::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

void require_same_spec(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) {
        throw ShapeError(std::string(what) + ": grid mismatch (" + std::to_string(a.nx) + "x" +
                         std::to_string(a.ny) + "x" + std::to_string(a.nz) + " vs " +
                         std::to_string(b.nx) + "x" + std::to_string(b.ny) + "x" +
                         std::to_string(b.nz) + ")");
    }
}

ScalarField3D field_map(const ScalarField3D& f, const std::function<double(double)>& fn) {
    ScalarField3D out(f.spec());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = fn(f[i]);
    return out;
}

ScalarField3D field_axpy(double a, const ScalarField3D& x, const ScalarField3D& y) {
    require_same_spec(x.spec(), y.spec(), "field_axpy");
    ScalarField3D out(x.spec());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + y[i];
    return out;
}

FieldNorms norms(const ScalarField3D& f) {
    return {std::sqrt(kernels::sum_sq(f.values()) * f.spec().voxel_volume()),
            kernels::max_abs(f.values())};
}

double inner(const ScalarField3D& a, const ScalarField3D& b) {
    require_same_spec(a.spec(), b.spec(), "inner");
    return kernels::sum_prod(a.values(), b.values()) * a.spec().voxel_volume();
}

}  // namespace pfsurf
