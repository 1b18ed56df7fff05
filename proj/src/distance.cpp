#include "pfsurf/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace pfsurf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform of a sampled function f under weight w:
// d(q) = min_p f(p) + w (q - p)^2. Infinite samples never enter the envelope.
void transform_line(std::span<const double> f, std::span<double> d, double w,
                    std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    v.resize(n);
    z.resize(n + 1);
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        const double fq = f[q] + w * q * q;
        double s = 0.0;
        while (k >= 0) {
            const int p = v[k];
            s = (fq - (f[p] + w * p * p)) / (2.0 * w * (q - p));
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = k == 0 ? -kInf : s;
        z[k + 1] = kInf;
    }
    if (k < 0) {
        std::fill(d.begin(), d.end(), kInf);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q) ++j;
        const double dq = q - v[j];
        d[q] = w * dq * dq + f[v[j]];
    }
}

}  // namespace

std::vector<double> squared_edt(std::span<const int> dims, std::span<const double> weights,
                                std::span<const std::uint8_t> mask) {
    std::size_t total = 1;
    for (int n : dims) total *= static_cast<std::size_t>(n);
    if (mask.size() != total) throw ShapeError("squared_edt: mask size does not match dims");
    if (std::none_of(mask.begin(), mask.end(), [](std::uint8_t b) { return b != 0; })) {
        throw AllFarError("distance transform of an empty set");
    }

    std::vector<double> dist(total);
    for (std::size_t i = 0; i < total; ++i) dist[i] = mask[i] ? 0.0 : kInf;

    std::size_t stride = 1;
    for (std::size_t axis = 0; axis < dims.size(); ++axis) {
        const auto n = static_cast<std::size_t>(dims[axis]);
        const std::size_t lines = total / n;
        const double w = weights[axis];
        const auto line_count = static_cast<std::int64_t>(lines);
#pragma omp parallel
        {
            std::vector<double> f(n), d(n), z;
            std::vector<int> v;
#pragma omp for schedule(static)
            for (std::int64_t line = 0; line < line_count; ++line) {
                // Line `line` enumerates all index combinations except `axis`.
                const std::size_t low = static_cast<std::size_t>(line) % stride;
                const std::size_t high = static_cast<std::size_t>(line) / stride;
                const std::size_t base = low + high * stride * n;
                for (std::size_t q = 0; q < n; ++q) f[q] = dist[base + q * stride];
                transform_line(f, d, w, v, z);
                for (std::size_t q = 0; q < n; ++q) dist[base + q * stride] = d[q];
            }
        }
        stride *= n;
    }
    return dist;
}

std::vector<double> squared_edt_voxels(const BinaryVolume& mask) {
    const auto& s = mask.spec();
    const int dims[3] = {s.nx, s.ny, s.nz};
    const double h0 = s.spacing(0);
    const double weights[3] = {1.0, std::pow(s.spacing(1) / h0, 2), std::pow(s.spacing(2) / h0, 2)};
    return squared_edt(dims, weights, mask.bits());
}

ScalarField3D edt_unsigned(const BinaryVolume& mask) {
    const auto d2 = squared_edt_voxels(mask);
    const double h0 = mask.spec().spacing(0);
    ScalarField3D out(mask.spec());
    for (std::size_t i = 0; i < d2.size(); ++i) out[i] = std::sqrt(d2[i]) * h0;
    return out;
}

Field2D edt_unsigned(const Mask2D& mask, double spacing_u, double spacing_v) {
    const int dims[2] = {mask.width, mask.height};
    const double weights[2] = {1.0, std::pow(spacing_v / spacing_u, 2)};
    const auto d2 = squared_edt(dims, weights, mask.bits);
    Field2D out{mask.width, mask.height, std::vector<double>(d2.size())};
    for (std::size_t i = 0; i < d2.size(); ++i) out.values[i] = std::sqrt(d2[i]) * spacing_u;
    return out;
}

namespace {

double interface_shift(double a, double b) { return 0.5 * std::min(a, b); }

double signed_from(double outside, double inside, double shift) {
    return std::max(outside - shift, 0.0) - std::max(inside - shift, 0.0);
}

}  // namespace

ScalarField3D signed_distance(const BinaryVolume& mask) {
    const auto& s = mask.spec();
    if (mask.full_set()) {
        return ScalarField3D(s, -std::sqrt(3.0));
    }
    const auto outside = edt_unsigned(mask);
    const auto inside = edt_unsigned(mask.complement());
    const double shift =
        0.5 * std::min({s.spacing(0), s.spacing(1), s.spacing(2)});
    ScalarField3D out(s);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = signed_from(outside[i], inside[i], shift);
    return out;
}

Field2D slice_signed_distance(const Mask2D& mask, double spacing_u, double spacing_v) {
    const auto total = mask.size();
    if (mask.count() == total) {
        const double diag = std::hypot(mask.width * spacing_u, mask.height * spacing_v);
        return Field2D{mask.width, mask.height, std::vector<double>(total, -diag)};
    }
    Mask2D comp(mask.width, mask.height);
    for (std::size_t i = 0; i < total; ++i) comp.bits[i] = mask.bits[i] ? 0 : 1;
    const auto outside = edt_unsigned(mask, spacing_u, spacing_v);
    const auto inside = edt_unsigned(comp, spacing_u, spacing_v);
    const double shift = interface_shift(spacing_u, spacing_v);
    Field2D out{mask.width, mask.height, std::vector<double>(total)};
    for (std::size_t i = 0; i < total; ++i) {
        out.values[i] = signed_from(outside.values[i], inside.values[i], shift);
    }
    return out;
}

}  // namespace pfsurf
