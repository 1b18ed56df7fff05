#pragma once

// Independent oracles shared by the unit and acceptance suites. Nothing here
// calls the library's transforms: Fourier operators are applied with explicit
// dense DFT matrices.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "pfsurf/grid.hpp"

namespace testing_support {

using pfsurf::GridSpec;
using pfsurf::ScalarField3D;
using cd = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Signed frequency of index i on an axis of n samples: 0..floor(n/2), then negatives.
inline int signed_frequency(int i, int n) { return i <= n / 2 ? i : i - n; }

/// Frequency used by first derivatives: the even-n Nyquist mode has no real
/// derivative, so it is zeroed.
inline int derivative_frequency(int i, int n) {
    if (n % 2 == 0 && i == n / 2) return 0;
    return signed_frequency(i, n);
}

/// Dense DFT on a full 3D grid: F[k][x] = exp(-2 pi i k.x/n). Symbols are
/// functions of the integer index triple of the output mode.
class DenseFourier {
public:
    explicit DenseFourier(const GridSpec& g) : g_(g), n_(g.size()), f_(n_ * n_) {
        for (std::size_t k = 0; k < n_; ++k) {
            const auto kc = g_.coords(k);
            for (std::size_t x = 0; x < n_; ++x) {
                const auto xc = g_.coords(x);
                const double phase = -2.0 * kPi *
                                     (double(kc[0]) * xc[0] / g_.nx + double(kc[1]) * xc[1] / g_.ny +
                                      double(kc[2]) * xc[2] / g_.nz);
                f_[k * n_ + x] = cd(std::cos(phase), std::sin(phase));
            }
        }
    }

    using Symbol = std::function<cd(int, int, int)>;

    /// F^{-1} diag(symbol) F f, returned as its real part. `imag_out` gets the
    /// largest imaginary part seen.
    ScalarField3D apply(const ScalarField3D& f, const Symbol& symbol,
                        double* imag_out = nullptr) const {
        std::vector<cd> hat(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            cd s = 0.0;
            const cd* row = &f_[k * n_];
            for (std::size_t x = 0; x < n_; ++x) s += row[x] * f[x];
            const auto kc = g_.coords(k);
            hat[k] = s * symbol(kc[0], kc[1], kc[2]);
        }
        ScalarField3D out(g_);
        double imag = 0.0;
        for (std::size_t x = 0; x < n_; ++x) {
            cd s = 0.0;
            for (std::size_t k = 0; k < n_; ++k) s += std::conj(f_[k * n_ + x]) * hat[k];
            s /= double(n_);
            out[x] = s.real();
            imag = std::max(imag, std::abs(s.imag()));
        }
        if (imag_out) *imag_out = imag;
        return out;
    }

    /// |xi|^2 of an index triple.
    double k2(int i, int j, int k) const {
        const double a = signed_frequency(i, g_.nx), b = signed_frequency(j, g_.ny),
                     c = signed_frequency(k, g_.nz);
        return a * a + b * b + c * c;
    }

    ScalarField3D laplacian(const ScalarField3D& f) const {
        return apply(f, [&](int i, int j, int k) { return cd(-4.0 * kPi * kPi * k2(i, j, k)); });
    }

    ScalarField3D derivative(const ScalarField3D& f, int axis) const {
        return apply(f, [&](int i, int j, int k) {
            const int idx[3] = {i, j, k};
            const int xi = derivative_frequency(idx[axis], g_.count(axis));
            return cd(0.0, 2.0 * kPi * xi);
        });
    }

    /// Multiplier given as a function of |xi|^2.
    ScalarField3D radial(const ScalarField3D& f, const std::function<double(double)>& m) const {
        return apply(f, [&](int i, int j, int k) { return cd(m(k2(i, j, k))); });
    }

private:
    GridSpec g_;
    std::size_t n_;
    std::vector<cd> f_;
};

/// Uniform values in [lo, hi).
inline ScalarField3D random_field(const GridSpec& g, std::uint64_t seed, double lo = 0.0,
                                  double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    ScalarField3D f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = d(rng);
    return f;
}

/// Band-limited field: a constant plus a few random low-frequency cosines.
inline ScalarField3D smooth_random_field(const GridSpec& g, std::uint64_t seed, double offset = 0.5,
                                         double amp = 0.3, int max_freq = 2, int terms = 6) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> fk(-max_freq, max_freq);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi), am(-1.0, 1.0);
    struct Term {
        int a, b, c;
        double phase, amp;
    };
    std::vector<Term> t;
    for (int i = 0; i < terms; ++i) t.push_back({fk(rng), fk(rng), fk(rng), ph(rng), am(rng)});
    ScalarField3D f(g);
    for (int k = 0; k < g.nz; ++k) {
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const auto x = g.center(i, j, k);
                double v = offset;
                for (const auto& s : t) {
                    v += amp / terms * s.amp *
                         std::cos(2.0 * kPi * (s.a * x[0] + s.b * x[1] + s.c * x[2]) + s.phase);
                }
                f.at(i, j, k) = v;
            }
        }
    }
    return f;
}

inline double max_abs_diff(const ScalarField3D& a, const ScalarField3D& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const ScalarField3D& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

/// W and derivatives written out independently of the library.
inline double w0(double u) { return 0.5 * u * u * (1 - u) * (1 - u); }
inline double w1(double u) { return u * (u - 1) * (2 * u - 1); }
inline double w2(double u) { return 6 * u * u - 6 * u + 1; }

/// c_W = int_0^1 sqrt(2 W(s)) ds by composite Simpson with m panels.
inline double modica_mortola_constant(int m = 2000) {
    const double h = 1.0 / m;
    double s = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double x = i * h;
        const double f = std::sqrt(2.0 * w0(x));
        s += f * (i == 0 || i == m ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return s * h / 3.0;
}

/// Elementwise combination of fields.
inline ScalarField3D zip(const ScalarField3D& a, const ScalarField3D& b,
                         const std::function<double(double, double)>& fn) {
    ScalarField3D out(a.spec());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = fn(a[i], b[i]);
    return out;
}

inline ScalarField3D map(const ScalarField3D& a, const std::function<double(double)>& fn) {
    ScalarField3D out(a.spec());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = fn(a[i]);
    return out;
}

}  // namespace testing_support
