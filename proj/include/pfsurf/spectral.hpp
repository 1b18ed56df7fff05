#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "pfsurf/grid.hpp"

namespace pfsurf {

using cplx = std::complex<double>;

/// Fourier multipliers known to the plan. Frequencies are in cycles per unit
/// length, so the Laplacian symbol is -4 pi^2 |xi|^2.
enum class SymbolKind {
    laplacian,       ///< -4 pi^2 |xi|^2
    pgdm_elastica,   ///< 1 / (1 + 4 tau eps pi^2 |xi|^2 + 16 tau eps pi^4 |xi|^4)
    pgdm_perimeter,  ///< 1 / (1 + 4 eps tau pi^2 |xi|^2)
    pgdm_willmore,   ///< 1 / (1 + 16 tau eps pi^4 |xi|^4)
    admm_u,          ///< 1 / (1 + 4 tau rho pi^2 |xi|^2)
    admm_w,          ///< 1 / (1 + eps tau + 4 eps tau pi^2 |xi|^2)
    admm_w_exact,    ///< 1 / (eps + rho + 4 eps pi^2 |xi|^2)
};

/// Evaluates a symbol at |xi|^2 = k2.
double symbol_value(SymbolKind kind, double k2, double eps, double tau, double rho);

/// Scratch buffers for one caller. Never share one between threads.
struct SpectralWorkspace {
    std::vector<cplx> spec_a, spec_b, spec_c;
    std::vector<double> real_a, real_b;
};

/// Real-to-complex 3D transforms on a periodic grid plus cached frequency and
/// symbol tables. Immutable after construction apart from the symbol cache,
/// which is internally synchronised; one plan may serve many threads.
class SpectralPlan {
public:
    explicit SpectralPlan(const GridSpec& spec);
    ~SpectralPlan();
    SpectralPlan(const SpectralPlan&) = delete;
    SpectralPlan& operator=(const SpectralPlan&) = delete;

    const GridSpec& spec() const noexcept { return spec_; }
    /// Number of complex coefficients in the half spectrum.
    std::size_t spectrum_size() const noexcept { return half_size_; }

    SpectralWorkspace make_workspace() const;

    /// Unnormalised forward transform.
    void forward(std::span<const double> in, std::span<cplx> out) const;
    /// Normalised inverse transform; `in` is used as scratch and destroyed.
    void inverse(std::span<cplx> in, std::span<double> out) const;
    /// Inverse without the 1/size factor (for symbols that already carry it).
    void inverse_unscaled(std::span<cplx> in, std::span<double> out) const;

    /// |xi|^2 per half-spectrum coefficient.
    const std::vector<double>& k_squared() const noexcept { return k2_; }
    /// 2 pi xi_axis per coefficient, zero on an even axis' Nyquist index.
    const std::vector<double>& derivative_symbol(int axis) const noexcept { return dk_[axis]; }

    /// Cached multiplier table for (kind, eps, tau, rho).
    std::shared_ptr<const std::vector<double>> symbol(SymbolKind kind, double eps = 0.0,
                                                      double tau = 0.0, double rho = 0.0) const;
    /// The same table divided by size(), to pair with inverse_unscaled.
    std::vector<double> normalized_symbol(SymbolKind kind, double eps = 0.0, double tau = 0.0,
                                          double rho = 0.0) const;

    /// Signed frequency of index i on an axis of n samples.
    static int frequency(int i, int n) noexcept { return i <= n / 2 ? i : i - n; }

private:
    GridSpec spec_;
    std::size_t half_size_ = 0;
    // [0] SIMD-aligned arrays, [1] anything else.
    void* forward_plan_[2] = {nullptr, nullptr};
    void* inverse_plan_[2] = {nullptr, nullptr};
    int plan_alignment_ = 0;
    int variant(const void* a, const void* b) const noexcept;
    std::vector<double> k2_;
    std::vector<double> dk_[3];

    using Key = std::tuple<int, double, double, double>;
    mutable std::mutex cache_mutex_;
    mutable std::map<Key, std::shared_ptr<const std::vector<double>>> cache_;
};

/// Multiplies the spectrum of f by `symbol` and transforms back.
ScalarField3D apply_symbol(const SpectralPlan& plan, const ScalarField3D& f,
                           std::span<const double> symbol);

ScalarField3D laplacian(const SpectralPlan& plan, const ScalarField3D& f);
VectorField3D gradient(const SpectralPlan& plan, const ScalarField3D& f);
ScalarField3D divergence(const SpectralPlan& plan, const VectorField3D& w);

/// (I - eps tau Lap + tau eps Lap^2)^{-1} f
ScalarField3D precondition_pgdm(const SpectralPlan& plan, const ScalarField3D& f, double eps,
                                double tau);
/// (I - tau rho Lap)^{-1} f
ScalarField3D precondition_admm_u(const SpectralPlan& plan, const ScalarField3D& f, double tau,
                                  double rho);
/// Componentwise (I + eps tau - eps tau Lap)^{-1} w
VectorField3D precondition_admm_w(const SpectralPlan& plan, const VectorField3D& w, double eps,
                                  double tau);

/// Operators whose real-space output must be real for real input.
enum class SpectralOperator { laplacian, gradient_x, gradient_y, gradient_z, pgdm_elastica };

/// Applies `op` with a full complex-to-complex transform and reports the largest
/// imaginary part left after the inverse (what the real transforms discard).
double imaginary_residue(const GridSpec& spec, const ScalarField3D& f, SpectralOperator op,
                         double eps = 0.1, double tau = 0.1);

}  // namespace pfsurf
