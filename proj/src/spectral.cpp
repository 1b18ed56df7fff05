#include "pfsurf/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pfsurf/kernels.hpp"

namespace pfsurf {
namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr double kPi = std::numbers::pi;

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

double symbol_value(SymbolKind kind, double k2, double eps, double tau, double rho) {
    const double pi2 = kPi * kPi;
    switch (kind) {
        case SymbolKind::laplacian: return -4.0 * pi2 * k2;
        case SymbolKind::pgdm_elastica:
            return 1.0 / (1.0 + 4.0 * tau * eps * pi2 * k2 + 16.0 * tau * eps * pi2 * pi2 * k2 * k2);
        case SymbolKind::pgdm_perimeter: return 1.0 / (1.0 + 4.0 * eps * tau * pi2 * k2);
        case SymbolKind::pgdm_willmore: return 1.0 / (1.0 + 16.0 * tau * eps * pi2 * pi2 * k2 * k2);
        case SymbolKind::admm_u: return 1.0 / (1.0 + 4.0 * tau * rho * pi2 * k2);
        case SymbolKind::admm_w: return 1.0 / (1.0 + eps * tau + 4.0 * eps * tau * pi2 * k2);
        case SymbolKind::admm_w_exact: return 1.0 / (eps + rho + 4.0 * eps * pi2 * k2);
    }
    return 0.0;
}

SpectralPlan::SpectralPlan(const GridSpec& spec) : spec_(spec) {
    const int nx = spec.nx, ny = spec.ny, nz = spec.nz;
    const int hx = nx / 2 + 1;
    half_size_ = static_cast<std::size_t>(hx) * ny * nz;

    {
        // Planned on SIMD-aligned scratch; arrays with a different alignment
        // fall back to the unaligned pair. FFTW_ESTIMATE keeps plan choice,
        // and so the results, independent of timing.
        std::lock_guard lock(planner_mutex());
        double* r = fftw_alloc_real(spec.size());
        fftw_complex* c = fftw_alloc_complex(half_size_);
        for (int a = 0; a < 2; ++a) {
            const unsigned flags = FFTW_ESTIMATE | (a == 1 ? FFTW_UNALIGNED : 0u);
            forward_plan_[a] = fftw_plan_dft_r2c_3d(nz, ny, nx, r, c, flags);
            inverse_plan_[a] = fftw_plan_dft_c2r_3d(nz, ny, nx, c, r, flags | FFTW_DESTROY_INPUT);
        }
        plan_alignment_ = fftw_alignment_of(r);
        fftw_free(r);
        fftw_free(c);
    }

    k2_.resize(half_size_);
    for (auto& d : dk_) d.resize(half_size_);
    std::size_t idx = 0;
    for (int k = 0; k < nz; ++k) {
        const int fz = frequency(k, nz);
        const bool nyq_z = nz % 2 == 0 && k == nz / 2;
        for (int j = 0; j < ny; ++j) {
            const int fy = frequency(j, ny);
            const bool nyq_y = ny % 2 == 0 && j == ny / 2;
            for (int i = 0; i < hx; ++i, ++idx) {
                const int fx = i;
                const bool nyq_x = nx % 2 == 0 && i == nx / 2;
                k2_[idx] = static_cast<double>(fx) * fx + static_cast<double>(fy) * fy +
                           static_cast<double>(fz) * fz;
                dk_[0][idx] = nyq_x ? 0.0 : 2.0 * kPi * fx;
                dk_[1][idx] = nyq_y ? 0.0 : 2.0 * kPi * fy;
                dk_[2][idx] = nyq_z ? 0.0 : 2.0 * kPi * fz;
            }
        }
    }
}

SpectralPlan::~SpectralPlan() {
    std::lock_guard lock(planner_mutex());
    for (int a = 0; a < 2; ++a) {
        if (forward_plan_[a]) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_[a]));
        if (inverse_plan_[a]) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_[a]));
    }
}

int SpectralPlan::variant(const void* a, const void* b) const noexcept {
    return fftw_alignment_of(static_cast<double*>(const_cast<void*>(a))) == plan_alignment_ &&
                   fftw_alignment_of(static_cast<double*>(const_cast<void*>(b))) == plan_alignment_
               ? 0
               : 1;
}

SpectralWorkspace SpectralPlan::make_workspace() const {
    SpectralWorkspace ws;
    ws.spec_a.resize(half_size_);
    ws.spec_b.resize(half_size_);
    ws.spec_c.resize(half_size_);
    ws.real_a.resize(spec_.size());
    ws.real_b.resize(spec_.size());
    return ws;
}

void SpectralPlan::forward(std::span<const double> in, std::span<cplx> out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_[variant(in.data(), out.data())]),
                         const_cast<double*>(in.data()), as_fftw(out.data()));
}

void SpectralPlan::inverse(std::span<cplx> in, std::span<double> out) const {
    inverse_unscaled(in, out);
    const double scale = 1.0 / static_cast<double>(spec_.size());
    for (double& v : out) v *= scale;
}

void SpectralPlan::inverse_unscaled(std::span<cplx> in, std::span<double> out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_[variant(in.data(), out.data())]),
                         as_fftw(in.data()), out.data());
}

std::vector<double> SpectralPlan::normalized_symbol(SymbolKind kind, double eps, double tau,
                                                    double rho) const {
    auto table = *symbol(kind, eps, tau, rho);
    const double scale = 1.0 / static_cast<double>(spec_.size());
    for (double& v : table) v *= scale;
    return table;
}

std::shared_ptr<const std::vector<double>> SpectralPlan::symbol(SymbolKind kind, double eps,
                                                                double tau, double rho) const {
    const Key key{static_cast<int>(kind), eps, tau, rho};
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    auto table = std::make_shared<std::vector<double>>(half_size_);
    for (std::size_t i = 0; i < half_size_; ++i) {
        (*table)[i] = symbol_value(kind, k2_[i], eps, tau, rho);
    }
    cache_.emplace(key, table);
    return table;
}

ScalarField3D apply_symbol(const SpectralPlan& plan, const ScalarField3D& f,
                           std::span<const double> symbol) {
    require_same_spec(plan.spec(), f.spec(), "apply_symbol");
    std::vector<cplx> spec(plan.spectrum_size());
    plan.forward(f.values(), spec);
    kernels::scale_spectrum(spec, symbol);
    ScalarField3D out(f.spec());
    plan.inverse(spec, out.values());
    return out;
}

ScalarField3D laplacian(const SpectralPlan& plan, const ScalarField3D& f) {
    return apply_symbol(plan, f, *plan.symbol(SymbolKind::laplacian));
}

VectorField3D gradient(const SpectralPlan& plan, const ScalarField3D& f) {
    require_same_spec(plan.spec(), f.spec(), "gradient");
    std::vector<cplx> spec(plan.spectrum_size());
    std::vector<cplx> tmp(plan.spectrum_size());
    plan.forward(f.values(), spec);
    VectorField3D out(f.spec());
    for (int a = 0; a < 3; ++a) {
        const auto& dk = plan.derivative_symbol(a);
        for (std::size_t i = 0; i < spec.size(); ++i) tmp[i] = cplx(0.0, dk[i]) * spec[i];
        plan.inverse(tmp, out[a].values());
    }
    return out;
}

ScalarField3D divergence(const SpectralPlan& plan, const VectorField3D& w) {
    require_same_spec(plan.spec(), w.spec(), "divergence");
    std::vector<cplx> acc(plan.spectrum_size(), cplx(0.0, 0.0));
    std::vector<cplx> tmp(plan.spectrum_size());
    for (int a = 0; a < 3; ++a) {
        plan.forward(w[a].values(), tmp);
        const auto& dk = plan.derivative_symbol(a);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += cplx(0.0, dk[i]) * tmp[i];
    }
    ScalarField3D out(w.spec());
    plan.inverse(acc, out.values());
    return out;
}

ScalarField3D precondition_pgdm(const SpectralPlan& plan, const ScalarField3D& f, double eps,
                                double tau) {
    return apply_symbol(plan, f, *plan.symbol(SymbolKind::pgdm_elastica, eps, tau));
}

ScalarField3D precondition_admm_u(const SpectralPlan& plan, const ScalarField3D& f, double tau,
                                  double rho) {
    return apply_symbol(plan, f, *plan.symbol(SymbolKind::admm_u, 0.0, tau, rho));
}

VectorField3D precondition_admm_w(const SpectralPlan& plan, const VectorField3D& w, double eps,
                                  double tau) {
    const auto sym = plan.symbol(SymbolKind::admm_w, eps, tau);
    return VectorField3D(apply_symbol(plan, w.x, *sym), apply_symbol(plan, w.y, *sym),
                         apply_symbol(plan, w.z, *sym));
}

double imaginary_residue(const GridSpec& spec, const ScalarField3D& f, SpectralOperator op,
                         double eps, double tau) {
    const int nx = spec.nx, ny = spec.ny, nz = spec.nz;
    const std::size_t n = spec.size();
    std::vector<cplx> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = cplx(f[i], 0.0);
    fftw_plan fwd, bwd;
    {
        std::lock_guard lock(planner_mutex());
        fwd = fftw_plan_dft_3d(nz, ny, nx, as_fftw(buf.data()), as_fftw(buf.data()), FFTW_FORWARD,
                               FFTW_ESTIMATE);
        bwd = fftw_plan_dft_3d(nz, ny, nx, as_fftw(buf.data()), as_fftw(buf.data()),
                               FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    std::size_t idx = 0;
    for (int k = 0; k < nz; ++k) {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i, ++idx) {
                const int f3[3] = {SpectralPlan::frequency(i, nx), SpectralPlan::frequency(j, ny),
                                   SpectralPlan::frequency(k, nz)};
                const bool nyq[3] = {nx % 2 == 0 && i == nx / 2, ny % 2 == 0 && j == ny / 2,
                                     nz % 2 == 0 && k == nz / 2};
                const double k2 = double(f3[0]) * f3[0] + double(f3[1]) * f3[1] +
                                  double(f3[2]) * f3[2];
                cplx m;
                switch (op) {
                    case SpectralOperator::laplacian:
                        m = symbol_value(SymbolKind::laplacian, k2, 0, 0, 0);
                        break;
                    case SpectralOperator::pgdm_elastica:
                        m = symbol_value(SymbolKind::pgdm_elastica, k2, eps, tau, 0);
                        break;
                    default: {
                        const int a = static_cast<int>(op) - static_cast<int>(SpectralOperator::gradient_x);
                        m = cplx(0.0, nyq[a] ? 0.0 : 2.0 * kPi * f3[a]);
                    }
                }
                buf[idx] *= m;
            }
        }
    }
    fftw_execute(bwd);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    double worst = 0.0;
    for (const auto& c : buf) worst = std::max(worst, std::abs(c.imag()) / static_cast<double>(n));
    return worst;
}

}  // namespace pfsurf
