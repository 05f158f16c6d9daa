#include "spdelab/spectral.hpp"

#include "spdelab/errors.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>

namespace spdelab {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

PeriodicFft::PeriodicFft(std::size_t n) : n_(n) {
    if (n < 2 || n % 2 != 0) throw ConfigError("FFT size must be even and >= 2");
    real_ = fftw_alloc_real(n);
    auto* spec = fftw_alloc_complex(n / 2 + 1);
    spec_ = spec;
    // FFTW_ESTIMATE: the plan (and therefore the arithmetic) is a fixed
    // function of n, so results do not depend on timing measurements.
    std::lock_guard lock(planner_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real_, FFTW_ESTIMATE);
}

PeriodicFft::PeriodicFft(PeriodicFft&& other) noexcept
    : n_(other.n_), real_(other.real_), spec_(other.spec_), fwd_(other.fwd_), bwd_(other.bwd_) {
    other.real_ = nullptr;
    other.spec_ = nullptr;
    other.fwd_ = nullptr;
    other.bwd_ = nullptr;
}

PeriodicFft::~PeriodicFft() {
    std::lock_guard lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
    if (real_) fftw_free(real_);
    if (spec_) fftw_free(spec_);
}

void PeriodicFft::apply_multiplier(std::span<double> field, std::span<const double> multiplier) {
    if (field.size() != n_ || multiplier.size() != modes())
        throw DomainError("apply_multiplier: size mismatch");
    std::copy(field.begin(), field.end(), real_);
    fftw_execute(static_cast<fftw_plan>(fwd_));
    auto* spec = static_cast<fftw_complex*>(spec_);
    const double norm = 1.0 / static_cast<double>(n_);
    for (std::size_t k = 0; k < modes(); ++k) {
        const double m = multiplier[k] * norm;
        spec[k][0] *= m;
        spec[k][1] *= m;
    }
    fftw_execute(static_cast<fftw_plan>(bwd_));
    std::copy(real_, real_ + n_, field.begin());
}

std::vector<std::complex<double>> PeriodicFft::forward(std::span<const double> field) {
    if (field.size() != n_) throw DomainError("forward: size mismatch");
    std::copy(field.begin(), field.end(), real_);
    fftw_execute(static_cast<fftw_plan>(fwd_));
    auto* spec = static_cast<fftw_complex*>(spec_);
    std::vector<std::complex<double>> out(modes());
    for (std::size_t k = 0; k < modes(); ++k) out[k] = {spec[k][0], spec[k][1]};
    return out;
}

std::vector<double> PeriodicFft::inverse(std::span<const std::complex<double>> modes_in) {
    if (modes_in.size() != modes()) throw DomainError("inverse: size mismatch");
    auto* spec = static_cast<fftw_complex*>(spec_);
    for (std::size_t k = 0; k < modes(); ++k) {
        spec[k][0] = modes_in[k].real();
        spec[k][1] = modes_in[k].imag();
    }
    fftw_execute(static_cast<fftw_plan>(bwd_));
    std::vector<double> out(real_, real_ + n_);
    const double norm = 1.0 / static_cast<double>(n_);
    for (double& v : out) v *= norm;
    return out;
}

std::vector<double> wave_numbers(std::size_t n, double L) {
    std::vector<double> k(n / 2 + 1);
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / L;
    return k;
}

}  // namespace spdelab
