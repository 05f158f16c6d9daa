#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace spdelab {

/// Real-to-complex FFT pair on N periodic samples with owned, aligned
/// buffers. One instance per thread: execution touches only the instance's
/// buffers, plan creation is serialised internally.
class PeriodicFft {
public:
    explicit PeriodicFft(std::size_t n);
    ~PeriodicFft();
    PeriodicFft(const PeriodicFft&) = delete;
    PeriodicFft& operator=(const PeriodicFft&) = delete;
    PeriodicFft(PeriodicFft&& other) noexcept;
    PeriodicFft& operator=(PeriodicFft&&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::size_t modes() const noexcept { return n_ / 2 + 1; }

    /// Multiplies Fourier mode k (k = 0..N/2) of `field` by multiplier[k] in
    /// place. Multipliers must be real and even in k.
    void apply_multiplier(std::span<double> field, std::span<const double> multiplier);

    /// Unnormalised forward transform of `field` (N/2+1 modes).
    std::vector<std::complex<double>> forward(std::span<const double> field);

    /// Inverse of `forward`, including the 1/N normalisation.
    std::vector<double> inverse(std::span<const std::complex<double>> modes);

private:
    std::size_t n_;
    double* real_ = nullptr;
    void* spec_ = nullptr;  // fftw_complex*
    void* fwd_ = nullptr;   // fftw_plan
    void* bwd_ = nullptr;   // fftw_plan
};

/// Angular wave numbers 2 pi k / L for k = 0..N/2.
std::vector<double> wave_numbers(std::size_t n, double L);

}  // namespace spdelab
