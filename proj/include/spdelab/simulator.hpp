#pragma once

#include "spdelab/model.hpp"
#include "spdelab/moment_curve.hpp"
#include "spdelab/spectral.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spdelab {

/// Periodic grid of N points on [0, L) stepped with dt up to T, for an
/// ensemble of M paths. Moments are recorded every `output_every` time units
/// (rounded to a whole number of steps).
struct GridSpec {
    double L = 64.0;
    std::size_t N = 512;
    double dt = 0.01;
    double T = 40.0;
    std::size_t M = 2000;
    std::uint64_t seed = 0;
    double output_every = 0.5;
    unsigned threads = 0;  // 0: hardware concurrency

    double dx() const noexcept { return L / static_cast<double>(N); }
    std::size_t steps() const;
    std::size_t output_stride() const;
    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

/// Non-fatal advice on a grid: dt against the growth time scale, and L
/// against the spread of the kernel by time T.
std::vector<std::string> grid_warnings(const GridSpec& grid, const ModelSpec& model);

struct Field {
    std::vector<double> values;
    double time = 0.0;
};

/// Samples u0 on the grid.
Field initial_field(const GridSpec& grid, const ModelSpec& model);

/// One exponential Euler step
///   u <- E_dt [u + sigma(u) xi sqrt(dt / dx)],
/// E_dt the Fourier multiplier exp(-dt Re Psi(2 pi k / L)). Space-time white
/// noise over a cell of area dt * dx has variance dt * dx; dividing by the
/// cell width dx gives the per-point variance dt / dx.
///
/// Holds its own FFT plan and buffers, so use one per thread.
class Stepper {
public:
    Stepper(const GridSpec& grid, const ModelSpec& model);

    /// Advances `state` by dt in place. `noise` holds N standard normals.
    /// Throws BlowUpError naming `step_index` on a non-finite result.
    void advance(Field& state, std::span<const double> noise, std::size_t step_index);

    /// Advances w by dt with the noise amplitude taken from `driver`
    /// instead of w: w <- E_dt [w + sigma(driver) xi sqrt(dt / dx)].
    void advance_driven(std::span<double> w, std::span<const double> driver, std::span<const double> noise,
                        std::size_t step_index);

    double noise_scale() const noexcept { return scale_; }

private:
    const ModelSpec* model_;
    double dt_;
    double scale_;
    PeriodicFft fft_;
    std::vector<double> multiplier_;
};

/// Stateless single step; builds a Stepper per call.
Field step(const Field& state, const GridSpec& grid, const ModelSpec& model, std::span<const double> noise,
           std::size_t step_index = 0);

struct EnsembleOptions {
    std::vector<int> p_list = {2};
    /// Fit window for the growth rate; defaults to [T/2, T].
    std::optional<double> fit_from;
    std::optional<double> fit_to;
    /// Forces every Gaussian draw to 0 (noiseless control).
    bool zero_noise = false;
    /// Record per-site second moments at time T.
    bool site_moments = false;
};

struct SiteMoments {
    std::vector<double> mean;
    std::vector<double> std_error;
};

struct EnsembleResult {
    std::vector<MomentCurve> curves;  // one per entry of p_list
    std::optional<SiteMoments> sites;
    /// Fraction of recorded (path, time, site) samples with u < 0.
    double negative_fraction = 0.0;
    /// Paths dropped after blowing up (fewer than 1% of M).
    std::size_t blown_paths = 0;
    std::vector<std::string> warnings;
    Field last_path0;  // path 0 at time T, for snapshots
};

/// Monte Carlo estimate of E|u(t, .)|^p. Path m draws its noise from the
/// counter-based stream keyed by (seed, m); each path is reduced to its
/// spatial average of |u|^p at every output time and the per-path values
/// are merged in path order, so results do not depend on the thread count.
/// Standard errors are the spread of the per-path spatial averages.
///
/// The fit is refused (fitted_gamma empty, fit_note set) when the top 1% of
/// paths carry more than half of the p-th moment at the end of the window.
/// Throws BlowUpError when 1% or more of the paths blow up.
EnsembleResult run_ensemble(const GridSpec& grid, const ModelSpec& model, const EnsembleOptions& opts = {});

/// Exact second moment of the discrete scheme for linear sigma and constant
/// u0, at the output times of `grid`. The covariance is diagonal in Fourier
/// space and evolves as
///   c_{n+1}(k) = exp(-2 dt Re Psi(k)) (c_n(k) + lambda^2 (dt/dx) C_n(0)),
/// C_n(0) = mean_k c_n(k). Its gap to the continuum second moment is the grid
/// bias of the ensemble estimate.
MomentCurve discrete_second_moment(const GridSpec& grid, const ModelSpec& model);

struct PicardResult {
    double beta = 0.0;
    int p = 2;
    /// z_p Lip sqrt(Upsilon(2 beta / p)).
    double contraction = 0.0;
    /// g_n = (sup_t e^{-beta t} E|v_{n+1} - v_n|^p)^{1/p}, n = 0, 1, ...
    std::vector<double> gaps;
    std::vector<double> gap_stderr;
    /// g_{n+1} / g_n and its delta-method standard error.
    std::vector<double> ratios;
    std::vector<double> ratio_stderr;
    /// Set when some ratio exceeds the contraction constant by more than
    /// three standard errors.
    bool flagged = false;
};

/// Picard iteration v_{n+1} = P u0 + A(sigma(v_n)) of the discrete mild
/// equation with one frozen noise realisation per path (the same counter
/// stream for every iterate). Needs z_p^2 Lip^2 Upsilon(2 beta / p) < 1.
PicardResult picard_diagnostic(const GridSpec& grid, const ModelSpec& model, double beta, int p, int n_iters);

enum class HolderDirection { Space, Time };

const char* to_string(HolderDirection d) noexcept;

struct HolderOptions {
    /// Burn-in time before the variogram is sampled.
    double t0 = 4.0;
};

struct HolderEstimate {
    double exponent = 0.0;
    double std_error = 0.0;
    std::vector<double> lags;
    std::vector<double> variogram;
};

/// Half the log-log slope of V(d) = E|u(t0, x + d) - u(t0, x)|^2 over dyadic
/// lags d (or of E|u(t0 + d, x) - u(t0, x)|^2 in time). Only lags between the
/// scheme's smoothing scale and the kernel spread at t0 are used; fewer than
/// three such lags is a ResolutionError.
HolderEstimate holder_estimate(const GridSpec& grid, const ModelSpec& model, HolderDirection direction,
                               const HolderOptions& opts = {});

}  // namespace spdelab
