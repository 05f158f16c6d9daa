#include "spdelab/simulator.hpp"

#include "spdelab/bounds.hpp"
#include "spdelab/errors.hpp"
#include "spdelab/fit.hpp"
#include "spdelab/hermite.hpp"
#include "spdelab/rng.hpp"
#include "spdelab/upsilon.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <thread>

namespace spdelab {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 4 && (n & (n - 1)) == 0; }

unsigned resolve_threads(unsigned requested, std::size_t work) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work, 1)));
}

// Runs work(m) for m = 0..M-1 on `threads` workers. Each worker builds its own
// state with make_worker(). Errors are rethrown for the lowest failing path.
void parallel_paths(std::size_t M, unsigned threads,
                    const std::function<std::function<void(std::size_t)>()>& make_worker) {
    std::vector<std::exception_ptr> errors(M);
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        std::function<void(std::size_t)> work;
        try {
            work = make_worker();
        } catch (...) {
            const std::size_t m = next.fetch_add(M);
            if (m < M) errors[m] = std::current_exception();
            return;
        }
        for (std::size_t m; (m = next.fetch_add(1)) < M;) {
            try {
                work(m);
            } catch (...) {
                errors[m] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<std::size_t> output_steps(const GridSpec& grid) {
    const std::size_t n = grid.steps();
    const std::size_t stride = grid.output_stride();
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s <= n; s += stride) out.push_back(s);
    if (out.back() != n) out.push_back(n);
    return out;
}

double mean_abs_pow(std::span<const double> u, int p) {
    double acc = 0.0;
    for (double v : u) {
        const double a = std::abs(v);
        double r = 1.0;
        for (int i = 0; i < p; ++i) r *= a;
        acc += r;
    }
    return acc / static_cast<double>(u.size());
}

// Smallest xi with Re Psi(xi) >= level, by doubling then bisection.
double xi_at_level(const LevySymbol& sym, double level) {
    double lo = 0.0, hi = 1.0;
    while (sym.re_psi(hi) < level) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw ResolutionError("Re Psi does not reach the requested level");
    }
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (sym.re_psi(mid) < level ? lo : hi) = mid;
    }
    return hi;
}

std::string describe_run(const GridSpec& g, const ModelSpec& m) {
    std::ostringstream os;
    os << "ensemble " << m.sym.describe() << " sigma=" << m.sigma.describe() << " L=" << g.L << " N=" << g.N
       << " dt=" << g.dt << " T=" << g.T << " M=" << g.M << " seed=" << g.seed;
    return os.str();
}

}  // namespace

std::size_t GridSpec::steps() const {
    const double n = T / dt;
    const auto r = static_cast<std::size_t>(std::llround(n));
    if (std::abs(n - static_cast<double>(r)) > 1e-9 * std::max(1.0, n))
        throw ConfigError("grid.T must be a whole number of steps dt");
    return r;
}

std::size_t GridSpec::output_stride() const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(output_every / dt)));
}

void GridSpec::validate() const {
    if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("grid.L must be finite and > 0");
    if (!is_power_of_two(N)) throw ConfigError("grid.N must be a power of 2 and >= 4");
    if (!(dt > 0.0)) throw ConfigError("grid.dt must be > 0");
    if (!(T >= dt) || !std::isfinite(T)) throw ConfigError("grid.T must be finite and >= dt");
    if (M < 1) throw ConfigError("grid.M must be >= 1");
    if (!(output_every > 0.0)) throw ConfigError("grid.output_every must be > 0");
    steps();
}

std::vector<std::string> grid_warnings(const GridSpec& grid, const ModelSpec& model) {
    std::vector<std::string> out;
    try {
        const double g2 = gamma_p_upper_bound(model, 2);
        if (std::isfinite(g2) && g2 > 0.0 && grid.dt > 0.1 / g2) {
            std::ostringstream os;
            os << "dt=" << grid.dt << " exceeds 0.1 / gamma2 estimate (" << 0.1 / g2 << ")";
            out.push_back(os.str());
        }
    } catch (const Error&) {
        // No growth estimate for this model; nothing to compare dt with.
    }
    const StableTerm tail = model.sym.tail_power(1.0);
    const double spread = tail.alpha >= 2.0 ? 8.0 * std::sqrt(2.0 * tail.kappa * grid.T)
                                            : 8.0 * std::pow(tail.kappa * grid.T, 1.0 / tail.alpha);
    if (grid.L < spread) {
        std::ostringstream os;
        os << "L=" << grid.L << " is below the kernel spread 8 * width(T) = " << spread
           << "; wrap-around correlation may bias moments";
        out.push_back(os.str());
    }
    return out;
}

Field initial_field(const GridSpec& grid, const ModelSpec& model) {
    Field f;
    f.values.resize(grid.N);
    for (std::size_t i = 0; i < grid.N; ++i) f.values[i] = model.u0.at(static_cast<double>(i) * grid.dx(), grid.L);
    return f;
}

Stepper::Stepper(const GridSpec& grid, const ModelSpec& model)
    : model_(&model), dt_(grid.dt), scale_(std::sqrt(grid.dt / grid.dx())), fft_(grid.N) {
    const auto k = wave_numbers(grid.N, grid.L);
    multiplier_.resize(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) multiplier_[i] = std::exp(-grid.dt * model.sym.re_psi(k[i]));
}

void Stepper::advance(Field& state, std::span<const double> noise, std::size_t step_index) {
    advance_driven(state.values, state.values, noise, step_index);
    state.time += dt_;
}

void Stepper::advance_driven(std::span<double> w, std::span<const double> driver, std::span<const double> noise,
                             std::size_t step_index) {
    const std::size_t n = w.size();
    if (noise.size() != n || driver.size() != n) throw DomainError("step: noise/driver length differs from N");
    if (model_->sigma.is_linear()) {
        const double a = model_->sigma.lambda() * scale_;
        for (std::size_t i = 0; i < n; ++i) w[i] += a * driver[i] * noise[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) w[i] += model_->sigma(driver[i]) * noise[i] * scale_;
    }
    fft_.apply_multiplier(w, multiplier_);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(w[i])) {
            std::ostringstream os;
            os << "field became non-finite at step " << step_index << " (t=" << dt_ * (step_index + 1) << ")";
            throw BlowUpError(os.str(), step_index);
        }
    }
}

Field step(const Field& state, const GridSpec& grid, const ModelSpec& model, std::span<const double> noise,
           std::size_t step_index) {
    if (state.values.size() != grid.N) throw DomainError("step: field length differs from grid.N");
    Stepper st(grid, model);
    Field out = state;
    st.advance(out, noise, step_index);
    return out;
}

EnsembleResult run_ensemble(const GridSpec& grid, const ModelSpec& model, const EnsembleOptions& opts) {
    grid.validate();
    model.validate();
    if (opts.p_list.empty()) throw ConfigError("p_list must not be empty");
    for (int p : opts.p_list)
        if (p < 1) throw ConfigError("p_list entries must be >= 1");

    const std::size_t M = grid.M;
    const std::size_t N = grid.N;
    const std::size_t P = opts.p_list.size();
    const auto outs = output_steps(grid);
    const std::size_t n_out = outs.size();
    const std::size_t n_steps = grid.steps();

    // Per-path reductions, merged in path order afterwards.
    std::vector<double> path_moment(M * n_out * P, 0.0);
    std::vector<double> site_sq(opts.site_moments ? M * N : 0, 0.0);
    std::vector<std::size_t> negatives(M, 0);
    std::vector<char> blown(M, 0);
    std::vector<std::size_t> blown_step(M, 0);
    Field last0;

    const Field u0 = initial_field(grid, model);
    auto make_worker = [&]() -> std::function<void(std::size_t)> {
        auto st = std::make_shared<Stepper>(grid, model);
        auto noise = std::make_shared<std::vector<double>>(N, 0.0);
        return [&, st, noise](std::size_t m) {
            const NoiseStream stream(grid.seed, m);
            Field u = u0;
            std::size_t next_out = 0;
            auto record = [&](std::size_t o) {
                double* dst = &path_moment[(m * n_out + o) * P];
                for (std::size_t j = 0; j < P; ++j) dst[j] = mean_abs_pow(u.values, opts.p_list[j]);
                for (double v : u.values) negatives[m] += v < 0.0;
            };
            try {
                for (std::size_t s = 0; s <= n_steps; ++s) {
                    if (next_out < n_out && outs[next_out] == s) record(next_out++);
                    if (s == n_steps) break;
                    if (!opts.zero_noise) stream.fill(s, *noise);
                    st->advance(u, *noise, s);
                }
            } catch (const BlowUpError& e) {
                blown[m] = 1;
                blown_step[m] = e.step();
                return;
            }
            if (opts.site_moments)
                for (std::size_t i = 0; i < N; ++i) site_sq[m * N + i] = u.values[i] * u.values[i];
            if (m == 0) last0 = u;
        };
    };
    parallel_paths(M, resolve_threads(grid.threads, M), make_worker);

    EnsembleResult res;
    res.warnings = grid_warnings(grid, model);
    for (std::size_t m = 0; m < M; ++m) res.blown_paths += blown[m];
    if (res.blown_paths * 100 >= M) {
        std::size_t first = 0;
        while (!blown[first]) ++first;
        std::ostringstream os;
        os << "ensemble aborted: " << res.blown_paths << " of " << M << " paths blew up (path " << first
           << " at step " << blown_step[first] << "); lambda * sqrt(dt/dx) = "
           << model.sigma.lip() * std::sqrt(grid.dt / grid.dx());
        throw BlowUpError(os.str(), blown_step[first]);
    }
    if (res.blown_paths > 0) {
        res.warnings.push_back(std::to_string(res.blown_paths) + " path(s) blew up and were dropped");
    }
    const std::size_t kept = M - res.blown_paths;

    std::size_t neg_total = 0;
    for (std::size_t m = 0; m < M; ++m)
        if (!blown[m]) neg_total += negatives[m];
    res.negative_fraction = static_cast<double>(neg_total) / static_cast<double>(kept * n_out * N);

    const double fit_to = opts.fit_to.value_or(grid.T);
    const double fit_from = opts.fit_from.value_or(0.5 * grid.T);
    std::size_t fit_end = 0;
    for (std::size_t o = 0; o < n_out; ++o)
        if (static_cast<double>(outs[o]) * grid.dt <= fit_to + 1e-12) fit_end = o;

    const std::string meta = describe_run(grid, model);
    for (std::size_t j = 0; j < P; ++j) {
        MomentCurve c;
        c.p = opts.p_list[j];
        c.n_paths = kept;
        c.meta = meta;
        c.times.resize(n_out);
        c.moments.resize(n_out);
        c.std_error.resize(n_out);
        for (std::size_t o = 0; o < n_out; ++o) {
            double sum = 0.0;
            for (std::size_t m = 0; m < M; ++m)
                if (!blown[m]) sum += path_moment[(m * n_out + o) * P + j];
            const double mean = sum / static_cast<double>(kept);
            double ss = 0.0;
            for (std::size_t m = 0; m < M; ++m) {
                if (blown[m]) continue;
                const double d = path_moment[(m * n_out + o) * P + j] - mean;
                ss += d * d;
            }
            c.times[o] = static_cast<double>(outs[o]) * grid.dt;
            c.moments[o] = mean;
            c.std_error[o] = kept > 1 ? std::sqrt(ss / static_cast<double>(kept - 1) / static_cast<double>(kept)) : 0.0;
        }

        std::vector<double> at_end;
        at_end.reserve(kept);
        for (std::size_t m = 0; m < M; ++m)
            if (!blown[m]) at_end.push_back(path_moment[(m * n_out + fit_end) * P + j]);
        std::sort(at_end.begin(), at_end.end(), std::greater<>());
        double total = 0.0;
        for (double v : at_end) total += v;
        const std::size_t top = std::max<std::size_t>(1, (kept + 99) / 100);
        double top_sum = 0.0;
        for (std::size_t i = 0; i < top; ++i) top_sum += at_end[i];
        if (total > 0.0) c.tail_fraction = top_sum / total;

        if (c.tail_fraction && *c.tail_fraction > 0.5) {
            std::ostringstream os;
            os << "fit refused: top 1% of paths carry " << *c.tail_fraction << " of the moment at t=" << c.times[fit_end];
            c.fit_note = os.str();
        } else {
            try {
                c.fitted_gamma = fit_gamma(c, fit_from, fit_to);
            } catch (const DomainError& e) {
                c.fit_note = e.what();
            }
        }
        res.curves.push_back(std::move(c));
    }

    if (opts.site_moments) {
        SiteMoments sm;
        sm.mean.assign(N, 0.0);
        sm.std_error.assign(N, 0.0);
        for (std::size_t i = 0; i < N; ++i) {
            double sum = 0.0;
            for (std::size_t m = 0; m < M; ++m)
                if (!blown[m]) sum += site_sq[m * N + i];
            const double mean = sum / static_cast<double>(kept);
            double ss = 0.0;
            for (std::size_t m = 0; m < M; ++m) {
                if (blown[m]) continue;
                const double d = site_sq[m * N + i] - mean;
                ss += d * d;
            }
            sm.mean[i] = mean;
            sm.std_error[i] = kept > 1 ? std::sqrt(ss / static_cast<double>(kept - 1) / static_cast<double>(kept)) : 0.0;
        }
        res.sites = std::move(sm);
    }
    res.last_path0 = std::move(last0);
    return res;
}

MomentCurve discrete_second_moment(const GridSpec& grid, const ModelSpec& model) {
    grid.validate();
    if (!model.sigma.is_linear()) throw DomainError("discrete_second_moment needs linear sigma");
    if (!model.u0.is_constant()) throw DomainError("discrete_second_moment needs constant u0");
    const std::size_t N = grid.N;
    const double eta = model.u0.eta();
    const double a2 = model.sigma.lambda() * model.sigma.lambda() * grid.dt / grid.dx();
    const auto k = wave_numbers(N, grid.L);
    std::vector<double> damp(N);
    for (std::size_t i = 0; i < N; ++i) damp[i] = std::exp(-2.0 * grid.dt * model.sym.re_psi(k[std::min(i, N - i)]));

    std::vector<double> c(N, 0.0);
    c[0] = static_cast<double>(N) * eta * eta;
    double c0 = eta * eta;

    MomentCurve out;
    out.p = 2;
    out.meta = "discrete scheme " + model.sym.describe() + " L=" + std::to_string(grid.L) +
               " N=" + std::to_string(N) + " dt=" + std::to_string(grid.dt);
    const auto outs = output_steps(grid);
    std::size_t next_out = 0;
    const std::size_t n_steps = grid.steps();
    for (std::size_t s = 0; s <= n_steps; ++s) {
        if (next_out < outs.size() && outs[next_out] == s) {
            out.times.push_back(static_cast<double>(s) * grid.dt);
            out.moments.push_back(c0);
            out.std_error.push_back(0.0);
            ++next_out;
        }
        if (s == n_steps) break;
        const double inject = a2 * c0;
        double sum = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            c[i] = damp[i] * (c[i] + inject);
            sum += c[i];
        }
        c0 = sum / static_cast<double>(N);
    }
    return out;
}

PicardResult picard_diagnostic(const GridSpec& grid, const ModelSpec& model, double beta, int p, int n_iters) {
    grid.validate();
    model.validate();
    if (p < 2 || p % 2 != 0) throw DomainError("picard_diagnostic needs an even p >= 2");
    if (!(beta > 0.0)) throw DomainError("picard_diagnostic needs beta > 0");
    if (n_iters < 2) throw DomainError("picard_diagnostic needs n_iters >= 2");

    PicardResult res;
    res.beta = beta;
    res.p = p;
    const double zp = largest_hermite_zero(p);
    const double lip = model.sigma.lip();
    const UpsilonEvaluator ups(model.sym);
    const double load = zp * zp * lip * lip * ups(2.0 * beta / p);
    if (!(load < 1.0)) {
        std::ostringstream os;
        os << "picard_diagnostic: contraction condition z_p^2 Lip^2 Upsilon(2 beta/p) < 1 fails (value " << load
           << ")";
        throw DomainError(os.str());
    }
    res.contraction = std::sqrt(load);

    const std::size_t M = grid.M;
    const std::size_t N = grid.N;
    const std::size_t n_steps = grid.steps();
    const auto K = static_cast<std::size_t>(n_iters);
    // gap_path[(m * K + k) * (n_steps + 1) + s]: spatial mean of |v_{k+1} - v_k|^p at step s.
    std::vector<double> gap_path(M * K * (n_steps + 1), 0.0);
    const Field u0 = initial_field(grid, model);

    auto make_worker = [&]() -> std::function<void(std::size_t)> {
        auto st = std::make_shared<Stepper>(grid, model);
        return [&, st](std::size_t m) {
            const NoiseStream stream(grid.seed, m);
            std::vector<double> noise(N, 0.0);
            std::vector<double> zeros(N, 0.0);
            std::vector<double> prev((n_steps + 1) * N);
            std::vector<double> cur((n_steps + 1) * N);
            // v_0 = P_t u0.
            std::vector<double> w = u0.values;
            std::copy(w.begin(), w.end(), prev.begin());
            for (std::size_t s = 0; s < n_steps; ++s) {
                st->advance_driven(w, w, zeros, s);
                std::copy(w.begin(), w.end(), prev.begin() + (s + 1) * N);
            }
            for (std::size_t k = 0; k < K; ++k) {
                w = u0.values;
                std::copy(w.begin(), w.end(), cur.begin());
                for (std::size_t s = 0; s < n_steps; ++s) {
                    stream.fill(s, noise);
                    st->advance_driven(w, std::span<const double>(prev).subspan(s * N, N), noise, s);
                    std::copy(w.begin(), w.end(), cur.begin() + (s + 1) * N);
                }
                double* dst = &gap_path[(m * K + k) * (n_steps + 1)];
                std::vector<double> diff(N);
                for (std::size_t s = 0; s <= n_steps; ++s) {
                    for (std::size_t i = 0; i < N; ++i) diff[i] = cur[s * N + i] - prev[s * N + i];
                    dst[s] = mean_abs_pow(diff, p);
                }
                std::swap(prev, cur);
            }
        };
    };
    parallel_paths(M, resolve_threads(grid.threads, M), make_worker);

    for (std::size_t k = 0; k < K; ++k) {
        double best = -1.0, best_se = 0.0, best_mean = 0.0;
        for (std::size_t s = 0; s <= n_steps; ++s) {
            double sum = 0.0;
            for (std::size_t m = 0; m < M; ++m) sum += gap_path[(m * K + k) * (n_steps + 1) + s];
            const double mean = sum / static_cast<double>(M);
            const double weight = std::exp(-beta * static_cast<double>(s) * grid.dt);
            if (weight * mean > best) {
                double ss = 0.0;
                for (std::size_t m = 0; m < M; ++m) {
                    const double d = gap_path[(m * K + k) * (n_steps + 1) + s] - mean;
                    ss += d * d;
                }
                best = weight * mean;
                best_mean = mean;
                best_se = M > 1 ? std::sqrt(ss / static_cast<double>(M - 1) / static_cast<double>(M)) : 0.0;
            }
        }
        const double g = std::pow(std::max(best, 0.0), 1.0 / p);
        res.gaps.push_back(g);
        res.gap_stderr.push_back(best_mean > 0.0 ? g / p * best_se / best_mean : 0.0);
    }
    for (std::size_t k = 0; k + 1 < K; ++k) {
        const double g0 = res.gaps[k], g1 = res.gaps[k + 1];
        if (g0 == 0.0) {
            res.ratios.push_back(0.0);
            res.ratio_stderr.push_back(0.0);
            continue;
        }
        const double r = g1 / g0;
        const double rel0 = res.gap_stderr[k] / g0;
        const double rel1 = g1 > 0.0 ? res.gap_stderr[k + 1] / g1 : 0.0;
        res.ratios.push_back(r);
        res.ratio_stderr.push_back(r * std::sqrt(rel0 * rel0 + rel1 * rel1));
    }
    for (std::size_t k = 1; k < res.ratios.size(); ++k)
        if (res.ratios[k] > res.contraction + 3.0 * res.ratio_stderr[k]) res.flagged = true;
    return res;
}

const char* to_string(HolderDirection d) noexcept { return d == HolderDirection::Space ? "space" : "time"; }

HolderEstimate holder_estimate(const GridSpec& grid, const ModelSpec& model, HolderDirection direction,
                               const HolderOptions& opts) {
    grid.validate();
    model.validate();
    if (!model.u0.is_constant()) throw DomainError("holder_estimate needs constant u0");
    if (!(opts.t0 > 0.0)) throw ConfigError("holder t0 must be > 0");

    const std::size_t N = grid.N;
    const std::size_t M = grid.M;
    const double dx = grid.dx();
    // Lengths below the scheme's smoothing scale and above the kernel spread
    // at t0 do not show the local exponent.
    const double xi_dt = xi_at_level(model.sym, 1.0 / grid.dt);
    const double xi_t0 = xi_at_level(model.sym, 1.0 / opts.t0);
    const double xi_grid = std::numbers::pi / dx;

    std::vector<std::size_t> lag_units;  // lag in cells or in steps
    std::vector<double> lags;
    if (direction == HolderDirection::Space) {
        const double lo = 4.0 * std::max(1.0 / xi_dt, 1.0 / xi_grid);
        const double hi = std::min(0.5 / xi_t0, grid.L / 8.0);
        for (std::size_t c = 1; c < N / 2; c *= 2) {
            const double d = static_cast<double>(c) * dx;
            if (d >= lo && d <= hi) {
                lag_units.push_back(c);
                lags.push_back(d);
            }
        }
    } else {
        const double lo = 4.0 * std::max(grid.dt, 1.0 / model.sym.re_psi(xi_grid));
        const double hi = opts.t0 / 8.0;
        for (std::size_t c = 1; static_cast<double>(c) * grid.dt <= hi; c *= 2) {
            const double d = static_cast<double>(c) * grid.dt;
            if (d >= lo) {
                lag_units.push_back(c);
                lags.push_back(d);
            }
        }
    }
    if (lags.size() < 3) {
        std::ostringstream os;
        os << "holder_estimate (" << to_string(direction) << "): only " << lags.size()
           << " dyadic lag(s) between the smoothing scale and the kernel spread; refine dx/dt or raise t0";
        throw ResolutionError(os.str());
    }

    const auto burn = static_cast<std::size_t>(std::llround(opts.t0 / grid.dt));
    const std::size_t J = lags.size();
    std::vector<double> path_v(M * J, 0.0);
    const Field u0 = initial_field(grid, model);

    auto make_worker = [&]() -> std::function<void(std::size_t)> {
        auto st = std::make_shared<Stepper>(grid, model);
        return [&, st](std::size_t m) {
            const NoiseStream stream(grid.seed, m);
            std::vector<double> noise(N);
            Field u = u0;
            std::size_t s = 0;
            for (; s < burn; ++s) {
                stream.fill(s, noise);
                st->advance(u, noise, s);
            }
            double* dst = &path_v[m * J];
            if (direction == HolderDirection::Space) {
                for (std::size_t j = 0; j < J; ++j) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < N; ++i) {
                        const double d = u.values[(i + lag_units[j]) % N] - u.values[i];
                        acc += d * d;
                    }
                    dst[j] = acc / static_cast<double>(N);
                }
                return;
            }
            const std::vector<double> ref = u.values;
            std::size_t j = 0;
            for (std::size_t c = 1; j < J; ++c) {
                stream.fill(s, noise);
                st->advance(u, noise, s);
                ++s;
                if (c == lag_units[j]) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < N; ++i) {
                        const double d = u.values[i] - ref[i];
                        acc += d * d;
                    }
                    dst[j++] = acc / static_cast<double>(N);
                }
            }
        };
    };
    parallel_paths(M, resolve_threads(grid.threads, M), make_worker);

    HolderEstimate est;
    est.lags = lags;
    std::vector<double> x(J), y(J), sy(J);
    for (std::size_t j = 0; j < J; ++j) {
        double sum = 0.0;
        for (std::size_t m = 0; m < M; ++m) sum += path_v[m * J + j];
        const double mean = sum / static_cast<double>(M);
        double ss = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            const double d = path_v[m * J + j] - mean;
            ss += d * d;
        }
        const double se = M > 1 ? std::sqrt(ss / static_cast<double>(M - 1) / static_cast<double>(M)) : 0.0;
        if (!(mean > 0.0)) throw DomainError("holder_estimate: variogram vanished (no noise?)");
        est.variogram.push_back(mean);
        x[j] = std::log(lags[j]);
        y[j] = std::log(mean);
        sy[j] = se / mean;
    }
    const LinearFit f = ols(x, y);
    double xm = 0.0;
    for (double v : x) xm += v;
    xm /= static_cast<double>(J);
    double sxx = 0.0, stat = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        sxx += (x[j] - xm) * (x[j] - xm);
        stat += (x[j] - xm) * (x[j] - xm) * sy[j] * sy[j];
    }
    const double stat_se = std::sqrt(stat) / sxx;
    est.exponent = 0.5 * f.slope;
    est.std_error = 0.5 * std::sqrt(f.slope_stderr * f.slope_stderr + stat_se * stat_se);
    return est;
}

}  // namespace spdelab
