#pragma once

#include "spdelab/bounds.hpp"
#include "spdelab/model.hpp"
#include "spdelab/simulator.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spdelab {

struct OutputSpec {
    std::string dir = "out";
    bool csv = true;
    bool json = true;
};

struct SimulateSection {
    std::optional<double> fit_from;
    std::optional<double> fit_to;
    bool zero_noise = false;
    bool site_moments = false;
    bool snapshot = false;
    bool holder = false;
    double holder_t0 = 4.0;
    /// Solve the renewal equation alongside (linear sigma, constant u0 only).
    bool compare_renewal = true;
    double renewal_step = 0.02;
};

struct RenewalSection {
    double t_max = 100.0;
    double step = 0.02;
    /// Betas at which the mesh Laplace transform is checked against the
    /// closed form; empty picks three automatically.
    std::vector<double> check_betas;
};

/// A parsed and validated configuration file plus overrides.
struct RunConfig {
    explicit RunConfig(ModelSpec m) : model(std::move(m)) {}

    ModelSpec model;
    GridSpec grid;
    std::vector<int> p_list = {2, 4};
    std::vector<double> beta_list = {0.01, 0.1, 1.0, 10.0, 100.0};
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    OutputSpec output;
    SimulateSection simulate;
    RenewalSection renewal;
    std::optional<SublinearInputs> sublinear;
    std::string source;
};

/// Parses YAML text. `overrides` are "dotted.key=value" strings applied to
/// the document before validation; values are read as YAML scalars or flow
/// sequences. Errors are ConfigError prefixed with "source:line:".
///
/// Recognised layout:
///   generator: {type: brownian|stable|sum_stable, kappa, alpha, terms: [{kappa, alpha}]}
///   sigma:     {type: linear, lambda} | {type: clamp, slope, cap}
///              | {type: sine_shift, offset, amplitude}
///   u0:        {profile: constant|cosine, eta, upper}
///   grid:      {L, N, dt, T, M, output_every}
///   p_list, beta_list, seed, threads
///   output:    {dir, formats: [csv, json]}
///   simulate:  {fit_from, fit_to, zero_noise, site_moments, snapshot, holder,
///               holder_t0, compare_renewal, renewal_step}
///   renewal:   {t_max, step, check_betas}
///   sublinear: {A, q0, beta}
RunConfig parse_config(const std::string& text, const std::string& source,
                       const std::vector<std::string>& overrides = {});

/// Reads `path` and parses it. A missing file is a ConfigError.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace spdelab
