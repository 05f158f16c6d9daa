#pragma once

#include "spdelab/config.hpp"
#include "spdelab/errors.hpp"
#include "spdelab/report_io.hpp"

#include <filesystem>
#include <vector>

namespace spdelab {

struct CommandResult {
    std::vector<std::filesystem::path> files;
    /// The main JSON document of the command (also written when json output
    /// is enabled).
    Json document;
};

/// Every analytic bound for the configured model: bounds.json, bounds.csv.
/// A generator without local times is a DomainError.
CommandResult cmd_bounds(const RunConfig& cfg);

/// Monte Carlo ensemble: moments.csv and summary.json, the latter holding
/// the fitted growth rates next to the analytic predictions and, for linear
/// sigma with constant u0, the renewal and discrete-scheme rates. Needs a
/// seed in cfg.seed.
CommandResult cmd_simulate(const RunConfig& cfg);

/// Second-moment renewal solve: renewal.csv and renewal.json (fit, Laplace
/// transform checks, divergence threshold). Linear sigma and constant u0 only.
CommandResult cmd_renewal(const RunConfig& cfg);

/// Recurrence, local times, sup Upsilon, smallness thresholds delta(p) and
/// the sublinear eta_0 when configured: classify.json.
CommandResult cmd_classify(const RunConfig& cfg);

/// {"schema_version", "kind": "error", "error": kind, "exit_code", "message"}
/// plus "step" for blow-ups.
Json error_to_json(const Error& e);

}  // namespace spdelab
