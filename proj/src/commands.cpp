#include "spdelab/commands.hpp"

#include "spdelab/bounds.hpp"
#include "spdelab/hermite.hpp"
#include "spdelab/renewal.hpp"
#include "spdelab/simulator.hpp"
#include "spdelab/upsilon.hpp"

#include <cmath>

namespace spdelab {

namespace fs = std::filesystem;

namespace {

void emit(CommandResult& res, const RunConfig& cfg, const std::string& name, const std::string& content) {
    const fs::path path = fs::path(cfg.output.dir) / name;
    write_atomic(path, content);
    res.files.push_back(path);
}

void emit_json(CommandResult& res, const RunConfig& cfg, const std::string& name) {
    if (cfg.output.json) emit(res, cfg, name, res.document.dump(2) + "\n");
}

Json model_json(const ModelSpec& m) {
    return {{"generator", m.sym.describe()},
            {"sigma", m.sigma.describe()},
            {"u0", {{"profile", m.u0.profile}, {"eta", number_to_json(m.u0.lower)}, {"upper", number_to_json(m.u0.upper)}}}};
}

Json grid_json(const GridSpec& g) {
    return {{"L", number_to_json(g.L)}, {"N", g.N},          {"dt", number_to_json(g.dt)},
            {"T", number_to_json(g.T)}, {"M", g.M},          {"output_every", number_to_json(g.output_every)},
            {"seed", g.seed}};
}

std::optional<double> exact_anderson_for(const ModelSpec& m, int p) {
    if (!m.sigma.is_linear() || m.sigma.lambda() == 0.0) return std::nullopt;
    const auto sp = m.sym.as_single_power();
    if (!sp || sp->alpha != 2.0 || p < 2) return std::nullopt;
    return exact_anderson_gamma(p, m.sigma.lambda(), sp->kappa);
}

bool renewal_applies(const ModelSpec& m) {
    return m.sigma.is_linear() && m.u0.is_constant() && m.u0.eta() > 0.0 && has_local_times(m.sym);
}

}  // namespace

CommandResult cmd_bounds(const RunConfig& cfg) {
    const ModelSpec& m = cfg.model;
    if (!has_local_times(m.sym))
        throw DomainError("generator admits no solution theory (Υ ≡ ∞): " + m.sym.describe() +
                          " has no local times");
    ReportOptions opts;
    opts.beta_samples = cfg.beta_list;
    opts.sublinear = cfg.sublinear;
    const BoundsReport rep = full_report(m, cfg.p_list, opts);

    CommandResult res;
    res.document = to_json(rep);
    emit_json(res, cfg, "bounds.json");
    if (cfg.output.csv) emit(res, cfg, "bounds.csv", bounds_csv(rep));
    return res;
}

CommandResult cmd_classify(const RunConfig& cfg) {
    const LevySymbol& sym = cfg.model.sym;
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "classification";
    j["generator"] = sym.describe();
    const Recurrence rec = classify_recurrence(sym);
    const bool lt = has_local_times(sym);
    j["recurrence"] = to_string(rec);
    j["local_times"] = lt;
    j["solution_theory"] = lt;
    j["upsilon_sup"] = lt ? number_to_json(UpsilonEvaluator(sym).sup()) : number_to_json(INFINITY);

    Json errors = Json::object();
    Json delta = Json::object();
    if (lt && rec == Recurrence::Transient) {
        for (int p : cfg.p_list) {
            if (p < 2 || p % 2 != 0) continue;
            try {
                delta[std::to_string(p)] = number_to_json(transient_smallness_threshold(sym, p));
            } catch (const Error& e) {
                errors["delta_p." + std::to_string(p)] = e.what();
            }
        }
    }
    j["delta_p"] = std::move(delta);

    j["sublinear_eta0"] = nullptr;
    if (cfg.sublinear && lt) {
        const auto& s = *cfg.sublinear;
        try {
            j["sublinear_eta0"] = number_to_json(sublinear_sufficient_eta(cfg.model, s.A, s.q0, s.beta));
        } catch (const Error& e) {
            errors["sublinear_eta0"] = e.what();
        }
    }
    j["subdiffusive"] = cfg.model.sigma.bound_sup().has_value();
    j["field_errors"] = std::move(errors);

    CommandResult res;
    res.document = std::move(j);
    emit_json(res, cfg, "classify.json");
    return res;
}

CommandResult cmd_renewal(const RunConfig& cfg) {
    const ModelSpec& m = cfg.model;
    if (!m.sigma.is_linear()) throw DomainError("renewal needs linear sigma");
    if (!m.u0.is_constant()) throw DomainError("renewal needs constant u0");
    const VolterraProblem prob{m.sym, m.sigma.lambda(), m.u0.eta(), cfg.renewal.t_max, cfg.renewal.step};
    const MomentCurve curve = solve_second_moment(prob);

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "renewal";
    j["model"] = model_json(m);
    j["curve"] = to_json(curve);

    const UpsilonEvaluator ups(m.sym);
    double flip = 0.0;
    if (prob.lambda != 0.0) {
        flip = ups.inverse(1.0 / (prob.lambda * prob.lambda));
        const double located = locate_divergence_flip(prob);
        j["divergence_flip"] = {{"located", number_to_json(located)},
                                {"upsilon_inverse", number_to_json(flip)},
                                {"difference", number_to_json(std::abs(located - flip))}};
    } else {
        j["divergence_flip"] = nullptr;
    }

    std::vector<double> betas = cfg.renewal.check_betas;
    if (betas.empty()) betas = flip > 0.0 ? std::vector<double>{2 * flip, 4 * flip, 8 * flip} : std::vector<double>{0.5, 1.0, 2.0};
    Json checks = Json::array();
    for (double b : betas) {
        const double closed = laplace_fixed_point(prob, b);
        Json c = {{"beta", number_to_json(b)}, {"closed_form", number_to_json(closed)}};
        const double rate = curve.fitted_gamma ? curve.fitted_gamma->slope : 0.0;
        if (std::isfinite(closed) && b > rate) {
            const double mesh = mesh_laplace_transform(curve, b);
            const double rel = std::abs(mesh - closed) / closed;
            c["mesh"] = number_to_json(mesh);
            c["relative_difference"] = number_to_json(rel);
            c["consistent"] = rel <= 0.01;
        } else {
            c["mesh"] = nullptr;
            c["relative_difference"] = nullptr;
            c["consistent"] = nullptr;
        }
        checks.push_back(std::move(c));
    }
    j["transform_checks"] = std::move(checks);
    if (prob.lambda != 0.0 && has_local_times(m.sym)) j["gamma2_analytic"] = number_to_json(flip);

    CommandResult res;
    res.document = std::move(j);
    if (cfg.output.csv) emit(res, cfg, "renewal.csv", renewal_csv(curve));
    emit_json(res, cfg, "renewal.json");
    return res;
}

CommandResult cmd_simulate(const RunConfig& cfg) {
    if (!cfg.seed) throw ConfigError("simulate needs a seed");
    GridSpec grid = cfg.grid;
    grid.seed = *cfg.seed;
    grid.threads = cfg.threads;
    const ModelSpec& m = cfg.model;

    EnsembleOptions eo;
    eo.p_list = cfg.p_list;
    eo.fit_from = cfg.simulate.fit_from;
    eo.fit_to = cfg.simulate.fit_to;
    eo.zero_noise = cfg.simulate.zero_noise;
    eo.site_moments = cfg.simulate.site_moments;
    const EnsembleResult ens = run_ensemble(grid, m, eo);

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "simulate_summary";
    j["seed"] = grid.seed;
    j["model"] = model_json(m);
    j["grid"] = grid_json(grid);

    std::optional<MomentCurve> renewal;
    std::optional<MomentCurve> discrete;
    const bool linear_homogeneous = renewal_applies(m) && m.sigma.lambda() != 0.0;
    if (linear_homogeneous && cfg.simulate.compare_renewal) {
        renewal = solve_second_moment({m.sym, m.sigma.lambda(), m.u0.eta(), grid.T, cfg.simulate.renewal_step});
        discrete = discrete_second_moment(grid, m);
        const double from = cfg.simulate.fit_from.value_or(0.5 * grid.T);
        const double to = cfg.simulate.fit_to.value_or(grid.T);
        try {
            discrete->fitted_gamma = fit_gamma(*discrete, from, to);
        } catch (const DomainError& e) {
            discrete->fit_note = e.what();
        }
    }

    Json comparisons = Json::array();
    for (const auto& c : ens.curves) {
        Json row;
        row["p"] = c.p;
        row["empirical_slope"] = c.fitted_gamma ? number_to_json(c.fitted_gamma->slope) : Json(nullptr);
        row["empirical_stderr"] = c.fitted_gamma ? number_to_json(c.fitted_gamma->slope_stderr) : Json(nullptr);
        row["fit_note"] = c.fit_note;
        row["tail_fraction"] = c.tail_fraction ? number_to_json(*c.tail_fraction) : Json(nullptr);
        Json upper = nullptr;
        if (c.p >= 2 && c.p % 2 == 0) {
            try {
                upper = number_to_json(gamma_p_upper_bound(m, c.p));
            } catch (const Error& e) {
                upper = std::string(e.what());
            }
        }
        row["analytic_upper"] = std::move(upper);
        const auto exact = exact_anderson_for(m, c.p);
        row["analytic_exact"] = exact ? number_to_json(*exact) : Json(nullptr);
        if (c.p == 2 && renewal && renewal->fitted_gamma) {
            row["renewal_slope"] = number_to_json(renewal->fitted_gamma->slope);
            row["discrete_scheme_slope"] =
                discrete->fitted_gamma ? number_to_json(discrete->fitted_gamma->slope) : Json(nullptr);
        }
        comparisons.push_back(std::move(row));
    }
    j["comparisons"] = std::move(comparisons);

    // Jensen: E|u|^4 >= (E|u|^2)^2 at every time when both are estimated.
    const MomentCurve* c2 = nullptr;
    const MomentCurve* c4 = nullptr;
    for (const auto& c : ens.curves) {
        if (c.p == 2) c2 = &c;
        if (c.p == 4) c4 = &c;
    }
    if (c2 && c4) {
        bool ok = true;
        for (std::size_t i = 0; i < c2->moments.size(); ++i)
            ok = ok && c4->moments[i] >= c2->moments[i] * c2->moments[i] * (1.0 - 1e-12);
        j["jensen_ordering_holds"] = ok;
    }

    if (ens.sites) {
        double grand = 0.0;
        for (double v : ens.sites->mean) grand += v;
        grand /= static_cast<double>(ens.sites->mean.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < ens.sites->mean.size(); ++i) {
            const double se = ens.sites->std_error[i];
            if (se > 0.0) worst = std::max(worst, std::abs(ens.sites->mean[i] - grand) / se);
        }
        j["site_homogeneity"] = {{"max_abs_z", number_to_json(worst)}, {"within_4_stderr", worst <= 4.0}};
    }

    j["negative_fraction"] = number_to_json(ens.negative_fraction);
    j["blown_paths"] = ens.blown_paths;
    j["warnings"] = ens.warnings;
    Json curves = Json::array();
    for (const auto& c : ens.curves) curves.push_back(to_json(c));
    j["curves"] = std::move(curves);
    if (renewal) j["renewal_curve"] = to_json(*renewal);
    if (discrete) j["discrete_scheme_curve"] = to_json(*discrete);

    if (cfg.simulate.holder) {
        HolderOptions ho;
        ho.t0 = cfg.simulate.holder_t0;
        Json h;
        for (auto dir : {HolderDirection::Space, HolderDirection::Time}) {
            try {
                const HolderEstimate est = holder_estimate(grid, m, dir, ho);
                Json lags = Json::array(), vg = Json::array();
                for (double v : est.lags) lags.push_back(number_to_json(v));
                for (double v : est.variogram) vg.push_back(number_to_json(v));
                h[to_string(dir)] = {{"exponent", number_to_json(est.exponent)},
                                     {"stderr", number_to_json(est.std_error)},
                                     {"lags", std::move(lags)},
                                     {"variogram", std::move(vg)}};
            } catch (const ResolutionError& e) {
                h[to_string(dir)] = {{"error", e.what()}};
            }
        }
        j["holder"] = std::move(h);
    }

    CommandResult res;
    res.document = std::move(j);
    if (cfg.output.csv) emit(res, cfg, "moments.csv", moments_csv(ens.curves));
    emit_json(res, cfg, "summary.json");
    if (cfg.simulate.snapshot) {
        write_snapshot(cfg.output.dir, "field_path0", ens.last_path0, grid);
        res.files.push_back(fs::path(cfg.output.dir) / "field_path0.bin");
        res.files.push_back(fs::path(cfg.output.dir) / "field_path0.json");
    }
    return res;
}

Json error_to_json(const Error& e) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "error";
    j["error"] = e.kind();
    j["exit_code"] = static_cast<int>(e.code());
    j["message"] = e.what();
    if (const auto* b = dynamic_cast<const BlowUpError*>(&e)) j["step"] = b->step();
    if (const auto* a = dynamic_cast<const AccuracyError*>(&e); a && a->achieved_error() >= 0.0)
        j["achieved_error"] = number_to_json(a->achieved_error());
    return j;
}

}  // namespace spdelab
