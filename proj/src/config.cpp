#include "spdelab/config.hpp"

#include "spdelab/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace spdelab {

namespace {

class Reader {
public:
    Reader(std::string source, std::set<std::string> overridden)
        : source_(std::move(source)), overridden_(std::move(overridden)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& path, const std::string& msg) const {
        std::ostringstream os;
        if (overridden_.count(path)) {
            os << source_ << ": --set " << path << ": " << msg;
        } else if (node.IsDefined() && !node.Mark().is_null()) {
            os << source_ << ":" << node.Mark().line + 1 << ": " << (path.empty() ? "" : path + ": ") << msg;
        } else {
            os << source_ << ": " << (path.empty() ? "" : path + ": ") << msg;
        }
        throw ConfigError(os.str());
    }

    template <class T>
    T as(const YAML::Node& node, const std::string& path, const char* type_name) const {
        if (!node.IsScalar()) fail(node, path, std::string("expected ") + type_name);
        try {
            return node.as<T>();
        } catch (const YAML::Exception&) {
            fail(node, path, std::string("expected ") + type_name + ", got '" + node.Scalar() + "'");
        }
    }

    double number(const YAML::Node& table, const std::string& key, const std::string& prefix) const {
        const YAML::Node n = table[key];
        if (!n.IsDefined() || n.IsNull()) fail(table, prefix + "." + key, "missing required field `" + prefix + "." + key + "`");
        return as<double>(n, prefix + "." + key, "a number");
    }

    std::optional<double> opt_number(const YAML::Node& table, const std::string& key, const std::string& prefix) const {
        const YAML::Node n = table[key];
        if (!n.IsDefined() || n.IsNull()) return std::nullopt;
        return as<double>(n, prefix + "." + key, "a number");
    }

    long long integer(const YAML::Node& n, const std::string& path) const {
        return as<long long>(n, path, "an integer");
    }

    bool flag(const YAML::Node& table, const std::string& key, const std::string& prefix, bool dflt) const {
        const YAML::Node n = table[key];
        if (!n.IsDefined() || n.IsNull()) return dflt;
        return as<bool>(n, prefix + "." + key, "a boolean");
    }

    std::string text(const YAML::Node& table, const std::string& key, const std::string& prefix,
                     const std::string& dflt) const {
        const YAML::Node n = table[key];
        if (!n.IsDefined() || n.IsNull()) return dflt;
        return as<std::string>(n, prefix + "." + key, "a string");
    }

    YAML::Node table(const YAML::Node& root, const std::string& key, bool required) const {
        const YAML::Node n = root[key];
        if (!n.IsDefined() || n.IsNull()) {
            if (required) fail(root, key, "missing required table `" + key + "`");
            return YAML::Node(YAML::NodeType::Map);
        }
        if (!n.IsMap()) fail(n, key, "expected a table");
        return n;
    }

    void known(const YAML::Node& table, std::initializer_list<const char*> keys, const std::string& prefix) const {
        for (const auto& kv : table) {
            const auto k = kv.first.as<std::string>();
            bool ok = false;
            for (const char* allowed : keys) ok = ok || k == allowed;
            if (!ok) fail(kv.first, prefix.empty() ? k : prefix + "." + k, "unknown field");
        }
    }

    // Rethrows library validation errors with the location of `node`.
    template <class F>
    auto guarded(const YAML::Node& node, const std::string& path, F&& f) const {
        try {
            return f();
        } catch (const ConfigError& e) {
            fail(node, path, e.what());
        } catch (const DomainError& e) {
            fail(node, path, e.what());
        }
    }

private:
    std::string source_;
    std::set<std::string> overridden_;
};

void apply_override(YAML::Node& root, const std::string& spec, const std::string& source) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError(source + ": --set expects KEY=VALUE, got '" + spec + "'");
    const std::string path = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);
    std::vector<std::string> keys;
    std::stringstream ss(path);
    for (std::string k; std::getline(ss, k, '.');) {
        if (k.empty()) throw ConfigError(source + ": --set key '" + path + "' has an empty component");
        keys.push_back(k);
    }
    YAML::Node cur = root;
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
        YAML::Node next = cur[keys[i]];
        if (!next.IsDefined() || next.IsNull()) {
            cur[keys[i]] = YAML::Node(YAML::NodeType::Map);
            next.reset(cur[keys[i]]);
        } else if (!next.IsMap()) {
            throw ConfigError(source + ": --set " + path + ": `" + keys[i] + "` is not a table");
        }
        cur.reset(next);
    }
    YAML::Node parsed;
    try {
        parsed = YAML::Load(value);
    } catch (const YAML::Exception&) {
        throw ConfigError(source + ": --set " + path + ": cannot parse value '" + value + "'");
    }
    cur[keys.back()] = parsed;
}

LevySymbol read_generator(const Reader& r, const YAML::Node& g) {
    const std::string type = r.text(g, "type", "generator", "");
    if (type.empty()) r.fail(g, "generator.type", "missing required field `generator.type`");
    if (type == "brownian") {
        r.known(g, {"type", "kappa"}, "generator");
        const double kappa = r.number(g, "kappa", "generator");
        return r.guarded(g, "generator", [&] { return LevySymbol::brownian(kappa); });
    }
    if (type == "stable") {
        r.known(g, {"type", "kappa", "alpha"}, "generator");
        const double kappa = r.number(g, "kappa", "generator");
        const double alpha = r.number(g, "alpha", "generator");
        return r.guarded(g, "generator", [&] { return LevySymbol::stable(kappa, alpha); });
    }
    if (type == "sum_stable") {
        r.known(g, {"type", "terms"}, "generator");
        const YAML::Node terms = g["terms"];
        if (!terms.IsDefined() || !terms.IsSequence())
            r.fail(g, "generator.terms", "expected a list of {kappa, alpha} tables");
        std::vector<StableTerm> out;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string prefix = "generator.terms[" + std::to_string(i) + "]";
            const YAML::Node t = terms[i];
            if (!t.IsMap()) r.fail(t, prefix, "expected a table");
            r.known(t, {"kappa", "alpha"}, prefix);
            out.push_back({r.number(t, "kappa", prefix), r.number(t, "alpha", prefix)});
        }
        return r.guarded(g, "generator", [&] { return LevySymbol::sum_stable(out); });
    }
    r.fail(g["type"], "generator.type", "expected brownian, stable or sum_stable, got '" + type + "'");
}

Sigma read_sigma(const Reader& r, const YAML::Node& s) {
    const std::string type = r.text(s, "type", "sigma", "linear");
    if (type == "linear") {
        r.known(s, {"type", "lambda"}, "sigma");
        return LinearSigma{r.number(s, "lambda", "sigma")};
    }
    if (type == "clamp") {
        r.known(s, {"type", "slope", "cap"}, "sigma");
        const double slope = r.number(s, "slope", "sigma");
        const double cap = r.number(s, "cap", "sigma");
        return r.guarded(s, "sigma", [&] { return GeneralSigma::clamp(slope, cap); });
    }
    if (type == "sine_shift") {
        r.known(s, {"type", "offset", "amplitude"}, "sigma");
        const double offset = r.number(s, "offset", "sigma");
        const double amp = r.number(s, "amplitude", "sigma");
        return r.guarded(s, "sigma", [&] { return GeneralSigma::sine_shift(offset, amp); });
    }
    r.fail(s["type"], "sigma.type", "expected linear, clamp or sine_shift, got '" + type + "'");
}

InitialData read_u0(const Reader& r, const YAML::Node& u) {
    r.known(u, {"profile", "eta", "upper"}, "u0");
    InitialData d;
    d.profile = r.text(u, "profile", "u0", "constant");
    d.lower = r.opt_number(u, "eta", "u0").value_or(1.0);
    d.upper = r.opt_number(u, "upper", "u0").value_or(d.lower);
    return d;
}

GridSpec read_grid(const Reader& r, const YAML::Node& g) {
    r.known(g, {"L", "N", "dt", "T", "M", "output_every"}, "grid");
    GridSpec grid;
    grid.L = r.opt_number(g, "L", "grid").value_or(grid.L);
    grid.dt = r.opt_number(g, "dt", "grid").value_or(grid.dt);
    grid.T = r.opt_number(g, "T", "grid").value_or(grid.T);
    grid.output_every = r.opt_number(g, "output_every", "grid").value_or(grid.output_every);
    for (const char* key : {"N", "M"}) {
        const YAML::Node n = g[key];
        if (!n.IsDefined() || n.IsNull()) continue;
        const std::string path = std::string("grid.") + key;
        const long long v = r.integer(n, path);
        if (v < 1) r.fail(n, path, "must be >= 1");
        (key[0] == 'N' ? grid.N : grid.M) = static_cast<std::size_t>(v);
    }
    return grid;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source, const std::vector<std::string>& overrides) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream os;
        os << source << ":" << e.mark.line + 1 << ": YAML syntax error: " << e.msg;
        throw ConfigError(os.str());
    }
    if (!root.IsDefined() || root.IsNull()) root.reset(YAML::Node(YAML::NodeType::Map));
    if (!root.IsMap()) throw ConfigError(source + ": top level must be a table");

    std::set<std::string> overridden;
    for (const auto& o : overrides) {
        apply_override(root, o, source);
        overridden.insert(o.substr(0, o.find('=')));
    }
    const Reader r(source, overridden);
    r.known(root, {"generator", "sigma", "u0", "grid", "p_list", "beta_list", "seed", "threads", "output", "simulate",
                   "renewal", "sublinear"},
            "");

    const YAML::Node gen = r.table(root, "generator", true);
    const YAML::Node sig = r.table(root, "sigma", true);
    const YAML::Node u0 = r.table(root, "u0", false);
    RunConfig cfg(ModelSpec{read_generator(r, gen), read_sigma(r, sig), read_u0(r, u0)});
    r.guarded(sig, "model", [&] {
        cfg.model.validate();
        return 0;
    });
    cfg.source = source;

    const YAML::Node grid = r.table(root, "grid", false);
    cfg.grid = read_grid(r, grid);

    if (const YAML::Node pl = root["p_list"]; pl.IsDefined() && !pl.IsNull()) {
        if (!pl.IsSequence() || pl.size() == 0) r.fail(pl, "p_list", "expected a non-empty list of integers");
        cfg.p_list.clear();
        for (std::size_t i = 0; i < pl.size(); ++i) {
            const long long p = r.integer(pl[i], "p_list");
            if (p < 1 || p > 1000) r.fail(pl[i], "p_list", "entries must lie in [1, 1000]");
            cfg.p_list.push_back(static_cast<int>(p));
        }
    }
    if (const YAML::Node bl = root["beta_list"]; bl.IsDefined() && !bl.IsNull()) {
        if (!bl.IsSequence() || bl.size() == 0) r.fail(bl, "beta_list", "expected a non-empty list of numbers");
        cfg.beta_list.clear();
        for (std::size_t i = 0; i < bl.size(); ++i) {
            const double b = r.as<double>(bl[i], "beta_list", "a number");
            if (!(b > 0.0)) r.fail(bl[i], "beta_list", "entries must be > 0");
            cfg.beta_list.push_back(b);
        }
    }
    if (const YAML::Node s = root["seed"]; s.IsDefined() && !s.IsNull()) {
        cfg.seed = r.as<std::uint64_t>(s, "seed", "an unsigned 64-bit integer");
        if (!s.Scalar().empty() && s.Scalar()[0] == '-') r.fail(s, "seed", "must be >= 0");
    }
    if (const YAML::Node t = root["threads"]; t.IsDefined() && !t.IsNull()) {
        const long long n = r.integer(t, "threads");
        if (n < 0) r.fail(t, "threads", "must be >= 0");
        cfg.threads = static_cast<unsigned>(n);
    }

    const YAML::Node out = r.table(root, "output", false);
    r.known(out, {"dir", "formats"}, "output");
    cfg.output.dir = r.text(out, "dir", "output", cfg.output.dir);
    if (const YAML::Node f = out["formats"]; f.IsDefined() && !f.IsNull()) {
        if (!f.IsSequence()) r.fail(f, "output.formats", "expected a list drawn from [csv, json]");
        cfg.output.csv = cfg.output.json = false;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto v = r.as<std::string>(f[i], "output.formats", "a string");
            if (v == "csv") cfg.output.csv = true;
            else if (v == "json") cfg.output.json = true;
            else r.fail(f[i], "output.formats", "unknown format '" + v + "' (expected csv or json)");
        }
    }

    const YAML::Node sim = r.table(root, "simulate", false);
    r.known(sim, {"fit_from", "fit_to", "zero_noise", "site_moments", "snapshot", "holder", "holder_t0",
                  "compare_renewal", "renewal_step"},
            "simulate");
    auto& s = cfg.simulate;
    s.fit_from = r.opt_number(sim, "fit_from", "simulate");
    s.fit_to = r.opt_number(sim, "fit_to", "simulate");
    s.zero_noise = r.flag(sim, "zero_noise", "simulate", s.zero_noise);
    s.site_moments = r.flag(sim, "site_moments", "simulate", s.site_moments);
    s.snapshot = r.flag(sim, "snapshot", "simulate", s.snapshot);
    s.holder = r.flag(sim, "holder", "simulate", s.holder);
    s.holder_t0 = r.opt_number(sim, "holder_t0", "simulate").value_or(s.holder_t0);
    s.compare_renewal = r.flag(sim, "compare_renewal", "simulate", s.compare_renewal);
    s.renewal_step = r.opt_number(sim, "renewal_step", "simulate").value_or(s.renewal_step);
    if (s.fit_from && s.fit_to && !(*s.fit_from < *s.fit_to))
        r.fail(sim, "simulate.fit_from", "must be < simulate.fit_to");
    if (!(s.holder_t0 > 0.0)) r.fail(sim, "simulate.holder_t0", "must be > 0");
    if (!(s.renewal_step > 0.0)) r.fail(sim, "simulate.renewal_step", "must be > 0");

    const YAML::Node ren = r.table(root, "renewal", false);
    r.known(ren, {"t_max", "step", "check_betas"}, "renewal");
    cfg.renewal.t_max = r.opt_number(ren, "t_max", "renewal").value_or(cfg.renewal.t_max);
    cfg.renewal.step = r.opt_number(ren, "step", "renewal").value_or(cfg.renewal.step);
    if (!(cfg.renewal.step > 0.0)) r.fail(ren, "renewal.step", "must be > 0");
    if (!(cfg.renewal.t_max > cfg.renewal.step)) r.fail(ren, "renewal.t_max", "must exceed renewal.step");
    if (const YAML::Node cb = ren["check_betas"]; cb.IsDefined() && !cb.IsNull()) {
        if (!cb.IsSequence()) r.fail(cb, "renewal.check_betas", "expected a list of numbers");
        for (std::size_t i = 0; i < cb.size(); ++i)
            cfg.renewal.check_betas.push_back(r.as<double>(cb[i], "renewal.check_betas", "a number"));
    }

    if (const YAML::Node sl = root["sublinear"]; sl.IsDefined() && !sl.IsNull()) {
        if (!sl.IsMap()) r.fail(sl, "sublinear", "expected a table");
        r.known(sl, {"A", "q0", "beta"}, "sublinear");
        cfg.sublinear = SublinearInputs{r.number(sl, "A", "sublinear"), r.number(sl, "q0", "sublinear"),
                                        r.number(sl, "beta", "sublinear")};
    }

    r.guarded(grid, "grid", [&] {
        cfg.grid.validate();
        return 0;
    });
    cfg.grid.threads = cfg.threads;
    if (cfg.seed) cfg.grid.seed = *cfg.seed;
    return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path, overrides);
}

}  // namespace spdelab
