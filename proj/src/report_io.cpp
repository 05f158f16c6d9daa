#include "spdelab/report_io.hpp"

#include "spdelab/errors.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace spdelab {

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

Json int_map(const std::map<int, double>& m) {
    Json j = Json::object();
    for (const auto& [k, v] : m) j[std::to_string(k)] = number_to_json(v);
    return j;
}

std::map<int, double> int_map_from(const Json& j) {
    std::map<int, double> m;
    for (const auto& [k, v] : j.items()) m[std::stoi(k)] = number_from_json(v);
    return m;
}

Verdict verdict_from(const std::string& s) {
    if (s == "yes") return Verdict::Yes;
    if (s == "no") return Verdict::No;
    if (s == "unknown") return Verdict::Unknown;
    throw ConfigError("unknown verdict '" + s + "'");
}

template <class T>
Json optional_number(const std::optional<T>& v) {
    return v ? number_to_json(*v) : Json(nullptr);
}

std::optional<double> optional_from(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return number_from_json(j);
}

}  // namespace

Json number_to_json(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double number_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        if (s == "nan") return NAN;
    }
    throw ConfigError("expected a number or inf/-inf/nan, got " + j.dump());
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Json to_json(const MomentCurve& c) {
    Json j;
    j["p"] = c.p;
    j["n_paths"] = c.n_paths;
    j["meta"] = c.meta;
    Json times = Json::array(), moments = Json::array(), errs = Json::array();
    for (std::size_t i = 0; i < c.times.size(); ++i) {
        times.push_back(number_to_json(c.times[i]));
        moments.push_back(number_to_json(c.moments[i]));
        errs.push_back(number_to_json(c.std_error[i]));
    }
    j["times"] = std::move(times);
    j["moments"] = std::move(moments);
    j["stderr"] = std::move(errs);
    if (c.fitted_gamma) {
        j["fitted_gamma"] = {{"slope", number_to_json(c.fitted_gamma->slope)},
                             {"stderr", number_to_json(c.fitted_gamma->slope_stderr)},
                             {"t_from", number_to_json(c.fitted_gamma->t_from)},
                             {"t_to", number_to_json(c.fitted_gamma->t_to)}};
    } else {
        j["fitted_gamma"] = nullptr;
    }
    j["fit_note"] = c.fit_note;
    j["tail_fraction"] = optional_number(c.tail_fraction);
    return j;
}

MomentCurve moment_curve_from_json(const Json& j) {
    MomentCurve c;
    c.p = j.at("p").get<int>();
    c.n_paths = j.at("n_paths").get<std::size_t>();
    c.meta = j.at("meta").get<std::string>();
    for (const auto& v : j.at("times")) c.times.push_back(number_from_json(v));
    for (const auto& v : j.at("moments")) c.moments.push_back(number_from_json(v));
    for (const auto& v : j.at("stderr")) c.std_error.push_back(number_from_json(v));
    if (const auto& f = j.at("fitted_gamma"); !f.is_null()) {
        c.fitted_gamma = GammaFit{number_from_json(f.at("slope")), number_from_json(f.at("stderr")),
                                  number_from_json(f.at("t_from")), number_from_json(f.at("t_to"))};
    }
    c.fit_note = j.at("fit_note").get<std::string>();
    c.tail_fraction = optional_from(j.at("tail_fraction"));
    return c;
}

Json to_json(const BoundsReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "bounds_report";
    j["model"] = r.model;
    Json samples = Json::array();
    for (const auto& [b, u] : r.upsilon_samples) samples.push_back({{"beta", number_to_json(b)}, {"upsilon", number_to_json(u)}});
    j["upsilon_samples"] = std::move(samples);
    j["upsilon_sup"] = optional_number(r.upsilon_sup);
    j["gamma2_lower"] = {{"value", number_to_json(r.gamma2_lower.value)},
                         {"applicable", r.gamma2_lower.applicable},
                         {"note", r.gamma2_lower.note}};
    j["gamma_p_upper"] = int_map(r.gamma_p_upper);
    j["hermite_zeros"] = int_map(r.hermite_zeros);
    j["weakly_intermittent"] = {{"verdict", to_string(r.weakly_intermittent.verdict)},
                                {"reason", r.weakly_intermittent.reason}};
    j["recurrence"] = r.recurrence ? Json(to_string(*r.recurrence)) : Json(nullptr);
    j["local_times"] = r.local_times ? Json(*r.local_times) : Json(nullptr);
    j["delta_p"] = int_map(r.delta_p);
    j["sublinear_eta0"] = optional_number(r.sublinear_eta0);
    j["sublinear_eta0_prose"] = optional_number(r.sublinear_eta0_prose);
    j["exact_anderson"] = r.exact_anderson ? int_map(*r.exact_anderson) : Json(nullptr);
    j["holder_exponents"] = r.holder_exponents ? Json{{"temporal", number_to_json(r.holder_exponents->temporal)},
                                                      {"spatial", number_to_json(r.holder_exponents->spatial)}}
                                               : Json(nullptr);
    j["subdiffusive"] = r.subdiffusive;
    Json errs = Json::object();
    for (const auto& [k, v] : r.field_errors) errs[k] = v;
    j["field_errors"] = std::move(errs);
    return j;
}

BoundsReport bounds_report_from_json(const Json& j) {
    if (j.at("schema_version").get<int>() != kSchemaVersion)
        throw ConfigError("unsupported schema_version " + j.at("schema_version").dump());
    BoundsReport r;
    r.model = j.at("model").get<std::string>();
    for (const auto& s : j.at("upsilon_samples"))
        r.upsilon_samples.emplace_back(number_from_json(s.at("beta")), number_from_json(s.at("upsilon")));
    r.upsilon_sup = optional_from(j.at("upsilon_sup"));
    const auto& lb = j.at("gamma2_lower");
    r.gamma2_lower = {number_from_json(lb.at("value")), lb.at("applicable").get<bool>(), lb.at("note").get<std::string>()};
    r.gamma_p_upper = int_map_from(j.at("gamma_p_upper"));
    r.hermite_zeros = int_map_from(j.at("hermite_zeros"));
    r.weakly_intermittent = {verdict_from(j.at("weakly_intermittent").at("verdict").get<std::string>()),
                             j.at("weakly_intermittent").at("reason").get<std::string>()};
    if (const auto& rec = j.at("recurrence"); !rec.is_null())
        r.recurrence = rec.get<std::string>() == "recurrent" ? Recurrence::Recurrent : Recurrence::Transient;
    if (const auto& lt = j.at("local_times"); !lt.is_null()) r.local_times = lt.get<bool>();
    r.delta_p = int_map_from(j.at("delta_p"));
    r.sublinear_eta0 = optional_from(j.at("sublinear_eta0"));
    r.sublinear_eta0_prose = optional_from(j.at("sublinear_eta0_prose"));
    if (const auto& ea = j.at("exact_anderson"); !ea.is_null()) r.exact_anderson = int_map_from(ea);
    if (const auto& h = j.at("holder_exponents"); !h.is_null())
        r.holder_exponents = HolderExponents{number_from_json(h.at("temporal")), number_from_json(h.at("spatial"))};
    r.subdiffusive = j.at("subdiffusive").get<bool>();
    for (const auto& [k, v] : j.at("field_errors").items()) r.field_errors[k] = v.get<std::string>();
    return r;
}

std::string moments_csv(const std::vector<MomentCurve>& curves) {
    std::string out = "t,p,moment,stderr,n_paths\n";
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.times.size(); ++i) {
            out += format_double(c.times[i]) + ',' + std::to_string(c.p) + ',' + format_double(c.moments[i]) + ',' +
                   format_double(c.std_error[i]) + ',' + std::to_string(c.n_paths) + '\n';
        }
    }
    return out;
}

std::vector<MomentCurve> parse_moments_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "t,p,moment,stderr,n_paths")
        throw ConfigError("moments CSV: unexpected header '" + line + "'");
    std::vector<MomentCurve> curves;
    for (std::size_t row = 2; std::getline(in, line); ++row) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 5) throw ConfigError("moments CSV row " + std::to_string(row) + ": expected 5 columns");
        auto num = [&](const std::string& s) { return number_from_json(s == "inf" || s == "-inf" || s == "nan" ? Json(s) : Json(std::stod(s))); };
        const int p = std::stoi(cells[1]);
        if (curves.empty() || curves.back().p != p) {
            curves.emplace_back();
            curves.back().p = p;
            curves.back().n_paths = std::stoull(cells[4]);
        }
        curves.back().times.push_back(num(cells[0]));
        curves.back().moments.push_back(num(cells[2]));
        curves.back().std_error.push_back(num(cells[3]));
    }
    return curves;
}

std::string renewal_csv(const MomentCurve& c) {
    std::string out = "t,moment,stderr,meta\n";
    const std::string meta = csv_quote(c.meta);
    for (std::size_t i = 0; i < c.times.size(); ++i) {
        out += format_double(c.times[i]) + ',' + format_double(c.moments[i]) + ',' + format_double(c.std_error[i]) +
               ',' + meta + '\n';
    }
    return out;
}

std::string bounds_csv(const BoundsReport& r) {
    std::string out = "model,p,z_p,gamma_p_upper,gamma2_lower,exact_anderson,delta_p,weakly_intermittent\n";
    auto cell = [](const std::map<int, double>& m, int p) {
        const auto it = m.find(p);
        return it == m.end() ? std::string() : format_double(it->second);
    };
    for (const auto& [p, upper] : r.gamma_p_upper) {
        out += csv_quote(r.model) + ',' + std::to_string(p) + ',' + cell(r.hermite_zeros, p) + ',' + format_double(upper) +
               ',' + (r.gamma2_lower.applicable ? format_double(r.gamma2_lower.value) : std::string()) + ',' +
               (r.exact_anderson ? cell(*r.exact_anderson, p) : std::string()) + ',' + cell(r.delta_p, p) + ',' +
               to_string(r.weakly_intermittent.verdict) + '\n';
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw ConfigError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw ConfigError("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

void write_snapshot(const std::filesystem::path& dir, const std::string& stem, const Field& field,
                    const GridSpec& grid) {
    std::string bytes;
    bytes.reserve(field.values.size() * 8);
    for (double v : field.values) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
    }
    write_atomic(dir / (stem + ".bin"), bytes);
    Json side;
    side["schema_version"] = kSchemaVersion;
    side["kind"] = "field_snapshot";
    side["N"] = grid.N;
    side["L"] = number_to_json(grid.L);
    side["t"] = number_to_json(field.time);
    side["seed"] = grid.seed;
    side["encoding"] = "float64 little-endian";
    write_atomic(dir / (stem + ".json"), side.dump(2) + "\n");
}

}  // namespace spdelab
